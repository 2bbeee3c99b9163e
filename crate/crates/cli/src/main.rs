fn main() {
    std::process::exit(hyperjac_cli::main_with_args(std::env::args_os()));
}

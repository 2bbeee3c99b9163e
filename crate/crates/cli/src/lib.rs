//! Command-line front end for the hyperjac verification suite.

pub mod checks;
pub mod report;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use hyperjac::group_enum::{ClosureLimits, DEFAULT_MAX_ELEMENTS};

use checks::{Options, Reports};
use report::VerificationReport;

#[derive(Parser, Debug)]
#[command(name = "hyperjac", version, about = "Finite-level checks of the 2-adic monodromy of hyperelliptic Jacobians")]
pub struct Cli {
    /// Emit one JSON object per check instead of text
    #[arg(long, global = true)]
    pub json: bool,

    /// Maximum number of group elements a closure may hold
    #[arg(long, global = true, env = "HYPERJAC_MAX_ELEMENTS", default_value_t = DEFAULT_MAX_ELEMENTS)]
    pub max_elements: usize,

    /// Abort a closure whose estimated memory use exceeds this many MiB
    #[arg(long, global = true)]
    pub max_memory_mb: Option<u64>,

    #[arg(long, global = true, hide = true)]
    pub inject_fault: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// |Sp(2g, Z/2^n)| and |Γ(2)/Γ(2^n)|
    Orders {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        level: u32,
    },
    /// Defining relations of the braid group under the homology representation
    BraidRelations {
        #[arg(long)]
        genus: usize,
    },
    /// R(w) preserves the intersection form for random words
    Symplectic {
        #[arg(long)]
        genus: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// A word is pure iff its image is trivial mod 2
    Purity {
        #[arg(long)]
        genus: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Order of the braid image mod 2
    Mod2Quotient {
        #[arg(long)]
        genus: usize,
    },
    /// Genus 1: the braid image mod 2^n is all of Sp(2, Z/2^n)
    FullSpG1 {
        #[arg(long)]
        level: u32,
    },
    /// Order of the pure braid image mod 2^n
    Theorem {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        level: u32,
        /// Write the sorted hex dump of the closure here
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// F_2-rank of the pure braid generators in Γ(2)/Γ(4)
    Mod4Rank {
        #[arg(long)]
        genus: usize,
    },
    /// No product of root differences is a square
    RadicalIndependence {
        #[arg(long)]
        genus: usize,
    },
    /// Genus-1 4-torsion over the radical tower
    Torsion4 {
        /// Rational roots a1,a2,a3 to specialize to, e.g. 0,3,-5
        #[arg(long, allow_hyphen_values = true)]
        specialize: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Every check for one genus and level
    All {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        level: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Print R(w) for a braid word such as 1,2,-1
    Rep {
        #[arg(long)]
        genus: usize,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long)]
        level: Option<u32>,
    },
}

impl Cli {
    pub fn options(&self) -> Options {
        Options {
            limits: ClosureLimits {
                max_elements: self.max_elements,
                max_memory_bytes: self.max_memory_mb.map(|mb| mb << 20),
            },
            inject_fault: self.inject_fault,
        }
    }
}

/// Runs the command, writing reports to `out` and diagnostics to `err`.
/// Returns the process exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let opts = cli.options();
    let results: Vec<Reports> = match &cli.command {
        Command::Orders { genus, level } => vec![checks::orders(*genus, *level)],
        Command::BraidRelations { genus } => vec![checks::braid_relations(*genus, &opts)],
        Command::Symplectic { genus, samples, seed } => vec![checks::symplectic(*genus, *samples, *seed)],
        Command::Purity { genus, samples, seed } => vec![checks::purity(*genus, *samples, *seed, &opts)],
        Command::Mod2Quotient { genus } => vec![checks::mod2_quotient(*genus, &opts)],
        Command::FullSpG1 { level } => vec![checks::full_sp_g1(*level, &opts)],
        Command::Theorem { genus, level, dump } => vec![checks::theorem(*genus, *level, dump.as_deref(), &opts)],
        Command::Mod4Rank { genus } => vec![checks::mod4_rank(*genus, &opts)],
        Command::RadicalIndependence { genus } => vec![checks::radical_independence(*genus)],
        Command::Torsion4 { specialize, seed } => {
            match specialize.as_deref().map(checks::parse_roots).transpose() {
                Ok(roots) => vec![checks::torsion4(*seed, roots, &opts)],
                Err(e) => vec![Err(e)],
            }
        }
        Command::All {
            genus,
            level,
            seed,
            samples,
        } => match checks::all(*genus, *level, *seed, *samples, &opts) {
            Ok(results) => results,
            Err(e) => vec![Err(e)],
        },
        Command::Rep { genus, word, level } => vec![checks::rep(*genus, word, *level)],
    };
    emit(cli.json, results, out, err)
}

fn emit(json: bool, results: Vec<Reports>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut code = 0;
    for result in results {
        match result {
            Ok(reports) => {
                for r in reports {
                    write_report(json, &r, out);
                    if !r.passed {
                        code = code.max(1);
                    }
                }
            }
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                code = code.max(e.exit_code());
            }
        }
    }
    code
}

fn write_report(json: bool, r: &VerificationReport, out: &mut dyn Write) {
    let _ = if json { writeln!(out, "{}", r.to_json()) } else { writeln!(out, "{r}") };
}

/// Parses arguments and runs; help and version exit 0, bad arguments 3.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(&cli, &mut stdout.lock(), &mut stderr.lock())
}

use hyperjac::group_enum::{closure, factorial, pure_generator_images, sigma_generators, ClosureLimits};
use hyperjac::modring::{chain_form, gamma_quotient_order, is_symplectic, sp_group_order, sp_order_brute_force};
use hyperjac::Modulus;
use num_bigint::BigUint;

#[test]
fn brute_force_matches_order_formula() {
    for g in 1..=2 {
        assert_eq!(BigUint::from(sp_order_brute_force(g)), sp_group_order(g as u32, 1));
    }
}

#[test]
fn mod2_image_is_symmetric_group() {
    let q = Modulus::new(1).unwrap();
    for g in 1..=3usize {
        let c = closure(g, &sigma_generators(g, q), q, ClosureLimits::default()).unwrap();
        assert_eq!(BigUint::from(c.order()), factorial(2 * g as u32 + 1));
    }
    // Only g = 1 is surjective onto Sp.
    let c = closure(1, &sigma_generators(1, q), q, ClosureLimits::default()).unwrap();
    assert_eq!(c.order() as u64, sp_order_brute_force(1));
}

#[test]
fn closure_elements_are_symplectic() {
    let form = chain_form::<i64>(2);
    for n in 1..=2 {
        let q = Modulus::new(n).unwrap();
        let c = closure(2, &sigma_generators(2, q), q, ClosureLimits::default()).unwrap();
        assert!(c.matrices().all(|m| is_symplectic(&m, &form, Some(q))));
    }
}

#[test]
fn pure_image_fills_level_two_quotient() {
    for (g, n) in [(1usize, 2u32), (1, 3), (2, 2)] {
        let q = Modulus::new(n).unwrap();
        let c = closure(g, &pure_generator_images(g, q), q, ClosureLimits::default()).unwrap();
        assert_eq!(BigUint::from(c.order()), gamma_quotient_order(g as u32, n));
        assert_eq!(c.count_outside_gamma_two(), 0);
        let sp = closure(g, &sigma_generators(g, q), q, ClosureLimits::default()).unwrap();
        assert!(c.matrices().all(|m| sp.contains(&m)));
    }
}

use hyperjac::torsion::{specialization_check, symbolic_curve, WitnessMethod};
use hyperjac::tower::random_field_roots;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn symbolic_four_torsion() {
    let curve = symbolic_curve();
    let set = curve.enumerate_4_torsion().unwrap();
    assert_eq!(set.points.len(), 16);
    assert_eq!(set.proper().count(), 12);
    for t in &set.points {
        assert!(t.point.x().map_or(true, |x| x.radicals().len() == 4));
    }
    let group = set.check_group().unwrap();
    assert!(group.passed(), "{group:?}");
    assert_eq!(group.triples, 4096);

    let gen = set.field_generation().unwrap();
    assert!(gen.passed());
    assert!(gen.witnesses.iter().all(|w| w.method == WitnessMethod::ClosedForm));
    let names: Vec<&str> = gen.witnesses.iter().map(|w| w.radical.as_str()).collect();
    assert_eq!(names, ["i", "s12", "s13", "s23"]);

    for (radical, witness) in set.minimality() {
        assert!(witness.is_some(), "{radical} is not needed");
    }
}

#[test]
fn symbolic_search_finds_linear_witness() {
    let set = symbolic_curve().enumerate_4_torsion().unwrap();
    let found = set.search_generation(&[2], 1).unwrap();
    let w = found[0].as_ref().expect("s13 is a combination of y coordinates");
    assert!(w.verified);
    assert!(!w.describe().is_empty());
}

#[test]
fn ten_rational_specializations() {
    let symbolic = symbolic_curve().enumerate_4_torsion().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..10 {
        let roots = random_field_roots(1, 60, &mut rng);
        let roots: [_; 3] = roots.try_into().unwrap();
        let check = specialization_check(&symbolic, roots).unwrap();
        assert!(check.passed(), "{check:?}");
    }
}

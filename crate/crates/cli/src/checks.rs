use std::path::Path;
use std::time::Instant;

use hyperjac::group_enum::{
    lie_algebra_dimension, pure_generator_images, sigma_generators, verify_g1_full_sp_with, verify_gamma2mod4_rank_with,
    verify_mod2_quotient_with, verify_theorem_level_with, ClosureError, ClosureLimits, OrderCheck,
};
use hyperjac::homology::{check_braid_relations, purity_mod2_with, verify_symplectic_words, GeneratorImages};
use hyperjac::modring::{gamma_quotient_order, is_symplectic, sp_group_order, sp_order_brute_force};
use hyperjac::torsion::{specialization_check, symbolic_curve, Curve, TorsionSet};
use hyperjac::tower::{random_field_roots, tower_is_field, verify_radical_independence, MAX_INDEPENDENCE_GENUS};
use hyperjac::{BraidWord, Field, Matrix, Modulus};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use thiserror::Error;

use crate::report::{int_value, PointEntry, VerificationReport};

pub const MAX_GENUS: usize = 4;
pub const MAX_LEVEL: u32 = 6;
pub const SYMPLECTIC_WORD_LEN: usize = 40;
pub const SPECIALIZATIONS: usize = 10;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("resource cap reached: {0}")]
    ResourceCap(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 3,
            CliError::ResourceCap(_) => 2,
            CliError::Io(_) | CliError::Internal(_) => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Options {
    pub limits: ClosureLimits,
    /// Corrupt one generator entry to exercise failure paths.
    pub inject_fault: bool,
}

pub type Reports = Result<Vec<VerificationReport>, CliError>;

pub fn check_genus(genus: usize, max: usize) -> Result<(), CliError> {
    if (1..=max).contains(&genus) {
        Ok(())
    } else {
        Err(CliError::Usage(format!("genus {genus} outside the supported range 1..={max}")))
    }
}

pub fn modulus(level: u32) -> Result<Modulus, CliError> {
    Modulus::new(level).map_err(|_| CliError::Usage(format!("level {level} outside the supported range 1..={MAX_LEVEL}")))
}

fn timed(f: impl FnOnce() -> Reports) -> Reports {
    let start = Instant::now();
    let mut out = f()?;
    let ms = start.elapsed().as_millis() as u64;
    for r in &mut out {
        r.elapsed_ms = ms;
    }
    Ok(out)
}

fn int(n: usize) -> Value {
    Value::from(n as u64)
}

fn corrupt(gens: &mut [Matrix<i64>], q: Modulus) {
    if let Some(g) = gens.first_mut() {
        let v = (g.get(0, 0) + 1) & q.mask() as i64;
        g.set(0, 0, v);
    }
}

pub fn orders(genus: usize, level: u32) -> Reports {
    check_genus(genus, MAX_GENUS)?;
    modulus(level)?;
    timed(|| {
        let (g, n) = (genus as u32, level);
        let lie = lie_algebra_dimension(genus);
        let layers = BigUint::from(2u32).pow((n - 1) * lie as u32);
        let (base, method) = if genus <= 2 {
            (BigUint::from(sp_order_brute_force(genus)), "brute-force count over F_2")
        } else {
            (sp_group_order(g, 1), "closed form")
        };
        let sp = VerificationReport::new(
            "orders.sp",
            genus,
            Some(level),
            int_value(&sp_group_order(g, n)),
            int_value(&(&base * &layers)),
        )
        .with_details(vec![
            format!("|Sp({}, F_2)| = {base} ({method})", 2 * genus),
            format!("each layer Γ(2^k)/Γ(2^(k+1)) has F_2-dimension {lie} (solved)"),
        ]);
        let gamma = VerificationReport::new(
            "orders.gamma_quotient",
            genus,
            Some(level),
            int_value(&gamma_quotient_order(g, n)),
            int_value(&layers),
        )
        .with_details(vec![format!("2^((n-1)*{lie})")]);
        Ok(vec![sp, gamma])
    })
}

pub fn braid_relations(genus: usize, opts: &Options) -> Reports {
    check_genus(genus, MAX_GENUS)?;
    timed(|| {
        let mut images = GeneratorImages::<BigInt>::new(genus, None);
        if opts.inject_fault {
            let g = &mut images.positive[0];
            let v = g.get(0, 0) + 1;
            g.set(0, 0, v);
        }
        let checks = check_braid_relations(&images);
        let holding = checks.iter().filter(|c| c.holds).count();
        let mut details = vec![format!(
            "{} braid relations, {} commuting relations",
            2 * genus - 1,
            checks.len() - (2 * genus - 1)
        )];
        details.extend(checks.iter().filter(|c| !c.holds).map(|c| c.describe()));
        Ok(vec![VerificationReport::new(
            "braid-relations",
            genus,
            None,
            int(checks.len()),
            int(holding),
        )
        .with_details(details)])
    })
}

pub fn symplectic(genus: usize, samples: usize, seed: u64) -> Reports {
    check_genus(genus, MAX_GENUS)?;
    timed(|| {
        let rep = verify_symplectic_words(genus, samples, SYMPLECTIC_WORD_LEN, seed);
        let mut details = vec![format!("random words of length 1..={SYMPLECTIC_WORD_LEN}, exact integer check")];
        details.extend(rep.failures.iter().take(3).map(|w| format!("not symplectic: {w}")));
        Ok(vec![VerificationReport::new(
            "symplectic",
            genus,
            None,
            int(samples),
            int(samples - rep.failures.len()),
        )
        .with_details(details)
        .with_seed(seed)])
    })
}

pub fn purity(genus: usize, samples: usize, seed: u64, opts: &Options) -> Reports {
    check_genus(genus, MAX_GENUS)?;
    timed(|| {
        let q = modulus(1)?;
        let mut images = GeneratorImages::<i64>::new(genus, Some(q));
        if opts.inject_fault {
            corrupt(&mut images.positive, q);
        }
        let rep = purity_mod2_with(&images, samples, seed);
        let mut details = vec![
            format!("pure samples: {}", rep.pure_samples),
            "every fourth sample is a conjugate of a pure generator".to_string(),
        ];
        details.extend(rep.counterexamples.iter().take(3).map(|w| format!("counterexample: {w}")));
        Ok(vec![VerificationReport::new(
            "purity",
            genus,
            Some(1),
            int(samples),
            int(samples - rep.counterexamples.len()),
        )
        .with_details(details)
        .with_seed(seed)])
    })
}

fn order_report(command: &str, genus: usize, level: u32, result: Result<OrderCheck, ClosureError>) -> Reports {
    match result {
        Ok(c) => Ok(vec![VerificationReport::new(
            command,
            genus,
            Some(level),
            int_value(&c.expected),
            int_value(&c.computed),
        )
        .with_details(c.details)
        .require(c.passed)]),
        Err(e @ (ClosureError::LimitReached { .. } | ClosureError::MemoryLimitReached { .. })) => {
            Err(CliError::ResourceCap(e.to_string()))
        }
        Err(e @ (ClosureError::NotSymplectic(_) | ClosureError::NotInGammaTwo)) => {
            let expected = match command {
                "mod2-quotient" => BigUint::from((1..=2 * genus as u32 + 1).product::<u32>()),
                "full-sp-g1" => sp_group_order(1, level),
                _ => gamma_quotient_order(genus as u32, level),
            };
            Ok(vec![VerificationReport::new(
                command,
                genus,
                Some(level),
                int_value(&expected),
                Value::from("invalid generators"),
            )
            .with_details(vec![e.to_string()])])
        }
        Err(e) => Err(CliError::Usage(e.to_string())),
    }
}

pub fn mod2_quotient(genus: usize, opts: &Options) -> Reports {
    check_genus(genus, 3)?;
    timed(|| {
        let q = modulus(1)?;
        let mut gens = sigma_generators(genus, q);
        if opts.inject_fault {
            corrupt(&mut gens, q);
        }
        order_report("mod2-quotient", genus, 1, verify_mod2_quotient_with(genus, &gens))
    })
}

pub fn full_sp_g1(level: u32, opts: &Options) -> Reports {
    let q = modulus(level)?;
    timed(|| {
        let mut gens = sigma_generators(1, q);
        if opts.inject_fault {
            corrupt(&mut gens, q);
        }
        order_report("full-sp-g1", 1, level, verify_g1_full_sp_with(q, &gens))
    })
}

pub fn theorem(genus: usize, level: u32, dump: Option<&Path>, opts: &Options) -> Reports {
    check_genus(genus, MAX_GENUS)?;
    let q = modulus(level)?;
    timed(|| {
        let mut gens = pure_generator_images(genus, q);
        if opts.inject_fault {
            corrupt(&mut gens, q);
        }
        let result = verify_theorem_level_with(genus, q, &gens, opts.limits);
        if let (Ok((_, closure)), Some(path)) = (&result, dump) {
            closure.write_dump(path)?;
        }
        order_report("theorem", genus, level, result.map(|(c, _)| c))
    })
}

pub fn mod4_rank(genus: usize, opts: &Options) -> Reports {
    check_genus(genus, MAX_GENUS)?;
    timed(|| {
        let q = modulus(2)?;
        let mut gens = pure_generator_images(genus, q);
        if opts.inject_fault {
            corrupt(&mut gens, q);
        }
        let c = verify_gamma2mod4_rank_with(genus, &gens);
        Ok(vec![VerificationReport::new("mod4-rank", genus, Some(2), int(c.expected), int(c.rank))
            .with_details(vec![
                format!("pure braid generators: {}", gens.len()),
                format!("dimension of {{A : A^T E + E A = 0}} over F_2: {}", c.lie_dimension),
            ])
            .require(c.passed)])
    })
}

pub fn radical_independence(genus: usize) -> Reports {
    check_genus(genus, MAX_INDEPENDENCE_GENUS)?;
    timed(|| {
        let rep = verify_radical_independence(genus, true);
        let with_i = rep.checks.iter().filter(|c| c.with_minus_one && !c.is_square).count();
        let mut details = vec![format!("differences a_i - a_j: {}", 2 * genus * genus + genus)];
        match rep.certified_log_degree {
            Some(k) => details.push(format!("certified [L_2 : L_1] = 2^{k}")),
            None => details.push("degree not certified".to_string()),
        }
        details.push(format!("products times -1 that are non-squares: {with_i} of {}", rep.subsets));
        Ok(vec![VerificationReport::new(
            "radical-independence",
            genus,
            None,
            int(rep.subsets),
            int(rep.non_squares),
        )
        .with_details(details)
        .require(rep.passed() && with_i == rep.subsets)])
    })
}

fn point_entries<F: Field + std::fmt::Display + Send + Sync>(set: &TorsionSet<F>) -> Vec<PointEntry> {
    set.points
        .iter()
        .map(|t| PointEntry {
            label: t.label.clone(),
            x: t.point.x().map(|x| x.to_string()),
            y: t.point.y().map(|y| y.to_string()),
            order: t.order,
            halved_from: t.halved_from,
        })
        .collect()
}

fn torsion_reports<F: Field + std::fmt::Display + Send + Sync>(set: &TorsionSet<F>, opts: &Options) -> Reports {
    let internal = |e: hyperjac::torsion::TorsionError| CliError::Internal(e.to_string());
    let mut set = set.clone();
    if opts.inject_fault {
        if let Some(t) = set.points.iter_mut().find(|t| t.order == 4) {
            if let hyperjac::torsion::EllipticPoint::Affine { x, .. } = &mut t.point {
                *x = &*x + &hyperjac::tower::TowerElement::one(x.radicals());
            }
        }
    }
    let group = set.check_group().map_err(internal)?;
    let mut points = VerificationReport::new("torsion4.points", 1, Some(2), int(12), int(group.proper))
        .with_details(vec![
            format!("points: {} (distinct: {})", group.points, group.distinct),
            format!("all on the curve: {}", group.all_on_curve),
            format!("2Q equals the 2-torsion parent for every proper Q: {}", group.doubling_ok),
            format!("radicals: {}", set.curve.radicals().names().join(", ")),
        ])
        .require(group.points == 16 && group.distinct && group.all_on_curve && group.doubling_ok);
    points.points = Some(point_entries(&set));
    let closed = VerificationReport::new(
        "torsion4.group",
        1,
        Some(2),
        int(group.triples),
        int(if group.closed { group.triples - group.associativity_failures } else { 0 }),
    )
    .with_details(vec![
        format!("closed under addition: {}", group.closed),
        format!("associative triples checked: {}", group.triples),
    ])
    .require(group.closed);
    let generation = match set.field_generation() {
        Ok(g) => {
            let verified = g.witnesses.iter().filter(|w| w.verified).count();
            let details = g
                .witnesses
                .iter()
                .map(|w| {
                    let rhs = if w.expression.is_empty() {
                        format!("{} search terms", w.combination.len())
                    } else {
                        w.expression.clone()
                    };
                    format!("{} = {rhs}: {}", w.radical, if w.verified { "verified" } else { "FAILED" })
                })
                .collect();
            VerificationReport::new("torsion4.generation", 1, Some(2), int(4), int(verified)).with_details(details)
        }
        Err(e) => VerificationReport::new("torsion4.generation", 1, Some(2), int(4), Value::from("error"))
            .with_details(vec![e.to_string()]),
    };
    let minimality = set.minimality();
    let needed = minimality.iter().filter(|(_, w)| w.is_some()).count();
    let minimal = VerificationReport::new("torsion4.minimality", 1, Some(2), int(minimality.len()), int(needed))
        .with_details(
            minimality
                .iter()
                .map(|(r, w)| match w {
                    Some(c) => format!("{r} needed: {c} leaves the subtower without it"),
                    None => format!("{r} not needed"),
                })
                .collect(),
        );
    Ok(vec![points, closed, generation, minimal])
}

fn parse_rational(text: &str) -> Result<BigRational, CliError> {
    let bad = || CliError::Usage(format!("cannot parse {text:?} as a rational number"));
    let (num, den) = match text.trim().split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den == BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

pub fn parse_roots(text: &str) -> Result<[BigRational; 3], CliError> {
    let roots: Vec<BigRational> = text.split(',').map(parse_rational).collect::<Result<_, _>>()?;
    roots
        .try_into()
        .map_err(|_| CliError::Usage("--specialize expects three values a1,a2,a3".to_string()))
}

pub fn torsion4(seed: u64, specialize: Option<[BigRational; 3]>, opts: &Options) -> Reports {
    timed(|| {
        let internal = |e: hyperjac::torsion::TorsionError| CliError::Internal(e.to_string());
        let symbolic = symbolic_curve().enumerate_4_torsion().map_err(internal)?;
        if let Some(roots) = specialize {
            let curve = Curve::new(roots.clone()).map_err(|e| CliError::Usage(e.to_string()))?;
            if tower_is_field(curve.radicals()) != Some(true) {
                return Err(CliError::Usage(
                    "the specialized tower has degree < 16; choose roots whose differences, with -1, are independent non-squares"
                        .to_string(),
                ));
            }
            let set = curve.enumerate_4_torsion().map_err(internal)?;
            let mut out = torsion_reports(&set, opts)?;
            let check = specialization_check(&symbolic, roots).map_err(internal)?;
            out.push(specialization_report(vec![check]));
            return Ok(out);
        }
        let mut out = torsion_reports(&symbolic, opts)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let checks = (0..SPECIALIZATIONS)
            .map(|_| {
                let roots: [BigRational; 3] = random_field_roots(1, 60, &mut rng).try_into().expect("three roots");
                specialization_check(&symbolic, roots).map_err(internal)
            })
            .collect::<Result<Vec<_>, _>>()?;
        out.push(specialization_report(checks).with_seed(seed));
        Ok(out)
    })
}

fn specialization_report(checks: Vec<hyperjac::torsion::SpecializationCheck>) -> VerificationReport {
    let passed = checks.iter().filter(|c| c.passed()).count();
    let details = checks
        .iter()
        .map(|c| {
            let roots: Vec<String> = c.roots.iter().map(|r| r.to_string()).collect();
            format!(
                "({}): on curve {}, matches direct computation {}, group {}, generation {}",
                roots.join(", "),
                c.on_curve,
                c.matches_direct,
                c.direct_group_ok,
                c.generation_ok
            )
        })
        .collect();
    VerificationReport::new("torsion4.specializations", 1, Some(2), int(checks.len()), int(passed)).with_details(details)
}

/// `R(w)` for a comma-separated word such as `1,2,-1`.
pub fn rep(genus: usize, word: &str, level: Option<u32>) -> Reports {
    check_genus(genus, MAX_GENUS)?;
    let q = level.map(modulus).transpose()?;
    timed(|| {
        let w = BraidWord::parse(2 * genus + 1, word).map_err(|e| CliError::Usage(e.to_string()))?;
        let m = hyperjac::homology::rep_word::<BigInt>(&w, genus, q).map_err(|e| CliError::Usage(e.to_string()))?;
        let form = hyperjac::modring::chain_form::<BigInt>(genus);
        let ok = is_symplectic(&m, &form, q);
        let verdict = |b: bool| Value::from(if b { "symplectic" } else { "not symplectic" });
        Ok(vec![VerificationReport::new("rep", genus, level, verdict(true), verdict(ok)).with_details(vec![
            format!("word: {w}"),
            format!("pure: {}", hyperjac::braid::is_pure(&w)),
            format!("R(w) = {m}"),
            format!("determinant: {}", m.determinant()),
        ])])
    })
}

/// Everything at once; independent checks run on separate threads and the
/// results come back in a fixed order, one entry per check.
pub fn all(genus: usize, level: u32, seed: u64, samples: usize, opts: &Options) -> Result<Vec<Reports>, CliError> {
    check_genus(genus, MAX_GENUS)?;
    modulus(level)?;
    let jobs: Vec<Box<dyn Fn() -> Reports + Send + Sync + '_>> = vec![
        Box::new(move || orders(genus, level)),
        Box::new(move || braid_relations(genus, opts)),
        Box::new(move || symplectic(genus, samples, seed)),
        Box::new(move || purity(genus, samples, seed, opts)),
        Box::new(move || mod2_quotient(genus.min(3), opts)),
        Box::new(move || full_sp_g1(level, opts)),
        Box::new(move || theorem(genus, level, None, opts)),
        Box::new(move || mod4_rank(genus, opts)),
        Box::new(move || radical_independence(genus.min(MAX_INDEPENDENCE_GENUS))),
        Box::new(move || torsion4(seed, None, opts)),
    ];
    Ok(std::thread::scope(|s| {
        let handles: Vec<_> = jobs.iter().map(|job| s.spawn(move || job())).collect();
        handles.into_iter().map(|h| h.join().expect("check thread panicked")).collect()
    }))
}

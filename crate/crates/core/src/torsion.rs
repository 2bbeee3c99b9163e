//! 4-torsion of `y² = (x − a1)(x − a2)(x − a3)` over the radical tower.
//!
//! Everything is generic over the base field so that the same code runs
//! symbolically over `ℚ(a1, a2, a3)` and numerically over `ℚ` after
//! specializing the roots.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use rayon::prelude::*;
use thiserror::Error;

use crate::scalar::Field;
use crate::tower::{
    hyperelliptic_radicals_with, pair_radical_index, QRationalFunction, RadicalSet, TowerElement, TowerError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorsionError {
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error("roots must be pairwise distinct")]
    RootsNotDistinct,
    #[error("root index {0} out of range 1..=3")]
    RootIndex(usize),
    #[error("halving candidate {0} is not on the curve or does not double correctly")]
    HalvingFailed(String),
    #[error("point {0} is not on the curve")]
    NotOnCurve(String),
    #[error("sum {0} + {1} is not among the enumerated points")]
    NotClosed(usize, usize),
}

#[derive(Debug, Clone)]
pub enum EllipticPoint<F> {
    Infinity,
    Affine { x: TowerElement<F>, y: TowerElement<F> },
}

impl<F: Field> PartialEq for EllipticPoint<F> {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (EllipticPoint::Infinity, EllipticPoint::Infinity) => true,
            (EllipticPoint::Affine { x, y }, EllipticPoint::Affine { x: x2, y: y2 }) => x == x2 && y == y2,
            _ => false,
        }
    }
}

impl<F: Field> EllipticPoint<F> {
    pub fn is_infinity(&self) -> bool {
        matches!(self, EllipticPoint::Infinity)
    }

    pub fn x(&self) -> Option<&TowerElement<F>> {
        match self {
            EllipticPoint::Infinity => None,
            EllipticPoint::Affine { x, .. } => Some(x),
        }
    }

    pub fn y(&self) -> Option<&TowerElement<F>> {
        match self {
            EllipticPoint::Infinity => None,
            EllipticPoint::Affine { y, .. } => Some(y),
        }
    }

    pub fn map_base<G: Field, M: Fn(&F) -> Option<G> + Copy>(
        &self,
        target: &Arc<RadicalSet<G>>,
        f: M,
    ) -> Result<EllipticPoint<G>, TowerError> {
        Ok(match self {
            EllipticPoint::Infinity => EllipticPoint::Infinity,
            EllipticPoint::Affine { x, y } => EllipticPoint::Affine {
                x: x.map_base(target, f)?,
                y: y.map_base(target, f)?,
            },
        })
    }
}

impl<F: Field + fmt::Display> fmt::Display for EllipticPoint<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EllipticPoint::Infinity => write!(f, "O"),
            EllipticPoint::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

/// The genus-1 curve with roots `a1, a2, a3` and its tower
/// `F(i, s12, s13, s23)`.
#[derive(Debug, Clone)]
pub struct Curve<F> {
    radicals: Arc<RadicalSet<F>>,
    roots: [F; 3],
}

impl<F: Field> Curve<F> {
    pub fn new(roots: [F; 3]) -> Result<Self, TorsionError> {
        if roots[0] == roots[1] || roots[0] == roots[2] || roots[1] == roots[2] {
            return Err(TorsionError::RootsNotDistinct);
        }
        let radicals = hyperelliptic_radicals_with(1, |i| roots[i - 1].clone())?;
        Ok(Curve { radicals, roots })
    }

    pub fn radicals(&self) -> &Arc<RadicalSet<F>> {
        &self.radicals
    }

    pub fn roots(&self) -> &[F; 3] {
        &self.roots
    }

    pub fn constant(&self, c: F) -> TowerElement<F> {
        TowerElement::from_base(&self.radicals, c)
    }

    pub fn root(&self, a: usize) -> TowerElement<F> {
        self.constant(self.roots[a - 1].clone())
    }

    /// `f(x) = (x − a1)(x − a2)(x − a3)`.
    pub fn rhs(&self, x: &TowerElement<F>) -> TowerElement<F> {
        (1..=3).fold(TowerElement::one(&self.radicals), |acc, a| &acc * &(x - &self.root(a)))
    }

    /// `f'(x)`.
    fn rhs_derivative(&self, x: &TowerElement<F>) -> TowerElement<F> {
        let d = |a: usize| x - &self.root(a);
        &(&(&d(1) * &d(2)) + &(&d(1) * &d(3))) + &(&d(2) * &d(3))
    }

    fn sum_of_roots(&self) -> TowerElement<F> {
        &(&self.root(1) + &self.root(2)) + &self.root(3)
    }

    pub fn on_curve(&self, p: &EllipticPoint<F>) -> bool {
        match p {
            EllipticPoint::Infinity => true,
            EllipticPoint::Affine { x, y } => &(y * y) == &self.rhs(x),
        }
    }

    pub fn neg(&self, p: &EllipticPoint<F>) -> EllipticPoint<F> {
        match p {
            EllipticPoint::Infinity => EllipticPoint::Infinity,
            EllipticPoint::Affine { x, y } => EllipticPoint::Affine { x: x.clone(), y: -y },
        }
    }

    fn from_slope(
        &self,
        lambda: &TowerElement<F>,
        x1: &TowerElement<F>,
        y1: &TowerElement<F>,
        x2: &TowerElement<F>,
    ) -> EllipticPoint<F> {
        let x3 = &(&(&(lambda * lambda) + &self.sum_of_roots()) - x1) - x2;
        let y3 = &(lambda * &(x1 - &x3)) - y1;
        EllipticPoint::Affine { x: x3, y: y3 }
    }

    /// Chord-tangent addition.
    pub fn add(&self, p: &EllipticPoint<F>, q: &EllipticPoint<F>) -> Result<EllipticPoint<F>, TorsionError> {
        let (x1, y1, x2, y2) = match (p, q) {
            (EllipticPoint::Infinity, _) => return Ok(q.clone()),
            (_, EllipticPoint::Infinity) => return Ok(p.clone()),
            (EllipticPoint::Affine { x: x1, y: y1 }, EllipticPoint::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        if x1 == x2 {
            if y1 == &-y2 {
                return Ok(EllipticPoint::Infinity);
            }
            return self.double(p);
        }
        let lambda = (y2 - y1).try_div(&(x2 - x1))?;
        Ok(self.from_slope(&lambda, x1, y1, x2))
    }

    /// Tangent doubling, `λ = f'(x) / 2y`.
    pub fn double(&self, p: &EllipticPoint<F>) -> Result<EllipticPoint<F>, TorsionError> {
        let (x, y) = match p {
            EllipticPoint::Infinity => return Ok(EllipticPoint::Infinity),
            EllipticPoint::Affine { x, y } => (x, y),
        };
        if y.is_zero() {
            return Ok(EllipticPoint::Infinity);
        }
        let two_y = y.scale(&F::from_int(2));
        let lambda = self.rhs_derivative(x).try_div(&two_y)?;
        Ok(self.from_slope(&lambda, x, y, x))
    }

    pub fn two_torsion(&self, a: usize) -> EllipticPoint<F> {
        EllipticPoint::Affine {
            x: self.root(a),
            y: TowerElement::zero(&self.radicals),
        }
    }

    /// `√(a_a − a_b)` in the tower basis: `s_ab` for `a < b`, `i·s_ba` otherwise.
    pub fn sqrt_root_difference(&self, a: usize, b: usize) -> TowerElement<F> {
        if a < b {
            TowerElement::radical(&self.radicals, pair_radical_index(1, a, b))
        } else {
            let i = TowerElement::radical(&self.radicals, 0);
            &i * &TowerElement::radical(&self.radicals, pair_radical_index(1, b, a))
        }
    }

    /// The four `Q` with `2Q = (a_a, 0)`:
    /// `x = a_a + ε·r_b·r_c`, `y = δ·r_b·r_c·(r_b + ε·r_c)` with
    /// `r_k = √(a_a − a_k)`, in the order `(ε, δ) = (+,+), (+,−), (−,+), (−,−)`.
    pub fn halve_two_torsion(&self, a: usize) -> Result<[HalfPoint<F>; 4], TorsionError> {
        if !(1..=3).contains(&a) {
            return Err(TorsionError::RootIndex(a));
        }
        let others: Vec<usize> = (1..=3).filter(|&k| k != a).collect();
        let rb = self.sqrt_root_difference(a, others[0]);
        let rc = self.sqrt_root_difference(a, others[1]);
        let prod = &rb * &rc;
        let parent = self.two_torsion(a);
        let mut out = Vec::with_capacity(4);
        for x_sign in [Sign::Plus, Sign::Minus] {
            let e = x_sign.apply(&TowerElement::one(&self.radicals));
            let x = &self.root(a) + &(&e * &prod);
            let y_plus = &prod * &(&rb + &(&e * &rc));
            for y_sign in [Sign::Plus, Sign::Minus] {
                let point = EllipticPoint::Affine {
                    x: x.clone(),
                    y: y_sign.apply(&y_plus),
                };
                let label = format!("Q{a}{x_sign}{y_sign}");
                if !self.on_curve(&point) || self.double(&point)? != parent {
                    return Err(TorsionError::HalvingFailed(label));
                }
                out.push(HalfPoint {
                    parent: a,
                    x_sign,
                    y_sign,
                    label,
                    point,
                });
            }
        }
        Ok(out.try_into().unwrap_or_else(|_| unreachable!()))
    }

    pub fn enumerate_4_torsion(&self) -> Result<TorsionSet<F>, TorsionError> {
        let mut points = vec![TorsionPoint {
            label: "O".to_string(),
            point: EllipticPoint::Infinity,
            order: 1,
            halved_from: None,
        }];
        for a in 1..=3 {
            points.push(TorsionPoint {
                label: format!("P{a}"),
                point: self.two_torsion(a),
                order: 2,
                halved_from: None,
            });
        }
        for a in 1..=3 {
            for h in self.halve_two_torsion(a)? {
                let twice = self.double(&h.point)?;
                let order = if twice.is_infinity() {
                    2
                } else if self.double(&twice)?.is_infinity() {
                    4
                } else {
                    0
                };
                points.push(TorsionPoint {
                    label: h.label,
                    point: h.point,
                    order,
                    halved_from: Some(a),
                });
            }
        }
        Ok(TorsionSet {
            curve: self.clone(),
            points,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn apply<F: Field>(self, e: &TowerElement<F>) -> TowerElement<F> {
        match self {
            Sign::Plus => e.clone(),
            Sign::Minus => -e,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

#[derive(Debug, Clone)]
pub struct HalfPoint<F> {
    pub parent: usize,
    pub x_sign: Sign,
    pub y_sign: Sign,
    pub label: String,
    pub point: EllipticPoint<F>,
}

#[derive(Debug, Clone)]
pub struct TorsionPoint<F> {
    pub label: String,
    pub point: EllipticPoint<F>,
    /// Exact order; 0 if doubling twice does not reach `O`.
    pub order: u32,
    /// For proper 4-torsion points, the index of `(a_k, 0) = 2Q`.
    pub halved_from: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct TorsionSet<F> {
    pub curve: Curve<F>,
    pub points: Vec<TorsionPoint<F>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupCheck {
    pub points: usize,
    pub proper: usize,
    pub distinct: bool,
    pub all_on_curve: bool,
    pub doubling_ok: bool,
    pub closed: bool,
    pub associativity_failures: usize,
    pub triples: usize,
}

impl GroupCheck {
    pub fn passed(&self) -> bool {
        self.points == 16
            && self.proper == 12
            && self.distinct
            && self.all_on_curve
            && self.doubling_ok
            && self.closed
            && self.associativity_failures == 0
    }
}

impl<F: Field + Send + Sync> TorsionSet<F> {
    pub fn index_of(&self, p: &EllipticPoint<F>) -> Option<usize> {
        self.points.iter().position(|t| &t.point == p)
    }

    pub fn proper(&self) -> impl Iterator<Item = &TorsionPoint<F>> {
        self.points.iter().filter(|t| t.order == 4)
    }

    pub fn by_label(&self, label: &str) -> Option<&TorsionPoint<F>> {
        self.points.iter().find(|t| t.label == label)
    }

    /// `table[i][j]` is the index of `points[i] + points[j]`.
    pub fn addition_table(&self) -> Result<Vec<Vec<usize>>, TorsionError> {
        let n = self.points.len();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        let sums: Vec<((usize, usize), usize)> = pairs
            .par_iter()
            .map(|&(i, j)| {
                let s = self.curve.add(&self.points[i].point, &self.points[j].point)?;
                let k = self.index_of(&s).ok_or(TorsionError::NotClosed(i, j))?;
                Ok(((i, j), k))
            })
            .collect::<Result<_, TorsionError>>()?;
        let mut table = vec![vec![0; n]; n];
        for ((i, j), k) in sums {
            table[i][j] = k;
            table[j][i] = k;
        }
        Ok(table)
    }

    pub fn check_group(&self) -> Result<GroupCheck, TorsionError> {
        let n = self.points.len();
        let distinct = (0..n).all(|i| (i + 1..n).all(|j| self.points[i].point != self.points[j].point));
        let all_on_curve = self.points.iter().all(|t| self.curve.on_curve(&t.point));
        let mut doubling_ok = true;
        for t in self.proper() {
            let parent = self.curve.two_torsion(t.halved_from.expect("proper points have a parent"));
            doubling_ok &= self.curve.double(&t.point)? == parent;
        }
        let (closed, associativity_failures) = match self.addition_table() {
            Ok(table) => {
                let failures = (0..n)
                    .flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k))))
                    .filter(|&(i, j, k)| table[table[i][j]][k] != table[i][table[j][k]])
                    .count();
                (true, failures)
            }
            Err(TorsionError::NotClosed(..)) => (false, 0),
            Err(e) => return Err(e),
        };
        Ok(GroupCheck {
            points: n,
            proper: self.proper().count(),
            distinct,
            all_on_curve,
            doubling_ok,
            closed,
            associativity_failures,
            triples: n * n * n,
        })
    }

    /// Coordinates of the proper points, labelled `x(Q…)` and `y(Q…)`.
    pub fn coordinates(&self) -> Vec<(String, TowerElement<F>)> {
        let mut out = Vec::new();
        for t in self.proper() {
            if let EllipticPoint::Affine { x, y } = &t.point {
                out.push((format!("x({})", t.label), x.clone()));
                out.push((format!("y({})", t.label), y.clone()));
            }
        }
        out
    }

    /// For each radical, a coordinate that does not lie in the tower with
    /// that radical removed.
    pub fn minimality(&self) -> Vec<(String, Option<String>)> {
        let radicals = self.curve.radicals();
        let coords = self.coordinates();
        (0..radicals.len())
            .map(|k| {
                let without = radicals.full_mask() & !(1 << k);
                let witness = coords
                    .iter()
                    .find(|(_, c)| c.subtower_membership(without).is_none())
                    .map(|(label, _)| label.clone());
                (radicals.name(k).to_string(), witness)
            })
            .collect()
    }

    /// Expresses each radical through the 4-torsion coordinates: closed-form
    /// candidates first, then a bounded linear search for any that fail.
    pub fn field_generation(&self) -> Result<GenerationReport<F>, TorsionError> {
        let mut witnesses = self.candidate_witnesses()?;
        let missing: Vec<usize> = witnesses
            .iter()
            .enumerate()
            .filter(|(_, w)| !w.verified)
            .map(|(k, _)| k)
            .collect();
        if !missing.is_empty() {
            let targets: Vec<usize> = missing.iter().map(|&k| witnesses[k].radical_index).collect();
            let found = self.search_generation(&targets, 3)?;
            for (slot, f) in missing.into_iter().zip(found) {
                if let Some(w) = f {
                    witnesses[slot] = w;
                }
            }
        }
        Ok(GenerationReport { witnesses })
    }

    fn coordinate(&self, label: &str, which: char) -> TowerElement<F> {
        let t = self.by_label(label).expect("enumerated label");
        let parent = self.curve.root(t.halved_from.expect("proper point"));
        match which {
            'x' => t.point.x().expect("affine") - &parent,
            _ => t.point.y().expect("affine").clone(),
        }
    }

    /// The closed-form identities:
    /// `p = y(Q1++)/(x(Q1++) − a1) = s12 + s13`,
    /// `m = −y(Q1-+)/(x(Q1-+) − a1) = s12 − s13`,
    /// `i = (x(Q2++) − a2)(a1 − a3) / ((x(Q1++) − a1)(x(Q3-+) − a3))`,
    /// `s23 = (x(Q2++) − a2) / (i·s12)`.
    fn candidate_witnesses(&self) -> Result<Vec<Witness<F>>, TorsionError> {
        let c = &self.curve;
        let r = c.radicals();
        let x1p = self.coordinate("Q1++", 'x');
        let x1m = self.coordinate("Q1-+", 'x');
        let x2p = self.coordinate("Q2++", 'x');
        let x3m = self.coordinate("Q3-+", 'x');
        let p = self.coordinate("Q1++", 'y').try_div(&x1p)?;
        let m = (-self.coordinate("Q1-+", 'y')).try_div(&x1m)?;
        let half = c.constant(F::from_int(2).inverse().expect("characteristic 0"));
        let s12 = &(&p + &m) * &half;
        let s13 = &(&p - &m) * &half;
        let a13 = &c.root(1) - &c.root(3);
        let iota = (&x2p * &a13).try_div(&(&x1p * &x3m))?;
        let s23 = x2p.try_div(&(&iota * &s12))?;
        let pm = "p = y(Q1++)/(x(Q1++) - a1), m = -y(Q1-+)/(x(Q1-+) - a1)";
        let found = [
            (0, iota, "(x(Q2++) - a2)*(a1 - a3)/((x(Q1++) - a1)*(x(Q3-+) - a3))".to_string()),
            (pair_radical_index(1, 1, 2), s12, format!("(p + m)/2 with {pm}")),
            (pair_radical_index(1, 1, 3), s13, format!("(p - m)/2 with {pm}")),
            (pair_radical_index(1, 2, 3), s23, "(x(Q2++) - a2)/(i*s12)".to_string()),
        ];
        Ok(found
            .into_iter()
            .map(|(k, value, expression)| Witness {
                radical: r.name(k).to_string(),
                radical_index: k,
                verified: value == TowerElement::radical(r, k),
                expression,
                method: WitnessMethod::ClosedForm,
                combination: Vec::new(),
            })
            .collect())
    }

    /// Searches the base-field span of products of at most `max_degree`
    /// distinct atoms `x(Q) − a_parent`, `y(Q)` for each target radical.
    pub fn search_generation(&self, targets: &[usize], max_degree: usize) -> Result<Vec<Option<Witness<F>>>, TorsionError> {
        let r = self.curve.radicals().clone();
        let mut atoms: Vec<(String, TowerElement<F>)> = Vec::new();
        for t in self.proper() {
            let parent = t.halved_from.expect("proper point");
            atoms.push((format!("(x({}) - a{parent})", t.label), self.coordinate(&t.label, 'x')));
            atoms.push((format!("y({})", t.label), self.coordinate(&t.label, 'y')));
        }
        let mut products: Vec<(Vec<usize>, TowerElement<F>)> = vec![(Vec::new(), TowerElement::one(&r))];
        let mut basis = Echelon::default();
        let mut found: Vec<Option<Witness<F>>> = vec![None; targets.len()];
        let mut frontier: Vec<(Vec<usize>, TowerElement<F>)> = vec![(Vec::new(), TowerElement::one(&r))];
        let mut next = 0;
        for degree in 0..=max_degree {
            if degree > 0 {
                let mut grown = Vec::new();
                for (idx, value) in &frontier {
                    let start = idx.last().map_or(0, |l| l + 1);
                    for (a, (_, atom)) in atoms.iter().enumerate().skip(start) {
                        let mut idx2 = idx.clone();
                        idx2.push(a);
                        grown.push((idx2, value * atom));
                    }
                }
                frontier = grown;
                products.extend(frontier.iter().cloned());
            }
            while next < products.len() {
                basis.insert(products[next].1.clone(), next);
                next += 1;
            }
            for (slot, &k) in targets.iter().enumerate() {
                if found[slot].is_some() {
                    continue;
                }
                let target = TowerElement::radical(&r, k);
                if let Some(combo) = basis.express(&target) {
                    let value = combo.iter().fold(TowerElement::zero(&r), |acc, (j, c)| {
                        &acc + &products[*j].1.scale(c)
                    });
                    let combination: Vec<(String, F)> = combo
                        .iter()
                        .map(|(j, c)| {
                            let names: Vec<&str> = products[*j].0.iter().map(|&a| atoms[a].0.as_str()).collect();
                            let text = if names.is_empty() { "1".to_string() } else { names.join("*") };
                            (text, c.clone())
                        })
                        .collect();
                    found[slot] = Some(Witness {
                        radical: r.name(k).to_string(),
                        radical_index: k,
                        expression: String::new(),
                        verified: value == target,
                        method: WitnessMethod::Search,
                        combination,
                    });
                }
            }
            if found.iter().all(Option::is_some) {
                break;
            }
        }
        Ok(found)
    }
}

/// Row echelon form over `F` of tower elements viewed as coefficient vectors,
/// each row remembering its combination of the inserted vectors.
#[derive(Debug)]
struct Echelon<F> {
    rows: Vec<(u32, TowerElement<F>, BTreeMap<usize, F>)>,
}

impl<F> Default for Echelon<F> {
    fn default() -> Self {
        Echelon { rows: Vec::new() }
    }
}

impl<F: Field> Echelon<F> {
    fn reduce(&self, mut v: TowerElement<F>, mut combo: BTreeMap<usize, F>, sign: F) -> (TowerElement<F>, BTreeMap<usize, F>) {
        for (pivot, row, row_combo) in &self.rows {
            let c = v.coefficient(*pivot);
            if c.is_zero() {
                continue;
            }
            v = &v - &row.scale(&c);
            for (j, rc) in row_combo {
                let add = sign.clone() * c.clone() * rc.clone();
                let entry = combo.entry(*j).or_insert_with(F::zero);
                *entry = entry.clone() + add;
            }
            combo.retain(|_, x| !x.is_zero());
        }
        (v, combo)
    }

    fn insert(&mut self, v: TowerElement<F>, index: usize) {
        let mut combo = BTreeMap::new();
        combo.insert(index, F::one());
        let (v, combo) = self.reduce(v, combo, -F::one());
        let Some((&pivot, lead)) = v.coefficients().iter().next() else {
            return;
        };
        let inv = lead.inverse().expect("nonzero pivot");
        let combo = combo.into_iter().map(|(j, c)| (j, c * inv.clone())).collect();
        self.rows.push((pivot, v.scale(&inv), combo));
    }

    /// Coefficients `c_j` with `target = Σ c_j v_j`, if `target` is in the span.
    fn express(&self, target: &TowerElement<F>) -> Option<BTreeMap<usize, F>> {
        let (rest, combo) = self.reduce(target.clone(), BTreeMap::new(), F::one());
        rest.is_zero().then_some(combo)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessMethod {
    ClosedForm,
    Search,
}

#[derive(Debug, Clone)]
pub struct Witness<F> {
    pub radical: String,
    pub radical_index: usize,
    /// Closed-form expression in the coordinates; empty for search results.
    pub expression: String,
    pub method: WitnessMethod,
    /// Search results: `(product of atoms, coefficient)` terms.
    pub combination: Vec<(String, F)>,
    pub verified: bool,
}

#[derive(Debug, Clone)]
pub struct GenerationReport<F> {
    pub witnesses: Vec<Witness<F>>,
}

impl<F> GenerationReport<F> {
    pub fn passed(&self) -> bool {
        self.witnesses.len() == 4 && self.witnesses.iter().all(|w| w.verified)
    }
}

impl Witness<QRationalFunction> {
    pub fn describe(&self) -> String {
        let rhs = match self.method {
            WitnessMethod::ClosedForm => self.expression.clone(),
            WitnessMethod::Search => self
                .combination
                .iter()
                .map(|(p, c)| format!("({c})*{p}"))
                .collect::<Vec<_>>()
                .join(" + "),
        };
        format!("{} = {}", self.radical, rhs)
    }
}

/// The symbolic curve over `ℚ(a1, a2, a3)`.
pub fn symbolic_curve() -> Curve<QRationalFunction> {
    Curve::new([1, 2, 3].map(QRationalFunction::var)).expect("distinct variables")
}

/// Outcome of re-running the 4-torsion computation at one rational point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecializationCheck {
    pub roots: [BigRational; 3],
    /// Specialized symbolic points satisfy the specialized curve equation.
    pub on_curve: bool,
    /// The same 16 points as the independent computation over `ℚ`.
    pub matches_direct: bool,
    pub direct_group_ok: bool,
    pub generation_ok: bool,
}

impl SpecializationCheck {
    pub fn passed(&self) -> bool {
        self.on_curve && self.matches_direct && self.direct_group_ok && self.generation_ok
    }
}

/// Specializes the symbolic 4-torsion at `roots` and compares it with the
/// computation done directly in the rational tower, which must be a field.
pub fn specialization_check(
    symbolic: &TorsionSet<QRationalFunction>,
    roots: [BigRational; 3],
) -> Result<SpecializationCheck, TorsionError> {
    let direct_curve = Curve::new(roots.clone())?;
    let target = direct_curve.radicals().clone();
    let at = |c: &QRationalFunction| c.eval(&roots);
    let mut on_curve = true;
    let mut matches_direct = true;
    let direct = direct_curve.enumerate_4_torsion()?;
    for (sym, dir) in symbolic.points.iter().zip(&direct.points) {
        let p = sym.point.map_base(&target, at)?;
        on_curve &= direct_curve.on_curve(&p);
        matches_direct &= p == dir.point && sym.label == dir.label;
    }
    let direct_group_ok = direct.check_group()?.passed();
    let generation_ok = direct.field_generation()?.passed();
    Ok(SpecializationCheck {
        roots,
        on_curve,
        matches_direct,
        direct_group_ok,
        generation_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::parse_element;

    type P = EllipticPoint<QRationalFunction>;

    fn parse(c: &Curve<QRationalFunction>, s: &str) -> TowerElement<QRationalFunction> {
        parse_element(s, c.radicals()).unwrap()
    }

    #[test]
    fn addition_examples() {
        let c = symbolic_curve();
        let p1 = c.two_torsion(1);
        assert_eq!(c.add(&p1, &P::Infinity).unwrap(), p1);
        assert!(c.add(&p1, &p1).unwrap().is_infinity());
        assert_eq!(c.add(&p1, &c.two_torsion(2)).unwrap(), c.two_torsion(3));
        assert!(c.double(&P::Infinity).unwrap().is_infinity());
        assert!(c.double(&c.two_torsion(2)).unwrap().is_infinity());
    }

    #[test]
    fn halving_closed_forms() {
        let c = symbolic_curve();
        let h1 = c.halve_two_torsion(1).unwrap();
        assert_eq!(h1[0].point.x().unwrap(), &parse(&c, "a1 + s12*s13"));
        assert_eq!(h1[0].point.y().unwrap(), &parse(&c, "s12*s13*(s12 + s13)"));
        assert_eq!(h1[2].point.x().unwrap(), &parse(&c, "a1 - s12*s13"));
        assert_eq!(h1[2].point.y().unwrap(), &parse(&c, "s12*s13*(s12 - s13)"));
        assert_eq!(h1[3].point.y().unwrap(), &parse(&c, "-s12*s13*(s12 - s13)"));
        let h2 = c.halve_two_torsion(2).unwrap();
        assert_eq!(h2[0].point.x().unwrap(), &parse(&c, "a2 + i*s12*s23"));
        assert_eq!(h2[2].point.x().unwrap(), &parse(&c, "a2 - i*s12*s23"));
        let h3 = c.halve_two_torsion(3).unwrap();
        assert_eq!(h3[0].point.x().unwrap(), &parse(&c, "a3 - s13*s23"));
        for h in h1.iter().chain(&h2).chain(&h3) {
            assert_eq!(c.double(&h.point).unwrap(), c.two_torsion(h.parent));
        }
        assert_eq!(c.halve_two_torsion(4).unwrap_err(), TorsionError::RootIndex(4));
    }

    #[test]
    fn operations_stay_on_curve() {
        let c = symbolic_curve();
        let h = c.halve_two_torsion(1).unwrap();
        let q = c.halve_two_torsion(2).unwrap();
        let s = c.add(&h[0].point, &q[1].point).unwrap();
        assert!(c.on_curve(&s));
        assert!(c.on_curve(&c.double(&s).unwrap()));
        assert!(c.add(&s, &c.neg(&s)).unwrap().is_infinity());
        assert_eq!(c.add(&h[0].point, &q[1].point).unwrap(), c.add(&q[1].point, &h[0].point).unwrap());
    }

    #[test]
    fn rational_curve_distinct_roots() {
        let q = |n: i64| BigRational::from_integer(n.into());
        assert_eq!(Curve::new([q(1), q(1), q(2)]).unwrap_err(), TorsionError::RootsNotDistinct);
    }

    #[test]
    fn group_and_generation_over_rationals() {
        let q = |n: i64| BigRational::from_integer(n.into());
        let c = Curve::new([q(0), q(3), q(-5)]).unwrap();
        assert_eq!(crate::tower::tower_is_field(c.radicals()), Some(true));
        let set = c.enumerate_4_torsion().unwrap();
        let g = set.check_group().unwrap();
        assert!(g.passed(), "{g:?}");
        let gen = set.field_generation().unwrap();
        assert!(gen.passed());
        let found = set.search_generation(&[1, 2, 3], 3).unwrap();
        assert!(found.iter().all(|w| w.as_ref().is_some_and(|w| w.verified)));
    }
}

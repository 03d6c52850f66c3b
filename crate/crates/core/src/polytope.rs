//! Hilbert–Mumford verdicts for torus actions through weight polytopes.
//!
//! A vector in a torus representation is recorded by the lattice weights of the
//! weight spaces in which it has a nonzero component. Stability is decided by
//! where the origin sits relative to the convex hull of those weights. All
//! arithmetic here is exact.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lp::{feasible, rank, rat};

/// Enumerating more candidate 1-PS than this falls back to the LP normal.
const WITNESS_SEARCH_LIMIT: u128 = 4_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("torus rank must be positive")]
    ZeroDimension,
    #[error("weight list is empty")]
    NoWeights,
    #[error("weight {index} has {got} coordinates, expected {expected}")]
    WrongLength { index: usize, got: usize, expected: usize },
    #[error("weight {index} duplicates weight {first}")]
    DuplicateWeight { index: usize, first: usize },
    #[error("support is empty (the zero vector has no verdict)")]
    EmptySupport,
    #[error("support index {0} is out of range")]
    SupportOutOfRange(usize),
    #[error("support index {0} is repeated")]
    DuplicateSupport(usize),
    #[error("one-parameter subgroup must be nonzero")]
    ZeroOnePs,
    #[error("one-parameter subgroup {0:?} is not primitive")]
    NotPrimitive(Vec<i64>),
    #[error("monomial {index} has degree {got}, expected {expected}")]
    WrongDegree { index: usize, got: i64, expected: i64 },
    #[error("monomial {index} has a negative exponent")]
    NegativeExponent { index: usize },
    #[error("monomial {index} has {got} exponents, expected {expected}")]
    WrongVariableCount { index: usize, got: usize, expected: usize },
    #[error("at least two variables are required")]
    TooFewVariables,
    #[error("brute-force bound must be at least 1")]
    ZeroBound,
}

/// Weights of a torus representation together with the support of a vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawWeightSystem")]
pub struct WeightSystem {
    dim: usize,
    weights: Vec<Vec<i64>>,
    support: Vec<usize>,
}

#[derive(Deserialize)]
struct RawWeightSystem {
    dim: usize,
    weights: Vec<Vec<i64>>,
    support: Option<Vec<usize>>,
}

impl TryFrom<RawWeightSystem> for WeightSystem {
    type Error = PolytopeError;

    fn try_from(raw: RawWeightSystem) -> Result<Self, Self::Error> {
        let support = raw.support.unwrap_or_else(|| (0..raw.weights.len()).collect());
        WeightSystem::new(raw.dim, raw.weights, support)
    }
}

impl WeightSystem {
    pub fn new(dim: usize, weights: Vec<Vec<i64>>, support: Vec<usize>) -> Result<Self, PolytopeError> {
        if dim == 0 {
            return Err(PolytopeError::ZeroDimension);
        }
        if weights.is_empty() {
            return Err(PolytopeError::NoWeights);
        }
        let mut seen = std::collections::HashMap::new();
        for (i, w) in weights.iter().enumerate() {
            if w.len() != dim {
                return Err(PolytopeError::WrongLength { index: i, got: w.len(), expected: dim });
            }
            if let Some(&first) = seen.get(w) {
                return Err(PolytopeError::DuplicateWeight { index: i, first });
            }
            seen.insert(w.clone(), i);
        }
        if support.is_empty() {
            return Err(PolytopeError::EmptySupport);
        }
        let mut used = HashSet::new();
        for &s in &support {
            if s >= weights.len() {
                return Err(PolytopeError::SupportOutOfRange(s));
            }
            if !used.insert(s) {
                return Err(PolytopeError::DuplicateSupport(s));
            }
        }
        Ok(Self { dim, weights, support })
    }

    /// Every weight supported.
    pub fn full(dim: usize, weights: Vec<Vec<i64>>) -> Result<Self, PolytopeError> {
        let support = (0..weights.len()).collect();
        Self::new(dim, weights, support)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weights(&self) -> &[Vec<i64>] {
        &self.weights
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn supported(&self) -> impl Iterator<Item = &[i64]> + '_ {
        self.support.iter().map(move |&i| self.weights[i].as_slice())
    }
}

/// A one-parameter subgroup, stored as a primitive integral vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct OnePs(Vec<i64>);

impl TryFrom<Vec<i64>> for OnePs {
    type Error = PolytopeError;
    fn try_from(v: Vec<i64>) -> Result<Self, Self::Error> {
        OnePs::new(v)
    }
}

impl From<OnePs> for Vec<i64> {
    fn from(v: OnePs) -> Self {
        v.0
    }
}

impl OnePs {
    pub fn new(v: Vec<i64>) -> Result<Self, PolytopeError> {
        match content(&v) {
            0 => Err(PolytopeError::ZeroOnePs),
            1 => Ok(Self(v)),
            _ => Err(PolytopeError::NotPrimitive(v)),
        }
    }

    /// Divides out the content of a nonzero vector.
    pub fn primitive(mut v: Vec<i64>) -> Result<Self, PolytopeError> {
        let g = content(&v);
        if g == 0 {
            return Err(PolytopeError::ZeroOnePs);
        }
        for x in &mut v {
            *x /= g;
        }
        Ok(Self(v))
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.iter().map(|x| -x).collect())
    }

    fn sup_norm(&self) -> i64 {
        self.0.iter().map(|x| x.abs()).max().unwrap_or(0)
    }
}

impl fmt::Display for OnePs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

fn content(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StabilityClass {
    Stable,
    Polystable,
    StrictlySemistable,
    Unstable,
}

impl StabilityClass {
    pub fn is_semistable(self) -> bool {
        self != StabilityClass::Unstable
    }

    pub fn is_polystable(self) -> bool {
        matches!(self, StabilityClass::Stable | StabilityClass::Polystable)
    }
}

impl fmt::Display for StabilityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            StabilityClass::Stable => "Stable",
            StabilityClass::Polystable => "Polystable",
            StabilityClass::StrictlySemistable => "StrictlySemistable",
            StabilityClass::Unstable => "Unstable",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub class: StabilityClass,
    pub witness: Option<OnePs>,
    pub weight: Option<i64>,
}

impl Verdict {
    pub(crate) fn of(class: StabilityClass) -> Self {
        Self { class, witness: None, weight: None }
    }

    pub(crate) fn unstable(witness: OnePs, weight: i64) -> Self {
        Self { class: StabilityClass::Unstable, witness: Some(witness), weight: Some(weight) }
    }
}

fn pairing(m: &[i64], v: &[i64]) -> i64 {
    m.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Hilbert–Mumford weight: the smallest pairing of a supported weight with `v`.
pub fn ops_weight(ws: &WeightSystem, v: &OnePs) -> i64 {
    assert_eq!(v.0.len(), ws.dim, "1-PS dimension mismatch");
    ws.supported().map(|m| pairing(m, &v.0)).min().expect("support is nonempty")
}

/// Decides stability from the position of the origin in the weight polytope.
pub fn hm_classify(ws: &WeightSystem) -> Verdict {
    let pts: Vec<Vec<BigRational>> = ws.supported().map(|m| m.iter().map(|&x| rat(x)).collect()).collect();
    let k = pts.len();
    let d = ws.dim;

    // 0 = sum λ_i m_i, sum λ_i = 1, λ >= 0.
    let mut a: Vec<Vec<BigRational>> = (0..d).map(|c| pts.iter().map(|p| p[c].clone()).collect()).collect();
    a.push(vec![rat(1); k]);
    let mut b = vec![BigRational::zero(); d];
    b.push(rat(1));
    if feasible(&a, &b).is_none() {
        let normal = separating_normal(&pts, d);
        let witness = smallest_witness(ws, &normal);
        let weight = ops_weight(ws, &witness);
        return Verdict::unstable(witness, weight);
    }

    // Relative interior: 0 = sum λ_i m_i with every λ_i >= 1.
    let a: Vec<Vec<BigRational>> = (0..d).map(|c| pts.iter().map(|p| p[c].clone()).collect()).collect();
    let b: Vec<BigRational> = (0..d).map(|c| -pts.iter().map(|p| p[c].clone()).sum::<BigRational>()).collect();
    if feasible(&a, &b).is_some() {
        if rank(&pts) == d {
            Verdict::of(StabilityClass::Stable)
        } else {
            Verdict::of(StabilityClass::Polystable)
        }
    } else {
        Verdict::of(StabilityClass::StrictlySemistable)
    }
}

/// A primitive integral `v` with `<m, v> >= 1` for every supported weight.
fn separating_normal(pts: &[Vec<BigRational>], d: usize) -> OnePs {
    // v = v⁺ − v⁻ and slacks s_i: <m_i, v> − s_i = 1.
    let k = pts.len();
    let a: Vec<Vec<BigRational>> = pts
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let mut row: Vec<BigRational> = p.clone();
            row.extend(p.iter().map(|x| -x.clone()));
            row.extend((0..k).map(|j| if i == j { rat(-1) } else { rat(0) }));
            row
        })
        .collect();
    let b = vec![rat(1); k];
    let x = feasible(&a, &b).expect("origin outside the hull admits a separating normal");
    let v: Vec<BigRational> = (0..d).map(|c| &x[c] - &x[d + c]).collect();
    let den = v.iter().fold(BigInt::from(1), |l, q| l.lcm(q.denom()));
    let ints: Vec<i64> = v
        .iter()
        .map(|q| (q * BigRational::from_integer(den.clone())).to_integer().to_i64().expect("normal fits in i64"))
        .collect();
    OnePs::primitive(ints).expect("separating normal is nonzero")
}

/// The first destabilizing 1-PS in (sup-norm, lexicographic) order, searched up
/// to the sup-norm of a known destabilizing normal.
fn smallest_witness(ws: &WeightSystem, fallback: &OnePs) -> OnePs {
    let bound = fallback.sup_norm();
    let side = (2 * bound + 1) as u128;
    let count = side.checked_pow(ws.dim as u32).unwrap_or(u128::MAX);
    if count > WITNESS_SEARCH_LIMIT {
        return fallback.clone();
    }
    for shell in 1..=bound {
        for v in shell_vectors(ws.dim, shell) {
            if let Ok(v) = OnePs::new(v) {
                if ops_weight(ws, &v) > 0 {
                    return v;
                }
            }
        }
    }
    fallback.clone()
}

/// All vectors of sup-norm exactly `shell`, in lexicographic order.
fn shell_vectors(dim: usize, shell: i64) -> impl Iterator<Item = Vec<i64>> {
    let mut cur = vec![-shell; dim];
    let mut done = false;
    std::iter::from_fn(move || loop {
        if done {
            return None;
        }
        let out = cur.clone();
        let mut i = dim;
        loop {
            if i == 0 {
                done = true;
                break;
            }
            i -= 1;
            if cur[i] < shell {
                cur[i] += 1;
                for x in cur.iter_mut().skip(i + 1) {
                    *x = -shell;
                }
                break;
            }
        }
        if out.iter().any(|x| x.abs() == shell) {
            return Some(out);
        }
    })
}

/// Every primitive vector with sup-norm at most `bound`, ordered by
/// (sup-norm, lexicographic).
pub fn primitive_vectors(dim: usize, bound: i64) -> Vec<OnePs> {
    (1..=bound).flat_map(|s| shell_vectors(dim, s)).filter_map(|v| OnePs::new(v).ok()).collect()
}

/// Enumerative verdict from all primitive 1-PS with sup-norm at most `bound`.
pub fn brute_force_1ps(ws: &WeightSystem, bound: i64) -> Result<Verdict, PolytopeError> {
    if bound < 1 {
        return Err(PolytopeError::ZeroBound);
    }
    let vs = primitive_vectors(ws.dim, bound);
    let rho: Vec<i64> = vs.iter().map(|v| ops_weight(ws, v)).collect();
    if let Some(i) = rho.iter().position(|&r| r > 0) {
        return Ok(Verdict::unstable(vs[i].clone(), rho[i]));
    }
    if rho.iter().all(|&r| r < 0) {
        return Ok(Verdict::of(StabilityClass::Stable));
    }
    let closed = vs.iter().zip(&rho).filter(|(_, &r)| r == 0).all(|(v, _)| ops_weight(ws, &v.inverse()) == 0);
    Ok(Verdict::of(if closed { StabilityClass::Polystable } else { StabilityClass::StrictlySemistable }))
}

/// Changes the linearisation by the character `chi`: every weight moves by `-chi`.
pub fn translate_weights(ws: &WeightSystem, chi: &[i64]) -> WeightSystem {
    assert_eq!(chi.len(), ws.dim, "character dimension mismatch");
    let weights = ws.weights.iter().map(|m| m.iter().zip(chi).map(|(a, c)| a - c).collect()).collect();
    WeightSystem { dim: ws.dim, weights, support: ws.support.clone() }
}

/// Stability of a hypersurface under the diagonal torus of `SL(nvars)` in the
/// given coordinates, from the exponents of its monomials.
///
/// This is a necessary condition for stability under the full special linear
/// group, not a sufficient one.
pub fn hypersurface_newton(degree: i64, nvars: usize, monomials: &[Vec<i64>]) -> Result<Verdict, PolytopeError> {
    if nvars < 2 {
        return Err(PolytopeError::TooFewVariables);
    }
    if monomials.is_empty() {
        return Err(PolytopeError::NoWeights);
    }
    for (i, a) in monomials.iter().enumerate() {
        if a.len() != nvars {
            return Err(PolytopeError::WrongVariableCount { index: i, got: a.len(), expected: nvars });
        }
        if a.iter().any(|&x| x < 0) {
            return Err(PolytopeError::NegativeExponent { index: i });
        }
        let s: i64 = a.iter().sum();
        if s != degree {
            return Err(PolytopeError::WrongDegree { index: i, got: s, expected: degree });
        }
    }
    let k = nvars as i64;
    let n = nvars - 1;
    // Centre the Newton polytope (scaled by nvars) and drop the last coordinate,
    // which identifies the sum-zero sublattice with Z^n.
    let reduced: Vec<Vec<i64>> = monomials.iter().map(|a| a[..n].iter().map(|&x| k * x - degree).collect()).collect();
    let ws = WeightSystem::full(n, reduced)?;
    let v = hm_classify(&ws);
    let Some(w) = v.witness else {
        return Ok(v);
    };
    let s: i64 = w.0.iter().sum();
    let mut lifted: Vec<i64> = w.0.iter().map(|&x| k * x - s).collect();
    lifted.push(-s);
    let lifted = OnePs::primitive(lifted).expect("lift of a nonzero 1-PS is nonzero");
    let weight = monomials.iter().map(|a| pairing(a, &lifted.0)).min().expect("monomials are nonempty");
    Ok(Verdict::unstable(lifted, weight))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use StabilityClass::*;

    fn ws(dim: usize, w: &[&[i64]]) -> WeightSystem {
        WeightSystem::full(dim, w.iter().map(|x| x.to_vec()).collect()).unwrap()
    }

    #[test]
    fn binary_quartic_weight_at_lowest_coefficient() {
        // weights 2j - n for n = 4, coefficients j >= 2 nonzero
        let weights: Vec<Vec<i64>> = (0..=4).map(|j| vec![2 * j - 4]).collect();
        let w = WeightSystem::new(1, weights, vec![2, 3, 4]).unwrap();
        assert_eq!(ops_weight(&w, &OnePs::new(vec![1]).unwrap()), 0);
        assert_eq!(hm_classify(&w).class, StrictlySemistable);
    }

    #[test]
    fn orthogonal_weights_pair_to_zero() {
        let w = ws(2, &[&[1, 0], &[-3, 0]]);
        assert_eq!(ops_weight(&w, &OnePs::new(vec![0, 1]).unwrap()), 0);
    }

    #[test]
    fn symmetric_pair_is_stable() {
        assert_eq!(hm_classify(&ws(1, &[&[-1], &[1]])).class, Stable);
        assert_eq!(brute_force_1ps(&ws(1, &[&[-1], &[1]]), 1).unwrap().class, Stable);
    }

    #[test]
    fn scalar_action_is_unstable_with_positive_witness() {
        let w = WeightSystem::new(1, vec![vec![1]], vec![0]).unwrap();
        let v = hm_classify(&w);
        assert_eq!(v.class, Unstable);
        assert_eq!(v.witness.unwrap().as_slice(), &[1]);
        assert_eq!(v.weight, Some(1));
    }

    #[test]
    fn same_sign_weights_unstable_under_brute_force() {
        let v = brute_force_1ps(&ws(1, &[&[2], &[3]]), 1).unwrap();
        assert_eq!(v.class, Unstable);
        assert_eq!(v.weight, Some(2));
    }

    #[test]
    fn triangle_around_origin_is_stable() {
        let w = ws(2, &[&[1, 0], &[0, 1], &[-1, -1]]);
        assert_eq!(hm_classify(&w).class, Stable);
        assert_eq!(brute_force_1ps(&w, 5).unwrap().class, Stable);
    }

    #[test]
    fn shifted_scalar_action_is_polystable() {
        let base = ws(1, &[&[1]]);
        let shifted = translate_weights(&base, &[1]);
        assert_eq!(hm_classify(&shifted).class, Polystable);
        let neg = translate_weights(&base, &[-1]);
        assert_eq!(hm_classify(&neg).class, Unstable);
        assert_eq!(translate_weights(&base, &[0]), base);
    }

    #[test]
    fn segment_through_origin_is_polystable() {
        let w = ws(2, &[&[1, 1], &[-2, -2]]);
        assert_eq!(hm_classify(&w).class, Polystable);
        assert_eq!(brute_force_1ps(&w, 4).unwrap().class, Polystable);
    }

    #[test]
    fn origin_as_vertex_is_strictly_semistable() {
        let w = ws(2, &[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(hm_classify(&w).class, StrictlySemistable);
        assert_eq!(brute_force_1ps(&w, 3).unwrap().class, StrictlySemistable);
    }

    #[test]
    fn witness_is_first_in_order() {
        let w = ws(2, &[&[3, 1], &[2, -1]]);
        let v = hm_classify(&w);
        assert_eq!(v, brute_force_1ps(&w, 5).unwrap());
        assert_eq!(v.witness.unwrap().as_slice(), &[1, -1]);
    }

    #[test]
    fn shell_order_is_lexicographic() {
        let vs: Vec<Vec<i64>> = primitive_vectors(2, 1).into_iter().map(Vec::from).collect();
        assert_eq!(vs, vec![vec![-1, -1], vec![-1, 0], vec![-1, 1], vec![0, -1], vec![0, 1], vec![1, -1], vec![1, 0], vec![1, 1]]);
        assert_eq!(primitive_vectors(2, 2).len(), 16);
    }

    #[test]
    fn fermat_conic_and_cubic_are_stable() {
        let conic = hypersurface_newton(2, 3, &[vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2]]).unwrap();
        assert_eq!(conic.class, Stable);
        let cubic = hypersurface_newton(3, 3, &[vec![3, 0, 0], vec![0, 3, 0], vec![0, 0, 3]]).unwrap();
        assert_eq!(cubic.class, Stable);
    }

    #[test]
    fn cuspidal_cubic_unstable_with_nonnegative_pairing() {
        let mons = [vec![0, 2, 1], vec![3, 0, 0]];
        let v = hypersurface_newton(3, 3, &mons).unwrap();
        assert_eq!(v.class, Unstable);
        let w = v.witness.unwrap();
        assert_eq!(w.as_slice().iter().sum::<i64>(), 0);
        let min = mons.iter().map(|a| pairing(a, w.as_slice())).min().unwrap();
        assert_eq!(Some(min), v.weight);
        assert!(min > 0);
    }

    #[test]
    fn nodal_cubic_is_strictly_semistable() {
        let v = hypersurface_newton(3, 3, &[vec![1, 1, 1], vec![3, 0, 0], vec![0, 3, 0]]).unwrap();
        assert_eq!(v.class, StrictlySemistable);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(WeightSystem::new(1, vec![vec![1]], vec![]), Err(PolytopeError::EmptySupport));
        assert_eq!(WeightSystem::full(1, vec![]), Err(PolytopeError::NoWeights));
        assert!(matches!(WeightSystem::full(1, vec![vec![1], vec![1]]), Err(PolytopeError::DuplicateWeight { .. })));
        assert!(matches!(hypersurface_newton(3, 3, &[vec![1, 1, 0]]), Err(PolytopeError::WrongDegree { .. })));
        assert_eq!(OnePs::new(vec![2, 4]), Err(PolytopeError::NotPrimitive(vec![2, 4])));
        assert_eq!(OnePs::new(vec![0]), Err(PolytopeError::ZeroOnePs));
    }

    fn arb_ws(dim: usize) -> impl Strategy<Value = WeightSystem> {
        prop::collection::hash_set(prop::collection::vec(-4i64..=4, dim), 1..7)
            .prop_map(move |s| WeightSystem::full(dim, s.into_iter().collect()).unwrap())
    }

    /// Limits of the torus orbit along `v`: the 1-PS destabilizes exactly when
    /// every component is scaled by a positive power, so the limit at 0 is the origin.
    fn limit_is_origin(ws: &WeightSystem, v: &OnePs) -> bool {
        ws.supported().all(|m| pairing(m, v.as_slice()) > 0)
    }

    proptest! {
        #[test]
        fn weight_matches_limit_oracle(w in arb_ws(2), v in prop::collection::vec(-5i64..=5, 2)) {
            prop_assume!(v.iter().any(|&x| x != 0));
            let v = OnePs::primitive(v).unwrap();
            prop_assert_eq!(ops_weight(&w, &v) > 0, limit_is_origin(&w, &v));
        }

        #[test]
        fn stable_iff_all_weights_negative(w in arb_ws(2)) {
            let stable = primitive_vectors(2, 8).iter().all(|v| ops_weight(&w, v) < 0);
            prop_assert_eq!(hm_classify(&w).class == Stable, stable);
        }

        #[test]
        fn agrees_with_enumeration_in_plane(w in arb_ws(2)) {
            // facet normals of hulls in [-4,4]^2 have sup-norm at most 8
            prop_assert_eq!(hm_classify(&w), brute_force_1ps(&w, 8).unwrap());
        }

        #[test]
        fn translation_round_trips(w in arb_ws(3), chi in prop::collection::vec(-3i64..=3, 3)) {
            let back: Vec<i64> = chi.iter().map(|x| -x).collect();
            prop_assert_eq!(translate_weights(&translate_weights(&w, &chi), &back), w);
        }

        #[test]
        fn unstable_witness_has_positive_weight(w in arb_ws(3)) {
            let v = hm_classify(&w);
            if v.class == Unstable {
                let wit = v.witness.clone().unwrap();
                prop_assert_eq!(Some(ops_weight(&w, &wit)), v.weight);
                prop_assert!(v.weight.unwrap() > 0);
            } else {
                prop_assert!(v.witness.is_none());
            }
        }

        #[test]
        fn class_invariant_under_unimodular_change(w in arb_ws(2), a in -2i64..=2, swap in any::<bool>()) {
            // shear (x, y) -> (x + a y, y), optionally followed by a swap
            let weights: Vec<Vec<i64>> = w.weights().iter().map(|m| {
                let s = vec![m[0] + a * m[1], m[1]];
                if swap { vec![s[1], s[0]] } else { s }
            }).collect();
            let moved = WeightSystem::full(2, weights).unwrap();
            prop_assert_eq!(hm_classify(&moved).class, hm_classify(&w).class);
        }

        #[test]
        fn hypersurface_class_invariant_under_permutation(
            mons in prop::collection::hash_set((0i64..=3, 0i64..=3), 1..6),
            perm in 0usize..6,
        ) {
            let mons: Vec<Vec<i64>> = mons.into_iter().filter(|(a, b)| a + b <= 3).map(|(a, b)| vec![a, b, 3 - a - b]).collect();
            prop_assume!(!mons.is_empty());
            let orders = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
            let p = orders[perm];
            let permuted: Vec<Vec<i64>> = mons.iter().map(|m| p.iter().map(|&i| m[i]).collect()).collect();
            let a = hypersurface_newton(3, 3, &mons).unwrap();
            let b = hypersurface_newton(3, 3, &permuted).unwrap();
            prop_assert_eq!(a.class, b.class);
            if let (Some(wa), Some(wb)) = (a.witness, b.witness) {
                prop_assert!(pairing_min(&mons, wa.as_slice()) > 0);
                prop_assert!(pairing_min(&permuted, wb.as_slice()) > 0);
            }
        }
    }

    fn pairing_min(mons: &[Vec<i64>], v: &[i64]) -> i64 {
        mons.iter().map(|a| pairing(a, v)).min().unwrap()
    }
}

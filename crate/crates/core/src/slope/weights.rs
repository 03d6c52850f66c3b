//! Weights of deformation to the normal cone, their asymptotics, the
//! Donaldson–Futaki coefficient, and Chow slopes.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::poly::RationalPoly;
use super::{mu, HilbertData, HilbertSamuelData, SlopeError};
use crate::rational::{self, int, Rational};

/// One integer weight; `k` is present in table mode.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightEntry {
    pub r: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<i64>,
    #[serde(with = "rational::bigint_as_str")]
    pub w: BigInt,
}

/// Integer weights of a test configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum TestConfigWeights {
    /// `w_r`, the total weight on `H⁰(X₀, L^r)`.
    Sequence { entries: Vec<WeightEntry> },
    /// `w_{r,k}`, the total weight on `H⁰(X₀, L^{rk})` for the embedding by `L^r`.
    Table { entries: Vec<WeightEntry> },
}

impl TestConfigWeights {
    pub fn entries(&self) -> &[WeightEntry] {
        match self {
            TestConfigWeights::Sequence { entries } | TestConfigWeights::Table { entries } => entries,
        }
    }
}

fn cr_integer(c: &Rational, r: i64) -> Result<i64, SlopeError> {
    let cr = c * int(r);
    if !cr.is_integer() || cr.is_negative() {
        return Err(SlopeError::NonIntegralCr);
    }
    cr.to_integer().to_i64().ok_or(SlopeError::NonIntegralCr)
}

/// `w_r = −Σ_{j=1}^{cr} h⁰(I_Z^j(r)) − cr·h⁰(O_X(r))`.
pub fn normal_cone_weight(hs: &HilbertSamuelData, c: &Rational, r: i64) -> Result<BigInt, SlopeError> {
    let oracle = hs.exact_h0.as_ref().ok_or(SlopeError::OracleMissing)?;
    if c.is_negative() || c > &hs.epsilon {
        return Err(SlopeError::COutOfRange { c: rational::format(c), epsilon: rational::format(&hs.epsilon) });
    }
    let cr = cr_integer(c, r)?;
    let mut w = BigInt::zero();
    for j in 1..=cr {
        w -= oracle.h0(j, r)?;
    }
    if cr > 0 {
        w -= oracle.h0_ambient(r)? * cr;
    }
    Ok(w)
}

/// Coefficients of `r^{n+1}` and `rⁿ` in the trapezium-rule estimate of `w_r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightPrediction {
    #[serde(with = "rational::as_str")]
    pub leading: Rational,
    #[serde(with = "rational::as_str")]
    pub subleading: Rational,
}

impl WeightPrediction {
    pub fn eval(&self, n: u32, r: i64) -> Rational {
        let rr = int(r);
        let lead = num_traits::pow(rr.clone(), n as usize + 1);
        let sub = num_traits::pow(rr, n as usize);
        &self.leading * lead + &self.subleading * sub
    }
}

/// `w_r ≈ −(∫₀^c a₀ + c·a₀) r^{n+1} − (∫₀^c (a₁ + a₀′/2) + c·a₁) rⁿ`.
pub fn trapezium_asymptotics(hs: &HilbertSamuelData, c: &Rational) -> WeightPrediction {
    let a = hs.volume_poly().eval(c);
    let b = hs.numerator_poly().eval(c);
    WeightPrediction { leading: -(a + c * hs.a0x.coeff(0)), subleading: -(b + c * hs.a1x.coeff(0)) }
}

/// `w_r` at the given `r`.
pub fn weights_sequence(hs: &HilbertSamuelData, c: &Rational, rs: &[i64]) -> Result<TestConfigWeights, SlopeError> {
    let entries = rs
        .iter()
        .map(|&r| Ok(WeightEntry { r, k: None, w: normal_cone_weight(hs, c, r)? }))
        .collect::<Result<_, SlopeError>>()?;
    Ok(TestConfigWeights::Sequence { entries })
}

/// `w_{r,k} = w_{rk}` for the normal-cone degeneration embedded by `L^r`.
pub fn weights_table(hs: &HilbertSamuelData, c: &Rational, rs: &[i64], ks: &[i64]) -> Result<TestConfigWeights, SlopeError> {
    let mut entries = Vec::new();
    for &r in rs {
        for &k in ks {
            entries.push(WeightEntry { r, k: Some(k), w: normal_cone_weight(hs, c, r * k)? });
        }
    }
    Ok(TestConfigWeights::Table { entries })
}

/// Exact fit of degree `deg` through all samples.
fn exact_fit(points: &[(Rational, Rational)], deg: usize) -> Result<RationalPoly, SlopeError> {
    if points.len() < deg + 1 {
        return Err(SlopeError::Underdetermined);
    }
    let fit = RationalPoly::interpolate(&points[points.len() - deg - 1..]);
    if points.iter().any(|(x, y)| &fit.eval(x) != y) {
        return Err(SlopeError::NotPolynomial);
    }
    Ok(fit)
}

/// The normalised coefficient of `1/k` in `w/(k·h⁰)`.
///
/// Positive values signal destabilizing test configurations: on the normal
/// cone of `Z` the sign agrees with `μ_c(I_Z) − μ(X)`.
pub fn df_invariant(w: &TestConfigWeights, h: &HilbertData) -> Result<Rational, SlopeError> {
    let n = h.n as usize;
    let (a0, a1) = (&h.a0, &h.a1);
    if !a0.is_positive() {
        return Err(SlopeError::NonPositiveA0);
    }
    let normalise = |b0: &Rational, b1: &Rational| (b0 * a1 - b1 * a0) / (a0 * a0);
    match w {
        TestConfigWeights::Sequence { entries } => {
            let mut pts: Vec<(Rational, Rational)> = entries.iter().map(|e| (int(e.r), Rational::from_integer(e.w.clone()))).collect();
            pts.sort();
            pts.dedup();
            let fit = exact_fit(&pts, n + 1)?;
            Ok(normalise(&fit.coeff(n + 1), &fit.coeff(n)))
        }
        TestConfigWeights::Table { entries } => {
            let mut rows: BTreeMap<i64, Vec<(Rational, Rational)>> = BTreeMap::new();
            for e in entries {
                let k = e.k.ok_or(SlopeError::Underdetermined)?;
                rows.entry(e.r).or_default().push((int(k), Rational::from_integer(e.w.clone())));
            }
            if rows.is_empty() {
                return Err(SlopeError::Underdetermined);
            }
            // F(r) = normalised coefficient with r fixed; its limit as r → ∞ is
            // read off an exact fit in s = 1/r.
            let mut per_r = Vec::new();
            for (r, mut pts) in rows {
                pts.sort();
                pts.dedup();
                let fit = exact_fit(&pts, n + 1)?;
                let rr = int(r);
                let lead = fit.coeff(n + 1) / num_traits::pow(rr.clone(), n + 1);
                let sub = fit.coeff(n) / num_traits::pow(rr.clone(), n);
                per_r.push((Rational::from_integer(1.into()) / rr, normalise(&lead, &sub)));
            }
            if per_r.iter().all(|(_, f)| f == &per_r[0].1) {
                return Ok(per_r[0].1.clone());
            }
            let fit = RationalPoly::interpolate(&per_r);
            Ok(fit.coeff(0))
        }
    }
}

/// The Donaldson–Futaki coefficient of the normal-cone degeneration at `c`,
/// sampling `r` in multiples of the denominator of `c` beyond the range where
/// the section oracle is inexact.
pub fn df_from_family(h: &HilbertData, hs: &HilbertSamuelData, c: &Rational) -> Result<(Rational, TestConfigWeights), SlopeError> {
    let q = c.denom().to_i64().ok_or(SlopeError::NonIntegralCr)?;
    let count = h.n as i64 + 4;
    let mut start = 1;
    while start < 10_000 {
        let rs: Vec<i64> = (start..start + count).map(|m| m * q).collect();
        match weights_sequence(hs, c, &rs) {
            Ok(w) => match df_invariant(&w, h) {
                Ok(df) => return Ok((df, w)),
                Err(SlopeError::NotPolynomial) => start += 1,
                Err(e) => return Err(e),
            },
            Err(SlopeError::OracleDomain { .. }) => start += 1,
            Err(e) => return Err(e),
        }
    }
    Err(SlopeError::Underdetermined)
}

/// `Ch_c(I_Z) = Σ_{i=1}^c h⁰(I_Z^i(1)) / ∫₀^c a₀`.
pub fn chow_slope(h0_list: &[BigInt], hs: &HilbertSamuelData, c: u32) -> Result<Rational, SlopeError> {
    let cq = int(i64::from(c));
    if c == 0 || cq > hs.epsilon {
        return Err(SlopeError::COutOfRange { c: c.to_string(), epsilon: rational::format(&hs.epsilon) });
    }
    if h0_list.len() != c as usize {
        return Err(SlopeError::WrongCount { expected: c as usize, got: h0_list.len() });
    }
    let den = hs.volume_poly().eval(&cq);
    if !den.is_positive() {
        return Err(SlopeError::ZeroDenominator);
    }
    let total: BigInt = h0_list.iter().sum();
    Ok(Rational::from_integer(total) / den)
}

/// `Ch(X) = (N+1)/a₀` for `X ⊂ Pᴺ`.
pub fn chow_mu(h: &HilbertData, n_proj: u64) -> Result<Rational, SlopeError> {
    if !h.a0.is_positive() {
        return Err(SlopeError::NonPositiveA0);
    }
    Ok(Rational::from_integer(BigInt::from(n_proj) + 1) / &h.a0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChowComparison {
    pub c: u32,
    #[serde(with = "rational::as_str")]
    pub ch_c: Rational,
    #[serde(with = "rational::as_str")]
    pub ch_x: Rational,
    /// `Ch_c ≤ Ch(X)`: the subscheme does not Chow-destabilize at `c`.
    pub passes: bool,
    pub boundary: bool,
    /// `μ_c − μ(X)`, for cross-checking against the K-slope.
    #[serde(with = "rational::as_str")]
    pub k_margin: Rational,
}

/// Compares `Ch_c` with `Ch(X)` using section counts from the family oracle;
/// `N + 1 = h⁰(L)`.
pub fn chow_compare(h: &HilbertData, hs: &HilbertSamuelData, c: u32) -> Result<ChowComparison, SlopeError> {
    let oracle = hs.exact_h0.as_ref().ok_or(SlopeError::OracleMissing)?;
    let list = (1..=i64::from(c)).map(|i| oracle.h0(i, 1)).collect::<Result<Vec<_>, _>>()?;
    let sections = oracle.h0_ambient(1)?;
    let n_proj = (sections - 1u32).to_u64().ok_or(SlopeError::InvalidFamily("no sections".into()))?;
    let ch_c = chow_slope(&list, hs, c)?;
    let ch_x = chow_mu(h, n_proj)?;
    let k_margin = super::mu_c(hs, &int(i64::from(c)))? - mu(h)?;
    Ok(ChowComparison { c, passes: ch_c <= ch_x, boundary: ch_c == ch_x, ch_c, ch_x, k_margin })
}

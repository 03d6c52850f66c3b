//! Exact slope calculators for K-stability and Chow stability.
//!
//! A polarised variety contributes `h⁰(O_X(r)) = a₀rⁿ + a₁rⁿ⁻¹ + …` and a
//! subscheme `Z` contributes the Hilbert–Samuel coefficients `a₀(x)`, `a₁(x)`
//! of `h⁰(I_Z^{xr}(r))`, valid for `0 ≤ x ≤ ε`. Every quantity here is an exact
//! rational.

mod family;
pub mod poly;
mod sheaf;
mod weights;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use family::{hilbert_samuel_from_oracle, Family, SectionOracle};
pub use poly::{RationalPoly, Root};
pub use sheaf::{curve_bundle_poly, gieseker_compare, sheaf_verdict, slope_compare, Relation, SheafData, SheafVerdict, SubSheaf};
pub use weights::{
    chow_mu, chow_slope, chow_compare, df_from_family, df_invariant, normal_cone_weight, trapezium_asymptotics, weights_sequence,
    weights_table, ChowComparison, TestConfigWeights, WeightEntry, WeightPrediction,
};

use crate::rational::{self, frac, int, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SlopeError {
    #[error("c = {c} lies outside (0, {epsilon}]")]
    COutOfRange { c: String, epsilon: String },
    #[error("the integral of a0 over [0, c] is not positive")]
    ZeroDenominator,
    #[error("a{which}(0) = {got} disagrees with the ambient a{which} = {expected}")]
    Inconsistent { which: u8, got: String, expected: String },
    #[error("a0 must be positive")]
    NonPositiveA0,
    #[error("family has no exact section oracle")]
    OracleMissing,
    #[error("section oracle has no exact value at j = {j}, r = {r}")]
    OracleDomain { j: i64, r: i64 },
    #[error("c·r must be a nonnegative integer")]
    NonIntegralCr,
    #[error("not enough samples for an exact polynomial fit")]
    Underdetermined,
    #[error("weights are not polynomial in r on the given samples")]
    NotPolynomial,
    #[error("expected {expected} section counts, got {got}")]
    WrongCount { expected: usize, got: usize },
    #[error("polynomial {0} is not monic")]
    NonMonic(String),
    #[error("Hilbert polynomials have different degrees ({0} and {1})")]
    DegreeMismatch(usize, usize),
    #[error("invalid family: {0}")]
    InvalidFamily(String),
}

/// Leading Hilbert coefficients of `(X, L)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertData {
    pub n: u32,
    #[serde(with = "rational::as_str")]
    pub a0: Rational,
    #[serde(with = "rational::as_str")]
    pub a1: Rational,
    pub description: String,
}

/// Hilbert–Samuel data of a subscheme, valid for `x ∈ [0, ε]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertSamuelData {
    pub a0x: RationalPoly,
    pub a1x: RationalPoly,
    #[serde(with = "rational::as_str")]
    pub epsilon: Rational,
    pub saturated_at_epsilon: bool,
    /// `L - εZ` is pulled back from a contraction, making equality at `ε` polystable.
    pub contraction_at_epsilon: bool,
    pub exact_h0: Option<SectionOracle>,
}

impl HilbertSamuelData {
    /// `∫₀^c a₀(x) dx` as a polynomial in `c`.
    pub fn volume_poly(&self) -> RationalPoly {
        self.a0x.antiderivative()
    }

    /// `∫₀^c (a₁(x) + a₀′(x)/2) dx` as a polynomial in `c`.
    pub fn numerator_poly(&self) -> RationalPoly {
        (&self.a1x + &self.a0x.derivative().scale(&frac(1, 2))).antiderivative()
    }

    fn check_c(&self, c: &Rational) -> Result<(), SlopeError> {
        if !c.is_positive() || c > &self.epsilon {
            return Err(SlopeError::COutOfRange { c: rational::format(c), epsilon: rational::format(&self.epsilon) });
        }
        Ok(())
    }

    fn check_against(&self, h: &HilbertData) -> Result<(), SlopeError> {
        let a0 = self.a0x.coeff(0);
        if a0 != h.a0 {
            return Err(SlopeError::Inconsistent { which: 0, got: rational::format(&a0), expected: rational::format(&h.a0) });
        }
        let a1 = self.a1x.coeff(0);
        if a1 != h.a1 {
            return Err(SlopeError::Inconsistent { which: 1, got: rational::format(&a1), expected: rational::format(&h.a1) });
        }
        Ok(())
    }
}

/// `μ(X) = a₁/a₀`.
pub fn mu(h: &HilbertData) -> Result<Rational, SlopeError> {
    if !h.a0.is_positive() {
        return Err(SlopeError::NonPositiveA0);
    }
    Ok(&h.a1 / &h.a0)
}

/// `μ_c(I_Z) = ∫₀^c (a₁ + a₀′/2) / ∫₀^c a₀`.
pub fn mu_c(hs: &HilbertSamuelData, c: &Rational) -> Result<Rational, SlopeError> {
    hs.check_c(c)?;
    let den = hs.volume_poly().eval(c);
    if !den.is_positive() {
        return Err(SlopeError::ZeroDenominator);
    }
    Ok(hs.numerator_poly().eval(c) / den)
}

/// `lim_{c→0⁺} μ_c = (a₁(0) + a₀′(0)/2)/a₀(0)`.
pub fn mu_c_limit_at_zero(hs: &HilbertSamuelData) -> Result<Rational, SlopeError> {
    let a0 = hs.a0x.coeff(0);
    if !a0.is_positive() {
        return Err(SlopeError::ZeroDenominator);
    }
    Ok((hs.a1x.coeff(0) + hs.a0x.coeff(1) / int(2)) / a0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SlopeClass {
    Stable,
    Polystable,
    Semistable,
    Unstable,
}

/// An endpoint of a `c`-interval: exact, or a root of the comparison
/// polynomial isolated between two rationals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Endpoint {
    #[serde(with = "rational::opt_as_str")]
    pub exact: Option<Rational>,
    #[serde(with = "rational::as_str")]
    pub lo: Rational,
    #[serde(with = "rational::as_str")]
    pub hi: Rational,
    pub approx: f64,
}

impl Endpoint {
    fn exact(q: Rational) -> Self {
        let approx = rational::to_f64(&q);
        Self { exact: Some(q.clone()), lo: q.clone(), hi: q, approx }
    }

    fn from_root(r: &Root) -> Self {
        match r {
            Root::Exact(q) => Self::exact(q.clone()),
            Root::Isolated { lo, hi } => Self { exact: None, lo: lo.clone(), hi: hi.clone(), approx: r.approx() },
        }
    }
}

/// A sub-interval of `(0, ε]` on which `μ_c(I_Z) > μ(X)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CInterval {
    pub lo: Endpoint,
    pub hi: Endpoint,
    pub hi_closed: bool,
    /// A point of the interval where the inequality is checked exactly.
    #[serde(with = "rational::as_str")]
    pub sample: Rational,
    #[serde(with = "rational::as_str")]
    pub mu_c_at_sample: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeVerdict {
    pub class: SlopeClass,
    #[serde(with = "rational::as_str")]
    pub mu_x: Rational,
    #[serde(with = "rational::as_str")]
    pub epsilon: Rational,
    /// `c ↦ (μ(X)·∫₀^c a₀ − ∫₀^c (a₁ + a₀′/2))/c`; negative exactly where `Z` destabilizes.
    pub margin: RationalPoly,
    pub destabilizing: Vec<CInterval>,
    /// Points of `(0, ε]` with `μ_c = μ(X)`.
    pub equality: Vec<Endpoint>,
    pub equality_everywhere: bool,
}

const ROOT_WIDTH_DENOM: i64 = 1 << 40;

/// Classifies `(X, L)` against the slope of `Z` over all `c ∈ (0, ε)`, plus
/// `c = ε` when `I_Z^{εr}(r)` is saturated.
pub fn slope_classify(h: &HilbertData, hs: &HilbertSamuelData) -> Result<SlopeVerdict, SlopeError> {
    hs.check_against(h)?;
    let mu_x = mu(h)?;
    let eps = hs.epsilon.clone();
    if !eps.is_positive() {
        return Err(SlopeError::InvalidFamily("epsilon must be positive".into()));
    }
    let diff = &hs.volume_poly().scale(&mu_x) - &hs.numerator_poly();
    // Both integrals vanish at 0, so the division by c is exact.
    let margin = diff.shift_down();
    let mut verdict = SlopeVerdict {
        class: SlopeClass::Stable,
        mu_x,
        epsilon: eps.clone(),
        margin: margin.clone(),
        destabilizing: Vec::new(),
        equality: Vec::new(),
        equality_everywhere: false,
    };
    if margin.is_zero() {
        verdict.class = SlopeClass::Semistable;
        verdict.equality_everywhere = true;
        return Ok(verdict);
    }

    let zero = Rational::zero();
    let roots = margin.real_roots(&zero, &eps, &frac(1, ROOT_WIDTH_DENOM));
    // Cut points 0 = t_0 < root_1 < … < root_k < ε; margin has constant sign between them.
    let mut bounds: Vec<Endpoint> = vec![Endpoint::exact(zero)];
    bounds.extend(roots.iter().map(Endpoint::from_root));
    bounds.push(Endpoint::exact(eps.clone()));
    let at_eps = margin.sign_at(&eps);
    for w in bounds.windows(2) {
        let sample = (&w[0].hi + &w[1].lo) / int(2);
        if margin.sign_at(&sample) < 0 {
            let last = w[1].exact.as_ref() == Some(&eps);
            verdict.destabilizing.push(CInterval {
                lo: w[0].clone(),
                hi: w[1].clone(),
                hi_closed: last && hs.saturated_at_epsilon && at_eps < 0,
                mu_c_at_sample: mu_c(hs, &sample)?,
                sample,
            });
        }
    }
    verdict.equality = roots.iter().map(Endpoint::from_root).collect();
    let boundary_equality = hs.saturated_at_epsilon && at_eps == 0;
    if boundary_equality {
        verdict.equality.push(Endpoint::exact(eps));
    }
    verdict.class = if !verdict.destabilizing.is_empty() {
        SlopeClass::Unstable
    } else if !roots.is_empty() {
        SlopeClass::Semistable
    } else if boundary_equality {
        if hs.contraction_at_epsilon {
            SlopeClass::Polystable
        } else {
            SlopeClass::Semistable
        }
    } else {
        SlopeClass::Stable
    };
    Ok(verdict)
}

/// `(c, μ_c)` on an even grid of `(0, ε]` for plotting.
pub fn mu_c_series(hs: &HilbertSamuelData, steps: usize) -> Result<Vec<(Rational, Rational)>, SlopeError> {
    (1..=steps.max(1))
        .map(|i| {
            let c = &hs.epsilon * frac(i as i64, steps.max(1) as i64);
            let m = mu_c(hs, &c)?;
            Ok((c, m))
        })
        .collect()
}

//! Hilbert data for the shipped families and their exact section counts.
//!
//! * `curve`: a smooth curve of genus `g` polarised in degree `d`, with `Z` a
//!   point. `h⁰(O(r) ⊗ I_p^j)` is the count for a line bundle of degree
//!   `dr - j`, known exactly by Riemann–Roch once the degree exceeds `2g - 2`.
//! * `blowup_p2`: the blow-up of `P²` at a point with `L = aH - bE` and `Z = E`.
//!   Sections of `L^r ⊗ I_E^j` are plane curves of degree `ar` with
//!   multiplicity `br + j` at the point, counted by monomials.
//! * `raw`: caller-supplied polynomials without a section oracle.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{half, RationalPoly};
use super::{HilbertData, HilbertSamuelData, SlopeError};
use crate::rational::{self, frac, int, Rational};

/// Exact `h⁰(I_Z^j(r))` for a family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SectionOracle {
    Curve { genus: u32, degree: i64 },
    BlowupP2 { a: i64, b: i64 },
}

impl SectionOracle {
    pub fn h0(&self, j: i64, r: i64) -> Result<BigInt, SlopeError> {
        if j < 0 || r < 0 {
            return Err(SlopeError::OracleDomain { j, r });
        }
        match *self {
            SectionOracle::Curve { genus, degree } => {
                let g = i64::from(genus);
                let dd = degree * r - j;
                let h = match g {
                    _ if dd < 0 => 0,
                    0 => dd + 1,
                    1 if dd >= 1 => dd,
                    _ if dd > 2 * g - 2 => dd + 1 - g,
                    _ => return Err(SlopeError::OracleDomain { j, r }),
                };
                Ok(BigInt::from(h))
            }
            SectionOracle::BlowupP2 { a, b } => {
                let dd = BigInt::from(a * r);
                let k = BigInt::from(b * r + j);
                if k > dd {
                    return Ok(BigInt::zero());
                }
                let total = (&dd + 2) * (&dd + 1) / 2;
                let lost = (&k + 1) * &k / 2;
                Ok(total - lost)
            }
        }
    }

    /// `h⁰(O_X(r))`.
    pub fn h0_ambient(&self, r: i64) -> Result<BigInt, SlopeError> {
        self.h0(0, r)
    }
}

/// Family description as read from JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
#[allow(clippy::large_enum_variant)]
pub enum Family {
    Curve {
        genus: u32,
        degree: i64,
        #[serde(default)]
        saturated: Option<bool>,
        #[serde(default)]
        contraction: Option<bool>,
    },
    BlowupP2 {
        a: i64,
        b: i64,
    },
    Raw {
        n: u32,
        #[serde(with = "rational::as_str")]
        a0: Rational,
        #[serde(with = "rational::as_str")]
        a1: Rational,
        a0x: RationalPoly,
        a1x: RationalPoly,
        #[serde(with = "rational::as_str")]
        epsilon: Rational,
        #[serde(default)]
        saturated: bool,
        #[serde(default)]
        contraction: bool,
        #[serde(default)]
        description: Option<String>,
    },
}

impl Family {
    pub fn curve(genus: u32, degree: i64) -> Self {
        Family::Curve { genus, degree, saturated: None, contraction: None }
    }

    pub fn blowup_p2(a: i64, b: i64) -> Self {
        Family::BlowupP2 { a, b }
    }

    /// Ambient and subscheme Hilbert data.
    pub fn build(&self) -> Result<(HilbertData, HilbertSamuelData), SlopeError> {
        match self {
            Family::Curve { genus, degree, saturated, contraction } => {
                if *degree < 1 {
                    return Err(SlopeError::InvalidFamily(format!("curve degree {degree} must be positive")));
                }
                let (g, d) = (i64::from(*genus), *degree);
                let h = HilbertData {
                    n: 1,
                    a0: int(d),
                    a1: int(1 - g),
                    description: format!("genus-{g} curve of degree {d}"),
                };
                // Only on P¹ is L^d ⊗ I_p^d trivial, hence generated and pulled back
                // from the contraction to a point.
                let hs = HilbertSamuelData {
                    a0x: RationalPoly::from_ints(&[d, -1]),
                    a1x: RationalPoly::from_ints(&[1 - g]),
                    epsilon: int(d),
                    saturated_at_epsilon: saturated.unwrap_or(g == 0),
                    contraction_at_epsilon: contraction.unwrap_or(g == 0),
                    exact_h0: Some(SectionOracle::Curve { genus: *genus, degree: d }),
                };
                Ok((h, hs))
            }
            Family::BlowupP2 { a, b } => {
                let (a, b) = (*a, *b);
                if !(a > b && b > 0) {
                    return Err(SlopeError::InvalidFamily(format!("aH - bE is ample only for a > b > 0 (got a={a}, b={b})")));
                }
                let h = HilbertData {
                    n: 2,
                    a0: frac(a * a - b * b, 2),
                    a1: frac(3 * a - b, 2),
                    description: format!("Bl_p P^2 with L = {a}H - {b}E"),
                };
                // a0(x) = (a^2 - (b + x)^2)/2, a1(x) = (3a - b - x)/2
                let hs = HilbertSamuelData {
                    a0x: RationalPoly::new(vec![frac(a * a - b * b, 2), int(-b), -half()]),
                    a1x: RationalPoly::new(vec![frac(3 * a - b, 2), -half()]),
                    epsilon: int(a - b),
                    saturated_at_epsilon: true,
                    contraction_at_epsilon: true,
                    exact_h0: Some(SectionOracle::BlowupP2 { a, b }),
                };
                Ok((h, hs))
            }
            Family::Raw { n, a0, a1, a0x, a1x, epsilon, saturated, contraction, description } => {
                if !a0.is_positive() {
                    return Err(SlopeError::InvalidFamily("a0 must be positive".into()));
                }
                if !epsilon.is_positive() {
                    return Err(SlopeError::InvalidFamily("epsilon must be positive".into()));
                }
                let h = HilbertData {
                    n: *n,
                    a0: a0.clone(),
                    a1: a1.clone(),
                    description: description.clone().unwrap_or_else(|| "raw data".into()),
                };
                let hs = HilbertSamuelData {
                    a0x: a0x.clone(),
                    a1x: a1x.clone(),
                    epsilon: epsilon.clone(),
                    saturated_at_epsilon: *saturated,
                    contraction_at_epsilon: *contraction,
                    exact_h0: None,
                };
                Ok((h, hs))
            }
        }
    }
}

/// Leading two coefficients of `r ↦ h⁰(I_Z^{xr}(r))`, fitted exactly from the
/// section oracle at `r` in multiples of the denominator of `x`.
pub fn hilbert_samuel_from_oracle(
    h: &HilbertData,
    hs: &HilbertSamuelData,
    x: &Rational,
) -> Result<(Rational, Rational), SlopeError> {
    let oracle = hs.exact_h0.as_ref().ok_or(SlopeError::OracleMissing)?;
    let q: i64 = num_traits::ToPrimitive::to_i64(x.denom()).ok_or(SlopeError::NonIntegralCr)?;
    let n = h.n as usize;
    let needed = n + 3;
    let mut start = 1i64;
    'outer: loop {
        if start > 10_000 {
            return Err(SlopeError::Underdetermined);
        }
        let mut pts = Vec::with_capacity(needed);
        for i in 0..needed as i64 {
            let r = q * (start + i);
            let j = (x * int(r)).to_integer();
            let j = num_traits::ToPrimitive::to_i64(&j).ok_or(SlopeError::NonIntegralCr)?;
            match oracle.h0(j, r) {
                Ok(v) => pts.push((int(r), Rational::from_integer(v))),
                Err(SlopeError::OracleDomain { .. }) => {
                    start += 1;
                    continue 'outer;
                }
                Err(e) => return Err(e),
            }
        }
        let fit = RationalPoly::interpolate(&pts[..n + 1]);
        if pts[n + 1..].iter().any(|(r, v)| &fit.eval(r) != v) {
            start += 1;
            continue;
        }
        let sub = if n == 0 { Rational::zero() } else { fit.coeff(n - 1) };
        return Ok((fit.coeff(n), sub));
    }
}

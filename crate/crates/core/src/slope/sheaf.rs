//! Gieseker and slope comparison of reduced Hilbert polynomials.

use std::cmp::Ordering;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::poly::RationalPoly;
use super::{SlopeClass, SlopeError};
use crate::rational::{int, Rational};

fn check_monic(p: &RationalPoly) -> Result<usize, SlopeError> {
    match p.leading() {
        Some(l) if l.is_one() => Ok(p.degree().unwrap_or(0)),
        _ => Err(SlopeError::NonMonic(p.to_string())),
    }
}

/// Eventual order of `p_F(r)` against `p_E(r)` as `r → ∞`.
pub fn gieseker_compare(p_f: &RationalPoly, p_e: &RationalPoly) -> Result<Ordering, SlopeError> {
    check_monic(p_f)?;
    check_monic(p_e)?;
    let d = p_f - p_e;
    Ok(match d.leading() {
        None => Ordering::Equal,
        Some(l) if l.is_positive() => Ordering::Greater,
        Some(_) => Ordering::Less,
    })
}

/// Order of the slopes, read from the second coefficient of each reduced
/// polynomial.
pub fn slope_compare(p_f: &RationalPoly, p_e: &RationalPoly) -> Result<Ordering, SlopeError> {
    let df = check_monic(p_f)?;
    let de = check_monic(p_e)?;
    if df != de {
        return Err(SlopeError::DegreeMismatch(df, de));
    }
    if df == 0 {
        return Ok(Ordering::Equal);
    }
    Ok(p_f.coeff(df - 1).cmp(&p_e.coeff(de - 1)))
}

/// Reduced Hilbert polynomial of a vector bundle of the given rank and degree
/// on a genus-`g` curve polarised in degree `h`: `r + (deg/rank + 1 − g)/h`.
pub fn curve_bundle_poly(rank: u32, degree: i64, genus: u32, h: i64) -> Result<RationalPoly, SlopeError> {
    if rank == 0 || h <= 0 {
        return Err(SlopeError::InvalidFamily("rank and polarisation degree must be positive".into()));
    }
    let chi0 = int(degree) + int(i64::from(rank)) * int(1 - i64::from(genus));
    let c0 = chi0 / (int(i64::from(rank)) * int(h));
    Ok(RationalPoly::new(vec![c0, Rational::one()]))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubSheaf {
    #[serde(default)]
    pub name: Option<String>,
    pub p: RationalPoly,
}

/// A sheaf with candidate destabilizing subsheaves, all through reduced
/// Hilbert polynomials.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SheafData {
    pub p_e: RationalPoly,
    pub subsheaves: Vec<SubSheaf>,
}

/// Serializable form of an [`Ordering`] of `F` against `E`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Less,
    Equal,
    Greater,
}

impl From<Ordering> for Relation {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => Relation::Less,
            Ordering::Equal => Relation::Equal,
            Ordering::Greater => Relation::Greater,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SheafVerdict {
    pub gieseker: SlopeClass,
    pub slope: SlopeClass,
    /// Per subsheaf: (Gieseker order, slope order) of `F` against `E`.
    pub comparisons: Vec<(Relation, Relation)>,
}

fn class_of(orders: impl Iterator<Item = Relation>) -> SlopeClass {
    let mut class = SlopeClass::Stable;
    for o in orders {
        match o {
            Relation::Greater => return SlopeClass::Unstable,
            Relation::Equal => class = SlopeClass::Semistable,
            Relation::Less => {}
        }
    }
    class
}

/// Gieseker and slope verdicts over the listed subsheaves.
pub fn sheaf_verdict(data: &SheafData) -> Result<SheafVerdict, SlopeError> {
    let comparisons = data
        .subsheaves
        .iter()
        .map(|f| Ok((gieseker_compare(&f.p, &data.p_e)?.into(), slope_compare(&f.p, &data.p_e)?.into())))
        .collect::<Result<Vec<_>, SlopeError>>()?;
    Ok(SheafVerdict {
        gieseker: class_of(comparisons.iter().map(|c| c.0)),
        slope: class_of(comparisons.iter().map(|c| c.1)),
        comparisons,
    })
}

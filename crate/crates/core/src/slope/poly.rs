//! Univariate polynomials with exact rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::{self, frac, int, Rational};

/// Coefficients in ascending order with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RationalPoly {
    coeffs: Vec<Rational>,
}

impl fmt::Debug for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalPoly({self})")
    }
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{}", rational::format(&a))?,
                (_, true) => {}
                _ => write!(f, "{}*", rational::format(&a))?,
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for RationalPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        rational::vec_as_str::serialize(&self.coeffs, s)
    }
}

impl<'de> Deserialize<'de> for RationalPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Self::new(rational::vec_as_str::deserialize(d)?))
    }
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| int(v)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + rational::to_f64(c))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * int(i as i64)).collect())
    }

    /// The antiderivative vanishing at 0.
    pub fn antiderivative(&self) -> Self {
        let mut out = vec![Rational::zero()];
        out.extend(self.coeffs.iter().enumerate().map(|(i, c)| c / int(i as i64 + 1)));
        Self::new(out)
    }

    pub fn integral(&self, a: &Rational, b: &Rational) -> Rational {
        let p = self.antiderivative();
        p.eval(b) - p.eval(a)
    }

    pub fn monic(&self) -> Option<Self> {
        let l = self.leading()?.clone();
        Some(self.scale(&(Rational::one() / l)))
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dl = d.leading().expect("division by the zero polynomial").clone();
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let f = &r[k + dd] / &dl;
            if !f.is_zero() {
                for (j, c) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &f * c;
                }
            }
            q[k] = f;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    /// Exact quotient by `x`; the constant term is dropped.
    pub fn shift_down(&self) -> Self {
        Self::new(self.coeffs.iter().skip(1).cloned().collect())
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic().unwrap_or_else(Self::zero)
    }

    /// Sign of the value at `x`: -1, 0 or 1.
    pub fn sign_at(&self, x: &Rational) -> i32 {
        sign(&self.eval(x))
    }

    /// Lagrange interpolation through distinct abscissae.
    pub fn interpolate(points: &[(Rational, Rational)]) -> Self {
        let mut acc = Self::zero();
        for (i, (xi, yi)) in points.iter().enumerate() {
            let mut basis = Self::constant(yi.clone());
            for (j, (xj, _)) in points.iter().enumerate() {
                if i != j {
                    let den = xi - xj;
                    assert!(!den.is_zero(), "interpolation nodes must be distinct");
                    basis = &basis * &Self::new(vec![-xj / &den, Rational::one() / &den]);
                }
            }
            acc = &acc + &basis;
        }
        acc
    }

    pub fn sturm_sequence(&self) -> Vec<Self> {
        let mut seq = vec![self.clone(), self.derivative()];
        while !seq.last().is_some_and(Self::is_zero) {
            let n = seq.len();
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            seq.push(-&r);
        }
        seq.pop();
        seq
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_roots(&self, a: &Rational, b: &Rational) -> usize {
        if self.is_zero() {
            panic!("the zero polynomial has infinitely many roots");
        }
        let seq = self.sturm_sequence();
        let va = variations(&seq, a);
        let vb = variations(&seq, b);
        va.saturating_sub(vb)
    }

    /// Isolates the distinct real roots in the open interval `(a, b)`, refining
    /// each isolating interval to width at most `width`. Rational roots found
    /// along the way are reported exactly.
    pub fn real_roots(&self, a: &Rational, b: &Rational, width: &Rational) -> Vec<Root> {
        assert!(!self.is_zero(), "the zero polynomial has infinitely many roots");
        assert!(a < b, "empty interval");
        let p = self.square_free();
        let seq = p.sturm_sequence();
        let mut out = Vec::new();
        // Endpoints may be roots; step inside until the open interval is clean.
        isolate(&p, &seq, a.clone(), b.clone(), &mut out);
        out.into_iter().map(|r| r.refine(&p, width)).collect()
    }

    fn square_free(&self) -> Self {
        let g = self.gcd(&self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            self.clone()
        } else {
            self.div_rem(&g).0
        }
    }
}

fn sign(q: &Rational) -> i32 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

fn variations(seq: &[RationalPoly], x: &Rational) -> usize {
    let mut last = 0;
    let mut n = 0;
    for p in seq {
        let s = p.sign_at(x);
        if s != 0 {
            if last != 0 && s != last {
                n += 1;
            }
            last = s;
        }
    }
    n
}

/// A real root given exactly or by an isolating open interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Root {
    Exact(Rational),
    Isolated { lo: Rational, hi: Rational },
}

impl Root {
    pub fn lower(&self) -> &Rational {
        match self {
            Root::Exact(q) => q,
            Root::Isolated { lo, .. } => lo,
        }
    }

    pub fn upper(&self) -> &Rational {
        match self {
            Root::Exact(q) => q,
            Root::Isolated { hi, .. } => hi,
        }
    }

    pub fn approx(&self) -> f64 {
        match self {
            Root::Exact(q) => rational::to_f64(q),
            Root::Isolated { lo, hi } => rational::to_f64(&((lo + hi) / int(2))),
        }
    }

    fn refine(self, p: &RationalPoly, width: &Rational) -> Root {
        let (mut lo, mut hi) = match self {
            Root::Exact(q) => return Root::Exact(q),
            Root::Isolated { lo, hi } => (lo, hi),
        };
        let slo = p.sign_at(&lo);
        loop {
            if let Some(q) = rational_root_in(p, &lo, &hi) {
                return Root::Exact(q);
            }
            if &hi - &lo <= *width {
                return Root::Isolated { lo, hi };
            }
            let mid = (&lo + &hi) / int(2);
            match p.sign_at(&mid) {
                0 => return Root::Exact(mid),
                s if s == slo => lo = mid,
                _ => hi = mid,
            }
        }
    }
}

fn isolate(p: &RationalPoly, seq: &[RationalPoly], lo: Rational, hi: Rational, out: &mut Vec<Root>) {
    // Roots in (lo, hi): count over (lo, hi] minus a possible root at hi.
    let at_hi = usize::from(p.sign_at(&hi) == 0);
    let n = variations(seq, &lo).saturating_sub(variations(seq, &hi)).saturating_sub(at_hi);
    if n == 0 {
        return;
    }
    if n == 1 && p.sign_at(&lo) != 0 && at_hi == 0 {
        out.push(Root::Isolated { lo, hi });
        return;
    }
    let mid = (&lo + &hi) / int(2);
    isolate(p, seq, lo, mid.clone(), out);
    if p.sign_at(&mid) == 0 {
        out.push(Root::Exact(mid.clone()));
    }
    isolate(p, seq, mid, hi, out);
}

/// A rational root strictly inside `(lo, hi)` found by the rational root test,
/// when the candidate set is small.
fn rational_root_in(p: &RationalPoly, lo: &Rational, hi: &Rational) -> Option<Rational> {
    let den = p.coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: Vec<BigInt> = p.coeffs.iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect();
    let lead = ints.last()?.abs().to_u64()?;
    if lead > 1_000_000_000_000 {
        return None;
    }
    for q in divisors(lead) {
        let qr = Rational::from_integer(BigInt::from(q));
        let from: BigInt = (lo * &qr).floor().to_integer() + 1;
        let to: BigInt = (hi * &qr).ceil().to_integer() - 1;
        if &to - &from > BigInt::from(64) {
            continue;
        }
        let mut k = from;
        while k <= to {
            let c = Rational::new(k.clone(), BigInt::from(q));
            if &c > lo && &c < hi && p.sign_at(&c) == 0 {
                return Some(c);
            }
            k += 1;
        }
    }
    None
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

impl Add for &RationalPoly {
    type Output = RationalPoly;
    fn add(self, o: &RationalPoly) -> RationalPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        RationalPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &RationalPoly {
    type Output = RationalPoly;
    fn sub(self, o: &RationalPoly) -> RationalPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        RationalPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Mul for &RationalPoly {
    type Output = RationalPoly;
    fn mul(self, o: &RationalPoly) -> RationalPoly {
        if self.is_zero() || o.is_zero() {
            return RationalPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RationalPoly::new(out)
    }
}

impl Neg for &RationalPoly {
    type Output = RationalPoly;
    fn neg(self) -> RationalPoly {
        RationalPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Add for RationalPoly {
    type Output = RationalPoly;
    fn add(self, o: RationalPoly) -> RationalPoly {
        &self + &o
    }
}

impl Sub for RationalPoly {
    type Output = RationalPoly;
    fn sub(self, o: RationalPoly) -> RationalPoly {
        &self - &o
    }
}

impl Mul for RationalPoly {
    type Output = RationalPoly;
    fn mul(self, o: RationalPoly) -> RationalPoly {
        &self * &o
    }
}

/// `1/2` as a convenience for formulas with halves.
pub(crate) fn half() -> Rational {
    frac(1, 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> RationalPoly {
        RationalPoly::from_ints(c)
    }

    #[test]
    fn arithmetic_and_normalization() {
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
        assert_eq!(&p(&[1, 1]) * &p(&[-1, 1]), p(&[-1, 0, 1]));
        assert!((&p(&[1, 1]) - &p(&[1, 1])).is_zero());
        assert_eq!(p(&[0, 0, 3]).derivative(), p(&[0, 6]));
        assert_eq!(p(&[1, 1]).antiderivative(), RationalPoly::new(vec![int(0), int(1), frac(1, 2)]));
        assert_eq!(p(&[0, 1]).integral(&int(0), &int(2)), int(2));
    }

    #[test]
    fn displays_readably() {
        assert_eq!(RationalPoly::new(vec![frac(1, 2), int(-1), int(3)]).to_string(), "3*x^2 - x + 1/2");
        assert_eq!(RationalPoly::zero().to_string(), "0");
    }

    #[test]
    fn division_recovers_dividend() {
        let a = p(&[3, 0, -2, 5, 1]);
        let d = p(&[1, 2]);
        let (q, r) = a.div_rem(&d);
        assert_eq!(&(&q * &d) + &r, a);
        assert!(r.degree().unwrap_or(0) < 1);
    }

    #[test]
    fn counts_and_isolates_roots() {
        // (x - 1/3)(x^2 - 2)
        let f = &RationalPoly::new(vec![frac(-1, 3), int(1)]) * &p(&[-2, 0, 1]);
        assert_eq!(f.count_roots(&int(-2), &int(2)), 3);
        assert_eq!(f.count_roots(&int(0), &int(1)), 1);
        let roots = f.real_roots(&int(-2), &int(2), &frac(1, 1_000_000));
        assert_eq!(roots.len(), 3);
        assert!(roots.contains(&Root::Exact(frac(1, 3))));
        let approx: Vec<f64> = roots.iter().map(Root::approx).collect();
        assert!((approx[0] + 2f64.sqrt()).abs() < 1e-6);
        assert!((approx[2] - 2f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn repeated_roots_counted_once() {
        let f = p(&[1, -2, 1]);
        assert_eq!(f.count_roots(&int(0), &int(2)), 1);
        assert_eq!(f.real_roots(&int(0), &int(2), &frac(1, 100)), vec![Root::Exact(int(1))]);
    }

    #[test]
    fn endpoint_roots_are_excluded() {
        let f = p(&[0, -1, 1]);
        assert!(f.real_roots(&int(0), &int(1), &frac(1, 100)).is_empty());
        assert_eq!(f.real_roots(&int(-1), &int(2), &frac(1, 100)).len(), 2);
    }

    #[test]
    fn interpolation_reproduces_polynomial() {
        let f = RationalPoly::new(vec![frac(1, 2), int(-3), frac(2, 7)]);
        let pts: Vec<_> = (0..3).map(|i| (int(i), f.eval(&int(i)))).collect();
        assert_eq!(RationalPoly::interpolate(&pts), f);
    }

    proptest! {
        #[test]
        fn sturm_count_matches_root_construction(roots in prop::collection::btree_set(-20i64..20, 1..6), lo in -25i64..0, hi in 1i64..25) {
            let mut f = p(&[1]);
            for r in &roots {
                f = &f * &RationalPoly::new(vec![frac(-*r, 3), int(1)]);
            }
            let (a, b) = (int(lo), int(hi));
            let expected = roots.iter().filter(|&&r| frac(r, 3) > a && frac(r, 3) <= b).count();
            prop_assert_eq!(f.count_roots(&a, &b), expected);
        }

        #[test]
        fn division_identity(a in prop::collection::vec(-9i64..9, 1..7), d in prop::collection::vec(-9i64..9, 1..4)) {
            let (a, d) = (p(&a), p(&d));
            prop_assume!(!d.is_zero());
            let (q, r) = a.div_rem(&d);
            prop_assert_eq!(&(&q * &d) + &r, a);
            prop_assert!(r.is_zero() || r.degree() < d.degree());
        }
    }
}

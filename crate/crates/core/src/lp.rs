//! Small exact linear-programming kernel over `BigRational`.
//!
//! Only feasibility is needed by the polytope tests: find `x >= 0` with
//! `A x = b`. Phase one of the simplex method with Bland's rule is enough and
//! terminates without cycling.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Returns a nonnegative solution of `A x = b`, or `None` when none exists.
///
/// `a` is given row-major with every row the same length.
pub(crate) fn feasible(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let m = a.len();
    assert_eq!(m, b.len(), "row count mismatch");
    let n = a.first().map_or(0, Vec::len);
    if m == 0 {
        return Some(vec![BigRational::zero(); n]);
    }
    let width = n + m + 1;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for (row, rhs) in a.iter().zip(b) {
        assert_eq!(row.len(), n, "ragged constraint matrix");
        let flip = rhs.is_negative();
        let mut r = Vec::with_capacity(width);
        for v in row {
            r.push(if flip { -v.clone() } else { v.clone() });
        }
        for _ in 0..m {
            r.push(BigRational::zero());
        }
        r.push(if flip { -rhs.clone() } else { rhs.clone() });
        t.push(r);
    }
    for (i, row) in t.iter_mut().enumerate() {
        row[n + i] = BigRational::one();
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Reduced costs of the phase-one objective (sum of artificials).
    let mut cost = vec![BigRational::zero(); width];
    for row in &t {
        for j in 0..n {
            cost[j] -= &row[j];
        }
        cost[width - 1] -= &row[width - 1];
    }

    while let Some(enter) = (0..width - 1).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, BigRational)> = None;
        for (i, row) in t.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[width - 1] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // Phase one is bounded below by zero, so an entering column always has a pivot.
        let (p, _) = leave.expect("phase-one objective is bounded");
        let piv = t[p][enter].clone();
        for v in t[p].iter_mut() {
            *v /= &piv;
        }
        let prow = t[p].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != p && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (v, pv) in row.iter_mut().zip(&prow) {
                    *v -= &f * pv;
                }
            }
        }
        if !cost[enter].is_zero() {
            let f = cost[enter].clone();
            for (v, pv) in cost.iter_mut().zip(&prow) {
                *v -= &f * pv;
            }
        }
        basis[p] = enter;
    }

    if !cost[width - 1].is_zero() {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &j) in basis.iter().enumerate() {
        if j < n {
            x[j] = t[i][width - 1].clone();
        }
    }
    Some(x)
}

/// Rank of a rational matrix by fraction-exact Gaussian elimination.
pub(crate) fn rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let prow = m[r].clone();
        for row in m.iter_mut().skip(r + 1) {
            if !row[c].is_zero() {
                let f = &row[c] / &prow[c];
                for (v, pv) in row.iter_mut().zip(&prow) {
                    *v -= &f * pv;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

//! Exact rational feasibility for small dense systems `A x = b, x >= 0`.
//!
//! Phase-one simplex with Bland's rule over `BigRational`. Sizes here are a
//! handful of rows and at most a few hundred columns.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Returns a nonnegative solution of `A x = b` if one exists. `a` is given
/// row-major with `a.len() == b.len()`.
pub fn feasible(a: &[Vec<i64>], b: &[i64]) -> Option<Vec<BigRational>> {
    let m = a.len();
    assert_eq!(m, b.len());
    let n = a.first().map_or(0, |r| r.len());
    let q = |v: i64| BigRational::from_integer(BigInt::from(v));

    // tableau: m rows of (n structural + m artificial + rhs)
    let width = n + m + 1;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m + 1);
    for (i, row) in a.iter().enumerate() {
        assert_eq!(row.len(), n);
        let sign = if b[i] < 0 { -1 } else { 1 };
        let mut r = vec![BigRational::zero(); width];
        for (j, &v) in row.iter().enumerate() {
            r[j] = q(sign * v);
        }
        r[n + i] = q(1);
        r[width - 1] = q(sign * b[i]);
        t.push(r);
    }
    // objective: minimise the artificial sum; reduced costs = -(column sums)
    let mut obj = vec![BigRational::zero(); width];
    for r in &t {
        for j in 0..n {
            obj[j] -= &r[j];
        }
        obj[width - 1] -= &r[width - 1];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    while let Some(enter) = (0..n + m).find(|&j| obj[j].is_negative()) {
        let mut leave: Option<usize> = None;
        let mut best: Option<BigRational> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &best {
                    None => true,
                    Some(bv) => ratio < *bv || (ratio == *bv && basis[i] < basis[leave.unwrap()]),
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        // phase one is bounded below by zero, so an entering column always has a pivot row
        let r = leave.expect("phase-one objective is bounded");
        let piv = t[r][enter].clone();
        for v in t[r].iter_mut() {
            *v /= &piv;
        }
        let pivot_row = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != r && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *v -= &f * p;
                    }
                }
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for (v, p) in obj.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        basis[r] = enter;
    }

    if !obj[width - 1].is_zero() {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &bi) in basis.iter().enumerate() {
        if bi < n {
            x[bi] = t[i][width - 1].clone();
        }
    }
    Some(x)
}

/// Whether `target` is a convex combination of `points`.
pub fn in_convex_hull(points: &[Vec<i64>], target: &[i64]) -> bool {
    convex_certificate(points, target).is_some()
}

/// Convex weights expressing `target` through `points`, if any.
pub fn convex_certificate(points: &[Vec<i64>], target: &[i64]) -> Option<Vec<BigRational>> {
    if points.is_empty() {
        return None;
    }
    let dim = target.len();
    let mut a: Vec<Vec<i64>> = (0..dim).map(|k| points.iter().map(|p| p[k]).collect()).collect();
    a.push(vec![1; points.len()]);
    let mut b = target.to_vec();
    b.push(1);
    feasible(&a, &b)
}

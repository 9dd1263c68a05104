//! Exact phase-one simplex: feasibility of `A x = b, x ≥ 0` over Q.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Returns a feasible point of `A x = b, x ≥ 0`, or `None` when the system
/// is infeasible. Bland's rule keeps the pivoting finite.
pub fn feasible(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let m = a.len();
    let k = a.first().map_or(0, Vec::len);
    if m == 0 {
        return Some(vec![BigRational::zero(); k]);
    }
    let cols = k + m;
    // tableau rows: [x-columns | artificial columns | rhs]
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for (r, row) in a.iter().enumerate() {
        let flip = b[r].is_negative();
        let mut line = Vec::with_capacity(cols + 1);
        for v in row {
            line.push(if flip { -v.clone() } else { v.clone() });
        }
        for j in 0..m {
            line.push(if j == r { BigRational::from_integer(1.into()) } else { BigRational::zero() });
        }
        line.push(if flip { -b[r].clone() } else { b[r].clone() });
        t.push(line);
    }
    let mut basis: Vec<usize> = (k..cols).collect();
    let cost = |j: usize| j >= k;

    loop {
        // reduced cost d_j = c_j - Σ_r c_{B_r} t[r][j]; Bland: first negative
        let entering = (0..cols).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let mut d = if cost(j) { BigRational::from_integer(1.into()) } else { BigRational::zero() };
            for r in 0..m {
                if cost(basis[r]) {
                    d -= &t[r][j];
                }
            }
            d.is_negative()
        });
        let Some(j) = entering else { break };
        let mut leave: Option<(usize, BigRational)> = None;
        for r in 0..m {
            if t[r][j].is_positive() {
                let ratio = &t[r][cols] / &t[r][j];
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && basis[r] < basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        // phase one is bounded below by zero, so an entering column always has a leaving row
        let (r, _) = leave.expect("phase-one objective is bounded");
        pivot(&mut t, r, j);
        basis[r] = j;
    }

    let infeasible = (0..m).any(|r| cost(basis[r]) && !t[r][cols].is_zero());
    if infeasible {
        return None;
    }
    let mut x = vec![BigRational::zero(); k];
    for r in 0..m {
        if basis[r] < k {
            x[basis[r]] = t[r][cols].clone();
        }
    }
    Some(x)
}

fn pivot(t: &mut [Vec<BigRational>], r: usize, j: usize) {
    let p = t[r][j].clone();
    for v in t[r].iter_mut() {
        *v /= &p;
    }
    let pivot_row = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == r || row[j].is_zero() {
            continue;
        }
        let f = row[j].clone();
        for (v, pv) in row.iter_mut().zip(&pivot_row) {
            if !pv.is_zero() {
                *v -= &f * pv;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    fn check(a: &[Vec<BigRational>], b: &[BigRational], x: &[BigRational]) {
        assert!(x.iter().all(|v| !v.is_negative()));
        for (row, rhs) in a.iter().zip(b) {
            let lhs: BigRational = row.iter().zip(x).map(|(c, v)| c * v).sum();
            assert_eq!(&lhs, rhs);
        }
    }

    #[test]
    fn finds_feasible_point() {
        // x1 - x2 = 0, x1 = 1
        let a = vec![vec![q(1), q(-1)], vec![q(1), q(0)]];
        let b = vec![q(0), q(1)];
        let x = feasible(&a, &b).unwrap();
        check(&a, &b, &x);
    }

    #[test]
    fn detects_infeasibility() {
        // 2 x1 + 3 x2 = 0 with x1 = 1 is impossible for x >= 0
        let a = vec![vec![q(2), q(3)], vec![q(1), q(0)]];
        let b = vec![q(0), q(1)];
        assert!(feasible(&a, &b).is_none());
    }

    #[test]
    fn negative_rhs_rows_are_flipped() {
        let a = vec![vec![q(-1), q(1)]];
        let b = vec![q(-2)];
        let x = feasible(&a, &b).unwrap();
        check(&a, &b, &x);
    }
}

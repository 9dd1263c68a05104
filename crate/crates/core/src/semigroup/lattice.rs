//! Smith normal form over the integers and exact solving of `M y = t`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// `U · M · V = D` with `U`, `V` unimodular and `D` diagonal.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub rows: usize,
    pub cols: usize,
    pub u: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
    /// Nonzero diagonal entries `d_0, …, d_{rank-1}`.
    pub diag: Vec<BigInt>,
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

impl SmithForm {
    pub fn new(m: &[Vec<BigInt>], rows: usize, cols: usize) -> Self {
        let mut a: Vec<Vec<BigInt>> = m.to_vec();
        let mut u = identity(rows);
        let mut v = identity(cols);
        let mut diag = vec![];
        for k in 0..rows.min(cols) {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in k..rows {
                for j in k..cols {
                    if !a[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            a.swap(k, pi);
            u.swap(k, pi);
            for row in a.iter_mut() {
                row.swap(k, pj);
            }
            for row in v.iter_mut() {
                row.swap(k, pj);
            }
            loop {
                let mut done = true;
                for i in k + 1..rows {
                    if a[i][k].is_zero() {
                        continue;
                    }
                    let q = a[i][k].div_floor(&a[k][k]);
                    row_sub(&mut a, i, k, &q);
                    row_sub(&mut u, i, k, &q);
                    if !a[i][k].is_zero() {
                        done = false;
                    }
                }
                for j in k + 1..cols {
                    if a[k][j].is_zero() {
                        continue;
                    }
                    let q = a[k][j].div_floor(&a[k][k]);
                    col_sub(&mut a, j, k, &q);
                    col_sub(&mut v, j, k, &q);
                    if !a[k][j].is_zero() {
                        done = false;
                    }
                }
                if done {
                    break;
                }
                // move the smallest remaining entry of row/column k to the pivot
                let mut bi = k;
                let mut bj = k;
                for i in k..rows {
                    if !a[i][k].is_zero() && a[i][k].abs() < a[bi][bj].abs() {
                        bi = i;
                        bj = k;
                    }
                }
                for j in k..cols {
                    if !a[k][j].is_zero() && a[k][j].abs() < a[bi][bj].abs() {
                        bi = k;
                        bj = j;
                    }
                }
                if bi != k {
                    a.swap(k, bi);
                    u.swap(k, bi);
                }
                if bj != k {
                    for row in a.iter_mut() {
                        row.swap(k, bj);
                    }
                    for row in v.iter_mut() {
                        row.swap(k, bj);
                    }
                }
            }
            diag.push(a[k][k].clone());
        }
        SmithForm { rows, cols, u, v, diag }
    }

    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    /// The columns generate all of `Z^rows`.
    pub fn is_unimodular_image(&self) -> bool {
        self.rank() == self.rows && self.diag.iter().all(|d| d.abs().is_one())
    }

    /// Integer solution of `M y = t`, if any.
    pub fn solve(&self, t: &[BigInt]) -> Option<Vec<BigInt>> {
        let s: Vec<BigInt> = self
            .u
            .iter()
            .map(|row| row.iter().zip(t).map(|(a, b)| a * b).sum())
            .collect();
        let mut z = vec![BigInt::zero(); self.cols];
        for (i, si) in s.iter().enumerate() {
            if i < self.rank() {
                let (q, r) = si.div_rem(&self.diag[i]);
                if !r.is_zero() {
                    return None;
                }
                z[i] = q;
            } else if !si.is_zero() {
                return None;
            }
        }
        Some(
            self.v
                .iter()
                .map(|row| row.iter().zip(&z).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }
}

fn row_sub(a: &mut [Vec<BigInt>], target: usize, src: usize, q: &BigInt) {
    let src_row = a[src].clone();
    for (x, s) in a[target].iter_mut().zip(&src_row) {
        *x -= q * s;
    }
}

fn col_sub(a: &mut [Vec<BigInt>], target: usize, src: usize, q: &BigInt) {
    for row in a.iter_mut() {
        let s = row[src].clone();
        row[target] -= q * &s;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn mul(m: &[Vec<BigInt>], y: &[BigInt]) -> Vec<BigInt> {
        m.iter().map(|row| row.iter().zip(y).map(|(a, b)| a * b).sum()).collect()
    }

    #[test]
    fn diagonalizes_and_solves() {
        let m = mat(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let snf = SmithForm::new(&m, 3, 3);
        let mut d: Vec<BigInt> = snf.diag.iter().map(|x| x.abs()).collect();
        d.sort();
        assert_eq!(d, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
        let t: Vec<BigInt> = [2, -6, 10].iter().map(|&x| BigInt::from(x)).collect();
        let y = snf.solve(&t).unwrap();
        assert_eq!(mul(&m, &y), t);
        let t: Vec<BigInt> = [1, 0, 0].iter().map(|&x| BigInt::from(x)).collect();
        assert!(snf.solve(&t).is_none());
    }

    #[test]
    fn unit_generation() {
        // (2) and (3) generate Z
        let snf = SmithForm::new(&mat(&[&[2, 3]]), 1, 2);
        assert!(snf.is_unimodular_image());
        // (2) and (4) do not
        let snf = SmithForm::new(&mat(&[&[2, 4]]), 1, 2);
        assert!(!snf.is_unimodular_image());
        // 1 generates Z/3 as a quotient: [1 | 3]
        let snf = SmithForm::new(&mat(&[&[1, 3]]), 1, 2);
        assert!(snf.is_unimodular_image());
    }

    #[test]
    fn rank_deficient_systems() {
        let m = mat(&[&[1, 1], &[1, 1]]);
        let snf = SmithForm::new(&m, 2, 2);
        assert_eq!(snf.rank(), 1);
        let t: Vec<BigInt> = [3, 3].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(mul(&m, &snf.solve(&t).unwrap()), t);
        let t: Vec<BigInt> = [3, 2].iter().map(|&x| BigInt::from(x)).collect();
        assert!(snf.solve(&t).is_none());
    }
}

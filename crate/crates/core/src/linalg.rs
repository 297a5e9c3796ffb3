//! Dense Gaussian elimination with row pivoting.

use crate::error::{Error, Result};

/// Relative pivot floor: a pivot smaller than this times the largest
/// initial entry signals a singular system.
pub const PIVOT_TOLERANCE: f64 = 1e-15;

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { n, data })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        self.data
            .chunks_exact(self.n)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

/// Maximum number of iterative-refinement sweeps after the initial solve.
const REFINE_STEPS: usize = 3;

/// Solves `A x = rhs` by elimination with partial (row) pivoting, followed by
/// a few sweeps of iterative refinement with a compensated residual.
///
/// Works for the indefinite saddle-point systems of the interpolant, where
/// the lower-right block is zero and pivoting is mandatory.
pub fn solve_dense(a: &Matrix, rhs: &[f64]) -> Result<Vec<f64>> {
    let n = a.size();
    if rhs.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: rhs.len(),
        });
    }
    let lu = Lu::factor(a)?;
    let mut x = lu.solve(rhs);
    let mut r = residual(a, &x, rhs);
    let mut rnorm = inf_norm(&r);
    for _ in 0..REFINE_STEPS {
        if rnorm == 0.0 {
            break;
        }
        let dx = lu.solve(&r);
        let trial: Vec<f64> = x.iter().zip(&dx).map(|(a, b)| a + b).collect();
        let tr = residual(a, &trial, rhs);
        let tnorm = inf_norm(&tr);
        if tnorm >= rnorm {
            break;
        }
        x = trial;
        r = tr;
        rnorm = tnorm;
    }
    Ok(x)
}

/// Packed LU factors: multipliers below the diagonal, U on and above it.
struct Lu {
    n: usize,
    m: Vec<f64>,
    perm: Vec<usize>,
}

impl Lu {
    fn factor(a: &Matrix) -> Result<Self> {
        let n = a.size();
        let scale = a.data.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        let threshold = PIVOT_TOLERANCE * scale;
        let mut m = a.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();

        for col in 0..n {
            let (pivot_row, pivot) = (col..n)
                .map(|r| (r, m[r * n + col].abs()))
                .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot <= threshold || scale == 0.0 {
                return Err(Error::SingularSystem {
                    column: col,
                    pivot,
                    threshold,
                });
            }
            if pivot_row != col {
                for j in 0..n {
                    m.swap(col * n + j, pivot_row * n + j);
                }
                perm.swap(col, pivot_row);
            }
            let diag = m[col * n + col];
            for r in col + 1..n {
                let factor = m[r * n + col] / diag;
                m[r * n + col] = factor;
                if factor == 0.0 {
                    continue;
                }
                for j in col + 1..n {
                    m[r * n + j] -= factor * m[col * n + j];
                }
            }
        }
        Ok(Self { n, m, perm })
    }

    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.n;
        let m = &self.m;
        let mut y: Vec<f64> = self.perm.iter().map(|&p| rhs[p]).collect();
        for i in 0..n {
            let acc: f64 = (0..i).map(|j| m[i * n + j] * y[j]).sum();
            y[i] -= acc;
        }
        for i in (0..n).rev() {
            let tail: f64 = (i + 1..n).map(|j| m[i * n + j] * y[j]).sum();
            y[i] = (y[i] - tail) / m[i * n + i];
        }
        y
    }
}

/// `rhs - A x`, each row accumulated with a compensated dot product.
fn residual(a: &Matrix, x: &[f64], rhs: &[f64]) -> Vec<f64> {
    a.data
        .chunks_exact(a.n)
        .zip(rhs)
        .map(|(row, &b)| b - dot_compensated(row, x))
        .collect()
}

/// Dot product with error-free transformations (Ogita–Rump–Oishi `Dot2`):
/// accurate as if computed in twice the working precision.
pub fn dot_compensated(a: &[f64], b: &[f64]) -> f64 {
    let (mut s, mut comp) = (0.0f64, 0.0f64);
    for (x, y) in a.iter().zip(b) {
        let p = x * y;
        let perr = x.mul_add(*y, -p);
        let t = s + p;
        let z = t - s;
        comp += (s - (t - z)) + (p - z) + perr;
        s = t;
    }
    s + comp
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_returns_rhs() {
        let x = solve_dense(&Matrix::identity(4), &[1.0, -2.0, 3.5, 0.0]).unwrap();
        assert_eq!(x, vec![1.0, -2.0, 3.5, 0.0]);
    }

    #[test]
    fn requires_pivoting() {
        let a = Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(solve_dense(&a, &[3.0, 7.0]).unwrap(), vec![7.0, 3.0]);
    }

    #[test]
    fn hilbert_recovers_known_vector() {
        let n = 4;
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| 1.0 / (i + j + 1) as f64).collect())
            .collect();
        let a = Matrix::from_rows(&rows).unwrap();
        let truth = [1.0, -2.0, 3.0, -4.0];
        let rhs = a.mul_vec(&truth);
        let x = solve_dense(&a, &rhs).unwrap();
        for (xi, ti) in x.iter().zip(truth) {
            assert!((xi - ti).abs() < 1e-7);
        }
        let res = a.mul_vec(&x);
        let rmax = rhs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (r, b) in res.iter().zip(&rhs) {
            assert!((r - b).abs() <= 1e-9 * (1.0 + rmax));
        }
    }

    #[test]
    fn singular_detected() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(matches!(
            solve_dense(&a, &[1.0, 1.0]),
            Err(Error::SingularSystem { column: 1, .. })
        ));
        assert!(matches!(
            solve_dense(&Matrix::zeros(2), &[0.0, 0.0]),
            Err(Error::SingularSystem { column: 0, .. })
        ));
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            solve_dense(&Matrix::identity(3), &[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0]]).is_err());
    }
}

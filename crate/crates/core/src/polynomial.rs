//! Monomial basis of `𝒫_k` on `ℝⁿ`, ordered by total degree and then
//! lexicographically (descending powers of the first coordinate).

use crate::error::Result;
use crate::linalg::{solve_dense, Matrix};

#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialBasis {
    n: usize,
    degree: i32,
    exponents: Vec<Vec<u32>>,
}

impl PolynomialBasis {
    /// Basis of polynomials of total degree at most `degree`; `-1` gives
    /// the empty basis.
    pub fn new(n: usize, degree: i32) -> Self {
        let mut exponents = Vec::new();
        for total in 0..=degree.max(-1) {
            let mut current = vec![0u32; n];
            push_compositions(total as u32, 0, &mut current, &mut exponents);
        }
        Self {
            n,
            degree,
            exponents,
        }
    }

    /// Basis of `𝒫_{m-1}` for a kernel of order `m`.
    pub fn for_order(n: usize, m: u32) -> Self {
        Self::new(n, m as i32 - 1)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponents(&self) -> &[Vec<u32>] {
        &self.exponents
    }

    /// All monomials evaluated at `x - origin`.
    pub fn eval(&self, x: &[f64], origin: &[f64]) -> Vec<f64> {
        self.exponents
            .iter()
            .map(|alpha| {
                alpha
                    .iter()
                    .zip(x.iter().zip(origin))
                    .map(|(&a, (xi, oi))| (xi - oi).powi(a as i32))
                    .product()
            })
            .collect()
    }

    /// `max_q |Σ_j a_j q(y_j - origin)|` over the basis monomials.
    pub fn moment_residual(&self, points: &[Vec<f64>], coeffs: &[f64], origin: &[f64]) -> f64 {
        let mut sums = vec![0.0; self.len()];
        for (y, a) in points.iter().zip(coeffs) {
            for (s, q) in sums.iter_mut().zip(self.eval(y, origin)) {
                *s += a * q;
            }
        }
        sums.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Removes from `coeffs` its least-squares component in the span of the
    /// basis columns evaluated at `points`, so that the result annihilates
    /// the basis.
    pub fn project_out(&self, points: &[Vec<f64>], coeffs: &[f64], origin: &[f64]) -> Result<Vec<f64>> {
        if self.is_empty() {
            return Ok(coeffs.to_vec());
        }
        let rows: Vec<Vec<f64>> = points.iter().map(|y| self.eval(y, origin)).collect();
        let q = self.len();
        let mut gram = Matrix::zeros(q);
        let mut rhs = vec![0.0; q];
        for (row, a) in rows.iter().zip(coeffs) {
            for i in 0..q {
                rhs[i] += row[i] * a;
                for j in 0..q {
                    gram[(i, j)] += row[i] * row[j];
                }
            }
        }
        let w = solve_dense(&gram, &rhs)?;
        Ok(rows
            .iter()
            .zip(coeffs)
            .map(|(row, a)| a - row.iter().zip(&w).map(|(r, wi)| r * wi).sum::<f64>())
            .collect())
    }
}

fn push_compositions(remaining: u32, idx: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if idx + 1 == current.len() {
        current[idx] = remaining;
        out.push(current.clone());
        return;
    }
    for a in (0..=remaining).rev() {
        current[idx] = a;
        push_compositions(remaining - a, idx + 1, current, out);
    }
    current[idx] = 0;
}

/// Arithmetic mean of a non-empty point list.
pub fn centroid(points: &[Vec<f64>]) -> Vec<f64> {
    let n = points.first().map_or(0, Vec::len);
    let mut c = vec![0.0; n];
    for p in points {
        for (ci, pi) in c.iter_mut().zip(p) {
            *ci += pi;
        }
    }
    let count = points.len().max(1) as f64;
    c.iter_mut().for_each(|v| *v /= count);
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binomial(a: usize, b: usize) -> usize {
        (0..b).fold(1, |acc, i| acc * (a - i) / (i + 1))
    }

    #[test]
    fn sizes_match_binomials() {
        for n in 1..=4 {
            assert_eq!(PolynomialBasis::new(n, -1).len(), 0);
            for d in 0..=4 {
                assert_eq!(PolynomialBasis::new(n, d).len(), binomial(n + d as usize, n));
            }
        }
    }

    #[test]
    fn graded_lex_order() {
        let b = PolynomialBasis::new(2, 2);
        assert_eq!(
            b.exponents(),
            &[
                vec![0, 0],
                vec![1, 0],
                vec![0, 1],
                vec![2, 0],
                vec![1, 1],
                vec![0, 2]
            ]
        );
    }

    #[test]
    fn eval_shifts_by_origin() {
        let b = PolynomialBasis::new(2, 1);
        assert_eq!(b.eval(&[3.0, 5.0], &[1.0, 1.0]), vec![1.0, 2.0, 4.0]);
    }

    #[test]
    fn projection_annihilates_basis() {
        let b = PolynomialBasis::new(1, 1);
        let pts: Vec<Vec<f64>> = [0.0, 0.3, 0.7, 1.0].iter().map(|&x| vec![x]).collect();
        let o = centroid(&pts);
        let a = b.project_out(&pts, &[1.0, 2.0, -0.5, 0.25], &o).unwrap();
        assert!(b.moment_residual(&pts, &a, &o) < 1e-14);
    }
}

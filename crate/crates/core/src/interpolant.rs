//! The h-spline `s(x) = p(x) + Σ_j c_j h(x - x_j)` with `p ∈ 𝒫_{m-1}`,
//! interpolation conditions at the centers and the moment conditions
//! `Σ_j c_j q(x_j) = 0` for `q ∈ 𝒫_{m-1}`.

use crate::error::{Error, Result};
use crate::kernel::KernelParams;
use crate::linalg::{dot_compensated, solve_dense, Matrix};
use crate::polynomial::{centroid, PolynomialBasis};

/// Points closer than this are treated as duplicates.
pub const DUPLICATE_DISTANCE: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct Interpolant {
    params: KernelParams,
    centers: Vec<Vec<f64>>,
    kernel_coeffs: Vec<f64>,
    poly_coeffs: Vec<f64>,
    basis: PolynomialBasis,
    /// Monomials are expanded about the centroid of the centers.
    origin: Vec<f64>,
}

pub(crate) fn check_points(n: usize, points: &[Vec<f64>]) -> Result<()> {
    for p in points {
        if p.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: p.len(),
            });
        }
    }
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d2: f64 = points[i]
                .iter()
                .zip(&points[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            if d2.sqrt() < DUPLICATE_DISTANCE {
                return Err(Error::DuplicatePoints(i, j));
            }
        }
    }
    Ok(())
}

impl Interpolant {
    /// Solves the saddle-point system `[A P; Pᵀ 0] [c; d] = [f; 0]`.
    pub fn build(params: &KernelParams, centers: &[Vec<f64>], values: &[f64]) -> Result<Self> {
        let n = params.n();
        if centers.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: centers.len(),
                got: values.len(),
            });
        }
        if centers.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        check_points(n, centers)?;
        let basis = PolynomialBasis::for_order(n, params.m());
        let big_n = centers.len();
        let q = basis.len();
        if big_n < q {
            return Err(Error::SingularSystem {
                column: big_n,
                pivot: 0.0,
                threshold: 0.0,
            });
        }
        let origin = centroid(centers);

        let size = big_n + q;
        let mut a = Matrix::zeros(size);
        for i in 0..big_n {
            for j in i..big_n {
                let v = params.eval_between(&centers[i], &centers[j]);
                a[(i, j)] = v;
                a[(j, i)] = v;
            }
            for (k, pk) in basis.eval(&centers[i], &origin).into_iter().enumerate() {
                a[(i, big_n + k)] = pk;
                a[(big_n + k, i)] = pk;
            }
        }
        let mut rhs = values.to_vec();
        rhs.resize(size, 0.0);
        let sol = solve_dense(&a, &rhs)?;

        Ok(Self {
            params: *params,
            centers: centers.to_vec(),
            kernel_coeffs: sol[..big_n].to_vec(),
            poly_coeffs: sol[big_n..].to_vec(),
            basis,
            origin,
        })
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.params.n() {
            return Err(Error::DimensionMismatch {
                expected: self.params.n(),
                got: x.len(),
            });
        }
        // Coefficients can be large with strong cancellation; sum accurately.
        let mut row: Vec<f64> = self
            .centers
            .iter()
            .map(|xj| self.params.eval_between(x, xj))
            .collect();
        row.extend(self.basis.eval(x, &self.origin));
        let coeffs: Vec<f64> = self
            .kernel_coeffs
            .iter()
            .chain(&self.poly_coeffs)
            .copied()
            .collect();
        Ok(dot_compensated(&row, &coeffs))
    }

    pub fn params(&self) -> &KernelParams {
        &self.params
    }

    pub fn centers(&self) -> &[Vec<f64>] {
        &self.centers
    }

    pub fn kernel_coeffs(&self) -> &[f64] {
        &self.kernel_coeffs
    }

    /// Coefficients of the polynomial tail in [`Self::basis`], expanded
    /// about [`Self::origin`].
    pub fn poly_coeffs(&self) -> &[f64] {
        &self.poly_coeffs
    }

    pub fn basis(&self) -> &PolynomialBasis {
        &self.basis
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    /// Largest violation of the moment conditions.
    pub fn moment_residual(&self) -> f64 {
        self.basis
            .moment_residual(&self.centers, &self.kernel_coeffs, &self.origin)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn pts(xs: &[f64]) -> Vec<Vec<f64>> {
        xs.iter().map(|&x| vec![x]).collect()
    }

    #[test]
    fn single_center() {
        let p = KernelParams::new(1, -1.0, 1.0).unwrap();
        let s = Interpolant::build(&p, &pts(&[0.0]), &[1.0]).unwrap();
        assert!((s.kernel_coeffs()[0] - 1.0 / PI.sqrt()).abs() < 1e-15);
        assert!((s.eval(&[0.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!((s.eval(&[1.0]).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn constants_are_reproduced_with_order_one() {
        let p = KernelParams::new(1, 1.0, 1.0).unwrap();
        let s = Interpolant::build(&p, &pts(&[0.0, 0.5, 1.0]), &[5.0; 3]).unwrap();
        for i in 0..100 {
            let x = -0.3 + 1.6 * i as f64 / 99.0;
            assert!((s.eval(&[x]).unwrap() - 5.0).abs() < 1e-8);
        }
        assert!(s.kernel_coeffs().iter().all(|c| c.abs() < 1e-12));
    }

    #[test]
    fn zero_data_gives_zero() {
        let p = KernelParams::new(2, 3.0, 0.7).unwrap();
        let centers = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![0.6, 0.7]];
        let s = Interpolant::build(&p, &centers, &[0.0; 4]).unwrap();
        assert_eq!(s.eval(&[0.3, 0.2]).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_input() {
        let p = KernelParams::new(1, 1.0, 1.0).unwrap();
        assert!(matches!(
            Interpolant::build(&p, &pts(&[0.0, 0.0]), &[1.0, 2.0]),
            Err(Error::DuplicatePoints(0, 1))
        ));
        assert!(matches!(
            Interpolant::build(&p, &pts(&[0.0, 1.0]), &[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            Interpolant::build(&p, &[vec![0.0, 1.0]], &[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        // m = 2 in 2D needs three non-collinear centers.
        let p = KernelParams::new(2, 3.0, 1.0).unwrap();
        let collinear = vec![vec![0.0, 0.0], vec![0.5, 0.5], vec![1.0, 1.0]];
        assert!(matches!(
            Interpolant::build(&p, &collinear, &[1.0, 2.0, 3.0]),
            Err(Error::SingularSystem { .. })
        ));
        let s = Interpolant::build(&p, &[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]], &[1.0; 3]).unwrap();
        assert!(s.eval(&[0.0]).is_err());
    }
}

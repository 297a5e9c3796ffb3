//! The multiquadric (β > 0) / inverse multiquadric (β < 0) kernel
//! `h(x) = Γ(-β/2) (c² + |x|²)^{β/2}`.

use serde::Serialize;

use crate::error::{Error, Result};
pub use crate::gamma::{ln_factorial, log_gamma, LogGamma};

/// Largest accepted `|β|`.
pub const MAX_ABS_BETA: f64 = 100.0;

/// Parameters identifying a kernel: dimension, exponent, shape, and the
/// derived order of conditional positive definiteness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelParams {
    n: usize,
    beta: f64,
    c: f64,
    m: u32,
    #[serde(skip)]
    gamma_factor: f64,
}

impl KernelParams {
    pub fn new(n: usize, beta: f64, c: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if !beta.is_finite() {
            return Err(Error::InvalidParameter("beta must be finite".into()));
        }
        if beta >= 0.0 && beta == beta.floor() && (beta as i64) % 2 == 0 {
            return Err(Error::InvalidParameter(
                "beta must not be a non-negative even integer".into(),
            ));
        }
        if beta.abs() > MAX_ABS_BETA {
            return Err(Error::InvalidParameter(format!(
                "|beta| must not exceed {MAX_ABS_BETA}"
            )));
        }
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidParameter("c must be positive".into()));
        }
        let gamma_factor = log_gamma(-beta / 2.0)?.value();
        Ok(Self {
            n,
            beta,
            c,
            m: order_of_cpd(beta),
            gamma_factor,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Order of conditional positive definiteness.
    pub fn m(&self) -> u32 {
        self.m
    }

    /// `Γ(-β/2)`.
    pub fn gamma_factor(&self) -> f64 {
        self.gamma_factor
    }

    /// `h(x)` for `x ∈ ℝⁿ`.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(self.eval_sq_norm(x.iter().map(|v| v * v).sum()))
    }

    /// `h(x - y)`; both points are assumed to have dimension `n`.
    pub fn eval_between(&self, x: &[f64], y: &[f64]) -> f64 {
        let r2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
        self.eval_sq_norm(r2)
    }

    /// `h` as a function of `|x|²`.
    pub fn eval_sq_norm(&self, r2: f64) -> f64 {
        self.gamma_factor * (self.c * self.c + r2).powf(self.beta / 2.0)
    }
}

/// `m = 0` for `β < 0`, `m = ⌈β/2⌉` for `β > 0`.
pub fn order_of_cpd(beta: f64) -> u32 {
    if beta < 0.0 {
        0
    } else {
        (beta / 2.0).ceil() as u32
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn values_at_origin() {
        let imq = KernelParams::new(1, -1.0, 1.0).unwrap();
        assert!((imq.eval(&[0.0]).unwrap() - PI.sqrt()).abs() < 1e-14);
        let mq = KernelParams::new(1, 1.0, 1.0).unwrap();
        assert!((mq.eval(&[0.0]).unwrap() + 2.0 * PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn order() {
        assert_eq!(order_of_cpd(-1.0), 0);
        assert_eq!(order_of_cpd(-7.3), 0);
        assert_eq!(order_of_cpd(1.0), 1);
        assert_eq!(order_of_cpd(3.0), 2);
        assert_eq!(order_of_cpd(5.0), 3);
        assert_eq!(order_of_cpd(0.5), 1);
        assert_eq!(order_of_cpd(2.5), 2);
    }

    #[test]
    fn rejects_invalid_parameters() {
        for beta in [0.0, 2.0, 4.0, 100.0] {
            let err = KernelParams::new(1, beta, 1.0).unwrap_err();
            assert_eq!(
                err.to_string(),
                "invalid parameter: beta must not be a non-negative even integer"
            );
        }
        assert!(KernelParams::new(1, -2.0, 1.0).is_ok());
        assert!(KernelParams::new(1, 101.0, 1.0).is_err());
        assert!(KernelParams::new(1, -101.0, 1.0).is_err());
        assert!(KernelParams::new(0, 1.0, 1.0).is_err());
        assert!(KernelParams::new(1, 1.0, 0.0).is_err());
        assert!(KernelParams::new(1, 1.0, -1.0).is_err());
        assert!(KernelParams::new(1, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn dimension_checked() {
        let p = KernelParams::new(2, 1.0, 1.0).unwrap();
        assert_eq!(
            p.eval(&[0.0]),
            Err(Error::DimensionMismatch {
                expected: 2,
                got: 1
            })
        );
    }
}

//! Log-gamma via the Lanczos approximation (g = 7, nine coefficients),
//! with the reflection identity below one half.

#![allow(clippy::excessive_precision)]

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln|Γ(x)|` together with the sign of `Γ(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogGamma {
    pub ln_abs: f64,
    pub sign: f64,
}

impl LogGamma {
    /// Plain value `Γ(x)`; overflows to infinity for large arguments.
    pub fn value(&self) -> f64 {
        self.sign * self.ln_abs.exp()
    }
}

/// Computes `ln|Γ(x)|` and `sign Γ(x)`.
///
/// Fails with [`Error::Pole`] at the non-positive integers.
pub fn log_gamma(x: f64) -> Result<LogGamma> {
    if !x.is_finite() {
        return Err(Error::InvalidParameter(format!("log_gamma argument {x}")));
    }
    if x <= 0.0 && x == x.floor() {
        return Err(Error::Pole(x));
    }
    if x < 0.5 {
        // Γ(x)Γ(1-x) = π / sin(πx), and Γ(1-x) > 0 here.
        let s = sin_pi(x);
        let reflected = lanczos_ln_gamma(1.0 - x);
        return Ok(LogGamma {
            ln_abs: PI.ln() - s.abs().ln() - reflected,
            sign: s.signum(),
        });
    }
    Ok(LogGamma {
        ln_abs: lanczos_ln_gamma(x),
        sign: 1.0,
    })
}

/// `ln Γ(x)` for `x >= 0.5`.
fn lanczos_ln_gamma(x: f64) -> f64 {
    let z = x - 1.0;
    let mut series = LANCZOS_COEFFS[0];
    for (i, &coeff) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += coeff / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + series.ln()
}

/// `sin(πx)` with exact argument reduction to `[-1/2, 1/2]`.
fn sin_pi(x: f64) -> f64 {
    let k = x.round();
    let r = x - k;
    let s = (PI * r).sin();
    if (k as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}

/// `ln(k!)` for non-negative integer `k`.
pub fn ln_factorial(k: u64) -> f64 {
    lanczos_ln_gamma(k as f64 + 1.0)
}

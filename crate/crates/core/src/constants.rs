//! Explicit constants of the exponential error bound.
//!
//! `ρ` and `Δ₀` come from the three-way case split on `n - β`; `B`, `C`,
//! `δ₀`, `λ`, `d₀` and `λ′` follow in closed form. Everything that can
//! contain `e^{2nγₙ}` is a [`LogReal`]. For `n ≥ 4` even `ln λ` underflows,
//! so `ln λ` and `ln λ′` are additionally kept as `LogReal`s of their own.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::kernel::{log_gamma, KernelParams};
use crate::logreal::LogReal;

/// `γ₁ = 2`, `γₙ = 2n(1 + γₙ₋₁)`. Fails once the value leaves `u64`.
pub fn gamma_n(n: usize) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let mut g: u64 = 2;
    for k in 2..=n as u64 {
        g = g
            .checked_add(1)
            .and_then(|v| v.checked_mul(2 * k))
            .ok_or_else(|| Error::InvalidParameter(format!("gamma_n overflows for n = {n}")))?;
    }
    Ok(g)
}

/// Volume of the Euclidean unit ball in `ℝⁿ`, `π^{n/2} / Γ(n/2 + 1)`.
pub fn unit_ball_volume(n: usize) -> f64 {
    ln_unit_ball_volume(n).exp()
}

fn ln_unit_ball_volume(n: usize) -> f64 {
    let half = n as f64 / 2.0;
    half * std::f64::consts::PI.ln()
        - log_gamma(half + 1.0)
            .expect("positive argument")
            .ln_abs
}

/// Which branch of the `(ρ, Δ₀)` table applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseLabel {
    /// `n - β > 3`, `β < 0`.
    #[serde(rename = "(a)(i)")]
    AI,
    /// `n - β > 3`, `β > 0`.
    #[serde(rename = "(a)(ii)")]
    AII,
    /// `n - β ≤ 1`, `β < 0`; unreachable for `n ≥ 1`.
    #[serde(rename = "(b)(i)")]
    BI,
    /// `n - β ≤ 1`, `β > 0`.
    #[serde(rename = "(b)(ii)")]
    BII,
    /// `1 < n - β ≤ 3`.
    #[serde(rename = "(c)")]
    C,
}

impl CaseLabel {
    pub fn is_case_b(self) -> bool {
        matches!(self, CaseLabel::BI | CaseLabel::BII)
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseLabel::AI => "(a)(i)",
            CaseLabel::AII => "(a)(ii)",
            CaseLabel::BI => "(b)(i)",
            CaseLabel::BII => "(b)(ii)",
            CaseLabel::C => "(c)",
        };
        f.write_str(s)
    }
}

/// Output of the case table: the shift `s` and the exact rationals `ρ`, `Δ₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseEntry {
    pub label: CaseLabel,
    pub s: u64,
    pub rho: BigRational,
    pub delta0: BigRational,
}

pub fn case_table(p: &KernelParams) -> CaseEntry {
    classify(p.n() as f64 - p.beta(), p.beta(), p.m())
}

/// `∏_{j=lo}^{hi} j`, empty product 1.
fn falling_product(lo: u64, hi: u64) -> BigInt {
    (lo..=hi).fold(BigInt::one(), |acc, j| acc * BigInt::from(j))
}

fn int(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn classify(gap: f64, beta: f64, m: u32) -> CaseEntry {
    let m = u64::from(m);
    let shift = ((gap - 3.0) / 2.0).ceil();
    if gap > 3.0 {
        let s = shift as u64;
        if beta < 0.0 {
            let rho = int(3 + s) / int(3);
            let delta0 = BigRational::from_integer(falling_product(3, 2 + s)) / (&rho * &rho);
            CaseEntry {
                label: CaseLabel::AI,
                s,
                rho,
                delta0,
            }
        } else {
            let rho = int(1) + int(s) / int(2 * m + 3);
            let delta0 = BigRational::from_integer(falling_product(2 * m + 3, 2 * m + 2 + s))
                / num_traits::pow(rho.clone(), (2 * m + 2) as usize);
            CaseEntry {
                label: CaseLabel::AII,
                s,
                rho,
                delta0,
            }
        }
    } else if gap <= 1.0 {
        let s = (-shift) as u64;
        if beta < 0.0 {
            CaseEntry {
                label: CaseLabel::BI,
                s,
                rho: BigRational::one(),
                delta0: BigRational::new(BigInt::one(), BigInt::from(2)),
            }
        } else {
            // 1 / ((2m+2)(2m+1)···(2m-s+3))
            let denom = falling_product(2 * m + 3 - s, 2 * m + 2);
            CaseEntry {
                label: CaseLabel::BII,
                s,
                rho: BigRational::one(),
                delta0: BigRational::new(BigInt::one(), denom),
            }
        }
    } else {
        CaseEntry {
            label: CaseLabel::C,
            s: 0,
            rho: BigRational::one(),
            delta0: BigRational::one(),
        }
    }
}

fn ln_bigint(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        v.to_f64().expect("fits").ln()
    } else {
        let shift = bits - 900;
        let top: BigInt = v >> shift;
        top.to_f64().expect("fits").ln() + shift as f64 * std::f64::consts::LN_2
    }
}

/// Natural log of a positive rational.
pub fn ln_rational(r: &BigRational) -> f64 {
    assert!(r.is_positive(), "log of non-positive rational");
    ln_bigint(r.numer()) - ln_bigint(r.denom())
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    ln_rational(r).exp()
}

fn serialize_rational<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Cube-side floor used when none is supplied.
pub const DEFAULT_B0: f64 = 1.0;

/// Every constant of the bound for one kernel and cube-side floor.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConstantSet {
    pub n: usize,
    pub beta: f64,
    pub c: f64,
    pub m: u32,
    pub case_label: CaseLabel,
    pub gamma_n: u64,
    pub s: u64,
    #[serde(serialize_with = "serialize_rational")]
    pub rho: BigRational,
    #[serde(rename = "delta0Const", serialize_with = "serialize_rational")]
    pub delta0_const: BigRational,
    pub rho_prime: f64,
    pub big_b: LogReal,
    pub big_c: LogReal,
    pub delta0: LogReal,
    pub lambda: LogReal,
    /// `ln λ` (negative) as a number in its own right.
    pub ln_lambda: LogReal,
    pub d0: LogReal,
    pub lambda_prime: LogReal,
    /// `ln λ′ = ln λ / 2`.
    pub ln_lambda_prime: LogReal,
    pub front_k: LogReal,
    pub alpha_n: f64,
    pub b0: f64,
}

impl ConstantSet {
    pub fn compute(p: &KernelParams, b0: f64) -> Result<Self> {
        if !(b0.is_finite() && b0 > 0.0) {
            return Err(Error::InvalidParameter("b0 must be positive".into()));
        }
        let n = p.n();
        let nf = n as f64;
        let m = p.m();
        let gamma_n = gamma_n(n)?;
        let gn = gamma_n as f64;
        let entry = case_table(p);
        let ln_rho = ln_rational(&entry.rho);
        let ln_delta0_const = ln_rational(&entry.delta0);
        let rho_prime = ln_rho.exp() / p.c();

        let big_b = LogReal::from_ln_parts(2.0 * nf * gn, (2.0 * rho_prime * nf.sqrt()).ln());
        let big_c = big_b.max(LogReal::from_ln((2.0 / (3.0 * b0)).ln()));

        // 1 / (3 C γₙ)
        let inv_3cg = (LogReal::from_f64(3.0 * gn) * big_c).recip();
        let delta0 = inv_3cg * LogReal::from_f64(1.0 / f64::from(m + 1));
        let ln_lambda = LogReal::from_f64((2.0f64 / 3.0).ln()) * inv_3cg;
        let lambda = ln_lambda.exp();
        let d0 = delta0 * LogReal::from_f64(0.5);
        let ln_lambda_prime = ln_lambda * LogReal::from_f64(0.5);
        let lambda_prime = ln_lambda_prime.exp();

        let alpha_n = unit_ball_volume(n);
        let ln_k = (nf + p.beta() + 1.0) / 4.0 * std::f64::consts::LN_2
            + (nf + 1.0) / 4.0 * std::f64::consts::PI.ln()
            + 0.5 * (nf.ln() + ln_unit_ball_volume(n))
            + p.beta() / 2.0 * p.c().ln()
            + 0.5 * ln_delta0_const;

        Ok(Self {
            n,
            beta: p.beta(),
            c: p.c(),
            m,
            case_label: entry.label,
            gamma_n,
            s: entry.s,
            rho: entry.rho,
            delta0_const: entry.delta0,
            rho_prime,
            big_b,
            big_c,
            delta0,
            lambda,
            ln_lambda,
            d0,
            lambda_prime,
            ln_lambda_prime,
            front_k: LogReal::from_ln(ln_k),
            alpha_n,
            b0,
        })
    }

    pub fn ln_rho(&self) -> f64 {
        ln_rational(&self.rho)
    }

    pub fn ln_delta0_const(&self) -> f64 {
        ln_rational(&self.delta0_const)
    }

    /// `ln(λ′^{1/d}) = ln λ′ / d`, as a `LogReal`.
    pub fn ln_exp_factor(&self, d: f64) -> LogReal {
        self.ln_lambda_prime / LogReal::from_f64(d)
    }
}

//! Kernel-generated test functions with an exactly known native-space
//! seminorm, the certified pointwise bound, and the convergence driver.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::constants::ConstantSet;
use crate::error::{Error, Result};
use crate::geometry::{fill_distance, make_grid, subcube_condition, Cube, PointSet};
use crate::interpolant::{check_points, Interpolant};
use crate::kernel::{ln_factorial, KernelParams};
use crate::logreal::LogReal;
use crate::polynomial::{centroid, PolynomialBasis};

/// Tolerance on the moment conditions of the generating coefficients.
pub const MOMENT_TOLERANCE: f64 = 1e-10;
/// Most negative quadratic form accepted as rounding noise.
pub const FORM_TOLERANCE: f64 = 1e-10;
/// Inflation applied to the probe-grid fill-distance estimate.
pub const FILL_SAFETY_FACTOR: f64 = 1.05;

/// `f(x) = Σ_j a_j h(x - y_j)` with `Σ_j a_j q(y_j) = 0` for `q ∈ 𝒫_{m-1}`.
/// For such `f`, `‖f‖_h² = Σ_i Σ_j a_i a_j h(y_i - y_j)`.
#[derive(Debug, Clone)]
pub struct NativeFunction {
    params: KernelParams,
    centers: Vec<Vec<f64>>,
    coeffs: Vec<f64>,
    norm_h: f64,
}

impl NativeFunction {
    pub fn new(params: &KernelParams, centers: Vec<Vec<f64>>, coeffs: Vec<f64>) -> Result<Self> {
        if centers.len() != coeffs.len() {
            return Err(Error::DimensionMismatch {
                expected: centers.len(),
                got: coeffs.len(),
            });
        }
        check_points(params.n(), &centers)?;
        let basis = PolynomialBasis::for_order(params.n(), params.m());
        if !centers.is_empty() {
            let residual = basis.moment_residual(&centers, &coeffs, &centroid(&centers));
            if residual > MOMENT_TOLERANCE {
                return Err(Error::MomentViolation(residual));
            }
        }
        let mut form = 0.0;
        for (yi, ai) in centers.iter().zip(&coeffs) {
            for (yj, aj) in centers.iter().zip(&coeffs) {
                form += ai * aj * params.eval_between(yi, yj);
            }
        }
        if form < -FORM_TOLERANCE {
            return Err(Error::NegativeForm(form));
        }
        Ok(Self {
            params: *params,
            centers,
            coeffs,
            norm_h: form.max(0.0).sqrt(),
        })
    }

    /// Coefficients uniform in `[-1, 1]`, projected onto the moment
    /// constraints.
    pub fn random(params: &KernelParams, centers: Vec<Vec<f64>>, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw: Vec<f64> = centers.iter().map(|_| rng.gen_range(-1.0..1.0)).collect();
        let basis = PolynomialBasis::for_order(params.n(), params.m());
        let coeffs = basis.project_out(&centers, &raw, &centroid(&centers))?;
        Self::new(params, centers, coeffs)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.centers
            .iter()
            .zip(&self.coeffs)
            .map(|(y, a)| a * self.params.eval_between(x, y))
            .sum()
    }

    pub fn norm_h(&self) -> f64 {
        self.norm_h
    }

    pub fn params(&self) -> &KernelParams {
        &self.params
    }

    pub fn centers(&self) -> &[Vec<f64>] {
        &self.centers
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }
}

/// Test function with `count` centers uniform in the cube enlarged by a
/// quarter side in every direction, coefficients from
/// [`NativeFunction::random`]. Centers outside the cube keep the function
/// from being reproduced at round-off level by coarse grids.
pub fn seeded_test_function(params: &KernelParams, cube: &Cube, count: usize, seed: u64) -> Result<NativeFunction> {
    if cube.dim() != params.n() {
        return Err(Error::DimensionMismatch {
            expected: params.n(),
            got: cube.dim(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, width) = (-0.25 * cube.side(), 1.5 * cube.side());
    let centers: Vec<Vec<f64>> = (0..count)
        .map(|_| {
            cube.corner()
                .iter()
                .map(|c| c + lo + width * rng.gen::<f64>())
                .collect()
        })
        .collect();
    NativeFunction::random(params, centers, seed)
}

fn check_k(cs: &ConstantSet, k: u32) -> Result<()> {
    if 2 * k < 2 * cs.m + 2 {
        return Err(Error::KTooSmall {
            k,
            min: 2 * cs.m + 2,
        });
    }
    Ok(())
}

/// Upper bound on `c_k = {∫ |ξ|^{2k}/(k!)² dμ}^{1/2}`:
/// `K · c^{-k} · (2ρ)^k`, where `K` is the front factor.
pub fn moment_coefficient_bound(cs: &ConstantSet, k: u32) -> Result<LogReal> {
    check_k(cs, k)?;
    let kf = f64::from(k);
    Ok(cs.front_k * LogReal::from_ln(kf * ((2.0f64).ln() + cs.ln_rho() - cs.c.ln())))
}

/// The sharper intermediate bound `(1/k!) · K · c^{-k} · ρ^k · √((2k)!)`,
/// which the final form dominates because `√((2k)!)/k! ≤ 2^k`.
pub fn moment_coefficient_intermediate(cs: &ConstantSet, k: u32) -> Result<LogReal> {
    check_k(cs, k)?;
    let kf = f64::from(k);
    let ln = -ln_factorial(u64::from(k)) + kf * (cs.ln_rho() - cs.c.ln())
        + 0.5 * ln_factorial(2 * u64::from(k));
    Ok(cs.front_k * LogReal::from_ln(ln))
}

/// Pieces of the bound `K · λ′^{1/d} · ‖f‖_h`.
#[derive(Debug, Clone, Copy)]
pub struct BoundValue {
    pub exp_factor: LogReal,
    pub bound: LogReal,
    /// `d ≤ d₀`.
    pub within_d0: bool,
}

pub fn evaluate_bound(cs: &ConstantSet, d: f64, norm_h: f64) -> Result<BoundValue> {
    if !(d.is_finite() && d > 0.0) {
        return Err(Error::InvalidParameter("d must be positive".into()));
    }
    let exp_factor = cs.ln_exp_factor(d).exp();
    Ok(BoundValue {
        exp_factor,
        bound: cs.front_k * exp_factor * LogReal::from_f64(norm_h),
        within_d0: d.ln() <= cs.d0.ln_mag() + 1e-12,
    })
}

/// One level of the convergence experiment.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundReport {
    pub level: usize,
    pub points_per_axis: usize,
    pub num_points: usize,
    pub fill_distance_estimate: f64,
    pub d: f64,
    pub front_k: LogReal,
    pub exp_factor: LogReal,
    pub norm_h: f64,
    pub bound: LogReal,
    pub observed_max_err: Option<f64>,
    pub probe_count: usize,
    pub within_d0: bool,
    pub subcube_holds: bool,
    pub valid: bool,
    /// `log10(bound / observedMaxErr)`.
    pub log10_slack: Option<f64>,
    pub error: Option<String>,
}

impl BoundReport {
    pub fn ln_bound(&self) -> f64 {
        self.bound.ln_mag()
    }

    pub fn bound_holds(&self) -> Option<bool> {
        self.observed_max_err
            .map(|e| LogReal::from_f64(e) <= self.bound)
    }
}

/// Probe-grid resolution whose points include the cell centers of a
/// `per_axis` grid, so the fill distance of an unjittered grid is exact.
pub fn probe_resolution(n: usize, per_axis: usize) -> usize {
    let mult = match n {
        1 => 8,
        2 => 2,
        _ => 1,
    };
    2 * (per_axis - 1) * mult + 1
}

/// Runs the experiment on unjittered grids with the given points per axis.
///
/// Errors in one level (typically a singular system) are recorded in that
/// level's report and do not stop the others.
pub fn run_convergence(
    cs: &ConstantSet,
    f: &NativeFunction,
    cube: &Cube,
    levels: &[usize],
    probes: usize,
    seed: u64,
) -> Result<Vec<BoundReport>> {
    if levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("levels must be strictly increasing".into()));
    }
    if levels.first().is_some_and(|&l| l < 2) {
        return Err(Error::InvalidParameter("levels need at least 2 points per axis".into()));
    }
    if probes < 100 {
        return Err(Error::InvalidParameter("at least 100 probes required".into()));
    }
    if cube.dim() != f.params().n() {
        return Err(Error::DimensionMismatch {
            expected: f.params().n(),
            got: cube.dim(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let probe_points: Vec<Vec<f64>> = (0..probes).map(|_| cube.sample(&mut rng)).collect();
    let truth: Vec<f64> = probe_points.iter().map(|x| f.eval(x)).collect();

    levels
        .iter()
        .enumerate()
        .map(|(level, &per_axis)| run_level(cs, f, cube, level, per_axis, &probe_points, &truth, seed))
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn run_level(
    cs: &ConstantSet,
    f: &NativeFunction,
    cube: &Cube,
    level: usize,
    per_axis: usize,
    probe_points: &[Vec<f64>],
    truth: &[f64],
    seed: u64,
) -> Result<BoundReport> {
    let grid: PointSet = make_grid(cube, per_axis, 0.0, seed)?;
    let fill = fill_distance(cube, &grid, probe_resolution(cube.dim(), per_axis))?;
    let d = FILL_SAFETY_FACTOR * fill;
    let subcube_holds = subcube_condition(cube, &grid, (2.0 * d).min(cube.side()))?;
    let bv = evaluate_bound(cs, d, f.norm_h())?;

    let values: Vec<f64> = grid.points().iter().map(|x| f.eval(x)).collect();
    let (observed, error) = match Interpolant::build(f.params(), grid.points(), &values) {
        Ok(s) => {
            let mut worst = 0.0f64;
            for (x, t) in probe_points.iter().zip(truth) {
                worst = worst.max((s.eval(x)? - t).abs());
            }
            (Some(worst), None)
        }
        Err(e) => (None, Some(e.to_string())),
    };
    let log10_slack = observed
        .filter(|&e| e > 0.0)
        .map(|e| (bv.bound / LogReal::from_f64(e)).log10_mag());

    Ok(BoundReport {
        level,
        points_per_axis: per_axis,
        num_points: grid.len(),
        fill_distance_estimate: fill,
        d,
        front_k: cs.front_k,
        exp_factor: bv.exp_factor,
        norm_h: f.norm_h(),
        bound: bv.bound,
        observed_max_err: observed,
        probe_count: probe_points.len(),
        within_d0: bv.within_d0,
        subcube_holds,
        valid: bv.within_d0 && subcube_holds,
        log10_slack,
        error,
    })
}

/// CSV rendering: `level,d,ln_bound,observed_max_err,valid`.
pub fn reports_to_csv(reports: &[BoundReport]) -> String {
    use crate::geometry::format_f64;
    let mut out = String::from("level,d,ln_bound,observed_max_err,valid\n");
    for r in reports {
        let err = r.observed_max_err.map(format_f64).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.level,
            format_f64(r.d),
            format_f64(r.ln_bound()),
            err,
            r.valid
        ));
    }
    out
}

//! Cubes, point sets, fill distance and the subcube-occupancy test.

use std::collections::HashSet;
use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::interpolant::check_points;

/// Axis-aligned cube `corner + [0, side]ⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cube {
    corner: Vec<f64>,
    side: f64,
}

impl Cube {
    pub fn new(corner: Vec<f64>, side: f64) -> Result<Self> {
        if corner.is_empty() {
            return Err(Error::InvalidParameter("cube dimension must be positive".into()));
        }
        if !(side.is_finite() && side > 0.0) {
            return Err(Error::InvalidParameter("cube side must be positive".into()));
        }
        Ok(Self { corner, side })
    }

    /// `[0, 1]ⁿ`.
    pub fn unit(n: usize) -> Self {
        Self {
            corner: vec![0.0; n],
            side: 1.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.corner.len()
    }

    pub fn corner(&self) -> &[f64] {
        &self.corner
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(&self.corner)
            .all(|(xi, ci)| *xi >= *ci && *xi <= ci + self.side)
    }

    /// Uniform point in the cube.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        self.corner
            .iter()
            .map(|c| c + self.side * rng.gen::<f64>())
            .collect()
    }
}

/// Distinct points of a common dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    points: Vec<Vec<f64>>,
}

impl PointSet {
    pub fn new(dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        check_points(dim, &points)?;
        Ok(Self { dim, points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn into_points(self) -> Vec<Vec<f64>> {
        self.points
    }

    pub fn nearest_distance(&self, y: &[f64]) -> f64 {
        self.points
            .iter()
            .map(|x| x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>())
            .fold(f64::INFINITY, f64::min)
            .sqrt()
    }
}

/// Calls `visit` on every point of the `per_axis`ⁿ grid covering `cube`,
/// faces included, first coordinate varying fastest.
fn for_each_grid_point(cube: &Cube, per_axis: usize, mut visit: impl FnMut(&[usize], &[f64])) {
    let n = cube.dim();
    let step = cube.side / (per_axis - 1) as f64;
    let mut idx = vec![0usize; n];
    let mut x = cube.corner.clone();
    loop {
        for (k, xi) in x.iter_mut().enumerate() {
            *xi = if idx[k] == per_axis - 1 {
                cube.corner[k] + cube.side
            } else {
                cube.corner[k] + step * idx[k] as f64
            };
        }
        visit(&idx, &x);
        let mut k = 0;
        loop {
            if k == n {
                return;
            }
            idx[k] += 1;
            if idx[k] < per_axis {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Estimate of `sup_{y ∈ E} min_{x ∈ X} |y - x|` as the maximum over a
/// `resolution`ⁿ probe grid. This is a lower estimate of the true supremum.
pub fn fill_distance(cube: &Cube, points: &PointSet, resolution: usize) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    if resolution < 2 {
        return Err(Error::InvalidParameter("resolution must be at least 2".into()));
    }
    if points.dim() != cube.dim() {
        return Err(Error::DimensionMismatch {
            expected: cube.dim(),
            got: points.dim(),
        });
    }
    let mut worst = 0.0f64;
    for_each_grid_point(cube, resolution, |_, y| {
        worst = worst.max(points.nearest_distance(y));
    });
    Ok(worst)
}

/// Cells per axis for a partition of side `b` into side-`delta` cells.
fn cells_per_axis(b: f64, delta: f64) -> usize {
    let ratio = b / delta;
    let rounded = ratio.round();
    if (ratio - rounded).abs() <= 1e-9 * ratio {
        rounded.max(1.0) as usize
    } else {
        ratio.ceil() as usize
    }
}

/// True iff every cell of the `⌈b/δ⌉ⁿ` partition of `E` into side-`δ`
/// cubes contains a point of `X`.
///
/// When `b/δ` is not integral, the last cell along each axis is placed flush
/// with the far face, so it overlaps its neighbour and stays a full cube of
/// side `δ` inside `E`. Cells are closed.
pub fn subcube_condition(cube: &Cube, points: &PointSet, delta: f64) -> Result<bool> {
    if !(delta > 0.0 && delta <= cube.side * (1.0 + 1e-12)) {
        return Err(Error::InvalidParameter(format!(
            "delta {delta} must lie in (0, {}]",
            cube.side
        )));
    }
    let n = cube.dim();
    let k = cells_per_axis(cube.side, delta);
    let starts: Vec<f64> = (0..k)
        .map(|i| (i as f64 * delta).min(cube.side - delta).max(0.0))
        .collect();
    let total = (k as u128).checked_pow(n as u32).unwrap_or(u128::MAX);

    let mut occupied: HashSet<Vec<usize>> = HashSet::new();
    for x in points.points() {
        // cell indices along each axis whose closed interval contains x
        let mut per_axis: Vec<Vec<usize>> = Vec::with_capacity(n);
        for (xd, cd) in x.iter().zip(&cube.corner) {
            let t = xd - cd;
            let hits: Vec<usize> = starts
                .iter()
                .enumerate()
                .filter(|(_, &s)| t >= s && t <= s + delta)
                .map(|(i, _)| i)
                .collect();
            if hits.is_empty() {
                break;
            }
            per_axis.push(hits);
        }
        if per_axis.len() < n {
            continue;
        }
        let mut combo = vec![0usize; n];
        loop {
            occupied.insert(combo.iter().enumerate().map(|(d, &j)| per_axis[d][j]).collect());
            let mut d = 0;
            while d < n {
                combo[d] += 1;
                if combo[d] < per_axis[d].len() {
                    break;
                }
                combo[d] = 0;
                d += 1;
            }
            if d == n {
                break;
            }
        }
        if occupied.len() as u128 == total {
            return Ok(true);
        }
    }
    Ok(occupied.len() as u128 == total)
}

/// Uniform grid with `per_axis` points per axis, faces included. Points
/// strictly inside the cube are moved by up to `jitter` grid spacings in
/// each coordinate, using a generator seeded with `seed`.
pub fn make_grid(cube: &Cube, per_axis: usize, jitter: f64, seed: u64) -> Result<PointSet> {
    if per_axis < 2 {
        return Err(Error::InvalidParameter("need at least 2 points per axis".into()));
    }
    if !(0.0..0.5).contains(&jitter) {
        return Err(Error::InvalidParameter("jitter must lie in [0, 0.5)".into()));
    }
    let step = cube.side / (per_axis - 1) as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::new();
    for_each_grid_point(cube, per_axis, |idx, x| {
        let mut p = x.to_vec();
        let interior = idx.iter().all(|&i| i > 0 && i < per_axis - 1);
        if jitter > 0.0 && interior {
            for v in p.iter_mut() {
                *v += jitter * step * rng.gen_range(-1.0..1.0);
            }
        }
        points.push(p);
    });
    PointSet::new(cube.dim(), points)
}

/// Reads a headerless CSV of numbers; every row must have the same width.
pub fn read_csv_rows<R: Read>(reader: R) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut rows = Vec::new();
    let mut width = None;
    for (line, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| Error::Input(e.to_string()))?;
        let row = record
            .iter()
            .map(|field| {
                field
                    .parse::<f64>()
                    .map_err(|_| Error::Input(format!("row {}: cannot parse {field:?}", line + 1)))
            })
            .collect::<Result<Vec<f64>>>()?;
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(Error::Input(format!(
                    "row {} has {} columns, expected {w}",
                    line + 1,
                    row.len()
                )))
            }
            _ => {}
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Round-trip formatting with 17 significant digits.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_csv_rows<W: Write>(writer: W, rows: &[Vec<f64>]) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
    for row in rows {
        wtr.write_record(row.iter().map(|v| format_f64(*v)))
            .map_err(|e| Error::Input(e.to_string()))?;
    }
    wtr.flush().map_err(|e| Error::Input(e.to_string()))
}

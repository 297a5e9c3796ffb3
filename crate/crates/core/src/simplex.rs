//! Dense two-phase tableau simplex for `min cᵀx` subject to `Ax = b`,
//! `x ≥ 0`. Bland's rule throughout, so the method cannot cycle.

use crate::error::{Error, Result};

const COST_TOL: f64 = 1e-10;
const PIVOT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
}

struct Tableau {
    /// `rows × (cols + 1)`, last column is the right-hand side.
    a: Vec<Vec<f64>>,
    /// Reduced costs, last entry is minus the objective value.
    cost: Vec<f64>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.a[row][col];
        for v in self.a[row].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.a[row].clone();
        for (r, line) in self.a.iter_mut().enumerate() {
            if r != row && line[col] != 0.0 {
                let f = line[col];
                for (v, pv) in line.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                line[col] = 0.0;
            }
        }
        let f = self.cost[col];
        if f != 0.0 {
            for (v, pv) in self.cost.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            self.cost[col] = 0.0;
        }
        self.basis[row] = col;
    }

    /// Runs simplex iterations over columns `< allowed`.
    fn optimize(&mut self, allowed: usize, iterations: &mut usize, cap: usize) -> Result<()> {
        loop {
            let Some(col) = (0..allowed).find(|&j| self.cost[j] < -COST_TOL) else {
                return Ok(());
            };
            if *iterations >= cap {
                return Err(Error::IterationLimit(cap));
            }
            *iterations += 1;
            let rhs = self.cols;
            let mut best: Option<(usize, f64)> = None;
            for (r, line) in self.a.iter().enumerate() {
                if line[col] > PIVOT_TOL {
                    let ratio = line[rhs] / line[col];
                    best = match best {
                        None => Some((r, ratio)),
                        Some((br, bv)) => {
                            if ratio < bv - 1e-14
                                || (ratio <= bv + 1e-14 && self.basis[r] < self.basis[br])
                            {
                                Some((r, ratio))
                            } else {
                                Some((br, bv))
                            }
                        }
                    };
                }
            }
            match best {
                // Unbounded below; cannot happen for the bounded programs
                // solved here, so report it as a failed solve.
                None => return Err(Error::LpInfeasible),
                Some((row, _)) => self.pivot(row, col),
            }
        }
    }
}

/// Solves `min cᵀx` s.t. `Ax = b`, `x ≥ 0`. The iteration cap is
/// `10 · (variables + constraints)` across both phases.
pub fn minimize(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Result<LpSolution> {
    let m = a.len();
    let n = c.len();
    if b.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: b.len(),
        });
    }
    if let Some(row) = a.iter().find(|row| row.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: row.len(),
        });
    }
    let cols = n + m;
    let mut rows = Vec::with_capacity(m);
    for (i, (row, &bi)) in a.iter().zip(b).enumerate() {
        let flip = if bi < 0.0 { -1.0 } else { 1.0 };
        let mut line: Vec<f64> = row.iter().map(|v| flip * v).collect();
        line.extend((0..m).map(|j| if j == i { 1.0 } else { 0.0 }));
        line.push(flip * bi);
        rows.push(line);
    }
    // phase one: minimize the sum of artificials
    let mut cost = vec![0.0; cols + 1];
    for line in &rows {
        for j in 0..n {
            cost[j] -= line[j];
        }
        cost[cols] -= line[cols];
    }
    let mut t = Tableau {
        a: rows,
        cost,
        basis: (n..n + m).collect(),
        cols,
    };
    let cap = 10 * (n + m);
    let mut iterations = 0;
    t.optimize(n, &mut iterations, cap)?;
    let infeasibility = -t.cost[cols];
    let b_scale = b.iter().fold(1.0f64, |s, v| s.max(v.abs()));
    if infeasibility > 1e-9 * b_scale {
        return Err(Error::LpInfeasible);
    }

    // drive zero-level artificials out of the basis; drop redundant rows
    let mut r = 0;
    while r < t.a.len() {
        if t.basis[r] >= n {
            match (0..n).find(|&j| t.a[r][j].abs() > PIVOT_TOL) {
                Some(j) => t.pivot(r, j),
                None => {
                    t.a.remove(r);
                    t.basis.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }

    // phase two
    let mut cost = vec![0.0; cols + 1];
    cost[..n].copy_from_slice(c);
    for (line, &bv) in t.a.iter().zip(&t.basis) {
        let cb = c[bv];
        if cb != 0.0 {
            for (v, lv) in cost.iter_mut().zip(line) {
                *v -= cb * lv;
            }
        }
    }
    for &bv in &t.basis {
        cost[bv] = 0.0;
    }
    t.cost = cost;
    t.optimize(n, &mut iterations, cap)?;

    let mut x = vec![0.0; n];
    for (line, &bv) in t.a.iter().zip(&t.basis) {
        x[bv] = line[cols];
    }
    let objective = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
    Ok(LpSolution {
        x,
        objective,
        iterations,
    })
}

/// Minimizes `Σ|w_i|` subject to `A w = b` via the split `w = u - v`.
pub fn min_l1_norm(a: &[Vec<f64>], b: &[f64]) -> Result<Vec<f64>> {
    let n = a.first().map_or(0, Vec::len);
    let split: Vec<Vec<f64>> = a
        .iter()
        .map(|row| row.iter().copied().chain(row.iter().map(|v| -v)).collect())
        .collect();
    let sol = minimize(&vec![1.0; 2 * n], &split, b)?;
    Ok((0..n).map(|i| sol.x[i] - sol.x[n + i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_lp() {
        // min -x - y  s.t. x + 2y + s1 = 4, 3x + y + s2 = 6
        let sol = minimize(
            &[-1.0, -1.0, 0.0, 0.0],
            &[vec![1.0, 2.0, 1.0, 0.0], vec![3.0, 1.0, 0.0, 1.0]],
            &[4.0, 6.0],
        )
        .unwrap();
        assert!((sol.x[0] - 1.6).abs() < 1e-12);
        assert!((sol.x[1] - 1.2).abs() < 1e-12);
        assert!((sol.objective + 2.8).abs() < 1e-12);
    }

    #[test]
    fn infeasible() {
        // x = -1 with x >= 0
        assert_eq!(minimize(&[1.0], &[vec![1.0]], &[-1.0]), Err(Error::LpInfeasible));
    }

    #[test]
    fn redundant_rows_are_dropped() {
        let sol = minimize(
            &[1.0, 2.0],
            &[vec![1.0, 1.0], vec![2.0, 2.0]],
            &[1.0, 2.0],
        )
        .unwrap();
        assert_eq!(sol.x, vec![1.0, 0.0]);
    }

    #[test]
    fn l1_prefers_sparse() {
        // w1 + w2 + w3 = 1 has minimum l1 norm 1
        let w = min_l1_norm(&[vec![1.0, 1.0, 1.0]], &[1.0]).unwrap();
        assert!((w.iter().map(|v| v.abs()).sum::<f64>() - 1.0).abs() < 1e-12);
        // negative right-hand side
        let w = min_l1_norm(&[vec![1.0, 2.0]], &[-4.0]).unwrap();
        assert!((w[1] + 2.0).abs() < 1e-12 && w[0].abs() < 1e-12);
    }
}

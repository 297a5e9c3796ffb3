use hspline::certify::NativeFunction;
use hspline::geometry::{make_grid, Cube};
use hspline::polynomial::PolynomialBasis;
use hspline::{Interpolant, KernelParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_points(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..n).map(|_| rng.gen::<f64>()).collect())
        .collect()
}

fn jittered(n: usize, per_axis: usize, seed: u64) -> Vec<Vec<f64>> {
    make_grid(&Cube::unit(n), per_axis, 0.3, seed).unwrap().into_points()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

#[test]
fn node_exactness_and_moments() {
    for (n, beta, per_axis) in [(1, -1.0, 12), (1, 1.0, 10), (2, 1.0, 6), (2, 3.0, 7), (3, -3.0, 3), (2, 5.0, 7)] {
        let p = KernelParams::new(n, beta, 1.0).unwrap();
        let x = jittered(n, per_axis, 17 + per_axis as u64);
        let count = x.len();
        let f: Vec<f64> = x.iter().map(|v| (3.0 * v[0]).sin() + v.iter().sum::<f64>().powi(2)).collect();
        let s = Interpolant::build(&p, &x, &f).unwrap();
        let fmax = max_abs(&f);
        for (xi, fi) in x.iter().zip(&f) {
            let r = (s.eval(xi).unwrap() - fi).abs();
            assert!(r <= 1e-9 * (1.0 + fmax), "n={n} beta={beta} residual={r:e}");
        }
        let cmax = max_abs(s.kernel_coeffs());
        assert!(s.moment_residual() <= 1e-8 * (1.0 + cmax) * count as f64);
    }
}

#[test]
fn polynomial_reproduction() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (n, beta) in [(1, 1.0), (1, 3.0), (2, 3.0), (2, 5.0), (3, 3.0)] {
        let p = KernelParams::new(n, beta, 1.0).unwrap();
        let basis = PolynomialBasis::for_order(n, p.m());
        let coeffs: Vec<f64> = (0..basis.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let q = |x: &[f64]| -> f64 {
            basis.eval(x, &vec![0.0; n]).iter().zip(&coeffs).map(|(a, b)| a * b).sum()
        };
        let x = jittered(n, if n == 1 { 12 } else if n == 2 { 6 } else { 3 }, 99);
        let f: Vec<f64> = x.iter().map(|v| q(v)).collect();
        let s = Interpolant::build(&p, &x, &f).unwrap();
        let probes = random_points(n, 1000, 7);
        let qmax = probes.iter().map(|v| q(v).abs()).fold(0.0, f64::max);
        for y in &probes {
            assert!((s.eval(y).unwrap() - q(y)).abs() <= 1e-8 * (1.0 + qmax), "n={n} beta={beta}");
        }
    }
}

#[test]
fn permutation_invariance() {
    let p = KernelParams::new(2, 1.0, 0.8).unwrap();
    let x = jittered(2, 5, 1);
    let f: Vec<f64> = x.iter().map(|v| v[0] * v[1] + v[0].cos()).collect();
    let s1 = Interpolant::build(&p, &x, &f).unwrap();
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.reverse();
    idx.swap(3, 11);
    let xp: Vec<Vec<f64>> = idx.iter().map(|&i| x[i].clone()).collect();
    let fp: Vec<f64> = idx.iter().map(|&i| f[i]).collect();
    let s2 = Interpolant::build(&p, &xp, &fp).unwrap();
    for y in random_points(2, 200, 2) {
        assert!((s1.eval(&y).unwrap() - s2.eval(&y).unwrap()).abs() <= 1e-10);
    }
}

#[test]
fn translation_covariance() {
    let p = KernelParams::new(2, 3.0, 1.0).unwrap();
    let x = jittered(2, 5, 4);
    let f: Vec<f64> = x.iter().map(|v| (v[0] - v[1]).exp()).collect();
    let shift = [3.5, -2.25];
    let xs: Vec<Vec<f64>> = x.iter().map(|v| vec![v[0] + shift[0], v[1] + shift[1]]).collect();
    let s1 = Interpolant::build(&p, &x, &f).unwrap();
    let s2 = Interpolant::build(&p, &xs, &f).unwrap();
    for y in random_points(2, 200, 5) {
        let a = s1.eval(&y).unwrap();
        let b = s2.eval(&[y[0] + shift[0], y[1] + shift[1]]).unwrap();
        assert!((a - b).abs() <= 1e-8 * a.abs().max(1.0));
    }
}

#[test]
fn native_function_reproduced_on_its_centers() {
    for (n, beta) in [(1, -1.0), (1, 1.0), (2, 3.0)] {
        let p = KernelParams::new(n, beta, 1.0).unwrap();
        let grid = make_grid(&Cube::unit(n), if n == 1 { 9 } else { 5 }, 0.2, 8).unwrap();
        let f = NativeFunction::random(&p, grid.points().to_vec(), 21).unwrap();
        let values: Vec<f64> = grid.points().iter().map(|y| f.eval(y)).collect();
        let s = Interpolant::build(&p, grid.points(), &values).unwrap();
        for (c, a) in s.kernel_coeffs().iter().zip(f.coeffs()) {
            assert!((c - a).abs() <= 1e-6 * (1.0 + a.abs()));
        }
        for y in random_points(n, 200, 9) {
            assert!((s.eval(&y).unwrap() - f.eval(&y)).abs() <= 1e-9);
        }
    }
}

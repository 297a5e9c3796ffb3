use hspline::geometry::{fill_distance, make_grid, subcube_condition, Cube, PointSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_set(n: usize, count: usize, seed: u64) -> PointSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = (0..count).map(|_| (0..n).map(|_| rng.gen::<f64>()).collect()).collect();
    PointSet::new(n, pts).unwrap()
}

/// Exact fill distance of a 1D set in [0, 1].
fn exact_fill_1d(points: &PointSet) -> f64 {
    let mut xs: Vec<f64> = points.points().iter().map(|p| p[0]).collect();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut worst = xs[0].max(1.0 - xs[xs.len() - 1]);
    for w in xs.windows(2) {
        worst = worst.max((w[1] - w[0]) / 2.0);
    }
    worst
}

#[test]
fn documented_examples() {
    let line = PointSet::new(1, vec![vec![0.0], vec![0.5], vec![1.0]]).unwrap();
    assert!((fill_distance(&Cube::unit(1), &line, 1001).unwrap() - 0.25).abs() <= 1e-3);
    let single = PointSet::new(2, vec![vec![0.5, 0.5]]).unwrap();
    let d = fill_distance(&Cube::unit(2), &single, 201).unwrap();
    assert!((d - 2f64.sqrt() / 2.0).abs() <= 1e-2);

    let fifths = PointSet::new(1, [0.1, 0.3, 0.5, 0.7, 0.9].iter().map(|&v| vec![v]).collect()).unwrap();
    assert!(subcube_condition(&Cube::unit(1), &fifths, 0.2).unwrap());
    let lonely = PointSet::new(1, vec![vec![0.1]]).unwrap();
    assert!(!subcube_condition(&Cube::unit(1), &lonely, 0.5).unwrap());

    let g = make_grid(&Cube::unit(1), 3, 0.0, 0).unwrap();
    assert_eq!(g.points(), &[vec![0.0], vec![0.5], vec![1.0]]);
    let corners = make_grid(&Cube::unit(2), 2, 0.0, 0).unwrap();
    assert_eq!(corners.len(), 4);
    assert!(corners.points().iter().all(|p| p.iter().all(|&v| v == 0.0 || v == 1.0)));
}

#[test]
fn fill_distance_monotone_under_insertion() {
    let cube = Cube::unit(2);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut pts: Vec<Vec<f64>> = vec![vec![0.3, 0.6]];
    let mut prev = f64::INFINITY;
    for _ in 0..40 {
        let d = fill_distance(&cube, &PointSet::new(2, pts.clone()).unwrap(), 65).unwrap();
        assert!(d <= prev);
        prev = d;
        pts.push(cube.sample(&mut rng));
    }
}

#[test]
fn fill_distance_resolution_behaviour() {
    for (n, count, seed) in [(1, 9, 1), (2, 25, 2), (3, 30, 3)] {
        let cube = Cube::unit(n);
        let x = random_set(n, count, seed);
        let base = if n == 3 { 33 } else { 129 };
        // nested probe grids: refining can only find farther points
        let coarse = fill_distance(&cube, &x, base).unwrap();
        let fine = fill_distance(&cube, &x, 2 * base - 1).unwrap();
        assert!(fine >= coarse);
        let doubled = fill_distance(&cube, &x, 2 * base).unwrap();
        assert!((doubled - coarse).abs() <= 0.01 * coarse, "n={n}: {coarse} vs {doubled}");
    }
}

#[test]
fn regular_grid_fill_distance() {
    for (n, q) in [(1usize, 4usize), (1, 10), (2, 4), (2, 7), (3, 3)] {
        let g = make_grid(&Cube::unit(n), q + 1, 0.0, 0).unwrap();
        // the probe grid contains the cell centers, so the estimate is exact
        let res = 2 * q + 1;
        let d = fill_distance(&Cube::unit(n), &g, res).unwrap();
        let want = (n as f64).sqrt() / (2.0 * q as f64);
        assert!((d - want).abs() <= 1e-12, "n={n} q={q}");
    }
}

#[test]
fn twice_fill_distance_satisfies_subcube_condition() {
    let cube = Cube::unit(1);
    for seed in 0..200 {
        let count = 1 + (seed as usize % 12);
        let x = random_set(1, count, seed);
        let delta = (2.0 * exact_fill_1d(&x) * (1.0 + 1e-9)).min(1.0);
        assert!(subcube_condition(&cube, &x, delta).unwrap(), "seed {seed}");
    }
    // n > 1: the probe estimate plus half a probe-cell diagonal bounds the true sup
    for seed in 0..30 {
        let n = 2 + (seed as usize % 2);
        let cube = Cube::unit(n);
        let x = random_set(n, 20 + seed as usize, 500 + seed);
        let res = if n == 2 { 257 } else { 41 };
        let est = fill_distance(&cube, &x, res).unwrap();
        let upper = est + (n as f64).sqrt() / (2.0 * (res - 1) as f64);
        let delta = (2.0 * upper * (1.0 + 1e-9)).min(1.0);
        assert!(subcube_condition(&cube, &x, delta).unwrap(), "seed {seed}");
    }
}

#[test]
fn coarser_partitions_inherit_occupancy() {
    // refinements by integer factors: each coarse cell is a union of fine cells
    let cube = Cube::unit(2);
    for seed in 0..50 {
        let x = random_set(2, 60, 900 + seed);
        for cells in [12usize, 8, 6] {
            let delta = 1.0 / cells as f64;
            if subcube_condition(&cube, &x, delta).unwrap() {
                for j in (1..=cells).filter(|j| cells % j == 0) {
                    assert!(subcube_condition(&cube, &x, delta * j as f64).unwrap());
                }
            }
        }
    }
}

#[test]
fn subcube_rejects_bad_delta() {
    let x = random_set(1, 3, 0);
    assert!(subcube_condition(&Cube::unit(1), &x, 0.0).is_err());
    assert!(subcube_condition(&Cube::unit(1), &x, 1.5).is_err());
}

#[test]
fn grid_is_seeded() {
    let cube = Cube::new(vec![-1.0, 2.0], 3.0).unwrap();
    let a = make_grid(&cube, 6, 0.3, 9).unwrap();
    let b = make_grid(&cube, 6, 0.3, 9).unwrap();
    let c = make_grid(&cube, 6, 0.3, 10).unwrap();
    assert_eq!(a.points(), b.points());
    assert_ne!(a.points(), c.points());
    assert!(a.points().iter().all(|p| cube.contains(p)));
}

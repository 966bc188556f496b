#![allow(dead_code)]

use rand_core::SeedableRng;
use rand_xoshiro::SplitMix64;
use sparse_refine::grid::{Dataset, Domain, SparseGrid};
use sparse_refine::harness::unit_draw;

/// Pseudo-random values in `[-scale, scale]` at every grid point.
pub fn random_data(grid: &SparseGrid<f64>, seed: u64, scale: f64) -> Dataset<f64> {
    let mut rng = SplitMix64::seed_from_u64(seed);
    grid.ids()
        .map(|id| (id.clone(), scale * (2.0 * unit_draw(&mut rng) - 1.0)))
        .collect()
}

pub fn random_domain(dimension: usize, seed: u64) -> Domain<f64> {
    let mut rng = SplitMix64::seed_from_u64(seed ^ 0xD0_A1);
    let intervals = (0..dimension)
        .map(|_| {
            let lo = 10.0 * unit_draw(&mut rng) - 5.0;
            (lo, lo + 0.1 + 4.0 * unit_draw(&mut rng))
        })
        .collect();
    Domain::new(intervals).unwrap()
}

pub fn rel_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + a.abs().max(b.abs()))
}

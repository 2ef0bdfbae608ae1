//! Reproducible sample points.
//!
//! The generator is SplitMix64 seeded with the run seed. A uniform double in
//! `[0, 1)` is the top 53 bits of the next output times `2^-53`. Points are
//! drawn in a fixed order, so any implementation of the same recipe produces
//! the same coordinates bit for bit.

use std::f64::consts::TAU;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::geometry::{Point3, SphericalPoint};
use crate::operators::GaussianBump;

#[derive(Debug, Clone)]
pub struct SampleRng(SplitMix64);

impl SampleRng {
    pub fn new(seed: u64) -> Self {
        Self(SplitMix64::seed_from_u64(seed))
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Direction with `cos θ` uniform in `(-max_abs_z, max_abs_z)` and φ
    /// uniform in `[0, 2π)`, scaled to radius `r`.
    pub fn direction(&mut self, r: f64, max_abs_z: f64) -> Point3 {
        let u = self.range(-max_abs_z, max_abs_z);
        let phi = self.range(0.0, TAU);
        SphericalPoint::new(r, u.acos(), phi).to_cartesian()
    }
}

/// `n` points on the unit sphere away from the poles (`|z| < max_abs_z`).
pub fn unit_sphere_points(seed: u64, n: usize, max_abs_z: f64) -> Vec<Point3> {
    let mut rng = SampleRng::new(seed);
    (0..n).map(|_| rng.direction(1.0, max_abs_z)).collect()
}

/// `n` points with radius uniform in `[r_min, r_max)`; for each point the
/// radius is drawn first, then the direction.
pub fn shell_points(seed: u64, n: usize, r_min: f64, r_max: f64, max_abs_z: f64) -> Vec<Point3> {
    let mut rng = SampleRng::new(seed);
    (0..n)
        .map(|_| {
            let r = rng.range(r_min, r_max);
            rng.direction(r, max_abs_z)
        })
        .collect()
}

/// Unit-sphere points (`|z| < 0.9`), each paired with a Gaussian bump whose
/// centre is the point displaced by a uniform offset in `[-0.5, 0.5)^3`.
pub fn gaussian_samples(seed: u64, n: usize) -> Vec<(Point3, GaussianBump)> {
    let mut rng = SampleRng::new(seed);
    (0..n)
        .map(|_| {
            let p = rng.direction(1.0, 0.9);
            let center = [0, 1, 2].map(|k| p[k] + rng.range(-0.5, 0.5));
            (p, GaussianBump { center })
        })
        .collect()
}

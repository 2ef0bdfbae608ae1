//! Gauss-Legendre rules and the tensor grids built from them.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::SphericalPoint;
use crate::special_functions::legendre_pair;

const NEWTON_MAX_ITER: usize = 100;
const NEWTON_TOL: f64 = 1e-15;

/// Nodes (ascending) and weights of the `n`-point Gauss-Legendre rule on
/// `[-1, 1]`.
///
/// Roots of `P_n` are found by Newton iteration from Chebyshev-like starting
/// guesses; only the non-negative half is iterated and the rest mirrored, so
/// the rule is exactly symmetric.
pub fn gauss_legendre(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(crate::error::domain(
            "gauss_legendre",
            "need at least one node",
        ));
    }
    let nf = n as f64;
    let half = n.div_ceil(2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];

    for i in 0..half {
        // i-th largest root
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut converged = false;
        let mut dp = 0.0;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, p_prev) = legendre_pair(n, x);
            dp = nf * (x * p - p_prev) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= NEWTON_TOL {
                converged = true;
                let (p, p_prev) = legendre_pair(n, x);
                dp = nf * (x * p - p_prev) / (x * x - 1.0);
                break;
            }
        }
        if !converged {
            return Err(Error::Convergence { n });
        }
        if n % 2 == 1 && i == half - 1 {
            x = 0.0;
            let (_, p_prev) = legendre_pair(n, 0.0);
            dp = nf * (-p_prev) / -1.0;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = w;
        nodes[i] = -x;
        weights[i] = w;
    }
    Ok((nodes, weights))
}

/// Neumaier-compensated complex accumulator with a fixed summation order.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: Complex64,
    comp: Complex64,
}

impl CompensatedSum {
    fn add_part(sum: &mut f64, comp: &mut f64, x: f64) {
        let t = *sum + x;
        if sum.abs() >= x.abs() {
            *comp += (*sum - t) + x;
        } else {
            *comp += (x - t) + *sum;
        }
        *sum = t;
    }

    pub(crate) fn add(&mut self, z: Complex64) {
        Self::add_part(&mut self.sum.re, &mut self.comp.re, z.re);
        Self::add_part(&mut self.sum.im, &mut self.comp.im, z.im);
    }

    pub(crate) fn total(&self) -> Complex64 {
        self.sum + self.comp
    }
}

/// Tensor grid on the unit sphere: Gauss-Legendre in `u = cos θ` times the
/// uniform periodic rule in φ.
///
/// Nodes are enumerated θ-major: flat index `i * n_phi + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereGrid {
    u_nodes: Vec<f64>,
    theta_nodes: Vec<f64>,
    theta_weights: Vec<f64>,
    phi_nodes: Vec<f64>,
    phi_weight: f64,
}

impl SphereGrid {
    pub fn new(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_phi == 0 {
            return Err(crate::error::domain("SphereGrid", "n_phi must be positive"));
        }
        let (u_nodes, theta_weights) = gauss_legendre(n_theta)?;
        let theta_nodes = u_nodes.iter().map(|u| u.acos()).collect();
        let phi_nodes = (0..n_phi).map(|j| TAU * j as f64 / n_phi as f64).collect();
        Ok(Self {
            u_nodes,
            theta_nodes,
            theta_weights,
            phi_nodes,
            phi_weight: TAU / n_phi as f64,
        })
    }

    /// Default sizing for band limit `l_max`: `n_θ = 2 l_max + 16`,
    /// `n_φ = 4 l_max + 16`. The surplus over the exact degree absorbs the
    /// non-polynomial gauge factors.
    pub fn for_lmax(l_max: usize) -> Self {
        let (nt, np) = Self::default_sizes(l_max);
        Self::new(nt, np).expect("default grid sizes are valid")
    }

    pub fn default_sizes(l_max: usize) -> (usize, usize) {
        (2 * l_max + 16, 2 * (2 * l_max) + 16)
    }

    pub fn n_theta(&self) -> usize {
        self.theta_nodes.len()
    }

    pub fn n_phi(&self) -> usize {
        self.phi_nodes.len()
    }

    pub fn len(&self) -> usize {
        self.n_theta() * self.n_phi()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn u_nodes(&self) -> &[f64] {
        &self.u_nodes
    }

    pub fn theta_nodes(&self) -> &[f64] {
        &self.theta_nodes
    }

    pub fn theta_weights(&self) -> &[f64] {
        &self.theta_weights
    }

    pub fn phi_nodes(&self) -> &[f64] {
        &self.phi_nodes
    }

    pub fn phi_weight(&self) -> f64 {
        self.phi_weight
    }

    /// Nodes at radius `r` in flat order.
    pub fn points(&self, r: f64) -> impl Iterator<Item = SphericalPoint> + '_ {
        self.theta_nodes.iter().flat_map(move |&t| {
            self.phi_nodes
                .iter()
                .map(move |&p| SphericalPoint::new(r, t, p))
        })
    }

    /// Full quadrature weights in flat order; they sum to 4π.
    pub fn weights(&self) -> impl Iterator<Item = f64> + '_ {
        self.theta_weights
            .iter()
            .flat_map(move |&w| std::iter::repeat_n(w * self.phi_weight, self.n_phi()))
    }

    /// Samples `field` at every node on the unit sphere.
    pub fn sample<F>(&self, field: F) -> Vec<Complex64>
    where
        F: Fn(&SphericalPoint) -> Complex64,
    {
        self.points(1.0).map(|p| field(&p)).collect()
    }
}

/// `Σ_i Σ_j w_i (2π/n_φ) F(θ_i, φ_j)`.
pub fn integrate_sphere(samples: &[Complex64], grid: &SphereGrid) -> Result<Complex64> {
    if samples.len() != grid.len() {
        return Err(Error::ShapeMismatch {
            expected: grid.len(),
            actual: samples.len(),
        });
    }
    let mut acc = CompensatedSum::default();
    for (f, w) in samples.iter().zip(grid.weights()) {
        acc.add(f * w);
    }
    Ok(acc.total())
}

/// Gauss-Legendre rule mapped to `[0, r_max]` with the `r^2` Jacobian folded
/// into the weights.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl RadialGrid {
    pub fn new(r_max: f64, n: usize) -> Result<Self> {
        if !(r_max.is_finite() && r_max > 0.0) {
            return Err(crate::error::domain(
                "RadialGrid",
                format!("cutoff {r_max} must be positive"),
            ));
        }
        let (u, w) = gauss_legendre(n)?;
        let half = 0.5 * r_max;
        let nodes: Vec<f64> = u.iter().map(|x| half * (x + 1.0)).collect();
        let weights = nodes
            .iter()
            .zip(&w)
            .map(|(r, w)| w * half * r * r)
            .collect();
        Ok(Self { nodes, weights })
    }

    /// Rule sized for hydrogen states up to principal number `n_max`:
    /// cutoff `40 N^2 / Z`, `64 + 16 N` nodes.
    pub fn for_hydrogen(n_max: usize, z: f64) -> Result<Self> {
        let nf = n_max as f64;
        Self::new(40.0 * nf * nf / z, 64 + 16 * n_max)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// `∫ r^2 F(r) dr` over the grid.
pub fn integrate_radial(samples: &[Complex64], grid: &RadialGrid) -> Result<Complex64> {
    if samples.len() != grid.len() {
        return Err(Error::ShapeMismatch {
            expected: grid.len(),
            actual: samples.len(),
        });
    }
    let mut acc = CompensatedSum::default();
    for (f, w) in samples.iter().zip(&grid.weights) {
        acc.add(f * w);
    }
    Ok(acc.total())
}

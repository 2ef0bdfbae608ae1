//! The PT transform, dressed harmonics `Y_flm = e^f Y_lm`, the PT-inner
//! product and expansion in the dressed basis.
//!
//! The PT-inner product is `⟨F|G⟩_f = ∫ dΩ (PT F) G` with
//! `(PT F)(r, θ, φ) = conj(F(r, π − θ, φ + π))`; there is no further complex
//! conjugation of the bra. When the gauge satisfies the compatibility
//! condition with constant `λ`, dressed harmonics obey
//! `⟨Y_fl'm'|Y_flm⟩_f = (-1)^l λ δ_ll' δ_mm'`, which is what makes the
//! expansion coefficients `a_lm = ((-1)^l / λ) ⟨Y_flm|F⟩_f` work.

mod compat;
mod gauge;

pub use compat::{check_compatibility, PTCompatibility, DEFAULT_COMPATIBILITY_TOL};
pub use gauge::{Gauge, GaugeFunction, GaugeKind};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{ensure_finite, Error, Result};
use crate::geometry::SphericalPoint;
use crate::quadrature::{integrate_sphere, SphereGrid};
use crate::special_functions::{parity_sign, spherical_harmonic, HarmonicIndex};

/// `G(r, θ, φ) = conj(F(r, π − θ, φ + π))`, with the azimuth shifted
/// literally.
pub fn pt_transform<F>(field: F) -> impl Fn(&SphericalPoint) -> Complex64
where
    F: Fn(&SphericalPoint) -> Complex64,
{
    move |p| field(&p.parity()).conj()
}

/// `e^{f(point)} Y_lm(point)`.
pub fn pt_harmonic<G: Gauge + ?Sized>(
    gauge: &G,
    idx: HarmonicIndex,
    point: &SphericalPoint,
) -> Result<Complex64> {
    let y = spherical_harmonic(idx, point.theta, point.phi)?;
    ensure_finite("pt_harmonic", gauge.eval(point).exp() * y)
}

/// `PT(Y_flm)` through its closed form `e^{f*(r, π−θ, φ+π)} (-1)^l conj(Y_lm)`.
pub fn pt_harmonic_image<G: Gauge + ?Sized>(
    gauge: &G,
    idx: HarmonicIndex,
    point: &SphericalPoint,
) -> Result<Complex64> {
    let y = spherical_harmonic(idx, point.theta, point.phi)?;
    ensure_finite(
        "pt_harmonic_image",
        gauge.pt_conjugate_eval(point).exp() * y.conj() * parity_sign(idx.l()),
    )
}

/// Grid nodes and their parity images never leave the harmonic domain.
fn harmonic_on_grid<G: Gauge + ?Sized>(
    gauge: &G,
    idx: HarmonicIndex,
    p: &SphericalPoint,
) -> Complex64 {
    pt_harmonic(gauge, idx, p).expect("grid node inside harmonic domain")
}

/// `∫ dΩ PT(bra) ket` from pre-sampled `PT(bra)` and `ket`.
pub fn pt_inner_product_sampled(
    pt_bra: &[Complex64],
    ket: &[Complex64],
    grid: &SphereGrid,
) -> Result<Complex64> {
    if pt_bra.len() != ket.len() {
        return Err(Error::ShapeMismatch {
            expected: pt_bra.len(),
            actual: ket.len(),
        });
    }
    let product: Vec<Complex64> = pt_bra.iter().zip(ket).map(|(a, b)| a * b).collect();
    integrate_sphere(&product, grid)
}

/// `⟨bra|ket⟩_f = ∫ dΩ (PT bra) ket` on the sphere of radius `r`.
pub fn pt_inner_product<B, K>(bra: B, ket: K, grid: &SphereGrid, r: f64) -> Result<Complex64>
where
    B: Fn(&SphericalPoint) -> Complex64,
    K: Fn(&SphericalPoint) -> Complex64,
{
    let pt_bra = pt_transform(bra);
    let a: Vec<Complex64> = grid.points(r).map(|p| pt_bra(&p)).collect();
    let b: Vec<Complex64> = grid.points(r).map(|p| ket(&p)).collect();
    pt_inner_product_sampled(&a, &b, grid)
}

/// Samples `PT(Y_flm)` (by the literal transform) for every index up to
/// `l_max`.
fn pt_images_on_grid<G: Gauge + ?Sized>(
    gauge: &G,
    l_max: usize,
    grid: &SphereGrid,
) -> Vec<Vec<Complex64>> {
    let indices: Vec<HarmonicIndex> = HarmonicIndex::up_to(l_max).collect();
    let points: Vec<SphericalPoint> = grid.points(1.0).collect();
    indices
        .par_iter()
        .map(|&idx| {
            let image = pt_transform(|p: &SphericalPoint| harmonic_on_grid(gauge, idx, p));
            points.iter().map(&image).collect()
        })
        .collect()
}

/// Gram matrix `G[(l'm'), (lm)] = ⟨Y_fl'm'|Y_flm⟩_f` over all indices with
/// `l <= l_max`, in flat index order.
pub fn pt_gram_matrix<G: Gauge + ?Sized>(
    gauge: &G,
    l_max: usize,
    grid: &SphereGrid,
) -> Result<DMatrix<Complex64>> {
    let dim = (l_max + 1) * (l_max + 1);
    let points: Vec<SphericalPoint> = grid.points(1.0).collect();
    let bras = pt_images_on_grid(gauge, l_max, grid);
    let kets: Vec<Vec<Complex64>> = HarmonicIndex::up_to(l_max)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&idx| {
            points
                .iter()
                .map(|p| harmonic_on_grid(gauge, idx, p))
                .collect()
        })
        .collect();

    let rows: Vec<Vec<Complex64>> = bras
        .par_iter()
        .map(|bra| {
            kets.iter()
                .map(|ket| pt_inner_product_sampled(bra, ket, grid))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DMatrix::from_fn(dim, dim, |i, j| rows[i][j]))
}

/// Coefficients `a_lm` indexed by `(l, m)`, `0 <= l <= l_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicCoefficients {
    l_max: usize,
    coeffs: Vec<Complex64>,
}

impl HarmonicCoefficients {
    pub fn zeros(l_max: usize) -> Self {
        Self {
            l_max,
            coeffs: vec![Complex64::new(0.0, 0.0); (l_max + 1) * (l_max + 1)],
        }
    }

    pub fn from_vec(l_max: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        let want = (l_max + 1) * (l_max + 1);
        if coeffs.len() != want {
            return Err(Error::ShapeMismatch {
                expected: want,
                actual: coeffs.len(),
            });
        }
        Ok(Self { l_max, coeffs })
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    /// Coefficient of `idx`; zero beyond `l_max`.
    pub fn get(&self, idx: HarmonicIndex) -> Complex64 {
        self.coeffs.get(idx.flat()).copied().unwrap_or_default()
    }

    pub fn set(&mut self, idx: HarmonicIndex, value: Complex64) -> Result<()> {
        let slot = self
            .coeffs
            .get_mut(idx.flat())
            .ok_or(Error::DimensionMismatch {
                left: self.l_max,
                right: idx.l(),
            })?;
        *slot = value;
        Ok(())
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn iter(&self) -> impl Iterator<Item = (HarmonicIndex, Complex64)> + '_ {
        HarmonicIndex::up_to(self.l_max).zip(self.coeffs.iter().copied())
    }
}

/// `a_lm = ((-1)^l / λ) ⟨Y_flm|F⟩_f` for all `l <= l_max`, where `samples`
/// holds `F` at the unit-sphere nodes of `grid`.
pub fn expand<G: Gauge + ?Sized>(
    samples: &[Complex64],
    gauge: &G,
    lambda: Complex64,
    l_max: usize,
    grid: &SphereGrid,
) -> Result<HarmonicCoefficients> {
    if samples.len() != grid.len() {
        return Err(Error::ShapeMismatch {
            expected: grid.len(),
            actual: samples.len(),
        });
    }
    let bras = pt_images_on_grid(gauge, l_max, grid);
    let coeffs = HarmonicIndex::up_to(l_max)
        .zip(&bras)
        .map(|(idx, bra)| {
            let ip = pt_inner_product_sampled(bra, samples, grid)?;
            Ok(ip * parity_sign(idx.l()) / lambda)
        })
        .collect::<Result<Vec<_>>>()?;
    HarmonicCoefficients::from_vec(l_max, coeffs)
}

/// `Σ a_lm Y_flm(point)` truncated at the coefficients' `l_max`.
pub fn reconstruct<G: Gauge + ?Sized>(
    coeffs: &HarmonicCoefficients,
    gauge: &G,
    point: &SphericalPoint,
) -> Result<Complex64> {
    let mut sum = Complex64::new(0.0, 0.0);
    for (idx, a) in coeffs.iter() {
        if a != Complex64::new(0.0, 0.0) {
            sum += a * spherical_harmonic(idx, point.theta, point.phi)?;
        }
    }
    ensure_finite("reconstruct", gauge.eval(point).exp() * sum)
}

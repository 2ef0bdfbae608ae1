//! Coulomb eigenstates, their PT-dressed partners `ψ_f = e^f ψ`, the dressed
//! Hamiltonian `H_f = e^f H e^{-f}` and the conserved quantities of both.
//!
//! Units are atomic throughout (`ħ = m = e = a_0 = 1`) and
//! `H = p²/2 - Z/r`. Its bound-state energies are `-Z²/(2N²)`
//! ([`coulomb_energy`]). [`energy`] returns the other common closed form
//! `-Z/N²`, which shares the `1/N²` degeneracy pattern but not the absolute
//! value. Wavefunctions, eigen-residuals and `ρ = α r` use the Coulomb value.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{ensure_finite, Error, Result};
use crate::geometry::{norm, Point3, SphericalPoint};
use crate::operators::{
    nested_commutator_at, richardson, AngularMomentum, Axis, Conjugated, DressedAngularMomentum,
    DressedHamiltonian, FDStencil, Field, FieldOperator, GaussianBump, Hamiltonian, RungeLenz,
};
use crate::pt_core::{pt_transform, Gauge};
use crate::quadrature::{CompensatedSum, RadialGrid, SphereGrid};
use crate::special_functions::{factorial_ratio, laguerre, spherical_harmonic, HarmonicIndex};

/// Smallest radius at which pointwise FD checks are evaluated.
pub const COULOMB_GUARD_RADIUS: f64 = 0.3;

/// Bound state `|N l m⟩` of nuclear charge `Z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HydrogenState {
    n: usize,
    l: usize,
    m: isize,
    z: f64,
}

impl HydrogenState {
    pub fn new(n: usize, l: usize, m: isize, z: f64) -> Result<Self> {
        let bad = |detail| Error::QuantumNumbers { n, l, m, detail };
        if n < 1 {
            return Err(bad("principal number must be at least 1"));
        }
        if l >= n {
            return Err(bad("need l <= N - 1"));
        }
        if m.unsigned_abs() > l {
            return Err(bad("need |m| <= l"));
        }
        if !(z.is_finite() && z > 0.0) {
            return Err(bad("nuclear charge must be positive"));
        }
        Ok(Self { n, l, m, z })
    }

    /// Every state with `N <= n_max`, ordered by `N`, then `l`, then `m`.
    pub fn all_up_to(n_max: usize, z: f64) -> Vec<Self> {
        (1..=n_max)
            .flat_map(|n| {
                (0..n).flat_map(move |l| {
                    let li = l as isize;
                    (-li..=li).map(move |m| Self { n, l, m, z })
                })
            })
            .collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn l(&self) -> usize {
        self.l
    }
    pub fn m(&self) -> isize {
        self.m
    }
    pub fn z(&self) -> f64 {
        self.z
    }

    /// Radial quantum number `n_r = N - l - 1`.
    pub fn radial_number(&self) -> usize {
        self.n - self.l - 1
    }

    pub fn index(&self) -> HarmonicIndex {
        HarmonicIndex::new(self.l, self.m).expect("validated on construction")
    }
}

fn check_n_z(n: usize, z: f64) -> Result<()> {
    if n < 1 {
        return Err(crate::error::domain(
            "energy",
            "principal number must be at least 1",
        ));
    }
    if !(z.is_finite() && z > 0.0) {
        return Err(crate::error::domain(
            "energy",
            "nuclear charge must be positive",
        ));
    }
    Ok(())
}

/// `E_N = -Z / N²` (Hartree). See [`coulomb_energy`] for the eigenvalue of `H`.
pub fn energy(n: usize, z: f64) -> Result<f64> {
    check_n_z(n, z)?;
    Ok(-z / (n * n) as f64)
}

/// `E_N = -Z² / (2 N²)`, the eigenvalue of `p²/2 - Z/r`.
pub fn coulomb_energy(n: usize, z: f64) -> Result<f64> {
    check_n_z(n, z)?;
    Ok(-z * z / (2 * n * n) as f64)
}

/// `α = 2 sqrt(-2E)` with the Coulomb eigenvalue, i.e. `2Z/N`.
pub fn radial_scale(n: usize, z: f64) -> Result<f64> {
    Ok(2.0 * (-2.0 * coulomb_energy(n, z)?).sqrt())
}

/// `R_Nl(r) = (2/N²) sqrt(Z³ (N-l-1)!/(N+l)!) ρ^l L_{N-l-1}^{2l+1}(ρ) e^{-ρ/2}`,
/// `ρ = α r`.
pub fn radial_wavefunction(n: usize, l: usize, z: f64, r: f64) -> Result<f64> {
    HydrogenState::new(n, l, 0, z)?;
    if !(r.is_finite() && r >= 0.0) {
        return Err(crate::error::domain(
            "radial_wavefunction",
            format!("radius {r} must be non-negative"),
        ));
    }
    let rho = radial_scale(n, z)? * r;
    let ratio = factorial_ratio_general(n - l - 1, n + l);
    let norm = 2.0 / (n * n) as f64 * (z * z * z * ratio).sqrt();
    let value =
        norm * rho.powi(l as i32) * laguerre(n - l - 1, 2 * l + 1, rho)? * (-rho / 2.0).exp();
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite {
            op: "radial_wavefunction",
        })
    }
}

/// `a! / b!` for `a <= b`.
fn factorial_ratio_general(a: usize, b: usize) -> f64 {
    // a!/b! = (l-m)!/(l+m)! with l = (a+b)/2, m = (b-a)/2 when a + b is even
    if (a + b).is_multiple_of(2) {
        factorial_ratio((a + b) / 2, (b - a) / 2)
    } else {
        factorial_ratio((a + b - 1) / 2, (b - 1 - a) / 2) / b as f64
    }
}

/// `ψ_Nlm = R_Nl(r) Y_lm(θ, φ)`.
pub fn hydrogen_state(state: &HydrogenState, point: &SphericalPoint) -> Result<Complex64> {
    let radial = radial_wavefunction(state.n, state.l, state.z, point.r)?;
    Ok(spherical_harmonic(state.index(), point.theta, point.phi)? * radial)
}

/// `ψ_fNlm = e^f ψ_Nlm`.
pub fn pt_hydrogen_state<G: Gauge + ?Sized>(
    gauge: &G,
    state: &HydrogenState,
    point: &SphericalPoint,
) -> Result<Complex64> {
    ensure_finite(
        "pt_hydrogen_state",
        gauge.eval(point).exp() * hydrogen_state(state, point)?,
    )
}

/// `ψ_Nlm` as a Cartesian field.
pub fn state_field(state: HydrogenState) -> impl Fn(Point3) -> Complex64 + Sync {
    move |x| {
        hydrogen_state(&state, &SphericalPoint::from_cartesian(x))
            .expect("valid state at a finite point")
    }
}

/// `ψ_fNlm` as a Cartesian field.
pub fn dressed_state_field<'g>(
    gauge: &'g dyn Gauge,
    state: HydrogenState,
) -> impl Fn(Point3) -> Complex64 + Sync + 'g {
    move |x| {
        pt_hydrogen_state(gauge, &state, &SphericalPoint::from_cartesian(x))
            .expect("valid state at a finite point")
    }
}

fn guard(point: Point3, stencil: FDStencil) -> Result<()> {
    let r = norm(point);
    let min = 10.0 * stencil.step();
    if r <= min {
        Err(Error::Singularity { r, min })
    } else {
        Ok(())
    }
}

/// `H_f F` with the explicit expansion
/// `½ (p² + 2i ∇f·p + ∇²f - (∇f)²) - Z/r`.
pub fn hf_apply_fd(
    gauge: &dyn Gauge,
    field: &Field,
    point: Point3,
    stencil: FDStencil,
    z: f64,
) -> Result<Complex64> {
    guard(point, stencil)?;
    Ok(DressedHamiltonian { gauge, z, stencil }.apply(field, point))
}

/// `H_f F = e^f H (e^{-f} F)`.
pub fn hf_apply_fd_conjugated(
    gauge: &dyn Gauge,
    field: &Field,
    point: Point3,
    stencil: FDStencil,
    z: f64,
) -> Result<Complex64> {
    guard(point, stencil)?;
    Ok(Conjugated {
        gauge,
        inner: Hamiltonian { z, stencil },
    }
    .apply(field, point))
}

/// `R_i F` for the conserved Runge–Lenz vector of `p²/2 - Z/r`.
pub fn runge_lenz_apply_fd(
    axis: Axis,
    field: &Field,
    point: Point3,
    stencil: FDStencil,
    z: f64,
) -> Result<Complex64> {
    guard(point, stencil)?;
    Ok(RungeLenz::conserved(axis, z, stencil).apply(field, point))
}

/// `R_fi F = e^f R_i (e^{-f} F)`.
pub fn dressed_runge_lenz_apply_fd(
    axis: Axis,
    gauge: &dyn Gauge,
    field: &Field,
    point: Point3,
    stencil: FDStencil,
    z: f64,
) -> Result<Complex64> {
    guard(point, stencil)?;
    Ok(Conjugated {
        gauge,
        inner: RungeLenz::conserved(axis, z, stencil),
    }
    .apply(field, point))
}

/// `|(H - E_N) ψ_Nlm|` at `point`, with the Coulomb eigenvalue.
pub fn eigen_residual(state: &HydrogenState, point: Point3, stencil: FDStencil) -> Result<f64> {
    guard(point, stencil)?;
    let psi = state_field(*state);
    let h = Hamiltonian {
        z: state.z,
        stencil,
    }
    .apply(&psi, point);
    Ok((h - psi(point) * coulomb_energy(state.n, state.z)?).norm())
}

/// `|(H_f - E_N) ψ_fNlm|` at `point`, through the explicit `H_f` and through
/// the conjugation path, in that order.
pub fn dressed_eigen_residuals(
    gauge: &dyn Gauge,
    state: &HydrogenState,
    point: Point3,
    stencil: FDStencil,
) -> Result<(f64, f64)> {
    let psi = dressed_state_field(gauge, *state);
    let e = coulomb_energy(state.n, state.z)?;
    let target = psi(point) * e;
    let explicit = hf_apply_fd(gauge, &psi, point, stencil, state.z)?;
    let conjugated = hf_apply_fd_conjugated(gauge, &psi, point, stencil, state.z)?;
    Ok(((explicit - target).norm(), (conjugated - target).norm()))
}

/// Tensor grid on a ball: radial Gauss-Legendre (with `r²` in the weights)
/// times a sphere grid.
#[derive(Debug, Clone)]
pub struct BallGrid {
    pub radial: RadialGrid,
    pub sphere: SphereGrid,
}

impl BallGrid {
    /// Sized for all states with `N <= n_max`.
    pub fn for_states(n_max: usize, z: f64) -> Result<Self> {
        Ok(Self {
            radial: RadialGrid::for_hydrogen(n_max, z)?,
            sphere: SphereGrid::for_lmax(n_max.saturating_sub(1)),
        })
    }

    pub fn len(&self) -> usize {
        self.radial.len() * self.sphere.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Points radius-major, then the sphere's own θ-major order.
    pub fn points(&self) -> impl Iterator<Item = SphericalPoint> + '_ {
        self.radial
            .nodes()
            .iter()
            .flat_map(move |&r| self.sphere.points(r))
    }

    pub fn weights(&self) -> impl Iterator<Item = f64> + '_ {
        let sphere_w: Vec<f64> = self.sphere.weights().collect();
        self.radial
            .weights()
            .iter()
            .flat_map(move |&wr| sphere_w.clone().into_iter().map(move |ws| wr * ws))
    }

    pub fn integrate(&self, samples: &[Complex64]) -> Result<Complex64> {
        if samples.len() != self.len() {
            return Err(Error::ShapeMismatch {
                expected: self.len(),
                actual: samples.len(),
            });
        }
        let mut acc = CompensatedSum::default();
        for (s, w) in samples.iter().zip(self.weights()) {
            acc.add(s * w);
        }
        Ok(acc.total())
    }
}

fn gram<B>(
    bras: &[Vec<Complex64>],
    kets: &[Vec<Complex64>],
    grid: &BallGrid,
    combine: B,
) -> Result<DMatrix<Complex64>>
where
    B: Fn(Complex64, Complex64) -> Complex64 + Sync,
{
    let w: Vec<f64> = grid.weights().collect();
    let rows: Vec<Vec<Complex64>> = bras
        .par_iter()
        .map(|bra| {
            kets.iter()
                .map(|ket| {
                    let mut acc = CompensatedSum::default();
                    for ((a, b), w) in bra.iter().zip(ket).zip(&w) {
                        acc.add(combine(*a, *b) * *w);
                    }
                    acc.total()
                })
                .collect()
        })
        .collect();
    Ok(DMatrix::from_fn(bras.len(), kets.len(), |i, j| rows[i][j]))
}

/// `⟨ψ_i|ψ_j⟩ = ∫ r² dr dΩ conj(ψ_i) ψ_j`.
pub fn hydrogen_gram(states: &[HydrogenState], grid: &BallGrid) -> Result<DMatrix<Complex64>> {
    let points: Vec<SphericalPoint> = grid.points().collect();
    let samples = states
        .par_iter()
        .map(|s| {
            points
                .iter()
                .map(|p| hydrogen_state(s, p))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    gram(&samples, &samples, grid, |a, b| a.conj() * b)
}

/// `⟨ψ_fi|ψ_fj⟩_f = ∫ r² dr dΩ PT(ψ_fi) ψ_fj`; for a compatible gauge this
/// is `λ (-1)^l δ_ij`.
pub fn pt_hydrogen_gram(
    gauge: &dyn Gauge,
    states: &[HydrogenState],
    grid: &BallGrid,
) -> Result<DMatrix<Complex64>> {
    let points: Vec<SphericalPoint> = grid.points().collect();
    let kets = states
        .par_iter()
        .map(|s| {
            points
                .iter()
                .map(|p| pt_hydrogen_state(gauge, s, p))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let bras = states
        .par_iter()
        .map(|s| {
            let image = pt_transform(|p: &SphericalPoint| {
                pt_hydrogen_state(gauge, s, p).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
            });
            let v: Vec<Complex64> = points.iter().map(image).collect();
            if v.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
                Ok(v)
            } else {
                Err(Error::NonFinite {
                    op: "pt_hydrogen_gram",
                })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    gram(&bras, &kets, grid, |a, b| a * b)
}

/// Which commutator with the Hamiltonian to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConservedQuantity {
    /// `[L_fi, H_f]`, expected to vanish.
    DressedAngularMomentum,
    /// `[L_i, H_f]`, nonzero for a nontrivial gauge.
    BareAngularMomentum,
    /// `[R_fi, H_f]` with `R_f = e^f R e^{-f}`, expected to vanish.
    DressedRungeLenz,
    /// `[R_fi, H_f]` with the Coulomb term of `R` halved, which does not
    /// commute with `H = p²/2 - Z/r`.
    DressedRungeLenzHalfCoulomb,
}

/// Outer step over inner step for nested commutators.
pub const NESTED_STEP_RATIO: f64 = 5.0;

/// Inner step at which nested fourth-order commutators of the Runge–Lenz
/// vector with `H_f` balance truncation against roundoff on unit-radius
/// samples.
pub const DEFAULT_NESTED_INNER_STEP: f64 = 6e-3;

/// Inner/outer stencils for nested commutators, both fourth order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NestedSteps {
    pub inner: FDStencil,
    pub outer: FDStencil,
}

impl Default for NestedSteps {
    fn default() -> Self {
        Self::new(DEFAULT_NESTED_INNER_STEP).expect("valid default step")
    }
}

impl NestedSteps {
    /// Outer step is [`NESTED_STEP_RATIO`] times `inner_step`.
    pub fn new(inner_step: f64) -> Result<Self> {
        Ok(Self {
            inner: FDStencil::new(inner_step, 4)?,
            outer: FDStencil::new(NESTED_STEP_RATIO * inner_step, 4)?,
        })
    }

    fn halved(&self) -> Result<Self> {
        Ok(Self {
            inner: self.inner.with_step(self.inner.step() / 2.0)?,
            outer: self.outer.with_step(self.outer.step() / 2.0)?,
        })
    }
}

fn quantity_operator<'g>(
    q: ConservedQuantity,
    axis: Axis,
    gauge: &'g dyn Gauge,
    z: f64,
    stencil: FDStencil,
) -> Box<dyn FieldOperator + 'g> {
    match q {
        ConservedQuantity::DressedAngularMomentum => Box::new(DressedAngularMomentum {
            axis,
            gauge,
            stencil,
        }),
        ConservedQuantity::BareAngularMomentum => Box::new(AngularMomentum { axis, stencil }),
        ConservedQuantity::DressedRungeLenz => Box::new(Conjugated {
            gauge,
            inner: RungeLenz::conserved(axis, z, stencil),
        }),
        ConservedQuantity::DressedRungeLenzHalfCoulomb => Box::new(Conjugated {
            gauge,
            inner: RungeLenz::half_coulomb(axis, z, stencil),
        }),
    }
}

/// `[Q_i, H_f] F` at `point` with the nested stencils.
pub fn commutator_with_hf(
    quantity: ConservedQuantity,
    axis: Axis,
    gauge: &dyn Gauge,
    field: &Field,
    point: Point3,
    steps: NestedSteps,
    z: f64,
) -> Result<Complex64> {
    if norm(point) < COULOMB_GUARD_RADIUS {
        return Err(Error::Singularity {
            r: norm(point),
            min: COULOMB_GUARD_RADIUS,
        });
    }
    guard(point, steps.outer)?;
    let q_out = quantity_operator(quantity, axis, gauge, z, steps.outer);
    let q_in = quantity_operator(quantity, axis, gauge, z, steps.inner);
    let h_out = DressedHamiltonian {
        gauge,
        z,
        stencil: steps.outer,
    };
    let h_in = DressedHamiltonian {
        gauge,
        z,
        stencil: steps.inner,
    };
    Ok(nested_commutator_at(
        q_out.as_ref(),
        q_in.as_ref(),
        &h_out,
        &h_in,
        field,
        point,
    ))
}

/// Richardson-extrapolated `|[Q_i, H_f] F|` from `steps` and `steps / 2`,
/// maximized over the three components and all samples.
pub fn conservation_residual(
    quantity: ConservedQuantity,
    gauge: &dyn Gauge,
    samples: &[(Point3, GaussianBump)],
    steps: NestedSteps,
    z: f64,
) -> Result<f64> {
    let fine = steps.halved()?;
    let per_sample = samples
        .par_iter()
        .map(|&(point, bump)| {
            let f = |x: Point3| bump.eval(x);
            let mut worst = 0.0f64;
            for axis in Axis::ALL {
                let coarse = commutator_with_hf(quantity, axis, gauge, &f, point, steps, z)?;
                let finer = commutator_with_hf(quantity, axis, gauge, &f, point, fine, z)?;
                worst = worst.max(richardson(coarse, finer, 4).norm());
            }
            Ok(worst)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(per_sample.into_iter().fold(0.0, f64::max))
}

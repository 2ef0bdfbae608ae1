//! Central finite differences in Cartesian coordinates and the differential
//! operators built on them.
//!
//! Operators act on scalar fields `R^3 -> C` and are evaluated pointwise; a
//! commutator is two nested applications, each inner application being
//! resampled by the outer stencil.

use num_complex::Complex64;

use super::Axis;
use crate::error::{Error, Result};
use crate::geometry::{norm, Point3, SphericalPoint};
use crate::pt_core::Gauge;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// A scalar field on R^3.
pub type Field<'a> = dyn Fn(Point3) -> Complex64 + 'a;

/// Central difference stencil with step `h` and accuracy order 2 or 4.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FDStencil {
    step: f64,
    order: u32,
}

impl FDStencil {
    pub fn new(step: f64, order: u32) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::Stencil(format!("step {step} must be positive")));
        }
        if order != 2 && order != 4 {
            return Err(Error::Stencil(format!(
                "order {order} not supported (2 or 4)"
            )));
        }
        Ok(Self { step, order })
    }

    /// Order-2 stencil, `h = 1e-3`.
    pub fn default_order2() -> Self {
        Self {
            step: 1e-3,
            order: 2,
        }
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Same order, new step.
    pub fn with_step(&self, step: f64) -> Result<Self> {
        Self::new(step, self.order)
    }

    fn shifted(at: Point3, axis: usize, by: f64) -> Point3 {
        let mut p = at;
        p[axis] += by;
        p
    }

    pub fn derivative(&self, field: &Field, at: Point3, axis: Axis) -> Complex64 {
        let k = axis.index();
        let h = self.step;
        let f = |s: f64| field(Self::shifted(at, k, s * h));
        match self.order {
            2 => (f(1.0) - f(-1.0)) / (2.0 * h),
            _ => (f(-2.0) - f(2.0) + (f(1.0) - f(-1.0)) * 8.0) / (12.0 * h),
        }
    }

    pub fn gradient(&self, field: &Field, at: Point3) -> [Complex64; 3] {
        Axis::ALL.map(|a| self.derivative(field, at, a))
    }

    pub fn laplacian(&self, field: &Field, at: Point3) -> Complex64 {
        let h = self.step;
        let centre = field(at);
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..3 {
            let f = |s: f64| field(Self::shifted(at, k, s * h));
            acc += match self.order {
                2 => f(1.0) + f(-1.0) - centre * 2.0,
                _ => ((f(1.0) + f(-1.0)) * 16.0 - (f(2.0) + f(-2.0)) - centre * 30.0) / 12.0,
            };
        }
        acc / (h * h)
    }
}

/// Combines evaluations at step `h` (coarse) and `h/2` (fine) to cancel the
/// leading `h^order` error term.
pub fn richardson(coarse: Complex64, fine: Complex64, order: u32) -> Complex64 {
    let k = 2f64.powi(order as i32);
    (fine * k - coarse) / (k - 1.0)
}

/// Something that maps a field to a field, evaluated at one point.
pub trait FieldOperator: Sync {
    fn apply(&self, field: &Field, at: Point3) -> Complex64;
}

impl<T: FieldOperator + ?Sized> FieldOperator for &T {
    fn apply(&self, field: &Field, at: Point3) -> Complex64 {
        (**self).apply(field, at)
    }
}

/// `[A, B] F` with both operators at their own stencils.
pub fn commutator_at(
    a: &dyn FieldOperator,
    b: &dyn FieldOperator,
    field: &Field,
    at: Point3,
) -> Complex64 {
    nested_commutator_at(a, a, b, b, field, at)
}

/// `A_outer(B_inner F) - B_outer(A_inner F)`: the outer application of each
/// term uses its own (typically coarser) stencil.
pub fn nested_commutator_at(
    a_outer: &dyn FieldOperator,
    a_inner: &dyn FieldOperator,
    b_outer: &dyn FieldOperator,
    b_inner: &dyn FieldOperator,
    field: &Field,
    at: Point3,
) -> Complex64 {
    let bf = |q: Point3| b_inner.apply(field, q);
    let af = |q: Point3| a_inner.apply(field, q);
    a_outer.apply(&bf, at) - b_outer.apply(&af, at)
}

/// Multiplication by the coordinate `x_i`.
#[derive(Debug, Clone, Copy)]
pub struct Position {
    pub axis: Axis,
}

impl FieldOperator for Position {
    fn apply(&self, field: &Field, at: Point3) -> Complex64 {
        field(at) * at[self.axis.index()]
    }
}

/// `p_i = -i ∂_i`.
#[derive(Debug, Clone, Copy)]
pub struct Momentum {
    pub axis: Axis,
    pub stencil: FDStencil,
}

impl FieldOperator for Momentum {
    fn apply(&self, field: &Field, at: Point3) -> Complex64 {
        -I * self.stencil.derivative(field, at, self.axis)
    }
}

/// `L_i = -i (x_j ∂_k - x_k ∂_j)` with `(i, j, k)` cyclic.
#[derive(Debug, Clone, Copy)]
pub struct AngularMomentum {
    pub axis: Axis,
    pub stencil: FDStencil,
}

impl FieldOperator for AngularMomentum {
    fn apply(&self, field: &Field, at: Point3) -> Complex64 {
        let (j, k) = self.axis.cyclic();
        let dk = self.stencil.derivative(field, at, k);
        let dj = self.stencil.derivative(field, at, j);
        -I * (dk * at[j.index()] - dj * at[k.index()])
    }
}

/// `e^f O e^{-f}`, evaluated literally: the inner operator sees
/// `e^{-f} F` and the result is multiplied by `e^{f(at)}`.
pub struct Conjugated<'g, O> {
    pub gauge: &'g dyn Gauge,
    pub inner: O,
}

impl<O: FieldOperator> FieldOperator for Conjugated<'_, O> {
    fn apply(&self, field: &Field, at: Point3) -> Complex64 {
        let f = |q: Point3| self.gauge.eval(&SphericalPoint::from_cartesian(q));
        let undressed = |q: Point3| (-f(q)).exp() * field(q);
        f(at).exp() * self.inner.apply(&undressed, at)
    }
}

/// `(L_i f)(x) = -i (x × ∇f)_i` from the analytic gradient.
pub fn angular_momentum_of_gauge(gauge: &dyn Gauge, axis: Axis, at: Point3) -> Complex64 {
    let grad = gauge.gradient(&SphericalPoint::from_cartesian(at));
    let (j, k) = axis.cyclic();
    -I * (grad[k.index()] * at[j.index()] - grad[j.index()] * at[k.index()])
}

/// `L_fi F = L_i F - (L_i f) F`, the expanded form of `e^f L_i e^{-f}`.
pub struct DressedAngularMomentum<'g> {
    pub axis: Axis,
    pub gauge: &'g dyn Gauge,
    pub stencil: FDStencil,
}

impl FieldOperator for DressedAngularMomentum<'_> {
    fn apply(&self, field: &Field, at: Point3) -> Complex64 {
        let bare = AngularMomentum {
            axis: self.axis,
            stencil: self.stencil,
        }
        .apply(field, at);
        bare - angular_momentum_of_gauge(self.gauge, self.axis, at) * field(at)
    }
}

/// `p_fi F = -i ∂_i F + i (∂_i f) F`.
pub struct DressedMomentum<'g> {
    pub axis: Axis,
    pub gauge: &'g dyn Gauge,
    pub stencil: FDStencil,
}

impl FieldOperator for DressedMomentum<'_> {
    fn apply(&self, field: &Field, at: Point3) -> Complex64 {
        let grad = self.gauge.gradient(&SphericalPoint::from_cartesian(at));
        -I * self.stencil.derivative(field, at, self.axis) + I * grad[self.axis.index()] * field(at)
    }
}

/// `H = p^2/2 - Z/r` in atomic units (`Z = 0` gives the free particle).
#[derive(Debug, Clone, Copy)]
pub struct Hamiltonian {
    pub z: f64,
    pub stencil: FDStencil,
}

impl FieldOperator for Hamiltonian {
    fn apply(&self, field: &Field, at: Point3) -> Complex64 {
        -0.5 * self.stencil.laplacian(field, at) - field(at) * (self.z / norm(at))
    }
}

/// `H_f = ½ (p^2 + 2i ∇f·p + ∇²f - (∇f)^2) - Z/r` with analytic `∇f`, `∇²f`.
pub struct DressedHamiltonian<'g> {
    pub gauge: &'g dyn Gauge,
    pub z: f64,
    pub stencil: FDStencil,
}

impl FieldOperator for DressedHamiltonian<'_> {
    fn apply(&self, field: &Field, at: Point3) -> Complex64 {
        let sp = SphericalPoint::from_cartesian(at);
        let gf = self.gauge.gradient(&sp);
        let lap_f = self.gauge.laplacian(&sp);
        let grad_psi = self.stencil.gradient(field, at);
        let lap_psi = self.stencil.laplacian(field, at);
        let psi = field(at);

        // 2i ∇f·p ψ = 2 ∇f·∇ψ
        let drift: Complex64 = (0..3).map(|k| gf[k] * grad_psi[k]).sum::<Complex64>() * 2.0;
        let grad_sq: Complex64 = gf.iter().map(|g| g * g).sum();
        0.5 * (-lap_psi + drift + (lap_f - grad_sq) * psi) - psi * (self.z / sp.r)
    }
}

/// Symmetrized Runge–Lenz component
/// `R_i = ½ (L × p - p × L)_i + c Z x_i / r`.
///
/// With `H = p²/2 - Z/r` the vector is conserved for `c = 1`
/// ([`RungeLenz::conserved`]); [`RungeLenz::half_coulomb`] keeps the factor
/// ½ on the Coulomb term as well, which is not conserved for this
/// Hamiltonian.
#[derive(Debug, Clone, Copy)]
pub struct RungeLenz {
    pub axis: Axis,
    pub z: f64,
    pub coulomb_coefficient: f64,
    pub stencil: FDStencil,
}

impl RungeLenz {
    pub fn conserved(axis: Axis, z: f64, stencil: FDStencil) -> Self {
        Self {
            axis,
            z,
            coulomb_coefficient: 1.0,
            stencil,
        }
    }

    pub fn half_coulomb(axis: Axis, z: f64, stencil: FDStencil) -> Self {
        Self {
            axis,
            z,
            coulomb_coefficient: 0.5,
            stencil,
        }
    }
}

impl FieldOperator for RungeLenz {
    fn apply(&self, field: &Field, at: Point3) -> Complex64 {
        let st = self.stencil;
        let l = |a: Axis| AngularMomentum {
            axis: a,
            stencil: st,
        };
        let p = |a: Axis| Momentum {
            axis: a,
            stencil: st,
        };
        // (L × p)_i = L_j p_k - L_k p_j ;  (p × L)_i = p_j L_k - p_k L_j
        let (j, k) = self.axis.cyclic();
        let lp = |a: Axis, b: Axis| {
            let inner = |q: Point3| p(b).apply(field, q);
            l(a).apply(&inner, at)
        };
        let pl = |a: Axis, b: Axis| {
            let inner = |q: Point3| l(b).apply(field, q);
            p(a).apply(&inner, at)
        };
        let l_cross_p = lp(j, k) - lp(k, j);
        let p_cross_l = pl(j, k) - pl(k, j);
        let coulomb =
            field(at) * (self.coulomb_coefficient * self.z * at[self.axis.index()] / norm(at));
        0.5 * (l_cross_p - p_cross_l) + coulomb
    }
}

/// `e^{-|x - x0|^2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianBump {
    pub center: Point3,
}

impl GaussianBump {
    pub fn eval(&self, x: Point3) -> Complex64 {
        let d2: f64 = (0..3).map(|k| (x[k] - self.center[k]).powi(2)).sum();
        Complex64::new((-d2).exp(), 0.0)
    }
}

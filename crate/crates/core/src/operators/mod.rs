//! Angular momentum in two representations.
//!
//! [`matrix`] holds the exact block matrices on the harmonic basis;
//! [`fd`] holds the same operators as finite-difference differential
//! operators on fields over R^3. Each algebraic identity is checked exactly in
//! the first and to stencil order in the second. The free functions here are
//! the pointwise verification entry points that tie the two together.

pub mod fd;
pub mod matrix;

pub use fd::{
    commutator_at, nested_commutator_at, richardson, AngularMomentum, Conjugated,
    DressedAngularMomentum, DressedHamiltonian, DressedMomentum, FDStencil, Field, FieldOperator,
    GaussianBump, Hamiltonian, Momentum, Position, RungeLenz,
};
pub use matrix::{
    build_angular_momentum, casimir, commutator, dressed_undressed_basis, hermiticity_deviation,
    multiplication_matrix, OperatorMatrix,
};

use num_complex::Complex64;

use crate::error::Result;
use crate::geometry::{Point3, SphericalPoint};
use crate::pt_core::Gauge;
use crate::special_functions::{spherical_harmonic, HarmonicIndex};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Cartesian axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    pub fn from_index(k: usize) -> Axis {
        Self::ALL[k % 3]
    }

    /// `(j, k)` with `ε_{ijk} = +1`.
    pub fn cyclic(self) -> (Axis, Axis) {
        let i = self.index();
        (Self::from_index(i + 1), Self::from_index(i + 2))
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

/// `ε_{ijk}`.
pub fn levi_civita(i: Axis, j: Axis, k: Axis) -> f64 {
    let (i, j, k) = (i.index() as i32, j.index() as i32, k.index() as i32);
    ((j - i) * (k - i) * (k - j)) as f64 / 2.0
}

/// The third axis of a pair with `i != j`.
fn third(i: Axis, j: Axis) -> Axis {
    Axis::from_index(3 - i.index() - j.index())
}

/// `Y_lm` of the direction of `x`, as a field on R^3.
pub fn harmonic_field(idx: HarmonicIndex) -> impl Fn(Point3) -> Complex64 + Sync {
    move |x: Point3| {
        let p = SphericalPoint::from_cartesian(x);
        spherical_harmonic(idx, p.theta, p.phi).expect("polar angle from atan2 is in range")
    }
}

/// `L_i F` at `point` by central differences.
pub fn fd_apply_angular_momentum(
    axis: Axis,
    field: &Field,
    point: Point3,
    stencil: FDStencil,
) -> Complex64 {
    AngularMomentum { axis, stencil }.apply(field, point)
}

/// Largest disagreement between the ladder-built matrices and the FD
/// differential operators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixFdReport {
    pub max_residual: f64,
    pub checks: usize,
}

/// For every axis, every `(l, m)` with `l <= l_max` and every point, compares
/// `L_i Y_lm` by finite differences with `Σ_m' (L_i)_{m'm} Y_lm'`.
pub fn verify_matrix_vs_fd(
    l_max: usize,
    points: &[Point3],
    stencil: FDStencil,
) -> Result<MatrixFdReport> {
    let mut max_residual = 0.0f64;
    let mut checks = 0;
    for axis in Axis::ALL {
        let matrix = build_angular_momentum(axis, l_max);
        for idx in HarmonicIndex::up_to(l_max) {
            let field = harmonic_field(idx);
            let l = idx.l();
            for &p in points {
                let fd = fd_apply_angular_momentum(axis, &field, p, stencil);
                let sp = SphericalPoint::from_cartesian(p);
                let mut via_matrix = Complex64::new(0.0, 0.0);
                for m_row in -(l as isize)..=(l as isize) {
                    let elem = matrix.element(l, m_row, idx.m());
                    if elem.norm() > 0.0 {
                        via_matrix += elem
                            * spherical_harmonic(HarmonicIndex::new(l, m_row)?, sp.theta, sp.phi)?;
                    }
                }
                max_residual = max_residual.max((fd - via_matrix).norm());
                checks += 1;
            }
        }
    }
    Ok(MatrixFdReport {
        max_residual,
        checks,
    })
}

/// `L_fi F = e^f L_i (e^{-f} F)` by the conjugation path.
pub fn fd_apply_dressed(
    axis: Axis,
    gauge: &dyn Gauge,
    field: &Field,
    point: Point3,
    stencil: FDStencil,
) -> Complex64 {
    Conjugated {
        gauge,
        inner: AngularMomentum { axis, stencil },
    }
    .apply(field, point)
}

/// `L_fi F = L_i F - (L_i f) F` by the expanded formula.
pub fn fd_apply_dressed_explicit(
    axis: Axis,
    gauge: &dyn Gauge,
    field: &Field,
    point: Point3,
    stencil: FDStencil,
) -> Complex64 {
    DressedAngularMomentum {
        axis,
        gauge,
        stencil,
    }
    .apply(field, point)
}

/// `p_fj F = (-i ∂_j + i ∂_j f) F` with the analytic gradient of `f`.
pub fn fd_apply_dressed_momentum(
    component: Axis,
    gauge: &dyn Gauge,
    field: &Field,
    point: Point3,
    stencil: FDStencil,
) -> Complex64 {
    DressedMomentum {
        axis: component,
        gauge,
        stencil,
    }
    .apply(field, point)
}

/// `p_fj F = e^f p_j (e^{-f} F)` by the conjugation path.
pub fn fd_apply_dressed_momentum_conjugated(
    component: Axis,
    gauge: &dyn Gauge,
    field: &Field,
    point: Point3,
    stencil: FDStencil,
) -> Complex64 {
    Conjugated {
        gauge,
        inner: Momentum {
            axis: component,
            stencil,
        },
    }
    .apply(field, point)
}

/// `([L_fx, L_fy] - i L_fz) F` and its cyclic partners, for axis `i` the
/// residual of `[L_fj, L_fk] - i L_fi`.
pub fn dressed_so3_defect_at(
    axis: Axis,
    gauge: &dyn Gauge,
    field: &Field,
    point: Point3,
    stencil: FDStencil,
) -> Complex64 {
    let (j, k) = axis.cyclic();
    let lj = DressedAngularMomentum {
        axis: j,
        gauge,
        stencil,
    };
    let lk = DressedAngularMomentum {
        axis: k,
        gauge,
        stencil,
    };
    let li = DressedAngularMomentum {
        axis,
        gauge,
        stencil,
    };
    commutator_at(&lj, &lk, field, point) - I * li.apply(field, point)
}

/// `([L_fi, x_j] - i ε_ijk x_k) F`.
pub fn position_generator_defect_at(
    i: Axis,
    j: Axis,
    gauge: &dyn Gauge,
    field: &Field,
    point: Point3,
    stencil: FDStencil,
) -> Complex64 {
    let lf = DressedAngularMomentum {
        axis: i,
        gauge,
        stencil,
    };
    let c = commutator_at(&lf, &Position { axis: j }, field, point);
    if i == j {
        return c;
    }
    let k = third(i, j);
    c - I * levi_civita(i, j, k) * point[k.index()] * field(point)
}

/// `([L_fi, q_j] - i ε_ijk q_k) F` where `q` is the plain momentum `p`
/// (`dressed_momentum = false`) or the dressed `p_f` (`true`).
pub fn momentum_generator_defect_at(
    i: Axis,
    j: Axis,
    gauge: &dyn Gauge,
    dressed_momentum: bool,
    field: &Field,
    point: Point3,
    stencil: FDStencil,
) -> Complex64 {
    let lf = DressedAngularMomentum {
        axis: i,
        gauge,
        stencil,
    };
    let q = |axis: Axis| -> Box<dyn FieldOperator + '_> {
        if dressed_momentum {
            Box::new(DressedMomentum {
                axis,
                gauge,
                stencil,
            })
        } else {
            Box::new(Momentum { axis, stencil })
        }
    };
    let c = commutator_at(&lf, q(j).as_ref(), field, point);
    if i == j {
        return c;
    }
    let k = third(i, j);
    c - I * levi_civita(i, j, k) * q(k).apply(field, point)
}

/// Richardson-extrapolated commutator defects of `L_f` against `p` and `p_f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorDefectReport {
    /// max over pairs and samples of `|([L_fi, p_j] - iε p_k) F|`
    pub undressed: f64,
    /// max over pairs and samples of `|([L_fi, p_fj] - iε p_fk) F|`
    pub dressed: f64,
}

/// Demonstrates that `L_f` rotates `p_f` but not `p`: each defect is evaluated
/// at steps `h` and `h/2`, extrapolated, and maximized over all nine `(i, j)`
/// pairs and all `(point, test function)` samples.
pub fn verify_nonrotation_of_p(
    gauge: &dyn Gauge,
    samples: &[(Point3, GaussianBump)],
    stencil: FDStencil,
) -> Result<GeneratorDefectReport> {
    let fine = stencil.with_step(stencil.step() / 2.0)?;
    let mut report = GeneratorDefectReport {
        undressed: 0.0,
        dressed: 0.0,
    };
    for &(point, bump) in samples {
        let f = |x: Point3| bump.eval(x);
        for i in Axis::ALL {
            for j in Axis::ALL {
                for dressed in [false, true] {
                    let coarse =
                        momentum_generator_defect_at(i, j, gauge, dressed, &f, point, stencil);
                    let finer = momentum_generator_defect_at(i, j, gauge, dressed, &f, point, fine);
                    let d = richardson(coarse, finer, stencil.order()).norm();
                    let slot = if dressed {
                        &mut report.dressed
                    } else {
                        &mut report.undressed
                    };
                    *slot = slot.max(d);
                }
            }
        }
    }
    Ok(report)
}

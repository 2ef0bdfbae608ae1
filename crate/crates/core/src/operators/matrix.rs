use nalgebra::DMatrix;
use num_complex::Complex64;

use super::Axis;
use crate::error::{Error, Result};
use crate::pt_core::{Gauge, HarmonicCoefficients};
use crate::quadrature::{integrate_sphere, SphereGrid};
use crate::special_functions::{spherical_harmonic, HarmonicIndex};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Block-diagonal operator on the harmonic basis with `l <= l_max`.
///
/// Block `l` is `(2l+1) x (2l+1)`, rows and columns ordered `m = -l..=l`.
/// The same matrices act on undressed coefficients of `Y_lm` and on dressed
/// coefficients of `Y_flm`, since `L_f = e^f L e^{-f}` maps `e^f Y_lm` to
/// `e^f (L Y_lm)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    l_max: usize,
    blocks: Vec<DMatrix<Complex64>>,
}

impl OperatorMatrix {
    pub fn zeros(l_max: usize) -> Self {
        Self::from_fn(l_max, |_, _, _| ZERO)
    }

    pub fn identity(l_max: usize) -> Self {
        Self::from_fn(l_max, |_, r, c| {
            if r == c {
                Complex64::new(1.0, 0.0)
            } else {
                ZERO
            }
        })
    }

    /// Builds each block from `(l, m_row, m_col)`.
    fn from_fn(l_max: usize, mut entry: impl FnMut(usize, isize, isize) -> Complex64) -> Self {
        let blocks = (0..=l_max)
            .map(|l| {
                let d = 2 * l + 1;
                let li = l as isize;
                DMatrix::from_fn(d, d, |r, c| entry(l, r as isize - li, c as isize - li))
            })
            .collect();
        Self { l_max, blocks }
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub fn block(&self, l: usize) -> &DMatrix<Complex64> {
        &self.blocks[l]
    }

    pub fn blocks(&self) -> &[DMatrix<Complex64>] {
        &self.blocks
    }

    /// Matrix element `⟨l, m_row| O |l, m_col⟩`.
    pub fn element(&self, l: usize, m_row: isize, m_col: isize) -> Complex64 {
        let li = l as isize;
        self.blocks[l][((m_row + li) as usize, (m_col + li) as usize)]
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.l_max == other.l_max {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                left: self.l_max,
                right: other.l_max,
            })
        }
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(&DMatrix<Complex64>, &DMatrix<Complex64>) -> DMatrix<Complex64>,
    ) -> Result<Self> {
        self.check(other)?;
        Ok(Self {
            l_max: self.l_max,
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            l_max: self.l_max,
            blocks: self.blocks.iter().map(|b| b * s).collect(),
        }
    }

    /// Largest entry modulus over all blocks.
    pub fn max_abs(&self) -> f64 {
        self.blocks
            .iter()
            .flat_map(|b| b.iter())
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn apply(&self, coeffs: &HarmonicCoefficients) -> Result<HarmonicCoefficients> {
        if coeffs.l_max() != self.l_max {
            return Err(Error::DimensionMismatch {
                left: self.l_max,
                right: coeffs.l_max(),
            });
        }
        let mut out = Vec::with_capacity(coeffs.as_slice().len());
        for (l, block) in self.blocks.iter().enumerate() {
            let start = l * l;
            let v =
                nalgebra::DVector::from_column_slice(&coeffs.as_slice()[start..start + 2 * l + 1]);
            out.extend((block * v).iter().copied());
        }
        HarmonicCoefficients::from_vec(self.l_max, out)
    }

    /// The full `(l_max+1)^2` square matrix in flat index order.
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let dim = (self.l_max + 1) * (self.l_max + 1);
        let mut m = DMatrix::from_element(dim, dim, ZERO);
        for (l, block) in self.blocks.iter().enumerate() {
            let s = l * l;
            m.view_mut((s, s), (2 * l + 1, 2 * l + 1)).copy_from(block);
        }
        m
    }
}

fn ladder(l: usize, m: isize, up: bool) -> f64 {
    let lf = l as f64;
    let mf = m as f64;
    let shift = if up { mf + 1.0 } else { mf - 1.0 };
    (lf * (lf + 1.0) - mf * shift).max(0.0).sqrt()
}

/// `L_x`, `L_y` or `L_z` on the harmonic basis.
///
/// `L_z` is `diag(m)`; `L_x = (L_+ + L_-)/2` and `L_y = (L_+ - L_-)/(2i)` with
/// `L_± Y_lm = sqrt(l(l+1) - m(m±1)) Y_{l,m±1}`, the phase consistent with the
/// Condon–Shortley harmonics.
pub fn build_angular_momentum(axis: Axis, l_max: usize) -> OperatorMatrix {
    OperatorMatrix::from_fn(l_max, |l, mr, mc| {
        let plus = if mr == mc + 1 {
            ladder(l, mc, true)
        } else {
            0.0
        };
        let minus = if mr == mc - 1 {
            ladder(l, mc, false)
        } else {
            0.0
        };
        match axis {
            Axis::Z => Complex64::new(if mr == mc { mc as f64 } else { 0.0 }, 0.0),
            Axis::X => Complex64::new(0.5 * (plus + minus), 0.0),
            Axis::Y => Complex64::new(0.0, -0.5 * (plus - minus)),
        }
    })
}

/// `AB - BA`, blockwise.
pub fn commutator(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OperatorMatrix> {
    a.mul(b)?.sub(&b.mul(a)?)
}

/// `L^2 = L_x^2 + L_y^2 + L_z^2`.
pub fn casimir(l_max: usize) -> OperatorMatrix {
    let mut acc = OperatorMatrix::zeros(l_max);
    for axis in Axis::ALL {
        let l = build_angular_momentum(axis, l_max);
        acc = acc
            .add(&l.mul(&l).expect("same l_max"))
            .expect("same l_max");
    }
    acc
}

/// Matrix of multiplication by `g` in the orthonormal `Y_lm` basis,
/// `M[(l'm'), (lm)] = ∫ conj(Y_l'm') g Y_lm dΩ`, truncated at `l_max`.
pub fn multiplication_matrix<F>(g: F, l_max: usize, grid: &SphereGrid) -> Result<DMatrix<Complex64>>
where
    F: Fn(&crate::geometry::SphericalPoint) -> Complex64,
{
    let indices: Vec<HarmonicIndex> = HarmonicIndex::up_to(l_max).collect();
    let g_samples = grid.sample(&g);
    let ys: Vec<Vec<Complex64>> = indices
        .iter()
        .map(|&i| {
            grid.sample(|p| spherical_harmonic(i, p.theta, p.phi).expect("grid node in domain"))
        })
        .collect();
    let dim = indices.len();
    let mut out = DMatrix::from_element(dim, dim, ZERO);
    for r in 0..dim {
        for c in 0..dim {
            let integrand: Vec<Complex64> = ys[r]
                .iter()
                .zip(&ys[c])
                .zip(&g_samples)
                .map(|((a, b), g)| a.conj() * g * b)
                .collect();
            out[(r, c)] = integrate_sphere(&integrand, grid)?;
        }
    }
    Ok(out)
}

/// `L_f = e^f L e^{-f}` represented on the undressed basis as
/// `E_f · L · E_{-f}`, with `E_{±f}` the projected multiplication matrices.
pub fn dressed_undressed_basis<G: Gauge + ?Sized>(
    gauge: &G,
    axis: Axis,
    l_max: usize,
    grid: &SphereGrid,
) -> Result<DMatrix<Complex64>> {
    let up = multiplication_matrix(|p| gauge.eval(p).exp(), l_max, grid)?;
    let down = multiplication_matrix(|p| (-gauge.eval(p)).exp(), l_max, grid)?;
    Ok(up * build_angular_momentum(axis, l_max).to_dense() * down)
}

/// `max |M - M^†|`.
pub fn hermiticity_deviation(m: &DMatrix<Complex64>) -> f64 {
    (m - m.adjoint())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pt_core::{GaugeFunction, GaugeKind};

    const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

    #[test]
    fn lz_is_diagonal_m() {
        let lz = build_angular_momentum(Axis::Z, 2);
        let want: Vec<Complex64> = (-2..=2).map(|m| Complex64::new(m as f64, 0.0)).collect();
        let b = lz.block(2);
        for r in 0..5 {
            for c in 0..5 {
                assert_eq!(b[(r, c)], if r == c { want[r] } else { ZERO });
            }
        }
    }

    #[test]
    fn lx_at_l1() {
        let lx = build_angular_momentum(Axis::X, 1);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let b = lx.block(1);
        for r in 0..3 {
            assert_eq!(b[(r, r)], ZERO);
        }
        for (r, c) in [(0, 1), (1, 0), (1, 2), (2, 1)] {
            assert!((b[(r, c)].re - s).abs() < 1e-15);
        }
        assert_eq!(b[(0, 2)], ZERO);
    }

    #[test]
    fn l0_blocks_vanish() {
        for axis in Axis::ALL {
            assert_eq!(build_angular_momentum(axis, 3).block(0)[(0, 0)], ZERO);
        }
        assert_eq!(casimir(3).block(0)[(0, 0)], ZERO);
    }

    #[test]
    fn so3_relations() {
        let n = 16;
        for axis in Axis::ALL {
            let (j, k) = axis.cyclic();
            let lhs =
                commutator(&build_angular_momentum(j, n), &build_angular_momentum(k, n)).unwrap();
            let rhs = build_angular_momentum(axis, n).scale(I);
            assert!(lhs.sub(&rhs).unwrap().max_abs() < 1e-13, "{axis:?}");
        }
        // [L², L_i] sits at the sqrt-rounding floor, ~2e-13 by l_max = 16
        let n = 12;
        let l2 = casimir(n);
        for axis in Axis::ALL {
            let c = commutator(&l2, &build_angular_momentum(axis, n)).unwrap();
            assert!(c.max_abs() < 1e-13);
        }
        let a = build_angular_momentum(Axis::Y, 5);
        assert_eq!(commutator(&a, &a).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn casimir_blocks() {
        let l2 = casimir(6);
        let b = l2.block(3);
        for r in 0..7 {
            for c in 0..7 {
                let want = if r == c { 12.0 } else { 0.0 };
                assert!((b[(r, c)] - Complex64::new(want, 0.0)).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn dimension_mismatch() {
        let a = build_angular_momentum(Axis::X, 2);
        let b = build_angular_momentum(Axis::X, 3);
        assert!(matches!(
            commutator(&a, &b),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(a.apply(&HarmonicCoefficients::zeros(3)).is_err());
    }

    #[test]
    fn dense_and_apply_agree() {
        let l_max = 3;
        let lx = build_angular_momentum(Axis::X, l_max);
        let v: Vec<Complex64> = (0..16)
            .map(|k| Complex64::new(k as f64, -(k as f64) / 3.0))
            .collect();
        let coeffs = HarmonicCoefficients::from_vec(l_max, v.clone()).unwrap();
        let out = lx.apply(&coeffs).unwrap();
        let dense = lx.to_dense() * nalgebra::DVector::from_vec(v);
        for (a, b) in out.as_slice().iter().zip(dense.iter()) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn dressed_generators_are_not_hermitian() {
        let l_max = 4;
        let grid = SphereGrid::for_lmax(l_max);
        let zero = dressed_undressed_basis(&GaugeFunction::zero(), Axis::X, l_max, &grid).unwrap();
        assert!(hermiticity_deviation(&zero) < 1e-13);
        let g = GaugeFunction::new(GaugeKind::ATheta, 0.5).unwrap();
        let dressed = dressed_undressed_basis(&g, Axis::X, l_max, &grid).unwrap();
        assert!(hermiticity_deviation(&dressed) > 0.01);
    }
}

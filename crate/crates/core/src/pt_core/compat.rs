use num_complex::Complex64;

use super::Gauge;
use crate::error::{domain, Error, Result};
use crate::quadrature::{CompensatedSum, SphereGrid};

/// Default relative tolerance for the constancy test.
pub const DEFAULT_COMPATIBILITY_TOL: f64 = 1e-10;

/// Outcome of a successful compatibility check: the constant `λ` and how far
/// the sampled values strayed from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PTCompatibility {
    pub lambda: Complex64,
    pub max_deviation: f64,
}

/// Tests whether `e^{f*(r, π−θ, φ+π) + f(r, θ, φ)}` is constant over the grid
/// at radius `r_sample`.
///
/// `λ` is the grid mean of the samples; the check passes when every sample
/// lies within `tol · (1 + |λ|)` of it.
pub fn check_compatibility<G: Gauge + ?Sized>(
    gauge: &G,
    grid: &SphereGrid,
    r_sample: f64,
    tol: f64,
) -> Result<PTCompatibility> {
    if grid.is_empty() {
        return Err(domain("check_compatibility", "empty grid"));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(domain("check_compatibility", "tolerance must be positive"));
    }
    let samples: Vec<Complex64> = grid
        .points(r_sample)
        .map(|p| (gauge.pt_conjugate_eval(&p) + gauge.eval(&p)).exp())
        .collect();

    let mut acc = CompensatedSum::default();
    for s in &samples {
        acc.add(*s);
    }
    let lambda = acc.total() / samples.len() as f64;
    let max_deviation = samples
        .iter()
        .map(|s| (s - lambda).norm())
        .fold(0.0, f64::max);

    if !lambda.re.is_finite() || !lambda.im.is_finite() || lambda.norm() == 0.0 {
        return Err(Error::Incompatible {
            max_deviation: f64::INFINITY,
            lambda,
        });
    }
    if max_deviation <= tol * (1.0 + lambda.norm()) {
        Ok(PTCompatibility {
            lambda,
            max_deviation,
        })
    } else {
        Err(Error::Incompatible {
            max_deviation,
            lambda,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::SphericalPoint;
    use crate::pt_core::{GaugeFunction, GaugeKind};
    use std::f64::consts::PI;

    /// `f = a θ^2`, which does not satisfy the constancy condition.
    struct ThetaSquared(f64);

    impl Gauge for ThetaSquared {
        fn eval(&self, p: &SphericalPoint) -> Complex64 {
            Complex64::new(self.0 * p.theta * p.theta, 0.0)
        }
        fn pt_conjugate_eval(&self, p: &SphericalPoint) -> Complex64 {
            Complex64::new(self.0 * (PI - p.theta).powi(2), 0.0)
        }
        fn gradient(&self, _: &SphericalPoint) -> [Complex64; 3] {
            unimplemented!()
        }
        fn laplacian(&self, _: &SphericalPoint) -> Complex64 {
            unimplemented!()
        }
        fn label(&self) -> String {
            "theta_squared".into()
        }
    }

    #[test]
    fn named_gauges_are_compatible() {
        let grid = SphereGrid::for_lmax(6);
        let cases = [
            (GaugeKind::ATheta, 0.3, Complex64::new(2.566332, 0.0), 1e-6),
            (GaugeKind::AiSinTheta, 0.4, Complex64::new(1.0, 0.0), 1e-14),
            (GaugeKind::ACosTheta, 0.4, Complex64::new(1.0, 0.0), 1e-14),
            (GaugeKind::AiPhi, 0.5, Complex64::new(0.0, -1.0), 1e-14),
        ];
        for (kind, a, want, tol) in cases {
            let g = GaugeFunction::new(kind, a).unwrap();
            let c = check_compatibility(&g, &grid, 1.0, DEFAULT_COMPATIBILITY_TOL).unwrap();
            assert!((c.lambda - want).norm() < tol, "{g}: {}", c.lambda);
            assert!(c.max_deviation < 1e-13);
        }
    }

    #[test]
    fn theta_squared_is_incompatible() {
        // oracle: a(π−θ)^2 + aθ^2 differs between θ = 0.1 and θ = 1.0
        let a = 1.0;
        let g = |t: f64| a * (PI - t).powi(2) + a * t * t;
        assert!((g(0.1) - g(1.0)).abs() > 1.0);

        let grid = SphereGrid::for_lmax(4);
        match check_compatibility(&ThetaSquared(a), &grid, 1.0, DEFAULT_COMPATIBILITY_TOL) {
            Err(Error::Incompatible { max_deviation, .. }) => assert!(max_deviation > 1.0),
            other => panic!("expected incompatibility, got {other:?}"),
        }
    }

    #[test]
    fn bad_arguments() {
        let grid = SphereGrid::for_lmax(1);
        let g = GaugeFunction::zero();
        assert!(check_compatibility(&g, &grid, 1.0, 0.0).is_err());
        assert!(check_compatibility(&g, &grid, 1.0, -1.0).is_err());
    }
}

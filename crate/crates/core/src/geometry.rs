//! Coordinates on R^3.
//!
//! Points are carried either as plain Cartesian triples (the finite-difference
//! operators work there) or as [`SphericalPoint`] with θ the polar angle
//! measured from +z and φ the azimuth.

/// Cartesian point `[x, y, z]`.
pub type Point3 = [f64; 3];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalPoint {
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
}

impl SphericalPoint {
    pub fn new(r: f64, theta: f64, phi: f64) -> Self {
        Self { r, theta, phi }
    }

    /// Point on the unit sphere.
    pub fn direction(theta: f64, phi: f64) -> Self {
        Self::new(1.0, theta, phi)
    }

    /// Converts a Cartesian point; φ lands in (−π, π]. The origin maps to
    /// θ = φ = 0.
    pub fn from_cartesian(p: Point3) -> Self {
        let [x, y, z] = p;
        let rho = x.hypot(y);
        let r = rho.hypot(z);
        let theta = if r == 0.0 { 0.0 } else { rho.atan2(z) };
        let phi = if rho == 0.0 { 0.0 } else { y.atan2(x) };
        Self { r, theta, phi }
    }

    pub fn to_cartesian(&self) -> Point3 {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [self.r * st * cp, self.r * st * sp, self.r * ct]
    }

    /// The parity image (r, π − θ, φ + π). The azimuth is shifted literally,
    /// never reduced modulo 2π.
    pub fn parity(&self) -> Self {
        Self {
            r: self.r,
            theta: std::f64::consts::PI - self.theta,
            phi: self.phi + std::f64::consts::PI,
        }
    }

    /// Unit vector θ̂ in Cartesian components.
    pub fn theta_hat(&self) -> Point3 {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [ct * cp, ct * sp, -st]
    }

    /// Unit vector φ̂ in Cartesian components.
    pub fn phi_hat(&self) -> Point3 {
        let (sp, cp) = self.phi.sin_cos();
        [-sp, cp, 0.0]
    }
}

pub(crate) fn norm(p: Point3) -> f64 {
    (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn cartesian_round_trip() {
        let p = SphericalPoint::new(2.5, 1.1, -2.0);
        let q = SphericalPoint::from_cartesian(p.to_cartesian());
        assert!((q.r - 2.5).abs() < 1e-14);
        assert!((q.theta - 1.1).abs() < 1e-14);
        assert!((q.phi + 2.0).abs() < 1e-14);
    }

    #[test]
    fn parity_is_point_reflection() {
        let p = SphericalPoint::new(1.3, 0.4, 2.9);
        let a = p.to_cartesian();
        let b = p.parity().to_cartesian();
        for k in 0..3 {
            assert!((a[k] + b[k]).abs() < 1e-14);
        }
        assert_eq!(p.parity().phi, 2.9 + PI);
    }

    #[test]
    fn unit_vectors_are_orthonormal() {
        let p = SphericalPoint::new(1.0, 0.7, 1.9);
        let r = p.to_cartesian();
        let t = p.theta_hat();
        let f = p.phi_hat();
        let dot = |a: Point3, b: Point3| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        assert!(dot(r, t).abs() < 1e-15);
        assert!(dot(r, f).abs() < 1e-15);
        assert!(dot(t, f).abs() < 1e-15);
        assert!((dot(t, t) - 1.0).abs() < 1e-15);
    }
}

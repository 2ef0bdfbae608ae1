use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::SphericalPoint;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// A dressing function `f(r, θ, φ)` with analytically supplied PT image,
/// gradient and Laplacian.
///
/// Implementations must evaluate φ literally: `eval` at `φ + 2π` is allowed
/// to differ from `eval` at `φ`.
pub trait Gauge: Send + Sync {
    fn eval(&self, p: &SphericalPoint) -> Complex64;

    /// `conj(f(r, π − θ, φ + π))`.
    fn pt_conjugate_eval(&self, p: &SphericalPoint) -> Complex64;

    /// `∇f` in Cartesian components.
    fn gradient(&self, p: &SphericalPoint) -> [Complex64; 3];

    fn laplacian(&self, p: &SphericalPoint) -> Complex64;

    fn label(&self) -> String;

    fn params(&self) -> Vec<(String, f64)> {
        Vec::new()
    }

    /// True when `f` vanishes identically.
    fn is_zero(&self) -> bool {
        false
    }
}

/// The built-in gauge families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GaugeKind {
    /// `f = 0`
    Zero,
    /// `f = a θ`
    ATheta,
    /// `f = i a sin θ`
    AiSinTheta,
    /// `f = a cos θ`
    ACosTheta,
    /// `f = i a φ`
    AiPhi,
}

impl GaugeKind {
    pub const ALL: [GaugeKind; 5] = [
        GaugeKind::Zero,
        GaugeKind::ATheta,
        GaugeKind::AiSinTheta,
        GaugeKind::ACosTheta,
        GaugeKind::AiPhi,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            GaugeKind::Zero => "zero",
            GaugeKind::ATheta => "a_theta",
            GaugeKind::AiSinTheta => "ai_sin_theta",
            GaugeKind::ACosTheta => "a_cos_theta",
            GaugeKind::AiPhi => "ai_phi",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }
}

/// One of the built-in gauges with its real parameter `a`.
///
/// For `AiPhi` with non-integer `a`, `e^f` is not single valued on the
/// circle; it is evaluated as written at the literal φ it is given.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaugeFunction {
    kind: GaugeKind,
    a: f64,
}

impl GaugeFunction {
    pub fn new(kind: GaugeKind, a: f64) -> Result<Self> {
        if !a.is_finite() {
            return Err(Error::GaugeSpec {
                spec: format!("{}:a={a}", kind.name()),
                detail: "parameter must be a finite real number".into(),
            });
        }
        let a = if kind == GaugeKind::Zero { 0.0 } else { a };
        Ok(Self { kind, a })
    }

    pub fn zero() -> Self {
        Self {
            kind: GaugeKind::Zero,
            a: 0.0,
        }
    }

    pub fn kind(&self) -> GaugeKind {
        self.kind
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// The closed-form `λ` of the compatibility condition for this family.
    pub fn expected_lambda(&self) -> Complex64 {
        match self.kind {
            GaugeKind::Zero | GaugeKind::AiSinTheta | GaugeKind::ACosTheta => {
                Complex64::new(1.0, 0.0)
            }
            GaugeKind::ATheta => Complex64::new((self.a * PI).exp(), 0.0),
            GaugeKind::AiPhi => Complex64::cis(-self.a * PI),
        }
    }
}

impl Gauge for GaugeFunction {
    fn eval(&self, p: &SphericalPoint) -> Complex64 {
        let a = self.a;
        match self.kind {
            GaugeKind::Zero => Complex64::new(0.0, 0.0),
            GaugeKind::ATheta => Complex64::new(a * p.theta, 0.0),
            GaugeKind::AiSinTheta => I * (a * p.theta.sin()),
            GaugeKind::ACosTheta => Complex64::new(a * p.theta.cos(), 0.0),
            GaugeKind::AiPhi => I * (a * p.phi),
        }
    }

    fn pt_conjugate_eval(&self, p: &SphericalPoint) -> Complex64 {
        let a = self.a;
        match self.kind {
            GaugeKind::Zero => Complex64::new(0.0, 0.0),
            GaugeKind::ATheta => Complex64::new(a * (PI - p.theta), 0.0),
            GaugeKind::AiSinTheta => -I * (a * p.theta.sin()),
            GaugeKind::ACosTheta => Complex64::new(-a * p.theta.cos(), 0.0),
            GaugeKind::AiPhi => -I * (a * (p.phi + PI)),
        }
    }

    fn gradient(&self, p: &SphericalPoint) -> [Complex64; 3] {
        let a = self.a;
        let (st, ct) = p.theta.sin_cos();
        // ∇g(θ) = g'(θ) θ̂ / r,  ∇φ = φ̂ / (r sin θ)
        let along = |coef: Complex64, dir: [f64; 3]| dir.map(|d| coef * d);
        match self.kind {
            GaugeKind::Zero => [Complex64::new(0.0, 0.0); 3],
            GaugeKind::ATheta => along(Complex64::new(a / p.r, 0.0), p.theta_hat()),
            GaugeKind::AiSinTheta => along(I * (a * ct / p.r), p.theta_hat()),
            GaugeKind::ACosTheta => along(Complex64::new(-a * st / p.r, 0.0), p.theta_hat()),
            GaugeKind::AiPhi => along(I * (a / (p.r * st)), p.phi_hat()),
        }
    }

    fn laplacian(&self, p: &SphericalPoint) -> Complex64 {
        let a = self.a;
        let (st, ct) = p.theta.sin_cos();
        let r2 = p.r * p.r;
        match self.kind {
            GaugeKind::Zero | GaugeKind::AiPhi => Complex64::new(0.0, 0.0),
            GaugeKind::ATheta => Complex64::new(a * ct / (st * r2), 0.0),
            GaugeKind::AiSinTheta => I * (a * (2.0 * p.theta).cos() / (st * r2)),
            GaugeKind::ACosTheta => Complex64::new(-2.0 * a * ct / r2, 0.0),
        }
    }

    fn label(&self) -> String {
        self.to_string()
    }

    fn params(&self) -> Vec<(String, f64)> {
        match self.kind {
            GaugeKind::Zero => Vec::new(),
            _ => vec![("a".to_string(), self.a)],
        }
    }

    fn is_zero(&self) -> bool {
        self.kind == GaugeKind::Zero || self.a == 0.0
    }
}

impl fmt::Display for GaugeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GaugeKind::Zero => f.write_str("zero"),
            kind => write!(f, "{}:a={}", kind.name(), self.a),
        }
    }
}

/// Parses `name:param=value`, e.g. `a_theta:a=0.3`, or the bare `zero`.
impl FromStr for GaugeFunction {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let bad = |detail: &str| Error::GaugeSpec {
            spec: spec.to_string(),
            detail: detail.to_string(),
        };
        let spec_trim = spec.trim();
        let (name, rest) = match spec_trim.split_once(':') {
            Some((n, r)) => (n.trim(), Some(r.trim())),
            None => (spec_trim, None),
        };
        let kind = GaugeKind::from_name(name).ok_or_else(|| {
            bad("unknown gauge name; expected one of zero, a_theta, ai_sin_theta, a_cos_theta, ai_phi")
        })?;

        let mut a = None;
        if let Some(rest) = rest.filter(|r| !r.is_empty()) {
            for pair in rest.split(',') {
                let (key, value) = pair
                    .split_once('=')
                    .ok_or_else(|| bad("parameters must look like key=value"))?;
                if key.trim() != "a" {
                    return Err(bad(&format!("unknown parameter `{}`", key.trim())));
                }
                let value = value.trim();
                let parsed: f64 = value.parse().map_err(|_| {
                    if value.contains('i') || value.contains('j') {
                        bad("gauge parameters must be real; write imaginary factors through the gauge family")
                    } else {
                        bad(&format!("cannot parse `{value}` as a real number"))
                    }
                })?;
                a = Some(parsed);
            }
        }
        match (kind, a) {
            (GaugeKind::Zero, _) => Ok(Self::zero()),
            (_, None) => Err(bad("missing parameter a")),
            (kind, Some(a)) => Self::new(kind, a).map_err(|_| bad("parameter must be finite")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point3;

    fn eval_cart(g: &GaugeFunction, x: Point3) -> Complex64 {
        g.eval(&SphericalPoint::from_cartesian(x))
    }

    fn all_gauges() -> Vec<GaugeFunction> {
        vec![
            GaugeFunction::new(GaugeKind::ATheta, 0.7).unwrap(),
            GaugeFunction::new(GaugeKind::AiSinTheta, 0.4).unwrap(),
            GaugeFunction::new(GaugeKind::ACosTheta, -1.3).unwrap(),
            GaugeFunction::new(GaugeKind::AiPhi, 0.55).unwrap(),
        ]
    }

    #[test]
    fn parse_specs() {
        let g: GaugeFunction = "a_theta:a=0.3".parse().unwrap();
        assert_eq!(g.kind(), GaugeKind::ATheta);
        assert_eq!(g.a(), 0.3);
        assert_eq!(g.to_string(), "a_theta:a=0.3");
        assert_eq!(
            "zero".parse::<GaugeFunction>().unwrap(),
            GaugeFunction::zero()
        );
        assert!("ai_phi:a=0.5".parse::<GaugeFunction>().is_ok());
        assert!("a_theta".parse::<GaugeFunction>().is_err());
        assert!("a_theta:b=1".parse::<GaugeFunction>().is_err());
        assert!("a_theta:a=0.3+0.1i".parse::<GaugeFunction>().is_err());
        assert!("a_theta:a=inf".parse::<GaugeFunction>().is_err());
        assert!("theta_squared:a=1".parse::<GaugeFunction>().is_err());
    }

    #[test]
    fn pt_conjugate_matches_literal_definition() {
        let points = [
            (1.0, 0.3, 0.1),
            (2.0, 1.2, 3.0),
            (0.7, 2.8, 6.1),
            (1.0, 1.5, -2.0),
        ];
        for g in all_gauges() {
            for &(r, t, p) in &points {
                let pt = SphericalPoint::new(r, t, p);
                let literal = g.eval(&pt.parity()).conj();
                assert!((g.pt_conjugate_eval(&pt) - literal).norm() < 1e-13, "{g}");
            }
        }
    }

    #[test]
    fn derivatives_match_central_differences() {
        let h = 1e-4;
        let points: [Point3; 4] = [
            [0.6, 0.3, 0.5],
            [-0.4, 0.8, -0.3],
            [1.2, -0.7, 0.9],
            [0.2, -1.1, -0.6],
        ];
        for g in all_gauges() {
            for &x in &points {
                let sp = SphericalPoint::from_cartesian(x);
                let grad = g.gradient(&sp);
                let mut lap = -6.0 * eval_cart(&g, x);
                for k in 0..3 {
                    let mut xp = x;
                    let mut xm = x;
                    xp[k] += h;
                    xm[k] -= h;
                    let fp = eval_cart(&g, xp);
                    let fm = eval_cart(&g, xm);
                    let d = (fp - fm) / (2.0 * h);
                    assert!((d - grad[k]).norm() < 1e-7, "{g} grad[{k}] at {x:?}");
                    lap += fp + fm;
                }
                lap /= h * h;
                assert!(
                    (lap - g.laplacian(&sp)).norm() < 1e-5,
                    "{g} laplacian at {x:?}"
                );
            }
        }
    }

    #[test]
    fn closed_form_lambdas() {
        let g = GaugeFunction::new(GaugeKind::ATheta, 0.3).unwrap();
        assert!((g.expected_lambda().re - 2.566332).abs() < 1e-6);
        let g = GaugeFunction::new(GaugeKind::AiPhi, 0.5).unwrap();
        assert!((g.expected_lambda() - Complex64::new(0.0, -1.0)).norm() < 1e-15);
    }
}

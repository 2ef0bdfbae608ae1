use num_complex::Complex64;
use thiserror::Error;

/// Everything that can go wrong inside the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    #[error("shape mismatch: expected {expected} samples, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },

    #[error("Gauss-Legendre Newton iteration did not converge for n = {n}")]
    Convergence { n: usize },

    #[error(
        "gauge is not PT-compatible: max deviation {max_deviation:.3e} from mean {lambda} exceeds tolerance"
    )]
    Incompatible {
        max_deviation: f64,
        lambda: Complex64,
    },

    #[error("invalid quantum numbers N={n}, l={l}, m={m}: {detail}")]
    QuantumNumbers {
        n: usize,
        l: usize,
        m: isize,
        detail: &'static str,
    },

    #[error("evaluation point r = {r} is too close to the Coulomb singularity (need r > {min})")]
    Singularity { r: f64, min: f64 },

    #[error("invalid gauge specification `{spec}`: {detail}")]
    GaugeSpec { spec: String, detail: String },

    #[error("invalid finite-difference stencil: {0}")]
    Stencil(String),

    #[error("operator dimension mismatch: l_max {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("non-finite value produced by {op}")]
    NonFinite { op: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        op,
        detail: detail.into(),
    }
}

pub(crate) fn ensure_finite(op: &'static str, z: Complex64) -> Result<Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFinite { op })
    }
}

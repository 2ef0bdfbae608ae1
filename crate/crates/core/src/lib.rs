//! PT-dressed spherical harmonics and the operator algebra around them.
//!
//! A gauge function `f` dresses every object of ordinary angular-momentum
//! theory by the similarity transform `O -> e^f O e^{-f}`: harmonics become
//! `Y_flm = e^f Y_lm`, generators become `L_f = e^f L e^{-f}`, and the
//! Coulomb Hamiltonian becomes the non-Hermitian `H_f`. The crate evaluates
//! those objects numerically and checks the identities they satisfy:
//!
//! * [`special_functions`]: Legendre, associated Legendre, `Y_lm`, Laguerre.
//! * [`quadrature`]: Gauss-Legendre rules, sphere and radial grids.
//! * [`pt_core`]: gauges, the PT transform, compatibility detection, the
//!   PT-inner product and harmonic expansion.
//! * [`operators`]: angular momentum as block matrices and as
//!   finite-difference differential operators, dressed and undressed.
//! * [`hydrogen`]: Coulomb eigenstates, `H_f`, Runge–Lenz.
//! * [`sampling`]: seeded, reproducible sample points.

pub mod error;
pub mod geometry;
pub mod hydrogen;
pub mod operators;
pub mod pt_core;
pub mod quadrature;
pub mod sampling;
pub mod special_functions;

pub use error::{Error, Result};
pub use geometry::{Point3, SphericalPoint};
pub use num_complex::Complex64;

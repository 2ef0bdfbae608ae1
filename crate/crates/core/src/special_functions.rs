//! Legendre, associated Legendre, spherical harmonics and generalized Laguerre
//! polynomials in double precision.
//!
//! All evaluations use forward three-term recurrences. The associated Legendre
//! functions carry the Condon–Shortley phase `(-1)^m`, so
//! `P_1^1(u) = -(1 - u^2)^{1/2}`. Spherical harmonics are normalized to unit
//! L² norm on the sphere, and negative orders follow
//! `P_l^{-m} = (-1)^m (l-m)!/(l+m)! P_l^m`, which gives
//! `Y_{l,-m} = (-1)^m conj(Y_{l,m})`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{domain, Error, Result};

/// Slack allowed on `|u| <= 1` and on `θ ∈ [0, π]` before a domain error.
const DOMAIN_SLACK: f64 = 1e-12;

/// Largest degree the library is meant to be used with.
pub const L_MAX_SUPPORTED: usize = 32;

/// Degree/order pair `(l, m)` with `|m| <= l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HarmonicIndex {
    l: usize,
    m: isize,
}

impl HarmonicIndex {
    pub fn new(l: usize, m: isize) -> Result<Self> {
        if m.unsigned_abs() > l {
            return Err(domain(
                "HarmonicIndex",
                format!("|m| = {} exceeds l = {l}", m.abs()),
            ));
        }
        Ok(Self { l, m })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn m(&self) -> isize {
        self.m
    }

    /// Position in the flat `(l, m)` ordering `l^2 + l + m`.
    pub fn flat(&self) -> usize {
        (self.l * self.l + self.l).wrapping_add_signed(self.m)
    }

    /// All indices with `l <= l_max`, in flat order.
    pub fn up_to(l_max: usize) -> impl Iterator<Item = HarmonicIndex> {
        (0..=l_max).flat_map(|l| {
            let li = l as isize;
            (-li..=li).map(move |m| HarmonicIndex { l, m })
        })
    }
}

/// `(-1)^l` as a float.
pub fn parity_sign(l: usize) -> f64 {
    if l.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn check_unit_interval(op: &'static str, u: f64) -> Result<f64> {
    if !u.is_finite() || u.abs() > 1.0 + DOMAIN_SLACK {
        return Err(domain(op, format!("argument {u} outside [-1, 1]")));
    }
    Ok(u.clamp(-1.0, 1.0))
}

/// Returns `(P_l(u), P_{l-1}(u))`, with `P_{-1} := 0`.
pub(crate) fn legendre_pair(l: usize, u: f64) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 0..l {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * u * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// Legendre polynomial `P_l(u)` by the Bonnet recurrence.
pub fn legendre_p(l: usize, u: f64) -> Result<f64> {
    let u = check_unit_interval("legendre_p", u)?;
    Ok(legendre_pair(l, u).0)
}

/// Core recurrence, with `s = sqrt(1 - u^2) >= 0` supplied by the caller so
/// the θ-based path can pass `sin θ` directly.
fn assoc_legendre_with_sin(l: usize, m: usize, u: f64, s: f64) -> f64 {
    // P_m^m = (-1)^m (2m-1)!! s^m
    let mut pmm = 1.0;
    for k in 0..m {
        pmm *= -((2 * k + 1) as f64) * s;
    }
    if l == m {
        return pmm;
    }
    let mut pm1 = u * (2 * m + 1) as f64 * pmm;
    if l == m + 1 {
        return pm1;
    }
    let mut pm0 = pmm;
    for k in (m + 2)..=l {
        let next = (u * (2 * k - 1) as f64 * pm1 - (k + m - 1) as f64 * pm0) / (k - m) as f64;
        pm0 = pm1;
        pm1 = next;
    }
    pm1
}

/// Associated Legendre function `P_l^m(u)`, `0 <= m <= l`, including the
/// Condon–Shortley phase.
pub fn assoc_legendre(l: usize, m: usize, u: f64) -> Result<f64> {
    if m > l {
        return Err(domain(
            "assoc_legendre",
            format!("order m = {m} exceeds degree l = {l}"),
        ));
    }
    let u = check_unit_interval("assoc_legendre", u)?;
    let s = if u.abs() == 1.0 {
        0.0
    } else {
        ((1.0 - u) * (1.0 + u)).sqrt()
    };
    Ok(assoc_legendre_with_sin(l, m, u, s))
}

/// `(l - m)! / (l + m)!` for `m >= 0`.
///
/// Direct product up to `l = 15`; beyond that the product is accumulated as a
/// sum of logarithms.
pub(crate) fn factorial_ratio(l: usize, m: usize) -> f64 {
    if l <= 15 {
        let denom: f64 = ((l - m + 1)..=(l + m)).map(|k| k as f64).product();
        1.0 / denom
    } else {
        let log_denom: f64 = ((l - m + 1)..=(l + m)).map(|k| (k as f64).ln()).sum();
        (-log_denom).exp()
    }
}

/// Orthonormal spherical harmonic `Y_lm(θ, φ)`.
pub fn spherical_harmonic(idx: HarmonicIndex, theta: f64, phi: f64) -> Result<Complex64> {
    if !theta.is_finite() || !(-DOMAIN_SLACK..=PI + DOMAIN_SLACK).contains(&theta) {
        return Err(domain(
            "spherical_harmonic",
            format!("polar angle {theta} outside [0, π]"),
        ));
    }
    if !phi.is_finite() {
        return Err(domain("spherical_harmonic", "azimuth is not finite"));
    }
    let theta = theta.clamp(0.0, PI);
    let l = idx.l;
    let m_abs = idx.m.unsigned_abs();

    let (u, s) = if theta == 0.0 {
        (1.0, 0.0)
    } else if theta == PI {
        (-1.0, 0.0)
    } else {
        (theta.cos(), theta.sin())
    };
    let plm = assoc_legendre_with_sin(l, m_abs, u, s);
    let ratio = factorial_ratio(l, m_abs);
    let norm = ((2 * l + 1) as f64 * ratio / (4.0 * PI)).sqrt();

    // Y_{l,-|m|} = (-1)^|m| N_{l,|m|} P_l^{|m|} e^{-i|m|φ}
    let sign = if idx.m < 0 && m_abs % 2 == 1 {
        -1.0
    } else {
        1.0
    };
    let phase = Complex64::cis(idx.m as f64 * phi.rem_euclid(TAU));
    Ok(phase * (sign * norm * plm))
}

/// Generalized Laguerre polynomial `L_n^k(x)` by forward recurrence.
pub fn laguerre(n: usize, k: usize, x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(domain(
            "laguerre",
            format!("argument {x} is negative or not finite"),
        ));
    }
    let kf = k as f64;
    let mut prev = 1.0;
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = 1.0 + kf - x;
    for j in 1..n {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + kf - x) * cur - (jf + kf) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    if cur.is_finite() {
        Ok(cur)
    } else {
        Err(Error::NonFinite { op: "laguerre" })
    }
}

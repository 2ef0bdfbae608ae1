use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use pt_harmonics::hydrogen::{
    hydrogen_state, pt_hydrogen_state, radial_wavefunction, HydrogenState,
};
use pt_harmonics::pt_core::{
    check_compatibility, expand, pt_gram_matrix, pt_transform, reconstruct, Gauge, GaugeFunction,
    GaugeKind, HarmonicCoefficients, DEFAULT_COMPATIBILITY_TOL,
};
use pt_harmonics::quadrature::{integrate_radial, RadialGrid, SphereGrid};
use pt_harmonics::special_functions::{parity_sign, spherical_harmonic, HarmonicIndex};
use pt_harmonics::{Complex64, SphericalPoint};

fn gauge_kind() -> impl Strategy<Value = GaugeKind> {
    prop::sample::select(GaugeKind::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lambda_matches_closed_form(kind in gauge_kind(), a in 0.0f64..1.5) {
        let g = GaugeFunction::new(kind, a).unwrap();
        let compat = check_compatibility(&g, &SphereGrid::for_lmax(4), 1.0, DEFAULT_COMPATIBILITY_TOL).unwrap();
        prop_assert!((compat.lambda - g.expected_lambda()).norm() <= 1e-12 * (1.0 + compat.lambda.norm()));
    }

    #[test]
    fn gram_is_parity_times_lambda(kind in gauge_kind(), a in 0.0f64..1.0) {
        let g = GaugeFunction::new(kind, a).unwrap();
        let l_max = 3;
        let grid = SphereGrid::for_lmax(l_max);
        let lambda = check_compatibility(&g, &grid, 1.0, DEFAULT_COMPATIBILITY_TOL).unwrap().lambda;
        let gram = pt_gram_matrix(&g, l_max, &grid).unwrap();
        for (i, idx) in HarmonicIndex::up_to(l_max).enumerate() {
            for j in 0..gram.ncols() {
                let want = if i == j { lambda * parity_sign(idx.l()) } else { Complex64::new(0.0, 0.0) };
                prop_assert!((gram[(i, j)] - want).norm() < 1e-11 * (1.0 + lambda.norm()));
            }
        }
    }

    #[test]
    fn pt_image_of_harmonic_is_parity_conjugate(l in 0usize..8, m_frac in 0.0f64..1.0, theta in 0.0f64..PI, phi in 0.0f64..TAU) {
        let m = ((2 * l + 1) as f64 * m_frac).floor() as isize - l as isize;
        let idx = HarmonicIndex::new(l, m.clamp(-(l as isize), l as isize)).unwrap();
        let image = pt_transform(|p: &SphericalPoint| spherical_harmonic(idx, p.theta, p.phi).unwrap());
        let got = image(&SphericalPoint::new(1.0, theta, phi));
        let want = spherical_harmonic(idx, theta, phi).unwrap().conj() * parity_sign(l);
        prop_assert!((got - want).norm() < 1e-12);
    }

    #[test]
    fn expand_inverts_reconstruct(kind in gauge_kind(), a in 0.0f64..0.8, seed in any::<u64>()) {
        let g = GaugeFunction::new(kind, a).unwrap();
        let l_max = 4;
        let grid = SphereGrid::for_lmax(l_max);
        let mut rng = pt_harmonics::sampling::SampleRng::new(seed);
        let mut coeffs = HarmonicCoefficients::zeros(l_max);
        for idx in HarmonicIndex::up_to(l_max) {
            coeffs.set(idx, Complex64::new(rng.range(-1.0, 1.0), rng.range(-1.0, 1.0))).unwrap();
        }
        let samples: Vec<Complex64> = grid.points(1.0).map(|p| reconstruct(&coeffs, &g, &p).unwrap()).collect();
        let lambda = check_compatibility(&g, &grid, 1.0, DEFAULT_COMPATIBILITY_TOL).unwrap().lambda;
        let back = expand(&samples, &g, lambda, l_max, &grid).unwrap();
        for (x, y) in back.as_slice().iter().zip(coeffs.as_slice()) {
            prop_assert!((x - y).norm() < 1e-11);
        }
    }

    #[test]
    fn radial_functions_are_normalized(n in 1usize..4, l_frac in 0.0f64..1.0, z in 0.5f64..3.0) {
        let l = ((n as f64) * l_frac).floor() as usize;
        let grid = RadialGrid::for_hydrogen(n, z).unwrap();
        let samples: Vec<Complex64> = grid
            .nodes()
            .iter()
            .map(|&r| Complex64::new(radial_wavefunction(n, l, z, r).unwrap().powi(2), 0.0))
            .collect();
        prop_assert!((integrate_radial(&samples, &grid).unwrap().re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn dressed_state_is_gauge_factor_times_state(a in 0.0f64..1.0, r in 0.1f64..5.0, theta in 0.01f64..3.13, phi in 0.0f64..TAU) {
        let g = GaugeFunction::new(GaugeKind::ACosTheta, a).unwrap();
        let s = HydrogenState::new(3, 1, -1, 1.0).unwrap();
        let p = SphericalPoint::new(r, theta, phi);
        let want = (a * theta.cos()).exp() * hydrogen_state(&s, &p).unwrap();
        prop_assert!((pt_hydrogen_state(&g, &s, &p).unwrap() - want).norm() <= 1e-14 * (1.0 + want.norm()));
        prop_assert_eq!(g.eval(&p), Complex64::new(a * theta.cos(), 0.0));
    }
}

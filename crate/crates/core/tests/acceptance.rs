//! Acceptance gate. Each criterion prints one `PASS`/`FAIL` line with the
//! measured quantities; the process exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use pt_harmonics::hydrogen::{
    conservation_residual, dressed_eigen_residuals, eigen_residual, energy, hydrogen_gram,
    pt_hydrogen_gram, BallGrid, ConservedQuantity, HydrogenState, NestedSteps,
};
use pt_harmonics::operators::{
    build_angular_momentum, casimir, commutator, verify_matrix_vs_fd, verify_nonrotation_of_p,
    Axis, FDStencil,
};
use pt_harmonics::pt_core::{
    check_compatibility, expand, pt_gram_matrix, reconstruct, GaugeFunction, GaugeKind,
    HarmonicCoefficients, DEFAULT_COMPATIBILITY_TOL,
};
use pt_harmonics::quadrature::SphereGrid;
use pt_harmonics::sampling::{gaussian_samples, shell_points, unit_sphere_points, SampleRng};
use pt_harmonics::special_functions::{parity_sign, HarmonicIndex};
use pt_harmonics::{Complex64, SphericalPoint};

const SEED: u64 = 42;

type Outcome = Result<(bool, String), pt_harmonics::Error>;
type Criterion = (&'static str, fn() -> Outcome);

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn lambda_reproduction() -> Outcome {
    let grid = SphereGrid::for_lmax(6);
    let mut worst = 0.0f64;
    let mut slowest = Duration::ZERO;
    for kind in [
        GaugeKind::ATheta,
        GaugeKind::AiSinTheta,
        GaugeKind::ACosTheta,
        GaugeKind::AiPhi,
    ] {
        let start = Instant::now();
        for a in [0.1, 0.5, 1.0] {
            let gauge = GaugeFunction::new(kind, a)?;
            let compat = check_compatibility(&gauge, &grid, 1.0, DEFAULT_COMPATIBILITY_TOL)?;
            worst = worst.max((compat.lambda - gauge.expected_lambda()).norm());
        }
        slowest = slowest.max(start.elapsed());
    }
    let pass = worst <= 1e-12 && slowest < Duration::from_secs(1);
    Ok((
        pass,
        format!("max |Δλ| = {worst:.3e} (≤ 1e-12), slowest gauge {slowest:.2?} (< 1 s)"),
    ))
}

fn pt_orthonormality() -> Outcome {
    let start = Instant::now();
    let gauge = GaugeFunction::new(GaugeKind::ATheta, 0.3)?;
    let l_max = 6;
    let gram = pt_gram_matrix(&gauge, l_max, &SphereGrid::for_lmax(l_max))?;
    let lambda = (0.3 * PI).exp();
    let indices: Vec<HarmonicIndex> = HarmonicIndex::up_to(l_max).collect();
    let mut worst = 0.0f64;
    for (i, row) in indices.iter().enumerate() {
        for j in 0..indices.len() {
            let want = if i == j {
                parity_sign(row.l()) * lambda
            } else {
                0.0
            };
            worst = worst.max((gram[(i, j)] - want).norm());
        }
    }
    let elapsed = start.elapsed();
    let pass = gram.nrows() == 49 && worst <= 1e-9 && elapsed < Duration::from_secs(10);
    Ok((
        pass,
        format!(
            "{}×{} Gram, max dev {worst:.3e} (≤ 1e-9), {elapsed:.2?} (< 10 s)",
            gram.nrows(),
            gram.ncols()
        ),
    ))
}

fn so3_closure() -> Outcome {
    let l_max = 12;
    let mut worst = 0.0f64;
    for i in Axis::ALL {
        let (j, k) = i.cyclic();
        let lhs = commutator(
            &build_angular_momentum(i, l_max),
            &build_angular_momentum(j, l_max),
        )?;
        let rhs = build_angular_momentum(k, l_max).scale(Complex64::i());
        worst = worst.max(lhs.sub(&rhs)?.max_abs());
    }
    let l2 = casimir(l_max);
    let mut casimir_worst = 0.0f64;
    for l in 0..=l_max {
        let block = l2.block(l);
        let target = (l * (l + 1)) as f64;
        for r in 0..block.nrows() {
            for col in 0..block.ncols() {
                let want = if r == col { target } else { 0.0 };
                casimir_worst = casimir_worst.max((block[(r, col)] - want).norm());
            }
        }
    }
    let pass = worst <= 1e-13 && casimir_worst <= 1e-13;
    Ok((
        pass,
        format!("max commutator residual {worst:.3e}, Casimir {casimir_worst:.3e} (≤ 1e-13)"),
    ))
}

fn fd_matrix_order() -> Outcome {
    let points = unit_sphere_points(SEED, 10, 0.9);
    let residuals = [1e-2, 5e-3, 2.5e-3]
        .iter()
        .map(|&h| Ok(verify_matrix_vs_fd(4, &points, FDStencil::new(h, 2)?)?.max_residual))
        .collect::<Result<Vec<f64>, pt_harmonics::Error>>()?;
    let orders: Vec<f64> = residuals.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    let pass = orders.iter().all(|p| (1.7..=2.3).contains(p));
    Ok((
        pass,
        format!(
            "residuals {:.3e} {:.3e} {:.3e}, observed orders {:.3} {:.3} (in [1.7, 2.3])",
            residuals[0], residuals[1], residuals[2], orders[0], orders[1]
        ),
    ))
}

fn generator_dichotomy() -> Outcome {
    let gauge = GaugeFunction::new(GaugeKind::ATheta, 0.5)?;
    let report =
        verify_nonrotation_of_p(&gauge, &gaussian_samples(SEED, 5), FDStencil::new(1e-2, 2)?)?;
    let pass = report.undressed > 1e-3 && report.dressed < 1e-6;
    Ok((
        pass,
        format!(
            "[L_f, p] defect {:.3e} (> 1e-3), [L_f, p_f] defect {:.3e} (< 1e-6)",
            report.undressed, report.dressed
        ),
    ))
}

fn max_roundtrip_error<F>(
    gauge: &GaugeFunction,
    l_max: usize,
    target: F,
    probes: &[SphericalPoint],
) -> Result<f64, pt_harmonics::Error>
where
    F: Fn(&SphericalPoint) -> Complex64,
{
    let grid = SphereGrid::for_lmax(l_max);
    let samples: Vec<Complex64> = grid.points(1.0).map(|p| target(&p)).collect();
    let lambda = check_compatibility(gauge, &grid, 1.0, DEFAULT_COMPATIBILITY_TOL)?.lambda;
    let coeffs = expand(&samples, gauge, lambda, l_max, &grid)?;
    let mut worst = 0.0f64;
    for p in probes {
        worst = worst.max((reconstruct(&coeffs, gauge, p)? - target(p)).norm());
    }
    Ok(worst)
}

fn completeness() -> Outcome {
    let gauge = GaugeFunction::new(GaugeKind::ATheta, 0.3)?;
    let probes: Vec<SphericalPoint> = unit_sphere_points(SEED, 200, 1.0)
        .into_iter()
        .map(SphericalPoint::from_cartesian)
        .collect();

    let l_max = 6;
    let mut rng = SampleRng::new(SEED);
    let mut coeffs = HarmonicCoefficients::zeros(l_max);
    for idx in HarmonicIndex::up_to(l_max) {
        coeffs.set(
            idx,
            Complex64::new(rng.range(-1.0, 1.0), rng.range(-1.0, 1.0)),
        )?;
    }
    let band_limited = |p: &SphericalPoint| reconstruct(&coeffs, &gauge, p).expect("finite");
    let band_err = max_roundtrip_error(&gauge, l_max, band_limited, &probes)?;

    let smooth = |p: &SphericalPoint| {
        use pt_harmonics::pt_core::Gauge;
        (gauge.eval(p) + 2.0 * p.theta.sin() * p.phi.cos()).exp()
    };
    let errs = [4, 8, 12]
        .iter()
        .map(|&l| max_roundtrip_error(&gauge, l, smooth, &probes))
        .collect::<Result<Vec<f64>, _>>()?;
    let floor = 1e-12;
    let monotone = errs.windows(2).all(|w| w[1] < w[0] || w[1] <= floor);
    let pass = band_err <= 1e-9 && monotone;
    Ok((
        pass,
        format!("band-limited {band_err:.3e} (≤ 1e-9); smooth target l_max 4/8/12: {:.3e} {:.3e} {:.3e} (decreasing)", errs[0], errs[1], errs[2]),
    ))
}

fn hydrogen_points() -> Vec<[f64; 3]> {
    shell_points(SEED, 10, 0.5, 4.0, 0.9)
}

fn hydrogen_spectrum() -> Outcome {
    let states = HydrogenState::all_up_to(3, 1.0);
    let stencil = FDStencil::new(1e-3, 2)?;
    let mut residual = 0.0f64;
    for s in &states {
        for &p in &hydrogen_points() {
            residual = residual.max(eigen_residual(s, p, stencil)?);
        }
    }
    let gram = hydrogen_gram(&states, &BallGrid::for_states(3, 1.0)?)?;
    let mut ortho = 0.0f64;
    for i in 0..states.len() {
        for j in 0..states.len() {
            let want = if i == j { 1.0 } else { 0.0 };
            ortho = ortho.max((gram[(i, j)] - c(want)).norm());
        }
    }
    // reported only: N²·E_N is the same for every shell under both conventions
    let pattern: Vec<f64> = (1..=3)
        .map(|n| energy(n, 1.0).map(|e| e * (n * n) as f64))
        .collect::<Result<_, _>>()?;
    let pass = residual <= 1e-4 && ortho <= 1e-8;
    Ok((
        pass,
        format!(
            "max |(H - E)ψ| {residual:.3e} (≤ 1e-4) over {} states, orthonormality {ortho:.3e} (≤ 1e-8); N²E_N = {:?}",
            states.len(),
            pattern
        ),
    ))
}

fn pt_hydrogen() -> Outcome {
    let gauge = GaugeFunction::new(GaugeKind::ACosTheta, 0.3)?;
    let states = HydrogenState::all_up_to(3, 1.0);
    let gram = pt_hydrogen_gram(&gauge, &states, &BallGrid::for_states(3, 1.0)?)?;
    let mut worst = 0.0f64;
    for (i, s) in states.iter().enumerate() {
        for j in 0..states.len() {
            let want = if i == j { parity_sign(s.l()) } else { 0.0 };
            worst = worst.max((gram[(i, j)] - c(want)).norm());
        }
    }
    let stencil = FDStencil::new(1e-3, 2)?;
    let mut residual = 0.0f64;
    for s in &states {
        for &p in &hydrogen_points() {
            let (explicit, conjugated) = dressed_eigen_residuals(&gauge, s, p, stencil)?;
            residual = residual.max(explicit).max(conjugated);
        }
    }
    let pass = worst <= 1e-7 && residual <= 1e-4;
    Ok((
        pass,
        format!("PT-Gram max dev {worst:.3e} (≤ 1e-7), max |(H_f - E)ψ_f| {residual:.3e} (≤ 1e-4)"),
    ))
}

fn conservation() -> Outcome {
    let start = Instant::now();
    let samples = gaussian_samples(SEED, 5);
    let steps = NestedSteps::default();
    let mut parts = Vec::new();
    let mut pass = true;
    for (kind, a) in [(GaugeKind::ATheta, 0.5), (GaugeKind::ACosTheta, 0.3)] {
        let gauge = GaugeFunction::new(kind, a)?;
        let lf = conservation_residual(
            ConservedQuantity::DressedAngularMomentum,
            &gauge,
            &samples,
            steps,
            1.0,
        )?;
        let rf = conservation_residual(
            ConservedQuantity::DressedRungeLenz,
            &gauge,
            &samples,
            steps,
            1.0,
        )?;
        let bare = conservation_residual(
            ConservedQuantity::BareAngularMomentum,
            &gauge,
            &samples,
            steps,
            1.0,
        )?;
        pass &= lf < 1e-5 && rf < 1e-5 && bare > 1e-3;
        parts.push(format!(
            "{gauge}: [L_f,H_f] {lf:.3e} [R_f,H_f] {rf:.3e} (< 1e-5), [L,H_f] {bare:.3e} (> 1e-3)"
        ));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(120);
    Ok((
        pass,
        format!("{}; {elapsed:.2?} (< 2 min)", parts.join("; ")),
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("lambda-reproduction", lambda_reproduction),
        ("pt-orthonormality", pt_orthonormality),
        ("so3-closure", so3_closure),
        ("fd-matrix-order", fd_matrix_order),
        ("generator-dichotomy", generator_dichotomy),
        ("completeness", completeness),
        ("hydrogen-spectrum", hydrogen_spectrum),
        ("pt-hydrogen", pt_hydrogen),
        ("conservation", conservation),
    ];
    let mut failures = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let (pass, detail) = match run() {
            Ok(outcome) => outcome,
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failures += 1;
        }
        println!(
            "[{}] {} {name}: {detail}",
            n + 1,
            if pass { "PASS" } else { "FAIL" }
        );
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

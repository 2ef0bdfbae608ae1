use std::fmt;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use pt_harmonics::hydrogen::DEFAULT_NESTED_INNER_STEP;
use pt_harmonics::pt_core::{GaugeFunction, GaugeKind};
use pt_harmonics::quadrature::SphereGrid;
use pt_harmonics::special_functions::L_MAX_SUPPORTED;
use serde::Serialize;

pub const DEFAULT_L_MAX: usize = 6;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_FD_STEP: f64 = 1e-3;
pub const QUADRATURE_TOLERANCE: f64 = 1e-9;
pub const FD_TOLERANCE: f64 = 1e-4;
pub const ALGEBRA_TOLERANCE: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    VerifySo3,
    VerifyOrthonormality,
    VerifyCompleteness,
    VerifyGenerators,
    HydrogenSpectrum,
    VerifyPtHydrogen,
    VerifyRungeLenz,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::VerifySo3 => "verify-so3",
            Suite::VerifyOrthonormality => "verify-orthonormality",
            Suite::VerifyCompleteness => "verify-completeness",
            Suite::VerifyGenerators => "verify-generators",
            Suite::HydrogenSpectrum => "hydrogen-spectrum",
            Suite::VerifyPtHydrogen => "verify-pt-hydrogen",
            Suite::VerifyRungeLenz => "verify-runge-lenz",
        }
    }

    /// Suites whose results depend on a gauge function.
    pub fn uses_gauge(self) -> bool {
        !matches!(self, Suite::VerifySo3 | Suite::HydrogenSpectrum)
    }

    /// Suites that need `e^{f*(PT x) + f(x)}` to be constant.
    pub fn requires_compatible_gauge(self) -> bool {
        matches!(
            self,
            Suite::VerifyOrthonormality | Suite::VerifyCompleteness | Suite::VerifyPtHydrogen
        )
    }

    pub fn default_gauge(self) -> GaugeFunction {
        let (kind, a) = match self {
            Suite::VerifySo3 | Suite::HydrogenSpectrum => return GaugeFunction::zero(),
            Suite::VerifyOrthonormality | Suite::VerifyCompleteness => (GaugeKind::ATheta, 0.3),
            Suite::VerifyGenerators | Suite::VerifyRungeLenz => (GaugeKind::ATheta, 0.5),
            Suite::VerifyPtHydrogen => (GaugeKind::ACosTheta, 0.3),
        };
        GaugeFunction::new(kind, a).expect("finite default")
    }

    pub fn default_tolerance(self) -> f64 {
        match self {
            Suite::VerifySo3 => ALGEBRA_TOLERANCE,
            Suite::VerifyOrthonormality | Suite::VerifyCompleteness => QUADRATURE_TOLERANCE,
            Suite::VerifyGenerators
            | Suite::HydrogenSpectrum
            | Suite::VerifyPtHydrogen
            | Suite::VerifyRungeLenz => FD_TOLERANCE,
        }
    }

    /// For the Runge–Lenz suite this is the inner step of the nested stencils.
    pub fn default_fd_step(self) -> f64 {
        match self {
            Suite::VerifyRungeLenz => DEFAULT_NESTED_INNER_STEP,
            _ => DEFAULT_FD_STEP,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

/// Verification suites for PT-dressed spherical harmonics and the dressed
/// hydrogen problem.
#[derive(Debug, Clone, Parser)]
#[command(name = "pt-harmonics", version)]
pub struct RunConfig {
    /// Suite to run
    #[arg(value_enum)]
    pub suite: Suite,

    /// Gauge function, e.g. `a_theta:a=0.3`, `ai_phi:a=0.5` or `zero`
    #[arg(long)]
    pub gauge: Option<GaugeFunction>,

    /// Highest harmonic degree
    #[arg(long = "lmax", default_value_t = DEFAULT_L_MAX, value_parser = parse_l_max)]
    pub l_max: usize,

    /// Gauss-Legendre nodes in cos θ
    #[arg(long)]
    pub n_theta: Option<usize>,

    /// Uniform nodes in φ
    #[arg(long)]
    pub n_phi: Option<usize>,

    /// Finite-difference step
    #[arg(long, value_parser = parse_positive)]
    pub fd_step: Option<f64>,

    /// Pass threshold on each check's deviation
    #[arg(long, value_parser = parse_positive)]
    pub tolerance: Option<f64>,

    /// Seed for sample points
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    #[arg(long = "format", value_enum, default_value_t = OutputFormat::Json)]
    pub output_format: OutputFormat,

    /// Write the report here instead of standard output
    #[arg(long = "output")]
    pub output_path: Option<PathBuf>,
}

fn parse_l_max(s: &str) -> Result<usize, String> {
    let l: usize = s.parse().map_err(|e| format!("{e}"))?;
    if l > L_MAX_SUPPORTED {
        return Err(format!("must be at most {L_MAX_SUPPORTED}"));
    }
    Ok(l)
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err("must be a positive finite number".into())
    }
}

/// Configuration after per-suite defaults are applied; echoed in reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolvedConfig {
    pub suite: Suite,
    pub gauge: String,
    pub l_max: usize,
    pub n_theta: usize,
    pub n_phi: usize,
    pub fd_step: f64,
    pub tolerance: f64,
    pub seed: u64,
    pub output_format: OutputFormat,
    #[serde(skip)]
    pub gauge_function: GaugeFunction,
    #[serde(skip)]
    pub tolerance_explicit: bool,
}

impl RunConfig {
    /// Applies defaults. Returns the resolved config and any warnings.
    pub fn resolve(&self) -> (ResolvedConfig, Vec<String>) {
        let (dt, dp) = SphereGrid::default_sizes(self.l_max);
        let n_theta = self.n_theta.unwrap_or(dt);
        let n_phi = self.n_phi.unwrap_or(dp);
        let mut warnings = Vec::new();
        if n_theta < dt {
            warnings.push(format!(
                "--n-theta {n_theta} is below the default {dt} for l_max {}",
                self.l_max
            ));
        }
        if n_phi < dp {
            warnings.push(format!(
                "--n-phi {n_phi} is below the default {dp} for l_max {}",
                self.l_max
            ));
        }
        let gauge_function = self.gauge.unwrap_or_else(|| self.suite.default_gauge());
        if !self.suite.uses_gauge() && self.gauge.is_some() {
            warnings.push(format!("suite {} ignores --gauge", self.suite));
        }
        let gauge = if self.suite.uses_gauge() {
            gauge_function.to_string()
        } else {
            GaugeFunction::zero().to_string()
        };
        let resolved = ResolvedConfig {
            suite: self.suite,
            gauge,
            l_max: self.l_max,
            n_theta,
            n_phi,
            fd_step: self.fd_step.unwrap_or_else(|| self.suite.default_fd_step()),
            tolerance: self
                .tolerance
                .unwrap_or_else(|| self.suite.default_tolerance()),
            seed: self.seed,
            output_format: self.output_format,
            gauge_function,
            tolerance_explicit: self.tolerance.is_some(),
        };
        (resolved, warnings)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<RunConfig, clap::Error> {
        RunConfig::try_parse_from(std::iter::once("pt-harmonics").chain(args.iter().copied()))
    }

    #[test]
    fn defaults() {
        let (c, w) = parse(&["verify-orthonormality"]).unwrap().resolve();
        assert!(w.is_empty());
        assert_eq!(c.l_max, 6);
        assert_eq!(c.seed, 42);
        assert_eq!(c.tolerance, 1e-9);
        assert_eq!(c.fd_step, 1e-3);
        assert_eq!(c.gauge, "a_theta:a=0.3");
        assert_eq!((c.n_theta, c.n_phi), SphereGrid::default_sizes(6));
        assert_eq!(
            parse(&["verify-generators"]).unwrap().resolve().0.tolerance,
            1e-4
        );
        assert_eq!(parse(&["verify-so3"]).unwrap().resolve().0.tolerance, 1e-13);
    }

    #[test]
    fn flags() {
        let c = parse(&[
            "verify-completeness",
            "--gauge",
            "ai_phi:a=0.5",
            "--lmax",
            "10",
            "--fd-step",
            "0.01",
            "--tolerance",
            "1e-6",
            "--seed",
            "7",
            "--format",
            "csv",
            "--output",
            "out.csv",
        ])
        .unwrap();
        assert_eq!(c.l_max, 10);
        assert_eq!(c.output_format, OutputFormat::Csv);
        assert_eq!(
            c.output_path.as_deref(),
            Some(std::path::Path::new("out.csv"))
        );
        let (r, _) = c.resolve();
        assert_eq!(r.gauge, "ai_phi:a=0.5");
        assert_eq!(r.fd_step, 0.01);
        assert_eq!(r.tolerance, 1e-6);
    }

    #[test]
    fn small_grid_warns() {
        let (_, w) = parse(&["verify-orthonormality", "--n-theta", "4"])
            .unwrap()
            .resolve();
        assert_eq!(w.len(), 1);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(parse(&["verify-so3", "--lmax", "33"]).is_err());
        assert!(parse(&["verify-so3", "--fd-step", "-1"]).is_err());
        assert!(parse(&["verify-so3", "--gauge", "bogus"]).is_err());
        assert!(parse(&["no-such-suite"]).is_err());
    }
}

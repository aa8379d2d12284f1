//! Batch front-end: `validate`, `coeffs`, `bound`, `apply`, `verify`, and
//! `report` subcommands with JSON-first output. Exit codes: 0 success,
//! 1 validation failure, 2 tolerance breach, 3 configuration error;
//! errors go to stderr as machine-readable JSON. Knob precedence is
//! flag > config file > default.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::boundary::BoundaryFunction;
use crate::domain::{load_domain, validate_conformal, AnalyticDomain};
use crate::error::{Error, Result};
use crate::kernel::{
    coefficient_bound, kernel_coefficients, kernel_coefficients_auto, KernelExpansion,
};
use crate::operator::SeriesOperator;
use crate::report::run_pipeline;
use crate::verify::{
    convergence_suite, equivalence_suite, isometry_suite, kernel_invariants_suite,
    representation_suite, seeded_probes, Tolerances,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_TOLERANCE: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;

/// Truncation degree: automatic (tail-driven) or fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MChoice {
    Auto,
    Fixed(usize),
}

impl std::str::FromStr for MChoice {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(MChoice::Auto);
        }
        s.parse::<usize>().map(MChoice::Fixed).map_err(|_| {
            format!("expected \"auto\" or a nonnegative integer, got {s:?}")
        })
    }
}

impl<'de> Deserialize<'de> for MChoice {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Number(usize),
        }
        match Repr::deserialize(d)? {
            Repr::Number(m) => Ok(MChoice::Fixed(m)),
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "cauchy",
    about = "Cauchy transform on analytic domains: kernel coefficients, norm bounds, verification suites",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Preset name (disk, perturbed-disk[-eps], cubic-blob[-eps]) or path
    /// to a domain spec JSON file.
    #[arg(long, global = true)]
    domain: Option<String>,
    /// JSON file with default knobs; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

impl Common {
    fn domain(&self) -> Result<&str> {
        self.domain
            .as_deref()
            .ok_or_else(|| Error::Config("missing required --domain argument".into()))
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Conformality and injectivity report for the domain map.
    Validate {
        /// Radius to check (defaults to the certified radius).
        #[arg(long = "r-check")]
        r_check: Option<f64>,
    },
    /// Kernel coefficients as CSV (m, n, re, im, paper bound) plus the
    /// structural invariant checks.
    Coeffs {
        #[arg(long = "M")]
        m: Option<MChoice>,
        /// Extraction grid size (power of two).
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Norm-bound summary JSON: { sup_H, r, s, abs_sum, tail_bound,
    /// norm_bound }.
    Bound {
        #[arg(long = "M")]
        m: Option<MChoice>,
    },
    /// Apply the series operator to boundary data (JSON in, JSON out).
    Apply {
        /// Boundary function JSON file.
        #[arg(long)]
        f: PathBuf,
        #[arg(long = "M")]
        m: Option<MChoice>,
    },
    /// Verification suites; nonzero exit on any tolerance breach.
    Verify {
        #[command(subcommand)]
        suite: VerifySuite,
    },
    /// Full pipeline: validation, coefficients, bounds, and every suite
    /// in one JSON document.
    Report {
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Subcommand, Debug, Clone)]
enum VerifySuite {
    /// Cauchy representation of Smirnov-class elements.
    Representation {
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long)]
        probes: Option<usize>,
        #[arg(long = "N")]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Series operator vs direct quadrature.
    Equivalence {
        #[arg(long)]
        probes: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long = "N-quad")]
        n_quad: Option<usize>,
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Boundary-norm equality under transplantation.
    Isometry {
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long = "N")]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Partial-sum convergence against the geometric tail bound.
    Convergence {
        #[arg(long, value_delimiter = ',')]
        schedule: Option<Vec<usize>>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// Optional configuration file; every field defaults to the built-in
/// value and is overridden by the matching flag. Unknown keys are
/// rejected.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(rename = "M")]
    m: Option<MChoice>,
    grid: Option<usize>,
    #[serde(rename = "N_quad")]
    n_quad: Option<usize>,
    #[serde(rename = "N")]
    n: Option<usize>,
    probes: Option<usize>,
    trials: Option<usize>,
    seed: Option<u64>,
    degree: Option<usize>,
    schedule: Option<Vec<usize>>,
    tolerances: Option<Tolerances>,
}

/// Fully resolved run configuration (flag > file > default).
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub domain: String,
    pub out: Option<PathBuf>,
    pub m: MChoice,
    pub grid: Option<usize>,
    pub n_quad: usize,
    pub n: usize,
    pub probes: usize,
    pub trials: usize,
    pub seed: u64,
    pub degree: usize,
    pub schedule: Vec<usize>,
    pub tolerances: Tolerances,
}

impl RunConfig {
    fn resolve(common: &Common, file: &ConfigFile) -> Result<Self> {
        let config = RunConfig {
            domain: common.domain()?.to_string(),
            out: common.out.clone(),
            m: file.m.unwrap_or(MChoice::Auto),
            grid: file.grid,
            n_quad: file.n_quad.unwrap_or(512),
            n: file.n.unwrap_or(256),
            probes: file.probes.unwrap_or(16),
            trials: file.trials.unwrap_or(20),
            seed: file.seed.unwrap_or(7),
            degree: file.degree.unwrap_or(8),
            schedule: file.schedule.clone().unwrap_or_else(|| vec![2, 4, 8, 16]),
            tolerances: file.tolerances.unwrap_or_default(),
        };
        config.checked()
    }

    /// Range checks for every knob; violations are configuration errors.
    fn checked(self) -> Result<Self> {
        fn pow2_in(label: &str, v: usize, lo: usize, hi: usize) -> Result<()> {
            if !crate::util::is_power_of_two(v) || v < lo || v > hi {
                return Err(Error::Config(format!(
                    "{label} must be a power of two in [{lo}, {hi}], got {v}"
                )));
            }
            Ok(())
        }
        if let MChoice::Fixed(m) = self.m {
            if m > 128 {
                return Err(Error::Config(format!("M must be at most 128, got {m}")));
            }
        }
        if let Some(grid) = self.grid {
            pow2_in("grid", grid, 8, 4096)?;
        }
        pow2_in("N_quad", self.n_quad, 64, 8192)?;
        pow2_in("N", self.n, 8, 4096)?;
        if self.probes == 0 || self.probes > 1024 {
            return Err(Error::Config(format!("probes must be in 1..=1024, got {}", self.probes)));
        }
        if self.trials == 0 || self.trials > 100_000 {
            return Err(Error::Config(format!(
                "trials must be in 1..=100000, got {}",
                self.trials
            )));
        }
        if self.degree == 0 || self.degree >= self.n / 2 {
            return Err(Error::Config(format!(
                "degree must be in 1..N/2, got {} with N = {}",
                self.degree, self.n
            )));
        }
        if self.schedule.is_empty()
            || self.schedule.windows(2).any(|w| w[0] >= w[1])
            || *self.schedule.last().unwrap() > 128
        {
            return Err(Error::Config(format!(
                "schedule must be strictly increasing with entries <= 128, got {:?}",
                self.schedule
            )));
        }
        Ok(self)
    }
}

fn load_config_file(path: &Option<PathBuf>) -> Result<ConfigFile> {
    match path {
        None => Ok(ConfigFile::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::Config(format!("cannot read config {p:?}: {e}")))?;
            serde_json::from_str(&text)
                .map_err(|e| Error::Config(format!("bad config {p:?}: {e}")))
        }
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
            Ok(())
        }
        Some(path) => Ok(std::fs::write(path, text)?),
    }
}

fn emit_json<T: Serialize>(out: &Option<PathBuf>, value: &T) -> Result<()> {
    emit(out, &serde_json::to_string_pretty(value)?)
}

fn expansion_for(dom: &AnalyticDomain, m: MChoice, grid: Option<usize>) -> Result<KernelExpansion> {
    match (m, grid) {
        (MChoice::Auto, None) => kernel_coefficients_auto(dom),
        (m, grid) => {
            let truncation = match m {
                MChoice::Fixed(v) => v,
                MChoice::Auto => return kernel_coefficients_auto(dom),
            };
            let radii = crate::domain::RadiiPair::default_for(dom.radius())?;
            let grid_n = grid.unwrap_or_else(|| crate::kernel::auto_grid(truncation));
            kernel_coefficients(dom, &radii, truncation, grid_n)
        }
    }
}

/// Entry point used by the binary; parses arguments, dispatches, prints a
/// machine-readable error on stderr when needed, and returns the exit
/// code.
pub fn main_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // Help/version are not errors.
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return EXIT_OK;
            }
            report_error(&Error::Config(e.to_string()));
            return EXIT_CONFIG;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            let code = exit_code_for(&e);
            report_error(&e);
            code
        }
    }
}

/// Exit-code classes: configuration and I/O problems are 3, everything
/// else that errors is a validation failure, 1.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::Io(_) | Error::Json(_) | Error::SizeError(_) => EXIT_CONFIG,
        _ => EXIT_VALIDATION,
    }
}

fn report_error(err: &Error) {
    let doc = serde_json::json!({
        "error": { "kind": err.kind(), "message": err.to_string() }
    });
    eprintln!("{doc}");
}

fn dispatch(cli: Cli) -> Result<i32> {
    // Surface a bad CAUCHY_THREADS value as a configuration error up
    // front rather than mid-computation.
    crate::util::thread_cap()?;
    let common = cli.common;
    match cli.command {
        Command::Validate { r_check } => {
            let file = load_config_file(&common.config)?;
            let config = RunConfig::resolve(&common, &file)?;
            let dom = load_domain(&config.domain)?;
            let report = validate_conformal(dom.psi(), r_check.unwrap_or(dom.radius()))?;
            emit_json(&config.out, &report)?;
            Ok(EXIT_OK)
        }
        Command::Coeffs { m, grid } => {
            let file = load_config_file(&common.config)?;
            let mut config = RunConfig::resolve(&common, &file)?;
            if let Some(m) = m {
                config.m = m;
            }
            if grid.is_some() {
                config.grid = grid;
            }
            let config = config.checked()?;
            let dom = load_domain(&config.domain)?;
            let exp = expansion_for(&dom, config.m, config.grid)?;

            let mut csv = String::from("m,n,re,im,paper_bound\n");
            for row in 0..=exp.truncation() {
                for col in 0..=exp.truncation() {
                    let a = exp.coefficient(row, col);
                    let bound = coefficient_bound(exp.sup_h, &exp.radii, row, col);
                    csv.push_str(&format!("{row},{col},{:.17e},{:.17e},{:.17e}\n", a.re, a.im, bound));
                }
            }
            emit(&config.out, &csv)?;

            let invariants = kernel_invariants_suite(&exp);
            if !invariants.pass {
                eprintln!("{}", serde_json::to_string(&invariants)?);
                return Ok(EXIT_TOLERANCE);
            }
            Ok(EXIT_OK)
        }
        Command::Bound { m } => {
            let file = load_config_file(&common.config)?;
            let mut config = RunConfig::resolve(&common, &file)?;
            if let Some(m) = m {
                config.m = m;
            }
            let config = config.checked()?;
            let dom = load_domain(&config.domain)?;
            let exp = expansion_for(&dom, config.m, config.grid)?;
            #[derive(Serialize)]
            struct BoundDoc {
                #[serde(rename = "sup_H")]
                sup_h: f64,
                r: f64,
                s: f64,
                abs_sum: f64,
                tail_bound: f64,
                norm_bound: f64,
            }
            emit_json(
                &config.out,
                &BoundDoc {
                    sup_h: exp.sup_h,
                    r: exp.radii.r,
                    s: exp.radii.s,
                    abs_sum: exp.abs_sum,
                    tail_bound: exp.tail_bound,
                    norm_bound: exp.norm_upper(),
                },
            )?;
            Ok(EXIT_OK)
        }
        Command::Apply { f, m } => {
            let file = load_config_file(&common.config)?;
            let mut config = RunConfig::resolve(&common, &file)?;
            if let Some(m) = m {
                config.m = m;
            }
            let config = config.checked()?;
            let dom = load_domain(&config.domain)?;
            let text = std::fs::read_to_string(&f)
                .map_err(|e| Error::Config(format!("cannot read boundary data {f:?}: {e}")))?;
            let data: BoundaryFunction = serde_json::from_str(&text)?;
            let exp = expansion_for(&dom, config.m, config.grid)?;
            let op = SeriesOperator::new(dom, exp)?;
            emit_json(&config.out, &op.apply(&data))?;
            Ok(EXIT_OK)
        }
        Command::Verify { suite } => run_verify(common, suite),
        Command::Report { seed } => {
            let file = load_config_file(&common.config)?;
            let mut config = RunConfig::resolve(&common, &file)?;
            if let Some(seed) = seed {
                config.seed = seed;
            }
            let dom = load_domain(&config.domain)?;
            let report = run_pipeline(&dom, config.seed, &config.tolerances)?;
            let pass = report.pass;
            emit_json(&config.out, &report)?;
            Ok(if pass { EXIT_OK } else { EXIT_TOLERANCE })
        }
    }
}

fn run_verify(common: Common, suite: VerifySuite) -> Result<i32> {
    let file = load_config_file(&common.config)?;
    let mut config = RunConfig::resolve(&common, &file)?;
    // Flags override the file values.
    match &suite {
        VerifySuite::Representation { degree, probes, n, seed } => {
            if let Some(v) = degree {
                config.degree = *v;
            }
            if let Some(v) = probes {
                config.probes = *v;
            }
            if let Some(v) = n {
                config.n = *v;
            }
            if let Some(v) = seed {
                config.seed = *v;
            }
        }
        VerifySuite::Equivalence { probes, seed, n_quad, trials } => {
            if let Some(v) = probes {
                config.probes = *v;
            }
            if let Some(v) = seed {
                config.seed = *v;
            }
            if let Some(v) = n_quad {
                config.n_quad = *v;
            }
            if let Some(v) = trials {
                config.trials = *v;
            }
        }
        VerifySuite::Isometry { trials, n, seed } => {
            if let Some(v) = trials {
                config.trials = *v;
            }
            if let Some(v) = n {
                config.n = *v;
            }
            if let Some(v) = seed {
                config.seed = *v;
            }
        }
        VerifySuite::Convergence { schedule, seed } => {
            if let Some(v) = schedule {
                config.schedule = v.clone();
            }
            if let Some(v) = seed {
                config.seed = *v;
            }
        }
    }
    let config = config.checked()?;
    let dom = load_domain(&config.domain)?;

    match suite {
        VerifySuite::Representation { .. } => {
            let result = representation_suite(
                &dom,
                config.degree,
                config.probes,
                config.n,
                config.seed,
                config.tolerances.representation,
            )?;
            #[derive(Serialize)]
            struct Doc {
                max_error: f64,
            }
            emit_json(&config.out, &Doc { max_error: result.max_error })?;
            Ok(if result.pass { EXIT_OK } else { EXIT_TOLERANCE })
        }
        VerifySuite::Equivalence { .. } => {
            let exp = expansion_for(&dom, config.m, config.grid)?;
            let op = SeriesOperator::new(dom, exp)?;
            let result = equivalence_suite(
                &op,
                config.probes,
                config.trials,
                config.n_quad,
                config.seed,
                config.tolerances.equivalence,
            )?;
            #[derive(Serialize)]
            struct Doc {
                max_error: f64,
                #[serde(rename = "M")]
                m: usize,
                #[serde(rename = "N_quad")]
                n_quad: usize,
                norm_upper: f64,
                norm_lower_mc: f64,
            }
            emit_json(
                &config.out,
                &Doc {
                    max_error: result.max_error,
                    m: result.m,
                    n_quad: result.n_quad,
                    norm_upper: result.norm_upper,
                    norm_lower_mc: result.norm_lower_mc,
                },
            )?;
            Ok(if result.pass { EXIT_OK } else { EXIT_TOLERANCE })
        }
        VerifySuite::Isometry { .. } => {
            let result = isometry_suite(
                &dom,
                config.trials,
                config.n,
                config.seed,
                config.tolerances.isometry,
            )?;
            emit_json(&config.out, &result)?;
            Ok(if result.pass { EXIT_OK } else { EXIT_TOLERANCE })
        }
        VerifySuite::Convergence { .. } => {
            let exp = expansion_for(&dom, config.m, config.grid)?;
            let op = SeriesOperator::new(dom, exp)?;
            let schedule: Vec<usize> = config
                .schedule
                .iter()
                .copied()
                .filter(|&m| m <= op.truncation())
                .collect();
            if schedule.is_empty() {
                return Err(Error::Config(format!(
                    "no schedule entry fits under the truncation {}",
                    op.truncation()
                )));
            }
            let result =
                convergence_suite(&op, &schedule, config.seed, config.tolerances.convergence_slack)?;
            emit_json(&config.out, &result)?;
            Ok(if result.pass { EXIT_OK } else { EXIT_TOLERANCE })
        }
    }
}

/// Probe points shared by external callers of the verify suites.
pub fn default_probes(count: usize, seed: u64) -> Vec<num_complex::Complex64> {
    seeded_probes(count, 0.8, seed ^ 0xe9)
}

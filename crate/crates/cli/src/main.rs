//! Command-line driver: spectra, heat-trace fits, residues, closed-form
//! coefficients and the verification suites.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use spectral_eta::asymptotics::{
    antisymmetrized_eta, brute_force_eta_from, brute_force_zeta_from, eta_residues, log_window, sample_heat_trace,
    FitReport, FitWindow, REFINED_MU_MAX, REFINED_WINDOW,
};
use spectral_eta::ball::{enumerate_spectrum, heat_tail_bound, write_csv, TraceKind, TraceOptions};
use spectral_eta::report::{round15, to_json};
use spectral_eta::theorems::TheoremReport;
use spectral_eta::verify::{self, Suite, VerifyConfig};
use spectral_eta::{BallConfig64, BallSpectrum64, Error};

#[derive(Parser)]
#[command(
    name = "spectral-eta",
    version,
    about = "Eta and zeta heat-trace asymptotics on the ball"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the ball spectrum below mu_max.
    Spectrum(Common),
    /// Sample and fit the eta or zeta heat trace.
    HeatTrace {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Kind::Eta)]
        kind: Kind,
        /// Print the sampled trace as two columns (t, trace) instead of the fit.
        #[arg(long)]
        emit_trace: bool,
    },
    /// Exact eta residues on the ball per unit epsilon.
    Residues(Common),
    /// Coefficient table and closed-form ball values.
    Theorems(Common),
    /// Run the invariant suites; exit 1 if any check fails.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Restrict to the named suites (repeatable).
        #[arg(long, value_enum)]
        suite: Vec<SuiteArg>,
        #[arg(long, default_value_t = 20_241)]
        seed: u64,
        #[arg(long, default_value_t = 0.03)]
        tol_a2: f64,
        #[arg(long, default_value_t = 0.05)]
        tol_a3: f64,
        #[arg(long, default_value_t = 0.01)]
        tol_a0_zeta: f64,
        #[arg(long, default_value_t = 0.03)]
        tol_a1_zeta: f64,
    },
}

#[derive(Args, Clone)]
struct Common {
    /// Even dimension m >= 4.
    #[arg(long, default_value_t = 4)]
    m: usize,
    /// Boundary parameter in psi_A = epsilon gamma_m + (m-1)/2.
    #[arg(long, allow_negative_numbers = true)]
    epsilon: Option<f64>,
    /// Spectral cutoff.
    #[arg(long)]
    mu_max: Option<f64>,
    /// Highest mode family; chosen from mu_max when omitted.
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    t_min: Option<f64>,
    #[arg(long)]
    t_max: Option<f64>,
    /// Log-spaced sample count in [t_min, t_max].
    #[arg(long)]
    samples: Option<usize>,
    /// Basis size of the fit.
    #[arg(long, default_value_t = 5)]
    n_terms: usize,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
    /// Plain pass/fail table (verify only).
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Eta,
    Zeta,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Clifford,
    Olver,
    Barnes,
    Constants,
    Residues,
    Spectral,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Clifford => Suite::Clifford,
            SuiteArg::Olver => Suite::Olver,
            SuiteArg::Barnes => Suite::Barnes,
            SuiteArg::Constants => Suite::Constants,
            SuiteArg::Residues => Suite::Residues,
            SuiteArg::Spectral => Suite::Spectral,
        }
    }
}

/// Fully resolved settings, echoed in every JSON output.
#[derive(Clone, Serialize)]
struct RunConfig {
    command: &'static str,
    m: usize,
    epsilon: f64,
    mu_max: f64,
    n_max: usize,
    t_window: (f64, f64),
    samples: usize,
    n_terms: usize,
    format: Format,
    out: Option<String>,
}

#[derive(Serialize)]
struct Output<'a, T: Serialize> {
    config: &'a RunConfig,
    result: T,
}

enum Failure {
    Usage(String),
    Runtime(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidDimension { .. } => Failure::Usage("m must be even ≥ 4".into()),
            Error::EpsilonOutOfRange { .. } => Failure::Usage("|epsilon| < (m-1)/2 required".into()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

struct Defaults {
    epsilon: f64,
    mu_max: f64,
    window: (f64, f64),
    format: Format,
    formats: &'static [Format],
}

fn resolve(command: &'static str, c: &Common, d: Defaults) -> Result<RunConfig, Failure> {
    let m = c.m;
    if m < 4 || !m.is_multiple_of(2) || m > 20 {
        return Err(Failure::Usage("m must be even with 4 <= m <= 20".into()));
    }
    let epsilon = c.epsilon.unwrap_or(d.epsilon);
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(epsilon.abs() < (m as f64 - 1.0) / 2.0) {
        return Err(Failure::Usage("|epsilon| < (m-1)/2 required".into()));
    }
    let mu_max = c.mu_max.unwrap_or(d.mu_max);
    if !(mu_max > 0.0 && mu_max.is_finite()) {
        return Err(Failure::Usage("mu_max must be positive".into()));
    }
    let t_window = (c.t_min.unwrap_or(d.window.0), c.t_max.unwrap_or(d.window.1));
    if !(t_window.0 > 0.0 && t_window.1 > t_window.0) {
        return Err(Failure::Usage("0 < t_min < t_max required".into()));
    }
    let samples = c.samples.unwrap_or(40);
    if c.n_terms == 0 || c.n_terms > spectral_eta::asymptotics::MAX_TERMS || samples < c.n_terms {
        return Err(Failure::Usage(format!(
            "need 1 <= n_terms <= {} and samples >= n_terms",
            spectral_eta::asymptotics::MAX_TERMS
        )));
    }
    let format = c.format.unwrap_or(d.format);
    if !d.formats.contains(&format) {
        return Err(Failure::Usage(format!("format not supported by {}", command)));
    }
    Ok(RunConfig {
        command,
        m,
        epsilon: round15(epsilon),
        mu_max: round15(mu_max),
        n_max: c.n_max.unwrap_or_else(|| BallConfig64::sufficient_n_max(m, mu_max)),
        t_window: (round15(t_window.0), round15(t_window.1)),
        samples,
        n_terms: c.n_terms,
        format,
        out: c.out.as_ref().map(|p| p.display().to_string()),
    })
}

fn sink(cfg: &RunConfig) -> Result<Box<dyn Write>, Failure> {
    Ok(match &cfg.out {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit_json<T: Serialize>(cfg: &RunConfig, result: T) -> Result<(), Failure> {
    let s = to_json(&Output { config: cfg, result })?;
    sink(cfg)?.write_all(s.as_bytes())?;
    Ok(())
}

fn spectrum_for(cfg: &RunConfig, epsilon: f64) -> Result<BallSpectrum64, Failure> {
    let ball = BallConfig64::new(cfg.m, epsilon, cfg.mu_max, cfg.n_max)?;
    Ok(enumerate_spectrum(&ball)?)
}

fn window(cfg: &RunConfig) -> FitWindow {
    FitWindow {
        t_min: cfg.t_window.0,
        t_max: cfg.t_window.1,
        samples: cfg.samples,
        n_terms: cfg.n_terms,
    }
}

#[derive(Serialize)]
struct TailBound {
    t: f64,
    zeta: f64,
    eta: f64,
}

fn cmd_spectrum(c: &Common) -> Result<(), Failure> {
    let cfg = resolve(
        "spectrum",
        c,
        Defaults {
            epsilon: 0.1,
            mu_max: 40.0,
            window: REFINED_WINDOW,
            format: Format::Csv,
            formats: &[Format::Csv, Format::Json],
        },
    )?;
    let spec = spectrum_for(&cfg, cfg.epsilon)?;
    if cfg.format == Format::Csv {
        write_csv(&spec, sink(&cfg)?)?;
        return Ok(());
    }
    #[derive(Serialize)]
    struct SpectrumOut {
        spectrum: spectral_eta::ball::SpectrumReport,
        tail_bounds: Vec<TailBound>,
    }
    let tail_bounds = [cfg.t_window.0, cfg.t_window.1]
        .iter()
        .map(|&t| TailBound {
            t,
            zeta: round15(heat_tail_bound(cfg.m, cfg.mu_max, t, TraceKind::Zeta, 0.0)),
            eta: round15(heat_tail_bound(cfg.m, cfg.mu_max, t, TraceKind::Eta, 0.0)),
        })
        .collect();
    emit_json(
        &cfg,
        SpectrumOut {
            spectrum: spec.report(),
            tail_bounds,
        },
    )
}

fn cmd_heat_trace(c: &Common, kind: Kind, emit_trace: bool) -> Result<(), Failure> {
    let cfg = resolve(
        "heat-trace",
        c,
        Defaults {
            epsilon: match kind {
                Kind::Eta => 0.02,
                Kind::Zeta => 0.0,
            },
            mu_max: REFINED_MU_MAX,
            window: REFINED_WINDOW,
            format: Format::Json,
            formats: &[Format::Json],
        },
    )?;
    let w = window(&cfg);
    let plus = spectrum_for(&cfg, cfg.epsilon)?;
    let unchecked = TraceOptions {
        shift: 0.0,
        tol: f64::INFINITY,
    };
    match kind {
        Kind::Eta => {
            if cfg.epsilon == 0.0 {
                return Err(Failure::Usage("the eta fit needs epsilon != 0".into()));
            }
            let minus = spectrum_for(&cfg, -cfg.epsilon)?;
            if emit_trace {
                let ts = log_window(w.t_min, w.t_max, w.samples)?;
                return write_columns(&cfg, &antisymmetrized_eta(&plus, &minus, &ts, unchecked)?);
            }
            let r = brute_force_eta_from(&plus, &minus, w)?;
            #[derive(Serialize)]
            struct EtaOut {
                fit: FitReport,
                a2_eta_over_epsilon: f64,
                a3_eta_over_epsilon: f64,
            }
            emit_json(
                &cfg,
                EtaOut {
                    fit: FitReport::new(&r.fit, r.tail_bound),
                    a2_eta_over_epsilon: round15(r.a2_over_eps),
                    a3_eta_over_epsilon: round15(r.a3_over_eps),
                },
            )
        }
        Kind::Zeta => {
            if emit_trace {
                let ts = log_window(w.t_min, w.t_max, w.samples)?;
                return write_columns(&cfg, &sample_heat_trace(&plus, TraceKind::Zeta, &ts, unchecked)?);
            }
            let r = brute_force_zeta_from(&plus, w)?;
            emit_json(&cfg, FitReport::new(&r.fit, r.tail_bound))
        }
    }
}

fn write_columns(cfg: &RunConfig, rows: &[(f64, f64)]) -> Result<(), Failure> {
    let mut out = sink(cfg)?;
    for (t, v) in rows {
        writeln!(out, "{:.14e} {:.14e}", t, v)?;
    }
    Ok(())
}

fn cmd_residues(c: &Common) -> Result<(), Failure> {
    let cfg = resolve(
        "residues",
        c,
        Defaults {
            epsilon: 1.0,
            mu_max: 40.0,
            window: REFINED_WINDOW,
            format: Format::Json,
            formats: &[Format::Json, Format::Csv],
        },
    )?;
    let r = eta_residues(cfg.m)?.to_json();
    if cfg.format == Format::Json {
        return emit_json(&cfg, r);
    }
    let mut out = sink(&cfg)?;
    writeln!(out, "residue,exact_per_epsilon,value_per_epsilon")?;
    for (name, v) in [
        ("res_eta_m_minus_2", &r.res_eta_m_minus_2),
        ("res_eta_m_minus_3", &r.res_eta_m_minus_3),
    ] {
        writeln!(out, "{},{},{}", name, v.exact, v.value)?;
    }
    Ok(())
}

fn cmd_theorems(c: &Common) -> Result<(), Failure> {
    let cfg = resolve(
        "theorems",
        c,
        Defaults {
            epsilon: 0.1,
            mu_max: 40.0,
            window: REFINED_WINDOW,
            format: Format::Json,
            formats: &[Format::Json],
        },
    )?;
    emit_json(&cfg, TheoremReport::ball(cfg.m, cfg.epsilon)?)
}

fn cmd_verify(c: &Common, suites: &[SuiteArg], seed: u64, tols: [f64; 4]) -> Result<(), Failure> {
    let cfg = resolve(
        "verify",
        c,
        Defaults {
            epsilon: 0.02,
            mu_max: REFINED_MU_MAX,
            window: REFINED_WINDOW,
            format: Format::Table,
            formats: &[Format::Table, Format::Json],
        },
    )?;
    let vc = VerifyConfig {
        m: cfg.m,
        epsilon: cfg.epsilon,
        mu_max: cfg.mu_max,
        window: window(&cfg),
        seed,
        tol_a2: tols[0],
        tol_a3: tols[1],
        tol_a0_zeta: tols[2],
        tol_a1_zeta: tols[3],
        ..VerifyConfig::default()
    };
    let suites: Vec<Suite> = if suites.is_empty() {
        Suite::ALL.to_vec()
    } else {
        suites.iter().map(|&s| s.into()).collect()
    };
    let report = verify::run(&vc, &suites);
    if cfg.format == Format::Json {
        emit_json(&cfg, &report)?;
    } else {
        let mut out = sink(&cfg)?;
        writeln!(
            out,
            "verify m={} epsilon={} mu_max={} t=[{}, {}] samples={} n_terms={} seed={}",
            cfg.m, cfg.epsilon, cfg.mu_max, cfg.t_window.0, cfg.t_window.1, cfg.samples, cfg.n_terms, seed
        )?;
        out.write_all(report.table().as_bytes())?;
    }
    if report.passed {
        Ok(())
    } else {
        for c in report.failures() {
            eprintln!("failed: {} / {}: {}", c.suite, c.name, c.detail);
        }
        Err(Failure::Verification)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.command {
        Command::Spectrum(c) => cmd_spectrum(c),
        Command::HeatTrace {
            common,
            kind,
            emit_trace,
        } => cmd_heat_trace(common, *kind, *emit_trace),
        Command::Residues(c) => cmd_residues(c),
        Command::Theorems(c) => cmd_theorems(c),
        Command::Verify {
            common,
            suite,
            seed,
            tol_a2,
            tol_a3,
            tol_a0_zeta,
            tol_a1_zeta,
        } => cmd_verify(common, suite, *seed, [*tol_a2, *tol_a3, *tol_a0_zeta, *tol_a1_zeta]),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
    }
}

//! The `divcalc` command line.
//!
//! Exit codes: 0 on success, 1 on usage errors (bad flags, unparsable
//! expressions, invalid parameter combinations), 2 on domain errors such as
//! a singularity on the interval or `ω` outside the radius of convergence.
//! Domain errors still print a JSON document describing the failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::contour::ContourPath;
use crate::expr::{AnalyticFunction, ExprError};
use crate::interp::{
    evaluate_divergent, fourier_closed_form, fpi_halfline_fractional, fpi_halfline_integer, DivergentIntegralSpec,
    InterpError, Standard,
};
use crate::transforms::{
    finite_sum_reconstruction, hilbert_series, sin2_over_x2_terms, stieltjes_series, SeriesEvaluation, TransformError,
    DEFAULT_MAX_TERMS,
};
use crate::verify::{self, Suite};

#[derive(Parser, Debug)]
#[command(name = "divcalc", version, about = "Divergent integrals through contour representations")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Absolute quadrature tolerance.
    #[arg(long, global = true, env = "DIVCALC_TOL", default_value_t = 1e-10)]
    tol: f64,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    output: OutputFormat,

    /// Write the contour paths used to this file as JSON.
    #[arg(long, global = true, value_name = "FILE")]
    emit_path_json: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Human,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum InterpArg {
    Ubv,
    Lbv,
    Fpi,
}

impl From<InterpArg> for Standard {
    fn from(a: InterpArg) -> Self {
        match a {
            InterpArg::Ubv => Standard::Ubv,
            InterpArg::Lbv => Standard::Lbv,
            InterpArg::Fpi => Standard::Fpi,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Preset {
    #[value(name = "sin2-over-x2")]
    Sin2OverX2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Identities,
    Stieltjes,
    Hilbert,
    Fourier,
    Remainder,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(a: SuiteArg) -> Self {
        match a {
            SuiteArg::Identities => Suite::Identities,
            SuiteArg::Stieltjes => Suite::Stieltjes,
            SuiteArg::Hilbert => Suite::Hilbert,
            SuiteArg::Fourier => Suite::Fourier,
            SuiteArg::Remainder => Suite::Remainder,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Args, Debug)]
struct Integrand {
    /// Analytic function of z, e.g. "exp(-z^2)". `x` is accepted for `z`.
    #[arg(long = "f", value_name = "EXPR")]
    f: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// ∫_a^b f(x)(x - x0)^(-order) dx under one interpretation.
    Divergent {
        #[command(flatten)]
        integrand: Integrand,
        #[arg(long, allow_hyphen_values = true)]
        x0: f64,
        #[arg(long)]
        order: u32,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_limit)]
        a: f64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_limit)]
        b: f64,
        #[arg(long, value_enum)]
        interp: InterpArg,
        /// Frequency σ of an e^(iσx) factor; infinite tails then follow rays.
        #[arg(long, allow_hyphen_values = true)]
        sigma: Option<f64>,
    },
    /// ∫_ℝ f(x)/(ω² + x²) dx by term-by-term integration.
    Stieltjes {
        #[command(flatten)]
        integrand: Integrand,
        #[arg(long)]
        omega: f64,
        #[arg(long, value_enum)]
        interp: InterpArg,
        #[arg(long, default_value_t = DEFAULT_MAX_TERMS)]
        max_terms: usize,
    },
    /// PV∫_ℝ f(x)/(ω - x) dx by term-by-term integration.
    Hilbert {
        #[command(flatten)]
        integrand: Integrand,
        #[arg(long, allow_hyphen_values = true)]
        omega: f64,
        #[arg(long, value_enum)]
        interp: InterpArg,
        #[arg(long, default_value_t = DEFAULT_MAX_TERMS)]
        max_terms: usize,
    },
    /// Closed form of ∫_ℝ e^(iσx)(x - x0)^(-n) dx.
    Fourier {
        #[arg(long, allow_hyphen_values = true)]
        sigma: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        x0: f64,
        #[arg(long)]
        order: u32,
        #[arg(long, value_enum)]
        interp: InterpArg,
    },
    /// Sum of divergent integrals from a preset expansion.
    FiniteSum {
        #[arg(long, value_enum)]
        preset: Preset,
        #[arg(long, value_enum)]
        interp: InterpArg,
    },
    /// Finite part of ∫_0^a f(x) x^(-(m+ν)) dx.
    Halfline {
        #[command(flatten)]
        integrand: Integrand,
        #[arg(long)]
        a: f64,
        #[arg(long)]
        m: u32,
        /// Fractional part of the power, in (0, 1).
        #[arg(long)]
        nu: Option<f64>,
    },
    /// Run the built-in verification suites.
    Verify {
        #[arg(value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
    },
}

fn parse_limit(s: &str) -> Result<f64, String> {
    match s.to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" | "+infinity" => Ok(f64::INFINITY),
        "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
        other => other.parse::<f64>().map_err(|e| format!("{e}")),
    }
}

/// Result document.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Document {
    pub value_re: f64,
    pub value_im: f64,
    pub abs_error_estimate: f64,
    pub interpretation: String,
    pub diagnostics: DocDiagnostics,
}

#[derive(Clone, Debug, Default, Serialize, PartialEq)]
pub struct DocDiagnostics {
    pub cutoff: Option<f64>,
    pub rho: Option<f64>,
    pub terms_used: Option<usize>,
    pub series_value: Option<[f64; 2]>,
    pub correction: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total: Option<[f64; 2]>,
    pub converged: bool,
    /// `null` when unbounded.
    pub radius_bound: Option<f64>,
}

#[derive(Serialize)]
struct ErrorDocument<'a> {
    error: &'a str,
    message: String,
}

/// Output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Domain { kind: &'static str, message: String },
}

impl From<ExprError> for Failure {
    fn from(e: ExprError) -> Self {
        match e {
            ExprError::Syntax { .. } | ExprError::UnknownIdentifier { .. } => Failure::Usage(e.to_string()),
            other => Failure::Domain { kind: "evaluation", message: other.to_string() },
        }
    }
}

impl From<InterpError> for Failure {
    fn from(e: InterpError) -> Self {
        let kind = match &e {
            InterpError::InvalidSpec(_) => return Failure::Usage(e.to_string()),
            InterpError::SingularityOnInterval(_) => "singularity_on_interval",
            InterpError::SingularityInsideBump { .. } => "singularity_inside_bump",
            InterpError::NonConvergentTail { .. } => "non_convergent_tail",
            InterpError::ExtrapolationFailed { .. } => "extrapolation_failed",
            InterpError::Expr(inner) => return inner.clone().into(),
            InterpError::Contour(_) => "quadrature",
            _ => "interpretation",
        };
        Failure::Domain { kind, message: e.to_string() }
    }
}

impl From<TransformError> for Failure {
    fn from(e: TransformError) -> Self {
        let kind = match &e {
            TransformError::InvalidParameter(_) => return Failure::Usage(e.to_string()),
            TransformError::Interp(inner) => return inner.clone().into(),
            TransformError::Expr(inner) => return inner.clone().into(),
            TransformError::OutsideRadius { .. } => "outside_radius",
            TransformError::TermGrowth { .. } => "term_growth",
            TransformError::UnknownGeometry => "unknown_geometry",
            TransformError::NonConvergentTail => "non_convergent_tail",
            TransformError::SingularityOnAxis(_) => "singularity_on_interval",
            TransformError::Contour(_) => "quadrature",
        };
        Failure::Domain { kind, message: e.to_string() }
    }
}

/// Parses `args` (program name first) and runs the request.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    execute(&cli)
}

fn execute(cli: &Cli) -> Outcome {
    if !(cli.tol > 0.0) || !cli.tol.is_finite() {
        return usage(format!("--tol must be positive, got {}", cli.tol));
    }
    if let Command::Verify { suite } = cli.command {
        let report = verify::run(suite.into());
        let code = if report.all_passed() { 0 } else { 2 };
        let stdout = match cli.output {
            OutputFormat::Json => json_line(&report),
            OutputFormat::Csv => {
                let mut s = String::from("suite,name,error,tolerance,passed\n");
                for c in &report.checks {
                    let suite = serde_json::to_value(c.suite).map(|v| v.as_str().unwrap_or("").to_owned()).unwrap_or_default();
                    let err = c.error.map(|e| format!("{e:e}")).unwrap_or_default();
                    let _ = writeln!(s, "{suite},\"{}\",{err},{:e},{}", c.name.replace('"', "\"\""), c.tolerance, c.passed);
                }
                s
            }
            OutputFormat::Human => {
                let mut s = String::new();
                for c in &report.checks {
                    let mark = if c.passed { "PASS" } else { "FAIL" };
                    let detail = match (c.error, &c.message) {
                        (Some(e), _) => format!(" (error {e:.3e}, tol {:.0e})", c.tolerance),
                        (None, Some(m)) => format!(" ({m})"),
                        (None, None) => String::new(),
                    };
                    let _ = writeln!(s, "[{mark}] {}{detail}", c.name);
                }
                let _ = writeln!(s, "{} passed, {} failed", report.passed, report.failed);
                s
            }
        };
        return Outcome { code, stdout, stderr: String::new() };
    }

    match compute(cli) {
        Ok((doc, paths)) => {
            if let (Some(file), Some(paths)) = (&cli.emit_path_json, paths) {
                if let Err(e) = std::fs::write(file, json_line(&paths)) {
                    return Outcome { code: 1, stdout: String::new(), stderr: format!("cannot write {}: {e}\n", file.display()) };
                }
            }
            Outcome { code: 0, stdout: render(&doc, cli.output), stderr: String::new() }
        }
        Err(Failure::Usage(message)) => usage(message),
        Err(Failure::Domain { kind, message }) => Outcome {
            code: 2,
            stdout: json_line(&ErrorDocument { error: kind, message: message.clone() }),
            stderr: format!("error: {message}\n"),
        },
    }
}

fn usage(message: String) -> Outcome {
    Outcome { code: 1, stdout: String::new(), stderr: format!("error: {message}\n") }
}

fn json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("documents serialise");
    s.push('\n');
    s
}

fn parse_f(text: &str) -> Result<AnalyticFunction, Failure> {
    Ok(AnalyticFunction::parse(text)?)
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn compute(cli: &Cli) -> Result<(Document, Option<Vec<ContourPath>>), Failure> {
    let tol = cli.tol;
    match &cli.command {
        Command::Divergent { integrand, x0, order, a, b, interp, sigma } => {
            let f = parse_f(&integrand.f)?;
            let mut spec = DivergentIntegralSpec::new(f, *x0, *order, *a, *b)?;
            if let Some(s) = sigma {
                spec = spec.with_oscillation(*s);
            }
            let standard = Standard::from(*interp);
            let r = evaluate_divergent(&spec, &standard.interpretation(), tol)?;
            let doc = Document {
                value_re: r.value.re,
                value_im: r.value.im,
                abs_error_estimate: r.abs_error_estimate,
                interpretation: standard.name().into(),
                diagnostics: DocDiagnostics {
                    cutoff: r.diagnostics.window.map(|(lo, hi)| (-lo).max(hi)),
                    rho: Some(r.diagnostics.rho),
                    converged: r.diagnostics.converged,
                    ..DocDiagnostics::default()
                },
            };
            Ok((doc, Some(r.diagnostics.paths)))
        }
        Command::Stieltjes { integrand, omega, interp, max_terms } => {
            let f = parse_f(&integrand.f)?;
            let s = stieltjes_series(&f, *omega, (*interp).into(), *max_terms, tol)?;
            Ok((series_document(&s), None))
        }
        Command::Hilbert { integrand, omega, interp, max_terms } => {
            let f = parse_f(&integrand.f)?;
            let s = hilbert_series(&f, *omega, (*interp).into(), *max_terms, tol)?;
            Ok((series_document(&s), None))
        }
        Command::Fourier { sigma, x0, order, interp } => {
            let standard = Standard::from(*interp);
            let v = fourier_closed_form(standard, *sigma, *x0, *order)?;
            let doc = Document {
                value_re: v.re,
                value_im: v.im,
                abs_error_estimate: 0.0,
                interpretation: standard.name().into(),
                diagnostics: DocDiagnostics { converged: true, ..DocDiagnostics::default() },
            };
            Ok((doc, None))
        }
        Command::FiniteSum { preset, interp } => {
            let terms = match preset {
                Preset::Sin2OverX2 => sin2_over_x2_terms(),
            };
            let standard = Standard::from(*interp);
            let r = finite_sum_reconstruction(&terms, &standard.interpretation(), tol)?;
            let doc = Document {
                value_re: r.value.re,
                value_im: r.value.im,
                abs_error_estimate: r.abs_error_estimate,
                interpretation: standard.name().into(),
                diagnostics: DocDiagnostics {
                    terms_used: Some(terms.len()),
                    series_value: Some(pair(r.value)),
                    correction: Some([0.0, 0.0]),
                    converged: r.converged,
                    ..DocDiagnostics::default()
                },
            };
            Ok((doc, None))
        }
        Command::Halfline { integrand, a, m, nu } => {
            let f = parse_f(&integrand.f)?;
            let r = match nu {
                Some(nu) => fpi_halfline_fractional(&f, *a, *m, *nu, tol)?,
                None => fpi_halfline_integer(&f, *a, *m, tol)?,
            };
            let doc = Document {
                value_re: r.value.re,
                value_im: r.value.im,
                abs_error_estimate: r.abs_error_estimate,
                interpretation: "FPI".into(),
                diagnostics: DocDiagnostics {
                    rho: Some(r.diagnostics.rho),
                    converged: r.diagnostics.converged,
                    ..DocDiagnostics::default()
                },
            };
            Ok((doc, Some(r.diagnostics.paths)))
        }
        Command::Verify { .. } => unreachable!("handled before compute"),
    }
}

fn series_document(s: &SeriesEvaluation) -> Document {
    Document {
        value_re: s.total.re,
        value_im: s.total.im,
        abs_error_estimate: s.abs_error_estimate,
        interpretation: s.interpretation.name().into(),
        diagnostics: DocDiagnostics {
            cutoff: Some(s.cutoff),
            rho: s.rhos.first().copied(),
            terms_used: Some(s.terms_used),
            series_value: Some(pair(s.series_value)),
            correction: Some(pair(s.correction)),
            total: Some(pair(s.total)),
            converged: s.converged,
            radius_bound: finite(s.radius_bound),
        },
    }
}

fn render(doc: &Document, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => json_line(doc),
        OutputFormat::Csv => {
            let d = &doc.diagnostics;
            let opt = |x: Option<f64>| x.map(|v| format!("{v:?}")).unwrap_or_default();
            let (sre, sim) = d.series_value.map_or((None, None), |p| (Some(p[0]), Some(p[1])));
            let (cre, cim) = d.correction.map_or((None, None), |p| (Some(p[0]), Some(p[1])));
            format!(
                "value_re,value_im,abs_error_estimate,interpretation,cutoff,rho,terms_used,series_re,series_im,correction_re,correction_im,converged,radius_bound\n\
                 {:?},{:?},{:?},{},{},{},{},{},{},{},{},{},{}\n",
                doc.value_re,
                doc.value_im,
                doc.abs_error_estimate,
                doc.interpretation,
                opt(d.cutoff),
                opt(d.rho),
                d.terms_used.map(|n| n.to_string()).unwrap_or_default(),
                opt(sre),
                opt(sim),
                opt(cre),
                opt(cim),
                d.converged,
                opt(d.radius_bound),
            )
        }
        OutputFormat::Human => {
            let d = &doc.diagnostics;
            let mut s = format!(
                "{} value: {}  (± {:.1e})\n",
                doc.interpretation,
                human_complex(doc.value_re, doc.value_im),
                doc.abs_error_estimate
            );
            if let (Some(series), Some(corr)) = (d.series_value, d.correction) {
                let _ = writeln!(s, "series:     {}", human_complex(series[0], series[1]));
                let _ = writeln!(s, "correction: {}", human_complex(corr[0], corr[1]));
            }
            if let Some(n) = d.terms_used {
                let _ = writeln!(s, "terms used: {n}");
            }
            if let Some(rho) = d.rho {
                let _ = writeln!(s, "rho:        {rho}");
            }
            if let Some(c) = d.cutoff {
                let _ = writeln!(s, "cutoff:     {c}");
            }
            if let Some(r) = d.radius_bound {
                let _ = writeln!(s, "radius:     {r}");
            }
            let _ = writeln!(s, "converged:  {}", d.converged);
            s
        }
    }
}

fn human_complex(re: f64, im: f64) -> String {
    let num = |x: f64| if x != 0.0 && x.abs() < 1e-4 { format!("{x:e}") } else { format!("{x}") };
    let sign = if im < 0.0 { '-' } else { '+' };
    format!("{} {sign} {}i", num(re), num(im.abs()))
}

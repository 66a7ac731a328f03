use std::fs::File;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use lss_core::expcheb::{
    laguerre_chebyshev, laguerre_markov_coefficients, mkd_upper_bound, remez_chebyshev, samples,
    sklyarov_bounds, ExponentSpectrum, RemezOptions,
};
use lss_core::jsr::{jsr_bounds, JsrOptions, Verdict, DEFAULT_BUDGET, DEFAULT_MAX_DEPTH};
use lss_core::linalg::{MatrixSet, NormKind, DEFAULT_EIGEN_TOL};
use lss_core::lyapunov::{initial_bounds, lyapunov_bisect, single_shift_test, BisectOptions};
use lss_core::stepsize::{
    family_step_bound, kappa_from_chebyshev, uniform_step_bound, StepMethod, StepOptions,
};
use lss_core::Error;

use crate::input::load_matrix_set;
use crate::report::{Report, Text};

#[derive(Parser, Debug)]
#[command(
    name = "lss",
    version,
    about = "Stability analysis of linear switching systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Tolerances {
    /// Remez stopping tolerance on the equioscillation level
    #[arg(long, default_value_t = 1e-9)]
    pub tol_remez: f64,
    /// Imaginary-part tolerance for the real-spectrum check
    #[arg(long, default_value_t = DEFAULT_EIGEN_TOL)]
    pub tol_eigen: f64,
    /// Exponents closer than this are merged into one block
    #[arg(long, default_value_t = lss_core::expcheb::DEFAULT_CLUSTER_TOL)]
    pub tol_cluster: f64,
}

impl Tolerances {
    fn check(&self) -> Result<()> {
        for (name, v) in [
            ("--tol-remez", self.tol_remez),
            ("--tol-eigen", self.tol_eigen),
            ("--tol-cluster", self.tol_cluster),
        ] {
            if !(v > 0.0) {
                bail!("{name} must be positive");
            }
        }
        Ok(())
    }

    fn remez(&self) -> RemezOptions {
        RemezOptions::with_tol(self.tol_remez)
    }

    fn step(&self) -> StepOptions {
        StepOptions {
            remez: self.remez(),
            eigen_tol: self.tol_eigen,
            cluster_tol: self.tol_cluster,
            ..StepOptions::default()
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct SearchArgs {
    /// Operator norm for the product search: 1, 2 or inf
    #[arg(long, default_value = "2", value_parser = parse_norm)]
    pub norm: NormKind,
    /// Maximum number of products examined
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Maximum product length
    #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
    pub max_depth: usize,
}

impl SearchArgs {
    fn options(&self) -> JsrOptions {
        JsrOptions {
            norm: self.norm,
            budget: self.budget,
            max_depth: self.max_depth,
        }
    }
}

fn parse_norm(s: &str) -> std::result::Result<NormKind, String> {
    s.parse()
        .map_err(|_| format!("expected 1, 2 or inf, got `{s}`"))
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum MethodArg {
    Exact,
    Prop2,
    Theorem5,
    Theorem10,
}

impl From<MethodArg> for StepMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Exact => StepMethod::Prob3Exact,
            MethodArg::Prop2 => StepMethod::Prop2Lower,
            MethodArg::Theorem5 => StepMethod::Theorem5,
            MethodArg::Theorem10 => StepMethod::Theorem10,
        }
    }
}

fn pick_method(method: Option<MethodArg>, fast: bool) -> StepMethod {
    match (method, fast) {
        (Some(m), _) => m.into(),
        (None, true) => StepMethod::Theorem5,
        (None, false) => StepMethod::Prob3Exact,
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Bracket the Lyapunov exponent, or test a single shift with --shift
    Analyze {
        input: PathBuf,
        /// Accuracy of the bracket
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        /// Only decide between σ ≥ c and σ < c + eps/3 at this c
        #[arg(long, allow_negative_numbers = true)]
        shift: Option<f64>,
        /// Use the closed-form step bound instead of the exact one
        #[arg(long)]
        fast: bool,
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        tol: Tolerances,
        /// Machine-readable report
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certified Euler step for a family, or the uniform bound from --radius/--dim
    Stepsize {
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        /// Work with the shifted family A - cI
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        shift: f64,
        #[arg(long)]
        fast: bool,
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
        /// Spectral radius bound for the uniform step
        #[arg(long)]
        radius: Option<f64>,
        /// Dimension for the uniform step
        #[arg(long)]
        dim: Option<usize>,
        #[command(flatten)]
        tol: Tolerances,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bounds on the joint spectral radius
    Jsr {
        input: PathBuf,
        /// Relative accuracy of the bounds
        #[arg(long, default_value_t = 0.01)]
        delta: f64,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exponential Chebyshev polynomial for the exponents --h, or the Laguerre case --d
    Chebyshev {
        #[arg(long, value_delimiter = ',', conflicts_with = "d")]
        h: Vec<f64>,
        #[arg(long)]
        d: Option<usize>,
        /// Also solve the step problem and mark the feasible samples
        #[arg(long)]
        eps: Option<f64>,
        /// Right end of the sample range; defaults past the last alternance point
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long, default_value_t = 1001)]
        points: usize,
        /// Samples t, T, T', feasible
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Alternance points; defaults to the csv path with `.alternance.csv`
        #[arg(long)]
        alternance: Option<PathBuf>,
        #[command(flatten)]
        tol: Tolerances,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Markov constants of the Laguerre-weight Chebyshev polynomials
    Constants {
        /// Dimension or range, e.g. 5 or 2..10
        #[arg(long, default_value = "2..10", value_parser = parse_range)]
        d: RangeInclusive<usize>,
        /// Derivative order
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        tol: Tolerances,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_range(s: &str) -> std::result::Result<RangeInclusive<usize>, String> {
    let bad = || format!("expected N or A..B, got `{s}`");
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.trim_start_matches('=')),
        None => (s, s),
    };
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a == 0 || a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Verdict,
    Inconclusive,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Verdict => 0,
            Status::Inconclusive => 2,
        }
    }
}

pub struct Outcome {
    pub text: String,
    pub report: Report,
    pub status: Status,
    pub out: Option<PathBuf>,
}

pub fn run(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Analyze {
            input,
            eps,
            shift,
            fast,
            method,
            search,
            tol,
            out,
        } => {
            tol.check()?;
            if !(*eps > 0.0) {
                bail!("--eps must be positive");
            }
            let set = load_matrix_set(input)?;
            let opts = BisectOptions {
                step: tol.step(),
                method: pick_method(*method, *fast),
                jsr: search.options(),
                ..BisectOptions::default()
            };
            let (text, mut report, status) = match shift {
                Some(c) => analyze_shift(&set, *c, *eps, &opts)?,
                None => analyze(&set, *eps, &opts)?,
            };
            report.set("input", input.display().to_string());
            report.set("norm", search.norm.to_string());
            report.set("budget", search.budget);
            Ok(Outcome {
                text,
                report,
                status,
                out: out.clone(),
            })
        }
        Command::Stepsize {
            input,
            eps,
            shift,
            fast,
            method,
            radius,
            dim,
            tol,
            out,
        } => {
            tol.check()?;
            let method = pick_method(*method, *fast);
            let (s, mut report) = match (input, radius, dim) {
                (Some(path), None, None) => {
                    let set = load_matrix_set(path)?;
                    let mut r = Report::new("stepsize");
                    r.set("input", path.display().to_string());
                    r.set_f64("shift", *shift);
                    (
                        family_step_bound(&set, *shift, *eps, method, &tol.step())?,
                        r,
                    )
                }
                (None, Some(r), Some(d)) => {
                    // The exact methods need a spectrum; a radius alone gets the closed forms.
                    let method = match method {
                        StepMethod::Theorem10 => StepMethod::Theorem10,
                        _ => StepMethod::Theorem5,
                    };
                    let mut rep = Report::new("stepsize");
                    rep.set_f64("radius", *r);
                    rep.set("dim", *d);
                    (uniform_step_bound(*r, *eps, *d, method, &tol.remez())?, rep)
                }
                _ => bail!("give either a matrix file or both --radius and --dim"),
            };
            report.set_f64("epsilon", s.epsilon);
            report.set_f64("tau", s.tau);
            report.set("tau_method", s.method.name());
            let mut t = Text::default();
            t.kv("step", format!("{:.6e}", s.tau));
            t.kv("method", s.method);
            t.kv("epsilon", s.epsilon);
            if let Some(w) = s.witness {
                report.set_f64("witness", w);
                t.kv("minimizer", format!("{w:.6}"));
            }
            let text = t.into_string();
            report.set("status", "ok");
            Ok(Outcome {
                text,
                report,
                status: Status::Verdict,
                out: out.clone(),
            })
        }
        Command::Jsr {
            input,
            delta,
            search,
            out,
        } => {
            let set = load_matrix_set(input)?;
            let b = jsr_bounds(&set, *delta, &search.options())?;
            let word = product_name(&set, &b.best_product);
            let mut r = Report::new("jsr");
            r.set("input", input.display().to_string());
            r.set_f64("delta", *delta);
            r.set("norm", search.norm.to_string());
            r.set_f64("lower", b.lower);
            r.set_f64("upper", b.upper);
            r.set("best_product", word.clone());
            r.set("depth", b.depth_reached);
            r.set("nodes", b.nodes_explored);
            let status = if b.inconclusive {
                Status::Inconclusive
            } else {
                Status::Verdict
            };
            r.set("status", if b.inconclusive { "inconclusive" } else { "ok" });
            let mut t = Text::default();
            t.kv(
                "joint spectral radius",
                format!("[{:.8}, {:.8}]", b.lower, b.upper),
            );
            t.kv("best product", &word);
            t.kv("depth", b.depth_reached);
            t.kv("nodes", b.nodes_explored);
            if b.inconclusive {
                t.line(format!(
                    "search stopped before reaching relative accuracy {delta}"
                ));
            }
            Ok(Outcome {
                text: t.into_string(),
                report: r,
                status,
                out: out.clone(),
            })
        }
        Command::Chebyshev {
            h,
            d,
            eps,
            t_max,
            points,
            csv,
            alternance,
            tol,
            out,
        } => {
            tol.check()?;
            let cheb = match d {
                Some(d) => laguerre_chebyshev(*d, &tol.remez())?,
                None if !h.is_empty() => {
                    let spec = ExponentSpectrum::with_cluster_tol(h, tol.tol_cluster)?;
                    remez_chebyshev(&spec, &tol.remez())?
                }
                None => bail!("give the exponents with --h or a dimension with --d"),
            };
            let nodes = cheb.alternance();
            let last = nodes.last().copied().unwrap_or(0.0);
            let t_max = t_max.unwrap_or_else(|| (1.5 * last).max(3.0 / cheb.spectrum().max()));
            let mut r = Report::new("chebyshev");
            let mut t = Text::default();
            r.set("exponents", fmt_list(cheb.spectrum().exponents()));
            r.set("coefficients", fmt_list(cheb.coefficients()));
            r.set("alternance", fmt_list(&nodes));
            r.set_f64("equioscillation_level", cheb.equioscillation_level());
            r.set_f64("tail_cutoff", cheb.tail_cutoff());
            r.set("iterations", cheb.iterations());
            r.set_f64("markov_1", cheb.markov(1));
            r.set_f64("markov_2", cheb.markov(2));
            t.kv("exponents", fmt_list(cheb.spectrum().exponents()));
            t.kv("alternance", fmt_list(&nodes));
            t.kv("M_1", format!("{:.6}", cheb.markov(1)));
            t.kv("M_2", format!("{:.6}", cheb.markov(2)));
            t.kv("Remez iterations", cheb.iterations());
            if let Some(e) = eps {
                let k = kappa_from_chebyshev(&cheb, *e)?;
                r.set_f64("epsilon", *e);
                r.set_f64("kappa", k.tau);
                t.kv("kappa", format!("{:.6e}", k.tau));
            }
            if let Some(path) = csv {
                write_samples(path, &samples(&cheb, t_max, *points, *eps))?;
                let alt = alternance
                    .clone()
                    .unwrap_or_else(|| path.with_extension("alternance.csv"));
                write_alternance(&alt, &nodes, |x| cheb.evaluate(x, 0))?;
                r.set("csv", path.display().to_string());
                r.set("alternance_csv", alt.display().to_string());
            }
            r.set("status", "ok");
            Ok(Outcome {
                text: t.into_string(),
                report: r,
                status: Status::Verdict,
                out: out.clone(),
            })
        }
        Command::Constants {
            d,
            k,
            csv,
            tol,
            out,
        } => {
            tol.check()?;
            constants(d.clone(), *k, csv.as_deref(), tol, out.clone())
        }
    }
}

fn fmt_list(xs: &[f64]) -> String {
    xs.iter()
        .map(|x| format!("{x}"))
        .collect::<Vec<_>>()
        .join(",")
}

fn product_name(set: &MatrixSet, word: &[usize]) -> String {
    word.iter()
        .map(|&i| match &set.labels()[i] {
            Some(l) => l.clone(),
            None => format!("A{i}"),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn analyze(set: &MatrixSet, eps: f64, opts: &BisectOptions) -> Result<(String, Report, Status)> {
    let mut r = Report::new("analyze");
    let mut t = Text::default();
    r.set_f64("epsilon", eps);
    r.set_f64("decision_accuracy", eps / 3.0);
    r.set("tau_method", opts.method.name());
    let (a0, b0) = initial_bounds(set)?;
    r.set_f64("a0", a0);
    r.set_f64("b0", b0);
    match lyapunov_bisect(set, eps, opts) {
        Ok(est) => {
            for (i, s) in est.iterations.iter().enumerate() {
                let p = format!("step.{i:03}");
                r.set_f64(format!("{p}.c"), s.c);
                r.set_f64(format!("{p}.tau"), s.step.tau);
                r.set(format!("{p}.tau_method"), s.step.method.name());
                r.set_f64(format!("{p}.delta"), s.delta);
                r.set(format!("{p}.decision"), verdict_name(s.decision.verdict));
                r.set_f64(format!("{p}.rho_lower"), s.decision.bounds.lower);
                r.set_f64(format!("{p}.rho_upper"), s.decision.bounds.upper);
                r.set_f64(format!("{p}.bracket_lower"), s.bracket.0);
                r.set_f64(format!("{p}.bracket_upper"), s.bracket.1);
            }
            r.set("steps", est.iterations.len());
            r.set_f64("bracket_lower", est.bracket.0);
            r.set_f64("bracket_upper", est.bracket.1);
            r.set_f64("sigma_star", est.sigma_star);
            r.set("verdict", est.verdict.name());
            r.set("status", "ok");
            t.kv("initial bracket", format!("[{a0:.6}, {b0:.6}]"));
            t.kv("bisection steps", est.iterations.len());
            t.kv(
                "bracket",
                format!("[{:.6}, {:.6}]", est.bracket.0, est.bracket.1),
            );
            t.kv("sigma estimate", format!("{:.6}", est.sigma_star));
            t.kv("verdict", est.verdict.name());
            Ok((t.into_string(), r, Status::Verdict))
        }
        Err(Error::BisectionInconclusive {
            a,
            b,
            c,
            tau,
            lower,
            upper,
        }) => {
            r.set_f64("bracket_lower", a);
            r.set_f64("bracket_upper", b);
            r.set_f64("failed_shift", c);
            r.set_f64("failed_tau", tau);
            r.set_f64("failed_rho_lower", lower);
            r.set_f64("failed_rho_upper", upper);
            r.set("status", "inconclusive");
            t.kv("partial bracket", format!("[{a:.6}, {b:.6}]"));
            t.line(format!(
                "inconclusive at c = {c:.6}: the joint spectral radius is only known to lie in [{lower:.6}, {upper:.6}]"
            ));
            t.line("raise --budget or --eps, or try another --norm");
            Ok((t.into_string(), r, Status::Inconclusive))
        }
        Err(e) => Err(e.into()),
    }
}

fn analyze_shift(
    set: &MatrixSet,
    c: f64,
    eps: f64,
    opts: &BisectOptions,
) -> Result<(String, Report, Status)> {
    let mut r = Report::new("analyze");
    let mut t = Text::default();
    r.set_f64("epsilon", eps);
    r.set_f64("decision_accuracy", eps / 3.0);
    r.set_f64("shift", c);
    let (a0, b0) = initial_bounds(set)?;
    r.set_f64("a0", a0);
    r.set_f64("b0", b0);
    for m in set.matrices() {
        lss_core::linalg::eigenvalues(m, opts.step.eigen_tol)?.real_eigenvalues()?;
    }
    t.kv("spectral abscissa", format!("{a0:.6}"));
    match single_shift_test(set, c, eps, opts) {
        Ok((step, d)) => {
            let hi = c + eps / 3.0;
            let (conclusion, verdict) = match d.verdict {
                Verdict::CertifiedAbove => (
                    format!("σ(𝒜) ≥ {c:.6}"),
                    if c >= 0.0 { "unstable" } else { "undetermined" },
                ),
                Verdict::CertifiedBelow => (
                    format!("σ(𝒜) < {}", trim(hi)),
                    if hi < 0.0 { "stable" } else { "undetermined" },
                ),
            };
            r.set_f64("tau", step.tau);
            r.set("tau_method", step.method.name());
            r.set_f64("delta", d.delta);
            r.set("decision", verdict_name(d.verdict));
            r.set_f64("rho_lower", d.bounds.lower);
            r.set_f64("rho_upper", d.bounds.upper);
            r.set("depth", d.bounds.depth_reached);
            r.set("nodes", d.bounds.nodes_explored);
            r.set("conclusion", conclusion.clone());
            r.set("verdict", verdict);
            r.set("status", "ok");
            t.kv("step", format!("{:.6} ({})", step.tau, step.method));
            t.kv("delta", format!("{:.4e}", d.delta));
            t.kv(
                "rho bounds",
                format!("[{:.7}, {:.7}]", d.bounds.lower, d.bounds.upper),
            );
            t.kv("conclusion", &conclusion);
            t.kv("verdict", verdict);
            Ok((t.into_string(), r, Status::Verdict))
        }
        Err(Error::JsrInconclusive {
            lower,
            upper,
            nodes,
            depth,
        }) => {
            let step = family_step_bound(set, c + eps / 6.0, eps / 6.0, opts.method, &opts.step)?;
            r.set_f64("tau", step.tau);
            r.set("tau_method", step.method.name());
            r.set_f64("delta", step.tau * eps / 6.0);
            r.set_f64("rho_lower", lower);
            r.set_f64("rho_upper", upper);
            r.set("depth", depth);
            r.set("nodes", nodes);
            r.set("status", "inconclusive");
            t.kv("step", format!("{:.6} ({})", step.tau, step.method));
            t.kv("rho bounds", format!("[{lower:.7}, {upper:.7}]"));
            t.line(format!(
                "inconclusive: need rho > 1 or rho < {:.7}; stopped after {nodes} products at depth {depth}",
                1.0 + step.tau * eps / 6.0
            ));
            Ok((t.into_string(), r, Status::Inconclusive))
        }
        Err(e) => Err(e.into()),
    }
}

fn trim(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::CertifiedAbove => "certified_above",
        Verdict::CertifiedBelow => "certified_below",
    }
}

fn write_samples(path: &Path, rows: &[(f64, f64, f64, bool)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(
        File::create(path).with_context(|| format!("cannot write {}", path.display()))?,
    );
    w.write_record(["t", "T", "dT", "feasible"])?;
    for (t, v, s, f) in rows {
        w.write_record([
            t.to_string(),
            v.to_string(),
            s.to_string(),
            u8::from(*f).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn write_alternance(path: &Path, nodes: &[f64], value: impl Fn(f64) -> f64) -> Result<()> {
    let mut w = csv::Writer::from_writer(
        File::create(path).with_context(|| format!("cannot write {}", path.display()))?,
    );
    w.write_record(["k", "nu", "T"])?;
    for (k, &x) in nodes.iter().enumerate() {
        w.write_record([(k + 1).to_string(), x.to_string(), value(x).to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Upper bound `(16d² - 24d + 11)/3` for `M_{2,d}`.
fn m2_closed_form(d: usize) -> f64 {
    let d = d as f64;
    (16.0 * d * d - 24.0 * d + 11.0) / 3.0
}

fn constants(
    ds: RangeInclusive<usize>,
    k: usize,
    csv_path: Option<&Path>,
    tol: &Tolerances,
    out: Option<PathBuf>,
) -> Result<Outcome> {
    if k == 0 {
        bail!("--k must be at least 1");
    }
    let mut r = Report::new("constants");
    r.set("k", k);
    let mut t = Text::default();
    t.line(format!(
        "{:>3}  {:>14}  {:>14}  {:>14}  {:>14}",
        "d", "M_k,d", "upper bound", "L_k,d", "Sklyarov"
    ));
    let mut rows = Vec::new();
    for d in ds {
        let cheb = laguerre_chebyshev(d, &tol.remez())?;
        let m = cheb.markov(k);
        let upper = mkd_upper_bound(k, d);
        let coeffs = laguerre_markov_coefficients(d, &tol.remez())?;
        let (l, skl) = if k < d {
            let (lo, hi) = sklyarov_bounds(k, d)?;
            (Some(coeffs[k]), Some((lo, hi)))
        } else {
            (None, None)
        };
        let p = format!("d.{d:02}");
        r.set_f64(format!("{p}.markov"), m);
        r.set_f64(format!("{p}.upper_bound"), upper);
        if k == 2 {
            r.set_f64(format!("{p}.closed_form_bound"), m2_closed_form(d));
        }
        if let (Some(l), Some((lo, hi))) = (l, skl) {
            r.set_f64(format!("{p}.laguerre_coefficient"), l);
            r.set_f64(format!("{p}.sklyarov_lower"), lo);
            r.set_f64(format!("{p}.sklyarov_upper"), hi);
        }
        t.line(format!(
            "{d:>3}  {m:>14.3}  {upper:>14.3}  {:>14}  {:>14}",
            l.map(|x| format!("{x:.3}")).unwrap_or_else(|| "-".into()),
            skl.map(|(a, b)| format!("[{a:.1}, {b:.1}]"))
                .unwrap_or_else(|| "-".into()),
        ));
        rows.push((d, m, upper, l, skl));
    }
    if let Some(path) = csv_path {
        let mut w = csv::Writer::from_writer(
            File::create(path).with_context(|| format!("cannot write {}", path.display()))?,
        );
        w.write_record([
            "d",
            "k",
            "markov",
            "upper_bound",
            "laguerre_coefficient",
            "sklyarov_lower",
            "sklyarov_upper",
        ])?;
        for (d, m, upper, l, skl) in rows {
            let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
            w.write_record([
                d.to_string(),
                k.to_string(),
                m.to_string(),
                upper.to_string(),
                opt(l),
                opt(skl.map(|s| s.0)),
                opt(skl.map(|s| s.1)),
            ])?;
        }
        w.flush()?;
    }
    r.set("status", "ok");
    Ok(Outcome {
        text: t.into_string(),
        report: r,
        status: Status::Verdict,
        out,
    })
}

//! The `fastmix` command line: `gen`, `analyze`, `build` and `verify`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::chains::{
    almost_mixing_weighting, continuous_time_weighting, perfect_mixing_schedule, schedule_worst_tv,
    AlmostMixReport, ContinuousReport, TargetDistribution,
};
use crate::conductance::{
    easy_side_certificate, global_conductances, CutCertificate, Measure, EXACT_LIMIT,
};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::graph::{diameter, generate, Family, Graph};
use crate::io;
use crate::spectral::{chain_from_weighting, lazify, spectral_gap, SpectralReport};
use crate::verify::{check_golden, regenerate_golden, run_suites, SuiteOutcome};

/// Version tag carried by every JSON report.
pub const REPORT_SCHEMA: &str = "fastmix-report/1";

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_VIOLATION: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "fastmix",
    version,
    about = "Fast-mixing chains and conductance certificates"
)]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write an edge list for a named graph family.
    Gen {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        depth: Option<usize>,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Conductance certificates, diameter and spectral data of a graph.
    Analyze {
        graph: PathBuf,
        /// Largest n solved by exhaustive enumeration.
        #[arg(long, default_value_t = EXACT_LIMIT)]
        exact_limit: usize,
        #[arg(long)]
        json: bool,
    },
    /// Build a weighting, rate matrix or schedule and check its guarantees.
    Build {
        graph: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        epsilon: Option<f64>,
        /// `uniform` or a file of positive weights.
        #[arg(long, default_value = "uniform")]
        pi: String,
        #[arg(long)]
        root: Option<usize>,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Replay golden values and the seeded invariant suites.
    Verify {
        /// Golden-value directory.
        dir: Option<PathBuf>,
        /// Recompute and rewrite the golden files instead of checking them.
        #[arg(long)]
        regen_golden: bool,
        /// Only check golden values.
        #[arg(long)]
        golden_only: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    AlmostMix,
    Continuous,
    Schedule,
}

/// Golden files shipped with the crate.
pub fn default_golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join("golden")
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    configure_threads();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match dispatch(cli, &mut out) {
        Ok(code) => ExitCode::from(code),
        Err(Failure { code, msg }) => {
            let _ = out.flush();
            eprintln!("fastmix: {msg}");
            ExitCode::from(code)
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("FASTMIX_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
}

struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: EXIT_INPUT,
            msg: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_INPUT,
            msg: e.to_string(),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        msg: msg.into(),
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> std::result::Result<u8, Failure> {
    match cli.command {
        Command::Gen {
            family,
            n,
            k,
            depth,
            out: path,
        } => {
            let family =
                Family::from_name(&family, n, k, depth).map_err(|e| usage(e.to_string()))?;
            let g = generate(family).map_err(|e| usage(e.to_string()))?;
            let text = format!(
                "# {} n={} m={}\n{}",
                family.name(),
                g.n(),
                g.m(),
                g.to_edge_list()
            );
            match path {
                Some(p) => fs::write(p, text)?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(EXIT_OK)
        }
        Command::Analyze {
            graph,
            exact_limit,
            json,
        } => {
            let g = io::read_graph(&graph)?;
            let report = analyze(&g, exact_limit)?;
            emit(out, &report, json, analyze_text)?;
            Ok(if report.checks.iter().all(|c| c.passed != Some(false)) {
                EXIT_OK
            } else {
                EXIT_VIOLATION
            })
        }
        Command::Build {
            graph,
            mode,
            epsilon,
            pi,
            root,
            out: dir,
            json,
        } => {
            match (mode, epsilon) {
                (Mode::AlmostMix, None) => {
                    return Err(usage("--mode almost-mix requires --epsilon"))
                }
                (Mode::Continuous | Mode::Schedule, Some(_)) => {
                    return Err(usage("--epsilon only applies to --mode almost-mix"))
                }
                _ => {}
            }
            let g = io::read_graph(&graph)?;
            let pi = if pi == "uniform" {
                TargetDistribution::uniform(g.n())?
            } else {
                io::read_distribution(Path::new(&pi), g.n())?
            };
            let report = build(&g, mode, epsilon, &pi, root, &dir)?;
            fs::write(
                dir.join("report.json"),
                serde_json::to_string_pretty(&report).map_err(Error::from)? + "\n",
            )?;
            emit(out, &report, json, build_text)?;
            Ok(if report.violations.is_empty() {
                EXIT_OK
            } else {
                EXIT_VIOLATION
            })
        }
        Command::Verify {
            dir,
            regen_golden,
            golden_only,
            json,
        } => {
            let dir = dir.unwrap_or_else(default_golden_dir);
            if regen_golden {
                let count = regenerate_golden(&dir)?;
                writeln!(out, "wrote {count} golden files to {}", dir.display())?;
                return Ok(EXIT_OK);
            }
            if !dir.is_dir() {
                return Err(usage(format!(
                    "golden directory {} is missing",
                    dir.display()
                )));
            }
            let (checked, mismatches) =
                check_golden(&dir).map_err(|e| usage(format!("bad fixture: {e}")))?;
            let suites = if golden_only {
                Vec::new()
            } else {
                run_suites(cli.seed)?
            };
            let report = VerifyReport {
                schema: REPORT_SCHEMA,
                command: "verify",
                seed: cli.seed,
                golden_checked: checked,
                golden_mismatches: mismatches,
                suites,
            };
            emit(out, &report, json, verify_text)?;
            let clean = report.golden_mismatches.is_empty()
                && report.suites.iter().all(SuiteOutcome::passed);
            Ok(if clean { EXIT_OK } else { EXIT_VIOLATION })
        }
    }
}

fn emit<T: Serialize>(
    out: &mut dyn Write,
    report: &T,
    json: bool,
    text: impl Fn(&T) -> String,
) -> std::result::Result<(), Failure> {
    if json {
        let s = serde_json::to_string_pretty(report).map_err(Error::from)?;
        writeln!(out, "{s}")?;
    } else {
        out.write_all(text(report).as_bytes())?;
    }
    Ok(())
}

/// One checked inequality. `passed` is `None` when it could not be decided,
/// e.g. because a certificate is only heuristic.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub claim: String,
    pub passed: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalyzeReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub graph: String,
    pub n: usize,
    pub m: usize,
    pub diameter: usize,
    pub edge: CutCertificate,
    pub vertex: CutCertificate,
    pub matching: CutCertificate,
    /// Easy-side value at the matching certificate, at most `2 Υ`.
    pub easy_side: f64,
    /// Lazy simple random walk.
    pub lazy_walk: Option<SpectralReport>,
    pub checks: Vec<Check>,
}

/// Largest n for which `analyze` runs an eigensolve.
pub const ANALYZE_SPECTRAL_LIMIT: usize = 400;

pub fn analyze(g: &Graph, exact_limit: usize) -> Result<AnalyzeReport> {
    g.ensure_connected()?;
    if g.n() < 2 {
        return Err(Error::Domain("analysis needs at least two vertices".into()));
    }
    let limit = Some(exact_limit);
    let edge = global_conductances(g, Measure::Edge, limit)?;
    let vertex = global_conductances(g, Measure::Vertex, limit)?;
    let matching = global_conductances(g, Measure::Matching, limit)?;
    let easy = easy_side_certificate(g, &matching.set)?;
    let exact = vertex.exact && matching.exact;
    let (ups, psi) = (matching.matching_cond, vertex.vertex_cond);
    let checks = vec![
        Check {
            claim: "Υ* ≤ Ψ*".into(),
            passed: exact.then_some(ups <= psi),
        },
        Check {
            claim: "Ψ* ≤ 4Υ*".into(),
            passed: exact.then_some(psi <= ups * 4),
        },
        Check {
            claim: "easy-side value ≤ 2Υ(S)".into(),
            passed: Some(easy.value <= matching.matching_cond * 2),
        },
        Check {
            claim: "certificates are well formed".into(),
            passed: Some(
                [&edge, &vertex, &matching]
                    .iter()
                    .all(|c| c.validate(g).is_ok()),
            ),
        },
    ];
    let lazy_walk = if g.n() <= ANALYZE_SPECTRAL_LIMIT {
        let walk = chain_from_weighting(&WeightedGraph::unit(g.clone()))?;
        Some(spectral_gap(&lazify(&walk))?)
    } else {
        None
    };
    Ok(AnalyzeReport {
        schema: REPORT_SCHEMA,
        command: "analyze",
        graph: g.canonical_string(),
        n: g.n(),
        m: g.m(),
        diameter: diameter(g)?,
        edge,
        vertex,
        matching,
        easy_side: num_traits::ToPrimitive::to_f64(&easy.value).unwrap_or(f64::NAN),
        lazy_walk,
        checks,
    })
}

fn cert_line(name: &str, value: num_rational::Rational64, c: &CutCertificate) -> String {
    let kind = if c.exact { "exact" } else { "heuristic" };
    format!("{name:<10} {value:<8} ({kind}) S = {:?}\n", c.set)
}

fn check_lines(checks: &[Check]) -> String {
    checks
        .iter()
        .map(|c| {
            let status = match c.passed {
                Some(true) => "ok",
                Some(false) => "VIOLATED",
                None => "undecided",
            };
            format!("  [{status}] {}\n", c.claim)
        })
        .collect()
}

fn analyze_text(r: &AnalyzeReport) -> String {
    let mut s = format!("n = {}, m = {}, diameter = {}\n", r.n, r.m, r.diameter);
    s += &cert_line("edge", r.edge.edge_cond, &r.edge);
    s += &cert_line("vertex", r.vertex.vertex_cond, &r.vertex);
    s += &cert_line("matching", r.matching.matching_cond, &r.matching);
    if let Some(w) = &r.lazy_walk {
        s += &format!("lazy walk gap {:.6e}\n", w.gap);
    }
    s + &check_lines(&r.checks)
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum BuildDetails {
    AlmostMix(AlmostMixReport),
    Continuous(ContinuousReport),
    Schedule(ScheduleReport),
}

#[derive(Clone, Debug, Serialize)]
pub struct ScheduleReport {
    pub root: usize,
    pub steps: usize,
    pub diam: usize,
    pub height: usize,
    pub worst_tv: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BuildReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub mode: &'static str,
    pub graph: String,
    pub files: Vec<String>,
    pub details: BuildDetails,
    pub violations: Vec<String>,
}

/// Largest total-variation distance accepted from a perfect-mixing schedule.
pub const SCHEDULE_TV_TOLERANCE: f64 = 1e-12;

pub fn build(
    g: &Graph,
    mode: Mode,
    epsilon: Option<f64>,
    pi: &TargetDistribution,
    root: Option<usize>,
    dir: &Path,
) -> Result<BuildReport> {
    if mode != Mode::AlmostMix && epsilon.is_some() {
        return Err(Error::Argument(
            "--epsilon only applies to --mode almost-mix".into(),
        ));
    }
    fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    let mut write = |name: &str, text: String| -> Result<()> {
        fs::write(dir.join(name), text)?;
        files.push(name.to_string());
        Ok(())
    };
    let (mode_name, details, violations) = match mode {
        Mode::AlmostMix => {
            let eps = epsilon
                .ok_or_else(|| Error::Argument("--mode almost-mix requires --epsilon".into()))?;
            let r = almost_mixing_weighting(g, pi, eps, None, root)?;
            write("weighting.tsv", io::weighting_to_tsv(&r.weighting))?;
            write("chain.tsv", io::chain_to_tsv(&r.chain()?))?;
            let v = r.check();
            ("almost-mix", BuildDetails::AlmostMix(r), v)
        }
        Mode::Continuous => {
            if pi
                .as_slice()
                .iter()
                .any(|&p| (p * g.n() as f64 - 1.0).abs() > 1e-12)
            {
                return Err(Error::Argument(
                    "--mode continuous targets the uniform distribution".into(),
                ));
            }
            let r = continuous_time_weighting(g, root)?;
            write("rates.tsv", io::weighting_to_tsv(&r.weighting))?;
            let v = r.check();
            ("continuous", BuildDetails::Continuous(r), v)
        }
        Mode::Schedule => {
            let s = perfect_mixing_schedule(g, pi, root)?;
            io::write_schedule(dir, &s)?;
            files.push("manifest.json".into());
            files.extend((0..s.len()).map(|i| format!("step_{i:04}.tsv")));
            let worst_tv = schedule_worst_tv(&s)?;
            let mut v = Vec::new();
            if worst_tv > SCHEDULE_TV_TOLERANCE {
                v.push(format!("TV after {} steps is {worst_tv:e}", s.len()));
            }
            if let Err(e) = s.check_support(g) {
                v.push(e.to_string());
            }
            let r = ScheduleReport {
                root: s.root,
                steps: s.len(),
                diam: s.diam,
                height: s.height,
                worst_tv,
            };
            ("schedule", BuildDetails::Schedule(r), v)
        }
    };
    Ok(BuildReport {
        schema: REPORT_SCHEMA,
        command: "build",
        mode: mode_name,
        graph: g.canonical_string(),
        files,
        details,
        violations,
    })
}

fn build_text(r: &BuildReport) -> String {
    let mut s = format!("mode {}; wrote {}\n", r.mode, r.files.join(", "));
    match &r.details {
        BuildDetails::AlmostMix(a) => {
            s += &format!(
                "root {}, ε = {}, w(V) = {:.6}, min π_w/π = {:.6}\ngap(Q') = {:.6e} ≥ {:.6e}\n",
                a.root, a.epsilon, a.total_weight, a.min_ratio, a.gap, a.gap_bound
            );
        }
        BuildDetails::Continuous(c) => {
            s += &format!(
                "root {}, total rate {:.6}, λ₂ = {:.6e} ≥ {:.6e}, max E[τ_root] = {:.6} ≤ {}\n",
                c.root,
                c.total_rate,
                c.lambda2,
                c.lambda2_bound_graph,
                c.max_hitting_time,
                c.hitting_bound
            );
        }
        BuildDetails::Schedule(p) => {
            s += &format!(
                "root {}, {} steps, worst TV {:.3e}\n",
                p.root, p.steps, p.worst_tv
            );
        }
    }
    for v in &r.violations {
        s += &format!("  VIOLATED {v}\n");
    }
    s
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub seed: u64,
    pub golden_checked: usize,
    pub golden_mismatches: Vec<String>,
    pub suites: Vec<SuiteOutcome>,
}

fn verify_text(r: &VerifyReport) -> String {
    let mut s = format!(
        "golden: {} files, {} mismatches\n",
        r.golden_checked,
        r.golden_mismatches.len()
    );
    for m in &r.golden_mismatches {
        s += &format!("  MISMATCH {m}\n");
    }
    for suite in &r.suites {
        let status = if suite.passed() { "ok" } else { "VIOLATED" };
        s += &format!(
            "{:<18} {:<9} {} instances  [{}]\n",
            suite.name, status, suite.checked, suite.claim
        );
        for v in &suite.violations {
            s += &format!("  {v}\n");
        }
    }
    s
}

//! The `curv` command line.
//!
//! Exit codes: 0 the condition holds (or the command succeeded), 1 it fails,
//! 2 the input is not a metric, 3 usage or I/O errors.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::certifier::{
    certify, defect_profile_for, local_defect_map, midpoint_defect, CurvatureQuery, Direction,
    TriplePolicy,
};
use crate::circumradius::{circumcenter_candidates, CandidatePolicy};
use crate::counterexample;
use crate::hyperbolicity::{four_point, relaxed_npc_bound_check};
use crate::io::{self, InputFormat, IoError, LoadedSpace};
use crate::metric::{sample_space, FiniteMetricSpace, GeneratorKind, GeneratorSpec, MetricError};
use crate::model::Kappa;
use crate::parallel::{with_threads, THREADS_ENV};
use crate::report::{input_digest, BetaEntry, Report, VerdictEcho, Witness};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "curv",
    version,
    about = "Circumradius-comparison curvature bounds for metric spaces"
)]
struct Cli {
    /// Worker threads for the parallel scans.
    #[arg(long, global = true, env = THREADS_ENV)]
    threads: Option<usize>,
    /// Write the JSON report here (`-` for standard output).
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Input {
    /// Matrix (`.csv`), edge list (`.tsv`, `.edges`) or point file (`.pts`).
    path: PathBuf,
    /// Overrides detection by extension: `matrix`, `edges` or `points`.
    #[arg(long)]
    format: Option<InputFormat>,
    /// Admit zero distances between distinct points and merge duplicates.
    #[arg(long)]
    pseudo: bool,
}

/// Circumcenter candidates for the space's own circumradius.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Candidates {
    /// `circumcenters` for point files, `points` otherwise.
    Auto,
    /// The points of the space.
    Points,
    /// The points plus every triple's continuous circumcenter (point files only).
    Circumcenters,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that the input is a metric.
    Validate {
        #[command(flatten)]
        input: Input,
    },
    /// Test Curv <= kappa or Curv >= kappa.
    Certify {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_hyphen_values = true)]
        kappa: f64,
        #[arg(long, default_value = "upper")]
        direction: Direction,
        /// Only test triangles whose sides are all at least beta.
        #[arg(long, default_value_t = 0.0)]
        beta: f64,
        /// Allowed additive slack on circumradii.
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        /// Include pair-triangles (i, i, j).
        #[arg(long)]
        degenerate: bool,
        /// For kappa > 0, skip triangles with perimeter >= 2 pi / sqrt(kappa) - margin.
        #[arg(long, default_value_t = crate::model::MODEL_TOLERANCE)]
        margin: f64,
        #[arg(long, value_enum, default_value_t = Candidates::Auto)]
        candidates: Candidates,
    },
    /// Defect profile: epsilon* per scale, histogram, midpoint and local defects.
    Defect {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        kappa: f64,
        /// Ascending beta grid, comma separated (default: 11 steps up to the diameter).
        #[arg(long, value_delimiter = ',')]
        betas: Option<Vec<f64>>,
        #[arg(long)]
        degenerate: bool,
        #[arg(long, value_enum, default_value_t = Candidates::Auto)]
        candidates: Candidates,
        /// Write the beta curve as CSV.
        #[arg(long, value_name = "PATH")]
        beta_csv: Option<PathBuf>,
        /// Write the defect histogram as CSV.
        #[arg(long, value_name = "PATH")]
        histogram_csv: Option<PathBuf>,
        /// Also compute the local defect map for balls of this radius.
        #[arg(long)]
        local_radius: Option<f64>,
    },
    /// Four-point delta and the 2 delta + h relaxation check.
    Hyperbolicity {
        #[command(flatten)]
        input: Input,
        /// Discretization allowance (default: longest edge for edge lists,
        /// largest nearest-neighbor distance for matrices).
        #[arg(long)]
        h: Option<f64>,
    },
    /// Generate a space, e.g. `sphere:kappa=1,n=40,seed=7`.
    Sample {
        spec: GeneratorSpec,
        /// Matrix file to write (standard output when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reproduce the l_p triangles that violate Curv <= 0.
    Counterexample {
        #[arg(long)]
        p: String,
        /// Write the five-point fixture (A', B, C, A, origin) as a point file.
        #[arg(long, value_name = "PATH")]
        write_fixture: Option<PathBuf>,
    },
}

enum CliError {
    Usage(String),
    Invalid(String),
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Metric(m) => metric_error(m),
            other => CliError::Usage(other.to_string()),
        }
    }
}

fn metric_error(m: MetricError) -> CliError {
    match m {
        MetricError::Invalid(v) => CliError::Invalid(
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join("\n"),
        ),
        MetricError::InvalidParameter(s) => CliError::Usage(s),
        other => CliError::Invalid(other.to_string()),
    }
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    let threads = cli.threads;
    let json = cli.json.clone();
    // with the report on standard output the summary moves to standard error
    let to_stdout = json.as_deref() == Some(Path::new("-"));
    let start = Instant::now();
    let result = with_threads(threads, || execute(cli.command));
    match result {
        Ok((code, mut report, summary)) => {
            report.timing_ms = start.elapsed().as_secs_f64() * 1e3;
            let sink: &mut dyn Write = if to_stdout { &mut *err } else { &mut *out };
            let _ = sink.write_all(summary.as_bytes());
            if let Some(path) = json {
                let text = report.to_json();
                if to_stdout {
                    let _ = out.write_all(text.as_bytes());
                } else if let Err(e) = io::write_text(&path, &text) {
                    let _ = writeln!(err, "error: {e}");
                    return EXIT_USAGE;
                }
            }
            code
        }
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Invalid(msg)) => {
            let _ = writeln!(err, "invalid metric:\n{msg}");
            EXIT_INVALID
        }
    }
}

type Outcome = Result<(i32, Report, String), CliError>;

fn load(input: &Input, report: &mut Report) -> Result<LoadedSpace, CliError> {
    let loaded = io::load_space(&input.path, input.format, input.pseudo)?;
    report.input_digest = Some(input_digest(&loaded.space));
    report.query.input = Some(input.path.display().to_string());
    if let Some(c) = &loaded.collapsed {
        report.notes.push(format!(
            "pseudo-metric input: {} points merged into {} classes",
            c.len(),
            loaded.space.n()
        ));
        report.extra("classes", c);
    }
    Ok(loaded)
}

fn candidate_policy(
    space: &FiniteMetricSpace,
    mode: Candidates,
    report: &mut Report,
) -> Result<CandidatePolicy, CliError> {
    let coords = space.embedding().is_some();
    let mode = match mode {
        Candidates::Auto if coords => Candidates::Circumcenters,
        Candidates::Auto => Candidates::Points,
        m => m,
    };
    let policy = match mode {
        Candidates::Circumcenters => circumcenter_candidates(space).map_err(usage)?,
        _ => CandidatePolicy::AllPoints,
    };
    let name = if mode == Candidates::Points {
        "points"
    } else {
        "circumcenters"
    };
    report.extra("candidates", name);
    if mode == Candidates::Circumcenters {
        report
            .notes
            .push("candidates include every triple's continuous l_p circumcenter".into());
    }
    Ok(policy)
}

fn kappa(k: f64) -> Result<Kappa, CliError> {
    Kappa::new(k).map_err(usage)
}

fn fmt_kappa(k: f64) -> String {
    format!("{k}")
}

fn statement(direction: Direction, k: f64, holds: bool) -> String {
    let op = match direction {
        Direction::Upper => "<=",
        Direction::Lower => ">=",
    };
    format!(
        "Curv {op} {} {}",
        fmt_kappa(k),
        if holds { "holds" } else { "fails" }
    )
}

fn labels(space: &FiniteMetricSpace, idx: &[usize]) -> String {
    idx.iter()
        .map(|&i| space.label(i).into_owned())
        .collect::<Vec<_>>()
        .join(", ")
}

fn execute(cmd: Command) -> Outcome {
    match cmd {
        Command::Validate { input } => validate(&input),
        Command::Certify {
            input,
            kappa: k,
            direction,
            beta,
            epsilon,
            degenerate,
            margin,
            candidates,
        } => {
            let mut report = Report::new("certify");
            let loaded = load(&input, &mut report)?;
            let space = &loaded.space;
            let candidates = candidate_policy(space, candidates, &mut report)?;
            let policy = if degenerate {
                TriplePolicy::WithDegeneratePairs
            } else {
                TriplePolicy::Distinct
            };
            let query = CurvatureQuery::new(kappa(k)?, direction)
                .with_beta(beta)
                .with_epsilon(epsilon)
                .with_triple_policy(policy)
                .with_large_triangle_margin(margin)
                .with_candidates(candidates);
            query.validate().map_err(usage)?;
            report.query.kappa = Some(k);
            report.query.direction = Some(direction.to_string());
            report.query.beta = Some(beta);
            report.query.epsilon = Some(epsilon);
            report.query.triples = Some(
                if degenerate {
                    "with-degenerate-pairs"
                } else {
                    "distinct"
                }
                .into(),
            );
            let v = certify(space, &query).map_err(usage)?;
            let st = statement(direction, k, v.holds);
            report.verdict = Some(VerdictEcho {
                holds: v.holds,
                statement: st.clone(),
                epsilon_needed: v.epsilon_needed,
            });
            report.epsilon_star_upper = Some(v.epsilon_star_upper);
            report.epsilon_star_lower = Some(v.epsilon_star_lower);
            report.skipped = v.skipped;
            report.extra("triangles", v.evaluated);
            let worst = match direction {
                Direction::Upper => v.worst_upper,
                Direction::Lower => v.worst_lower,
            };
            let mut summary = format!(
                "{st}: epsilon needed {:.6e} over {} triangles ({} skipped)\n",
                v.epsilon_needed, v.evaluated, v.skipped
            );
            if let Some(w) = v.witness.or(worst) {
                report.witnesses.push(Witness::triangle(space, &w));
                if !v.holds {
                    summary.push_str(&format!(
                        "witness ({}): r_space {:.12} vs r_model {:.12}\n",
                        labels(space, &w.triple.indices()),
                        w.r_space,
                        w.r_model
                    ));
                }
            }
            Ok((if v.holds { EXIT_OK } else { EXIT_FAILS }, report, summary))
        }
        Command::Defect {
            input,
            kappa: k,
            betas,
            degenerate,
            candidates,
            beta_csv,
            histogram_csv,
            local_radius,
        } => {
            let mut report = Report::new("defect");
            let loaded = load(&input, &mut report)?;
            let space = &loaded.space;
            let diam = space.diameter();
            let grid = betas.unwrap_or_else(|| (0..=10).map(|i| diam * i as f64 / 10.0).collect());
            let policy = if degenerate {
                TriplePolicy::WithDegeneratePairs
            } else {
                TriplePolicy::Distinct
            };
            let candidates = candidate_policy(space, candidates, &mut report)?;
            let query = CurvatureQuery::upper(kappa(k)?)
                .with_triple_policy(policy)
                .with_candidates(candidates);
            let prof = defect_profile_for(space, &query, &grid).map_err(usage)?;
            report.query.kappa = Some(k);
            report.query.beta_grid = Some(grid);
            report.query.triples = Some(
                if degenerate {
                    "with-degenerate-pairs"
                } else {
                    "distinct"
                }
                .into(),
            );
            report.epsilon_star_upper = Some(prof.epsilon_star_upper);
            report.epsilon_star_lower = Some(prof.epsilon_star_lower);
            report.skipped = prof.skipped;
            report.beta_curve = prof.beta_curve.iter().map(BetaEntry::from).collect();
            for w in [prof.worst_upper, prof.worst_lower].into_iter().flatten() {
                report.witnesses.push(Witness::triangle(space, &w));
            }
            report.extra("triangles", prof.defects.len());
            report.extra(
                "histogram",
                serde_json::json!({
                    "lo": prof.histogram.lo,
                    "hi": prof.histogram.hi,
                    "counts": prof.histogram.counts,
                }),
            );
            let mid = midpoint_defect(space);
            report.extra(
                "midpoint_defect",
                serde_json::json!({ "max": mid.max, "argmax": mid.argmax }),
            );
            if let Some(r) = local_radius {
                let map = local_defect_map(space, r, kappa(k)?).map_err(usage)?;
                report.query.radius = Some(r);
                report.extra("local_defect", map);
            }
            if let Some(p) = beta_csv {
                io::write_text(&p, &prof.beta_curve_csv())?;
            }
            if let Some(p) = histogram_csv {
                io::write_text(&p, &prof.histogram.to_csv())?;
            }
            let summary = format!(
                "epsilon*_upper {:.6e}, epsilon*_lower {:.6e}, midpoint defect {:.6e} over {} triangles ({} skipped)\n",
                prof.epsilon_star_upper,
                prof.epsilon_star_lower,
                mid.max,
                prof.defects.len(),
                prof.skipped
            );
            Ok((EXIT_OK, report, summary))
        }
        Command::Hyperbolicity { input, h } => {
            let mut report = Report::new("hyperbolicity");
            let loaded = load(&input, &mut report)?;
            let space = &loaded.space;
            let h = match h.or(loaded.max_edge) {
                Some(h) => h,
                None => nearest_neighbor_scale(space),
            };
            let r = relaxed_npc_bound_check(space, h).map_err(usage)?;
            report.query.h = Some(h);
            report.query.triples = Some("with-degenerate-pairs".into());
            report.delta = Some(r.delta.delta);
            report.epsilon_star_upper = Some(r.epsilon_star_upper);
            report.notes.push(
                "delta is the Gromov four-point constant, the finite-space surrogate for thin triangles"
                    .into(),
            );
            report.extra("two_delta", r.two_delta);
            report.extra("slack", r.slack);
            if let Some(q) = r.delta.witness {
                let value = four_point(space, q[0], q[1], q[2], q[3]);
                report.witnesses.push(Witness::quadruple(space, q, value));
            }
            if let Some(w) = r.worst {
                report.witnesses.push(Witness::triangle(space, &w));
            }
            let summary = format!(
                "delta {:.6e}, epsilon*_upper {:.6e}, 2 delta + h - epsilon* = {:.6e} (h = {h})\n",
                r.delta.delta, r.epsilon_star_upper, r.slack
            );
            Ok((EXIT_OK, report, summary))
        }
        Command::Sample { spec, out } => {
            let mut report = Report::new("sample");
            let space = sample_space(&spec).map_err(metric_error)?;
            report.input_digest = Some(input_digest(&space));
            report.query.generator = Some(spec.to_string());
            report.notes.push(sampling_note(&spec.kind));
            let text = io::format_matrix(&space);
            let summary = match out {
                Some(p) => {
                    io::write_text(&p, &text)?;
                    format!("wrote {} points to {}\n", space.n(), p.display())
                }
                None => text,
            };
            Ok((EXIT_OK, report, summary))
        }
        Command::Counterexample { p, write_fixture } => counterexample_cmd(&p, write_fixture),
    }
}

fn validate(input: &Input) -> Outcome {
    let mut report = Report::new("validate");
    let loaded = load(input, &mut report)?;
    report.extra("points", loaded.space.n());
    report.verdict = Some(VerdictEcho {
        holds: true,
        statement: "valid metric".into(),
        epsilon_needed: 0.0,
    });
    let summary = format!("valid metric on {} points\n", loaded.space.n());
    Ok((EXIT_OK, report, summary))
}

/// Largest distance from a point to its nearest neighbor.
fn nearest_neighbor_scale(space: &FiniteMetricSpace) -> f64 {
    let n = space.n();
    (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .map(|j| space.d(i, j))
                .fold(f64::INFINITY, f64::min)
        })
        .filter(|d| d.is_finite())
        .fold(0.0, f64::max)
}

fn sampling_note(kind: &GeneratorKind) -> String {
    match kind {
        GeneratorKind::Euclidean { .. } => "uniform in the unit cube".into(),
        GeneratorKind::Sphere { .. } => "uniform on the sphere".into(),
        GeneratorKind::Hyperbolic { .. } => {
            "uniform hyperbolic area on a geodesic disk; exact hyperboloid distances".into()
        }
        GeneratorKind::Lp { .. } => "uniform in the box [-box, box]^dim".into(),
        GeneratorKind::Tree { .. } => "random recursive tree, edges split into 2^k segments".into(),
        GeneratorKind::Grid { .. } => "grid graph with unit edges".into(),
        GeneratorKind::RandomGraph { .. } => {
            "random spanning tree plus independent extra edges, uniform weights".into()
        }
    }
}

fn counterexample_cmd(p: &str, write_fixture: Option<PathBuf>) -> Outcome {
    let p: f64 = match p {
        "inf" | "infinity" => f64::INFINITY,
        s => s
            .parse()
            .map_err(|_| usage(format!("invalid exponent {s:?}")))?,
    };
    let o = counterexample::evaluate(p).map_err(usage)?;
    let mut report = Report::new("counterexample");
    report.query.p = Some(p);
    report.query.kappa = Some(0.0);
    report.query.direction = Some("upper".into());
    let holds = o.defect <= crate::certifier::DEFECT_TOLERANCE;
    let st = statement(Direction::Upper, 0.0, holds);
    report.verdict = Some(VerdictEcho {
        holds,
        statement: st.clone(),
        epsilon_needed: o.defect.max(0.0),
    });
    report.epsilon_star_upper = Some(o.defect.max(0.0));
    report.witnesses.push(Witness {
        kind: "triangle".into(),
        indices: vec![0, 1, 2],
        labels: vec!["A'".into(), "B".into(), "C".into()],
        sides: Some(o.sides),
        r_space: Some(o.r_space),
        r_model: Some(o.r_model),
        value: o.defect,
    });
    let t = o.triangle;
    report.extra(
        "points",
        serde_json::json!({ "A": t.a, "B": t.b, "C": t.c, "A'": t.a_prime, "M": o.center }),
    );
    report.extra("violation_expected", o.violation_expected);
    report.extra("reproduced", o.reproduced);
    if let Some(path) = write_fixture {
        let space = counterexample::fixture_space(p).map_err(usage)?;
        let text = io::format_points(&space).expect("fixture has coordinates");
        io::write_text(&path, &text)?;
        report.extra("fixture", path.display().to_string());
    }
    let summary = format!(
        "p = {p}: A' = ({:.12}, {:.12}), r_space {:.12}, r_model {:.12}; {st}{}\n",
        t.a_prime[0],
        t.a_prime[1],
        o.r_space,
        o.r_model,
        if o.reproduced {
            ""
        } else {
            " (expected behavior NOT reproduced)"
        }
    );
    Ok((
        if o.reproduced { EXIT_OK } else { EXIT_FAILS },
        report,
        summary,
    ))
}

//! The `rigidlab` command-line front end.
//!
//! Exit codes: 0 success or property true, 1 property false, 2 parse
//! error, 3 semantic input error, 4 size limit.

pub mod document;
pub mod report;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use crate::cone::{cone_extremality, search_extremal, Semimetric};
use crate::constructions::{
    additive_realization, grow_universal, katetov_extend, pierce_face, rigidify,
    DistanceConstraint, ExtensionTrace, GrowOptions, RigidifyOptions,
};
use crate::error::{Error, Result};
use crate::lipschitz::{lipschitz_constant, representability_defect, LipschitzFunction};
use crate::metric::{
    lemma1_check, validate_metric, CandidateVertexData, FiniteMetricSpace, SignedMeasure,
};
use crate::norms::{dp_norm, hk_norm, kr_norm_dual, kr_norm_primal};
use crate::rational::parse_rational;
use crate::rigidity::{
    almost_universality_defect, dp_coincidence_check, rigidity_defect, universality_defect,
    wlr_check, wlr_search,
};
use crate::Rational;
use document::{canonical, parse_rational_list, rational_value, sha256_hex, SpaceDocument};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_SIZE: i32 = 4;

/// Environment variable capping internal parallelism.
pub const THREADS_ENV: &str = "RIGIDLAB_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "rigidlab",
    version,
    about = "Exact compatible norms and rigidity checks on finite metric spaces"
)]
pub struct Cli {
    /// Worker threads (overrides RIGIDLAB_THREADS). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Leave the timing field out of the report.
    #[arg(long, global = true)]
    omit_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate compatible norms of a zero-mass measure.
    Norms(NormsArgs),
    /// Decide a property of a space.
    Check(CheckArgs),
    /// Compute a representability defect on a subset.
    Defect(DefectArgs),
    /// Run a construction and emit the resulting space.
    Build(BuildArgs),
    /// Seeded search for WLR spaces or extremal cone rays.
    Search(SearchArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum NormKind {
    Kr,
    Hk,
    Dp,
    All,
}

#[derive(Args, Debug)]
struct NormsArgs {
    space: PathBuf,
    /// Comma-separated coefficients, one per point, e.g. `-2,1,1`.
    #[arg(long, allow_hyphen_values = true)]
    measure: String,
    #[arg(long, value_enum, default_value = "all")]
    norm: NormKind,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PropertyKind {
    Wlr,
    DpRigidity,
    ExtremalCone,
    Lemma1,
}

#[derive(Args, Debug)]
struct CheckArgs {
    space: PathBuf,
    #[arg(long, value_enum)]
    property: PropertyKind,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DefectKind {
    Rigidity,
    Universality,
    AlmostUniversality,
}

#[derive(Args, Debug)]
struct DefectArgs {
    space: PathBuf,
    /// Comma-separated labels or indices; defaults to every point.
    #[arg(long)]
    subset: Option<String>,
    #[arg(long, value_enum, default_value = "rigidity")]
    kind: DefectKind,
    #[arg(long, default_value = "0")]
    epsilon: String,
    /// Random convex combinations added to the vertex sample.
    #[arg(long, default_value_t = 16)]
    sample: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BuildOp {
    Extend,
    Realize,
    Pierce,
    Rigidify,
    Grow,
}

#[derive(Args, Debug)]
struct BuildArgs {
    space: PathBuf,
    #[arg(long, value_enum)]
    op: BuildOp,
    /// Function values (on the subset for `realize`), comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    function: Option<String>,
    #[arg(long)]
    subset: Option<String>,
    /// One of `rational`, `rational-ge1`, `integer`.
    #[arg(long, default_value = "rational")]
    constraint: String,
    #[arg(long, default_value = "1/4")]
    epsilon: String,
    #[arg(long, default_value_t = 3)]
    rounds: usize,
    #[arg(long, default_value_t = 2)]
    points_per_round: usize,
    #[arg(long, default_value_t = 4)]
    max_new_points: usize,
    #[arg(long, default_value_t = 2)]
    subsets_per_round: usize,
    #[arg(long, default_value_t = 4)]
    sample: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Do not shift the pierced function to minimum 0.
    #[arg(long)]
    no_normalize: bool,
    /// Where to write the resulting space document.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SearchTarget {
    Wlr5plus,
    ExtremalCone,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long, value_enum)]
    target: SearchTarget,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 100)]
    budget: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Restrict cone search to integer starting matrices.
    #[arg(long)]
    commensurable: bool,
}

/// Result of one CLI invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => EXIT_PARSE,
        Error::SizeLimit { .. } => EXIT_SIZE,
        _ => EXIT_INPUT,
    }
}

fn thread_count(flag: Option<usize>) -> Result<usize> {
    if let Some(n) = flag {
        return Ok(n.max(1));
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => v.trim().parse::<usize>().map(|n| n.max(1)).map_err(|_| {
            Error::Parse(format!(
                "{THREADS_ENV} must be a positive integer, got {v:?}"
            ))
        }),
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

/// Parses arguments, runs the command and collects its output.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_PARSE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let fail = |e: Error| Outcome {
        code: exit_code(&e),
        stdout: String::new(),
        stderr: format!("error: {e}\n"),
    };
    let threads = match thread_count(cli.threads) {
        Ok(t) => t,
        Err(e) => return fail(e),
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            return fail(Error::Precondition(format!(
                "cannot start thread pool: {e}"
            )))
        }
    };
    let start = Instant::now();
    match pool.install(|| execute(&cli.command)) {
        Ok(done) => {
            let mut root = done.report.into_value();
            if !cli.omit_timing {
                let ms = start.elapsed().as_secs_f64() * 1000.0;
                root.insert(
                    "timing".into(),
                    json!({ "elapsed_ms": (ms * 1000.0).round() / 1000.0 }),
                );
            }
            Outcome {
                code: done.code,
                stdout: canonical(&Value::Object(root)),
                stderr: String::new(),
            }
        }
        Err(e) => fail(e),
    }
}

struct Report {
    command: &'static str,
    inputs: Vec<String>,
    parameters: Map<String, Value>,
    results: Map<String, Value>,
    certificates: Map<String, Value>,
}

impl Report {
    fn new(command: &'static str) -> Self {
        Report {
            command,
            inputs: Vec::new(),
            parameters: Map::new(),
            results: Map::new(),
            certificates: Map::new(),
        }
    }

    fn param(&mut self, key: &str, v: impl Into<Value>) {
        self.parameters.insert(key.into(), v.into());
    }

    fn result(&mut self, key: &str, v: impl Into<Value>) {
        self.results.insert(key.into(), v.into());
    }

    fn certificate(&mut self, key: &str, v: Value) {
        if !v.is_null() {
            self.certificates.insert(key.into(), v);
        }
    }

    fn into_value(self) -> Map<String, Value> {
        let params = Value::Object(self.parameters);
        let mut hashed = self.inputs.concat();
        hashed.push_str(&canonical(&params));
        let mut root = Map::new();
        root.insert("version".into(), Value::from(document::FORMAT_VERSION));
        root.insert("command".into(), Value::from(self.command));
        root.insert(
            "inputs_digest".into(),
            Value::from(sha256_hex(hashed.as_bytes())),
        );
        root.insert("parameters".into(), params);
        root.insert("results".into(), Value::Object(self.results));
        root.insert("certificates".into(), Value::Object(self.certificates));
        root
    }
}

struct Done {
    report: Report,
    code: i32,
}

fn read_document(path: &Path) -> Result<SpaceDocument> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    SpaceDocument::parse(&text)
}

fn parse_subset(doc: &SpaceDocument, text: Option<&str>) -> Result<Vec<usize>> {
    match text {
        None => Ok((0..doc.labels.len()).collect()),
        Some(t) if t.trim().is_empty() => Err(Error::Empty("subset")),
        Some(t) => t.split(',').map(|tok| doc.point(tok)).collect(),
    }
}

fn execute(command: &Command) -> Result<Done> {
    match command {
        Command::Norms(a) => cmd_norms(a),
        Command::Check(a) => cmd_check(a),
        Command::Defect(a) => cmd_defect(a),
        Command::Build(a) => cmd_build(a),
        Command::Search(a) => cmd_search(a),
    }
}

fn load_space(path: &Path, report: &mut Report) -> Result<(SpaceDocument, FiniteMetricSpace)> {
    let doc = read_document(path)?;
    report.inputs.push(doc.to_canonical());
    let space = doc.to_space()?;
    Ok((doc, space))
}

fn cmd_norms(a: &NormsArgs) -> Result<Done> {
    let mut report = Report::new("norms");
    let (_, space) = load_space(&a.space, &mut report)?;
    let coeffs = parse_rational_list(&a.measure)?;
    if coeffs.len() != space.len() {
        return Err(Error::Shape(format!(
            "measure has {} coefficients for {} points",
            coeffs.len(),
            space.len()
        )));
    }
    let mu = SignedMeasure::from_dense(&coeffs)?;
    let labels = space.labels().to_vec();
    report.param("measure", report::measure(&labels, &mu));
    report.param("norm", format!("{:?}", a.norm).to_lowercase());

    let emit = |name: &str, r: crate::norms::NormReport, report: &mut Report| -> Result<Rational> {
        if !r.recheck(&space, &mu, None) {
            return Err(Error::Invariant(format!(
                "{name} certificate does not reproduce its value"
            )));
        }
        let (value, cert) = report::norm(&labels, &r);
        report.result(name, value);
        report.certificate(name, cert);
        Ok(r.value)
    };
    match a.norm {
        NormKind::Kr => {
            emit("kr", kr_norm_primal(&space, &mu)?, &mut report)?;
        }
        NormKind::Hk => {
            emit("hk", hk_norm(&space, &mu)?, &mut report)?;
        }
        NormKind::Dp => {
            emit("dp", dp_norm(&space, &mu)?, &mut report)?;
        }
        NormKind::All => {
            let primal = emit("kr_primal", kr_norm_primal(&space, &mu)?, &mut report)?;
            let dual = emit("kr_dual", kr_norm_dual(&space, &mu)?, &mut report)?;
            if primal != dual {
                return Err(Error::Invariant(format!(
                    "primal {primal} differs from dual {dual}"
                )));
            }
            report.result("kr", rational_value(&primal));
            report.result("kr_primal_equals_dual", true);
            emit("hk", hk_norm(&space, &mu)?, &mut report)?;
            emit("dp", dp_norm(&space, &mu)?, &mut report)?;
        }
    }
    Ok(Done {
        report,
        code: EXIT_OK,
    })
}

fn verdict_code(v: bool) -> i32 {
    if v {
        EXIT_OK
    } else {
        EXIT_FALSE
    }
}

fn cmd_check(a: &CheckArgs) -> Result<Done> {
    let mut report = Report::new("check");
    let doc = read_document(&a.space)?;
    report.inputs.push(doc.to_canonical());
    let name = match a.property {
        PropertyKind::Wlr => "wlr",
        PropertyKind::DpRigidity => "dp-rigidity",
        PropertyKind::ExtremalCone => "extremal-cone",
        PropertyKind::Lemma1 => "lemma1",
    };
    report.param("property", name);
    let verdict = match a.property {
        PropertyKind::Wlr | PropertyKind::DpRigidity => {
            let space = doc.to_space()?;
            let r = match a.property {
                PropertyKind::Wlr => wlr_check(&space)?,
                _ => dp_coincidence_check(&space)?,
            };
            if !r.recheck(&space)? {
                return Err(Error::Invariant("certificate does not re-check".into()));
            }
            let (results, cert) = report::rigidity(&space, &r);
            report.results = results.as_object().cloned().unwrap_or_default();
            report.certificate("witness", cert);
            r.verdict
        }
        PropertyKind::ExtremalCone => {
            let d = Semimetric::new(doc.distances.clone())?;
            let r = cone_extremality(&d)?;
            let (results, cert) = report::cone(&r);
            report.results = results.as_object().cloned().unwrap_or_default();
            report.certificate("face", cert);
            r.extremal
        }
        PropertyKind::Lemma1 => {
            let data = CandidateVertexData::from_distances(&doc.distances)?;
            let r = lemma1_check(&data)?;
            let (results, cert) = report::lemma1(&doc.labels, &r);
            report.results = results.as_object().cloned().unwrap_or_default();
            report.certificate("witness", cert);
            r.is_metric && r.hull_condition
        }
    };
    report.result("verdict", verdict);
    Ok(Done {
        report,
        code: verdict_code(verdict),
    })
}

fn cmd_defect(a: &DefectArgs) -> Result<Done> {
    let mut report = Report::new("defect");
    let (doc, space) = load_space(&a.space, &mut report)?;
    let subset = parse_subset(&doc, a.subset.as_deref())?;
    report.param("subset", report::labels_of(space.labels(), &subset));
    let r = match a.kind {
        DefectKind::Rigidity => {
            let eps = parse_rational(&a.epsilon)?;
            report.param("kind", "rigidity");
            report.param("epsilon", rational_value(&eps));
            rigidity_defect(&space, &subset, &eps)?
        }
        DefectKind::Universality | DefectKind::AlmostUniversality => {
            report.param("sample", a.sample);
            report.param("seed", a.seed);
            if matches!(a.kind, DefectKind::Universality) {
                report.param("kind", "universality");
                universality_defect(&space, &subset, a.sample, a.seed)?
            } else {
                report.param("kind", "almost-universality");
                almost_universality_defect(&space, &subset, a.sample, a.seed)?
            }
        }
    };
    if !r.recheck(&space)? {
        return Err(Error::Invariant("defect witness does not re-check".into()));
    }
    let (results, cert) = report::rigidity(&space, &r);
    report.results = results.as_object().cloned().unwrap_or_default();
    report.certificate("worst", cert);
    Ok(Done {
        report,
        code: EXIT_OK,
    })
}

fn function_arg(text: Option<&str>, len: usize) -> Result<LipschitzFunction> {
    let text = text
        .ok_or_else(|| Error::Precondition("--function is required for this operation".into()))?;
    let values = parse_rational_list(text)?;
    if values.len() != len {
        return Err(Error::Shape(format!(
            "function has {} values, expected {len}",
            values.len()
        )));
    }
    Ok(LipschitzFunction::new(values))
}

/// The first `original.len()` points of `grown` carry exactly the original
/// labels and distances.
fn isometric_extension(original: &FiniteMetricSpace, grown: &FiniteMetricSpace) -> bool {
    let n = original.len();
    grown.len() >= n
        && grown.labels()[..n] == *original.labels()
        && (0..n).all(|i| grown.matrix()[i][..n] == original.matrix()[i][..])
}

fn trace_monotone(t: &ExtensionTrace) -> bool {
    t.rounds
        .windows(2)
        .all(|w| w[1].initial_defect <= w[0].initial_defect)
}

fn cmd_build(a: &BuildArgs) -> Result<Done> {
    let mut report = Report::new("build");
    let (doc, space) = load_space(&a.space, &mut report)?;
    let constraint: DistanceConstraint = a.constraint.parse()?;
    let mut checks = Map::new();
    let op = format!("{:?}", a.op).to_lowercase();
    report.param("op", op.as_str());
    let grown = match a.op {
        BuildOp::Extend => {
            let g = function_arg(a.function.as_deref(), space.len())?;
            report.param(
                "function",
                report::function(space.labels(), &(0..space.len()).collect::<Vec<_>>(), &g),
            );
            report.param("constraint", constraint.name());
            katetov_extend(&space, &g, constraint)?
        }
        BuildOp::Realize => {
            let subset = parse_subset(&doc, a.subset.as_deref())?;
            let f = function_arg(a.function.as_deref(), subset.len())?;
            report.param("subset", report::labels_of(space.labels(), &subset));
            report.param("function", report::function(space.labels(), &subset, &f));
            report.param("constraint", constraint.name());
            let r = additive_realization(&space, &subset, &f, constraint)?;
            report.result("constant", rational_value(&r.constant));
            report.result("extremal", r.extremal);
            let defect = representability_defect(&r.space, &subset, &f, true)?.defect;
            checks.insert("realized_defect_zero".into(), Value::Bool(defect.is_zero()));
            r.space
        }
        BuildOp::Pierce => {
            let f = function_arg(a.function.as_deref(), space.len())?;
            report.param(
                "function",
                report::function(space.labels(), &(0..space.len()).collect::<Vec<_>>(), &f),
            );
            report.param("normalize", !a.no_normalize);
            let p = pierce_face(&space, &f, !a.no_normalize)?;
            let labels = p.space.labels().to_vec();
            report.result("near_constant", rational_value(&p.near_constant));
            report.result("far_constant", rational_value(&p.far_constant));
            report.result(
                "extension",
                report::function(
                    &labels,
                    &(0..p.space.len()).collect::<Vec<_>>(),
                    &p.extension,
                ),
            );
            report.result("tight_vertex", report::measure(&labels, &p.tight_vertex));
            let value = p.tight_vertex.pair_with(p.extension.values());
            checks.insert("tight_vertex_value_one".into(), Value::Bool(value.is_one()));
            checks.insert(
                "extension_one_lipschitz".into(),
                Value::Bool(lipschitz_constant(&p.space, &p.extension)?.is_one()),
            );
            p.space
        }
        BuildOp::Rigidify => {
            let eps = parse_rational(&a.epsilon)?;
            report.param("epsilon", rational_value(&eps));
            report.param("rounds", a.rounds);
            report.param("max_new_points", a.max_new_points);
            report.param("subsets_per_round", a.subsets_per_round);
            report.param("constraint", constraint.name());
            report.param("seed", a.seed);
            let t = rigidify(
                &space,
                &eps,
                &RigidifyOptions {
                    max_rounds: a.rounds,
                    constraint,
                    seed: a.seed,
                    max_new_points_per_round: a.max_new_points,
                    subsets_per_round: a.subsets_per_round,
                },
            )?;
            checks.insert(
                "initial_defect_non_increasing".into(),
                Value::Bool(trace_monotone(&t)),
            );
            report.result("trace", report::trace(&t));
            t.space
        }
        BuildOp::Grow => {
            report.param("rounds", a.rounds);
            report.param("points_per_round", a.points_per_round);
            report.param("sample", a.sample);
            report.param("constraint", constraint.name());
            report.param("seed", a.seed);
            let t = grow_universal(
                &space,
                constraint,
                &GrowOptions {
                    rounds: a.rounds,
                    points_per_round: a.points_per_round,
                    seed: a.seed,
                    sample_size: a.sample,
                },
            )?;
            checks.insert(
                "initial_defect_non_increasing".into(),
                Value::Bool(trace_monotone(&t)),
            );
            checks.insert(
                "constraint_respected".into(),
                Value::Bool(constraint.check_space(&t.space).is_ok()),
            );
            report.result("trace", report::trace(&t));
            t.space
        }
    };
    checks.insert(
        "valid_metric".into(),
        Value::Bool(validate_metric(grown.matrix())?.is_none()),
    );
    checks.insert(
        "isometric_extension".into(),
        Value::Bool(isometric_extension(&space, &grown)),
    );
    let all_pass = checks.values().all(|v| v == &Value::Bool(true));
    let out_doc = SpaceDocument::from_space(&grown);
    report.result("space", out_doc.to_value());
    report.result(
        "space_digest",
        sha256_hex(out_doc.to_canonical().as_bytes()),
    );
    report.result("checks", Value::Object(checks));
    report.result("checks_passed", all_pass);
    if let Some(path) = &a.out {
        std::fs::write(path, out_doc.to_canonical())
            .map_err(|e| Error::Precondition(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(Done {
        report,
        code: verdict_code(all_pass),
    })
}

fn cmd_search(a: &SearchArgs) -> Result<Done> {
    let mut report = Report::new("search");
    report.param("n", a.n);
    report.param("budget", a.budget);
    report.param("seed", a.seed);
    match a.target {
        SearchTarget::Wlr5plus => {
            report.param("target", "wlr5plus");
            let r = wlr_search(a.n, a.budget, a.seed)?;
            let mut reverified = true;
            for s in &r.findings {
                reverified &= wlr_check(s)?.verdict;
            }
            report.result("samples", r.samples);
            report.result("hits", r.wlr_count);
            report.result(
                "findings",
                Value::Array(
                    r.findings
                        .iter()
                        .map(|s| report::matrix(s.matrix()))
                        .collect(),
                ),
            );
            report.result("all_reverified", reverified);
        }
        SearchTarget::ExtremalCone => {
            report.param("target", "extremal-cone");
            report.param("commensurable", a.commensurable);
            let r = search_extremal(a.n, a.budget, a.seed, a.commensurable)?;
            let mut reverified = true;
            for d in &r.findings {
                reverified &= cone_extremality(d)?.extremal;
            }
            report.result("samples", r.samples);
            report.result("hits", r.extremal_hits);
            report.result(
                "findings",
                Value::Array(r.findings.iter().map(report::semimetric).collect()),
            );
            report.result("all_reverified", reverified);
        }
    }
    Ok(Done {
        report,
        code: EXIT_OK,
    })
}

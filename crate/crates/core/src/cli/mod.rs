//! Command-line front end: spec files in, plain or JSON reports out.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | I/O failure while writing the report |
//! | 2 | malformed spec file or arguments |
//! | 3 | a module precondition failed |
//! | 4 | obstruction verdict |
//! | 5 | golden suite failure |

pub mod golden;
pub mod report;
pub mod spec;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use crate::barcoh::{group_cohomology, truncated_cohomology, DEFAULT_DEGREE_CAP};
use crate::cealg::{ce_cohomology, ce_module_cohomology};
use crate::divisor::{act, LogPointElement, MeromorphicSection, ScalingArrow, DEFAULT_SERIES_ORDER};
use crate::extend::{
    build_central_extension, extension_class, fiber_is_central, find_isomorphism, finite_extension, section_from_strings,
    table_to_grid, unipotent_matrix, verify_matrix_model, ExtensionSpec, Verification,
};
use crate::forms::{parse_form, Chart};
use crate::periods::{
    discreteness_check, integrability_verdict, period, Discreteness, NumericForm, PeriodLattice, Verdict,
    DEFAULT_GENERATOR_FLOOR, DEFAULT_TOL,
};
use crate::vanest::{check_cocycle, differentiate, integrate_ladder, CocycleExpr, VanEstError};
pub use report::{ReportDocument, Row};
use spec::{parse_document, FormSpec, Source, SpecError, SpecFile};

pub const EXIT_OK: u8 = 0;
pub const EXIT_IO: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_PRECONDITION: u8 = 3;
pub const EXIT_OBSTRUCTED: u8 = 4;
pub const EXIT_GOLDEN: u8 = 5;

const EXIT_HELP: &str = "Exit codes: 0 success, 1 I/O failure, 2 malformed spec or arguments, \
3 precondition failure, 4 obstruction verdict, 5 golden suite failure.";

#[derive(Parser, Debug)]
#[command(name = "lgcoh", version, about = "Cohomology of discrete groupoids and Lie algebras, van Est ladders, extensions and periods", after_help = EXIT_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Plain, global = true)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Include wall-clock timing (makes reports non-reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
    /// Suppress ladder traces.
    #[arg(short, long, global = true)]
    pub quiet: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Json,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Cohomology of a discrete group or finite groupoid.
    Cohomology {
        spec: PathBuf,
        /// A degree `k` or a range `a..b` (inclusive).
        #[arg(long)]
        degree: Option<String>,
        /// Truncated cohomology (degree-0 cochains removed).
        #[arg(long)]
        truncated: bool,
    },
    /// Chevalley–Eilenberg cohomology of a Lie algebra.
    Ce {
        spec: PathBuf,
        #[arg(long)]
        degree: Option<String>,
    },
    /// Integrate or differentiate cocycles on a coordinate group.
    Vanest {
        #[arg(value_enum)]
        action: VanEstAction,
        spec: PathBuf,
        /// Emit the ladder trace even with --quiet.
        #[arg(long)]
        trace: bool,
    },
    /// Build a central extension from a 2-cocycle.
    Extend { spec: PathBuf },
    /// Periods of a closed 2-form and the integrability verdict.
    Periods {
        spec: PathBuf,
        #[arg(long)]
        mesh: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Arithmetic in the module of meromorphic units.
    Divisor {
        spec: PathBuf,
        /// Truncation order of dlog series.
        #[arg(long)]
        order: Option<usize>,
    },
    /// Run the acceptance criteria and the golden corpus.
    Golden {
        /// Directory of `*.toml` specs with `*.expected` reports.
        #[arg(long)]
        dir: Option<PathBuf>,
        /// Randomized cases per property suite.
        #[arg(long, default_value_t = golden::DEFAULT_PROPERTY_CASES)]
        cases: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VanEstAction {
    Integrate,
    Differentiate,
    Check,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("{path}:{err}")]
    Parse { path: String, err: SpecError },
    #[error("{0}")]
    Precondition(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse { .. } => EXIT_PARSE,
            CliError::Precondition(_) => EXIT_PRECONDITION,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

/// A finished job: the report and whether it ended in an obstruction.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: ReportDocument,
    pub obstructed: bool,
}

impl Outcome {
    fn ok(report: ReportDocument) -> Self {
        Self { report, obstructed: false }
    }

    pub fn exit_code(&self) -> u8 {
        if self.obstructed {
            EXIT_OBSTRUCTED
        } else {
            EXIT_OK
        }
    }
}

fn pre(e: impl std::fmt::Display) -> CliError {
    CliError::Precondition(e.to_string())
}

struct Loaded {
    path: String,
    text: String,
    doc: SpecFile,
}

impl Loaded {
    fn src(&self) -> Source<'_> {
        Source { text: &self.text }
    }

    fn parse_err(&self, err: SpecError) -> CliError {
        CliError::Parse { path: self.path.clone(), err }
    }

    fn missing(&self, table: &str) -> CliError {
        self.parse_err(SpecError { line: None, column: None, msg: format!("missing [{table}] table") })
    }
}

fn load(path: &Path) -> Result<Loaded, CliError> {
    let display = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{display}: {e}")))?;
    let doc = parse_document(&text).map_err(|err| CliError::Parse { path: display.clone(), err })?;
    Ok(Loaded { path: display, text, doc })
}

fn degree_range(arg: Option<&str>, file: Option<[usize; 2]>, default: (usize, usize)) -> Result<(usize, usize), CliError> {
    let bad = |s: &str| CliError::Parse {
        path: "--degree".into(),
        err: SpecError { line: None, column: None, msg: format!("expected k or a..b, found {s:?}") },
    };
    match (arg, file) {
        (Some(s), _) => match s.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (a.trim().parse().map_err(|_| bad(s))?, b.trim().parse().map_err(|_| bad(s))?);
                if a > b {
                    return Err(bad(s));
                }
                Ok((a, b))
            }
            None => {
                let k = s.trim().parse().map_err(|_| bad(s))?;
                Ok((k, k))
            }
        },
        (None, Some([a, b])) => Ok((a, b)),
        (None, None) => Ok(default),
    }
}

/// Runs one non-golden command.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let spec = match &cli.command {
        Command::Cohomology { spec, .. }
        | Command::Ce { spec, .. }
        | Command::Vanest { spec, .. }
        | Command::Extend { spec }
        | Command::Periods { spec, .. }
        | Command::Divisor { spec, .. } => spec,
        Command::Golden { .. } => return Err(CliError::Precondition("golden is run through run_golden".into())),
    };
    dispatch(&cli.command, load(spec)?, !cli.quiet)
}

/// Runs a command on spec text instead of a file; the command's own spec
/// path is ignored and `name` stands in for it in reports and errors.
pub fn run_source(command: &Command, name: &str, text: &str, verbose: bool) -> Result<Outcome, CliError> {
    let doc = parse_document(text).map_err(|err| CliError::Parse { path: name.into(), err })?;
    dispatch(command, Loaded { path: name.into(), text: text.into(), doc }, verbose)
}

fn dispatch(command: &Command, l: Loaded, verbose: bool) -> Result<Outcome, CliError> {
    match command {
        Command::Cohomology { degree, truncated, .. } => run_cohomology(l, degree.as_deref(), *truncated),
        Command::Ce { degree, .. } => run_ce(l, degree.as_deref()),
        Command::Vanest { action, trace, .. } => run_vanest(l, *action, verbose || *trace),
        Command::Extend { .. } => run_extend(l),
        Command::Periods { mesh, tol, .. } => run_periods(l, *mesh, *tol),
        Command::Divisor { order, .. } => run_divisor(l, *order),
        Command::Golden { .. } => Err(CliError::Precondition("golden is run through run_golden".into())),
    }
}

fn run_cohomology(l: Loaded, degree: Option<&str>, truncated_flag: bool) -> Result<Outcome, CliError> {
    let src = l.src();
    let gs = l.doc.groupoid.as_ref().ok_or_else(|| l.missing("groupoid"))?;
    let ms = l.doc.module.as_ref().ok_or_else(|| l.missing("module"))?;
    let g = gs.build(&src).map_err(|e| l.parse_err(e))?;
    let m = ms.build(&g, &src).map_err(|e| l.parse_err(e))?;
    let opts = l.doc.options.clone().unwrap_or_default();
    let truncated = truncated_flag || opts.truncated.unwrap_or(false);
    let (lo, hi) = degree_range(degree, opts.degrees, (0, if truncated { DEFAULT_DEGREE_CAP - 1 } else { DEFAULT_DEGREE_CAP }))?;
    let mut report = ReportDocument::new("cohomology", &l.path);
    for k in lo..=hi {
        let h = if truncated {
            truncated_cohomology(&g, &m, k, DEFAULT_DEGREE_CAP)
        } else {
            group_cohomology(&g, &m, k, DEFAULT_DEGREE_CAP)
        };
        let h = h.map_err(pre)?;
        let key = if truncated { format!("H_0^{k}") } else { format!("H^{k}") };
        report.push(key, h.to_string());
    }
    Ok(Outcome::ok(report))
}

fn run_ce(l: Loaded, degree: Option<&str>) -> Result<Outcome, CliError> {
    let src = l.src();
    let ls = l.doc.lie_algebra.as_ref().ok_or_else(|| l.missing("lie_algebra"))?;
    let (_, g) = ls.build(&src).map_err(|e| l.parse_err(e))?;
    let (rep, module) = match &l.doc.representation {
        Some(r) => r.build(&g, &src).map_err(|e| l.parse_err(e))?,
        None => (crate::cealg::RepresentationData::trivial(&g, 1), None),
    };
    let opts = l.doc.options.clone().unwrap_or_default();
    let (lo, hi) = degree_range(degree, opts.degrees, (0, g.dim()))?;
    let mut report = ReportDocument::new("ce", &l.path);
    for k in lo..=hi {
        let h = match &module {
            Some(m) => ce_module_cohomology(&g, m, k),
            None => ce_cohomology(&g, &rep, k),
        };
        report.push(format!("H^{k}"), h.to_string());
    }
    Ok(Outcome::ok(report))
}

fn run_vanest(l: Loaded, action: VanEstAction, trace: bool) -> Result<Outcome, CliError> {
    let src = l.src();
    let g = l.doc.group.as_ref().ok_or_else(|| l.missing("group"))?.build(&src).map_err(|e| l.parse_err(e))?;
    let vs = l.doc.vanest.as_ref().ok_or_else(|| l.missing("vanest"))?;
    let name = match action {
        VanEstAction::Integrate => "vanest-integrate",
        VanEstAction::Differentiate => "vanest-differentiate",
        VanEstAction::Check => "vanest-check",
    };
    let mut report = ReportDocument::new(name, &l.path);
    if action == VanEstAction::Integrate {
        let text = vs.form.as_ref().ok_or_else(|| l.parse_err(src.error("form", "required for integrate")))?;
        let omega = parse_form(text, &g.lie_chart()).map_err(|e| l.parse_err(src.error("form", e)))?;
        report.push("form", omega.to_string());
        return match integrate_ladder(&g, &omega) {
            Ok(res) => {
                if trace {
                    report.traces = res.trace.clone();
                }
                report.push("cocycle", res.cocycle.to_string());
                let check = check_cocycle(&g, &res.cocycle).map_err(pre)?;
                report.push("cocycle check", if check.holds { "passes" } else { "fails" });
                let back = differentiate(&g, &res.cocycle).map_err(pre)?;
                report.push("differentiates to", back.to_string());
                Ok(Outcome::ok(report))
            }
            Err(VanEstError::ObstructionEncountered { step }) => {
                report.push("verdict", "obstructed");
                report.push("obstruction at", step);
                Ok(Outcome { report, obstructed: true })
            }
            Err(e) => Err(pre(e)),
        };
    }
    let text = vs.cocycle.as_ref().ok_or_else(|| l.parse_err(src.error("cocycle", "required")))?;
    let degree = vs.degree.ok_or_else(|| l.parse_err(src.error("degree", "required with cocycle")))?;
    let f = CocycleExpr::parse(&g, degree, text).map_err(|e| l.parse_err(src.error("cocycle", e)))?;
    report.push("cocycle", f.to_string());
    let check = check_cocycle(&g, &f).map_err(pre)?;
    if action == VanEstAction::Check {
        report.push("cocycle check", if check.holds { "passes" } else { "fails" });
        report.push("coboundary", check.residual_text());
        report.push("normalized", f.is_normalized(&g).to_string());
        return Ok(Outcome::ok(report));
    }
    report.push("form", differentiate(&g, &f).map_err(pre)?.to_string());
    Ok(Outcome::ok(report))
}

fn run_extend(l: Loaded) -> Result<Outcome, CliError> {
    let src = l.src();
    let mut report = ReportDocument::new("extend", &l.path);
    if let Some(fe) = &l.doc.finite_extension {
        let group = fe.group.table(&src).map_err(|e| l.parse_err(e))?;
        let action = fe.action.clone().unwrap_or_else(|| vec![1; group.len()]);
        let table = finite_extension(&group, fe.modulus, &action, &fe.cocycle).map_err(pre)?;
        report.push("order", table.len().to_string());
        report.push("table", table_to_grid(&table));
        if let Some(cmp) = &fe.compare {
            let other = cmp.table(&src).map_err(|e| l.parse_err(e))?;
            let iso = find_isomorphism(&table, &other);
            report.push("isomorphic to comparison", iso.is_some().to_string());
            if let Some(map) = iso {
                report.push("isomorphism", map.iter().map(usize::to_string).collect::<Vec<_>>().join(" "));
            }
        }
        return Ok(Outcome::ok(report));
    }
    let g = l.doc.group.as_ref().ok_or_else(|| l.missing("group"))?.build(&src).map_err(|e| l.parse_err(e))?;
    let es = l.doc.extension.as_ref().ok_or_else(|| l.missing("extension"))?;
    if es.fiber.len() != es.cocycles.len() {
        return Err(l.parse_err(src.error("cocycles", "one cocycle per fiber coordinate")));
    }
    let cocycles = es
        .cocycles
        .iter()
        .map(|c| CocycleExpr::parse(&g, 2, c))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| l.parse_err(src.error("cocycles", e)))?;
    let fiber: Vec<&str> = es.fiber.iter().map(String::as_str).collect();
    let built = build_central_extension(&ExtensionSpec::new(g.clone(), &fiber, cocycles.clone())).map_err(pre)?;
    report.push("coordinates", format!("({})", built.coords().join(", ")));
    report.push("law", built.law_string());
    report.push(
        "associativity",
        match built.associativity {
            Verification::Symbolic => "verified symbolically".to_string(),
            Verification::Sampled { points } => format!("verified at {points} sample points"),
        },
    );
    report.push("fiber central", fiber_is_central(&built).to_string());
    for (c, f) in fiber.iter().zip(&cocycles) {
        report.push(format!("curvature of {c}"), differentiate(&g, f).map_err(pre)?.to_string());
    }
    if let Some(model) = &es.matrix_model {
        if model != "unipotent" || built.dim() != 3 {
            return Err(l.parse_err(src.error("matrix_model", "only \"unipotent\" on three coordinates is supported")));
        }
        report.push("unipotent matrix model", verify_matrix_model(&built, unipotent_matrix).to_string());
    }
    if let Some(section) = &es.section {
        let parts: Vec<&str> = section.iter().map(String::as_str).collect();
        let s = section_from_strings(&built, &parts).map_err(|e| l.parse_err(src.error("section", e)))?;
        let class = extension_class(&built, &s).map_err(pre)?;
        for (c, f) in fiber.iter().zip(&class.cocycles) {
            report.push(format!("class of {c} from section"), f.to_string());
        }
        report.push("differs by coboundary", class.certified.to_string());
    }
    Ok(Outcome::ok(report))
}

fn fmt_f(x: f64) -> String {
    let s = format!("{x:.9}");
    if s == "-0.000000000" {
        "0.000000000".into()
    } else {
        s
    }
}

fn run_periods(l: Loaded, mesh: Option<usize>, tol: Option<f64>) -> Result<Outcome, CliError> {
    let src = l.src();
    let ps = l.doc.periods.as_ref().ok_or_else(|| l.missing("periods"))?;
    let opts = l.doc.options.clone().unwrap_or_default();
    let tol = tol.or(opts.tol).unwrap_or(DEFAULT_TOL);
    let mesh = mesh.or(opts.mesh).unwrap_or(crate::periods::MIN_MESH);
    let mut report = ReportDocument::new("periods", &l.path);
    if let Some(values) = &ps.values {
        let floor = ps.floor.unwrap_or(DEFAULT_GENERATOR_FLOOR);
        match discreteness_check(values, tol, floor).map_err(pre)? {
            Discreteness::Discrete { generator } => {
                report.push("discreteness", "discrete");
                report.push("generator", fmt_f(generator));
            }
            Discreteness::Indiscrete => report.push("discreteness", "indiscrete"),
        }
        return Ok(Outcome::ok(report));
    }
    let form = match ps.form.as_ref().ok_or_else(|| l.parse_err(src.error("form", "required")))? {
        FormSpec::SphereArea { k } => NumericForm::sphere_area(*k),
        FormSpec::Symbolic { chart, expr } => {
            let chart = Chart::new(chart.iter().cloned());
            let f = parse_form(expr, &chart).map_err(|e| l.parse_err(src.error("expr", e)))?;
            if f.degree() != 2 {
                return Err(l.parse_err(src.error("expr", "a 2-form is required")));
            }
            NumericForm::from_symbolic(&f)
        }
    };
    if ps.cycles.is_empty() {
        return Err(l.parse_err(src.error("cycles", "at least one cycle is required")));
    }
    let mut values = Vec::new();
    for (i, c) in ps.cycles.iter().enumerate() {
        let p = period(&form, c, mesh).map_err(pre)?;
        let value = if p.im.abs() > tol { format!("{} + {}i", fmt_f(p.re), fmt_f(p.im)) } else { fmt_f(p.re) };
        report.push(format!("period[{i}]"), value);
        report.push(format!("error[{i}]"), if p.error < 1e-10 { "< 1e-10".to_string() } else { format!("{:.1e}", p.error) });
        report.push(format!("closedness[{i}]"), if p.closedness_residual < tol.max(1e-6) { "ok".to_string() } else { format!("residual {:.1e}", p.closedness_residual) });
        values.push(p.re);
    }
    let lattice = PeriodLattice { generators: ps.lattice.clone().unwrap_or_else(|| vec![1.0]) };
    report.push("lattice", format!("<{}>", lattice.generators.iter().map(|g| fmt_f(*g)).collect::<Vec<_>>().join(", ")));
    let verdict = integrability_verdict(&values, &lattice, tol).map_err(pre)?;
    let obstructed = match verdict {
        Verdict::Integrable => {
            report.push("verdict", "integrable");
            false
        }
        Verdict::Obstructed { witness, distance } => {
            report.push("verdict", "obstructed");
            report.push("witness", fmt_f(witness));
            report.push("distance to lattice", fmt_f(distance));
            true
        }
    };
    Ok(Outcome { report, obstructed })
}

fn run_divisor(l: Loaded, order: Option<usize>) -> Result<Outcome, CliError> {
    let src = l.src();
    let ds = l.doc.divisor.as_ref().ok_or_else(|| l.missing("divisor"))?;
    let order = order.or(ds.order).unwrap_or(DEFAULT_SERIES_ORDER);
    let mut report = ReportDocument::new("divisor", &l.path);
    let el = |s: &str, key: &str| s.parse::<LogPointElement>().map_err(|e| l.parse_err(src.error(key, e)));
    for s in &ds.normalize {
        let p = el(s, "normalize")?;
        report.push(format!("normalize {p}"), p.normalize().to_string());
    }
    for [a, b] in &ds.products {
        let (p, q) = (el(a, "products")?, el(b, "products")?);
        report.push(format!("{p} * {q}"), p.multiply(&q).map_err(pre)?.to_string());
    }
    for job in &ds.actions {
        let a = crate::divisor::parse_grat(&job.a).map_err(|e| l.parse_err(src.error("actions", e)))?;
        let x = crate::divisor::parse_grat(&job.x).map_err(|e| l.parse_err(src.error("actions", e)))?;
        let g = ScalingArrow::new(a, x).map_err(pre)?;
        let p = el(&job.element, "actions")?;
        report.push(
            format!("({}, {}) . {p}", crate::divisor::fmt_grat(&g.a), crate::divisor::fmt_grat(&g.x)),
            act(&g, &p).map_err(pre)?.to_string(),
        );
    }
    for s in &ds.sections {
        let sec: MeromorphicSection = s.parse().map_err(|e| match e {
            crate::divisor::DivisorError::UnitViolation => pre(e),
            other => l.parse_err(src.error("sections", other)),
        })?;
        report.push(format!("section {sec}"), sec.to_meromorphic().display(&["x"]).to_string());
        report.push(format!("dlog {sec}"), format!("{} + O(x^{})", sec.dlog(order).display(&["x"]), order + 1));
    }
    Ok(Outcome::ok(report))
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_PARSE } else { EXIT_OK });
        }
    };
    ExitCode::from(execute(&cli))
}

/// Runs a parsed command line, printing the report, and returns the exit code.
pub fn execute(cli: &Cli) -> u8 {
    if let Command::Golden { dir, cases } = &cli.command {
        let summary = golden::run_golden_with(dir.as_deref(), *cases);
        let text = match cli.format {
            Format::Plain => summary.to_plain(),
            Format::Json => serde_json::to_string_pretty(&summary).expect("serializable") + "\n",
        };
        if let Err(e) = emit(cli, &text) {
            eprintln!("error: {e}");
            return e.exit_code();
        }
        return if summary.all_passed() { EXIT_OK } else { EXIT_GOLDEN };
    }
    let start = Instant::now();
    match run(cli) {
        Ok(mut outcome) => {
            if cli.timing {
                outcome.report.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
            }
            let text = outcome.report.render(cli.format);
            if let Err(e) = emit(cli, &text) {
                eprintln!("error: {e}");
                return e.exit_code();
            }
            outcome.exit_code()
        }
        Err(e) => {
            let kind = match e {
                CliError::Parse { .. } => "parse error",
                CliError::Precondition(_) => "precondition failed",
                CliError::Io(_) => "i/o error",
            };
            eprintln!("{kind}: {e}");
            e.exit_code()
        }
    }
}

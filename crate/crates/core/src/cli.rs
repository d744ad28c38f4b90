//! The `hmsvf` command-line front end.
//!
//! Subcommands:
//!
//! - `check`: run one property and write its report; exit 0 on PASS, 1 on
//!   FAIL, 2 on ERROR or invalid configuration.
//! - `falsify`: seeded random search; exit 1 when a counterexample is found
//!   (the search succeeded), 0 when none was found within the budget.
//! - `suite`: run the property battery over a family set and compare each
//!   verdict with its expected status; exit 0 iff all asserted links match.
//! - `report`: summarise a report file and emit `x,y,margin` plot data.
//!
//! Settings are resolved as command-line flags, then `--config` JSON keys,
//! then built-in defaults.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::harmonic::GridSpec;
use crate::report::{canonical_json, CheckReport, Link, Verdict};
use crate::set_algebra::DEFAULT_TOL;
use crate::svf::{parse_svf_spec, SetValuedFunction};
use crate::verifier::{self, CheckConfig, Property};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "hmsvf",
    version,
    about = "Verify harmonic m-concavity of set-valued functions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one property check over the grid.
    Check(RunArgs),
    /// Search randomly for a counterexample.
    Falsify(RunArgs),
    /// Run the property battery and compare verdicts with expectations.
    Suite(RunArgs),
    /// Summarise a report and write `x,y,margin` plot data.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Default, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub property: Option<String>,
    /// Set-valued function spec, e.g. `kind=box expr="x" domain=[0.5,8]`.
    #[arg(long)]
    pub svf: Vec<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub m: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub depth: Option<u32>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub budget: Option<usize>,
    /// Grid shape as `nx,ny,nt`.
    #[arg(long)]
    pub grid: Option<String>,
    /// Worker cap (0 = all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// JSON file with any of the fields above, plus suite settings.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    pub path: PathBuf,
    /// Where to write the plot CSV; defaults to the report path with a `.csv` extension.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Contents of a `--config` file. Unknown keys are rejected by name.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub property: Option<String>,
    pub svf: Option<Vec<String>>,
    pub m: Option<f64>,
    pub c: Option<f64>,
    pub t: Option<f64>,
    pub tol: Option<f64>,
    pub eps: Option<f64>,
    pub depth: Option<u32>,
    pub seed: Option<u64>,
    pub budget: Option<usize>,
    pub grid: Option<String>,
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub lambdas: Option<Vec<f64>>,
    /// Suite families as SVF specs.
    pub families: Option<Vec<String>>,
    pub ms: Option<Vec<f64>>,
    pub cs: Option<Vec<f64>>,
    pub expectations: Option<Vec<Expectation>>,
}

/// Expected verdict for suite links; `m` and `c` match any value when absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    pub family: String,
    pub property: Property,
    #[serde(default)]
    pub m: Option<f64>,
    #[serde(default)]
    pub c: Option<f64>,
    pub verdict: Verdict,
}

/// Fully resolved settings for one invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub property: Option<Property>,
    pub svf: Vec<String>,
    pub check: CheckConfig,
    pub m_given: bool,
    pub c_given: bool,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub file: FileConfig,
    base_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn resolve(args: &RunArgs) -> Result<Self, String> {
        let (file, base_dir) = match &args.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
                let file: FileConfig = serde_json::from_str(&text)
                    .map_err(|e| format!("config {}: {e}", path.display()))?;
                (file, path.parent().map(Path::to_path_buf))
            }
            None => (FileConfig::default(), None),
        };
        let property = match args.property.as_ref().or(file.property.as_ref()) {
            Some(p) => Some(
                p.parse::<Property>()
                    .map_err(|e| format!("property: {e}"))?,
            ),
            None => None,
        };
        let svf = if args.svf.is_empty() {
            file.svf.clone().unwrap_or_default()
        } else {
            args.svf.clone()
        };
        let m = args.m.or(file.m);
        let mut check = CheckConfig::new(m.unwrap_or(1.0));
        let c = args.c.or(file.c);
        if let Some(c) = c {
            check.c = c;
        }
        check.t_fixed = args.t.or(file.t);
        if let Some(tol) = args.tol.or(file.tol) {
            check.tol = tol;
        }
        if let Some(eps) = args.eps.or(file.eps) {
            check.eps = eps;
        }
        if let Some(d) = args.depth.or(file.depth) {
            check.dyadic_depth = d;
        }
        if let Some(s) = args.seed.or(file.seed) {
            check.seed = s;
        }
        if let Some(b) = args.budget.or(file.budget) {
            check.sample_budget = b;
        }
        if let Some(g) = args.grid.as_ref().or(file.grid.as_ref()) {
            check.grid = g.parse::<GridSpec>().map_err(|e| format!("grid: {e}"))?;
        }
        if let Some(j) = args.jobs.or(file.jobs) {
            check.jobs = j;
        }
        if let Some(l) = &file.lambdas {
            check.lambdas = l.clone();
        }
        if m.is_some() {
            check.validate().map_err(|e| e.to_string())?;
        }
        Ok(RunConfig {
            property,
            svf,
            check,
            m_given: m.is_some(),
            c_given: c.is_some(),
            out: args.out.clone().or(file.out.clone()),
            format: args.format.or(file.format).unwrap_or(Format::Json),
            file,
            base_dir,
        })
    }

    fn require_m(&self) -> Result<(), String> {
        if self.m_given {
            Ok(())
        } else {
            Err("missing required setting `m` (use --m or the `m` config key)".into())
        }
    }

    fn require_property(&self) -> Result<Property, String> {
        self.property.ok_or_else(|| {
            "missing required setting `property` (use --property or the `property` config key)"
                .into()
        })
    }

    fn functions(&self) -> Result<Vec<SetValuedFunction>, String> {
        self.svf
            .iter()
            .map(|s| {
                parse_svf_spec(s, self.base_dir.as_deref()).map_err(|e| format!("svf {s:?}: {e}"))
            })
            .collect()
    }

    /// The effective settings, echoed into every report.
    pub fn echo(&self) -> Value {
        let mut v = serde_json::to_value(&self.check).expect("config serializes");
        let obj = v.as_object_mut().unwrap();
        obj.insert(
            "property".into(),
            serde_json::to_value(self.property).unwrap(),
        );
        obj.insert("svf".into(), serde_json::to_value(&self.svf).unwrap());
        obj.insert("format".into(), serde_json::to_value(self.format).unwrap());
        v
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_ERROR
            } else {
                EXIT_PASS
            };
        }
    };
    let outcome = match &cli.command {
        Command::Check(a) => RunConfig::resolve(a).and_then(|c| cmd_check(&c)),
        Command::Falsify(a) => RunConfig::resolve(a).and_then(|c| cmd_falsify(&c)),
        Command::Suite(a) => RunConfig::resolve(a).and_then(|c| cmd_suite(&c)),
        Command::Report(a) => cmd_report(&a.path, a.out.as_deref()),
    };
    match outcome {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            EXIT_ERROR
        }
    }
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Pass => EXIT_PASS,
        Verdict::Fail => EXIT_FAIL,
        Verdict::Error => EXIT_ERROR,
    }
}

/// Canonical JSON for a report with the effective config attached.
pub fn report_json(report: &CheckReport, cfg: &RunConfig) -> String {
    let mut v = serde_json::to_value(report).expect("reports serialize");
    v.as_object_mut()
        .unwrap()
        .insert("config_echo".into(), cfg.echo());
    canonical_json(&v)
}

/// `x,y,margin` rows for heatmaps; missing margins are left empty.
pub fn cells_csv(report: &CheckReport) -> String {
    let mut out = String::from("x,y,margin\n");
    for c in &report.cells {
        let m = c.margin.map(|m| format!("{m:.16e}")).unwrap_or_default();
        let _ = writeln!(out, "{:.16e},{:.16e},{m}", c.x, c.y);
    }
    out
}

fn emit(report: &CheckReport, cfg: &RunConfig) -> Result<(), String> {
    let text = match cfg.format {
        Format::Json => report_json(report, cfg),
        Format::Csv => cells_csv(report),
    };
    match &cfg.out {
        Some(p) => fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn summary_line(report: &CheckReport) -> String {
    let margin = report
        .worst_margin
        .map_or("none".into(), |m| format!("{m:.6e}"));
    let mut s = format!(
        "{}: {} (worst margin {margin})",
        report.check, report.verdict
    );
    if let Some(w) = &report.witness {
        let _ = write!(s, " at x = {}, y = {}, t = {}", w.x, w.y, w.t);
    }
    s
}

pub fn cmd_check(cfg: &RunConfig) -> Result<i32, String> {
    let property = cfg.require_property()?;
    cfg.require_m()?;
    let fs = cfg.functions()?;
    let report = verifier::run_property(property, &fs, &cfg.check).map_err(|e| e.to_string())?;
    emit(&report, cfg)?;
    eprintln!("{}", summary_line(&report));
    Ok(verdict_code(report.verdict))
}

pub fn cmd_falsify(cfg: &RunConfig) -> Result<i32, String> {
    let property = cfg.require_property()?;
    cfg.require_m()?;
    let fs = cfg.functions()?;
    if fs.len() != 1 {
        return Err(format!("falsify takes exactly one --svf, got {}", fs.len()));
    }
    let report = verifier::falsify(&fs[0], &cfg.check, property).map_err(|e| e.to_string())?;
    emit(&report, cfg)?;
    eprintln!("{}", summary_line(&report));
    Ok(verdict_code(report.verdict))
}

const SUITE_PROPERTIES: [Property; 10] = Property::ALL;
const INFORMATIONAL: [Property; 3] = [Property::ChainTToM, Property::BdApprox, Property::Closure];
const DEFAULT_SUITE_T: f64 = 0.3;

pub fn default_families() -> Vec<String> {
    [
        r#"kind=box expr="x" domain=[0.5,8]"#,
        r#"kind=box expr="0" domain=[0.5,8]"#,
        r#"kind=symmetric expr="1/x^2" domain=[0.5,8]"#,
    ]
    .into_iter()
    .map(String::from)
    .collect()
}

/// Built-in expected verdicts for the default families.
///
/// `box(x)` and `box(0)` are m-concave for every `m` in (0, 1] but fail any
/// positive modulus because their lower endpoint is flat. `symmetric(1/x^2)`
/// satisfies the strong inclusion with equality at `m = 1, c = 1` and fails
/// every inclusion at `m = 1/2`.
pub fn default_expectation(family: &str, m: f64, c: f64, property: Property) -> Option<Verdict> {
    use Property::*;
    match family {
        "box(x)" | "box(0)" => match property {
            MConcave | MMidconcave | Kuhn => Some(Verdict::Pass),
            StrongMTConcave | StrongMConcave | StrongMMidconcave | Dyadic => Some(if c == 0.0 {
                Verdict::Pass
            } else {
                Verdict::Fail
            }),
            _ => None,
        },
        "symmetric(1/x^2)" if m == 1.0 && c <= 1.0 => match property {
            MConcave | MMidconcave | Kuhn | StrongMTConcave | StrongMConcave
            | StrongMMidconcave | Dyadic => Some(Verdict::Pass),
            _ => None,
        },
        "symmetric(1/x^2)" if m == 0.5 => match property {
            Kuhn => Some(Verdict::Pass),
            MConcave | MMidconcave | StrongMTConcave | StrongMConcave | StrongMMidconcave
            | Dyadic => Some(Verdict::Fail),
            _ => None,
        },
        _ => None,
    }
}

fn lookup_expectation(
    overrides: &[Expectation],
    family: &str,
    m: f64,
    c: f64,
    property: Property,
) -> Option<Verdict> {
    overrides
        .iter()
        .rev()
        .find(|e| {
            e.family == family
                && e.property == property
                && e.m.is_none_or(|v| v == m)
                && e.c.is_none_or(|v| v == c)
        })
        .map(|e| e.verdict)
        .or_else(|| default_expectation(family, m, c, property))
}

/// Runs every suite property for every family, `m`, and `c`.
pub fn run_suite(cfg: &RunConfig) -> Result<CheckReport, String> {
    let specs = if !cfg.svf.is_empty() {
        cfg.svf.clone()
    } else {
        cfg.file.families.clone().unwrap_or_else(default_families)
    };
    if specs.is_empty() {
        return Err("suite family list is empty".into());
    }
    let overrides = cfg.file.expectations.clone().unwrap_or_default();
    let ms = if cfg.m_given {
        vec![cfg.check.m]
    } else {
        cfg.file.ms.clone().unwrap_or_else(|| vec![0.5, 1.0])
    };
    let cs = if cfg.c_given {
        vec![cfg.check.c]
    } else {
        cfg.file.cs.clone().unwrap_or_else(|| vec![0.0, 1.0])
    };
    let t = cfg.check.t_fixed.unwrap_or(DEFAULT_SUITE_T);
    let rc = RunConfig {
        svf: specs.clone(),
        ..cfg.clone()
    };
    let fams = rc.functions()?;

    let mut links = Vec::new();
    for f in &fams {
        for &m in &ms {
            for &c in &cs {
                let mut check = cfg.check.clone();
                check.m = m;
                check.c = c;
                check.t_fixed = Some(t);
                check
                    .validate()
                    .map_err(|e| format!("{} m={m} c={c}: {e}", f.label()))?;
                for p in SUITE_PROPERTIES {
                    let fs: Vec<SetValuedFunction> = vec![f.clone(); p.arity()];
                    let report =
                        verifier::run_property(p, &fs, &check).map_err(|e| e.to_string())?;
                    let name = format!("{} m={m} c={c} {p}", f.label());
                    let mut link = Link::from_report(name, &report);
                    link.witness = report.witness.clone();
                    link.expected = lookup_expectation(&overrides, f.label(), m, c, p);
                    link.informational = INFORMATIONAL.contains(&p) || link.expected.is_none();
                    links.push(link);
                }
            }
        }
    }

    let mut report = CheckReport::new("suite");
    let asserted: Vec<&Link> = links.iter().filter(|l| !l.informational).collect();
    let mismatches: Vec<&str> = asserted
        .iter()
        .filter(|l| Some(l.verdict) != l.expected)
        .map(|l| l.name.as_str())
        .collect();
    report.verdict = if mismatches.is_empty() {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    report.stats.evaluated = asserted.len();
    report.stats.violations = mismatches.len();
    report.stats.skipped = links.len() - asserted.len();
    report.note = Some(if mismatches.is_empty() {
        format!(
            "all {} asserted links match their expected status",
            asserted.len()
        )
    } else {
        format!("unexpected status: {}", mismatches.join("; "))
    });
    report.links = links;
    Ok(report)
}

pub fn cmd_suite(cfg: &RunConfig) -> Result<i32, String> {
    let report = run_suite(cfg)?;
    emit(&report, cfg)?;
    eprintln!("suite: {}", report.note.as_deref().unwrap_or(""));
    Ok(verdict_code(report.verdict))
}

/// Text summary of a report file.
pub fn summarize(report: &CheckReport, tol: f64) -> String {
    let mut s = summary_line(report);
    s.push('\n');
    if let Some(w) = report.witness.as_ref().filter(|w| !w.detail.is_empty()) {
        let _ = writeln!(s, "  witness detail: {}", w.detail);
    }
    let st = &report.stats;
    let _ = writeln!(
        s,
        "  grid {:?}: {} evaluated, {} skipped, {} violations",
        st.grid, st.evaluated, st.skipped, st.violations
    );
    let over = report
        .cells
        .iter()
        .filter(|c| c.margin.is_some_and(|m| m > tol))
        .count();
    let _ = writeln!(
        s,
        "  {} cells, {over} above tol {tol:e}",
        report.cells.len()
    );
    for l in &report.links {
        let margin = l.margin.map_or("none".into(), |m| format!("{m:.6e}"));
        let mut line = format!("  [{}] {}: {margin}", l.verdict, l.name);
        if let Some(e) = l.expected {
            let _ = write!(line, " (expected {e})");
        }
        if l.informational {
            line.push_str(" (informational)");
        }
        let _ = writeln!(s, "{line}");
    }
    for p in &report.series {
        let _ = writeln!(s, "  n = {}, q = {}: {:.6e}", p.n, p.q, p.value);
    }
    if let Some(n) = &report.note {
        let _ = writeln!(s, "  note: {n}");
    }
    s
}

pub fn cmd_report(path: &Path, out: Option<&Path>) -> Result<i32, String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| format!("malformed report {}: {e}", path.display()))?;
    let tol = value
        .pointer("/config_echo/tol")
        .and_then(Value::as_f64)
        .unwrap_or(DEFAULT_TOL);
    let report: CheckReport = serde_json::from_value(value)
        .map_err(|e| format!("malformed report {}: {e}", path.display()))?;
    let csv_path = out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| path.with_extension("csv"));
    fs::write(&csv_path, cells_csv(&report))
        .map_err(|e| format!("cannot write {}: {e}", csv_path.display()))?;
    print!("{}", summarize(&report, tol));
    println!("  plot data: {}", csv_path.display());
    Ok(EXIT_PASS)
}

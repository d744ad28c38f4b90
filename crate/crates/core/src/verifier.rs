//! Grid and randomized verification of harmonic m-concavity properties.
//!
//! Every check evaluates inclusions of the form
//!
//! ```text
//! F(h_m(x, y, t)) + r·B̄  ⊆  t·F(y) + m(1 − t)·F(x)      (+ eps·B̄)
//! r = c·m·t(1 − t)·((x − y)/(xy))²
//! ```
//!
//! over a log-spaced `(x, y)` grid on the function's domain and a set of
//! weights `t`, and reports the largest signed margin (see
//! [`crate::set_algebra`]). Pairs whose harmonic point leaves the domain are
//! skipped and counted. Rows of the grid are processed in parallel and merged
//! in grid order, so reports are deterministic for any worker count.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::harmonic::{
    check_m, harmonic_point, log_space, DyadicRational, GridSpec, HarmonicError,
};
use crate::report::{Cell, CheckReport, Link, SeriesPoint, Verdict, Witness, WorstTracker};
use crate::set_algebra::{Interval, SetError, SetValue, DEFAULT_TOL};
use crate::svf::{SetValuedFunction, SvfError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("property {0} needs a fixed t in (0, 1)")]
    MissingT(Property),
    #[error("property {0} does not support random search")]
    Unsupported(Property),
    #[error("property {0} takes {1} set-valued function(s)")]
    Arity(Property, usize),
    #[error(transparent)]
    Svf(#[from] SvfError),
    #[error(transparent)]
    Harmonic(#[from] HarmonicError),
}

/// Parameters shared by all checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckConfig {
    pub m: f64,
    pub c: f64,
    pub t_fixed: Option<f64>,
    pub grid: GridSpec,
    pub tol: f64,
    pub eps: f64,
    pub dyadic_depth: u32,
    pub seed: u64,
    pub sample_budget: usize,
    /// Scalars used by the closure suite's scale links.
    pub lambdas: Vec<f64>,
    /// Worker cap; `0` lets the thread pool decide.
    pub jobs: usize,
}

impl CheckConfig {
    pub fn new(m: f64) -> Self {
        CheckConfig {
            m,
            c: 0.0,
            t_fixed: None,
            grid: GridSpec::default(),
            tol: DEFAULT_TOL,
            eps: 0.0,
            dyadic_depth: 8,
            seed: 0,
            sample_budget: 1000,
            lambdas: vec![2.0, -1.0],
            jobs: 0,
        }
    }

    pub fn with_c(mut self, c: f64) -> Self {
        self.c = c;
        self
    }

    pub fn with_t(mut self, t: f64) -> Self {
        self.t_fixed = Some(t);
        self
    }

    pub fn with_grid(mut self, grid: GridSpec) -> Self {
        self.grid = grid;
        self
    }

    pub fn with_depth(mut self, depth: u32) -> Self {
        self.dyadic_depth = depth;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.sample_budget = budget;
        self
    }

    pub fn validate(&self) -> Result<(), VerifyError> {
        check_m(self.m)?;
        let bad = |what: String| Err(VerifyError::Config(what));
        if !(self.c >= 0.0 && self.c.is_finite()) {
            return bad(format!("c must be nonnegative, got {}", self.c));
        }
        if !(self.tol >= 0.0 && self.tol.is_finite()) {
            return bad(format!("tol must be nonnegative, got {}", self.tol));
        }
        if !(self.eps >= 0.0 && self.eps.is_finite()) {
            return bad(format!("eps must be nonnegative, got {}", self.eps));
        }
        if self.dyadic_depth < 1 || self.dyadic_depth > 30 {
            return bad(format!(
                "depth must lie in 1..=30, got {}",
                self.dyadic_depth
            ));
        }
        if let Some(t) = self.t_fixed {
            if !(t > 0.0 && t < 1.0) {
                return bad(format!("t must lie in (0, 1), got {t}"));
            }
        }
        if self.lambdas.iter().any(|l| !l.is_finite()) {
            return bad("lambdas must be finite".into());
        }
        Ok(())
    }

    fn require_t(&self, p: Property) -> Result<f64, VerifyError> {
        self.t_fixed.ok_or(VerifyError::MissingT(p))
    }
}

/// The named checks, as used on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Property {
    MConcave,
    MMidconcave,
    StrongMTConcave,
    StrongMConcave,
    StrongMMidconcave,
    Kuhn,
    ChainTToM,
    Dyadic,
    BdApprox,
    Closure,
}

impl Property {
    pub const ALL: [Property; 10] = [
        Property::MConcave,
        Property::MMidconcave,
        Property::StrongMTConcave,
        Property::StrongMConcave,
        Property::StrongMMidconcave,
        Property::Kuhn,
        Property::ChainTToM,
        Property::Dyadic,
        Property::BdApprox,
        Property::Closure,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::MConcave => "m-concave",
            Property::MMidconcave => "m-midconcave",
            Property::StrongMTConcave => "strong-m-t-concave",
            Property::StrongMConcave => "strong-m-concave",
            Property::StrongMMidconcave => "strong-m-midconcave",
            Property::Kuhn => "kuhn",
            Property::ChainTToM => "chain-t-to-m",
            Property::Dyadic => "dyadic",
            Property::BdApprox => "bd-approx",
            Property::Closure => "closure",
        }
    }

    /// Number of set-valued functions the property takes.
    pub fn arity(self) -> usize {
        if self == Property::Closure {
            2
        } else {
            1
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Property::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Property::ALL.iter().map(|p| p.name()).collect();
                format!(
                    "unknown property {s:?}; expected one of {}",
                    names.join(", ")
                )
            })
    }
}

impl From<Property> for String {
    fn from(p: Property) -> Self {
        p.name().to_string()
    }
}

impl TryFrom<String> for Property {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// Runs `property` on `fs` (one function, or two for the closure suite).
/// `bd-approx` reads its target weight from `cfg.t_fixed`.
pub fn run_property(
    property: Property,
    fs: &[SetValuedFunction],
    cfg: &CheckConfig,
) -> Result<CheckReport, VerifyError> {
    if fs.len() != property.arity() {
        return Err(VerifyError::Arity(property, property.arity()));
    }
    let f = &fs[0];
    match property {
        Property::MConcave => check_m_concave(f, cfg),
        Property::MMidconcave => check_m_midconcave(f, cfg),
        Property::StrongMTConcave => check_strong_m_t_concave(f, cfg),
        Property::StrongMConcave => check_strong_m_concave(f, cfg),
        Property::StrongMMidconcave => check_strong_m_midconcave(f, cfg),
        Property::Kuhn => check_kuhn(f, cfg),
        Property::ChainTToM => check_chain_t_to_m(f, cfg),
        Property::Dyadic => check_dyadic(f, cfg),
        Property::BdApprox => check_bd_approx(f, cfg, cfg.require_t(property)?),
        Property::Closure => closure_suite(f, &fs[1], cfg),
    }
}

/// Squared harmonic distance `((x − y)/(xy))²`.
#[inline]
fn harmonic_gap_sq(x: f64, y: f64) -> f64 {
    let d = (x - y) / (x * y);
    d * d
}

/// `t·F(y) + s·F(x)`.
fn combination(fy: &SetValue, t: f64, fx: &SetValue, s: f64) -> Result<SetValue, SetError> {
    fy.scale(t).mink_sum(&fx.scale(s))
}

fn relax(v: SetValue, eps: f64) -> Result<SetValue, SetError> {
    if eps == 0.0 {
        Ok(v)
    } else {
        v.inflate(eps)
    }
}

/// Both sides of the strong m-concavity inclusion at one sample.
struct Sides {
    h: f64,
    lhs: SetValue,
    rhs: SetValue,
}

impl Sides {
    fn margin(&self) -> Result<f64, SvfError> {
        Ok(self.lhs.excursion(&self.rhs)?)
    }
}

/// Evaluates the strong inclusion sides; `None` when `h_m` leaves the domain.
#[allow(clippy::too_many_arguments)]
fn strong_sides(
    f: &SetValuedFunction,
    fx: &SetValue,
    fy: &SetValue,
    x: f64,
    y: f64,
    t: f64,
    m: f64,
    c: f64,
    eps: f64,
) -> Result<Option<Sides>, SvfError> {
    let Some(h) = f.domain().admit(harmonic_point(x, y, t, m)) else {
        return Ok(None);
    };
    let r = c * m * t * (1.0 - t) * harmonic_gap_sq(x, y);
    let lhs = f.eval(h)?.inflate(r)?;
    let rhs = relax(combination(fy, t, fx, m * (1.0 - t))?, eps)?;
    Ok(Some(Sides { h, lhs, rhs }))
}

fn sides_detail(s: &Sides) -> String {
    format!("h = {}, lhs = {}, rhs = {}", s.h, s.lhs, s.rhs)
}

/// One grid sample handed to a sweep closure.
struct Pt<'a> {
    j: usize,
    x: f64,
    y: f64,
    fx: &'a SetValue,
    fy: &'a SetValue,
}

struct RowOut {
    trackers: Vec<WorstTracker>,
    cells: Vec<Cell>,
    error: Option<(Witness, String)>,
}

struct SweepOut {
    trackers: Vec<WorstTracker>,
    cells: Vec<Cell>,
}

/// The `(x, y)` grid of a function together with its values there.
struct Grid {
    xs: Vec<f64>,
    ys: Vec<f64>,
    fxs: Vec<SetValue>,
    fys: Vec<SetValue>,
    tol: f64,
    jobs: usize,
}

impl Grid {
    fn new(f: &SetValuedFunction, cfg: &CheckConfig) -> Result<Self, (Witness, String)> {
        let d = f.domain();
        let xs = log_space(d.lo(), d.hi(), cfg.grid.nx);
        let ys = log_space(d.lo(), d.hi(), cfg.grid.ny);
        let eval_all = |pts: &[f64]| {
            pts.iter()
                .map(|&p| {
                    f.eval(p).map_err(|e| {
                        (
                            Witness::new(p, p, 0.0).with_detail("grid point"),
                            e.to_string(),
                        )
                    })
                })
                .collect::<Result<Vec<_>, _>>()
        };
        let fxs = eval_all(&xs)?;
        let fys = eval_all(&ys)?;
        Ok(Grid {
            xs,
            ys,
            fxs,
            fys,
            tol: cfg.tol,
            jobs: cfg.jobs,
        })
    }

    fn shape(&self, nt: usize) -> Vec<usize> {
        vec![self.xs.len(), self.ys.len(), nt]
    }

    /// Evaluates `links` margins per sample; link 0 feeds the heatmap cells.
    fn sweep<E>(&self, ts: &[f64], links: usize, eval: E) -> Result<SweepOut, (Witness, String)>
    where
        E: Fn(&Pt<'_>, f64) -> Result<Vec<Option<f64>>, SvfError> + Sync,
    {
        let row = |i: usize| -> RowOut {
            let mut out = RowOut {
                trackers: vec![WorstTracker::default(); links],
                cells: Vec::with_capacity(self.ys.len()),
                error: None,
            };
            let x = self.xs[i];
            for (j, &y) in self.ys.iter().enumerate() {
                let pt = Pt {
                    j,
                    x,
                    y,
                    fx: &self.fxs[i],
                    fy: &self.fys[j],
                };
                let mut cell: Option<f64> = None;
                for &t in ts {
                    match eval(&pt, t) {
                        Ok(margins) => {
                            for (k, m) in margins.into_iter().enumerate() {
                                match m {
                                    Some(m) => {
                                        out.trackers[k]
                                            .record(m, self.tol, || Witness::new(x, y, t));
                                        if k == 0 {
                                            cell = Some(cell.map_or(m, |c: f64| c.max(m)));
                                        }
                                    }
                                    None => out.trackers[k].skip(),
                                }
                            }
                        }
                        Err(e) => {
                            out.error = Some((Witness::new(x, y, t), e.to_string()));
                            return out;
                        }
                    }
                }
                out.cells.push(Cell { x, y, margin: cell });
            }
            out
        };
        let rows: Vec<RowOut> = if self.jobs == 1 {
            (0..self.xs.len()).map(row).collect()
        } else if self.jobs == 0 {
            (0..self.xs.len()).into_par_iter().map(row).collect()
        } else {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(self.jobs)
                .build()
                .map_err(|e| (Witness::new(f64::NAN, f64::NAN, f64::NAN), e.to_string()))?;
            pool.install(|| (0..self.xs.len()).into_par_iter().map(row).collect())
        };
        let mut merged = SweepOut {
            trackers: vec![WorstTracker::default(); links],
            cells: Vec::with_capacity(self.xs.len() * self.ys.len()),
        };
        for r in rows {
            if let Some(err) = r.error {
                return Err(err);
            }
            for (acc, t) in merged.trackers.iter_mut().zip(r.trackers) {
                acc.merge(t);
            }
            merged.cells.extend(r.cells);
        }
        Ok(merged)
    }
}

/// Strong m-concavity inclusion at every weight in `ts`.
fn inclusion_check(
    name: &str,
    f: &SetValuedFunction,
    cfg: &CheckConfig,
    ts: &[f64],
    c: f64,
) -> Result<CheckReport, VerifyError> {
    cfg.validate()?;
    let grid = match Grid::new(f, cfg) {
        Ok(g) => g,
        Err((w, msg)) => return Ok(CheckReport::error(name, Some(w), msg)),
    };
    let m = cfg.m;
    let out = grid.sweep(ts, 1, |p, t| {
        let s = strong_sides(f, p.fx, p.fy, p.x, p.y, t, m, c, cfg.eps)?;
        Ok(vec![s.map(|s| s.margin()).transpose()?])
    });
    let out = match out {
        Ok(o) => o,
        Err((w, msg)) => return Ok(CheckReport::error(name, Some(w), msg)),
    };
    let mut report =
        out.trackers
            .into_iter()
            .next()
            .unwrap()
            .into_report(name, cfg.tol, grid.shape(ts.len()));
    report.cells = out.cells;
    describe_witness(&mut report, |w| {
        let (fx, fy) = (f.eval(w.x).ok()?, f.eval(w.y).ok()?);
        let s = strong_sides(f, &fx, &fy, w.x, w.y, w.t, m, c, cfg.eps).ok()??;
        Some(sides_detail(&s))
    });
    Ok(report)
}

fn describe_witness(report: &mut CheckReport, describe: impl FnOnce(&Witness) -> Option<String>) {
    if let Some(w) = report.witness.as_mut() {
        if let Some(d) = describe(w) {
            w.detail = d;
        }
    }
}

/// `F(h_m) ⊆ t·F(y) + m(1 − t)·F(x)` for every grid `t`.
pub fn check_m_concave(
    f: &SetValuedFunction,
    cfg: &CheckConfig,
) -> Result<CheckReport, VerifyError> {
    inclusion_check("m-concave", f, cfg, &cfg.grid.t_values(), 0.0)
}

/// The `t = 1/2` case of [`check_m_concave`].
pub fn check_m_midconcave(
    f: &SetValuedFunction,
    cfg: &CheckConfig,
) -> Result<CheckReport, VerifyError> {
    inclusion_check("m-midconcave", f, cfg, &[0.5], 0.0)
}

/// Strong inclusion with modulus `cfg.c` at the single weight `cfg.t_fixed`.
pub fn check_strong_m_t_concave(
    f: &SetValuedFunction,
    cfg: &CheckConfig,
) -> Result<CheckReport, VerifyError> {
    let t = cfg.require_t(Property::StrongMTConcave)?;
    inclusion_check("strong-m-t-concave", f, cfg, &[t], cfg.c)
}

pub fn check_strong_m_concave(
    f: &SetValuedFunction,
    cfg: &CheckConfig,
) -> Result<CheckReport, VerifyError> {
    inclusion_check("strong-m-concave", f, cfg, &cfg.grid.t_values(), cfg.c)
}

pub fn check_strong_m_midconcave(
    f: &SetValuedFunction,
    cfg: &CheckConfig,
) -> Result<CheckReport, VerifyError> {
    inclusion_check("strong-m-midconcave", f, cfg, &[0.5], cfg.c)
}

/// Fixed-`t` strong concavity implies strong midconcavity.
///
/// Premise and conclusion are both measured. The verdict is FAIL only when
/// the premise passes and the conclusion fails; a failed premise makes the
/// implication vacuous (PASS, no margin).
pub fn check_kuhn(f: &SetValuedFunction, cfg: &CheckConfig) -> Result<CheckReport, VerifyError> {
    cfg.require_t(Property::Kuhn)?;
    let premise = check_strong_m_t_concave(f, cfg)?;
    let conclusion = check_strong_m_midconcave(f, cfg)?;
    implication("kuhn", premise, conclusion, cfg.tol)
}

fn implication(
    name: &str,
    premise: CheckReport,
    conclusion: CheckReport,
    tol: f64,
) -> Result<CheckReport, VerifyError> {
    let mut r = CheckReport::new(name);
    r.links = vec![
        Link::from_report("premise", &premise),
        Link::from_report("conclusion", &conclusion),
    ];
    if premise.verdict == Verdict::Error || conclusion.verdict == Verdict::Error {
        r.verdict = Verdict::Error;
        r.note = premise.note.or(conclusion.note);
        return Ok(r);
    }
    r.stats = conclusion.stats.clone();
    if premise.is_pass() {
        r.verdict = Verdict::from_margin(conclusion.worst_margin, tol);
        r.worst_margin = conclusion.worst_margin;
        r.witness = conclusion.witness;
        r.note = Some(format!(
            "premise holds; implication {}",
            if r.is_pass() { "holds" } else { "violated" }
        ));
    } else {
        r.verdict = Verdict::Pass;
        r.note = Some("premise fails; implication holds vacuously".into());
    }
    r.links.push(Link {
        name: "implication".into(),
        verdict: r.verdict,
        margin: r.worst_margin,
        witness: r.witness.clone(),
        expected: None,
        informational: false,
        detail: r.note.clone(),
    });
    Ok(r)
}

const CHAIN_LINKS: [&str; 5] = ["E", "L1", "L2", "L3", "L3'"];

/// Measures each inclusion of the `t → m` chain separately at `t = cfg.t_fixed`:
///
/// - `E`:   `F(h_m) + m·r·B̄ ⊆ t·F(y) + m(1 − t)·F(x)` (end to end)
/// - `L1`:  `F(h_m) + m·r·B̄ ⊆ F(h_1) + r·B̄`
/// - `L2`:  `F(h_1) + r·B̄ ⊆ t·F(y) + (1 − t)·F(x)`
/// - `L3`:  `t·F(y) + (1 − t)·F(x) ⊆ t·F(y) + m(1 − t)·F(x)`
/// - `L3'`: `F(x) ⊆ m·F(x)` (once per `x`)
///
/// with `r = c·t(1 − t)·((x − y)/(xy))²`. The overall verdict is that of `E`;
/// the remaining links are reported, not asserted.
pub fn check_chain_t_to_m(
    f: &SetValuedFunction,
    cfg: &CheckConfig,
) -> Result<CheckReport, VerifyError> {
    let name = "chain-t-to-m";
    let t = cfg.require_t(Property::ChainTToM)?;
    cfg.validate()?;
    let grid = match Grid::new(f, cfg) {
        Ok(g) => g,
        Err((w, msg)) => return Ok(CheckReport::error(name, Some(w), msg)),
    };
    let (m, c, eps) = (cfg.m, cfg.c, cfg.eps);
    let out = grid.sweep(&[t], CHAIN_LINKS.len(), |p, t| {
        let r = c * t * (1.0 - t) * harmonic_gap_sq(p.x, p.y);
        let rhs_m = relax(combination(p.fy, t, p.fx, m * (1.0 - t))?, eps)?;
        let rhs_1 = combination(p.fy, t, p.fx, 1.0 - t)?;
        let d = f.domain();
        let fhm = match d.admit(harmonic_point(p.x, p.y, t, m)) {
            Some(h) => Some(f.eval(h)?.inflate(m * r)?),
            None => None,
        };
        let fh1 = match d.admit(harmonic_point(p.x, p.y, t, 1.0)) {
            Some(h) => Some(f.eval(h)?.inflate(r)?),
            None => None,
        };
        let e = fhm.as_ref().map(|a| a.excursion(&rhs_m)).transpose()?;
        let l1 = match (&fhm, &fh1) {
            (Some(a), Some(b)) => Some(a.excursion(&relax(b.clone(), eps)?)?),
            _ => None,
        };
        let l2 = fh1
            .as_ref()
            .map(|b| b.excursion(&relax(rhs_1.clone(), eps)?))
            .transpose()?;
        let l3 = Some(rhs_1.excursion(&rhs_m)?);
        let l3p = if p.j == 0 {
            Some(p.fx.excursion(&relax(p.fx.scale(m), eps)?)?)
        } else {
            None
        };
        Ok(vec![e, l1, l2, l3, l3p])
    });
    let out = match out {
        Ok(o) => o,
        Err((w, msg)) => return Ok(CheckReport::error(name, Some(w), msg)),
    };
    let shape = grid.shape(1);
    let mut links = Vec::new();
    let mut overall = None;
    for (tracker, link_name) in out.trackers.into_iter().zip(CHAIN_LINKS) {
        let mut sub = tracker.into_report(link_name, cfg.tol, shape.clone());
        if link_name == "L3'" {
            if let Some(w) = sub.witness.as_mut() {
                w.detail = format!(
                    "F(x) = {} vs m·F(x) with m = {m}",
                    f.eval(w.x).map(|v| v.to_string()).unwrap_or_default()
                );
            }
            // counted once per x, not per pair
            sub.stats.skipped = 0;
        }
        links.push(Link::from_report(link_name, &sub));
        if overall.is_none() {
            overall = Some(sub);
        }
    }
    let mut report = overall.unwrap();
    report.check = name.into();
    report.links = links;
    report.cells = out.cells;
    report.note = Some("verdict is link E; links L1, L2, L3, L3' are measurements".into());
    Ok(report)
}

/// Strong inclusion at every interior dyadic `k/2^n`, `n ≤ cfg.dyadic_depth`.
///
/// One link per depth; each depth enumerates only the new (odd `k`) dyadics,
/// so depth 8 covers 255 weights.
pub fn check_dyadic(f: &SetValuedFunction, cfg: &CheckConfig) -> Result<CheckReport, VerifyError> {
    let name = "dyadic";
    cfg.validate()?;
    let mut total = WorstTracker::default();
    let mut cells: Vec<Cell> = Vec::new();
    let mut links = Vec::new();
    let mut weights = 0;
    let mut shape = Vec::new();
    for n in 1..=cfg.dyadic_depth {
        let ts: Vec<f64> = DyadicRational::interior_at_depth(n)
            .map(|q| q.value())
            .collect();
        weights += ts.len();
        let level = inclusion_check(name, f, cfg, &ts, cfg.c)?;
        if level.verdict == Verdict::Error {
            return Ok(level);
        }
        links.push(Link::from_report(format!("n={n}"), &level));
        shape = level.stats.grid.clone();
        total.merge(WorstTracker {
            worst: level.worst_margin,
            witness: level.witness.clone(),
            evaluated: level.stats.evaluated,
            skipped: level.stats.skipped,
            violations: level.stats.violations,
        });
        if cells.is_empty() {
            cells = level.cells;
        } else {
            for (acc, c) in cells.iter_mut().zip(level.cells) {
                acc.margin = match (acc.margin, c.margin) {
                    (Some(a), Some(b)) => Some(if b > a { b } else { a }),
                    (a, b) => a.or(b),
                };
            }
        }
    }
    if let Some(last) = shape.last_mut() {
        *last = weights;
    }
    let mut report = total.into_report(name, cfg.tol, shape);
    if let Some(w) = report.witness.as_mut() {
        let level = links.iter().find(|l| l.witness.as_ref() == Some(&*w));
        if let Some(d) = level.and_then(|l| l.witness.as_ref()) {
            w.detail = d.detail.clone();
        }
    }
    report.links = links;
    report.cells = cells;
    Ok(report)
}

/// Measures the ε-approximation behind the midpoint-to-full concavity step.
///
/// For each depth `n` the nearest interior dyadic `q` to `t_target` stands in
/// for `t`. Per grid pair, with `h_s` the harmonic m-combination at weight `s`
/// and `ρ = ((x − y)/(xy))²`:
///
/// - `ε1 = exc(q·F(y), t·F(y))⁺`
/// - `ε2 = exc(m(1 − q)·F(x), m(1 − t)·F(x))⁺`
/// - `ε3 = (c·m·ρ·(t(1 − t) − q(1 − q)))⁺`
/// - `ε4 = exc(F(h_t), F(h_q))⁺`
/// - `δ  = exc(F(h_q) + c·m·q(1 − q)·ρ·B̄, q·F(y) + m(1 − q)·F(x))⁺` (dyadic premise)
///
/// Chaining those inclusions gives
/// `F(h_t) + c·m·t(1 − t)·ρ·B̄ ⊆ t·F(y) + m(1 − t)·F(x) + (ε1 + ε2 + ε3 + ε4 + δ)·B̄`,
/// so the smallest `ε` with that slack equal to `4ε` is the sum over four.
/// `ε(n)` is its maximum over the grid.
///
/// FAIL when the dyadic premise fails at any depth, when `ε(n)` increases by
/// more than `tol`, or when a direct evaluation at `t_target` contradicts the
/// implied bound.
pub fn check_bd_approx(
    f: &SetValuedFunction,
    cfg: &CheckConfig,
    t_target: f64,
) -> Result<CheckReport, VerifyError> {
    let name = "bd-approx";
    cfg.validate()?;
    if !(t_target > 0.0 && t_target < 1.0) {
        return Err(VerifyError::Config(format!(
            "t_target must lie in (0, 1), got {t_target}"
        )));
    }
    let grid = match Grid::new(f, cfg) {
        Ok(g) => g,
        Err((w, msg)) => return Ok(CheckReport::error(name, Some(w), msg)),
    };
    let (m, c, t) = (cfg.m, cfg.c, t_target);
    let mut series = Vec::new();
    let mut links = Vec::new();
    let mut worst = WorstTracker::default();
    let mut premise_ok = true;
    let mut stats_eval = 0;
    let mut stats_skip = 0;
    for n in 1..=cfg.dyadic_depth {
        let q = DyadicRational::nearest_interior(t, n)?;
        let qv = q.value();
        let out = grid.sweep(&[qv], 3, |p, q| {
            let d = f.domain();
            let (Some(ht), Some(hq)) = (
                d.admit(harmonic_point(p.x, p.y, t, m)),
                d.admit(harmonic_point(p.x, p.y, q, m)),
            ) else {
                return Ok(vec![None, None, None]);
            };
            let rho = harmonic_gap_sq(p.x, p.y);
            let (fht, fhq) = (f.eval(ht)?, f.eval(hq)?);
            let e1 = p.fy.scale(q).excursion(&p.fy.scale(t))?.max(0.0);
            let e2 =
                p.fx.scale(m * (1.0 - q))
                    .excursion(&p.fx.scale(m * (1.0 - t)))?
                    .max(0.0);
            let e3 = (c * m * rho * (t * (1.0 - t) - q * (1.0 - q))).max(0.0);
            let e4 = fht.excursion(&fhq)?.max(0.0);
            let premise = fhq
                .inflate(c * m * q * (1.0 - q) * rho)?
                .excursion(&combination(p.fy, q, p.fx, m * (1.0 - q))?)?;
            let eps_pair = (e1 + e2 + e3 + e4 + premise.max(0.0)) / 4.0;
            let direct = fht
                .inflate(c * m * t * (1.0 - t) * rho)?
                .excursion(&combination(p.fy, t, p.fx, m * (1.0 - t))?)?;
            Ok(vec![
                Some(premise),
                Some(eps_pair),
                Some(direct - 4.0 * eps_pair),
            ])
        });
        let out = match out {
            Ok(o) => o,
            Err((w, msg)) => return Ok(CheckReport::error(name, Some(w), msg)),
        };
        let mut it = out.trackers.into_iter();
        let (premise, eps, consistency) =
            (it.next().unwrap(), it.next().unwrap(), it.next().unwrap());
        stats_eval += premise.evaluated;
        stats_skip += premise.skipped;
        let eps_n = eps.worst.unwrap_or(0.0);
        let premise_verdict = Verdict::from_margin(premise.worst, cfg.tol);
        premise_ok &= premise_verdict.is_pass();
        links.push(Link {
            name: format!("n={n} q={q}"),
            verdict: premise_verdict,
            margin: Some(eps_n),
            witness: if premise_verdict.is_pass() {
                eps.witness.clone()
            } else {
                premise.witness.clone()
            },
            expected: None,
            informational: false,
            detail: Some(format!(
                "premise worst margin {:?}; consistency worst margin {:?}",
                premise.worst, consistency.worst
            )),
        });
        if let Some(prev) = series.last().map(|s: &SeriesPoint| s.value) {
            let increase = eps_n - prev;
            worst.record(increase, cfg.tol, || {
                Witness::new(f64::NAN, f64::NAN, qv)
                    .with_detail(format!("eps({n}) - eps({}) = {increase}", n - 1))
            });
        }
        series.push(SeriesPoint {
            n,
            q: qv,
            value: eps_n,
        });
        worst.merge(premise);
        worst.merge(consistency);
    }
    let mut report = worst.into_report(name, cfg.tol, grid.shape(cfg.dyadic_depth as usize));
    report.stats.evaluated = stats_eval;
    report.stats.skipped = stats_skip;
    let monotone = series
        .windows(2)
        .all(|w| w[1].value <= w[0].value + cfg.tol);
    let last = series.last().map(|s| s.value).unwrap_or(0.0);
    report.note =
        Some(format!(
        "t_target = {t}; dyadic premise {}; eps(n) non-increasing: {monotone}; eps({}) = {last:e}",
        if premise_ok { "holds at every depth" } else { "fails" },
        cfg.dyadic_depth
    ));
    report.series = series;
    report.links = links;
    Ok(report)
}

/// Checks `d_H(t·A, s·A) ≤ |t − s|·max(|A.lo|, |A.hi|)` for all pairs of `weights`.
pub fn check_scaling_continuity(a: &Interval, weights: &[f64], tol: f64) -> CheckReport {
    let mut tracker = WorstTracker::default();
    let mag = a.magnitude();
    for &t in weights {
        for &s in weights {
            let d = a.scale(t).hausdorff(&a.scale(s));
            let bound = (t - s).abs() * mag;
            tracker.record(d - bound, tol, || {
                Witness::new(t, s, 0.0)
                    .with_detail(format!("t = {t}, s = {s}, d_H = {d}, bound = {bound}"))
            });
        }
    }
    tracker.into_report(
        "scaling-continuity",
        tol,
        vec![weights.len(), weights.len()],
    )
}

/// Seeded random search for a violation of a pointwise property.
///
/// Draws `x, y` log-uniformly on the domain and `t` according to the
/// property, then refines `t` around the worst sample by step halving.
pub fn falsify(
    f: &SetValuedFunction,
    cfg: &CheckConfig,
    property: Property,
) -> Result<CheckReport, VerifyError> {
    cfg.validate()?;
    if cfg.sample_budget == 0 {
        return Err(VerifyError::Config("sample budget must be positive".into()));
    }
    enum TMode {
        Uniform,
        Fixed(f64),
        Dyadic,
    }
    let (mode, c) = match property {
        Property::MConcave => (TMode::Uniform, 0.0),
        Property::MMidconcave => (TMode::Fixed(0.5), 0.0),
        Property::StrongMTConcave => (TMode::Fixed(cfg.require_t(property)?), cfg.c),
        Property::StrongMConcave => (TMode::Uniform, cfg.c),
        Property::StrongMMidconcave => (TMode::Fixed(0.5), cfg.c),
        Property::Dyadic => (TMode::Dyadic, cfg.c),
        other => return Err(VerifyError::Unsupported(other)),
    };
    let name = format!("falsify:{property}");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let d = *f.domain();
    let (la, lb) = (d.lo().ln(), d.hi().ln());
    let draw_log = |rng: &mut ChaCha8Rng| {
        if la == lb {
            d.lo()
        } else {
            rng.gen_range(la..=lb).exp().clamp(d.lo(), d.hi())
        }
    };
    let mut tracker = WorstTracker::default();
    let sample = |x: f64, y: f64, t: f64| -> Result<Option<Sides>, SvfError> {
        let (fx, fy) = (f.eval(x)?, f.eval(y)?);
        strong_sides(f, &fx, &fy, x, y, t, cfg.m, c, cfg.eps)
    };
    let record =
        |tracker: &mut WorstTracker, x: f64, y: f64, t: f64| -> Result<(), (Witness, String)> {
            match sample(x, y, t) {
                Ok(Some(s)) => {
                    let margin = s
                        .margin()
                        .map_err(|e| (Witness::new(x, y, t), e.to_string()))?;
                    tracker.record(margin, cfg.tol, || {
                        Witness::new(x, y, t).with_detail(sides_detail(&s))
                    });
                    Ok(())
                }
                Ok(None) => {
                    tracker.skip();
                    Ok(())
                }
                Err(e) => Err((Witness::new(x, y, t), e.to_string())),
            }
        };
    for _ in 0..cfg.sample_budget {
        let x = draw_log(&mut rng);
        let y = draw_log(&mut rng);
        let t = match mode {
            TMode::Uniform => rng.gen_range(0.0..=1.0),
            TMode::Fixed(t) => t,
            TMode::Dyadic => {
                let n = rng.gen_range(1..=cfg.dyadic_depth);
                let k = 2 * rng.gen_range(0..1u64 << (n - 1)) + 1;
                DyadicRational::new(k, n)?.value()
            }
        };
        if let Err((w, msg)) = record(&mut tracker, x, y, t) {
            return Ok(CheckReport::error(name, Some(w), msg));
        }
    }
    if matches!(mode, TMode::Uniform) {
        if let (Some(mut best), Some(w)) = (tracker.worst, tracker.witness.clone()) {
            let mut t0 = w.t;
            let mut step = 0.5 / (cfg.sample_budget as f64).sqrt();
            for _ in 0..40 {
                let mut moved = false;
                for cand in [(t0 - step).max(0.0), (t0 + step).min(1.0)] {
                    let before = tracker.worst;
                    if let Err((w, msg)) = record(&mut tracker, w.x, w.y, cand) {
                        return Ok(CheckReport::error(name, Some(w), msg));
                    }
                    if tracker.worst != before && tracker.worst.unwrap() > best {
                        best = tracker.worst.unwrap();
                        t0 = cand;
                        moved = true;
                    }
                }
                if !moved {
                    step *= 0.5;
                }
            }
        }
    }
    let mut report = tracker.into_report(name, cfg.tol, vec![cfg.sample_budget]);
    report.note = Some(if report.is_pass() {
        format!(
            "no violation within {} samples (PASS-at-budget)",
            cfg.sample_budget
        )
    } else {
        "violation found".to_string()
    });
    Ok(report)
}

/// Runs `check_m_concave` on `F + G`, `λF` for each `cfg.lambdas`, `F·G`,
/// `F ∪ G`, and `F × G`, after recording whether `F` and `G` themselves pass.
///
/// The product link is informational: its precondition (`F(x) ∩ F(y) ≠ ∅` or
/// `G(x) ∩ G(y) ≠ ∅`) is only measured on grid pairs, and its detail gives
/// the fraction of pairs satisfying it.
pub fn closure_suite(
    f: &SetValuedFunction,
    g: &SetValuedFunction,
    cfg: &CheckConfig,
) -> Result<CheckReport, VerifyError> {
    let name = "closure";
    cfg.validate()?;
    let pf = check_m_concave(f, cfg)?;
    let pg = check_m_concave(g, cfg)?;
    let mut links = vec![
        Link::from_report("premise F", &pf).informational(),
        Link::from_report("premise G", &pg).informational(),
    ];
    links.push(Link::from_report(
        "sum",
        &check_m_concave(&SetValuedFunction::sum(f, g)?, cfg)?,
    ));
    for &l in &cfg.lambdas {
        let sf = SetValuedFunction::scale(l, f);
        let mut link = Link::from_report(format!("scale({l})"), &check_m_concave(&sf, cfg)?);
        if l < 0.0 {
            link.detail = Some("negative scalar".into());
        }
        links.push(link);
    }
    let fg = SetValuedFunction::product(f, g)?;
    let (sat, pairs) = product_precondition(f, g, cfg)?;
    links.push(
        Link::from_report("product", &check_m_concave(&fg, cfg)?)
            .informational()
            .with_detail(format!(
                "precondition holds on {sat}/{pairs} grid pairs ({:.4})",
                sat as f64 / pairs.max(1) as f64
            )),
    );
    links.push(Link::from_report(
        "union",
        &check_m_concave(&SetValuedFunction::union(f, g)?, cfg)?,
    ));
    links.push(Link::from_report(
        "cross",
        &check_m_concave(&SetValuedFunction::cross(f, g)?, cfg)?,
    ));

    let mut report = CheckReport::new(name);
    let asserted: Vec<&Link> = links.iter().filter(|l| !l.informational).collect();
    if links.iter().any(|l| l.verdict == Verdict::Error) {
        report.verdict = Verdict::Error;
        report.note = Some("a link could not be evaluated".into());
    } else if pf.is_pass() && pg.is_pass() {
        let mut tracker = WorstTracker::default();
        for l in &asserted {
            if let Some(m) = l.margin {
                let w = l.witness.clone();
                tracker.record(m, cfg.tol, || {
                    let mut w = w.unwrap_or_else(|| Witness::new(f64::NAN, f64::NAN, f64::NAN));
                    w.detail = format!("{}: {}", l.name, w.detail);
                    w
                });
            }
        }
        let evaluated = tracker.evaluated;
        let violations = tracker.violations;
        report = tracker.into_report(name, cfg.tol, vec![asserted.len()]);
        report.stats.evaluated = evaluated;
        report.stats.violations = violations;
        report.note = Some("premises hold; product link is informational".into());
    } else {
        report.note = Some("premise fails for F or G; closure holds vacuously".into());
    }
    report.links = links;
    Ok(report)
}

/// Counts grid pairs with `F(x) ∩ F(y) ≠ ∅` or `G(x) ∩ G(y) ≠ ∅`.
pub fn product_precondition(
    f: &SetValuedFunction,
    g: &SetValuedFunction,
    cfg: &CheckConfig,
) -> Result<(usize, usize), VerifyError> {
    let d = f
        .domain()
        .intersect(g.domain())
        .ok_or_else(|| SvfError::EmptyDomain("product".into()))?;
    let xs = log_space(d.lo(), d.hi(), cfg.grid.nx);
    let ys = log_space(d.lo(), d.hi(), cfg.grid.ny);
    let fv = |h: &SetValuedFunction, p: &[f64]| {
        p.iter().map(|&v| h.eval(v)).collect::<Result<Vec<_>, _>>()
    };
    let (fx, fy, gx, gy) = (fv(f, &xs)?, fv(f, &ys)?, fv(g, &xs)?, fv(g, &ys)?);
    let mut sat = 0;
    for i in 0..xs.len() {
        for j in 0..ys.len() {
            if fx[i].intersects(&fy[j]).map_err(SvfError::from)?
                || gx[i].intersects(&gy[j]).map_err(SvfError::from)?
            {
                sat += 1;
            }
        }
    }
    Ok((sat, xs.len() * ys.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::Domain;
    use crate::svf::{make_family, FamilyKind};

    fn dom() -> Domain {
        Domain::closed(0.5, 8.0).unwrap()
    }

    fn boxf(e: &str) -> SetValuedFunction {
        make_family(FamilyKind::Box, e, dom()).unwrap()
    }

    fn sym(e: &str) -> SetValuedFunction {
        make_family(FamilyKind::Symmetric, e, dom()).unwrap()
    }

    #[test]
    fn m_concave_examples() {
        assert!(check_m_concave(&boxf("x"), &CheckConfig::new(0.5))
            .unwrap()
            .is_pass());
        assert!(check_m_concave(&boxf("0"), &CheckConfig::new(0.3))
            .unwrap()
            .is_pass());
        let r = check_m_concave(&boxf("1"), &CheckConfig::new(0.5)).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(r.witness.is_some() && r.worst_margin.unwrap() > 1e-9);
    }

    #[test]
    fn worked_point_from_harmonic_mean() {
        // x = 1, y = 3, t = 1/2, m = 1/2: [0, 6/7] ⊆ [0, 1.75]
        let f = boxf("x");
        let (fx, fy) = (f.eval(1.0).unwrap(), f.eval(3.0).unwrap());
        let s = strong_sides(&f, &fx, &fy, 1.0, 3.0, 0.5, 0.5, 0.0, 0.0)
            .unwrap()
            .unwrap();
        assert!((s.h - 6.0 / 7.0).abs() < 1e-15);
        assert_eq!(s.rhs, SetValue::Interval(Interval::new(0.0, 1.75).unwrap()));
        let m = s.margin().unwrap();
        // lower ends coincide, so the margin is exactly zero
        assert_eq!(m, 0.0);
    }

    #[test]
    fn midconcave_examples() {
        assert!(check_m_midconcave(&boxf("x"), &CheckConfig::new(1.0))
            .unwrap()
            .is_pass());
        assert!(check_m_midconcave(&boxf("x"), &CheckConfig::new(0.5))
            .unwrap()
            .is_pass());
        let r = check_m_midconcave(&boxf("1"), &CheckConfig::new(0.5)).unwrap();
        assert!(!r.is_pass());
        assert!((r.worst_margin.unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn strong_t_concave_examples() {
        let cfg = CheckConfig::new(1.0).with_c(1.0).with_t(0.3);
        let r = check_strong_m_t_concave(&sym("1/x^2"), &cfg).unwrap();
        assert!(r.is_pass() && r.worst_margin.unwrap().abs() <= 1e-9);
        let cfg = CheckConfig::new(0.5).with_c(0.1).with_t(0.5);
        assert!(!check_strong_m_t_concave(&boxf("x"), &cfg)
            .unwrap()
            .is_pass());
        assert!(matches!(
            check_strong_m_t_concave(&boxf("x"), &CheckConfig::new(0.5)),
            Err(VerifyError::MissingT(_))
        ));
    }

    #[test]
    fn c_zero_matches_plain_check_at_fixed_t() {
        let f = sym("1/x^2");
        let cfg = CheckConfig::new(0.7).with_t(0.35);
        let a = check_strong_m_t_concave(&f, &cfg).unwrap();
        let b = inclusion_check("m-concave", &f, &cfg, &[0.35], 0.0).unwrap();
        assert_eq!(a.verdict, b.verdict);
        assert_eq!(a.worst_margin, b.worst_margin);
        assert_eq!(a.cells, b.cells);
    }

    #[test]
    fn midconcave_is_single_t_grid() {
        let f = boxf("1");
        let cfg = CheckConfig::new(0.5).with_grid(GridSpec::new(33, 33, 1).unwrap());
        let a = check_m_midconcave(&f, &cfg).unwrap();
        let b = check_m_concave(&f, &cfg).unwrap();
        assert_eq!(a.verdict, b.verdict);
        assert_eq!(a.worst_margin, b.worst_margin);
    }

    #[test]
    fn strong_midconcave_examples() {
        let cfg = CheckConfig::new(1.0).with_c(1.0);
        assert!(check_strong_m_midconcave(&sym("1/x^2"), &cfg)
            .unwrap()
            .is_pass());
        let cfg = CheckConfig::new(0.5).with_c(0.1);
        assert!(!check_strong_m_midconcave(&boxf("x"), &cfg)
            .unwrap()
            .is_pass());
    }

    #[test]
    fn strong_concave_identity_family() {
        let f = sym("1/x^2");
        assert!(
            check_strong_m_concave(&f, &CheckConfig::new(1.0).with_c(1.0))
                .unwrap()
                .is_pass()
        );
        assert!(
            !check_strong_m_concave(&f, &CheckConfig::new(1.0).with_c(2.0))
                .unwrap()
                .is_pass()
        );
    }

    #[test]
    fn kuhn_examples() {
        let cfg = CheckConfig::new(1.0).with_c(1.0).with_t(0.3);
        let r = check_kuhn(&sym("1/x^2"), &cfg).unwrap();
        assert!(r.is_pass());
        assert_eq!(r.link("premise").unwrap().verdict, Verdict::Pass);
        assert_eq!(r.link("conclusion").unwrap().verdict, Verdict::Pass);

        let r = check_kuhn(&boxf("1"), &CheckConfig::new(0.5).with_t(0.3)).unwrap();
        assert!(r.is_pass());
        assert_eq!(r.link("premise").unwrap().verdict, Verdict::Fail);
        assert!(r.note.as_deref().unwrap().contains("vacuous"));

        let r = check_kuhn(&boxf("0"), &CheckConfig::new(0.5).with_t(0.3)).unwrap();
        assert!(r.is_pass());
        assert_eq!(r.link("premise").unwrap().verdict, Verdict::Pass);
    }

    #[test]
    fn chain_links_measured_independently() {
        let r = check_chain_t_to_m(&boxf("x"), &CheckConfig::new(0.5).with_t(0.3)).unwrap();
        assert_eq!(r.link("L3'").unwrap().verdict, Verdict::Fail);
        assert_eq!(r.link("E").unwrap().verdict, Verdict::Pass);
        assert!(r.is_pass());

        let r = check_chain_t_to_m(&boxf("x"), &CheckConfig::new(1.0).with_t(0.3)).unwrap();
        assert_eq!(r.link("L3").unwrap().verdict, Verdict::Pass);
        assert_eq!(r.link("L3'").unwrap().verdict, Verdict::Pass);

        // an inflated {0} never fits inside {0} once x ≠ y
        let r =
            check_chain_t_to_m(&boxf("0"), &CheckConfig::new(0.5).with_t(0.3).with_c(1.0)).unwrap();
        let expected = [
            ("E", Verdict::Fail),
            ("L1", Verdict::Pass),
            ("L2", Verdict::Fail),
            ("L3", Verdict::Pass),
            ("L3'", Verdict::Pass),
        ];
        for (l, v) in expected {
            assert_eq!(r.link(l).unwrap().verdict, v, "{l}");
        }
    }

    #[test]
    fn zero_family_passes_every_chain_link_without_modulus() {
        let r = check_chain_t_to_m(&boxf("0"), &CheckConfig::new(0.5).with_t(0.3)).unwrap();
        assert!(r.links.iter().all(|l| l.verdict == Verdict::Pass));
    }

    #[test]
    fn dyadic_examples() {
        let cfg = CheckConfig::new(0.5)
            .with_grid(GridSpec::new(9, 9, 1).unwrap())
            .with_depth(8);
        let r = check_dyadic(&boxf("x"), &cfg).unwrap();
        assert!(r.is_pass());
        assert_eq!(r.links.len(), 8);
        assert_eq!(r.stats.grid, vec![9, 9, 255]);
        let r = check_dyadic(&boxf("1"), &cfg.clone().with_depth(3)).unwrap();
        assert_eq!(r.link("n=1").unwrap().verdict, Verdict::Fail);
    }

    #[test]
    fn dyadic_depth_one_is_midconcave() {
        let cfg = CheckConfig::new(0.5).with_c(0.2).with_depth(1);
        let f = sym("1/x^2");
        let a = check_dyadic(&f, &cfg).unwrap();
        let b = check_strong_m_midconcave(&f, &cfg).unwrap();
        assert_eq!(
            a.worst_margin.map(f64::to_bits),
            b.worst_margin.map(f64::to_bits)
        );
        assert_eq!(a.cells, b.cells);
        assert_eq!(a.witness, b.witness);
    }

    #[test]
    fn bd_exact_dyadic_target() {
        let cfg = CheckConfig::new(1.0).with_grid(GridSpec::new(17, 17, 1).unwrap());
        let r = check_bd_approx(&boxf("x"), &cfg, 0.5).unwrap();
        assert!(r.is_pass());
        assert!(r.series[0].value <= cfg.tol);
    }

    #[test]
    fn bd_records_failed_premise() {
        let cfg = CheckConfig::new(0.5)
            .with_grid(GridSpec::new(9, 9, 1).unwrap())
            .with_depth(4);
        let r = check_bd_approx(&boxf("1"), &cfg, 1.0 / 3.0).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(r.links.iter().all(|l| l.verdict == Verdict::Fail));
    }

    #[test]
    fn scaling_continuity_examples() {
        let a = Interval::new(-2.0, 3.0).unwrap();
        assert_eq!(a.scale(1.0).hausdorff(&a.scale(0.5)), 1.5);
        let r = check_scaling_continuity(&a, &[1.0, 0.5], 1e-12);
        assert!(r.is_pass());
        assert_eq!(r.worst_margin, Some(0.0));
        let z = Interval::new(0.0, 0.0).unwrap();
        let r = check_scaling_continuity(&z, &[-1.0, 0.0, 2.5], 0.0);
        assert_eq!(r.worst_margin, Some(0.0));
    }

    #[test]
    fn falsify_examples() {
        let cfg = CheckConfig::new(0.5).with_budget(1000).with_seed(7);
        let r = falsify(&boxf("1"), &cfg, Property::MConcave).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        let r2 = falsify(&boxf("1"), &cfg, Property::MConcave).unwrap();
        assert_eq!(r.to_canonical_json(), r2.to_canonical_json());
        let r = falsify(&boxf("0"), &cfg, Property::MConcave).unwrap();
        assert!(r.is_pass());
        assert!(matches!(
            falsify(&boxf("0"), &cfg, Property::Kuhn),
            Err(VerifyError::Unsupported(_))
        ));
        assert!(falsify(&boxf("0"), &cfg.clone().with_budget(0), Property::MConcave).is_err());
    }

    #[test]
    fn closure_examples() {
        let f = boxf("x");
        let r = closure_suite(&f, &f, &CheckConfig::new(1.0)).unwrap();
        assert!(r.is_pass(), "{r:?}");
        for name in ["sum", "scale(2)", "scale(-1)", "product", "union", "cross"] {
            assert_eq!(r.link(name).unwrap().verdict, Verdict::Pass, "{name}");
        }
        let z = boxf("0");
        let r = closure_suite(&z, &z, &CheckConfig::new(0.5)).unwrap();
        assert!(r.links.iter().all(|l| l.verdict == Verdict::Pass));
    }

    #[test]
    fn evaluation_errors_become_error_reports() {
        // 1/(x - 2) has a pole inside the domain but not on the registration grid
        let f = SetValuedFunction::closed_form(
            crate::expr::Expr::parse("0").unwrap(),
            crate::expr::Expr::parse("(x - 2)^2").unwrap(),
            dom(),
        )
        .unwrap();
        assert!(check_m_concave(&f, &CheckConfig::new(1.0)).unwrap().verdict != Verdict::Error);
        let tab = SetValuedFunction::tabulated(vec![
            (1.0, Interval::new(0.0, 1.0).unwrap()),
            (2.0, Interval::new(0.0, 1.0).unwrap()),
        ])
        .unwrap();
        let r = check_m_concave(&tab, &CheckConfig::new(0.25)).unwrap();
        assert_ne!(r.verdict, Verdict::Error);
    }

    #[test]
    fn config_validation() {
        assert!(CheckConfig::new(0.0).validate().is_err());
        assert!(CheckConfig::new(1.0).with_c(-1.0).validate().is_err());
        assert!(CheckConfig::new(1.0).with_t(1.0).validate().is_err());
        assert!(CheckConfig::new(1.0).with_depth(0).validate().is_err());
        assert!(CheckConfig::new(1.0).validate().is_ok());
    }

    #[test]
    fn parallel_and_serial_reports_match() {
        let f = sym("1/x^2");
        let mut cfg = CheckConfig::new(0.8).with_c(0.5);
        cfg.jobs = 1;
        let a = check_strong_m_concave(&f, &cfg).unwrap();
        cfg.jobs = 3;
        let b = check_strong_m_concave(&f, &cfg).unwrap();
        cfg.jobs = 0;
        let c = check_strong_m_concave(&f, &cfg).unwrap();
        assert_eq!(a.to_canonical_json(), b.to_canonical_json());
        assert_eq!(a.to_canonical_json(), c.to_canonical_json());
    }

    #[test]
    fn property_names_round_trip() {
        for p in Property::ALL {
            assert_eq!(p.name().parse::<Property>().unwrap(), p);
        }
        assert!("convex".parse::<Property>().is_err());
    }
}

//! Set-valued functions on positive domains.
//!
//! A [`SetValuedFunction`] is one of
//! - a closed form `x ↦ [lower(x), upper(x)]` built from two [`Expr`]s,
//! - a tabulated function whose endpoints are linearly interpolated, or
//! - a combinator (sum, scale, product, union, cross) over children.
//!
//! The real-valued checks at the bottom of the module are scalar ground
//! truth for the set-valued verifier.

use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;
use thiserror::Error;

use crate::expr::{BinOp, EvalError, Expr, ParseError};
use crate::harmonic::{check_m, harmonic_point, log_space, Domain, GridSpec, HarmonicError};
use crate::report::{CheckReport, Witness, WorstTracker};
use crate::set_algebra::{Interval, SetError, SetValue};

/// Points used to validate a closed form when it is registered.
const REGISTRATION_SAMPLES: usize = 257;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SvfError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Set(#[from] SetError),
    #[error(transparent)]
    Harmonic(#[from] HarmonicError),
    #[error("x = {x} is outside the domain {domain}")]
    OutOfDomain { x: f64, domain: String },
    #[error("lower bound {lo} exceeds upper bound {hi} at x = {x}")]
    BoundsCrossed { x: f64, lo: f64, hi: f64 },
    #[error("children of {0} have disjoint domains")]
    EmptyDomain(String),
    #[error("tabulated function: {0}")]
    Tabulated(String),
    #[error("svf spec: {0}")]
    Spec(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CombOp {
    Sum,
    Scale(f64),
    Product,
    Union,
    Cross,
}

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    ClosedForm {
        lower: Expr,
        upper: Expr,
    },
    Tabulated {
        xs: Vec<f64>,
        values: Vec<Interval>,
    },
    Combinator {
        op: CombOp,
        children: Vec<SetValuedFunction>,
    },
}

/// An immutable set-valued function; clones share the underlying tree.
#[derive(Debug, Clone, PartialEq)]
pub struct SetValuedFunction {
    repr: Arc<Repr>,
    domain: Domain,
    label: String,
}

impl SetValuedFunction {
    /// `x ↦ [lower(x), upper(x)]`, validated on a log grid over the domain.
    pub fn closed_form(lower: Expr, upper: Expr, domain: Domain) -> Result<Self, SvfError> {
        let label = format!("closed(lower={lower}, upper={upper}, domain={domain})");
        Self::closed_form_labelled(lower, upper, domain, label)
    }

    fn closed_form_labelled(
        lower: Expr,
        upper: Expr,
        domain: Domain,
        label: String,
    ) -> Result<Self, SvfError> {
        for x in log_space(domain.lo(), domain.hi(), REGISTRATION_SAMPLES) {
            bounds_at(&lower, &upper, x)?;
        }
        Ok(SetValuedFunction {
            repr: Arc::new(Repr::ClosedForm { lower, upper }),
            domain,
            label,
        })
    }

    /// Samples must have strictly increasing, positive `x`.
    pub fn tabulated(samples: Vec<(f64, Interval)>) -> Result<Self, SvfError> {
        if samples.is_empty() {
            return Err(SvfError::Tabulated("no samples".into()));
        }
        for w in samples.windows(2) {
            if !(w[0].0 < w[1].0) {
                return Err(SvfError::Tabulated(format!(
                    "x values must be strictly increasing ({} then {})",
                    w[0].0, w[1].0
                )));
            }
        }
        let (xs, values): (Vec<f64>, Vec<Interval>) = samples.into_iter().unzip();
        let domain = Domain::closed(xs[0], xs[xs.len() - 1])
            .map_err(|e| SvfError::Tabulated(e.to_string()))?;
        let label = format!("tabulated({} samples on {domain})", xs.len());
        Ok(SetValuedFunction {
            repr: Arc::new(Repr::Tabulated { xs, values }),
            domain,
            label,
        })
    }

    /// Reads a `x,lo,hi` CSV with a header row.
    pub fn from_csv(path: &Path) -> Result<Self, SvfError> {
        #[derive(Deserialize)]
        struct Row {
            x: f64,
            lo: f64,
            hi: f64,
        }
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| SvfError::Tabulated(format!("{}: {e}", path.display())))?;
        let mut samples = Vec::new();
        for (i, row) in reader.deserialize::<Row>().enumerate() {
            let row = row.map_err(|e| {
                SvfError::Tabulated(format!("{} row {}: {e}", path.display(), i + 1))
            })?;
            samples.push((row.x, Interval::new(row.lo, row.hi)?));
        }
        let mut f = Self::tabulated(samples)?;
        f.label = format!("tabulated({})", path.display());
        Ok(f)
    }

    pub fn sum(f: &Self, g: &Self) -> Result<Self, SvfError> {
        Self::combine(CombOp::Sum, f, g)
    }

    pub fn scale(lambda: f64, f: &Self) -> Self {
        SetValuedFunction {
            repr: Arc::new(Repr::Combinator {
                op: CombOp::Scale(lambda),
                children: vec![f.clone()],
            }),
            domain: f.domain,
            label: format!("{lambda}*{}", f.label),
        }
    }

    pub fn product(f: &Self, g: &Self) -> Result<Self, SvfError> {
        Self::combine(CombOp::Product, f, g)
    }

    pub fn union(f: &Self, g: &Self) -> Result<Self, SvfError> {
        Self::combine(CombOp::Union, f, g)
    }

    pub fn cross(f: &Self, g: &Self) -> Result<Self, SvfError> {
        Self::combine(CombOp::Cross, f, g)
    }

    fn combine(op: CombOp, f: &Self, g: &Self) -> Result<Self, SvfError> {
        let name = match op {
            CombOp::Sum => "sum",
            CombOp::Product => "product",
            CombOp::Union => "union",
            CombOp::Cross => "cross",
            CombOp::Scale(_) => unreachable!("scale is unary"),
        };
        let domain = f
            .domain
            .intersect(&g.domain)
            .ok_or_else(|| SvfError::EmptyDomain(name.to_string()))?;
        Ok(SetValuedFunction {
            repr: Arc::new(Repr::Combinator {
                op,
                children: vec![f.clone(), g.clone()],
            }),
            domain,
            label: format!("{name}({}, {})", f.label, g.label),
        })
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn eval(&self, x: f64) -> Result<SetValue, SvfError> {
        if !(x > 0.0) || self.domain.membership_margin(x) > 0.0 {
            return Err(SvfError::OutOfDomain {
                x,
                domain: self.domain.to_string(),
            });
        }
        self.eval_unchecked(x)
    }

    fn eval_unchecked(&self, x: f64) -> Result<SetValue, SvfError> {
        match &*self.repr {
            Repr::ClosedForm { lower, upper } => Ok(bounds_at(lower, upper, x)?.into()),
            Repr::Tabulated { xs, values } => Ok(interpolate(xs, values, x).into()),
            Repr::Combinator { op, children } => {
                let a = children[0].eval_unchecked(x)?;
                Ok(match op {
                    CombOp::Scale(l) => a.scale(*l),
                    CombOp::Sum => a.mink_sum(&children[1].eval_unchecked(x)?)?,
                    CombOp::Product => a.mink_product(&children[1].eval_unchecked(x)?)?,
                    CombOp::Union => a.union(&children[1].eval_unchecked(x)?)?,
                    CombOp::Cross => a.cross(&children[1].eval_unchecked(x)?)?,
                })
            }
        }
    }
}

impl fmt::Display for SetValuedFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

fn bounds_at(lower: &Expr, upper: &Expr, x: f64) -> Result<Interval, SvfError> {
    let (lo, hi) = (lower.eval(x)?, upper.eval(x)?);
    Interval::new(lo, hi).map_err(|_| SvfError::BoundsCrossed { x, lo, hi })
}

fn interpolate(xs: &[f64], values: &[Interval], x: f64) -> Interval {
    let i = xs.partition_point(|&s| s < x);
    if i < xs.len() && xs[i] == x {
        return values[i];
    }
    // domain check guarantees xs[0] < x < xs[last] here
    let (x0, x1) = (xs[i - 1], xs[i]);
    let w = (x - x0) / (x1 - x0);
    let (a, b) = (values[i - 1], values[i]);
    let lo = a.lo() + w * (b.lo() - a.lo());
    let hi = a.hi() + w * (b.hi() - a.hi());
    Interval::new(lo, hi.max(lo)).expect("convex combination of valid intervals")
}

/// Generator shapes for test families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyKind {
    /// `[0, f(x)]`
    Box,
    /// `[−f(x), f(x)]`
    Symmetric,
    /// `[f(x) − w, f(x) + w]`
    Shifted { w: f64 },
}

pub fn make_family(
    kind: FamilyKind,
    f: &str,
    domain: Domain,
) -> Result<SetValuedFunction, SvfError> {
    let e = Expr::parse(f)?;
    let (lower, upper, label) = match kind {
        FamilyKind::Box => (Expr::Num(0.0), e, format!("box({f})")),
        FamilyKind::Symmetric => (Expr::Neg(Box::new(e.clone())), e, format!("symmetric({f})")),
        FamilyKind::Shifted { w } => {
            if !(w >= 0.0 && w.is_finite()) {
                return Err(SvfError::Spec(format!(
                    "shift width must be nonnegative, got {w}"
                )));
            }
            (
                Expr::bin(BinOp::Sub, e.clone(), Expr::Num(w)),
                Expr::bin(BinOp::Add, e, Expr::Num(w)),
                format!("shifted({f}, w={w})"),
            )
        }
    };
    SetValuedFunction::closed_form_labelled(lower, upper, domain, label)
}

/// Parses the textual SVF form used on the command line, e.g.
/// `kind=box expr="x" domain=[0.5,8]`.
///
/// Kinds: `box`, `symmetric`, `shifted` (with `w=`), `closed` (with `lower=`
/// and `upper=`), and `tabulated` (with `file=`; relative paths resolve
/// against `base_dir`).
pub fn parse_svf_spec(text: &str, base_dir: Option<&Path>) -> Result<SetValuedFunction, SvfError> {
    let pairs = split_spec(text)?;
    let get = |key: &str| {
        pairs
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    };
    let need = |key: &str| {
        get(key).ok_or_else(|| SvfError::Spec(format!("missing key `{key}` in {text:?}")))
    };
    let kind = need("kind")?;
    let allowed: &[&str] = match kind {
        "box" | "symmetric" => &["kind", "expr", "domain"],
        "shifted" => &["kind", "expr", "domain", "w"],
        "closed" => &["kind", "lower", "upper", "domain"],
        "tabulated" => &["kind", "file"],
        other => return Err(SvfError::Spec(format!("unknown kind `{other}`"))),
    };
    if let Some((k, _)) = pairs.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
        return Err(SvfError::Spec(format!(
            "unexpected key `{k}` for kind `{kind}`"
        )));
    }
    if kind == "tabulated" {
        let mut path = PathBuf::from(need("file")?);
        if path.is_relative() {
            if let Some(base) = base_dir {
                path = base.join(path);
            }
        }
        return SetValuedFunction::from_csv(&path);
    }
    let domain: Domain = need("domain")?.parse()?;
    let f = match kind {
        "box" => make_family(FamilyKind::Box, need("expr")?, domain)?,
        "symmetric" => make_family(FamilyKind::Symmetric, need("expr")?, domain)?,
        "shifted" => {
            let w: f64 = need("w")?
                .parse()
                .map_err(|_| SvfError::Spec(format!("key `w` is not a number in {text:?}")))?;
            make_family(FamilyKind::Shifted { w }, need("expr")?, domain)?
        }
        _ => SetValuedFunction::closed_form(
            Expr::parse(need("lower")?)?,
            Expr::parse(need("upper")?)?,
            domain,
        )?,
    };
    Ok(f)
}

fn split_spec(text: &str) -> Result<Vec<(String, String)>, SvfError> {
    let mut out: Vec<(String, String)> = Vec::new();
    let mut chars = text.chars().peekable();
    loop {
        while chars.peek().is_some_and(|c| c.is_whitespace()) {
            chars.next();
        }
        if chars.peek().is_none() {
            break;
        }
        let key: String =
            std::iter::from_fn(|| chars.next_if(|&c| c != '=' && !c.is_whitespace())).collect();
        if chars.next() != Some('=') {
            return Err(SvfError::Spec(format!("expected key=value, found `{key}`")));
        }
        let value: String = if chars.peek() == Some(&'"') {
            chars.next();
            let v: String = std::iter::from_fn(|| chars.next_if(|&c| c != '"')).collect();
            if chars.next() != Some('"') {
                return Err(SvfError::Spec(format!(
                    "unterminated quote in value of `{key}`"
                )));
            }
            v
        } else {
            std::iter::from_fn(|| chars.next_if(|c| !c.is_whitespace())).collect()
        };
        if out.iter().any(|(k, _)| *k == key) {
            return Err(SvfError::Spec(format!("duplicate key `{key}`")));
        }
        out.push((key, value));
    }
    Ok(out)
}

/// Checks `f(h_m) ≤ t^α f(y) + m(1 − t^α) f(x)` over the grid, where `h_m`
/// is the harmonic m-combination. Points with `h_m` outside the domain are
/// skipped. Positive margins are violations.
pub fn real_am_convex_check(
    f: &Expr,
    alpha: f64,
    m: f64,
    domain: &Domain,
    grid: GridSpec,
    tol: f64,
) -> Result<CheckReport, SvfError> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(SvfError::Spec(format!(
            "alpha must lie in [0, 1], got {alpha}"
        )));
    }
    check_m(m)?;
    Ok(real_sweep(
        "real-am-convex",
        f,
        m,
        domain,
        grid,
        tol,
        |fx, fy, fh, _x, _y, t| {
            let ta = t.powf(alpha);
            fh - (ta * fy + m * (1.0 - ta) * fx)
        },
    ))
}

/// Checks `f(h) ≤ t f(y) + (1 − t) f(x) − c t(1 − t) ((x − y)/(xy))²` with
/// `h` the weighted harmonic mean (`m = 1`).
pub fn real_strong_convex_check(
    f: &Expr,
    c: f64,
    domain: &Domain,
    grid: GridSpec,
    tol: f64,
) -> Result<CheckReport, SvfError> {
    if !(c >= 0.0) {
        return Err(SvfError::Spec(format!(
            "modulus must be nonnegative, got {c}"
        )));
    }
    Ok(real_sweep(
        "real-strong-convex",
        f,
        1.0,
        domain,
        grid,
        tol,
        |fx, fy, fh, x, y, t| {
            let d = (x - y) / (x * y);
            fh - (t * fy + (1.0 - t) * fx - c * t * (1.0 - t) * d * d)
        },
    ))
}

fn real_sweep(
    name: &str,
    f: &Expr,
    m: f64,
    domain: &Domain,
    grid: GridSpec,
    tol: f64,
    margin: impl Fn(f64, f64, f64, f64, f64, f64) -> f64,
) -> CheckReport {
    let xs = log_space(domain.lo(), domain.hi(), grid.nx);
    let ys = log_space(domain.lo(), domain.hi(), grid.ny);
    let ts = grid.t_values();
    let mut tracker = WorstTracker::default();
    for &x in &xs {
        for &y in &ys {
            for &t in &ts {
                let Some(h) = domain.admit(harmonic_point(x, y, t, m)) else {
                    tracker.skip();
                    continue;
                };
                let vals = f.eval(x).and_then(|fx| Ok((fx, f.eval(y)?, f.eval(h)?)));
                let (fx, fy, fh) = match vals {
                    Ok(v) => v,
                    Err(e) => {
                        return CheckReport::error(name, Some(Witness::new(x, y, t)), e.to_string())
                    }
                };
                let g = margin(fx, fy, fh, x, y, t);
                tracker.record(g, tol, || {
                    Witness::new(x, y, t)
                        .with_detail(format!("h = {h}, f(h) = {fh}, f(x) = {fx}, f(y) = {fy}"))
                });
            }
        }
    }
    tracker.into_report(name, tol, grid.shape())
}

//! Minkowski algebra on compact intervals, finite unions of intervals, and
//! axis-aligned boxes.
//!
//! Every set here is closed and bounded. The closed unit ball of the value
//! space is `[-1, 1]` for scalars and `[-1, 1]^d` (sup-norm) for boxes, so
//! `A + r·B̄` is [`Interval::inflate`] componentwise.
//!
//! Inclusion is measured, not just decided: [`SetValue::excursion`] returns the
//! largest distance by which `inner` sticks out of `outer`, or the (negative)
//! slack when it fits. A check passes when that margin is at most `tol`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute slack used by plain inclusion to absorb floating-point noise.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SetError {
    #[error("invalid interval [{lo}, {hi}]: endpoints must be finite with lo <= hi")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("inflation radius must be nonnegative and finite, got {0}")]
    NegativeRadius(f64),
    #[error("an interval union needs at least one part")]
    EmptyUnion,
    #[error("a box needs at least one dimension")]
    EmptyBox,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("set kinds differ: {0} vs {1}")]
    KindMismatch(&'static str, &'static str),
    #[error("operation {op} is not defined for {kind} values")]
    Unsupported {
        op: &'static str,
        kind: &'static str,
    },
}

/// A nonempty compact interval `[lo, hi]` of reals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "(f64, f64)", into = "(f64, f64)")]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl TryFrom<(f64, f64)> for Interval {
    type Error = SetError;

    fn try_from((lo, hi): (f64, f64)) -> Result<Self, Self::Error> {
        Interval::new(lo, hi)
    }
}

impl From<Interval> for (f64, f64) {
    fn from(a: Interval) -> Self {
        (a.lo, a.hi)
    }
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self, SetError> {
        if lo.is_finite() && hi.is_finite() && lo <= hi {
            Ok(Interval { lo, hi })
        } else {
            Err(SetError::InvalidInterval { lo, hi })
        }
    }

    /// The singleton `{v}`.
    pub fn point(v: f64) -> Result<Self, SetError> {
        Interval::new(v, v)
    }

    /// The closed unit ball `[-1, 1]`.
    pub fn unit_ball() -> Self {
        Interval { lo: -1.0, hi: 1.0 }
    }

    /// `r·B̄ = [-r, r]`.
    pub fn ball(r: f64) -> Result<Self, SetError> {
        if !(r >= 0.0 && r.is_finite()) {
            return Err(SetError::NegativeRadius(r));
        }
        Ok(Interval { lo: -r, hi: r })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Largest absolute value attained, `max(|lo|, |hi|)`.
    pub fn magnitude(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Minkowski sum `[a.lo + b.lo, a.hi + b.hi]`.
    pub fn mink_sum(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo + other.lo,
            hi: self.hi + other.hi,
        }
    }

    /// `{λv : v ∈ self}`.
    pub fn scale(&self, lambda: f64) -> Interval {
        if lambda >= 0.0 {
            Interval {
                lo: lambda * self.lo,
                hi: lambda * self.hi,
            }
        } else {
            Interval {
                lo: lambda * self.hi,
                hi: lambda * self.lo,
            }
        }
    }

    /// Elementwise product `{ab : a ∈ self, b ∈ other}`.
    pub fn mink_product(&self, other: &Interval) -> Interval {
        let p = [
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        ];
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval { lo, hi }
    }

    /// `self + r·B̄`.
    pub fn inflate(&self, r: f64) -> Result<Interval, SetError> {
        if !(r >= 0.0 && r.is_finite()) {
            return Err(SetError::NegativeRadius(r));
        }
        Ok(Interval {
            lo: self.lo - r,
            hi: self.hi + r,
        })
    }

    /// Signed inclusion margin `max(outer.lo - lo, hi - outer.hi)`.
    ///
    /// Positive means `self ⊄ outer` by that much; nonpositive is the slack.
    pub fn excursion(&self, outer: &Interval) -> f64 {
        (outer.lo - self.lo).max(self.hi - outer.hi)
    }

    pub fn hausdorff(&self, other: &Interval) -> f64 {
        (self.lo - other.lo).abs().max((self.hi - other.hi).abs())
    }

    fn distance_to_point(&self, v: f64) -> f64 {
        if v < self.lo {
            self.lo - v
        } else if v > self.hi {
            v - self.hi
        } else {
            0.0
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// A finite union of pairwise-disjoint intervals, sorted by `lo`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Interval>", into = "Vec<Interval>")]
pub struct IntervalUnion {
    parts: Vec<Interval>,
}

impl TryFrom<Vec<Interval>> for IntervalUnion {
    type Error = SetError;

    fn try_from(parts: Vec<Interval>) -> Result<Self, Self::Error> {
        IntervalUnion::new(parts)
    }
}

impl From<IntervalUnion> for Vec<Interval> {
    fn from(u: IntervalUnion) -> Self {
        u.parts
    }
}

impl From<Interval> for IntervalUnion {
    fn from(a: Interval) -> Self {
        IntervalUnion { parts: vec![a] }
    }
}

impl IntervalUnion {
    /// Sorts the parts and merges any that overlap or touch.
    pub fn new(mut parts: Vec<Interval>) -> Result<Self, SetError> {
        if parts.is_empty() {
            return Err(SetError::EmptyUnion);
        }
        parts.sort_by(|a, b| a.lo.total_cmp(&b.lo).then(a.hi.total_cmp(&b.hi)));
        let mut merged: Vec<Interval> = Vec::with_capacity(parts.len());
        for p in parts {
            match merged.last_mut() {
                Some(last) if p.lo <= last.hi => last.hi = last.hi.max(p.hi),
                _ => merged.push(p),
            }
        }
        Ok(IntervalUnion { parts: merged })
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    /// Smallest interval containing the union.
    pub fn hull(&self) -> Interval {
        Interval {
            lo: self.parts[0].lo,
            hi: self.parts[self.parts.len() - 1].hi,
        }
    }

    pub fn union(&self, other: &IntervalUnion) -> IntervalUnion {
        let parts = self.parts.iter().chain(&other.parts).copied().collect();
        IntervalUnion::new(parts).expect("nonempty by construction")
    }

    /// Normalized union of all pairwise sums.
    pub fn mink_sum(&self, other: &IntervalUnion) -> IntervalUnion {
        self.pairwise(other, Interval::mink_sum)
    }

    pub fn mink_product(&self, other: &IntervalUnion) -> IntervalUnion {
        self.pairwise(other, Interval::mink_product)
    }

    pub fn scale(&self, lambda: f64) -> IntervalUnion {
        let parts = self.parts.iter().map(|p| p.scale(lambda)).collect();
        IntervalUnion::new(parts).expect("nonempty by construction")
    }

    pub fn inflate(&self, r: f64) -> Result<IntervalUnion, SetError> {
        let parts = self
            .parts
            .iter()
            .map(|p| p.inflate(r))
            .collect::<Result<Vec<_>, _>>()?;
        IntervalUnion::new(parts)
    }

    fn pairwise(
        &self,
        other: &IntervalUnion,
        op: fn(&Interval, &Interval) -> Interval,
    ) -> IntervalUnion {
        let parts = self
            .parts
            .iter()
            .flat_map(|a| other.parts.iter().map(move |b| op(a, b)))
            .collect();
        IntervalUnion::new(parts).expect("nonempty by construction")
    }

    fn distance_to_point(&self, v: f64) -> f64 {
        self.parts
            .iter()
            .map(|p| p.distance_to_point(v))
            .fold(f64::INFINITY, f64::min)
    }

    /// Inclusion margin of one interval against this union.
    ///
    /// When the part is covered it lies in a single component (gaps have
    /// positive width) and the margin is that component's slack. Otherwise it
    /// is `sup_{p ∈ part} dist(p, self)`, attained at an endpoint of `part` or
    /// at a gap midpoint clipped into `part`.
    fn part_excursion(&self, part: &Interval) -> f64 {
        if let Some(c) = self
            .parts
            .iter()
            .find(|c| c.lo <= part.lo && part.hi <= c.hi)
        {
            return part.excursion(c);
        }
        let mut worst = self
            .distance_to_point(part.lo)
            .max(self.distance_to_point(part.hi));
        for w in self.parts.windows(2) {
            let mid = 0.5 * (w[0].hi + w[1].lo);
            let clipped = mid.clamp(part.lo, part.hi);
            worst = worst.max(self.distance_to_point(clipped));
        }
        worst
    }

    pub fn excursion(&self, outer: &IntervalUnion) -> f64 {
        self.parts
            .iter()
            .map(|p| outer.part_excursion(p))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", parts.join(" ∪ "))
    }
}

/// A finite product of intervals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Interval>", into = "Vec<Interval>")]
pub struct IntervalBox {
    dims: Vec<Interval>,
}

impl TryFrom<Vec<Interval>> for IntervalBox {
    type Error = SetError;

    fn try_from(dims: Vec<Interval>) -> Result<Self, Self::Error> {
        IntervalBox::new(dims)
    }
}

impl From<IntervalBox> for Vec<Interval> {
    fn from(b: IntervalBox) -> Self {
        b.dims
    }
}

impl IntervalBox {
    pub fn new(dims: Vec<Interval>) -> Result<Self, SetError> {
        if dims.is_empty() {
            return Err(SetError::EmptyBox);
        }
        Ok(IntervalBox { dims })
    }

    pub fn dims(&self) -> &[Interval] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.len()
    }

    /// Cartesian product `self × other`.
    pub fn cross(&self, other: &IntervalBox) -> IntervalBox {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        IntervalBox { dims }
    }

    pub fn mink_sum(&self, other: &IntervalBox) -> Result<IntervalBox, SetError> {
        self.zip(other, |a, b| a.mink_sum(b))
    }

    pub fn mink_product(&self, other: &IntervalBox) -> Result<IntervalBox, SetError> {
        self.zip(other, |a, b| a.mink_product(b))
    }

    pub fn scale(&self, lambda: f64) -> IntervalBox {
        IntervalBox {
            dims: self.dims.iter().map(|d| d.scale(lambda)).collect(),
        }
    }

    /// `self + r·B̄` with the sup-norm ball `[-r, r]^d`.
    pub fn inflate(&self, r: f64) -> Result<IntervalBox, SetError> {
        let dims = self
            .dims
            .iter()
            .map(|d| d.inflate(r))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(IntervalBox { dims })
    }

    pub fn excursion(&self, outer: &IntervalBox) -> Result<f64, SetError> {
        self.check_dim(outer)?;
        Ok(self
            .dims
            .iter()
            .zip(&outer.dims)
            .map(|(a, b)| a.excursion(b))
            .fold(f64::NEG_INFINITY, f64::max))
    }

    fn check_dim(&self, other: &IntervalBox) -> Result<(), SetError> {
        if self.dim() != other.dim() {
            return Err(SetError::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(())
    }

    fn zip(
        &self,
        other: &IntervalBox,
        op: impl Fn(&Interval, &Interval) -> Interval,
    ) -> Result<IntervalBox, SetError> {
        self.check_dim(other)?;
        Ok(IntervalBox {
            dims: self
                .dims
                .iter()
                .zip(&other.dims)
                .map(|(a, b)| op(a, b))
                .collect(),
        })
    }
}

impl fmt::Display for IntervalBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", dims.join(" × "))
    }
}

/// The value of a set-valued function at one point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetValue {
    Interval(Interval),
    Union(IntervalUnion),
    Box(IntervalBox),
}

impl From<Interval> for SetValue {
    fn from(a: Interval) -> Self {
        SetValue::Interval(a)
    }
}

impl From<IntervalUnion> for SetValue {
    fn from(u: IntervalUnion) -> Self {
        SetValue::Union(u)
    }
}

impl From<IntervalBox> for SetValue {
    fn from(b: IntervalBox) -> Self {
        SetValue::Box(b)
    }
}

impl SetValue {
    pub fn kind(&self) -> &'static str {
        match self {
            SetValue::Interval(_) => "interval",
            SetValue::Union(_) => "union",
            SetValue::Box(_) => "box",
        }
    }

    pub fn as_interval(&self) -> Option<&Interval> {
        match self {
            SetValue::Interval(a) => Some(a),
            _ => None,
        }
    }

    pub fn scale(&self, lambda: f64) -> SetValue {
        match self {
            SetValue::Interval(a) => a.scale(lambda).into(),
            SetValue::Union(u) => u.scale(lambda).into(),
            SetValue::Box(b) => b.scale(lambda).into(),
        }
    }

    pub fn inflate(&self, r: f64) -> Result<SetValue, SetError> {
        Ok(match self {
            SetValue::Interval(a) => a.inflate(r)?.into(),
            SetValue::Union(u) => u.inflate(r)?.into(),
            SetValue::Box(b) => b.inflate(r)?.into(),
        })
    }

    /// Minkowski sum. An interval mixed with a union is promoted to a union.
    pub fn mink_sum(&self, other: &SetValue) -> Result<SetValue, SetError> {
        use SetValue::*;
        Ok(match (self, other) {
            (Interval(a), Interval(b)) => a.mink_sum(b).into(),
            (Box(a), Box(b)) => a.mink_sum(b)?.into(),
            (Box(_), _) | (_, Box(_)) => {
                return Err(SetError::KindMismatch(self.kind(), other.kind()))
            }
            _ => self.to_union()?.mink_sum(&other.to_union()?).into(),
        })
    }

    pub fn mink_product(&self, other: &SetValue) -> Result<SetValue, SetError> {
        use SetValue::*;
        Ok(match (self, other) {
            (Interval(a), Interval(b)) => a.mink_product(b).into(),
            (Box(a), Box(b)) => a.mink_product(b)?.into(),
            (Box(_), _) | (_, Box(_)) => {
                return Err(SetError::KindMismatch(self.kind(), other.kind()))
            }
            _ => self.to_union()?.mink_product(&other.to_union()?).into(),
        })
    }

    /// Set union; defined for scalar-valued sets only.
    pub fn union(&self, other: &SetValue) -> Result<SetValue, SetError> {
        Ok(self.to_union()?.union(&other.to_union()?).into())
    }

    /// Cartesian product; intervals are treated as one-dimensional boxes.
    pub fn cross(&self, other: &SetValue) -> Result<SetValue, SetError> {
        Ok(self.to_box("cross")?.cross(&other.to_box("cross")?).into())
    }

    /// Whether the two sets share a point.
    pub fn intersects(&self, other: &SetValue) -> Result<bool, SetError> {
        use SetValue::*;
        match (self, other) {
            (Interval(a), Interval(b)) => Ok(a.intersects(b)),
            (Box(a), Box(b)) => {
                a.check_dim(b)?;
                Ok(a.dims.iter().zip(&b.dims).all(|(p, q)| p.intersects(q)))
            }
            (Box(_), _) | (_, Box(_)) => Err(SetError::KindMismatch(self.kind(), other.kind())),
            _ => {
                let (u, v) = (self.to_union()?, other.to_union()?);
                Ok(u.parts
                    .iter()
                    .any(|p| v.parts.iter().any(|q| p.intersects(q))))
            }
        }
    }

    /// Signed inclusion margin of `self` in `outer` (see module docs).
    pub fn excursion(&self, outer: &SetValue) -> Result<f64, SetError> {
        use SetValue::*;
        match (self, outer) {
            (Interval(a), Interval(b)) => Ok(a.excursion(b)),
            (Box(a), Box(b)) => a.excursion(b),
            (Box(_), _) | (_, Box(_)) => Err(SetError::KindMismatch(self.kind(), outer.kind())),
            _ => Ok(self.to_union()?.excursion(&outer.to_union()?)),
        }
    }

    fn to_union(&self) -> Result<IntervalUnion, SetError> {
        match self {
            SetValue::Interval(a) => Ok((*a).into()),
            SetValue::Union(u) => Ok(u.clone()),
            SetValue::Box(_) => Err(SetError::Unsupported {
                op: "union",
                kind: "box",
            }),
        }
    }

    fn to_box(&self, op: &'static str) -> Result<IntervalBox, SetError> {
        match self {
            SetValue::Interval(a) => Ok(IntervalBox { dims: vec![*a] }),
            SetValue::Box(b) => Ok(b.clone()),
            SetValue::Union(_) => Err(SetError::Unsupported { op, kind: "union" }),
        }
    }
}

impl fmt::Display for SetValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetValue::Interval(a) => a.fmt(f),
            SetValue::Union(u) => u.fmt(f),
            SetValue::Box(b) => b.fmt(f),
        }
    }
}

/// Outcome of an inclusion test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inclusion {
    pub holds: bool,
    /// Largest outward excursion beyond `outer + eps·B̄`; negative slack when it fits.
    pub margin: f64,
}

/// `inner ⊆ outer + eps·B̄`, decided with [`DEFAULT_TOL`] slack.
pub fn is_subset_eps(inner: &SetValue, outer: &SetValue, eps: f64) -> Result<Inclusion, SetError> {
    is_subset_eps_tol(inner, outer, eps, DEFAULT_TOL)
}

pub fn is_subset_eps_tol(
    inner: &SetValue,
    outer: &SetValue,
    eps: f64,
    tol: f64,
) -> Result<Inclusion, SetError> {
    let outer = if eps == 0.0 {
        outer.clone()
    } else {
        outer.inflate(eps)?
    };
    let margin = inner.excursion(&outer)?;
    Ok(Inclusion {
        holds: margin <= tol,
        margin,
    })
}

/// Result of testing the cancellation law `A1 + C ⊆ A2 + C ⇒ A1 ⊆ A2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RadstromCheck {
    pub premise: bool,
    pub conclusion: bool,
    pub consistent: bool,
}

pub fn radstrom_check(a1: &Interval, a2: &Interval, c: &Interval) -> RadstromCheck {
    let premise = a1.mink_sum(c).excursion(&a2.mink_sum(c)) <= DEFAULT_TOL;
    let conclusion = a1.excursion(a2) <= DEFAULT_TOL;
    RadstromCheck {
        premise,
        conclusion,
        consistent: !premise || conclusion,
    }
}

//! Harmonic m-combinations on the positive half-line.
//!
//! The harmonic m-combination of `x` and `y` with weight `t` is
//! `m·x·y / (t·m·x + (1 − t)·y)`. It runs from `m·x` at `t = 0` to `y` at
//! `t = 1` and, for `m = 1`, is the weighted harmonic mean of `x` and `y`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::report::{CheckReport, Witness, WorstTracker};
use crate::set_algebra::{Interval, DEFAULT_TOL};

/// Inset used when a domain is open at zero and has to be sampled.
pub const DEFAULT_INSET: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarmonicError {
    #[error("domain points must be finite and strictly positive, got {0}")]
    NonPositivePoint(f64),
    #[error("t must lie in [0, 1], got {0}")]
    BadWeight(f64),
    #[error("m must lie in (0, 1], got {0}")]
    BadM(f64),
    #[error("dyadic numerator {k} exceeds 2^{n}")]
    BadDyadic { k: u64, n: u32 },
    #[error("invalid domain: {0}")]
    BadDomain(String),
    #[error("invalid grid spec {0:?}: expected \"nx,ny,nt\" with positive counts")]
    BadGrid(String),
}

/// A strictly positive real.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct DomainPoint(f64);

impl DomainPoint {
    pub fn new(value: f64) -> Result<Self, HarmonicError> {
        if value.is_finite() && value > 0.0 {
            Ok(DomainPoint(value))
        } else {
            Err(HarmonicError::NonPositivePoint(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for DomainPoint {
    type Error = HarmonicError;

    fn try_from(v: f64) -> Result<Self, Self::Error> {
        DomainPoint::new(v)
    }
}

impl From<DomainPoint> for f64 {
    fn from(p: DomainPoint) -> Self {
        p.0
    }
}

/// The weight `t ∈ [0, 1]` and the scaling `m ∈ (0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarmonicParams {
    t: f64,
    m: f64,
}

impl HarmonicParams {
    pub fn new(t: f64, m: f64) -> Result<Self, HarmonicError> {
        if !(0.0..=1.0).contains(&t) {
            return Err(HarmonicError::BadWeight(t));
        }
        check_m(m)?;
        Ok(HarmonicParams { t, m })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn m(&self) -> f64 {
        self.m
    }
}

pub fn check_m(m: f64) -> Result<(), HarmonicError> {
    if m > 0.0 && m <= 1.0 {
        Ok(())
    } else {
        Err(HarmonicError::BadM(m))
    }
}

/// `m·x·y / (t·m·x + (1 − t)·y)` on raw floats; callers guarantee `x, y > 0`.
#[inline]
pub fn harmonic_point(x: f64, y: f64, t: f64, m: f64) -> f64 {
    m * x * y / (t * m * x + (1.0 - t) * y)
}

pub fn harmonic_m_point(x: DomainPoint, y: DomainPoint, params: HarmonicParams) -> DomainPoint {
    DomainPoint(harmonic_point(x.0, y.0, params.t, params.m))
}

/// `k / 2^n` with `0 ≤ k ≤ 2^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyadicRational {
    k: u64,
    n: u32,
}

impl DyadicRational {
    pub const MAX_DEPTH: u32 = 62;

    pub fn new(k: u64, n: u32) -> Result<Self, HarmonicError> {
        if n > Self::MAX_DEPTH || k > 1u64 << n {
            return Err(HarmonicError::BadDyadic { k, n });
        }
        Ok(DyadicRational { k, n })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Exact: both `k` and `2^-n` are representable.
    pub fn value(&self) -> f64 {
        self.k as f64 * 2f64.powi(-(self.n as i32))
    }

    /// The depth-`n` dyadic closest to `t`, restricted to the open interval
    /// `(0, 1)` so it can stand in for an interior weight.
    pub fn nearest_interior(t: f64, n: u32) -> Result<Self, HarmonicError> {
        if n == 0 || n > Self::MAX_DEPTH {
            return Err(HarmonicError::BadDyadic { k: 0, n });
        }
        let scale = (1u64 << n) as f64;
        let k = (t * scale).round().clamp(1.0, scale - 1.0) as u64;
        DyadicRational::new(k, n)
    }

    /// Interior dyadics of exact depth `n` (odd numerators).
    pub fn interior_at_depth(n: u32) -> impl Iterator<Item = DyadicRational> {
        let top = 1u64 << n;
        (1..top).step_by(2).map(move |k| DyadicRational { k, n })
    }
}

impl fmt::Display for DyadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.k, self.n)
    }
}

/// A closed positive interval `[lo, hi]`, or `(0, hi]` sampled from an inset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    lo: f64,
    hi: f64,
    open_at_zero: bool,
}

impl Domain {
    pub fn closed(lo: f64, hi: f64) -> Result<Self, HarmonicError> {
        if !(lo > 0.0 && lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(HarmonicError::BadDomain(format!(
                "[{lo}, {hi}] must satisfy 0 < lo <= hi"
            )));
        }
        Ok(Domain {
            lo,
            hi,
            open_at_zero: false,
        })
    }

    /// `(0, hi]`, sampled as `[inset, hi]`.
    pub fn open_at_zero(hi: f64, inset: f64) -> Result<Self, HarmonicError> {
        if !(inset > 0.0 && hi.is_finite() && inset <= hi) {
            return Err(HarmonicError::BadDomain(format!(
                "(0, {hi}] with inset {inset} needs 0 < inset <= hi"
            )));
        }
        Ok(Domain {
            lo: inset,
            hi,
            open_at_zero: true,
        })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn is_open_at_zero(&self) -> bool {
        self.open_at_zero
    }

    /// The closed interval grids are drawn from.
    pub fn sample_interval(&self) -> Interval {
        Interval::new(self.lo, self.hi).expect("validated at construction")
    }

    /// Signed distance outside the domain; nonpositive means inside.
    pub fn membership_margin(&self, p: f64) -> f64 {
        if self.open_at_zero {
            (-p).max(p - self.hi)
        } else {
            (self.lo - p).max(p - self.hi)
        }
    }

    /// Returns `p` clamped into the sample interval when it lies inside the
    /// domain up to rounding (relative `1e-12`), `None` otherwise.
    pub fn admit(&self, p: f64) -> Option<f64> {
        let slack = 1e-12 * self.hi.max(1.0);
        if p > 0.0 && self.membership_margin(p) <= slack {
            Some(if self.open_at_zero {
                p.min(self.hi)
            } else {
                p.clamp(self.lo, self.hi)
            })
        } else {
            None
        }
    }

    pub fn contains(&self, p: f64, tol: f64) -> bool {
        p > 0.0 && self.membership_margin(p) <= tol
    }

    pub fn intersect(&self, other: &Domain) -> Option<Domain> {
        let hi = self.hi.min(other.hi);
        match (self.open_at_zero, other.open_at_zero) {
            (true, true) => Domain::open_at_zero(hi, self.lo.max(other.lo)).ok(),
            (false, true) => Domain::closed(self.lo, hi).ok(),
            (true, false) => Domain::closed(other.lo, hi).ok(),
            (false, false) => Domain::closed(self.lo.max(other.lo), hi).ok(),
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.open_at_zero {
            write!(f, "(0,{}]", self.hi)
        } else {
            write!(f, "[{},{}]", self.lo, self.hi)
        }
    }
}

impl FromStr for Domain {
    type Err = HarmonicError;

    /// Accepts `[lo,hi]` and `(0,hi]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad =
            || HarmonicError::BadDomain(format!("cannot parse {s:?}; expected [lo,hi] or (0,hi]"));
        let s = s.trim();
        let open = s.starts_with('(');
        if !(open || s.starts_with('[')) || !s.ends_with(']') {
            return Err(bad());
        }
        let inner = &s[1..s.len() - 1];
        let (a, b) = inner.split_once(',').ok_or_else(bad)?;
        let lo: f64 = a.trim().parse().map_err(|_| bad())?;
        let hi: f64 = b.trim().parse().map_err(|_| bad())?;
        if open {
            if lo != 0.0 {
                return Err(HarmonicError::BadDomain(format!(
                    "only (0,hi] may be open, got {s:?}"
                )));
            }
            Domain::open_at_zero(hi, DEFAULT_INSET)
        } else {
            Domain::closed(lo, hi)
        }
    }
}

/// Number of samples in `x`, `y`, and `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    pub nt: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            nx: 33,
            ny: 33,
            nt: 17,
        }
    }
}

impl GridSpec {
    pub fn new(nx: usize, ny: usize, nt: usize) -> Result<Self, HarmonicError> {
        if nx == 0 || ny == 0 || nt == 0 {
            return Err(HarmonicError::BadGrid(format!("{nx},{ny},{nt}")));
        }
        Ok(GridSpec { nx, ny, nt })
    }

    pub fn shape(&self) -> Vec<usize> {
        vec![self.nx, self.ny, self.nt]
    }

    /// `t` samples: `{1/2}` for a single point, else `i / (nt − 1)`.
    pub fn t_values(&self) -> Vec<f64> {
        if self.nt == 1 {
            return vec![0.5];
        }
        let d = (self.nt - 1) as f64;
        (0..self.nt).map(|i| i as f64 / d).collect()
    }
}

impl FromStr for GridSpec {
    type Err = HarmonicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || HarmonicError::BadGrid(s.to_string());
        let v: Vec<usize> = s
            .split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        match v.as_slice() {
            [nx, ny, nt] => GridSpec::new(*nx, *ny, *nt),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.nx, self.ny, self.nt)
    }
}

/// `n` log-spaced samples over `[lo, hi]` with exact endpoints.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            let d = (n - 1) as f64;
            let mut v: Vec<f64> = (0..n).map(|i| (a + (b - a) * i as f64 / d).exp()).collect();
            v[0] = lo;
            v[n - 1] = hi;
            v
        }
    }
}

pub fn lin_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let d = (n - 1) as f64;
            let mut v: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / d).collect();
            v[n - 1] = hi;
            v
        }
    }
}

/// Checks that every sampled harmonic m-combination stays in `domain`.
pub fn is_harmonically_m_convex_domain(
    domain: &Domain,
    m: f64,
    grid: GridSpec,
) -> Result<CheckReport, HarmonicError> {
    check_m(m)?;
    let xs = log_space(domain.lo, domain.hi, grid.nx);
    let ys = log_space(domain.lo, domain.hi, grid.ny);
    let ts = grid.t_values();
    let mut tracker = WorstTracker::default();
    for &x in &xs {
        for &y in &ys {
            for &t in &ts {
                let h = harmonic_point(x, y, t, m);
                let margin = domain.membership_margin(h);
                tracker.record(margin, DEFAULT_TOL, || {
                    Witness::new(x, y, t).with_detail(format!("h = {h} vs domain {domain}"))
                });
            }
        }
    }
    Ok(tracker.into_report("harmonic-m-convex-domain", DEFAULT_TOL, grid.shape()))
}

/// Checks `t·x ∈ domain` for sampled `t ∈ (0, 1]` and `x ∈ domain`.
///
/// Uses `grid.nx` points in `x` (linear, since `0` may be an endpoint) and
/// `t = i / nt` for `i = 1..=nt`.
pub fn is_starshaped(domain: &Interval, grid: GridSpec) -> CheckReport {
    let xs = lin_space(domain.lo(), domain.hi(), grid.nx);
    let nt = grid.nt as f64;
    let mut tracker = WorstTracker::default();
    for &x in &xs {
        for i in 1..=grid.nt {
            let t = i as f64 / nt;
            let p = t * x;
            let margin = (domain.lo() - p).max(p - domain.hi());
            tracker.record(margin, DEFAULT_TOL, || {
                Witness::new(x, x, t).with_detail(format!("t·x = {p} vs {domain}"))
            });
        }
    }
    tracker.into_report("starshaped", DEFAULT_TOL, vec![grid.nx, grid.nt])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(v: f64) -> DomainPoint {
        DomainPoint::new(v).unwrap()
    }

    fn h(x: f64, y: f64, t: f64, m: f64) -> f64 {
        harmonic_m_point(p(x), p(y), HarmonicParams::new(t, m).unwrap()).value()
    }

    #[test]
    fn point_examples() {
        assert_eq!(h(1.0, 3.0, 0.0, 0.5), 0.5);
        assert_eq!(h(1.0, 3.0, 1.0, 0.5), 3.0);
        assert_eq!(h(1.0, 3.0, 0.5, 1.0), 1.5);
        assert!((h(1.0, 3.0, 0.5, 0.5) - 6.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(DomainPoint::new(0.0).is_err());
        assert!(DomainPoint::new(-1.0).is_err());
        assert!(HarmonicParams::new(1.5, 0.5).is_err());
        assert!(HarmonicParams::new(0.5, 0.0).is_err());
        assert!(HarmonicParams::new(0.5, 1.01).is_err());
    }

    #[test]
    fn dyadic_examples() {
        assert_eq!(DyadicRational::new(1, 1).unwrap().value(), 0.5);
        assert_eq!(DyadicRational::new(0, 5).unwrap().value(), 0.0);
        assert_eq!(DyadicRational::new(3, 2).unwrap().value(), 0.75);
        assert_eq!(DyadicRational::new(4, 2).unwrap().value(), 1.0);
        assert!(DyadicRational::new(5, 2).is_err());
    }

    #[test]
    fn dyadic_nearest_and_enumeration() {
        let q = DyadicRational::nearest_interior(1.0 / 3.0, 2).unwrap();
        assert_eq!((q.k(), q.n()), (1, 2));
        let q = DyadicRational::nearest_interior(0.999, 1).unwrap();
        assert_eq!((q.k(), q.n()), (1, 1));
        let total: usize = (1..=8)
            .map(|n| DyadicRational::interior_at_depth(n).count())
            .sum();
        assert_eq!(total, 255);
    }

    #[test]
    fn m_convex_domain_examples() {
        let g = GridSpec::default();
        let d = Domain::closed(1.0, 10.0).unwrap();
        assert!(is_harmonically_m_convex_domain(&d, 1.0, g)
            .unwrap()
            .is_pass());
        let r = is_harmonically_m_convex_domain(&d, 0.1, g).unwrap();
        assert!(!r.is_pass());
        let w = r.witness.unwrap();
        assert_eq!((w.x, w.t), (1.0, 0.0));
        assert!((r.worst_margin.unwrap() - 0.9).abs() < 1e-12);
        let d = Domain::open_at_zero(10.0, DEFAULT_INSET).unwrap();
        assert!(is_harmonically_m_convex_domain(&d, 0.5, g)
            .unwrap()
            .is_pass());
    }

    #[test]
    fn starshaped_examples() {
        let g = GridSpec::new(11, 1, 10).unwrap();
        assert!(is_starshaped(&Interval::new(0.0, 5.0).unwrap(), g).is_pass());
        let r = is_starshaped(&Interval::new(1.0, 5.0).unwrap(), g);
        assert!(!r.is_pass());
        let w = r.witness.unwrap();
        assert_eq!((w.x, w.t), (1.0, 0.1));
        assert!(is_starshaped(&Interval::new(0.0, 0.0).unwrap(), g).is_pass());
    }

    #[test]
    fn parses_domains_and_grids() {
        assert_eq!(
            "[0.5,8]".parse::<Domain>().unwrap(),
            Domain::closed(0.5, 8.0).unwrap()
        );
        let d: Domain = "(0, 10]".parse().unwrap();
        assert!(d.is_open_at_zero() && d.lo() == DEFAULT_INSET);
        assert!("(1,2]".parse::<Domain>().is_err());
        assert!("[2,1]".parse::<Domain>().is_err());
        assert!("[0,1]".parse::<Domain>().is_err());
        assert_eq!(
            "50,50,21".parse::<GridSpec>().unwrap(),
            GridSpec::new(50, 50, 21).unwrap()
        );
        assert!("50,50".parse::<GridSpec>().is_err());
        assert!("0,1,1".parse::<GridSpec>().is_err());
    }

    #[test]
    fn grids_hit_endpoints() {
        let v = log_space(0.1, 10.0, 65);
        assert_eq!((v[0], v[64]), (0.1, 10.0));
        assert!(v.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(GridSpec::new(1, 1, 1).unwrap().t_values(), vec![0.5]);
        assert_eq!(GridSpec::new(1, 1, 21).unwrap().t_values()[10], 0.5);
    }

    proptest! {
        #[test]
        fn fixed_point_when_m_is_one(x in 1e-3..1e3f64, t in 0.0..=1.0f64) {
            prop_assert!((harmonic_point(x, x, t, 1.0) - x).abs() <= 1e-12 * x);
        }

        #[test]
        fn monotone_in_t(x in 1e-2..1e2f64, y in 1e-2..1e2f64, m in 0.01..=1.0f64,
                         t1 in 0.0..=1.0f64, t2 in 0.0..=1.0f64) {
            let (a, b) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
            let (ha, hb) = (harmonic_point(x, y, a, m), harmonic_point(x, y, b, m));
            let slack = 1e-12 * ha.max(hb);
            if y >= m * x {
                prop_assert!(ha <= hb + slack);
            } else {
                prop_assert!(ha + slack >= hb);
            }
            let (lo, hi) = ((m * x).min(y), (m * x).max(y));
            prop_assert!(ha >= lo * (1.0 - 1e-12) && ha <= hi * (1.0 + 1e-12));
        }

        #[test]
        fn m_scaling_never_raises_the_point(x in 1e-2..1e2f64, y in 1e-2..1e2f64,
                                            m in 0.01..=1.0f64, t in 0.0..1.0f64) {
            prop_assert!(harmonic_point(x, y, t, m) <= harmonic_point(x, y, t, 1.0) * (1.0 + 1e-12));
        }

        #[test]
        fn harmonic_mean_below_arithmetic(x in 1e-3..1e3f64, y in 1e-3..1e3f64) {
            let hm = harmonic_point(x, y, 0.5, 1.0);
            prop_assert!((hm - 2.0 * x * y / (x + y)).abs() <= 1e-12 * hm);
            prop_assert!(hm <= 0.5 * (x + y) * (1.0 + 1e-12));
        }
    }
}

//! Tubes `{ z : d(z, γ([0, T])) < ε }` around straight geodesic segments of a
//! rectangle, their complements `F_ε`, and the lower bound
//! `g_{M1}(θ_ε) <= g_M(F_ε)` with `θ_ε(x1) = g_{M2}(trace of F_ε at x1)`.
//!
//! A segment (or each leg of a reflected billiard path) has the ε-neighbourhood
//! of a capsule, which is convex. On a vertical strip its lower boundary is
//! convex and its upper boundary concave, so the union and the intersection
//! of the traces over the strip are read off from the strip edges and the
//! capsule's lowest and highest points. That gives, per x-cell, a trace that
//! contains the tube trace at every `x` of the cell and one contained in it.
//! Their complements bracket `F_ε` as rectangle unions:
//! `F_outer ⊆ F_ε ⊆ F_inner`. The distance is Euclidean.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::{g_1d, sine_mass_bound, FunctionalKind, FunctionalValue, PiecewiseWeight, Weight1D};
use crate::model_spectra::ModelOperator1D;
use crate::sets::{IntervalSet, RectSet, TraceCell, BREAKPOINT_TOL};

pub const DEFAULT_X_RESOLUTION: usize = 64;
const MAX_LEGS: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeodesicKind {
    /// `t ↦ (x0 + t, y)`.
    Horizontal {
        y: f64,
        #[serde(default)]
        x0: f64,
    },
    /// `t ↦ (x, y0 + t)`.
    Vertical {
        x: f64,
        #[serde(default)]
        y0: f64,
    },
    /// Unit-speed line from `(0, intercept)` with direction `(1, slope)`.
    /// With `reflected` it bounces off the walls.
    Diagonal {
        slope: f64,
        #[serde(default)]
        intercept: f64,
        #[serde(default)]
        reflected: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicSegment {
    #[serde(flatten)]
    pub kind: GeodesicKind,
    /// Arc length `T`.
    pub t: f64,
    pub domain: (f64, f64),
}

type Point = (f64, f64);

fn inside(p: Point, domain: (f64, f64)) -> bool {
    let tol = 1e-12 * domain.0.max(domain.1);
    -tol <= p.0 && p.0 <= domain.0 + tol && -tol <= p.1 && p.1 <= domain.1 + tol
}

fn fold(u: f64, l: f64) -> f64 {
    let r = u.rem_euclid(2.0 * l);
    if r <= l { r } else { 2.0 * l - r }
}

impl GeodesicSegment {
    /// Horizontal line at height `y` across the whole domain.
    pub fn horizontal(domain: (f64, f64), y: f64) -> Self {
        GeodesicSegment { kind: GeodesicKind::Horizontal { y, x0: 0.0 }, t: domain.0, domain }
    }

    /// Vertical line at abscissa `x` across the whole domain.
    pub fn vertical(domain: (f64, f64), x: f64) -> Self {
        GeodesicSegment { kind: GeodesicKind::Vertical { x, y0: 0.0 }, t: domain.1, domain }
    }

    pub fn diagonal(domain: (f64, f64), slope: f64, intercept: f64, t: f64, reflected: bool) -> Self {
        GeodesicSegment { kind: GeodesicKind::Diagonal { slope, intercept, reflected }, t, domain }
    }

    /// The path as a polyline of straight legs inside the closed domain.
    pub fn legs(&self) -> Result<Vec<(Point, Point)>> {
        let (l1, l2) = self.domain;
        if !(l1 > 0.0 && l2 > 0.0 && l1.is_finite() && l2.is_finite()) {
            return Err(Error::InvalidArgument(format!("bad domain {:?}", self.domain)));
        }
        if !(self.t > 0.0 && self.t.is_finite()) {
            return Err(Error::InvalidArgument(format!("segment length must be positive, got {}", self.t)));
        }
        let straight = |p: Point, q: Point| -> Result<Vec<(Point, Point)>> {
            if inside(p, self.domain) && inside(q, self.domain) {
                Ok(vec![(p, q)])
            } else {
                Err(Error::InvalidArgument(format!("segment {p:?} -> {q:?} leaves the domain")))
            }
        };
        match self.kind {
            GeodesicKind::Horizontal { y, x0 } => straight((x0, y), (x0 + self.t, y)),
            GeodesicKind::Vertical { x, y0 } => straight((x, y0), (x, y0 + self.t)),
            GeodesicKind::Diagonal { slope, intercept, reflected } => {
                if !slope.is_finite() {
                    return Err(Error::InvalidArgument("slope must be finite".into()));
                }
                let norm = slope.hypot(1.0);
                let (ux, uy) = (1.0 / norm, slope / norm);
                let at = |t: f64| (t * ux, intercept + t * uy);
                if !reflected {
                    return straight(at(0.0), at(self.t));
                }
                if !inside(at(0.0), self.domain) {
                    return Err(Error::InvalidArgument(format!("start point {:?} outside the domain", at(0.0))));
                }
                // Times where the unfolded line crosses a wall of the tiling.
                let mut ts = vec![0.0, self.t];
                let mut crossings = |start: f64, v: f64, l: f64| -> Result<()> {
                    if v == 0.0 {
                        return Ok(());
                    }
                    let end = start + self.t * v;
                    let (lo, hi) = (start.min(end), start.max(end));
                    let first = (lo / l).floor() as i64 + 1;
                    let last = (hi / l).ceil() as i64 - 1;
                    if last - first > MAX_LEGS as i64 {
                        return Err(Error::InvalidArgument("reflected path has too many legs".into()));
                    }
                    for k in first..=last {
                        ts.push((k as f64 * l - start) / v);
                    }
                    Ok(())
                };
                crossings(0.0, ux, l1)?;
                crossings(intercept, uy, l2)?;
                ts.sort_by(f64::total_cmp);
                ts.dedup_by(|a, b| (*a - *b).abs() <= BREAKPOINT_TOL * self.t.max(1.0));
                let unfold = |t: f64| {
                    let (x, y) = at(t);
                    (fold(x, l1), fold(y, l2))
                };
                Ok(ts.windows(2).map(|w| (unfold(w[0]), unfold(w[1]))).collect())
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TubeSpec {
    pub segment: GeodesicSegment,
    pub epsilon: f64,
    /// Covering scale; must exceed `epsilon`.
    pub eta: f64,
    /// Number of covering points, at least `⌈T / η⌉`.
    pub covering_count: usize,
    #[serde(default = "default_resolution")]
    pub x_resolution: usize,
}

fn default_resolution() -> usize {
    DEFAULT_X_RESOLUTION
}

impl TubeSpec {
    /// `η = T / 8`, `N = ⌊T / η⌋ + 1`.
    pub fn new(segment: GeodesicSegment, epsilon: f64) -> Result<Self> {
        Self::with_eta(segment, epsilon, segment.t / 8.0)
    }

    pub fn with_eta(segment: GeodesicSegment, epsilon: f64, eta: f64) -> Result<Self> {
        let covering_count = if eta > 0.0 { (segment.t / eta).floor() as usize + 1 } else { 0 };
        let ts = TubeSpec { segment, epsilon, eta, covering_count, x_resolution: DEFAULT_X_RESOLUTION };
        ts.validate()?;
        Ok(ts)
    }

    pub fn resolution(mut self, x_resolution: usize) -> Result<Self> {
        self.x_resolution = x_resolution;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidArgument(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        if !(self.epsilon < self.eta && self.eta.is_finite()) {
            return Err(Error::InvalidArgument(format!("need epsilon < eta, got {} >= {}", self.epsilon, self.eta)));
        }
        let needed = (self.segment.t / self.eta).ceil() as usize;
        if self.covering_count < needed {
            return Err(Error::InvalidArgument(format!(
                "{} covering points, at least {needed} needed",
                self.covering_count
            )));
        }
        if self.x_resolution < 2 {
            return Err(Error::InvalidArgument("x resolution must be at least 2".into()));
        }
        self.segment.legs().map(|_| ())
    }
}

/// The closed ε-neighbourhood of one leg.
struct Capsule {
    p: Point,
    q: Point,
    eps: f64,
    slack: f64,
}

impl Capsule {
    fn x_extent(&self) -> (f64, f64) {
        (self.p.0.min(self.q.0) - self.eps, self.p.0.max(self.q.0) + self.eps)
    }

    /// `[lo, hi]` of the vertical trace at `x`, for `x` in the x-extent.
    fn trace_at(&self, x: f64) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut take = |a: f64, b: f64| {
            if a <= b {
                lo = lo.min(a);
                hi = hi.max(b);
            }
        };
        for c in [self.p, self.q] {
            let dx = x - c.0;
            let r2 = self.eps * self.eps - dx * dx;
            if r2 >= -self.slack * self.eps {
                let r = r2.max(0.0).sqrt();
                take(c.1 - r, c.1 + r);
            }
        }
        let (vx, vy) = (self.q.0 - self.p.0, self.q.1 - self.p.1);
        let len = vx.hypot(vy);
        if len > 0.0 {
            let (ux, uy) = (vx / len, vy / len);
            let dx = x - self.p.0;
            // Constraints on w = y - p.y:
            //   0 <= dx ux + w uy <= len   and   |w ux - dx uy| <= eps.
            let (mut a, mut b) = (f64::NEG_INFINITY, f64::INFINITY);
            let mut band = |coef: f64, lo_rhs: f64, hi_rhs: f64| {
                if coef.abs() < 1e-15 {
                    if !(lo_rhs <= self.slack && -self.slack <= hi_rhs) {
                        a = f64::INFINITY;
                    }
                } else {
                    let (s, t) = (lo_rhs / coef, hi_rhs / coef);
                    a = a.max(s.min(t));
                    b = b.min(s.max(t));
                }
            };
            band(uy, -dx * ux, len - dx * ux);
            band(ux, dx * uy - self.eps, dx * uy + self.eps);
            take(self.p.1 + a, self.p.1 + b);
        }
        (lo, hi)
    }

    /// Lowest and highest points: `(y, x-range)` each.
    fn extremes(&self) -> [(f64, (f64, f64)); 2] {
        let range = |pick: &dyn Fn(f64, f64) -> bool| {
            if self.p.1 == self.q.1 {
                (self.p.0.min(self.q.0), self.p.0.max(self.q.0))
            } else if pick(self.p.1, self.q.1) {
                (self.p.0, self.p.0)
            } else {
                (self.q.0, self.q.0)
            }
        };
        [
            (self.p.1.min(self.q.1) - self.eps, range(&|a, b| a < b)),
            (self.p.1.max(self.q.1) + self.eps, range(&|a, b| a > b)),
        ]
    }

    /// `(union, intersection)` of the traces over `x ∈ [x0, x1]`.
    fn cell_traces(&self, x0: f64, x1: f64) -> ((f64, f64), Option<(f64, f64)>) {
        let (lo0, hi0) = self.trace_at(x0);
        let (lo1, hi1) = self.trace_at(x1);
        let [(ymin, rmin), (ymax, rmax)] = self.extremes();
        let hit = |r: (f64, f64)| r.0 <= x1 && x0 <= r.1;
        let mut lo = lo0.min(lo1);
        let mut hi = hi0.max(hi1);
        if hit(rmin) {
            lo = lo.min(ymin);
        }
        if hit(rmax) {
            hi = hi.max(ymax);
        }
        let (ilo, ihi) = (lo0.max(lo1), hi0.min(hi1));
        ((lo, hi), (ilo < ihi).then_some((ilo, ihi)))
    }
}

/// One x-cell with a trace containing the tube trace at every point of the
/// cell (`outer_tube`) and one contained in all of them (`inner_tube`).
#[derive(Clone, Debug, PartialEq)]
pub struct TubeCell {
    pub x0: f64,
    pub x1: f64,
    pub outer_tube: IntervalSet,
    pub inner_tube: IntervalSet,
}

impl TubeCell {
    /// Trace of `F_outer` (a subset of the `F_ε` trace).
    pub fn f_outer(&self) -> IntervalSet {
        self.outer_tube.complement()
    }

    /// Trace of `F_inner` (a superset of the `F_ε` trace).
    pub fn f_inner(&self) -> IntervalSet {
        self.inner_tube.complement()
    }
}

/// Cell edges: a uniform grid refined at every `x` where a capsule trace
/// changes shape.
fn cell_edges(ts: &TubeSpec, legs: &[(Point, Point)]) -> Vec<f64> {
    let l1 = ts.segment.domain.0;
    let n = ts.x_resolution;
    let mut xs: Vec<f64> = (0..=n).map(|k| l1 * k as f64 / n as f64).collect();
    for &(p, q) in legs {
        for c in [p.0, q.0] {
            for x in [c - ts.epsilon, c, c + ts.epsilon] {
                if 0.0 < x && x < l1 {
                    xs.push(x);
                }
            }
        }
    }
    xs.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(xs.len());
    for x in xs {
        match out.last() {
            Some(&last) if x - last <= BREAKPOINT_TOL * l1.max(1.0) => {}
            _ => out.push(x),
        }
    }
    *out.last_mut().unwrap() = l1;
    out
}

fn clip(lo: f64, hi: f64, l2: f64) -> Option<(f64, f64)> {
    let (a, b) = (lo.max(0.0), hi.min(l2));
    (a < b).then_some((a, b))
}

pub fn tube_cells(ts: &TubeSpec) -> Result<Vec<TubeCell>> {
    ts.validate()?;
    let legs = ts.segment.legs()?;
    let (l1, l2) = ts.segment.domain;
    let slack = 1e-12 * l1.max(l2);
    let capsules: Vec<Capsule> = legs.iter().map(|&(p, q)| Capsule { p, q, eps: ts.epsilon, slack }).collect();
    let edges = cell_edges(ts, &legs);
    let cell = |w: &[f64]| -> Result<TubeCell> {
        let (x0, x1) = (w[0], w[1]);
        let mid = 0.5 * (x0 + x1);
        let mut outer = Vec::new();
        let mut inner = Vec::new();
        for c in &capsules {
            let (e0, e1) = c.x_extent();
            if !(e0 < mid && mid < e1) {
                continue;
            }
            let (u, i) = c.cell_traces(x0.max(e0), x1.min(e1));
            outer.extend(clip(u.0, u.1, l2));
            if let Some((a, b)) = i {
                inner.extend(clip(a, b, l2));
            }
        }
        Ok(TubeCell { x0, x1, outer_tube: IntervalSet::new(l2, outer)?, inner_tube: IntervalSet::new(l2, inner)? })
    };

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        edges.par_windows(2).map(cell).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        edges.windows(2).map(cell).collect()
    }
}

/// `(F_outer, F_inner)` with `F_outer ⊆ F_ε ⊆ F_inner`. Fails with
/// [`Error::TubeCoversDomain`] when `F_inner`, hence `F_ε`, is empty.
pub fn tube_complement(ts: &TubeSpec) -> Result<(RectSet, RectSet)> {
    let cells = tube_cells(ts)?;
    let domain = ts.segment.domain;
    let build = |f: fn(&TubeCell) -> IntervalSet| {
        RectSet::from_cells(domain, cells.iter().map(|c| TraceCell { x0: c.x0, x1: c.x1, trace: f(c) }).collect())
    };
    let outer = build(TubeCell::f_outer);
    let inner = build(TubeCell::f_inner);
    if inner.is_empty() {
        return Err(Error::TubeCoversDomain);
    }
    Ok((outer, inner))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaMode {
    /// `f − sin(π f)/π` of the trace fraction `f`. A lower bound for
    /// Dirichlet operators.
    BoundFormula,
    /// `g_1d` of the trace at the cutoff.
    Direct,
}

/// Which side of the bracket the traces come from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Approximation {
    /// `F_outer ⊆ F_ε`: rigorous lower bounds.
    #[default]
    Outer,
    Inner,
}

/// `θ_ε` as a piecewise constant weight on the first factor. A cell whose
/// trace is empty gets `0`.
pub fn theta_epsilon(
    ts: &TubeSpec,
    op2: &ModelOperator1D,
    cutoff: f64,
    mode: ThetaMode,
    approx: Approximation,
) -> Result<PiecewiseWeight> {
    let (l1, l2) = ts.segment.domain;
    if (op2.length - l2).abs() > 1e-12 * l2 {
        return Err(Error::InvalidArgument(format!("operator lives on [0, {}], domain height is {l2}", op2.length)));
    }
    let cells = tube_cells(ts)?;
    let value = |c: &TubeCell| -> Result<f64> {
        let trace = match approx {
            Approximation::Outer => c.f_outer(),
            Approximation::Inner => c.f_inner(),
        };
        if trace.is_empty() {
            return Ok(0.0);
        }
        Ok(match mode {
            ThetaMode::BoundFormula => sine_mass_bound(trace.fraction()),
            ThetaMode::Direct => g_1d(op2, &Weight1D::Indicator(trace), cutoff)?.value.clamp(0.0, 1.0),
        })
    };

    #[cfg(feature = "parallel")]
    let values: Vec<f64> = {
        use rayon::prelude::*;
        cells.par_iter().map(value).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let values: Vec<f64> = cells.iter().map(value).collect::<Result<_>>()?;

    let mut bps: Vec<f64> = cells.iter().map(|c| c.x0).collect();
    bps.push(l1);
    PiecewiseWeight::new(bps, values)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TubeBound {
    pub functional: FunctionalValue,
    /// Whether the caller verified minimal multiplicity up to the cutoff.
    /// Without it the value is not a proven bound on `g_M(F_ε)`.
    pub mm_verified: bool,
}

impl TubeBound {
    pub fn label(&self) -> &'static str {
        if self.mm_verified { "bound" } else { "bound requires (MM)" }
    }
}

/// `g_{M1}(θ_ε)` at the cutoff.
pub fn tube_functional_bound(
    ts: &TubeSpec,
    op1: &ModelOperator1D,
    op2: &ModelOperator1D,
    cutoff: f64,
    mode: ThetaMode,
    approx: Approximation,
    mm_verified: bool,
) -> Result<TubeBound> {
    let theta = theta_epsilon(ts, op2, cutoff, mode, approx)?;
    let mut functional = g_1d(op1, &Weight1D::Piecewise(theta), cutoff)?;
    functional.kind = FunctionalKind::Theta;
    Ok(TubeBound { functional, mm_verified })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const SQ: (f64, f64) = (PI, PI);

    #[test]
    fn horizontal_tube_is_exact() {
        let ts = TubeSpec::new(GeodesicSegment::horizontal(SQ, PI / 2.0), 0.1).unwrap();
        let (outer, inner) = tube_complement(&ts).unwrap();
        assert_eq!(outer, inner);
        let b2 = IntervalSet::new(PI, vec![(0.0, PI / 2.0 - 0.1), (PI / 2.0 + 0.1, PI)]).unwrap();
        let want = RectSet::product(&IntervalSet::full(PI).unwrap(), &b2).unwrap();
        assert!(outer.symmetric_difference_measure(&want) < 1e-14);
    }

    #[test]
    fn vertical_tube_is_exact() {
        let ts = TubeSpec::new(GeodesicSegment::vertical(SQ, 1.0), 0.2).unwrap();
        let (outer, inner) = tube_complement(&ts).unwrap();
        let b1 = IntervalSet::new(PI, vec![(0.0, 0.8), (1.2, PI)]).unwrap();
        let want = RectSet::product(&b1, &IntervalSet::full(PI).unwrap()).unwrap();
        assert!(outer.symmetric_difference_measure(&want) < 1e-12);
        assert!(inner.symmetric_difference_measure(&want) < 1e-12);
    }

    #[test]
    fn diagonal_tube_brackets_strip_area() {
        let seg = GeodesicSegment::diagonal(SQ, 1.0, 0.0, PI * 2f64.sqrt(), false);
        let ts = TubeSpec::new(seg, 0.1).unwrap();
        let (outer, inner) = tube_complement(&ts).unwrap();
        let d = 0.1 * 2f64.sqrt();
        let tube_area = PI * PI - (PI - d) * (PI - d);
        let outer_tube = PI * PI - outer.measure();
        let inner_tube = PI * PI - inner.measure();
        assert!(inner_tube <= tube_area + 1e-12 && tube_area <= outer_tube + 1e-12);
        // slope 1: the cell traces lose one cell width on each side
        assert!(outer_tube - inner_tube <= 2.0 * PI * PI / 64.0);
        for c in tube_cells(&ts).unwrap() {
            let mid = 0.5 * (c.x0 + c.x1);
            if (0.2..PI - 0.2).contains(&mid) {
                let w = c.outer_tube.measure() / 2.0;
                assert!(w >= d - 1e-12 && w <= d + (c.x1 - c.x0) + 1e-12, "half-width {w}");
            }
        }
    }

    #[test]
    fn reflected_path_folds_into_domain() {
        let seg = GeodesicSegment::diagonal((2.0, 1.0), 0.5, 0.2, 6.0, true);
        let legs = seg.legs().unwrap();
        assert!(legs.len() > 2);
        let total: f64 = legs.iter().map(|(p, q)| (q.0 - p.0).hypot(q.1 - p.1)).sum();
        assert!((total - 6.0).abs() < 1e-12);
        for (p, q) in &legs {
            assert!(inside(*p, seg.domain) && inside(*q, seg.domain));
        }
        for w in legs.windows(2) {
            assert!((w[0].1 .0 - w[1].0 .0).abs() < 1e-12 && (w[0].1 .1 - w[1].0 .1).abs() < 1e-12);
        }
        assert!(GeodesicSegment::diagonal((2.0, 1.0), 0.5, 0.2, 6.0, false).legs().is_err());
    }

    #[test]
    fn theta_horizontal_values() {
        let ts = TubeSpec::new(GeodesicSegment::horizontal(SQ, PI / 2.0), 0.1).unwrap();
        let op = ModelOperator1D::dirichlet_pi();
        let w = theta_epsilon(&ts, &op, 400.0, ThetaMode::BoundFormula, Approximation::Outer).unwrap();
        let f = 1.0 - 0.2 / PI;
        assert!((f - 0.93634).abs() < 1e-5);
        let bound = f - (PI * f).sin() / PI;
        assert!((bound - 0.87310).abs() < 1e-5);
        assert!(w.values().iter().all(|v| (v - bound).abs() < 1e-14));
        let direct = theta_epsilon(&ts, &op, 400.0, ThetaMode::Direct, Approximation::Outer).unwrap();
        assert!(direct.values().iter().all(|v| *v >= bound - 1e-12));
    }

    #[test]
    fn covering_tube() {
        let seg = GeodesicSegment::horizontal(SQ, PI / 2.0);
        let ts = TubeSpec::with_eta(seg, 2.0, 3.0).unwrap();
        assert_eq!(tube_complement(&ts), Err(Error::TubeCoversDomain));
        let op = ModelOperator1D::dirichlet_pi();
        let b = tube_functional_bound(&ts, &op, &op, 100.0, ThetaMode::BoundFormula, Approximation::Outer, false)
            .unwrap();
        assert_eq!(b.functional.value, 0.0);
        assert_eq!(b.label(), "bound requires (MM)");
    }

    #[test]
    fn spec_validation() {
        let seg = GeodesicSegment::horizontal(SQ, 1.0);
        let ts = TubeSpec::new(seg, 0.1).unwrap();
        assert_eq!(ts.covering_count, 9);
        assert!(TubeSpec::new(seg, 0.5).is_err());
        assert!(TubeSpec::new(seg, 0.0).is_err());
        assert!(ts.resolution(1).is_err());
        let mut bad = ts;
        bad.covering_count = 7;
        assert!(bad.validate().is_err());
        assert!(TubeSpec::new(GeodesicSegment::horizontal(SQ, 4.0), 0.1).is_err());
    }

    #[test]
    fn segment_json() {
        let seg: GeodesicSegment = serde_json::from_str(
            r#"{"kind":"diagonal","slope":1.0,"t":4.0,"domain":[3.141592653589793,3.141592653589793]}"#,
        )
        .unwrap();
        assert_eq!(seg, GeodesicSegment::diagonal(SQ, 1.0, 0.0, 4.0, false));
        let back: GeodesicSegment = serde_json::from_str(&serde_json::to_string(&seg).unwrap()).unwrap();
        assert_eq!(back, seg);
    }
}

//! Finite unions of open intervals and of open axis-aligned rectangles.
//!
//! Boundaries are null sets for every integral computed in this crate, so
//! the open/closed distinction is kept only for the merging rule: two open
//! intervals that merely share an endpoint stay separate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Edges closer than this are treated as one breakpoint.
pub const BREAKPOINT_TOL: f64 = 1e-14;

/// Sorted, pairwise disjoint open intervals inside `[0, L]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "IntervalSetRepr", into = "IntervalSetRepr")]
pub struct IntervalSet {
    domain: f64,
    intervals: Vec<(f64, f64)>,
}

#[derive(Serialize, Deserialize)]
struct IntervalSetRepr {
    domain: f64,
    intervals: Vec<[f64; 2]>,
}

impl TryFrom<IntervalSetRepr> for IntervalSet {
    type Error = Error;
    fn try_from(r: IntervalSetRepr) -> Result<Self> {
        IntervalSet::new(r.domain, r.intervals.into_iter().map(|[a, b]| (a, b)).collect())
    }
}

impl From<IntervalSet> for IntervalSetRepr {
    fn from(s: IntervalSet) -> Self {
        IntervalSetRepr { domain: s.domain, intervals: s.intervals.into_iter().map(|(a, b)| [a, b]).collect() }
    }
}

fn check_domain(l: f64) -> Result<()> {
    if l > 0.0 && l.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("domain length must be positive, got {l}")))
    }
}

impl IntervalSet {
    /// Validates, sorts and merges overlapping intervals. Empty intervals
    /// (`a == b`) are dropped; reversed or out-of-domain ones are rejected.
    pub fn new(domain: f64, mut intervals: Vec<(f64, f64)>) -> Result<Self> {
        check_domain(domain)?;
        for &(a, b) in &intervals {
            if !(a.is_finite() && b.is_finite() && 0.0 <= a && a <= b && b <= domain) {
                return Err(Error::BadBounds { a, b, length: domain });
            }
        }
        intervals.retain(|&(a, b)| a < b);
        intervals.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(intervals.len());
        for (a, b) in intervals {
            match merged.last_mut() {
                Some(last) if a < last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        Ok(IntervalSet { domain, intervals: merged })
    }

    pub fn empty(domain: f64) -> Result<Self> {
        Self::new(domain, Vec::new())
    }

    pub fn full(domain: f64) -> Result<Self> {
        Self::new(domain, vec![(0.0, domain)])
    }

    pub fn domain_length(&self) -> f64 {
        self.domain
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    /// Measure normalized by the domain length.
    pub fn fraction(&self) -> f64 {
        self.measure() / self.domain
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|&(a, b)| a < x && x < b)
    }

    pub fn complement(&self) -> IntervalSet {
        let mut out = Vec::with_capacity(self.intervals.len() + 1);
        let mut prev = 0.0;
        for &(a, b) in &self.intervals {
            if a > prev {
                out.push((prev, a));
            }
            prev = b;
        }
        if prev < self.domain {
            out.push((prev, self.domain));
        }
        IntervalSet { domain: self.domain, intervals: out }
    }

    pub fn intersection(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.intervals.len() && j < other.intervals.len() {
            let (a, b) = self.intervals[i];
            let (c, d) = other.intervals[j];
            let (lo, hi) = (a.max(c), b.min(d));
            if lo < hi {
                out.push((lo, hi));
            }
            if b < d {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet { domain: self.domain, intervals: out }
    }

    pub fn union(&self, other: &IntervalSet) -> Result<IntervalSet> {
        let all = self.intervals.iter().chain(&other.intervals).copied().collect();
        IntervalSet::new(self.domain, all)
    }

    /// Measure of the symmetric difference.
    pub fn symmetric_difference_measure(&self, other: &IntervalSet) -> f64 {
        self.measure() + other.measure() - 2.0 * self.intersection(other).measure()
    }
}

/// Open rectangle `(x0, x1) × (y0, y1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl From<[f64; 4]> for Rect {
    fn from([x0, x1, y0, y1]: [f64; 4]) -> Self {
        Rect { x0, x1, y0, y1 }
    }
}

impl From<Rect> for [f64; 4] {
    fn from(r: Rect) -> Self {
        [r.x0, r.x1, r.y0, r.y1]
    }
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Rect { x0, x1, y0, y1 }
    }

    pub fn area(&self) -> f64 {
        (self.x1 - self.x0) * (self.y1 - self.y0)
    }

    pub fn overlaps(&self, o: &Rect) -> bool {
        self.x0.max(o.x0) < self.x1.min(o.x1) && self.y0.max(o.y0) < self.y1.min(o.y1)
    }

    pub fn intersect(&self, o: &Rect) -> Option<Rect> {
        let r = Rect::new(self.x0.max(o.x0), self.x1.min(o.x1), self.y0.max(o.y0), self.y1.min(o.y1));
        (r.x0 < r.x1 && r.y0 < r.y1).then_some(r)
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        self.x0 < x && x < self.x1 && self.y0 < y && y < self.y1
    }
}

/// Pairwise disjoint open rectangles inside `[0, L1] × [0, L2]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RectSetRepr", into = "RectSetRepr")]
pub struct RectSet {
    domain: (f64, f64),
    rects: Vec<Rect>,
}

#[derive(Serialize, Deserialize)]
struct RectSetRepr {
    domain: [f64; 2],
    rects: Vec<Rect>,
}

impl TryFrom<RectSetRepr> for RectSet {
    type Error = Error;
    fn try_from(r: RectSetRepr) -> Result<Self> {
        RectSet::new((r.domain[0], r.domain[1]), r.rects)
    }
}

impl From<RectSet> for RectSetRepr {
    fn from(s: RectSet) -> Self {
        RectSetRepr { domain: [s.domain.0, s.domain.1], rects: s.rects }
    }
}

/// One vertical strip `(x0, x1) × [0, L2]` with the constant trace of a set on it.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceCell {
    pub x0: f64,
    pub x1: f64,
    pub trace: IntervalSet,
}

impl RectSet {
    /// Validates bounds and pairwise disjointness. Zero-area rectangles are
    /// dropped.
    pub fn new(domain: (f64, f64), mut rects: Vec<Rect>) -> Result<Self> {
        check_domain(domain.0)?;
        check_domain(domain.1)?;
        for r in &rects {
            let ok = [r.x0, r.x1, r.y0, r.y1].iter().all(|v| v.is_finite())
                && 0.0 <= r.x0
                && r.x0 <= r.x1
                && r.x1 <= domain.0
                && 0.0 <= r.y0
                && r.y0 <= r.y1
                && r.y1 <= domain.1;
            if !ok {
                return Err(Error::InvalidArgument(format!(
                    "rectangle {r:?} not inside [0, {}] x [0, {}]",
                    domain.0, domain.1
                )));
            }
        }
        rects.retain(|r| r.area() > 0.0);
        for i in 0..rects.len() {
            for j in i + 1..rects.len() {
                if rects[i].overlaps(&rects[j]) {
                    return Err(Error::OverlappingRects(i, j));
                }
            }
        }
        Ok(RectSet { domain, rects })
    }

    /// Builds a disjoint decomposition of the union of possibly overlapping
    /// rectangles.
    pub fn normalize(domain: (f64, f64), rects: Vec<Rect>) -> Result<Self> {
        // Validate bounds only; overlaps are allowed here.
        for r in &rects {
            RectSet::new(domain, vec![*r])?;
        }
        let raw = RectSet { domain, rects: rects.into_iter().filter(|r| r.area() > 0.0).collect() };
        Ok(RectSet::from_cells(domain, raw.trace_cells()))
    }

    pub fn empty(domain: (f64, f64)) -> Result<Self> {
        Self::new(domain, Vec::new())
    }

    pub fn full(domain: (f64, f64)) -> Result<Self> {
        Self::new(domain, vec![Rect::new(0.0, domain.0, 0.0, domain.1)])
    }

    /// Product set `B1 × B2`.
    pub fn product(b1: &IntervalSet, b2: &IntervalSet) -> Result<Self> {
        let mut rects = Vec::new();
        for &(a, b) in b1.intervals() {
            for &(c, d) in b2.intervals() {
                rects.push(Rect::new(a, b, c, d));
            }
        }
        Self::new((b1.domain_length(), b2.domain_length()), rects)
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn rects(&self) -> &[Rect] {
        &self.rects
    }

    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }

    pub fn measure(&self) -> f64 {
        self.rects.iter().map(Rect::area).sum()
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        self.rects.iter().any(|r| r.contains(x, y))
    }

    /// `{ y : (x1, y) ∈ ω }` as an interval set on `[0, L2]`.
    pub fn vertical_trace(&self, x1: f64) -> IntervalSet {
        let ys = self.rects.iter().filter(|r| r.x0 < x1 && x1 < r.x1).map(|r| (r.y0, r.y1)).collect();
        IntervalSet::new(self.domain.1, ys).expect("rectangles are inside the domain")
    }

    /// Sorted distinct x-edges, including `0` and `L1`. The vertical trace is
    /// constant between consecutive breakpoints.
    pub fn x_breakpoints(&self) -> Vec<f64> {
        let mut xs: Vec<f64> = vec![0.0, self.domain.0];
        xs.extend(self.rects.iter().flat_map(|r| [r.x0, r.x1]));
        xs.sort_by(f64::total_cmp);
        let mut out: Vec<f64> = Vec::with_capacity(xs.len());
        for x in xs {
            match out.last() {
                Some(&last) if x - last <= BREAKPOINT_TOL => {}
                _ => out.push(x),
            }
        }
        // keep L1 itself as the final edge
        if let Some(last) = out.last_mut() {
            *last = last.max(self.domain.0);
        }
        out
    }

    /// Breakpoint cells with their traces.
    pub fn trace_cells(&self) -> Vec<TraceCell> {
        self.x_breakpoints()
            .windows(2)
            .map(|w| TraceCell { x0: w[0], x1: w[1], trace: self.vertical_trace(0.5 * (w[0] + w[1])) })
            .collect()
    }

    /// Inverse of [`trace_cells`](Self::trace_cells): consecutive cells with
    /// equal traces are fused into single rectangles.
    pub fn from_cells(domain: (f64, f64), cells: Vec<TraceCell>) -> RectSet {
        let mut rects = Vec::new();
        let mut iter = cells.into_iter().peekable();
        while let Some(mut cell) = iter.next() {
            while let Some(next) = iter.peek() {
                if next.trace == cell.trace && next.x0 <= cell.x1 {
                    cell.x1 = next.x1;
                    iter.next();
                } else {
                    break;
                }
            }
            if cell.x0 < cell.x1 {
                rects.extend(cell.trace.intervals().iter().map(|&(c, d)| Rect::new(cell.x0, cell.x1, c, d)));
            }
        }
        RectSet { domain, rects }
    }

    pub fn complement(&self) -> RectSet {
        let cells = self
            .trace_cells()
            .into_iter()
            .map(|c| TraceCell { trace: c.trace.complement(), ..c })
            .collect();
        RectSet::from_cells(self.domain, cells)
    }

    pub fn intersection(&self, other: &RectSet) -> RectSet {
        let mut rects = Vec::new();
        for r in &self.rects {
            rects.extend(other.rects.iter().filter_map(|o| r.intersect(o)));
        }
        RectSet { domain: self.domain, rects }
    }

    pub fn union(&self, other: &RectSet) -> Result<RectSet> {
        RectSet::normalize(self.domain, self.rects.iter().chain(&other.rects).copied().collect())
    }

    pub fn symmetric_difference_measure(&self, other: &RectSet) -> f64 {
        self.measure() + other.measure() - 2.0 * self.intersection(other).measure()
    }
}

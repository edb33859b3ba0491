//! Independent reference computations for the integration tests. Nothing here
//! calls into the library's numerics.
#![allow(dead_code)]

use rand::Rng;
use spectral_lab::{IntervalSet, Rect, RectSet};

/// Adaptive Simpson quadrature with Richardson correction.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1)
            + rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1)
    }
    if a == b {
        return 0.0;
    }
    // Start from a few panels so oscillatory integrands are not sampled at zeros only.
    let panels = 16;
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|k| {
            let (x0, x1) = (a + k as f64 * h, a + (k + 1) as f64 * h);
            let (fa, fb) = (f(x0), f(x1));
            let (m, fm, whole) = simpson(f, x0, fa, x1, fb);
            rec(f, x0, fa, x1, fb, m, fm, whole, tol / panels as f64, 40)
        })
        .sum()
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for m in 2..=n {
                let p2 = ((2 * m - 1) as f64 * x * p1 - (m - 1) as f64 * p0) / m as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Composite Gauss–Legendre over a rectangle.
pub fn quad_2d(f: &dyn Fn(f64, f64) -> f64, r: &Rect, panels: usize, rule: &[(f64, f64)]) -> f64 {
    let nodes = |a: f64, b: f64| -> Vec<(f64, f64)> {
        let h = (b - a) / panels as f64;
        (0..panels)
            .flat_map(|p| {
                let c = a + (p as f64 + 0.5) * h;
                rule.iter().map(move |&(x, w)| (c + 0.5 * h * x, 0.5 * h * w))
            })
            .collect()
    };
    let (xs, ys) = (nodes(r.x0, r.x1), nodes(r.y0, r.y1));
    let mut total = 0.0;
    for &(x, wx) in &xs {
        let mut inner = 0.0;
        for &(y, wy) in &ys {
            inner += wy * f(x, y);
        }
        total += wx * inner;
    }
    total
}

/// Number of eigenvalues of `a` below `lambda`: sign changes in the leading
/// principal minors of `a - λI`, i.e. negative pivots of unpivoted Gaussian
/// elimination.
pub fn count_below(a: &[Vec<f64>], lambda: f64) -> usize {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] -= lambda;
    }
    let mut neg = 0;
    for k in 0..n {
        let mut piv = m[k][k];
        if piv == 0.0 {
            piv = -1e-300;
        }
        if piv < 0.0 {
            neg += 1;
        }
        for i in k + 1..n {
            let f = m[i][k] / piv;
            for j in k + 1..n {
                m[i][j] -= f * m[k][j];
            }
        }
    }
    neg
}

/// Smallest eigenvalue by bisection on the characteristic-polynomial sign
/// count, bracketed by Gershgorin discs.
pub fn min_eigen_bisection(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..n {
        let r: f64 = (0..n).filter(|&j| j != i).map(|j| a[i][j].abs()).sum();
        lo = lo.min(a[i][i] - r);
        hi = hi.max(a[i][i] + r);
    }
    lo -= 1.0;
    hi += 1.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if count_below(a, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-14 * (1.0 + hi.abs()) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// All `((i, j), (i2, j2))` with `i, i2 ∈ 1..=n1`, `j, j2 ∈ 1..=n2`, sums
/// `<= cutoff` and `|sum - sum2| <= tol`, by comparing every pair of pairs.
pub fn brute_force_collisions(
    ev1: &[f64],
    ev2: &[f64],
    cutoff: f64,
    tol: f64,
) -> Vec<((usize, usize), (usize, usize))> {
    let mut pairs = Vec::new();
    for (i, a) in ev1.iter().enumerate() {
        for (j, b) in ev2.iter().enumerate() {
            if a + b <= cutoff {
                pairs.push(((i + 1, j + 1), a + b));
            }
        }
    }
    let mut out = Vec::new();
    for p in 0..pairs.len() {
        for q in p + 1..pairs.len() {
            if (pairs[p].1 - pairs[q].1).abs() <= tol {
                let (a, b) = (pairs[p].0.min(pairs[q].0), pairs[p].0.max(pairs[q].0));
                out.push((a, b));
            }
        }
    }
    out.sort_unstable();
    out
}

/// A random union of up to `max_parts` subintervals of `[0, length]`.
pub fn random_interval_set<R: Rng>(rng: &mut R, length: f64, max_parts: usize) -> IntervalSet {
    let k = rng.gen_range(1..=max_parts);
    let parts = (0..k)
        .map(|_| {
            let a = rng.gen_range(0.0..length);
            let b = rng.gen_range(0.0..length);
            (a.min(b), a.max(b))
        })
        .collect();
    IntervalSet::new(length, parts).unwrap()
}

/// A union of up to `max_rects` random rectangles, possibly overlapping on
/// input.
pub fn random_rect_set<R: Rng>(rng: &mut R, domain: (f64, f64), max_rects: usize) -> RectSet {
    let k = rng.gen_range(1..=max_rects);
    let rects = (0..k)
        .map(|_| {
            let (x0, x1) = (rng.gen_range(0.0..domain.0), rng.gen_range(0.0..domain.0));
            let (y0, y1) = (rng.gen_range(0.0..domain.1), rng.gen_range(0.0..domain.1));
            Rect::new(x0.min(x1), x0.max(x1), y0.min(y1), y0.max(y1))
        })
        .collect();
    RectSet::normalize(domain, rects).unwrap()
}

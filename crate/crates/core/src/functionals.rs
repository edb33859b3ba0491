//! The eigenfunction-mass infimum
//!
//! ```text
//! g(a) = inf { ∫ a |φ|² dρ : φ a normalized eigenfunction }
//! ```
//!
//! evaluated at a finite spectral cutoff, its composite lower bound on a
//! product `M1 × M2`, the universal sine bound for sine-type bases, and a
//! high-frequency window standing in for the infimum over quantum limits.
//!
//! On each eigenspace the infimum is the smallest eigenvalue of the Gram
//! matrix of the weighted `L²` form, so eigenspaces of any multiplicity are
//! minimized jointly.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model_spectra::{BasisFunction, ModelOperator1D};
use crate::numerics::{canonical_sign, sym_eigen_min, SymMatrix, DEFAULT_EIGEN_TOL};
use crate::product_spectrum::ProductSpectrum;
use crate::sets::{IntervalSet, RectSet};

/// A later eigenspace only replaces the current minimizer when it is lower
/// by more than this, so near-ties resolve to the smallest index.
pub const TIE_TOL: f64 = 1e-14;

/// Default lower edge of the high-frequency window, as a fraction of the cutoff.
pub const DEFAULT_WINDOW_FRACTION: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionalKind {
    GDirect,
    GCompositeBound,
    GPrimeLiminf,
    Theta,
}

/// A computed infimum and the eigenfunction attaining it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionalValue {
    pub value: f64,
    /// Spectral index (1D) or product class id of the minimizing eigenspace.
    pub witness_index: usize,
    pub witness_eigenvalue: f64,
    /// Unit coefficients over the eigenspace basis.
    pub witness_coeffs: Vec<f64>,
    /// Product eigenspaces only: the `(i, j)` pairs spanning the eigenspace,
    /// in the order the coefficients use.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witness_pairs: Vec<(usize, usize)>,
    pub cutoff: f64,
    pub kind: FunctionalKind,
}

/// A nonnegative weight, constant on the cells between breakpoints.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseWeight {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl PiecewiseWeight {
    /// `breakpoints` must increase strictly from `0` to the domain length and
    /// carry one value in `[0, 1]` per cell.
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.len() < 2 || values.len() + 1 != breakpoints.len() {
            return Err(Error::InvalidArgument(format!(
                "{} breakpoints need {} values, got {}",
                breakpoints.len(),
                breakpoints.len().saturating_sub(1),
                values.len()
            )));
        }
        if breakpoints[0] != 0.0 || breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidArgument("breakpoints must increase strictly from 0".into()));
        }
        if let Some(v) = values.iter().find(|v| !(0.0..=1.0 + 1e-12).contains(*v)) {
            return Err(Error::InvalidArgument(format!("weight value {v} outside [0, 1]")));
        }
        Ok(PiecewiseWeight { breakpoints, values })
    }

    pub fn constant(length: f64, value: f64) -> Result<Self> {
        Self::new(vec![0.0, length], vec![value])
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn domain_length(&self) -> f64 {
        *self.breakpoints.last().unwrap()
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Weight1D {
    Indicator(IntervalSet),
    Piecewise(PiecewiseWeight),
}

impl Weight1D {
    fn domain_length(&self) -> f64 {
        match self {
            Weight1D::Indicator(s) => s.domain_length(),
            Weight1D::Piecewise(w) => w.domain_length(),
        }
    }

    /// `(a, b, w)` triples with the weight equal to `w` on `(a, b)`.
    fn cells(&self) -> Vec<(f64, f64, f64)> {
        match self {
            Weight1D::Indicator(s) => s.intervals().iter().map(|&(a, b)| (a, b, 1.0)).collect(),
            Weight1D::Piecewise(w) => {
                w.breakpoints.windows(2).zip(&w.values).map(|(b, &v)| (b[0], b[1], v)).collect()
            }
        }
    }
}

impl From<IntervalSet> for Weight1D {
    fn from(s: IntervalSet) -> Self {
        Weight1D::Indicator(s)
    }
}

impl From<PiecewiseWeight> for Weight1D {
    fn from(w: PiecewiseWeight) -> Self {
        Weight1D::Piecewise(w)
    }
}

fn same_length(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

fn check_domain_1d(op: &ModelOperator1D, weight: &Weight1D) -> Result<()> {
    if same_length(op.length, weight.domain_length()) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "weight lives on [0, {}], operator on [0, {}]",
            weight.domain_length(),
            op.length
        )))
    }
}

fn check_domain_2d(op1: &ModelOperator1D, op2: &ModelOperator1D, omega: &RectSet) -> Result<()> {
    let (l1, l2) = omega.domain();
    if same_length(op1.length, l1) && same_length(op2.length, l2) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "set lives on [0, {l1}] x [0, {l2}], operators on [0, {}] x [0, {}]",
            op1.length, op2.length
        )))
    }
}

/// Running minimum with the tie rule of [`TIE_TOL`].
struct Minimizer {
    best: Option<(f64, usize, f64, Vec<f64>)>,
}

impl Minimizer {
    fn new() -> Self {
        Minimizer { best: None }
    }

    fn offer(&mut self, value: f64, index: usize, eigenvalue: f64, coeffs: Vec<f64>) {
        let better = match &self.best {
            None => true,
            Some((v, ..)) => value < v - TIE_TOL,
        };
        if better {
            self.best = Some((value, index, eigenvalue, coeffs));
        }
    }
}

fn scan_1d(
    op: &ModelOperator1D,
    weight: &Weight1D,
    lower: f64,
    cutoff: f64,
    kind: FunctionalKind,
) -> Result<FunctionalValue> {
    check_domain_1d(op, weight)?;
    let cells = weight.cells();
    let mut min = Minimizer::new();
    for index in 1..=op.count_up_to(cutoff) {
        let ev = op.eigenvalue(index);
        if ev < lower {
            continue;
        }
        let (v, x) = op.eigenspace_min(index, &cells)?;
        min.offer(v, index, ev, x);
    }
    let (value, witness_index, witness_eigenvalue, witness_coeffs) =
        min.best.ok_or(Error::EmptySpectrum(cutoff))?;
    Ok(FunctionalValue {
        value,
        witness_index,
        witness_eigenvalue,
        witness_coeffs,
        witness_pairs: Vec::new(),
        cutoff,
        kind,
    })
}

/// `g` of a 1D weight over all eigenvalues `<= cutoff`.
pub fn g_1d(op: &ModelOperator1D, weight: &Weight1D, cutoff: f64) -> Result<FunctionalValue> {
    scan_1d(op, weight, f64::NEG_INFINITY, cutoff, FunctionalKind::GDirect)
}

/// `½ (π f − sin(π f))`: lower bound on `∫_ω sin²(jx) dx` over `j ≥ 1` for
/// `ω ⊂ [0, π]` of normalized measure `f = |ω| / π`. Inputs are clamped to
/// `[0, 1]`.
pub fn sine_lower_bound(fraction: f64) -> f64 {
    let f = fraction.clamp(0.0, 1.0);
    0.5 * (PI * f - (PI * f).sin())
}

/// The same bound expressed as a normalized mass: `f − sin(π f) / π`.
pub fn sine_mass_bound(fraction: f64) -> f64 {
    let f = fraction.clamp(0.0, 1.0);
    f - (PI * f).sin() / PI
}

/// The weight `x1 ↦ g_{M2}(ω_{x1})`, piecewise constant on the breakpoint
/// cells of `ω`.
pub fn composite_weight(op2: &ModelOperator1D, omega: &RectSet, cutoff: f64) -> Result<PiecewiseWeight> {
    let cells = omega.trace_cells();
    let values = cells
        .iter()
        .map(|c| g_1d(op2, &Weight1D::Indicator(c.trace.clone()), cutoff).map(|g| g.value.max(0.0)))
        .collect::<Result<Vec<_>>>()?;
    let mut bps: Vec<f64> = cells.iter().map(|c| c.x0).collect();
    bps.push(cells.last().map_or(omega.domain().0, |c| c.x1));
    PiecewiseWeight::new(bps, values)
}

/// `g_{M1}(x1 ↦ g_{M2}(ω_{x1}))`, a lower bound for `g_M(ω)` when the
/// product spectrum has minimal multiplicity.
pub fn g_composite_bound(
    op1: &ModelOperator1D,
    op2: &ModelOperator1D,
    omega: &RectSet,
    cutoff: f64,
) -> Result<FunctionalValue> {
    check_domain_2d(op1, op2, omega)?;
    let weight = composite_weight(op2, omega, cutoff)?;
    let mut v = g_1d(op1, &Weight1D::Piecewise(weight), cutoff)?;
    v.kind = FunctionalKind::GCompositeBound;
    Ok(v)
}

/// Basis of a product eigenspace: every tensor product of the factor
/// eigenspace bases of every member pair, member by member.
pub fn product_basis(
    op1: &ModelOperator1D,
    op2: &ModelOperator1D,
    members: &[(usize, usize)],
) -> Vec<(BasisFunction, BasisFunction)> {
    let mut out = Vec::new();
    for &(i, j) in members {
        for f in op1.eigenspace_basis(i) {
            for g in op2.eigenspace_basis(j) {
                out.push((f, g));
            }
        }
    }
    out
}

/// Gram matrix of `φ ↦ ∫_ω |φ|² dρ` on the product eigenspace spanned by
/// `members`.
pub fn product_gram(
    op1: &ModelOperator1D,
    op2: &ModelOperator1D,
    members: &[(usize, usize)],
    omega: &RectSet,
) -> SymMatrix {
    let basis = product_basis(op1, op2, members);
    SymMatrix::from_fn(basis.len(), |p, q| {
        let ((f, g), (f2, g2)) = (&basis[p], &basis[q]);
        omega
            .rects()
            .iter()
            .map(|r| op1.basis_pair_integral(f, f2, r.x0, r.x1) * op2.basis_pair_integral(g, g2, r.y0, r.y1))
            .sum()
    })
}

/// Mass on `ω` of the product eigenfunction with the given coefficients.
pub fn product_eigenfunction_mass(
    op1: &ModelOperator1D,
    op2: &ModelOperator1D,
    members: &[(usize, usize)],
    coeffs: &[f64],
    omega: &RectSet,
) -> Result<f64> {
    let g = product_gram(op1, op2, members, omega);
    if coeffs.len() != g.order() {
        return Err(Error::DimensionMismatch { expected: g.order(), got: coeffs.len() });
    }
    Ok(g.quadratic_form(coeffs))
}

fn class_min(
    op1: &ModelOperator1D,
    op2: &ModelOperator1D,
    members: &[(usize, usize)],
    omega: &RectSet,
) -> Result<(f64, Vec<f64>)> {
    let (v, mut x) = sym_eigen_min(&product_gram(op1, op2, members, omega), DEFAULT_EIGEN_TOL)?;
    canonical_sign(&mut x);
    Ok((v, x))
}

fn scan_product(
    ps: &ProductSpectrum,
    op1: &ModelOperator1D,
    op2: &ModelOperator1D,
    omega: &RectSet,
    lower: f64,
    cutoff: f64,
    kind: FunctionalKind,
) -> Result<FunctionalValue> {
    check_domain_2d(op1, op2, omega)?;
    if ps.cutoff < cutoff {
        return Err(Error::InsufficientCoverage {
            cutoff,
            detail: format!("product spectrum built up to {}", ps.cutoff),
        });
    }
    let classes: Vec<_> =
        ps.classes.iter().filter(|c| c.eigenvalue <= cutoff && c.eigenvalue >= lower).collect();

    #[cfg(feature = "parallel")]
    let mins: Vec<Result<(f64, Vec<f64>)>> = {
        use rayon::prelude::*;
        classes.par_iter().map(|c| class_min(op1, op2, &c.members, omega)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let mins: Vec<Result<(f64, Vec<f64>)>> =
        classes.iter().map(|c| class_min(op1, op2, &c.members, omega)).collect();

    let mut min = Minimizer::new();
    for (c, r) in classes.iter().zip(mins) {
        let (v, x) = r?;
        min.offer(v, c.id, c.eigenvalue, x);
    }
    let (value, witness_index, witness_eigenvalue, witness_coeffs) =
        min.best.ok_or(Error::EmptySpectrum(cutoff))?;
    Ok(FunctionalValue {
        value,
        witness_index,
        witness_eigenvalue,
        witness_coeffs,
        witness_pairs: ps.classes[witness_index].members.clone(),
        cutoff,
        kind,
    })
}

/// `g_M(ω)` on the product, minimizing jointly over each full eigenspace
/// (all colliding pairs together).
pub fn g_product_direct(
    ps: &ProductSpectrum,
    op1: &ModelOperator1D,
    op2: &ModelOperator1D,
    omega: &RectSet,
    cutoff: f64,
) -> Result<FunctionalValue> {
    scan_product(ps, op1, op2, omega, f64::NEG_INFINITY, cutoff, FunctionalKind::GDirect)
}

fn check_window(window_fraction: f64) -> Result<()> {
    if window_fraction > 0.0 && window_fraction < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("window fraction must lie in (0, 1), got {window_fraction}")))
    }
}

/// Eigenspace-minimal mass restricted to eigenvalues in
/// `[window_fraction * cutoff, cutoff]`: a finite-cutoff stand-in for the
/// infimum over quantum limits.
pub fn ql_liminf_1d(
    op: &ModelOperator1D,
    weight: &Weight1D,
    cutoff: f64,
    window_fraction: f64,
) -> Result<FunctionalValue> {
    check_window(window_fraction)?;
    scan_1d(op, weight, window_fraction * cutoff, cutoff, FunctionalKind::GPrimeLiminf)
}

/// Product version of [`ql_liminf_1d`].
pub fn ql_liminf_product(
    ps: &ProductSpectrum,
    op1: &ModelOperator1D,
    op2: &ModelOperator1D,
    omega: &RectSet,
    cutoff: f64,
    window_fraction: f64,
) -> Result<FunctionalValue> {
    check_window(window_fraction)?;
    scan_product(ps, op1, op2, omega, window_fraction * cutoff, cutoff, FunctionalKind::GPrimeLiminf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model_spectra::OperatorKind;
    use crate::numerics::Rational;
    use crate::product_spectrum::{build_product, ArithmeticMode};
    use crate::sets::Rect;

    fn ind(l: f64, iv: &[(f64, f64)]) -> Weight1D {
        Weight1D::Indicator(IntervalSet::new(l, iv.to_vec()).unwrap())
    }

    #[test]
    fn half_interval_is_exactly_half() {
        let op = ModelOperator1D::dirichlet_pi();
        let g = g_1d(&op, &ind(PI, &[(0.0, PI / 2.0)]), 1e4).unwrap();
        assert!((g.value - 0.5).abs() < 1e-15);
        assert_eq!(g.witness_index, 1);
    }

    #[test]
    fn quarter_interval_minimized_by_first_mode() {
        let op = ModelOperator1D::dirichlet_pi();
        let g = g_1d(&op, &ind(PI, &[(0.0, PI / 4.0)]), 1e4).unwrap();
        assert!((g.value - (0.25 - 1.0 / (2.0 * PI))).abs() < 1e-15);
        assert_eq!(g.witness_index, 1);
        // brute force over the closed form 1/4 - sin(j pi / 2) / (2 pi j)
        let brute = (1..=100)
            .map(|j: i32| 0.25 - (j as f64 * PI / 2.0).sin() / (2.0 * PI * j as f64))
            .fold(f64::INFINITY, f64::min);
        assert!((g.value - brute).abs() < 1e-15);
    }

    #[test]
    fn full_interval_gives_one() {
        for op in [
            ModelOperator1D::dirichlet_pi(),
            ModelOperator1D::neumann(2.0).unwrap(),
            ModelOperator1D::circle(3.0).unwrap(),
        ] {
            let g = g_1d(&op, &ind(op.length, &[(0.0, op.length)]), 500.0).unwrap();
            assert!((g.value - 1.0).abs() < 1e-13, "{op:?}");
        }
    }

    #[test]
    fn g_1d_errors() {
        let op = ModelOperator1D::dirichlet_pi();
        assert!(matches!(g_1d(&op, &ind(PI, &[(0.0, 1.0)]), 0.5), Err(Error::EmptySpectrum(_))));
        assert!(g_1d(&op, &ind(2.0, &[(0.0, 1.0)]), 10.0).is_err());
    }

    #[test]
    fn circle_form_is_rotation_invariant_on_half() {
        // every eigenfunction of the circle puts half its mass on a half circle
        let c = ModelOperator1D::circle(2.0 * PI).unwrap();
        let g = g_1d(&c, &ind(2.0 * PI, &[(0.3, 0.3 + PI)]), 400.0).unwrap();
        assert!((g.value - 0.5).abs() < 1e-13);
    }

    #[test]
    fn sine_bound_values() {
        assert!((sine_lower_bound(1.0) - PI / 2.0).abs() < 1e-14);
        assert_eq!(sine_lower_bound(0.0), 0.0);
        assert!((sine_lower_bound(0.5) - 0.5 * (PI / 2.0 - 1.0)).abs() < 1e-15);
        assert!((sine_lower_bound(0.5) - 0.2853981633974483).abs() < 1e-15);
        assert!((sine_mass_bound(0.5) - (0.5 - 1.0 / PI)).abs() < 1e-15);
        // the bound sits below the true minimum over j of a length-pi/2 interval
        let op = ModelOperator1D::dirichlet_pi();
        for start in [0.0, 0.4, PI / 4.0, PI / 2.0] {
            let g = g_1d(&op, &ind(PI, &[(start, start + PI / 2.0)]), 500.0 * 500.0).unwrap();
            assert!(g.value >= sine_mass_bound(0.5) - 1e-12);
        }
    }

    #[test]
    fn composite_factorizes_on_products() {
        let op1 = ModelOperator1D::dirichlet_pi();
        let op2 = ModelOperator1D::dirichlet(PI / 2f64.sqrt()).unwrap();
        let b1 = IntervalSet::new(PI, vec![(0.3, 1.4)]).unwrap();
        let b2 = IntervalSet::new(op2.length, vec![(0.1, 0.9), (1.2, 2.0)]).unwrap();
        let w = RectSet::product(&b1, &b2).unwrap();
        let c = g_composite_bound(&op1, &op2, &w, 500.0).unwrap();
        let g1 = g_1d(&op1, &b1.into(), 500.0).unwrap().value;
        let g2 = g_1d(&op2, &b2.into(), 500.0).unwrap().value;
        assert!((c.value - g1 * g2).abs() < 1e-12);
    }

    #[test]
    fn full_product_gives_one() {
        let op = ModelOperator1D::dirichlet_pi();
        let s = op.spectrum_covering(200.0);
        let ps = build_product(&s, &s, 200.0, ArithmeticMode::ExactRational).unwrap();
        let full = RectSet::full((PI, PI)).unwrap();
        assert!((g_product_direct(&ps, &op, &op, &full, 200.0).unwrap().value - 1.0).abs() < 1e-12);
        assert!((g_composite_bound(&op, &op, &full, 200.0).unwrap().value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fifty_class_on_half_square_is_diagonal() {
        let op = ModelOperator1D::dirichlet_pi();
        let half = RectSet::new((PI, PI), vec![Rect::new(0.0, PI / 2.0, 0.0, PI)]).unwrap();
        let g = product_gram(&op, &op, &[(1, 7), (5, 5), (7, 1)], &half);
        for p in 0..3 {
            for q in 0..3 {
                let want = if p == q { 0.5 } else { 0.0 };
                assert!((g.get(p, q) - want).abs() < 1e-15);
            }
        }
        let s = op.spectrum_covering(60.0);
        let ps = build_product(&s, &s, 60.0, ArithmeticMode::ExactRational).unwrap();
        let v = g_product_direct(&ps, &op, &op, &half, 60.0).unwrap();
        assert!((v.value - 0.5).abs() < 1e-14);
    }

    #[test]
    fn window_proxy_on_quarter() {
        let op = ModelOperator1D::dirichlet_pi();
        let w = ind(PI, &[(0.0, PI / 4.0)]);
        let q = ql_liminf_1d(&op, &w, 1e4, 0.5).unwrap();
        assert_eq!(q.kind, FunctionalKind::GPrimeLiminf);
        assert!(q.witness_index >= 71);
        assert!((q.value - 0.25).abs() <= 1.0 / (2.0 * PI * 71.0));
        assert!(q.value >= g_1d(&op, &w, 1e4).unwrap().value);
        let h = ql_liminf_1d(&op, &ind(PI, &[(0.0, PI / 2.0)]), 1e4, 0.5).unwrap();
        assert!((h.value - 0.5).abs() < 1e-14);
        assert!(ql_liminf_1d(&op, &w, 1e4, 1.0).is_err());
        assert!(ql_liminf_1d(&op, &w, 1e4, 0.0).is_err());
        // whole spectrum inside the window
        let all = ql_liminf_1d(&op, &w, 1.5, 0.5).unwrap();
        assert_eq!(all.value, g_1d(&op, &w, 1.5).unwrap().value);
    }

    #[test]
    fn piecewise_weight_validation() {
        assert!(PiecewiseWeight::new(vec![0.0, 1.0], vec![0.5, 0.5]).is_err());
        assert!(PiecewiseWeight::new(vec![0.0, 1.0, 1.0], vec![0.5, 0.5]).is_err());
        assert!(PiecewiseWeight::new(vec![0.1, 1.0], vec![0.5]).is_err());
        assert!(PiecewiseWeight::new(vec![0.0, 1.0], vec![1.5]).is_err());
        let c = PiecewiseWeight::constant(PI, 0.7).unwrap();
        let op = ModelOperator1D::with_pi_ratio(OperatorKind::NeumannInterval, Rational::ONE).unwrap();
        assert!((g_1d(&op, &c.into(), 100.0).unwrap().value - 0.7).abs() < 1e-14);
    }
}

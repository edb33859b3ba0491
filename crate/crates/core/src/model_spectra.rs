//! Closed-form spectra and eigenfunction mass integrals of the 1D model
//! operators used as product factors.
//!
//! Every operator acts on `L^2` of its domain with the uniform probability
//! measure `dx / L`. Eigenfunctions are never sampled: a basis function is a
//! trigonometric kind, an integer mode number and an amplitude, and every
//! integral of a product of two of them over an interval is evaluated from
//! the exact antiderivative.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{canonical_sign, sym_eigen_min, Rational, SymMatrix, DEFAULT_EIGEN_TOL};
use crate::sets::IntervalSet;

/// Tolerance on the Euclidean norm of coefficient vectors.
pub const UNIT_NORM_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    /// `-d^2/dx^2` on `[0, L]` with Dirichlet conditions; sine basis.
    DirichletInterval,
    /// `-d^2/dx^2` on `[0, L]` with Neumann conditions; cosine basis,
    /// index 1 is the constant mode.
    NeumannInterval,
    /// `-d^2/dx^2` on the circle of circumference `L`; index 1 is the
    /// constant mode, every higher eigenvalue carries a cos/sin pair.
    Circle,
}

/// A self-adjoint model operator with closed-form spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelOperator1D {
    pub kind: OperatorKind,
    pub length: f64,
    /// `length / pi` when it is rational; enables exact eigenvalues.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi_ratio: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    /// 1-based index among the distinct eigenvalues.
    pub index: usize,
    pub eigenvalue: f64,
    pub multiplicity: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<Rational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trig {
    Sin,
    Cos,
}

/// `amplitude * trig(mode * base * x)` where `base` is the operator's
/// frequency unit (`pi / L` on intervals, `2 pi / L` on the circle).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisFunction {
    pub trig: Trig,
    pub mode: u64,
    pub amplitude: f64,
}

impl BasisFunction {
    pub fn eval(&self, base: f64, x: f64) -> f64 {
        let arg = self.mode as f64 * base * x;
        self.amplitude
            * match self.trig {
                Trig::Sin => arg.sin(),
                Trig::Cos => arg.cos(),
            }
    }
}

/// `sin(t) / t`, with a Taylor branch near 0.
#[inline]
fn sinc(t: f64) -> f64 {
    if t.abs() < 1e-4 {
        let t2 = t * t;
        1.0 - t2 / 6.0 + t2 * t2 / 120.0
    } else {
        t.sin() / t
    }
}

/// `∫_a^b cos(w x) dx`, written as `(b-a) cos(w m) sinc(w h)` with `m` the
/// midpoint and `h` the half-width so that no difference of nearly equal
/// sines is ever formed.
#[inline]
fn int_cos(w: f64, a: f64, b: f64) -> f64 {
    let (m, h) = (0.5 * (a + b), 0.5 * (b - a));
    (b - a) * (w * m).cos() * sinc(w * h)
}

/// `∫_a^b sin(w x) dx`, same stable form.
#[inline]
fn int_sin(w: f64, a: f64, b: f64) -> f64 {
    let (m, h) = (0.5 * (a + b), 0.5 * (b - a));
    (b - a) * (w * m).sin() * sinc(w * h)
}

impl ModelOperator1D {
    fn checked(kind: OperatorKind, length: f64, pi_ratio: Option<Rational>) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidArgument(format!("length must be positive, got {length}")));
        }
        Ok(ModelOperator1D { kind, length, pi_ratio })
    }

    pub fn new(kind: OperatorKind, length: f64) -> Result<Self> {
        Self::checked(kind, length, None)
    }

    /// Operator on a domain of length `ratio * pi`, with exact eigenvalues.
    pub fn with_pi_ratio(kind: OperatorKind, ratio: Rational) -> Result<Self> {
        if !ratio.is_positive() {
            return Err(Error::InvalidArgument(format!("length ratio must be positive, got {ratio}")));
        }
        Self::checked(kind, PI * ratio.to_f64(), Some(ratio))
    }

    pub fn dirichlet(length: f64) -> Result<Self> {
        Self::new(OperatorKind::DirichletInterval, length)
    }

    pub fn neumann(length: f64) -> Result<Self> {
        Self::new(OperatorKind::NeumannInterval, length)
    }

    pub fn circle(circumference: f64) -> Result<Self> {
        Self::new(OperatorKind::Circle, circumference)
    }

    /// Dirichlet Laplacian on `[0, pi]`.
    pub fn dirichlet_pi() -> Self {
        Self::with_pi_ratio(OperatorKind::DirichletInterval, Rational::ONE).unwrap()
    }

    /// Frequency unit of the basis: `pi / L` on intervals, `2 pi / L` on the
    /// circle.
    pub fn frequency_base(&self) -> f64 {
        match self.kind {
            OperatorKind::Circle => 2.0 * PI / self.length,
            _ => PI / self.length,
        }
    }

    /// Mode number of the eigenfunctions with spectral index `index` (1-based).
    pub fn mode_of(&self, index: usize) -> u64 {
        match self.kind {
            OperatorKind::DirichletInterval => index as u64,
            _ => index as u64 - 1,
        }
    }

    pub fn eigenvalue(&self, index: usize) -> f64 {
        let w = self.mode_of(index) as f64 * self.frequency_base();
        w * w
    }

    /// `mode^2 / ratio^2` (intervals) or `4 mode^2 / ratio^2` (circle) when
    /// the length is a rational multiple of pi.
    pub fn exact_eigenvalue(&self, index: usize) -> Option<Rational> {
        let r = self.pi_ratio?;
        let n = self.mode_of(index) as i64;
        let k = if self.kind == OperatorKind::Circle { 2 * n } else { n };
        let k2 = Rational::from_int(k.checked_mul(k)?);
        k2.checked_div(&r.checked_mul(&r).ok()?).ok()
    }

    pub fn multiplicity(&self, index: usize) -> usize {
        match self.kind {
            OperatorKind::Circle if index >= 2 => 2,
            _ => 1,
        }
    }

    pub fn entry(&self, index: usize) -> SpectrumEntry {
        SpectrumEntry {
            index,
            eigenvalue: self.eigenvalue(index),
            multiplicity: self.multiplicity(index),
            exact: self.exact_eigenvalue(index),
        }
    }

    /// The first `count` distinct eigenvalues.
    pub fn spectrum(&self, count: usize) -> Result<Vec<SpectrumEntry>> {
        if count == 0 {
            return Err(Error::InvalidArgument("count must be at least 1".into()));
        }
        Ok((1..=count).map(|i| self.entry(i)).collect())
    }

    /// Number of distinct eigenvalues `<= cutoff`.
    pub fn count_up_to(&self, cutoff: f64) -> usize {
        if cutoff < 0.0 {
            return 0;
        }
        let modes = (cutoff.sqrt() / self.frequency_base()).floor() as usize;
        // index = mode (Dirichlet) or mode + 1; correct for rounding at the edge.
        let mut n = match self.kind {
            OperatorKind::DirichletInterval => modes,
            _ => modes + 1,
        };
        while n > 0 && self.eigenvalue(n) > cutoff {
            n -= 1;
        }
        while self.eigenvalue(n + 1) <= cutoff {
            n += 1;
        }
        n
    }

    /// Every eigenvalue `<= cutoff` followed by the first one above it, so
    /// the result covers the cutoff for product constructions.
    pub fn spectrum_covering(&self, cutoff: f64) -> Vec<SpectrumEntry> {
        (1..=self.count_up_to(cutoff) + 1).map(|i| self.entry(i)).collect()
    }

    /// Orthonormal real basis of the eigenspace of spectral index `index`.
    /// On the circle the order is `cos` then `sin`.
    pub fn eigenspace_basis(&self, index: usize) -> Vec<BasisFunction> {
        let mode = self.mode_of(index);
        let s2 = std::f64::consts::SQRT_2;
        match (self.kind, mode) {
            (OperatorKind::DirichletInterval, _) => {
                vec![BasisFunction { trig: Trig::Sin, mode, amplitude: s2 }]
            }
            (_, 0) => vec![BasisFunction { trig: Trig::Cos, mode: 0, amplitude: 1.0 }],
            (OperatorKind::NeumannInterval, _) => {
                vec![BasisFunction { trig: Trig::Cos, mode, amplitude: s2 }]
            }
            (OperatorKind::Circle, _) => vec![
                BasisFunction { trig: Trig::Cos, mode, amplitude: s2 },
                BasisFunction { trig: Trig::Sin, mode, amplitude: s2 },
            ],
        }
    }

    /// Flat enumeration of the whole basis, 1-based: eigenspace bases
    /// concatenated in spectral order.
    pub fn basis_function(&self, flat: usize) -> Result<BasisFunction> {
        if flat == 0 {
            return Err(Error::InvalidArgument("basis indices start at 1".into()));
        }
        Ok(match self.kind {
            OperatorKind::Circle if flat >= 2 => {
                let index = flat / 2 + 1;
                self.eigenspace_basis(index)[flat % 2]
            }
            _ => self.eigenspace_basis(flat)[0],
        })
    }

    fn check_bounds(&self, a: f64, b: f64) -> Result<()> {
        let ok = a.is_finite() && b.is_finite() && 0.0 <= a && a <= b && b <= self.length;
        if ok {
            Ok(())
        } else {
            Err(Error::BadBounds { a, b, length: self.length })
        }
    }

    /// `∫_a^b f g dρ` without bounds checking.
    pub fn basis_pair_integral(&self, f: &BasisFunction, g: &BasisFunction, a: f64, b: f64) -> f64 {
        let base = self.frequency_base();
        let (m, n) = (f.mode as i64, g.mode as i64);
        let w = |k: i64| k as f64 * base;
        let raw = match (f.trig, g.trig) {
            (Trig::Cos, Trig::Cos) => 0.5 * (int_cos(w(m - n), a, b) + int_cos(w(m + n), a, b)),
            (Trig::Sin, Trig::Sin) => 0.5 * (int_cos(w(m - n), a, b) - int_cos(w(m + n), a, b)),
            (Trig::Sin, Trig::Cos) => 0.5 * (int_sin(w(m + n), a, b) + int_sin(w(m - n), a, b)),
            (Trig::Cos, Trig::Sin) => 0.5 * (int_sin(w(m + n), a, b) + int_sin(w(n - m), a, b)),
        };
        f.amplitude * g.amplitude * raw / self.length
    }

    /// `∫_a^b φ_j φ_j2 dρ` for two functions of the flat basis enumeration
    /// (see [`basis_function`](Self::basis_function)).
    pub fn pair_integral(&self, j: usize, j2: usize, a: f64, b: f64) -> Result<f64> {
        self.check_bounds(a, b)?;
        let (f, g) = (self.basis_function(j)?, self.basis_function(j2)?);
        Ok(self.basis_pair_integral(&f, &g, a, b))
    }

    /// Gram matrix of the eigenspace basis for the weight `Σ w_k 1_{(a_k, b_k)}`.
    pub fn eigenspace_gram(&self, index: usize, cells: &[(f64, f64, f64)]) -> SymMatrix {
        let basis = self.eigenspace_basis(index);
        SymMatrix::from_fn(basis.len(), |p, q| {
            cells
                .iter()
                .filter(|c| c.2 != 0.0)
                .map(|&(a, b, w)| w * self.basis_pair_integral(&basis[p], &basis[q], a, b))
                .sum()
        })
    }

    /// `∫_ω |φ|^2 dρ` for `φ = Σ coeffs[k] e_k` over the eigenspace basis.
    pub fn eigenfunction_mass(&self, index: usize, coeffs: &[f64], omega: &IntervalSet) -> Result<f64> {
        if index == 0 {
            return Err(Error::InvalidArgument("spectral indices start at 1".into()));
        }
        let dim = self.multiplicity(index);
        if coeffs.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: coeffs.len() });
        }
        let norm = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > UNIT_NORM_TOL {
            return Err(Error::NonUnitCoefficients { norm });
        }
        if (omega.domain_length() - self.length).abs() > 1e-12 * self.length {
            return Err(Error::InvalidArgument(format!(
                "set lives on [0, {}], operator on [0, {}]",
                omega.domain_length(),
                self.length
            )));
        }
        let cells: Vec<_> = omega.intervals().iter().map(|&(a, b)| (a, b, 1.0)).collect();
        Ok(self.eigenspace_gram(index, &cells).quadratic_form(coeffs))
    }

    /// Smallest mass over the unit sphere of an eigenspace, with the
    /// minimizing coefficient vector.
    pub fn eigenspace_min(&self, index: usize, cells: &[(f64, f64, f64)]) -> Result<(f64, Vec<f64>)> {
        let g = self.eigenspace_gram(index, cells);
        let (v, mut x) = sym_eigen_min(&g, DEFAULT_EIGEN_TOL)?;
        canonical_sign(&mut x);
        Ok((v, x))
    }
}

//! Spectrum of `Δ1 ⊗ id + id ⊗ Δ2`: eigenvalues `λ1_i + λ2_j`, their
//! multiplicities, the minimal multiplicity check and the parameters of a
//! dilated second factor at which collisions appear.
//!
//! Minimal multiplicity is an infinite condition; everything here is decided
//! up to a cutoff and every verdict carries that cutoff.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model_spectra::SpectrumEntry;
use crate::numerics::{class_collisions, exact_sum_classes, Collision, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ArithmeticMode {
    /// Integer cross-multiplication on the exact eigenvalues.
    ExactRational,
    /// Sums within `tolerance` of each other are one eigenvalue.
    Floating { tolerance: f64 },
}

impl ArithmeticMode {
    /// Floating mode with the default absolute tolerance `1e-9 * cutoff`.
    pub fn floating_for(cutoff: f64) -> Self {
        ArithmeticMode::Floating { tolerance: 1e-9 * cutoff.max(1.0) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductEntry {
    pub i: usize,
    pub j: usize,
    pub eigenvalue: f64,
    /// `m1_i * m2_j`.
    pub own_multiplicity: usize,
    /// Dimension of the whole eigenspace of `eigenvalue`.
    pub total_multiplicity: usize,
    pub collision_partners: Vec<(usize, usize)>,
    pub class_id: usize,
}

/// All index pairs sharing one product eigenvalue.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductClass {
    pub id: usize,
    pub eigenvalue: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<Rational>,
    pub members: Vec<(usize, usize)>,
    pub total_multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductSpectrum {
    /// Sorted by eigenvalue, then `(i, j)`.
    pub entries: Vec<ProductEntry>,
    /// Sorted by eigenvalue; `classes[k].id == k`.
    pub classes: Vec<ProductClass>,
    pub cutoff: f64,
    pub mm_holds: bool,
    pub mode: ArithmeticMode,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictScope {
    /// Exact arithmetic, eigenvalues up to the cutoff only.
    ExactUpToCutoff,
    /// Floating-point clustering up to the cutoff; not a proof.
    NumericalUpToCutoff,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MmVerdict {
    pub holds: bool,
    pub scope: VerdictScope,
    pub cutoff: f64,
    /// Every colliding quadruple.
    pub witnesses: Vec<Collision>,
    /// The collision classes themselves.
    pub classes: Vec<ProductClass>,
}

fn validate_sequence(spec: &[SpectrumEntry], name: &str) -> Result<()> {
    if spec.is_empty() {
        return Err(Error::InvalidArgument(format!("{name} is empty")));
    }
    if spec.windows(2).any(|w| w[0].eigenvalue >= w[1].eigenvalue) {
        return Err(Error::InvalidArgument(format!("{name} is not strictly increasing")));
    }
    Ok(())
}

fn check_coverage(spec1: &[SpectrumEntry], spec2: &[SpectrumEntry], cutoff: f64) -> Result<()> {
    let (first1, last1) = (spec1[0].eigenvalue, spec1[spec1.len() - 1].eigenvalue);
    let (first2, last2) = (spec2[0].eigenvalue, spec2[spec2.len() - 1].eigenvalue);
    if last1 + first2 <= cutoff {
        return Err(Error::InsufficientCoverage {
            cutoff,
            detail: format!("first factor stops at {last1}"),
        });
    }
    if last2 + first1 <= cutoff {
        return Err(Error::InsufficientCoverage {
            cutoff,
            detail: format!("second factor stops at {last2}"),
        });
    }
    Ok(())
}

/// Groups `(i, j)` pairs with `λ1_i + λ2_j <= cutoff` into eigenvalue classes.
pub fn build_product(
    spec1: &[SpectrumEntry],
    spec2: &[SpectrumEntry],
    cutoff: f64,
    mode: ArithmeticMode,
) -> Result<ProductSpectrum> {
    validate_sequence(spec1, "first spectrum")?;
    validate_sequence(spec2, "second spectrum")?;
    if !cutoff.is_finite() {
        return Err(Error::InvalidArgument(format!("cutoff must be finite, got {cutoff}")));
    }
    check_coverage(spec1, spec2, cutoff)?;

    // Only entries that can take part in a sum below the cutoff.
    let slack = 1e-9 * cutoff.abs().max(1.0);
    let s1: Vec<&SpectrumEntry> =
        spec1.iter().filter(|e| e.eigenvalue + spec2[0].eigenvalue <= cutoff + slack).collect();
    let s2: Vec<&SpectrumEntry> =
        spec2.iter().filter(|e| e.eigenvalue + spec1[0].eigenvalue <= cutoff + slack).collect();

    let raw_classes: Vec<(f64, Option<Rational>, Vec<(usize, usize)>)> = match mode {
        ArithmeticMode::ExactRational => {
            let exact = |seq: &[&SpectrumEntry]| -> Result<Vec<Rational>> {
                seq.iter().map(|e| e.exact.ok_or(Error::MissingExact { index: e.index })).collect()
            };
            let (x1, x2) = (exact(&s1)?, exact(&s2)?);
            exact_sum_classes(&x1, &x2, None)?
                .into_iter()
                .filter(|c| c.sum.to_f64() <= cutoff)
                .map(|c| {
                    let members = c.members.iter().map(|&(a, b)| (s1[a - 1].index, s2[b - 1].index)).collect();
                    (c.sum.to_f64(), Some(c.sum), members)
                })
                .collect()
        }
        ArithmeticMode::Floating { tolerance } => {
            if !(tolerance > 0.0) {
                return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tolerance}")));
            }
            floating_classes(&s1, &s2, cutoff, tolerance)?
        }
    };

    let own = |i: usize, j: usize| -> usize {
        let m1 = s1.iter().find(|e| e.index == i).map_or(1, |e| e.multiplicity);
        let m2 = s2.iter().find(|e| e.index == j).map_or(1, |e| e.multiplicity);
        m1 * m2
    };

    let mut classes = Vec::with_capacity(raw_classes.len());
    let mut entries = Vec::new();
    for (id, (eigenvalue, exact, members)) in raw_classes.into_iter().enumerate() {
        let total: usize = members.iter().map(|&(i, j)| own(i, j)).sum();
        for &(i, j) in &members {
            entries.push(ProductEntry {
                i,
                j,
                eigenvalue,
                own_multiplicity: own(i, j),
                total_multiplicity: total,
                collision_partners: members.iter().copied().filter(|&p| p != (i, j)).collect(),
                class_id: id,
            });
        }
        classes.push(ProductClass { id, eigenvalue, exact, members, total_multiplicity: total });
    }
    let mm_holds = classes.iter().all(|c| c.members.len() == 1);
    Ok(ProductSpectrum { entries, classes, cutoff, mm_holds, mode })
}

/// Sorted single-linkage clustering at `tol`. A gap in `(tol, 2 tol]`, or a
/// chain spreading wider than `2 tol`, is ambiguous and reported.
fn floating_classes(
    s1: &[&SpectrumEntry],
    s2: &[&SpectrumEntry],
    cutoff: f64,
    tol: f64,
) -> Result<Vec<(f64, Option<Rational>, Vec<(usize, usize)>)>> {
    let mut sums: Vec<(f64, usize, usize)> = Vec::new();
    for a in s1 {
        for b in s2 {
            let s = a.eigenvalue + b.eigenvalue;
            if s <= cutoff + 2.0 * tol {
                sums.push((s, a.index, b.index));
            }
        }
    }
    sums.sort_by(|x, y| x.0.total_cmp(&y.0).then((x.1, x.2).cmp(&(y.1, y.2))));

    let mut out = Vec::new();
    let mut start = 0;
    for k in 1..=sums.len() {
        if k < sums.len() {
            let gap = sums[k].0 - sums[k - 1].0;
            if gap <= tol {
                continue;
            }
            if gap <= 2.0 * tol {
                return Err(Error::AmbiguousCluster { value: sums[k].0, tolerance: tol });
            }
        }
        let chunk = &sums[start..k];
        let (lo, hi) = (chunk[0].0, chunk[chunk.len() - 1].0);
        if hi - lo > 2.0 * tol {
            return Err(Error::AmbiguousCluster { value: lo, tolerance: tol });
        }
        if lo <= cutoff {
            let mut members: Vec<(usize, usize)> = chunk.iter().map(|&(_, i, j)| (i, j)).collect();
            members.sort_unstable();
            out.push((lo, None, members));
        }
        start = k;
    }
    Ok(out)
}

/// Minimal multiplicity verdict up to the spectrum's cutoff.
pub fn check_mm(ps: &ProductSpectrum) -> MmVerdict {
    let classes: Vec<ProductClass> = ps.classes.iter().filter(|c| c.members.len() > 1).cloned().collect();
    let mut witnesses: Vec<Collision> = classes.iter().flat_map(|c| class_collisions(&c.members)).collect();
    witnesses.sort_unstable();
    MmVerdict {
        holds: classes.is_empty(),
        scope: match ps.mode {
            ArithmeticMode::ExactRational => VerdictScope::ExactUpToCutoff,
            ArithmeticMode::Floating { .. } => VerdictScope::NumericalUpToCutoff,
        },
        cutoff: ps.cutoff,
        witnesses,
        classes,
    }
}

/// Multiplies every eigenvalue by `factor` (floating; exact values dropped).
pub fn scale_spectrum(spec: &[SpectrumEntry], factor: f64) -> Vec<SpectrumEntry> {
    spec.iter()
        .map(|e| SpectrumEntry { eigenvalue: e.eigenvalue * factor, exact: None, ..e.clone() })
        .collect()
}

/// Multiplies every eigenvalue by an exact positive rational.
pub fn scale_spectrum_exact(spec: &[SpectrumEntry], factor: Rational) -> Result<Vec<SpectrumEntry>> {
    if !factor.is_positive() {
        return Err(Error::InvalidArgument(format!("scale factor must be positive, got {factor}")));
    }
    spec.iter()
        .map(|e| {
            let exact = match e.exact {
                Some(x) => Some(x.checked_mul(&factor)?),
                None => None,
            };
            Ok(SpectrumEntry { eigenvalue: e.eigenvalue * factor.to_f64(), exact, ..e.clone() })
        })
        .collect()
}

/// Closed form of an exceptional dilatation parameter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", content = "value", rename_all = "snake_case")]
pub enum ExactRoot {
    Rational(Rational),
    /// `sqrt(value)`, with `value` not a perfect square.
    Sqrt(Rational),
}

impl fmt::Display for ExactRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactRoot::Rational(r) => write!(f, "{r}"),
            ExactRoot::Sqrt(r) => write!(f, "sqrt({r})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExceptionalDilatation {
    pub s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<ExactRoot>,
    /// `s^alpha`, the ratio `(λ1_i - λ1_i2) / (λ2_j2 - λ2_j)`.
    pub ratio: Rational,
    /// Lexicographically smallest quadruple producing `ratio`:
    /// `λ1_i + s^alpha λ2_j == λ1_i2 + s^alpha λ2_j2`.
    pub witness: Collision,
}

fn exact_root(ratio: Rational, alpha: Rational) -> Result<Option<ExactRoot>> {
    let (p, q) = (alpha.numer(), alpha.denom());
    if q != 1 {
        return Ok(None);
    }
    let base = if p > 0 { ratio } else { ratio.recip()? };
    Ok(match p.abs() {
        1 => Some(ExactRoot::Rational(base)),
        2 => Some(match base.sqrt_exact() {
            Some(r) => ExactRoot::Rational(r),
            None => ExactRoot::Sqrt(base),
        }),
        _ => None,
    })
}

/// Every `s` in `[s_min, s_max]` at which `λ1_i + s^alpha λ2_j` collides with
/// `λ1_i2 + s^alpha λ2_j2` for some quadruple of eigenvalues all `<= cutoff`.
pub fn exceptional_dilatations(
    spec1: &[SpectrumEntry],
    spec2: &[SpectrumEntry],
    alpha: Rational,
    s_min: f64,
    s_max: f64,
    cutoff: f64,
) -> Result<Vec<ExceptionalDilatation>> {
    if alpha.is_zero() {
        return Err(Error::InvalidArgument("alpha must be nonzero".into()));
    }
    if !(s_min < s_max) || s_max <= 0.0 || !s_min.is_finite() || !s_max.is_finite() {
        return Err(Error::InvalidArgument(format!("bad window [{s_min}, {s_max}]")));
    }
    let values = |spec: &[SpectrumEntry]| -> Result<Vec<(usize, Rational)>> {
        spec.iter()
            .filter(|e| e.eigenvalue <= cutoff)
            .map(|e| e.exact.map(|x| (e.index, x)).ok_or(Error::MissingExact { index: e.index }))
            .collect()
    };
    let (v1, v2) = (values(spec1)?, values(spec2)?);

    // positive differences d1 = λ1_i - λ1_i2 (i, i2) and d2 = λ2_j2 - λ2_j (j, j2)
    let diffs = |v: &[(usize, Rational)]| -> Result<Vec<(Rational, usize, usize)>> {
        let mut out = Vec::new();
        for &(a, x) in v {
            for &(b, y) in v {
                if x > y {
                    out.push((x.checked_sub(&y)?, a, b));
                }
            }
        }
        Ok(out)
    };
    let d1 = diffs(&v1)?;
    let mut d2 = diffs(&v2)?;
    d2.sort_by(|a, b| a.0.cmp(&b.0));

    let af = alpha.to_f64();
    let s_lo = s_min.max(0.0);
    let (mut r_lo, mut r_hi) = (s_lo.powf(af), s_max.powf(af));
    if r_lo > r_hi {
        std::mem::swap(&mut r_lo, &mut r_hi);
    }

    let mut found: BTreeMap<Rational, Collision> = BTreeMap::new();
    for &(x, i, i2) in &d1 {
        // candidate d2 in [x / r_hi, x / r_lo], widened for rounding
        let lo = x.to_f64() / r_hi * (1.0 - 1e-9);
        let hi = if r_lo > 0.0 { x.to_f64() / r_lo * (1.0 + 1e-9) } else { f64::INFINITY };
        let start = d2.partition_point(|d| d.0.to_f64() < lo);
        for &(y, j2, j) in d2[start..].iter().take_while(|d| d.0.to_f64() <= hi) {
            let ratio = x.checked_div(&y)?;
            let w = Collision { i, j, i2, j2 };
            found.entry(ratio).and_modify(|c| *c = (*c).min(w)).or_insert(w);
        }
    }

    let mut out = Vec::new();
    for (ratio, witness) in found {
        let exact = exact_root(ratio, alpha)?;
        let s = match exact {
            Some(ExactRoot::Rational(r)) => r.to_f64(),
            Some(ExactRoot::Sqrt(r)) => r.to_f64().sqrt(),
            None => ratio.to_f64().powf(1.0 / af),
        };
        if s >= s_min && s <= s_max {
            out.push(ExceptionalDilatation { s, exact, ratio, witness });
        }
    }
    out.sort_by(|a, b| a.s.total_cmp(&b.s));
    Ok(out)
}

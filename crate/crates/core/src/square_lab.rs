//! Eigenspaces of the Dirichlet Laplacian on `[0, π]²` and their
//! concentration constants on a fixed set.
//!
//! The eigenvalue `λ` has the eigenspace spanned by `sin(jx) sin(ky)` over
//! all `j² + k² = λ` with `j, k ≥ 1`. The per-eigenspace constant `C_ω(λ)` is
//! the smallest eigenvalue of the Gram matrix of `φ ↦ ∫_ω |φ|²` on that span,
//! normalized by the full-square mass.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::product_gram;
use crate::model_spectra::ModelOperator1D;
use crate::numerics::{canonical_sign, sym_eigen_min, SymMatrix, DEFAULT_EIGEN_TOL};
use crate::sets::{IntervalSet, RectSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareEigenspace {
    pub lambda: u64,
    /// `(j, k)` with `j² + k² = λ`, sorted lexicographically.
    pub pairs: Vec<(u64, u64)>,
}

impl SquareEigenspace {
    pub fn dim(&self) -> usize {
        self.pairs.len()
    }

    fn members(&self) -> Vec<(usize, usize)> {
        self.pairs.iter().map(|&(j, k)| (j as usize, k as usize)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComegaRecord {
    pub lambda: u64,
    pub dim: usize,
    pub c_value: f64,
    /// Unit coefficients over [`SquareEigenspace::pairs`].
    pub witness_coeffs: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComegaScan {
    pub min_c: f64,
    pub argmin_lambda: u64,
    pub lambda_max: u64,
    pub table: Vec<ComegaRecord>,
}

/// All ordered representations `λ = j² + k²` with `j, k ≥ 1`.
pub fn sum_two_squares(lambda: u64) -> SquareEigenspace {
    let mut pairs = Vec::new();
    if lambda >= 2 {
        for j in 1..=(lambda - 1).isqrt() {
            let rest = lambda - j * j;
            let k = rest.isqrt();
            if k >= 1 && k * k == rest {
                pairs.push((j, k));
            }
        }
    }
    SquareEigenspace { lambda, pairs }
}

/// Smallest `λ <= search_limit` with at least `p` unordered representations
/// `{j, k}`.
pub fn min_lambda_with_representations(p: usize, search_limit: u64) -> Result<u64> {
    if p == 0 {
        return Err(Error::InvalidArgument("p must be at least 1".into()));
    }
    if search_limit < 2 {
        return Err(Error::InvalidArgument("search limit must be at least 2".into()));
    }
    (2..=search_limit)
        .find(|&l| sum_two_squares(l).pairs.iter().filter(|(j, k)| j <= k).count() >= p)
        .ok_or_else(|| Error::NotFound(format!("no λ <= {search_limit} with {p} representations")))
}

fn check_square(omega: &RectSet) -> Result<()> {
    let (a, b) = omega.domain();
    if (a - PI).abs() > 1e-12 || (b - PI).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!("set must live on [0, π]², got [0, {a}] x [0, {b}]")));
    }
    Ok(())
}

/// Gram matrix of the normalized eigenfunctions `2 sin(jx) sin(ky)` over `ω`
/// with respect to `dx dy / π²`.
pub fn gram_matrix(es: &SquareEigenspace, omega: &RectSet) -> Result<SymMatrix> {
    check_square(omega)?;
    if es.pairs.is_empty() {
        return Err(Error::NotAnEigenvalue(es.lambda));
    }
    let op = ModelOperator1D::dirichlet_pi();
    Ok(product_gram(&op, &op, &es.members(), omega))
}

pub fn c_omega(lambda: u64, omega: &RectSet) -> Result<ComegaRecord> {
    let es = sum_two_squares(lambda);
    let g = gram_matrix(&es, omega)?;
    let (c_value, mut witness_coeffs) = sym_eigen_min(&g, DEFAULT_EIGEN_TOL)?;
    canonical_sign(&mut witness_coeffs);
    Ok(ComegaRecord { lambda, dim: es.dim(), c_value, witness_coeffs })
}

/// `C_ω(λ)` at every eigenvalue `λ <= lambda_max`, with the running minimum
/// (ties go to the smaller `λ`).
pub fn c_omega_scan(omega: &RectSet, lambda_max: u64) -> Result<ComegaScan> {
    check_square(omega)?;
    if lambda_max < 2 {
        return Err(Error::InvalidArgument("lambda_max must be at least 2".into()));
    }
    let lambdas: Vec<u64> = (2..=lambda_max).filter(|&l| !sum_two_squares(l).pairs.is_empty()).collect();

    #[cfg(feature = "parallel")]
    let table: Vec<ComegaRecord> = {
        use rayon::prelude::*;
        lambdas.par_iter().map(|&l| c_omega(l, omega)).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let table: Vec<ComegaRecord> = lambdas.iter().map(|&l| c_omega(l, omega)).collect::<Result<_>>()?;

    let best = table
        .iter()
        .fold(None::<&ComegaRecord>, |acc, r| match acc {
            Some(b) if b.c_value <= r.c_value => Some(b),
            _ => Some(r),
        })
        .expect("λ = 2 is always present");
    Ok(ComegaScan { min_c: best.c_value, argmin_lambda: best.lambda, lambda_max, table })
}

/// For a product set `B1 × B2`: `λ_min(A) · λ_min(B)`, where `A` is the Gram
/// matrix of the x-modes `{ j }` of `E_λ` on `B1` and `B` that of the y-modes
/// on `B2`. The eigenspace Gram is a principal submatrix of `A ⊗ B`, so this
/// is a lower bound for `C_ω(λ)`.
pub fn c_omega_product_floor(lambda: u64, b1: &IntervalSet, b2: &IntervalSet) -> Result<f64> {
    let es = sum_two_squares(lambda);
    if es.pairs.is_empty() {
        return Err(Error::NotAnEigenvalue(lambda));
    }
    let op = ModelOperator1D::dirichlet_pi();
    let factor_min = |modes: Vec<u64>, set: &IntervalSet| -> Result<f64> {
        let mut modes = modes;
        modes.sort_unstable();
        modes.dedup();
        let g = SymMatrix::from_fn(modes.len(), |p, q| {
            set.intervals()
                .iter()
                .map(|&(a, b)| {
                    let f = op.eigenspace_basis(modes[p] as usize)[0];
                    let h = op.eigenspace_basis(modes[q] as usize)[0];
                    op.basis_pair_integral(&f, &h, a, b)
                })
                .sum()
        });
        Ok(sym_eigen_min(&g, DEFAULT_EIGEN_TOL)?.0)
    };
    let a = factor_min(es.pairs.iter().map(|p| p.0).collect(), b1)?;
    let b = factor_min(es.pairs.iter().map(|p| p.1).collect(), b2)?;
    Ok(a * b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::Rect;

    fn sq(rects: &[[f64; 4]]) -> RectSet {
        RectSet::new((PI, PI), rects.iter().map(|&r| Rect::from(r)).collect()).unwrap()
    }

    #[test]
    fn representations() {
        assert_eq!(sum_two_squares(50).pairs, vec![(1, 7), (5, 5), (7, 1)]);
        assert!(sum_two_squares(3).pairs.is_empty());
        assert!(sum_two_squares(1).pairs.is_empty());
        assert_eq!(sum_two_squares(65).pairs, vec![(1, 8), (4, 7), (7, 4), (8, 1)]);
        assert_eq!(sum_two_squares(2).pairs, vec![(1, 1)]);
    }

    #[test]
    fn first_lambda_with_p_representations() {
        assert_eq!(min_lambda_with_representations(1, 10).unwrap(), 2);
        assert_eq!(min_lambda_with_representations(2, 100).unwrap(), 50);
        assert_eq!(min_lambda_with_representations(3, 1000).unwrap(), 325);
        assert!(matches!(min_lambda_with_representations(3, 300), Err(Error::NotFound(_))));
        assert!(min_lambda_with_representations(0, 300).is_err());
    }

    #[test]
    fn full_square_gram_is_identity() {
        let g = gram_matrix(&sum_two_squares(65), &RectSet::full((PI, PI)).unwrap()).unwrap();
        for p in 0..4 {
            for q in 0..4 {
                assert!((g.get(p, q) - if p == q { 1.0 } else { 0.0 }).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn c_omega_examples() {
        let full = RectSet::full((PI, PI)).unwrap();
        assert!((c_omega(50, &full).unwrap().c_value - 1.0).abs() < 1e-14);
        let half = sq(&[[0.0, PI / 2.0, 0.0, PI]]);
        let r = c_omega(50, &half).unwrap();
        assert!((r.c_value - 0.5).abs() < 1e-10);
        assert_eq!(r.dim, 3);

        let w = sq(&[[0.3, 0.8, 1.1, 2.0]]);
        let op = ModelOperator1D::dirichlet_pi();
        let plain = op.pair_integral(1, 1, 0.3, 0.8).unwrap() * op.pair_integral(1, 1, 1.1, 2.0).unwrap();
        assert!((c_omega(2, &w).unwrap().c_value - plain).abs() < 1e-15);
        assert!(matches!(c_omega(3, &w), Err(Error::NotAnEigenvalue(3))));
    }

    #[test]
    fn scan_on_full_square() {
        let s = c_omega_scan(&RectSet::full((PI, PI)).unwrap(), 200).unwrap();
        assert!((s.min_c - 1.0).abs() < 1e-12);
        assert!(s.table.iter().all(|r| r.dim == sum_two_squares(r.lambda).dim()));
        assert!(c_omega_scan(&RectSet::full((1.0, 1.0)).unwrap(), 200).is_err());
    }

    #[test]
    fn product_floor_below_c_omega() {
        let b1 = IntervalSet::new(PI, vec![(0.2, 1.7)]).unwrap();
        let b2 = IntervalSet::new(PI, vec![(1.0, 2.9)]).unwrap();
        let w = RectSet::product(&b1, &b2).unwrap();
        for l in [2, 25, 50, 65, 325, 1105] {
            let c = c_omega(l, &w).unwrap().c_value;
            let floor = c_omega_product_floor(l, &b1, &b2).unwrap();
            assert!(c >= floor - 1e-12, "λ = {l}: {c} < {floor}");
        }
    }
}

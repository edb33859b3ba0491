//! Dense symmetric eigensolver and the small exact-arithmetic pieces used by
//! the multiplicity checks.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sweep budget for the cyclic Jacobi method.
pub const JACOBI_MAX_SWEEPS: usize = 30;

/// Default relative tolerance for [`sym_eigen_min`].
pub const DEFAULT_EIGEN_TOL: f64 = 1e-12;

// ---------------------------------------------------------------------------
// Rational
// ---------------------------------------------------------------------------

/// A reduced fraction `num / den` with `den > 0`.
///
/// Arithmetic is checked: any intermediate that does not fit back into `i64`
/// after reduction is reported as [`Error::Overflow`] instead of wrapping.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "(i64, i64)", into = "(i64, i64)")]
pub struct Rational {
    num: i64,
    den: i64,
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };

    pub fn new(num: i64, den: i64) -> Result<Self> {
        Self::from_i128(num as i128, den as i128)
    }

    pub fn from_int(n: i64) -> Self {
        Rational { num: n, den: 1 }
    }

    fn from_i128(num: i128, den: i128) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        let g = gcd_i128(num, den).max(1);
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        let num = i64::try_from(n).map_err(|_| Error::Overflow(format!("numerator {n}")))?;
        let den = i64::try_from(d).map_err(|_| Error::Overflow(format!("denominator {d}")))?;
        Ok(Rational { num, den })
    }

    pub fn numer(&self) -> i64 {
        self.num
    }

    pub fn denom(&self) -> i64 {
        self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_positive(&self) -> bool {
        self.num > 0
    }

    pub fn checked_add(&self, other: &Rational) -> Result<Rational> {
        let n = self.num as i128 * other.den as i128 + other.num as i128 * self.den as i128;
        Self::from_i128(n, self.den as i128 * other.den as i128)
    }

    pub fn checked_sub(&self, other: &Rational) -> Result<Rational> {
        self.checked_add(&Rational { num: -other.num, den: other.den })
    }

    pub fn checked_mul(&self, other: &Rational) -> Result<Rational> {
        Self::from_i128(
            self.num as i128 * other.num as i128,
            self.den as i128 * other.den as i128,
        )
    }

    pub fn checked_div(&self, other: &Rational) -> Result<Rational> {
        if other.num == 0 {
            return Err(Error::InvalidArgument("division by zero".into()));
        }
        Self::from_i128(
            self.num as i128 * other.den as i128,
            self.den as i128 * other.num as i128,
        )
    }

    pub fn recip(&self) -> Result<Rational> {
        Rational::ONE.checked_div(self)
    }

    /// Exact square root when both numerator and denominator are perfect
    /// squares.
    pub fn sqrt_exact(&self) -> Option<Rational> {
        if self.num < 0 {
            return None;
        }
        let n = (self.num as u64).isqrt();
        let d = (self.den as u64).isqrt();
        if n * n == self.num as u64 && d * d == self.den as u64 {
            Some(Rational { num: n as i64, den: d as i64 })
        } else {
            None
        }
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as i128 * other.den as i128).cmp(&(other.num as i128 * self.den as i128))
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("not a rational: {s:?}"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n = n.trim().parse::<i64>().map_err(|_| bad())?;
                let d = d.trim().parse::<i64>().map_err(|_| bad())?;
                Rational::new(n, d)
            }
            None => Ok(Rational::from_int(s.trim().parse::<i64>().map_err(|_| bad())?)),
        }
    }
}

impl TryFrom<(i64, i64)> for Rational {
    type Error = Error;

    fn try_from((n, d): (i64, i64)) -> Result<Self> {
        Rational::new(n, d)
    }
}

impl From<Rational> for (i64, i64) {
    fn from(r: Rational) -> Self {
        (r.num, r.den)
    }
}

// ---------------------------------------------------------------------------
// Symmetric matrices
// ---------------------------------------------------------------------------

/// Real symmetric matrix storing only the upper triangle (row-major packed).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymMatrix {
    n: usize,
    upper: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix { n, upper: vec![0.0; n * (n + 1) / 2] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_diagonal(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    /// Builds the matrix from `f(i, j)` evaluated on the upper triangle only.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    #[inline]
    fn offset(&self, i: usize, j: usize) -> usize {
        let (r, c) = if i <= j { (i, j) } else { (j, i) };
        r * self.n - r * (r + 1) / 2 + c
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.upper[self.offset(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.offset(i, j);
        self.upper[k] = v;
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, v: f64) {
        let k = self.offset(i, j);
        self.upper[k] += v;
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j)).collect()).collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                s += self.get(i, j).powi(2);
            }
        }
        s.sqrt()
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum()).collect()
    }

    pub fn quadratic_form(&self, v: &[f64]) -> f64 {
        self.mul_vec(v).iter().zip(v).map(|(a, b)| a * b).sum()
    }

    pub fn add(&self, other: &SymMatrix) -> SymMatrix {
        assert_eq!(self.n, other.n);
        SymMatrix {
            n: self.n,
            upper: self.upper.iter().zip(&other.upper).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scaled(&self, k: f64) -> SymMatrix {
        SymMatrix { n: self.n, upper: self.upper.iter().map(|a| a * k).collect() }
    }
}

/// Full eigendecomposition: `values` ascending, `vectors[k]` the unit
/// eigenvector for `values[k]`.
#[derive(Clone, Debug)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

/// Cyclic Jacobi diagonalization. Stops once the off-diagonal Frobenius norm
/// drops below `tol * ||A||_F`.
pub fn sym_eigen(a: &SymMatrix, tol: f64) -> Result<SymEigen> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let n = a.order();
    if n == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    let mut m = a.to_dense();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let norm = a.frobenius_norm();
    let off_norm = |m: &Vec<Vec<f64>>| {
        let mut s = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                s += 2.0 * m[p][q] * m[p][q];
            }
        }
        s.sqrt()
    };

    let mut converged = false;
    for _sweep in 0..=JACOBI_MAX_SWEEPS {
        let off = off_norm(&m);
        if off <= tol * norm || off == 0.0 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * apq);
                let t = if theta.is_finite() {
                    theta.signum() / (theta.abs() + theta.hypot(1.0))
                } else {
                    0.0
                };
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                for row in m.iter_mut() {
                    let (kp, kq) = (row[p], row[q]);
                    row[p] = c * kp - s * kq;
                    row[q] = s * kp + c * kq;
                }
                for k in 0..n {
                    let (pk, qk) = (m[p][k], m[q][k]);
                    m[p][k] = c * pk - s * qk;
                    m[q][k] = s * pk + c * qk;
                }
                m[p][q] = 0.0;
                m[q][p] = 0.0;
                for row in v.iter_mut() {
                    let (kp, kq) = (row[p], row[q]);
                    row[p] = c * kp - s * kq;
                    row[q] = s * kp + c * kq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: JACOBI_MAX_SWEEPS, off_norm: off_norm(&m) });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i][i].total_cmp(&m[j][j]).then(i.cmp(&j)));
    let values = order.iter().map(|&k| m[k][k]).collect();
    let vectors = order
        .iter()
        .map(|&k| {
            let mut col: Vec<f64> = (0..n).map(|i| v[i][k]).collect();
            canonical_sign(&mut col);
            col
        })
        .collect();
    Ok(SymEigen { values, vectors })
}

/// Smallest eigenvalue and a unit eigenvector, sign-normalized so that the
/// first clearly nonzero coordinate is positive.
pub fn sym_eigen_min(a: &SymMatrix, tol: f64) -> Result<(f64, Vec<f64>)> {
    if a.order() == 1 {
        return Ok((a.get(0, 0), vec![1.0]));
    }
    let mut e = sym_eigen(a, tol)?;
    Ok((e.values[0], e.vectors.swap_remove(0)))
}

/// Flips `v` so that its first coordinate with magnitude above 1e-12 is
/// positive.
pub fn canonical_sign(v: &mut [f64]) {
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-12) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

// ---------------------------------------------------------------------------
// Exact collisions between two rational sequences
// ---------------------------------------------------------------------------

/// Two distinct index pairs with equal sums: `seq1[i] + seq2[j] ==
/// seq1[i2] + seq2[j2]`. Indices are 1-based, and `i < i2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Collision {
    pub i: usize,
    pub j: usize,
    pub i2: usize,
    pub j2: usize,
}

impl Collision {
    /// Record with the roles of the two sequences exchanged, re-ordered so
    /// that the first index is the smaller one.
    pub fn transposed(&self) -> Collision {
        let (a, b) = ((self.j, self.i), (self.j2, self.i2));
        let ((i, j), (i2, j2)) = if a <= b { (a, b) } else { (b, a) };
        Collision { i, j, i2, j2 }
    }
}

/// One set of index pairs sharing an exact sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactClass {
    pub sum: Rational,
    /// 1-based `(i, j)` pairs, sorted lexicographically.
    pub members: Vec<(usize, usize)>,
}

const SCALED_LIMIT: i128 = (i64::MAX / 4) as i128;

/// Rewrites every value over a common denominator. Returns the scaled
/// integer numerators of both sequences and the denominator.
fn common_scale(seq1: &[Rational], seq2: &[Rational]) -> Result<(Vec<i128>, Vec<i128>, i128)> {
    let mut lcm: i128 = 1;
    for r in seq1.iter().chain(seq2) {
        let d = r.denom() as i128;
        lcm = lcm / gcd_i128(lcm, d) * d;
        if lcm > SCALED_LIMIT {
            return Err(Error::Overflow(format!("common denominator exceeds {SCALED_LIMIT}")));
        }
    }
    let scale = |r: &Rational| -> Result<i128> {
        let v = r.numer() as i128 * (lcm / r.denom() as i128);
        if v.abs() > SCALED_LIMIT {
            Err(Error::Overflow(format!("{r} over common denominator {lcm}")))
        } else {
            Ok(v)
        }
    };
    let s1 = seq1.iter().map(scale).collect::<Result<Vec<_>>>()?;
    let s2 = seq2.iter().map(scale).collect::<Result<Vec<_>>>()?;
    Ok((s1, s2, lcm))
}

fn check_increasing(seq: &[Rational], name: &str) -> Result<()> {
    if seq.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(format!("{name} is not strictly increasing")));
    }
    Ok(())
}

/// Groups all pairs `(i, j)` by the exact value of `seq1[i] + seq2[j]`,
/// keeping only sums `<= cutoff` when a cutoff is given. Classes come out in
/// increasing order of their sum.
pub fn exact_sum_classes(
    seq1: &[Rational],
    seq2: &[Rational],
    cutoff: Option<Rational>,
) -> Result<Vec<ExactClass>> {
    check_increasing(seq1, "first sequence")?;
    check_increasing(seq2, "second sequence")?;
    let (s1, s2, den) = common_scale(seq1, seq2)?;
    let limit = match cutoff {
        Some(c) => {
            let v = c.numer() as i128 * den;
            if v % c.denom() as i128 == 0 {
                Some(v / c.denom() as i128)
            } else {
                // floor of cutoff * den
                Some(v.div_euclid(c.denom() as i128))
            }
        }
        None => None,
    };
    let mut sums: Vec<(i128, usize, usize)> = Vec::new();
    for (i, a) in s1.iter().enumerate() {
        for (j, b) in s2.iter().enumerate() {
            let s = a + b;
            if limit.is_none_or(|l| s <= l) {
                sums.push((s, i + 1, j + 1));
            }
        }
    }
    sums.sort_unstable();
    let mut classes: Vec<ExactClass> = Vec::new();
    for chunk in sums.chunk_by(|a, b| a.0 == b.0) {
        let sum = Rational::from_i128(chunk[0].0, den)?;
        classes.push(ExactClass { sum, members: chunk.iter().map(|&(_, i, j)| (i, j)).collect() });
    }
    Ok(classes)
}

/// All collisions `seq1[i] + seq2[j] == seq1[i2] + seq2[j2]` with
/// `(i, j) != (i2, j2)`, in exact integer arithmetic. Sorted.
pub fn rational_collisions(seq1: &[Rational], seq2: &[Rational]) -> Result<Vec<Collision>> {
    let classes = exact_sum_classes(seq1, seq2, None)?;
    let mut out = Vec::new();
    for class in classes.iter().filter(|c| c.members.len() > 1) {
        out.extend(class_collisions(&class.members));
    }
    out.sort_unstable();
    Ok(out)
}

/// Every unordered pair of members of a collision class as a record.
pub fn class_collisions(members: &[(usize, usize)]) -> Vec<Collision> {
    let mut out = Vec::new();
    for (a, &(i, j)) in members.iter().enumerate() {
        for &(i2, j2) in &members[a + 1..] {
            let ((i, j), (i2, j2)) = if (i, j) <= (i2, j2) { ((i, j), (i2, j2)) } else { ((i2, j2), (i, j)) };
            out.push(Collision { i, j, i2, j2 });
        }
    }
    out
}

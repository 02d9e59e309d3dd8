//! Exact rational arithmetic, rational multiples of π, integer root vectors
//! and Gram-matrix inner products.
//!
//! Roots and points never leave the simple-root basis: a root is an integer
//! vector of coefficients against the simple roots, and the metric is carried
//! by a rational Gram matrix. Points of 𝔞 are written in the dual basis
//! `{H_i}` (with `⟨H_i, α_j⟩ = δ_ij`) so that every pairing `⟨α, H⟩` is an
//! exact rational multiple of π.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number (always reduced, positive denominator).
pub type Rational = BigRational;

/// Shorthand for `n/d` as a [`Rational`].
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Formats a rational as `p/q` (or `p` when integral).
pub fn fmt_rational(q: &Rational) -> alloc::string::String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        alloc::format!("{}/{}", q.numer(), q.denom())
    }
}

/// An angle `coeff·π` with rational `coeff`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalAngle {
    coeff: Rational,
}

/// Unit for [`RationalAngle::is_multiple_of`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AngleUnit {
    Pi,
    HalfPi,
}

impl RationalAngle {
    pub fn new(coeff: Rational) -> Self {
        Self { coeff }
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::new(rat(n, d))
    }

    pub fn zero() -> Self {
        Self::new(Rational::zero())
    }

    /// Coefficient of π.
    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    /// Representative in `[0, 1)·π` of the class mod π.
    pub fn normalize_mod_pi(&self) -> Self {
        let fl = self.coeff.floor();
        Self::new(&self.coeff - fl)
    }

    pub fn is_multiple_of(&self, unit: AngleUnit) -> bool {
        match unit {
            AngleUnit::Pi => self.coeff.is_integer(),
            AngleUnit::HalfPi => (&self.coeff * int(2)).is_integer(),
        }
    }
}

impl Add for &RationalAngle {
    type Output = RationalAngle;
    fn add(self, rhs: Self) -> RationalAngle {
        RationalAngle::new(&self.coeff + &rhs.coeff)
    }
}

impl Sub for &RationalAngle {
    type Output = RationalAngle;
    fn sub(self, rhs: Self) -> RationalAngle {
        RationalAngle::new(&self.coeff - &rhs.coeff)
    }
}

impl Neg for &RationalAngle {
    type Output = RationalAngle;
    fn neg(self) -> RationalAngle {
        RationalAngle::new(-&self.coeff)
    }
}

impl fmt::Display for RationalAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeff.is_zero() {
            f.write_str("0")
        } else {
            write!(f, "{}·π", fmt_rational(&self.coeff))
        }
    }
}

/// A root (or any lattice vector) as integer coordinates in the simple-root
/// basis.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootVector(Vec<i64>);

impl RootVector {
    pub fn new(coords: Vec<i64>) -> Self {
        Self(coords)
    }

    pub fn zeros(rank: usize) -> Self {
        Self(vec![0; rank])
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        Self(v)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Lexicographic positivity: the first nonzero coordinate is positive.
    /// On a root system written in one of its own simple bases this is the
    /// usual positive system; on a subsystem it induces a positive system.
    pub fn is_positive(&self) -> bool {
        self.0.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0)
    }

    pub fn scale(&self, k: i64) -> Self {
        Self(self.0.iter().map(|c| c * k).collect())
    }

    /// Splits `v = c·p` with `p` primitive, first nonzero entry of `p`
    /// positive, and `c` a nonzero integer. Returns `None` for the zero
    /// vector.
    pub fn primitive(&self) -> Option<(i64, RootVector)> {
        let g = self.0.iter().fold(0i64, |g, &c| g.gcd(&c));
        if g == 0 {
            return None;
        }
        let first = *self.0.iter().find(|&&c| c != 0)?;
        let c = if first > 0 { g } else { -g };
        Some((c, Self(self.0.iter().map(|x| x / c).collect())))
    }

    pub fn to_rationals(&self) -> Vec<Rational> {
        self.0.iter().map(|&c| int(c)).collect()
    }

    /// Pairing `Σ c_j x_j` against dual-basis coordinates.
    pub fn pair_dual(&self, x: &[Rational]) -> Rational {
        self.0.iter().zip(x).filter(|(c, _)| **c != 0).fold(Rational::zero(), |acc, (&c, xi)| acc + xi * int(c))
    }
}

impl Neg for &RootVector {
    type Output = RootVector;
    fn neg(self) -> RootVector {
        RootVector(self.0.iter().map(|c| -c).collect())
    }
}

impl Add for &RootVector {
    type Output = RootVector;
    fn add(self, rhs: Self) -> RootVector {
        RootVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &RootVector {
    type Output = RootVector;
    fn sub(self, rhs: Self) -> RootVector {
        RootVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl From<Vec<i64>> for RootVector {
    fn from(v: Vec<i64>) -> Self {
        Self(v)
    }
}

impl fmt::Display for RootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// Dense square rational matrix, row-major.
pub type RationalMatrix = Vec<Vec<Rational>>;

/// Symmetric positive-definite rational Gram matrix of the simple roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramMatrix {
    entries: RationalMatrix,
}

impl GramMatrix {
    /// Checks squareness, symmetry and positive definiteness (all leading
    /// principal minors > 0).
    pub fn new(entries: RationalMatrix) -> Result<Self> {
        let n = entries.len();
        for row in &entries {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
        }
        for i in 0..n {
            for j in 0..i {
                if entries[i][j] != entries[j][i] {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        let g = Self { entries };
        if g.leading_minors().iter().any(|m| !m.is_positive()) {
            return Err(Error::SingularGram);
        }
        Ok(g)
    }

    pub fn from_integers(rows: &[&[i64]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &RationalMatrix {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i][j]
    }

    pub fn leading_minors(&self) -> Vec<Rational> {
        (1..=self.rank())
            .map(|k| {
                let sub: RationalMatrix = self.entries[..k].iter().map(|r| r[..k].to_vec()).collect();
                determinant(&sub)
            })
            .collect()
    }

    /// `uᵀ G v` for rational coordinate vectors.
    pub fn inner_q(&self, u: &[Rational], v: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if !vj.is_zero() {
                    acc += ui * &self.entries[i][j] * vj;
                }
            }
        }
        acc
    }

    /// `uᵀ G v` for root vectors; lengths must equal the rank.
    pub fn inner(&self, u: &RootVector, v: &RootVector) -> Result<Rational> {
        let r = self.rank();
        for w in [u, v] {
            if w.len() != r {
                return Err(Error::DimensionMismatch { expected: r, found: w.len() });
            }
        }
        let mut acc = Rational::zero();
        for (i, &a) in u.coords().iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in v.coords().iter().enumerate() {
                if b != 0 {
                    acc += &self.entries[i][j] * int(a * b);
                }
            }
        }
        Ok(acc)
    }

    /// `G v`: the dual-basis coordinates of the vector whose root-basis
    /// coordinates are `v` (`⟨v, α_i⟩` for each simple root).
    pub fn lower(&self, v: &RootVector) -> Vec<Rational> {
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v.coords())
                    .filter(|(_, &c)| c != 0)
                    .fold(Rational::zero(), |acc, (g, &c)| acc + g * int(c))
            })
            .collect()
    }

    /// Columns are the dual vectors `H_i` in the simple-root basis, i.e. the
    /// inverse Gram matrix.
    pub fn dual_basis(&self) -> Result<RationalMatrix> {
        invert(&self.entries).ok_or(Error::SingularGram)
    }
}

/// Free-function form of [`GramMatrix::inner`].
pub fn inner(u: &RootVector, v: &RootVector, g: &GramMatrix) -> Result<Rational> {
    g.inner(u, v)
}

/// Free-function form of [`GramMatrix::dual_basis`].
pub fn dual_basis(g: &GramMatrix) -> Result<RationalMatrix> {
    g.dual_basis()
}

pub fn identity(n: usize) -> RationalMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect()
}

pub fn mat_mul(a: &RationalMatrix, b: &RationalMatrix) -> RationalMatrix {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let k = b.len();
    let mut out = vec![vec![Rational::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] += &a[i][l] * &b[l][j];
            }
        }
    }
    out
}

pub fn determinant(m: &RationalMatrix) -> Rational {
    let n = m.len();
    let mut a = m.clone();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let pivot = a[col][col].clone();
        det *= &pivot;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &pivot;
            for c in col..n {
                let d = &f * &a[col][c];
                a[r][c] -= d;
            }
        }
    }
    det
}

/// Gauss–Jordan inverse; `None` when singular.
pub fn invert(m: &RationalMatrix) -> Option<RationalMatrix> {
    let n = m.len();
    let mut a = m.clone();
    let mut inv = identity(n);
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(p, col);
        inv.swap(p, col);
        let pivot = a[col][col].clone();
        for c in 0..n {
            a[col][c] /= &pivot;
            inv[col][c] /= &pivot;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in 0..n {
                let d = &f * &a[col][c];
                a[r][c] -= d;
                let e = &f * &inv[col][c];
                inv[r][c] -= e;
            }
        }
    }
    Some(inv)
}

/// Solves `A x = b` for square nonsingular `A`.
pub fn solve(a: &RationalMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let mut m: RationalMatrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(p, col);
        let pivot = m[col][col].clone();
        for c in col..=n {
            m[col][c] /= &pivot;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in col..=n {
                let d = &f * &m[col][c];
                m[r][c] -= d;
            }
        }
    }
    Some(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Rank of a list of rational row vectors.
pub fn rank_of(rows: &[Vec<Rational>]) -> usize {
    let mut a: RationalMatrix = rows.to_vec();
    let Some(width) = a.first().map(Vec::len) else {
        return 0;
    };
    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(p, rank);
        let pivot = a[rank][col].clone();
        for r in rank + 1..a.len() {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &pivot;
            for c in col..width {
                let d = &f * &a[rank][c];
                a[r][c] -= d;
            }
        }
        rank += 1;
    }
    rank
}

/// Exact `LDLᵀ` factorisation of a symmetric positive-definite matrix:
/// returns unit lower-triangular `L` and the diagonal `D`.
pub fn ldl(m: &RationalMatrix) -> Option<(RationalMatrix, Vec<Rational>)> {
    let n = m.len();
    let mut l = identity(n);
    let mut d = vec![Rational::zero(); n];
    for j in 0..n {
        let mut dj = m[j][j].clone();
        for k in 0..j {
            dj -= &l[j][k] * &l[j][k] * &d[k];
        }
        if !dj.is_positive() {
            return None;
        }
        for i in j + 1..n {
            let mut s = m[i][j].clone();
            for k in 0..j {
                s -= &l[i][k] * &l[j][k] * &d[k];
            }
            l[i][j] = s / &dj;
        }
        d[j] = dj;
    }
    Some((l, d))
}

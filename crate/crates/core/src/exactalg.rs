//! Exact arithmetic over ℚ and real quadratic fields ℚ(√d), with the
//! linear algebra and positivity primitives used everywhere else.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Canonical "p/q" form, also used for integers ("3/1").
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational '{s}'"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Checks that `d` is usable as a context: 0 (rational only) or a positive
/// non-square.
pub fn check_context(d: u64) -> Result<()> {
    if d == 0 {
        return Ok(());
    }
    let r = d.isqrt();
    if r * r == d {
        Err(Error::BadDiscriminant(d))
    } else {
        Ok(())
    }
}

/// Splits a discriminant D into (d, f) with D = f²·d and d square-free,
/// so that √D = f·√d. Perfect squares give d = 0 (the rational case).
pub fn squarefree_base(disc: u64) -> (u64, u64) {
    if disc == 0 {
        return (0, 0);
    }
    let mut d = disc;
    let mut f = 1u64;
    let mut p = 2u64;
    while p * p <= d {
        while d.is_multiple_of(p * p) {
            d /= p * p;
            f *= p;
        }
        p += 1;
    }
    if d == 1 {
        (0, f)
    } else {
        (d, f)
    }
}

/// a + b·√d. All values combined in one operation must share `d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticNumber {
    pub a: Rational,
    pub b: Rational,
    pub d: u64,
}

impl QuadraticNumber {
    pub fn new(a: Rational, b: Rational, d: u64) -> Result<Self> {
        check_context(d)?;
        if d == 0 && !b.is_zero() {
            return Err(Error::IrrationalInRationalContext);
        }
        Ok(QuadraticNumber { a, b, d })
    }

    pub fn rational(a: Rational, d: u64) -> Self {
        QuadraticNumber { a, b: Rational::zero(), d }
    }

    pub fn from_int(n: i64, d: u64) -> Self {
        Self::rational(int(n), d)
    }

    pub fn zero(d: u64) -> Self {
        Self::from_int(0, d)
    }

    pub fn one(d: u64) -> Self {
        Self::from_int(1, d)
    }

    /// √d itself.
    pub fn sqrt_d(d: u64) -> Result<Self> {
        Self::new(Rational::zero(), Rational::one(), d)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn same(&self, o: &Self) -> Result<()> {
        if self.d != o.d {
            Err(Error::ContextMismatch(self.d, o.d))
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        self.same(o)?;
        Ok(QuadraticNumber { a: &self.a + &o.a, b: &self.b + &o.b, d: self.d })
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        self.same(o)?;
        Ok(QuadraticNumber { a: &self.a - &o.a, b: &self.b - &o.b, d: self.d })
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        self.same(o)?;
        let dd = int(self.d as i64);
        Ok(QuadraticNumber {
            a: &self.a * &o.a + &self.b * &o.b * dd,
            b: &self.a * &o.b + &self.b * &o.a,
            d: self.d,
        })
    }

    pub fn try_div(&self, o: &Self) -> Result<Self> {
        self.same(o)?;
        self.try_mul(&o.inv()?)
    }

    /// a² − d·b², the field norm.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * int(self.d as i64)
    }

    pub fn conjugate(&self) -> Self {
        QuadraticNumber { a: self.a.clone(), b: -&self.b, d: self.d }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        Ok(QuadraticNumber { a: &self.a / &n, b: -&self.b / &n, d: self.d })
    }

    pub fn scale(&self, r: &Rational) -> Self {
        QuadraticNumber { a: &self.a * r, b: &self.b * r, d: self.d }
    }

    /// Exact sign of a + b√d.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&Rational::zero());
        let sb = self.b.cmp(&Rational::zero());
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * int(self.d as i64);
        if a2 > b2d {
            sa
        } else {
            sb
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    /// Exact comparison within one context.
    pub fn try_cmp(&self, o: &Self) -> Result<Ordering> {
        Ok(self.try_sub(o)?.signum())
    }

    /// Floating approximation, for display only.
    pub fn approx(&self) -> f64 {
        let f = |r: &Rational| {
            let n: f64 = r.numer().to_string().parse().unwrap_or(f64::NAN);
            let d: f64 = r.denom().to_string().parse().unwrap_or(f64::NAN);
            n / d
        };
        f(&self.a) + f(&self.b) * (self.d as f64).sqrt()
    }
}

impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}√{}", self.b, self.d)
        } else if self.b.is_negative() {
            write!(f, "{} - {}√{}", self.a, -&self.b, self.d)
        } else {
            write!(f, "{} + {}√{}", self.a, self.b, self.d)
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl $tr<&QuadraticNumber> for &QuadraticNumber {
            type Output = QuadraticNumber;
            fn $m(self, o: &QuadraticNumber) -> QuadraticNumber {
                self.$try(o).expect("discriminant context mismatch")
            }
        }
        impl $tr<QuadraticNumber> for QuadraticNumber {
            type Output = QuadraticNumber;
            fn $m(self, o: QuadraticNumber) -> QuadraticNumber {
                (&self).$try(&o).expect("discriminant context mismatch")
            }
        }
    };
}
binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn neg(self) -> QuadraticNumber {
        QuadraticNumber { a: -&self.a, b: -&self.b, d: self.d }
    }
}

impl Neg for QuadraticNumber {
    type Output = QuadraticNumber;
    fn neg(self) -> QuadraticNumber {
        -&self
    }
}

#[derive(Serialize, Deserialize)]
struct QnWire {
    a: String,
    b: String,
    d: u64,
}

impl Serialize for QuadraticNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QnWire { a: format_rational(&self.a), b: format_rational(&self.b), d: self.d }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadraticNumber {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let w = QnWire::deserialize(de)?;
        let a = parse_rational(&w.a).map_err(serde::de::Error::custom)?;
        let b = parse_rational(&w.b).map_err(serde::de::Error::custom)?;
        QuadraticNumber::new(a, b, w.d).map_err(serde::de::Error::custom)
    }
}

/// Minimal field interface shared by the elimination routines.
pub trait Scalar: Clone + PartialEq {
    fn s_zero(&self) -> bool;
    fn s_sub(&self, o: &Self) -> Self;
    fn s_mul(&self, o: &Self) -> Self;
    fn s_div(&self, o: &Self) -> Self;
}

impl Scalar for Rational {
    fn s_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn s_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn s_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn s_div(&self, o: &Self) -> Self {
        self / o
    }
}

impl Scalar for QuadraticNumber {
    fn s_zero(&self) -> bool {
        QuadraticNumber::is_zero(self)
    }
    fn s_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn s_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn s_div(&self, o: &Self) -> Self {
        self.try_div(o).expect("division by zero or context mismatch")
    }
}

/// In-place reduced row echelon form; returns pivot columns. Pivots are
/// chosen left to right, first non-zero row below.
pub fn rref_in_place<T: Scalar>(rows: &mut [Vec<T>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].s_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let lead = rows[r][c].clone();
        for j in c..ncols {
            rows[r][j] = rows[r][j].s_div(&lead);
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].s_zero() {
                let f = rows[i][c].clone();
                for j in c..ncols {
                    let t = rows[r][j].s_mul(&f);
                    rows[i][j] = rows[i][j].s_sub(&t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Kernel of a row list, as the reduced echelon basis of the solution space.
fn kernel_generic<T: Scalar>(rows: &[Vec<T>], ncols: usize, zero: &T, one: &T) -> Vec<Vec<T>> {
    let mut m: Vec<Vec<T>> = rows.to_vec();
    let pivots = rref_in_place(&mut m, ncols);
    let mut basis = Vec::new();
    for f in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![zero.clone(); ncols];
        v[f] = one.clone();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = zero.s_sub(&m[r][f]);
        }
        basis.push(v);
    }
    let piv = rref_in_place(&mut basis, ncols);
    basis.truncate(piv.len());
    basis
}

pub fn rational_rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref_in_place(&mut m, ncols).len()
}

pub fn rational_kernel(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    kernel_generic(rows, ncols, &Rational::zero(), &Rational::one())
}

/// Canonical (reduced echelon, zero rows dropped) basis of the span of
/// `vectors` inside ℚ(√d)^n.
pub fn echelon_basis(vectors: &[Vec<QuadraticNumber>], n: usize) -> Vec<Vec<QuadraticNumber>> {
    let mut m = vectors.to_vec();
    let piv = rref_in_place(&mut m, n);
    m.truncate(piv.len());
    m
}

pub fn rational_echelon_basis(vectors: &[Vec<Rational>], n: usize) -> Vec<Vec<Rational>> {
    let mut m = vectors.to_vec();
    let piv = rref_in_place(&mut m, n);
    m.truncate(piv.len());
    m
}

/// Dense matrix over ℚ(√d).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    d: u64,
    entries: Vec<QuadraticNumber>,
}

impl QMatrix {
    pub fn new(rows: usize, cols: usize, d: u64, entries: Vec<QuadraticNumber>) -> Result<Self> {
        check_context(d)?;
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(e) = entries.iter().find(|e| e.d != d) {
            return Err(Error::ContextMismatch(d, e.d));
        }
        Ok(QMatrix { rows, cols, d, entries })
    }

    pub fn zeros(rows: usize, cols: usize, d: u64) -> Self {
        QMatrix { rows, cols, d, entries: vec![QuadraticNumber::zero(d); rows * cols] }
    }

    pub fn from_rows(d: u64, cols: usize, rows: Vec<Vec<QuadraticNumber>>) -> Result<Self> {
        let n = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(format!("row of length {} (expected {cols})", r.len())));
        }
        Self::new(n, cols, d, rows.into_iter().flatten().collect())
    }

    /// Integer matrix in context `d`.
    pub fn from_ints(d: u64, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            d,
            cols,
            rows.iter().map(|r| r.iter().map(|&x| QuadraticNumber::from_int(x, d)).collect()).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn get(&self, i: usize, j: usize) -> &QuadraticNumber {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: QuadraticNumber) -> Result<()> {
        if v.d != self.d {
            return Err(Error::ContextMismatch(self.d, v.d));
        }
        self.entries[i * self.cols + j] = v;
        Ok(())
    }

    pub fn row(&self, i: usize) -> Vec<QuadraticNumber> {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<QuadraticNumber> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<QuadraticNumber>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn rank(&self) -> usize {
        let mut m = self.to_rows();
        rref_in_place(&mut m, self.cols).len()
    }

    pub fn mul_vec(&self, v: &[QuadraticNumber]) -> Result<Vec<QuadraticNumber>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        (0..self.rows)
            .map(|i| {
                let mut acc = QuadraticNumber::zero(self.d);
                for (j, x) in v.iter().enumerate() {
                    acc = acc.try_add(&self.get(i, j).try_mul(x)?)?;
                }
                Ok(acc)
            })
            .collect()
    }

    pub fn mul(&self, o: &QMatrix) -> Result<QMatrix> {
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        if self.d != o.d {
            return Err(Error::ContextMismatch(self.d, o.d));
        }
        let mut out = QMatrix::zeros(self.rows, o.cols, self.d);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = QuadraticNumber::zero(self.d);
                for k in 0..self.cols {
                    acc = &acc + &(self.get(i, k) * o.get(k, j));
                }
                out.entries[i * o.cols + j] = acc;
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Canonical basis of {x : M·x = 0}: the reduced row echelon form of the
    /// solution space, one row per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<QuadraticNumber>> {
        kernel_generic(&self.to_rows(), self.cols, &QuadraticNumber::zero(self.d), &QuadraticNumber::one(self.d))
    }
}

pub fn kernel_basis(m: &QMatrix) -> Vec<Vec<QuadraticNumber>> {
    m.kernel_basis()
}

fn shared_context(values: &[QuadraticNumber]) -> Result<u64> {
    let d = values.first().map_or(0, |v| v.d);
    match values.iter().find(|v| v.d != d) {
        Some(v) => Err(Error::ContextMismatch(d, v.d)),
        None => Ok(d),
    }
}

/// Dimension over ℚ of the ℚ-span of the values (0, 1 or 2).
pub fn qspan_dimension(values: &[QuadraticNumber]) -> Result<usize> {
    shared_context(values)?;
    let rows: Vec<Vec<Rational>> = values.iter().map(|v| vec![v.a.clone(), v.b.clone()]).collect();
    Ok(rational_rank(&rows, 2))
}

/// Smallest ℚ-rational subspace containing u, as a reduced echelon basis of
/// rational vectors. Writing u = a + √d·b with a, b rational, it is span{a, b}.
pub fn rational_closure(u: &[QuadraticNumber]) -> Result<Vec<Vec<Rational>>> {
    shared_context(u)?;
    if u.iter().all(|x| x.is_zero()) {
        return Err(Error::ZeroVector);
    }
    let a: Vec<Rational> = u.iter().map(|x| x.a.clone()).collect();
    let b: Vec<Rational> = u.iter().map(|x| x.b.clone()).collect();
    Ok(rational_echelon_basis(&[a, b], u.len()))
}

/// One Fourier–Motzkin stage: inequalities `coeffs · t >= rhs`.
type Ineq = (Vec<Rational>, Rational);

fn normalize(ineq: Ineq) -> Ineq {
    let (c, r) = ineq;
    let scale = c.iter().find(|x| !Zero::is_zero(*x)).map(|x| x.abs());
    match scale {
        Some(s) => (c.iter().map(|x| x / &s).collect(), r / s),
        None => (c, r),
    }
}

fn eliminate(system: &[Ineq], var: usize) -> Vec<Ineq> {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut out = Vec::new();
    for (c, r) in system {
        match c[var].cmp(&Rational::zero()) {
            Ordering::Greater => pos.push((c, r)),
            Ordering::Less => neg.push((c, r)),
            Ordering::Equal => out.push((c.clone(), r.clone())),
        }
    }
    for (cp, rp) in &pos {
        for (cn, rn) in &neg {
            let fp = -&cn[var];
            let fn_ = cp[var].clone();
            let c: Vec<Rational> = cp.iter().zip(cn.iter()).map(|(x, y)| x * &fp + y * &fn_).collect();
            let r = *rp * &fp + *rn * &fn_;
            out.push((c, r));
        }
    }
    let mut out: Vec<Ineq> = out.into_iter().map(normalize).collect();
    out.sort();
    out.dedup();
    // drop trivially satisfied constant rows
    out.retain(|(c, r)| !(c.iter().all(Zero::is_zero) && *r <= Rational::zero()));
    out
}

/// A strictly positive rational x with A·x = 0, if one exists. Decided
/// exactly: x ranges over the rational kernel, and {x ≥ 1} is resolved by
/// Fourier–Motzkin elimination with back-substitution.
pub fn positive_solution(rows: &[Vec<Rational>], ncols: usize) -> Option<Vec<Rational>> {
    let basis = rational_kernel(rows, ncols);
    let k = basis.len();
    if k == 0 {
        return None;
    }
    // x_i = Σ_j basis[j][i] t_j >= 1
    let mut stages: Vec<Vec<Ineq>> = Vec::with_capacity(k + 1);
    let start: Vec<Ineq> = (0..ncols)
        .map(|i| normalize(((0..k).map(|j| basis[j][i].clone()).collect(), Rational::one())))
        .collect();
    stages.push(start);
    for var in (0..k).rev() {
        let next = eliminate(stages.last().unwrap(), var);
        stages.push(next);
    }
    if stages.last().unwrap().iter().any(|(_, r)| *r > Rational::zero()) {
        return None;
    }
    // stage s (0-based from the start) involves t_0..t_{k-1-s}
    let mut t = vec![Rational::zero(); k];
    for var in 0..k {
        let system = &stages[k - 1 - var];
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for (c, r) in system {
            let a = &c[var];
            if Zero::is_zero(a) {
                continue;
            }
            let rest: Rational = (0..var).map(|j| &c[j] * &t[j]).fold(Rational::zero(), |x, y| x + y);
            let bound = (r - rest) / a;
            if a.is_positive() {
                lo = Some(match lo {
                    Some(l) if l >= bound => l,
                    _ => bound,
                });
            } else {
                hi = Some(match hi {
                    Some(h) if h <= bound => h,
                    _ => bound,
                });
            }
        }
        t[var] = lo.or(hi).unwrap_or_else(Rational::zero);
    }
    let x: Vec<Rational> = (0..ncols)
        .map(|i| (0..k).map(|j| &basis[j][i] * &t[j]).fold(Rational::zero(), |x, y| x + y))
        .collect();
    debug_assert!(x.iter().all(|v| *v >= Rational::one()));
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64, d: u64) -> QuadraticNumber {
        QuadraticNumber::new(int(a), int(b), d).unwrap()
    }

    #[test]
    fn kernel_examples() {
        let m = QMatrix::from_ints(0, &[vec![1, -1]]).unwrap();
        assert_eq!(m.kernel_basis(), vec![vec![q(1, 0, 0), q(1, 0, 0)]]);
        let id = QMatrix::from_ints(0, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        assert!(id.kernel_basis().is_empty());
        let m = QMatrix::from_rows(2, 2, vec![vec![q(0, 1, 2), q(-1, 0, 2)]]).unwrap();
        let k = m.kernel_basis();
        assert_eq!(k, vec![vec![q(1, 0, 2), q(0, 1, 2)]]);
        assert!(m.mul_vec(&k[0]).unwrap().iter().all(|x| x.is_zero()));
    }

    #[test]
    fn malformed_matrix() {
        assert!(matches!(
            QMatrix::new(2, 2, 0, vec![QuadraticNumber::zero(0)]),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(QMatrix::new(1, 1, 2, vec![QuadraticNumber::zero(3)]).is_err());
    }

    #[test]
    fn span_examples() {
        let v = vec![q(1, 0, 0), q(2, 0, 0), QuadraticNumber::rational(rat(1, 3), 0)];
        assert_eq!(qspan_dimension(&v).unwrap(), 1);
        assert_eq!(qspan_dimension(&[q(1, 0, 5), q(0, 1, 5)]).unwrap(), 2);
        assert_eq!(qspan_dimension(&[q(1, 1, 2), q(2, 2, 2), q(3, 0, 2)]).unwrap(), 2);
        assert_eq!(qspan_dimension(&[q(0, 0, 2)]).unwrap(), 0);
        assert!(qspan_dimension(&[q(1, 0, 2), q(1, 0, 3)]).is_err());
    }

    #[test]
    fn closure_examples() {
        assert_eq!(rational_closure(&[q(1, 0, 0), q(2, 0, 0), q(3, 0, 0)]).unwrap(), vec![vec![int(1), int(2), int(3)]]);
        assert_eq!(
            rational_closure(&[q(1, 0, 2), q(0, 1, 2), q(1, 1, 2)]).unwrap(),
            vec![vec![int(1), int(0), int(1)], vec![int(0), int(1), int(1)]]
        );
        assert_eq!(rational_closure(&[q(0, 0, 2)]), Err(Error::ZeroVector));
    }

    #[test]
    fn positive_examples() {
        assert_eq!(positive_solution(&[], 3), Some(vec![int(1); 3]));
        assert_eq!(positive_solution(&[vec![int(1), int(-1)]], 2), Some(vec![int(1); 2]));
        assert_eq!(positive_solution(&[vec![int(1), int(1)]], 2), None);
        // x0 = x1 + x2 forces nothing bad
        let w = positive_solution(&[vec![int(1), int(-1), int(-1)]], 3).unwrap();
        assert_eq!(&w[0], &(&w[1] + &w[2]));
    }

    #[test]
    fn signs() {
        assert!(q(1, 1, 2).is_positive());
        assert!(!q(1, -1, 2).is_positive());
        assert!(q(-1, 1, 2).is_positive());
        assert!(q(3, -2, 2).is_positive());
        assert!(!q(-3, 2, 2).is_positive());
        assert_eq!(q(0, 0, 2).signum(), Ordering::Equal);
    }

    #[test]
    fn context_rules() {
        assert!(QuadraticNumber::new(int(0), int(1), 4).is_err());
        assert!(QuadraticNumber::new(int(0), int(1), 0).is_err());
        assert!(q(1, 0, 2).try_add(&q(1, 0, 3)).is_err());
        assert_eq!(squarefree_base(8), (2, 2));
        assert_eq!(squarefree_base(5), (5, 1));
        assert_eq!(squarefree_base(9), (0, 3));
    }

    #[test]
    fn json_round_trip() {
        let x = QuadraticNumber::new(rat(-3, 4), rat(5, 1), 5).unwrap();
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"a":"-3/4","b":"5/1","d":5}"#);
        let y: QuadraticNumber = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
        assert!(serde_json::from_str::<QuadraticNumber>(r#"{"a":"1","b":"1","d":4}"#).is_err());
    }
}

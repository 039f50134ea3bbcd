//! Exact arithmetic over the Gaussian rationals `Q(i)`.
//!
//! Every state coefficient in this crate is stored unnormalized and exact, so
//! orthogonality, rank and unextendibility are decided without tolerances.
//! Rank uses fraction-free (Bareiss) elimination over the Gaussian integers;
//! null spaces use reduced row echelon form over the field.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with a positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::MalformedRational("zero denominator".into()));
        }
        Ok(Rational(BigRational::new(numer.into(), denom)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn to_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self.0).unwrap_or(f64::NAN)
    }

    /// Nearest rational with denominator `q` (ties away from zero).
    pub fn round_to_denominator(x: f64, q: i64) -> Self {
        let n = (x * q as f64).round() as i64;
        Rational(BigRational::new(BigInt::from(n), BigInt::from(q)))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::MalformedRational(s.to_string());
        let s = s.trim();
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s, "1"),
        };
        let numer: BigInt = p.parse().map_err(|_| bad())?;
        let denom: BigInt = q.parse().map_err(|_| bad())?;
        if q.starts_with(['-', '+']) || denom.is_zero() {
            return Err(bad());
        }
        Rational::new(numer, denom)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

macro_rules! forward_binop {
    ($ty:ident, $trait:ident, $method:ident, $body:expr) => {
        impl<'a> $trait<&'a $ty> for &'a $ty {
            type Output = $ty;
            fn $method(self, rhs: &'a $ty) -> $ty {
                let f: fn(&$ty, &$ty) -> $ty = $body;
                f(self, rhs)
            }
        }
        impl $trait<$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Rational, Add, add, |a, b| Rational(&a.0 + &b.0));
forward_binop!(Rational, Sub, sub, |a, b| Rational(&a.0 - &b.0));
forward_binop!(Rational, Mul, mul, |a, b| Rational(&a.0 * &b.0));

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

/// Complex number with rational real and imaginary parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn zero() -> Self {
        Self::new(Rational::zero(), Rational::zero())
    }

    pub fn one() -> Self {
        Self::new(Rational::one(), Rational::zero())
    }

    pub fn i() -> Self {
        Self::new(Rational::zero(), Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::new(n.into(), Rational::zero())
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self::new(re.into(), im.into())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im)
    }

    /// `re² + im²`.
    pub fn norm_sqr(&self) -> Rational {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm_sqr().recip()?;
        Some(Self::new(&self.re * &n, -(&self.im * &n)))
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

forward_binop!(GaussianRational, Add, add, |a, b| GaussianRational::new(
    &a.re + &b.re,
    &a.im + &b.im
));
forward_binop!(GaussianRational, Sub, sub, |a, b| GaussianRational::new(
    &a.re - &b.re,
    &a.im - &b.im
));
forward_binop!(GaussianRational, Mul, mul, |a, b| GaussianRational::new(
    &(&a.re * &b.re) - &(&a.im * &b.im),
    &(&a.re * &b.im) + &(&a.im * &b.re)
));

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        *self = &*self + rhs;
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-&self.re, -&self.im)
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (&self.re, &self.im).serialize(s)
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (re, im) = <(Rational, Rational)>::deserialize(d)?;
        Ok(GaussianRational { re, im })
    }
}

/// A vector in `Q(i)^dim`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExactVector(Vec<GaussianRational>);

impl ExactVector {
    pub fn new(entries: Vec<GaussianRational>) -> Self {
        ExactVector(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        ExactVector(vec![GaussianRational::zero(); dim])
    }

    /// Standard basis vector `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[index] = GaussianRational::one();
        v
    }

    pub fn from_ints(entries: &[i64]) -> Self {
        ExactVector(
            entries
                .iter()
                .map(|&x| GaussianRational::from_int(x))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[GaussianRational] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<GaussianRational> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(GaussianRational::is_zero)
    }

    pub fn conj(&self) -> Self {
        ExactVector(self.0.iter().map(GaussianRational::conj).collect())
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        ExactVector(self.0.iter().map(|x| x * c).collect())
    }

    /// Kronecker product, `self` index slowest.
    pub fn kron(&self, other: &ExactVector) -> Self {
        let mut out = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.0 {
            for b in &other.0 {
                out.push(a * b);
            }
        }
        ExactVector(out)
    }

    pub fn to_complex(&self) -> Vec<num_complex::Complex64> {
        self.0
            .iter()
            .map(|z| {
                let (re, im) = z.to_f64_pair();
                num_complex::Complex64::new(re, im)
            })
            .collect()
    }
}

impl std::ops::Index<usize> for ExactVector {
    type Output = GaussianRational;
    fn index(&self, i: usize) -> &GaussianRational {
        &self.0[i]
    }
}

/// Hermitian inner product `⟨v|w⟩`, conjugate-linear in `v`.
pub fn inner_product(v: &ExactVector, w: &ExactVector) -> Result<GaussianRational> {
    if v.dim() != w.dim() {
        return Err(Error::DimensionMismatch {
            expected: v.dim(),
            found: w.dim(),
        });
    }
    let mut acc = GaussianRational::zero();
    for (a, b) in v.0.iter().zip(&w.0) {
        acc += &(&a.conj() * b);
    }
    Ok(acc)
}

/// Dense row-major matrix over `Q(i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<GaussianRational>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![GaussianRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, GaussianRational::one());
        }
        m
    }

    pub fn from_data(rows: usize, cols: usize, data: Vec<GaussianRational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(ExactMatrix { rows, cols, data })
    }

    /// Stacks vectors as rows. All rows must share `cols`.
    pub fn from_rows(rows: &[ExactVector], cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.dim() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.dim(),
                });
            }
            data.extend(r.0.iter().cloned());
        }
        Ok(ExactMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let vs: Vec<_> = rows.iter().map(|r| ExactVector::from_ints(r)).collect();
        Self::from_rows(&vs, cols).expect("ragged integer rows")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &GaussianRational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: GaussianRational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> ExactVector {
        ExactVector(self.data[r * self.cols..(r + 1) * self.cols].to_vec())
    }

    pub fn conj(&self) -> Self {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(GaussianRational::conj).collect(),
        }
    }

    pub fn mul_vec(&self, v: &ExactVector) -> Result<ExactVector> {
        if v.dim() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.dim(),
            });
        }
        let mut out = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let mut acc = GaussianRational::zero();
            for c in 0..self.cols {
                acc += &(self.get(r, c) * &v.0[c]);
            }
            out.push(acc);
        }
        Ok(ExactVector(out))
    }
}

/// Gaussian integer `re + im·i` used inside fraction-free elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct GaussInt {
    re: BigInt,
    im: BigInt,
}

impl GaussInt {
    fn zero() -> Self {
        GaussInt {
            re: BigInt::zero(),
            im: BigInt::zero(),
        }
    }

    fn one() -> Self {
        GaussInt {
            re: BigInt::one(),
            im: BigInt::zero(),
        }
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn mul(&self, o: &GaussInt) -> GaussInt {
        GaussInt {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn sub(&self, o: &GaussInt) -> GaussInt {
        GaussInt {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    /// Exact division; the caller guarantees divisibility.
    fn div_exact(&self, o: &GaussInt) -> GaussInt {
        let n = &o.re * &o.re + &o.im * &o.im;
        let re = &self.re * &o.re + &self.im * &o.im;
        let im = &self.im * &o.re - &self.re * &o.im;
        debug_assert!(
            re.is_multiple_of(&n) && im.is_multiple_of(&n),
            "inexact Bareiss division"
        );
        GaussInt {
            re: re / &n,
            im: im / n,
        }
    }
}

/// Scales a rational vector to a primitive Gaussian-integer vector spanning the same line.
pub(crate) fn primitive_gauss_row(v: &[GaussianRational]) -> Vec<GaussInt> {
    let mut lcm = BigInt::one();
    for z in v {
        lcm = lcm.lcm(z.re.denom());
        lcm = lcm.lcm(z.im.denom());
    }
    let mut row: Vec<GaussInt> = v
        .iter()
        .map(|z| GaussInt {
            re: z.re.numer() * (&lcm / z.re.denom()),
            im: z.im.numer() * (&lcm / z.im.denom()),
        })
        .collect();
    remove_content(&mut row);
    row
}

fn remove_content(row: &mut [GaussInt]) {
    let mut g = BigInt::zero();
    for z in row.iter() {
        g = g.gcd(&z.re);
        g = g.gcd(&z.im);
        if g.is_one() {
            return;
        }
    }
    if g.is_zero() {
        return;
    }
    for z in row.iter_mut() {
        z.re /= &g;
        z.im /= &g;
    }
}

/// Exact rank over `Q(i)` by Bareiss fraction-free elimination.
pub fn rank(m: &ExactMatrix) -> usize {
    let mut a: Vec<Vec<GaussInt>> = (0..m.rows)
        .map(|r| primitive_gauss_row(&m.data[r * m.cols..(r + 1) * m.cols]))
        .collect();
    let (rows, cols) = (m.rows, m.cols);
    let mut prev = GaussInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            let lead = a[i][c].clone();
            for j in c + 1..cols {
                let t = a[r][c].mul(&a[i][j]).sub(&lead.mul(&a[r][j]));
                a[i][j] = t.div_exact(&prev);
            }
            a[i][c] = GaussInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Reduced row echelon form over the field; returns pivot columns.
fn rref(m: &mut ExactMatrix) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..m.cols {
                m.data.swap(r * m.cols + j, p * m.cols + j);
            }
        }
        let inv = m.get(r, c).inv().expect("nonzero pivot");
        for j in c..m.cols {
            let v = m.get(r, j) * &inv;
            m.set(r, j, v);
        }
        for i in 0..m.rows {
            if i == r || m.get(i, c).is_zero() {
                continue;
            }
            let f = m.get(i, c).clone();
            for j in c..m.cols {
                let v = m.get(i, j) - &(&f * m.get(r, j));
                m.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of `{ v : ⟨row_i|v⟩ = 0 for every row }`.
///
/// Rows are treated as constraint vectors under the Hermitian inner product,
/// so the result is orthogonal to each row (the kernel of the conjugated matrix).
pub fn null_space_basis(m: &ExactMatrix) -> Vec<ExactVector> {
    let mut a = m.conj();
    let pivots = rref(&mut a);
    let mut basis = Vec::with_capacity(m.cols - pivots.len());
    for free in (0..m.cols).filter(|c| !pivots.contains(c)) {
        let mut v = ExactVector::zeros(m.cols);
        v.0[free] = GaussianRational::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v.0[pc] = -a.get(row, free);
        }
        basis.push(v);
    }
    basis
}

/// Row-echelon span maintained incrementally with fraction-free updates.
///
/// `push` reports whether the vector enlarged the span; `pop` undoes the last
/// enlarging push. Used by the unextendibility search, where each DFS level
/// adds at most one vector per party.
#[derive(Clone, Debug, Default)]
pub(crate) struct EchelonSpan {
    rows: Vec<(usize, Vec<GaussInt>)>,
}

impl EchelonSpan {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows; `None` if `v` lies in the span,
    /// otherwise the pivot column and the reduced row.
    pub(crate) fn reduce(&self, v: &[GaussInt]) -> Option<(usize, Vec<GaussInt>)> {
        let mut w = v.to_vec();
        for (pc, row) in &self.rows {
            if w[*pc].is_zero() {
                continue;
            }
            let lead = w[*pc].clone();
            let piv = &row[*pc];
            for (wj, rj) in w.iter_mut().zip(row) {
                *wj = piv.mul(wj).sub(&lead.mul(rj));
            }
            remove_content(&mut w);
        }
        w.iter().position(|z| !z.is_zero()).map(|pc| (pc, w))
    }

    /// Appends a row produced by [`EchelonSpan::reduce`] on the current span.
    pub(crate) fn push_reduced(&mut self, reduced: (usize, Vec<GaussInt>)) {
        self.rows.push(reduced);
    }

    pub(crate) fn push(&mut self, v: &[GaussInt]) -> bool {
        match self.reduce(v) {
            Some(r) => {
                self.rows.push(r);
                true
            }
            None => false,
        }
    }

    pub(crate) fn pop(&mut self) {
        self.rows.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn rational_is_reduced_and_prints_canonically() {
        assert_eq!(q("6/4").to_string(), "3/2");
        assert_eq!(q("4/2").to_string(), "2");
        assert_eq!(q("0/7").to_string(), "0");
        assert_eq!(q("-3/6"), q("-1/2"));
        assert_eq!(q(" -1/2 ").denom(), &BigInt::from(2));
    }

    #[test]
    fn rational_rejects_malformed() {
        for s in ["", "1/0", "a/2", "1/2/3", "1.5", "1/ ", "3/-6"] {
            assert!(s.parse::<Rational>().is_err(), "{s:?} accepted");
        }
    }

    #[test]
    fn gaussian_json_is_pair_of_strings() {
        let z = GaussianRational::new(q("1/2"), q("-3"));
        let js = serde_json::to_string(&z).unwrap();
        assert_eq!(js, r#"["1/2","-3"]"#);
        let back: GaussianRational = serde_json::from_str(&js).unwrap();
        assert_eq!(back, z);
    }

    #[test]
    fn conj_is_involution_and_norm_nonnegative() {
        let z = GaussianRational::new(q("-2/3"), q("5/7"));
        assert_eq!(z.conj().conj(), z);
        assert!(!z.norm_sqr().is_negative());
        assert_eq!(&z * &z.inv().unwrap(), GaussianRational::one());
    }

    #[test]
    fn rank_small_cases() {
        assert_eq!(rank(&ExactMatrix::zeros(3, 3)), 0);
        assert_eq!(rank(&ExactMatrix::identity(3)), 3);
        assert_eq!(rank(&ExactMatrix::from_int_rows(&[&[1, 0], &[0, 1]])), 2);
        assert_eq!(
            rank(&ExactMatrix::from_int_rows(&[
                &[1, 2, 3],
                &[2, 4, 6],
                &[1, 1, 1]
            ])),
            2
        );
        assert_eq!(rank(&ExactMatrix::zeros(0, 4)), 0);
    }

    #[test]
    fn rank_complex_entries() {
        // rows (1, i) and (i, -1) are proportional
        let m = ExactMatrix::from_rows(
            &[
                ExactVector::new(vec![GaussianRational::one(), GaussianRational::i()]),
                ExactVector::new(vec![GaussianRational::i(), GaussianRational::from_int(-1)]),
            ],
            2,
        )
        .unwrap();
        assert_eq!(rank(&m), 1);
    }

    #[test]
    fn null_space_examples() {
        let m = ExactMatrix::from_int_rows(&[&[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(
            null_space_basis(&m),
            vec![ExactVector::from_ints(&[0, 0, 1])]
        );

        let empty = ExactMatrix::zeros(0, 2);
        let ns = null_space_basis(&empty);
        assert_eq!(ns.len(), 2);
        assert_eq!(rank(&ExactMatrix::from_rows(&ns, 2).unwrap()), 2);

        let m = ExactMatrix::from_int_rows(&[&[1, -1, 0], &[0, 0, 1]]);
        assert_eq!(
            null_space_basis(&m),
            vec![ExactVector::from_ints(&[1, 1, 0])]
        );
    }

    #[test]
    fn null_space_respects_conjugation() {
        // row (1, i): orthogonal vector v has conj(1)v0 + conj(i)v1 = v0 - i v1 = 0
        let m = ExactMatrix::from_rows(
            &[ExactVector::new(vec![
                GaussianRational::one(),
                GaussianRational::i(),
            ])],
            2,
        )
        .unwrap();
        let ns = null_space_basis(&m);
        assert_eq!(ns.len(), 1);
        assert!(inner_product(&m.row(0), &ns[0]).unwrap().is_zero());
    }

    #[test]
    fn inner_product_examples() {
        let ip = |a: &[i64], b: &[i64]| {
            inner_product(&ExactVector::from_ints(a), &ExactVector::from_ints(b)).unwrap()
        };
        assert!(ip(&[1, -1, 0], &[1, 1, 0]).is_zero());
        assert_eq!(ip(&[1, 1, 1], &[1, 1, 1]), GaussianRational::from_int(3));
        let v = ExactVector::new(vec![GaussianRational::i(), GaussianRational::zero()]);
        let w = ExactVector::from_ints(&[0, 1]);
        assert!(inner_product(&v, &w).unwrap().is_zero());
        assert_eq!(inner_product(&v, &v).unwrap(), GaussianRational::one());
        assert!(matches!(
            inner_product(&v, &ExactVector::zeros(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn echelon_span_tracks_rank_with_undo() {
        let rows = [[1i64, -1, 0], [2, -2, 0], [0, 0, 3], [1, 1, 1]];
        let mut span = EchelonSpan::new();
        let g = |r: &[i64]| primitive_gauss_row(ExactVector::from_ints(r).entries());
        assert!(span.push(&g(&rows[0])));
        assert!(!span.push(&g(&rows[1])));
        assert!(span.push(&g(&rows[2])));
        assert!(span.push(&g(&rows[3])));
        assert_eq!(span.rank(), 3);
        span.pop();
        assert_eq!(span.rank(), 2);
        assert!(!span.push(&g(&[5, -5, 7])));
    }
}

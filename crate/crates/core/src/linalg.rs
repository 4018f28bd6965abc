//! Exact scalar arithmetic and dense/sparse elimination over prime fields
//! and the rationals.
//!
//! Every verdict downstream reduces to ranks, kernels and solves of exact
//! matrices, so correctness here is non-negotiable. Prime-field elimination
//! is plain Gauss with first-nonzero pivoting; rational elimination goes
//! through fraction-free (Bareiss) pivoting on integer rows to bound
//! intermediate growth.

use std::collections::{BTreeMap, BinaryHeap};
use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("modulus {0} is not a prime in the supported range [2, 2^31)")]
    BadModulus(u64),
    #[error("unknown field spec {0:?} (expected f2, f3, f5, fp:<p> or q)")]
    BadSpec(String),
}

/// An exact coefficient field: a prime field F_p or the rationals.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum FieldSpec {
    Prime(u32),
    Rational,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldSpec {
    pub fn prime(p: u32) -> Result<Self, FieldError> {
        if !is_prime(p as u64) || (p as u64) >= (1u64 << 31) {
            return Err(FieldError::BadModulus(p as u64));
        }
        Ok(FieldSpec::Prime(p))
    }

    /// Parses the CLI flags "f2", "f3", "f5", "fp:<p>" and "q".
    pub fn parse(s: &str) -> Result<Self, FieldError> {
        match s {
            "q" => Ok(FieldSpec::Rational),
            "f2" => FieldSpec::prime(2),
            "f3" => FieldSpec::prime(3),
            "f5" => FieldSpec::prime(5),
            _ => {
                if let Some(rest) = s.strip_prefix("fp:") {
                    let p: u64 = rest
                        .parse()
                        .map_err(|_| FieldError::BadSpec(s.to_string()))?;
                    if p >= (1u64 << 31) {
                        return Err(FieldError::BadModulus(p));
                    }
                    FieldSpec::prime(p as u32)
                } else {
                    Err(FieldError::BadSpec(s.to_string()))
                }
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            FieldSpec::Prime(p) => format!("f{p}"),
            FieldSpec::Rational => "q".to_string(),
        }
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            FieldSpec::Prime(p) => *p,
            FieldSpec::Rational => 0,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Prime(_) => Scalar::Prime(0),
            FieldSpec::Rational => Scalar::Rational(BigRational::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Prime(_) => Scalar::Prime(1),
            FieldSpec::Rational => Scalar::Rational(BigRational::one()),
        }
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            FieldSpec::Prime(p) => {
                let p = *p as i64;
                Scalar::Prime(v.rem_euclid(p) as u64)
            }
            FieldSpec::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Prime(p), Scalar::Prime(x), Scalar::Prime(y)) => {
                Scalar::Prime((x + y) % (*p as u64))
            }
            (FieldSpec::Rational, Scalar::Rational(x), Scalar::Rational(y)) => {
                Scalar::Rational(x + y)
            }
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Prime(p), Scalar::Prime(x), Scalar::Prime(y)) => {
                let p = *p as u64;
                Scalar::Prime((x + p - y) % p)
            }
            (FieldSpec::Rational, Scalar::Rational(x), Scalar::Rational(y)) => {
                Scalar::Rational(x - y)
            }
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Prime(p), Scalar::Prime(x), Scalar::Prime(y)) => {
                Scalar::Prime((x * y) % (*p as u64))
            }
            (FieldSpec::Rational, Scalar::Rational(x), Scalar::Rational(y)) => {
                Scalar::Rational(x * y)
            }
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldSpec::Prime(p), Scalar::Prime(x)) => {
                let p = *p as u64;
                Scalar::Prime((p - x) % p)
            }
            (FieldSpec::Rational, Scalar::Rational(x)) => Scalar::Rational(-x),
            _ => panic!("scalar/field mismatch"),
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldSpec::Prime(p), Scalar::Prime(x)) => {
                assert!(*x != 0, "inverse of zero");
                Scalar::Prime(mod_pow(*x, *p as u64 - 2, *p as u64))
            }
            (FieldSpec::Rational, Scalar::Rational(x)) => {
                assert!(!x.is_zero(), "inverse of zero");
                Scalar::Rational(x.recip())
            }
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Prime(x) => *x == 0,
            Scalar::Rational(x) => x.is_zero(),
        }
    }
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// An element of the field declared by the surrounding context.
///
/// Prime-field values are canonical representatives in 0..p-1; rational
/// values are reduced fractions (BigRational keeps them canonical).
#[derive(Clone, PartialEq, Debug)]
pub enum Scalar {
    Prime(u64),
    Rational(BigRational),
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Prime(x) => write!(f, "{x}"),
            Scalar::Rational(x) => write!(f, "{x}"),
        }
    }
}

/// Dense exact matrix over a declared field.
#[derive(Clone, PartialEq, Debug)]
pub struct ExactMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl ExactMatrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        ExactMatrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_i64_rows(field: FieldSpec, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(field, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, field.from_i64(*v));
            }
        }
        m
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn mul(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        assert_eq!(self.field, other.field, "field mismatch");
        let f = self.field;
        let mut out = ExactMatrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if f.is_zero(b) {
                        continue;
                    }
                    let cur = out.get(i, j).clone();
                    out.set(i, j, f.add(&cur, &f.mul(a, b)));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        let f = self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for j in 0..self.cols {
                    let a = self.get(i, j);
                    if !f.is_zero(a) && !f.is_zero(&v[j]) {
                        acc = f.add(&acc, &f.mul(a, &v[j]));
                    }
                }
                acc
            })
            .collect()
    }

    /// Stacks `self` on top of `other` (same column count).
    pub fn vstack(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.cols);
        assert_eq!(self.field, other.field);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        ExactMatrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut out = ExactMatrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Rank over the declared field. Deterministic: first-nonzero pivoting
    /// for prime fields, Bareiss fraction-free elimination for rationals.
    pub fn rank(&self) -> usize {
        match self.field {
            FieldSpec::Prime(_) => self.rref().1.len(),
            FieldSpec::Rational => {
                let int_rows = self.to_integer_rows();
                bareiss_echelon(int_rows, self.cols).1.len()
            }
        }
    }

    /// Basis of the right null space; `M v = 0` for every returned `v`.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let f = self.field;
        let (rref, pivots) = self.rref();
        let pivot_of_col: BTreeMap<usize, usize> =
            pivots.iter().enumerate().map(|(r, &c)| (c, r)).collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_of_col.contains_key(&free) {
                continue;
            }
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (&c, &r) in &pivot_of_col {
                v[c] = f.neg(&rref[r][free]);
            }
            basis.push(v);
        }
        basis
    }

    /// Some solution of `M x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows, "rhs length mismatch");
        let f = self.field;
        // eliminate the augmented matrix [M | b]
        let mut aug = ExactMatrix::zeros(f, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (rref, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![f.zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = rref[r][self.cols].clone();
        }
        Some(x)
    }

    /// Reduced row echelon form; returns (rows, pivot columns).
    pub fn rref(&self) -> (Vec<Vec<Scalar>>, Vec<usize>) {
        match self.field {
            FieldSpec::Prime(_) => self.rref_gauss(),
            FieldSpec::Rational => self.rref_bareiss(),
        }
    }

    fn rref_gauss(&self) -> (Vec<Vec<Scalar>>, Vec<usize>) {
        let f = self.field;
        let mut rows: Vec<Vec<Scalar>> = (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..self.cols {
            let Some(pr) = (r..rows.len()).find(|&i| !f.is_zero(&rows[i][c])) else {
                continue;
            };
            rows.swap(r, pr);
            let inv = f.inv(&rows[r][c]);
            for j in c..self.cols {
                rows[r][j] = f.mul(&rows[r][j], &inv);
            }
            for i in 0..rows.len() {
                if i != r && !f.is_zero(&rows[i][c]) {
                    let factor = rows[i][c].clone();
                    for j in c..self.cols {
                        let t = f.mul(&factor, &rows[r][j]);
                        rows[i][j] = f.sub(&rows[i][j], &t);
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        rows.truncate(pivots.len());
        (rows, pivots)
    }

    fn to_integer_rows(&self) -> Vec<Vec<BigInt>> {
        // scale each row by the lcm of its denominators; preserves row
        // space, null space and solvability of homogeneous reductions
        (0..self.rows)
            .map(|i| {
                let mut lcm = BigInt::one();
                for j in 0..self.cols {
                    if let Scalar::Rational(x) = self.get(i, j) {
                        let d = x.denom();
                        lcm = &lcm / lcm.gcd(d) * d;
                    }
                }
                (0..self.cols)
                    .map(|j| match self.get(i, j) {
                        Scalar::Rational(x) => x.numer() * (&lcm / x.denom()),
                        Scalar::Prime(_) => panic!("scalar/field mismatch"),
                    })
                    .collect()
            })
            .collect()
    }

    fn rref_bareiss(&self) -> (Vec<Vec<Scalar>>, Vec<usize>) {
        let int_rows = self.to_integer_rows();
        let (ech, pivots) = bareiss_echelon(int_rows, self.cols);
        // normalize the integer echelon to a rational RREF; only
        // rank-many rows survive, so this back-elimination is cheap
        let mut rows: Vec<Vec<BigRational>> = ech
            .into_iter()
            .map(|r| r.into_iter().map(BigRational::from_integer).collect())
            .collect();
        for r in 0..pivots.len() {
            let c = pivots[r];
            let inv = rows[r][c].clone().recip();
            for j in c..self.cols {
                rows[r][j] = &rows[r][j] * &inv;
            }
            for i in 0..r {
                if !rows[i][c].is_zero() {
                    let factor = rows[i][c].clone();
                    for j in c..self.cols {
                        let t = &factor * &rows[r][j];
                        rows[i][j] = &rows[i][j] - t;
                    }
                }
            }
        }
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(Scalar::Rational).collect())
            .collect();
        (rows, pivots)
    }
}

/// Fraction-free (Bareiss) row echelon form of an integer matrix.
/// Returns the echelon rows (rank many) and the pivot columns.
fn bareiss_echelon(mut rows: Vec<Vec<BigInt>>, cols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0usize;
    for c in 0..cols {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let piv = rows[r][c].clone();
        for i in r + 1..rows.len() {
            let head = rows[i][c].clone();
            for j in c..cols {
                let num = &rows[i][j] * &piv - &head * &rows[r][j];
                rows[i][j] = num / &prev; // exact by Sylvester's identity
            }
        }
        prev = piv;
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(pivots.len());
    (rows, pivots)
}

/// A sparse vector: (index, coefficient) pairs sorted descending by index.
pub type SparseVec = Vec<(usize, Scalar)>;

/// Internal eliminator coefficient: machine-word arithmetic in the common
/// case. Rational values are reduced fractions in i64 (denominator > 0)
/// promoted to BigRational only when an i64 would overflow; on the
/// incidence-like matrices this crate produces, entries stay unit-sized and
/// the big path never triggers.
#[derive(Clone, Debug)]
enum Coef {
    P(u64),
    R(i64, i64),
    Big(BigRational),
}

impl Coef {
    fn is_zero(&self) -> bool {
        match self {
            Coef::P(x) => *x == 0,
            Coef::R(n, _) => *n == 0,
            Coef::Big(x) => x.is_zero(),
        }
    }

    fn to_scalar(&self) -> Scalar {
        match self {
            Coef::P(x) => Scalar::Prime(*x),
            Coef::R(n, d) => {
                Scalar::Rational(BigRational::new(BigInt::from(*n), BigInt::from(*d)))
            }
            Coef::Big(x) => Scalar::Rational(x.clone()),
        }
    }

    fn big(&self) -> BigRational {
        match self {
            Coef::P(_) => unreachable!("prime coefficient in rational context"),
            Coef::R(n, d) => BigRational::new(BigInt::from(*n), BigInt::from(*d)),
            Coef::Big(x) => x.clone(),
        }
    }
}

/// Reduced fraction from i128 parts, demoted to i64 when it fits.
fn coef_rat(num: i128, den: i128) -> Coef {
    debug_assert!(den != 0);
    if num == 0 {
        return Coef::R(0, 1);
    }
    let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
    let g = num.abs().gcd(&den);
    let (num, den) = (num / g, den / g);
    match (i64::try_from(num), i64::try_from(den)) {
        (Ok(n), Ok(d)) => Coef::R(n, d),
        _ => Coef::Big(BigRational::new(BigInt::from(num), BigInt::from(den))),
    }
}

fn coef_from_scalar(s: &Scalar) -> Coef {
    match s {
        Scalar::Prime(x) => Coef::P(*x),
        Scalar::Rational(x) => match (i64::try_from(x.numer()), i64::try_from(x.denom())) {
            (Ok(n), Ok(d)) => Coef::R(n, d),
            _ => Coef::Big(x.clone()),
        },
    }
}

fn coef_add(p: u64, a: &Coef, b: &Coef) -> Coef {
    match (a, b) {
        (Coef::P(x), Coef::P(y)) => Coef::P((x + y) % p),
        (Coef::R(n1, d1), Coef::R(n2, d2)) => coef_rat(
            *n1 as i128 * *d2 as i128 + *n2 as i128 * *d1 as i128,
            *d1 as i128 * *d2 as i128,
        ),
        _ => Coef::Big(a.big() + b.big()),
    }
}

fn coef_sub_mul(p: u64, a: &Coef, b: &Coef, c: &Coef) -> Coef {
    // a - b*c in one step: the inner loop of every cascade
    match (a, b, c) {
        (Coef::P(x), Coef::P(y), Coef::P(z)) => Coef::P((x + p - y * z % p) % p),
        (Coef::R(n1, d1), Coef::R(n2, d2), Coef::R(n3, d3)) => {
            let bn = *n2 as i128 * *n3 as i128;
            let bd = *d2 as i128 * *d3 as i128;
            coef_rat(
                *n1 as i128 * bd - bn * *d1 as i128,
                *d1 as i128 * bd,
            )
        }
        _ => Coef::Big(a.big() - b.big() * c.big()),
    }
}

fn coef_mul(p: u64, a: &Coef, b: &Coef) -> Coef {
    match (a, b) {
        (Coef::P(x), Coef::P(y)) => Coef::P(x * y % p),
        (Coef::R(n1, d1), Coef::R(n2, d2)) => {
            coef_rat(*n1 as i128 * *n2 as i128, *d1 as i128 * *d2 as i128)
        }
        _ => Coef::Big(a.big() * b.big()),
    }
}

fn coef_inv(p: u64, a: &Coef) -> Coef {
    match a {
        Coef::P(x) => {
            assert!(*x != 0, "inverse of zero");
            Coef::P(mod_pow(*x, p - 2, p))
        }
        Coef::R(n, d) => {
            assert!(*n != 0, "inverse of zero");
            coef_rat(*d as i128, *n as i128)
        }
        Coef::Big(x) => Coef::Big(x.recip()),
    }
}

/// Incremental sparse elimination with "largest index" pivoting.
///
/// Rows are kept triangular (each row's support lies at or below its pivot
/// index) and are not inter-reduced; on the incidence-like matrices this
/// crate produces, that keeps coefficients tiny. Deterministic.
///
/// Inserts run against a persistent dense scratch vector with a max-heap
/// of touched indices; a cascade therefore visits each index at most once
/// and costs O(nnz of the rows it hits), with no per-entry allocation.
pub struct SparseEliminator {
    field: FieldSpec,
    /// rows\[pivot\] = stored row (pivot entry first, coefficient 1)
    rows: Vec<Option<Vec<(usize, Coef)>>>,
    rank: usize,
    scratch: Vec<Coef>,
}

impl SparseEliminator {
    pub fn new(field: FieldSpec) -> Self {
        SparseEliminator {
            field,
            rows: Vec::new(),
            rank: 0,
            scratch: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.is_some())
            .map(|(i, _)| i)
    }

    pub fn is_pivot(&self, idx: usize) -> bool {
        self.rows.get(idx).map_or(false, |r| r.is_some())
    }

    fn c_zero(&self) -> Coef {
        match self.field {
            FieldSpec::Prime(_) => Coef::P(0),
            FieldSpec::Rational => Coef::R(0, 1),
        }
    }

    fn c_one(&self) -> Coef {
        match self.field {
            FieldSpec::Prime(_) => Coef::P(1),
            FieldSpec::Rational => Coef::R(1, 1),
        }
    }

    fn grow(&mut self, idx: usize) {
        if idx >= self.rows.len() {
            self.rows.resize_with(idx + 1, || None);
        }
        if idx >= self.scratch.len() {
            let z = self.c_zero();
            self.scratch.resize(idx + 1, z);
        }
    }

    /// Inserts a vector; returns true when it was independent of the
    /// rows seen so far (rank grew by one).
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let p = self.field.characteristic() as u64;
        let zero = self.c_zero();
        let mut heap: BinaryHeap<usize> = BinaryHeap::with_capacity(v.len());
        let mut touched: Vec<usize> = Vec::with_capacity(v.len());
        for (i, x) in &v {
            self.grow(*i);
            if self.scratch[*i].is_zero() {
                heap.push(*i);
                touched.push(*i);
            }
            self.scratch[*i] = coef_add(p, &self.scratch[*i], &coef_from_scalar(x));
        }
        let mut new_pivot = None;
        while let Some(idx) = heap.pop() {
            if self.scratch[idx].is_zero() {
                continue; // cancelled or duplicate heap entry
            }
            let coeff = std::mem::replace(&mut self.scratch[idx], zero.clone());
            match &self.rows[idx] {
                Some(row) => {
                    // cascade entries land strictly below idx, so each
                    // index is processed at most once per insert
                    for (i, x) in &row[1..] {
                        if self.scratch[*i].is_zero() {
                            heap.push(*i);
                            touched.push(*i);
                        }
                        self.scratch[*i] = coef_sub_mul(p, &self.scratch[*i], &coeff, x);
                    }
                }
                None => {
                    new_pivot = Some((idx, coeff));
                    break;
                }
            }
        }
        let Some((idx, coeff)) = new_pivot else {
            for i in touched {
                self.scratch[i] = zero.clone();
            }
            return false;
        };
        // normalize the leading coefficient to 1 and store
        let inv = coef_inv(p, &coeff);
        let mut stored: Vec<(usize, Coef)> = vec![(idx, self.c_one())];
        touched.sort_unstable_by(|a, b| b.cmp(a));
        for i in touched {
            if i < idx && !self.scratch[i].is_zero() {
                stored.push((i, coef_mul(p, &self.scratch[i], &inv)));
            }
            self.scratch[i] = zero.clone();
        }
        self.rows[idx] = Some(stored);
        self.rank += 1;
        true
    }

    /// Fully reduces a vector modulo the row space; the result is supported
    /// on non-pivot indices only and represents the same coset.
    pub fn reduce(&self, v: SparseVec) -> SparseVec {
        let p = self.field.characteristic() as u64;
        let mut work: BTreeMap<usize, Coef> = BTreeMap::new();
        for (i, x) in v {
            let x = coef_from_scalar(&x);
            if x.is_zero() {
                continue;
            }
            let entry = match work.remove(&i) {
                Some(prev) => coef_add(p, &prev, &x),
                None => x,
            };
            if !entry.is_zero() {
                work.insert(i, entry);
            }
        }
        let mut out: SparseVec = Vec::new();
        while let Some((&idx, _)) = work.last_key_value() {
            let coeff = work.remove(&idx).unwrap();
            match self.rows.get(idx).and_then(|r| r.as_ref()) {
                Some(row) => {
                    for (i, x) in &row[1..] {
                        let prev = work.remove(i).unwrap_or_else(|| self.c_zero());
                        let s = coef_sub_mul(p, &prev, &coeff, x);
                        if !s.is_zero() {
                            work.insert(*i, s);
                        }
                    }
                }
                None => out.push((idx, coeff.to_scalar())),
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> FieldSpec {
        FieldSpec::prime(2).unwrap()
    }

    fn q() -> FieldSpec {
        FieldSpec::Rational
    }

    #[test]
    fn field_spec_parsing() {
        assert_eq!(FieldSpec::parse("f2").unwrap(), FieldSpec::Prime(2));
        assert_eq!(FieldSpec::parse("fp:101").unwrap(), FieldSpec::Prime(101));
        assert_eq!(FieldSpec::parse("q").unwrap(), FieldSpec::Rational);
        assert!(FieldSpec::parse("fp:4").is_err());
        assert!(FieldSpec::parse("r").is_err());
        assert!(FieldSpec::prime(1).is_err());
    }

    #[test]
    fn prime_inverse() {
        let f = FieldSpec::prime(7).unwrap();
        for v in 1..7 {
            let x = f.from_i64(v);
            assert_eq!(f.mul(&x, &f.inv(&x)), f.one());
        }
    }

    #[test]
    fn rank_zero_matrix() {
        assert_eq!(ExactMatrix::zeros(q(), 3, 3).rank(), 0);
        assert_eq!(ExactMatrix::zeros(f2(), 3, 3).rank(), 0);
    }

    #[test]
    fn rank_identity() {
        assert_eq!(ExactMatrix::identity(f2(), 4).rank(), 4);
        assert_eq!(ExactMatrix::identity(q(), 4).rank(), 4);
    }

    #[test]
    fn rank_dependent_rows() {
        // [[1,2],[2,4]] has rank 1 over Q and over F_2 (where it is [[1,0],[0,0]])
        let m = ExactMatrix::from_i64_rows(q(), &[vec![1, 2], vec![2, 4]]);
        assert_eq!(m.rank(), 1);
        let m2 = ExactMatrix::from_i64_rows(f2(), &[vec![1, 2], vec![2, 4]]);
        assert_eq!(m2.rank(), 1);
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert!(ExactMatrix::identity(q(), 3).kernel_basis().is_empty());
    }

    #[test]
    fn kernel_of_ones_row_f2() {
        let m = ExactMatrix::from_i64_rows(f2(), &[vec![1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], vec![f2().one(), f2().one()]);
    }

    #[test]
    fn solve_identity_and_inconsistent() {
        let f = q();
        let id = ExactMatrix::identity(f, 3);
        let b = vec![f.from_i64(5), f.from_i64(-2), f.from_i64(7)];
        assert_eq!(id.solve(&b).unwrap(), b);

        let m = ExactMatrix::from_i64_rows(f, &[vec![1], vec![1]]);
        assert!(m.solve(&[f.from_i64(0), f.from_i64(1)]).is_none());
    }

    #[test]
    fn solve_verified_by_substitution() {
        let f = q();
        let m = ExactMatrix::from_i64_rows(f, &[vec![2, 1, 0], vec![0, 3, 1]]);
        let b = vec![f.from_i64(4), f.from_i64(9)];
        let x = m.solve(&b).unwrap();
        assert_eq!(m.mul_vec(&x), b);
    }

    #[test]
    fn rational_rref_with_fractions() {
        let f = q();
        let mut m = ExactMatrix::zeros(f, 2, 2);
        m.set(0, 0, Scalar::Rational(BigRational::new(1.into(), 2.into())));
        m.set(0, 1, f.from_i64(1));
        m.set(1, 0, f.from_i64(1));
        m.set(1, 1, f.from_i64(2));
        assert_eq!(m.rank(), 1);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(|x| f.is_zero(x)));
    }

    #[test]
    fn sparse_eliminator_matches_dense_rank() {
        let rows = vec![
            vec![1, 0, 2, 0],
            vec![0, 1, 1, 1],
            vec![1, 1, 3, 1],
            vec![0, 0, 0, 1],
        ];
        for field in [q(), f2(), FieldSpec::prime(3).unwrap()] {
            let dense = ExactMatrix::from_i64_rows(field, &rows);
            let mut elim = SparseEliminator::new(field);
            for row in &rows {
                let v: SparseVec = row
                    .iter()
                    .enumerate()
                    .rev()
                    .filter(|(_, &x)| x != 0)
                    .map(|(i, &x)| (i, field.from_i64(x)))
                    .collect();
                elim.insert(v);
            }
            assert_eq!(elim.rank(), dense.transpose().rank());
        }
    }

    #[test]
    fn sparse_reduce_is_coset_projection() {
        let f = q();
        let mut elim = SparseEliminator::new(f);
        // row space spanned by e2 - e0 (pivot 2)
        elim.insert(vec![(2, f.one()), (0, f.from_i64(-1))]);
        let red = elim.reduce(vec![(2, f.from_i64(3)), (1, f.one())]);
        // 3*e2 + e1 = 3*(e2 - e0) + e1 + 3*e0  ->  e1 + 3 e0 on non-pivots
        assert_eq!(red, vec![(1, f.one()), (0, f.from_i64(3))]);
    }
}

//! The graded Stanley-Reisner algebra of a complex: per-degree monomial
//! bases, Hilbert series in closed form, and multiplication matrices.
//!
//! Grading is algebraic: deg v_i = 1. A monomial is a basis element of
//! degree d exactly when its exponents sum to d and its support is a face.
//! Ghost vertices have {i} ∉ K, so v_i = 0 and they never support a basis
//! monomial.

use std::fmt;

use crate::complex::{Face, SimplicialComplex};
use crate::linalg::{ExactMatrix, FieldSpec};

/// Exponent vector over variables v_1..v_m.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(m: usize) -> Self {
        Monomial(vec![0; m])
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    /// Vertices with positive exponent, as a face candidate.
    pub fn support(&self) -> Face {
        Face::new(
            self.0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, _)| i + 1),
        )
        .unwrap()
    }

    /// Product with the variable v_i (1-based).
    pub fn times_var(&self, i: usize) -> Monomial {
        let mut e = self.0.clone();
        e[i - 1] += 1;
        Monomial(e)
    }

    /// Product of two monomials on the same variable count.
    pub fn times(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Squarefree monomial v_σ.
    pub fn from_face(m: usize, sigma: &Face) -> Monomial {
        let mut e = vec![0u32; m];
        for v in sigma.vertices() {
            e[v - 1] = 1;
        }
        Monomial(e)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&e| e == 0) {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "v{}", i + 1)?;
            } else {
                write!(f, "v{}^{}", i + 1, e)?;
            }
        }
        Ok(())
    }
}

/// Degree-d monomials with support a face of K, sorted by exponent vector.
pub fn monomial_basis(k: &SimplicialComplex, d: usize) -> Vec<Monomial> {
    let m = k.m();
    let mut out = Vec::new();
    // enumerate by support face, then compositions of d into positive parts
    for sigma in k.faces() {
        let s = sigma.order();
        if s > d || (d > 0 && s == 0) {
            continue;
        }
        if d == 0 {
            out.push(Monomial::one(m));
            continue;
        }
        compositions(d, s, &mut |parts| {
            let mut e = vec![0u32; m];
            for (v, &p) in sigma.vertices().iter().zip(parts) {
                e[v - 1] = p as u32;
            }
            out.push(Monomial(e));
        });
    }
    // lex with v1 heaviest: descending exponent-vector order puts v1^d first
    out.sort_by(|a, b| b.cmp(a));
    out
}

/// Position of a monomial in the canonical basis order.
pub fn basis_search(basis: &[Monomial], mono: &Monomial) -> Option<usize> {
    basis.binary_search_by(|probe| mono.cmp(probe)).ok()
}

/// Calls f on every way to write total as `parts` positive integers.
fn compositions(total: usize, parts: usize, f: &mut impl FnMut(&[usize])) {
    let mut buf = vec![0usize; parts];
    fn rec(total: usize, idx: usize, buf: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        let remaining_slots = buf.len() - idx;
        if remaining_slots == 1 {
            buf[idx] = total;
            f(buf);
            return;
        }
        for first in 1..=(total - (remaining_slots - 1)) {
            buf[idx] = first;
            rec(total - first, idx + 1, buf, f);
        }
    }
    rec(total, 0, &mut buf, f);
}

/// Hilbert series numerator over (1−t)^n; the denominator exponent is kept
/// at n even when the fraction is reducible, because the freeness test
/// needs the unreduced form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HilbertSeries {
    pub numerator: Vec<i64>,
    pub denom_pow: usize,
}

impl HilbertSeries {
    /// Coefficients of the power-series expansion up to degree `upto`.
    pub fn expand(&self, upto: usize) -> Vec<i64> {
        // multiply numerator by (1−t)^{-n} = Σ C(n-1+k, k) t^k
        let mut out = vec![0i64; upto + 1];
        for (i, &c) in self.numerator.iter().enumerate() {
            if c == 0 || i > upto {
                continue;
            }
            if self.denom_pow == 0 {
                out[i] += c;
                continue;
            }
            for j in 0..=(upto - i) {
                out[i + j] += c * binomial(self.denom_pow - 1 + j, j);
            }
        }
        out
    }

    /// Numerator of the product with another series (denominators add).
    pub fn mul(&self, other: &HilbertSeries) -> HilbertSeries {
        HilbertSeries {
            numerator: poly_mul(&self.numerator, &other.numerator),
            denom_pow: self.denom_pow + other.denom_pow,
        }
    }
}

fn binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1i64;
    for i in 0..k {
        acc = acc * (n - i) as i64 / (i + 1) as i64;
    }
    acc
}

pub fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn poly_add(a: &[i64], b: &[i64]) -> Vec<i64> {
    let len = a.len().max(b.len());
    (0..len)
        .map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0))
        .collect()
}

/// Drops trailing zeros so polynomial equality is representation-free.
pub fn poly_trim(mut a: Vec<i64>) -> Vec<i64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Σ_{σ∈K} t^{|σ|} (1−t)^{n−|σ|} over (1−t)^n.
pub fn hilbert_series(k: &SimplicialComplex) -> HilbertSeries {
    let n = k.n();
    let mut numerator = vec![0i64; n + 1];
    for sigma in k.faces() {
        let s = sigma.order();
        // t^s (1-t)^{n-s}
        for j in 0..=(n - s) {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            numerator[s + j] += sign * binomial(n - s, j);
        }
    }
    HilbertSeries {
        numerator: poly_trim(numerator),
        denom_pow: n,
    }
}

/// Matrix of multiplication by v_i from degree d to degree d+1, in the
/// canonical monomial bases. Columns whose product leaves K map to zero.
pub fn multiplication_matrix(
    k: &SimplicialComplex,
    i: usize,
    d: usize,
    field: FieldSpec,
) -> ExactMatrix {
    assert!(i >= 1 && i <= k.m(), "vertex index out of range");
    let src = monomial_basis(k, d);
    let dst = monomial_basis(k, d + 1);
    let mut mat = ExactMatrix::zeros(field, dst.len(), src.len());
    for (col, mono) in src.iter().enumerate() {
        let prod = mono.times_var(i);
        if let Some(row) = basis_search(&dst, &prod) {
            mat.set(row, col, field.one());
        }
    }
    mat
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::SimplicialComplex;

    fn boundary_triangle() -> SimplicialComplex {
        SimplicialComplex::from_facets(3, [vec![1, 2], vec![1, 3], vec![2, 3]]).unwrap()
    }

    #[test]
    fn basis_degree_zero_is_one() {
        let k = boundary_triangle();
        assert_eq!(monomial_basis(&k, 0), vec![Monomial::one(3)]);
    }

    #[test]
    fn triangle_boundary_basis_counts() {
        let k = boundary_triangle();
        assert_eq!(monomial_basis(&k, 1).len(), 3);
        assert_eq!(monomial_basis(&k, 2).len(), 6); // all but v1v2v3 first bites at d=3
        assert_eq!(monomial_basis(&k, 3).len(), 9); // 10 monomials minus v1v2v3
    }

    #[test]
    fn hilbert_series_triangle_boundary() {
        let h = hilbert_series(&boundary_triangle());
        assert_eq!(h.numerator, vec![1, 1, 1]);
        assert_eq!(h.denom_pow, 2);
        assert_eq!(h.expand(5), vec![1, 3, 6, 9, 12, 15]);
    }

    #[test]
    fn hilbert_series_full_simplex() {
        let h = hilbert_series(&SimplicialComplex::simplex(2));
        assert_eq!(h.numerator, vec![1]);
        assert_eq!(h.denom_pow, 2);
    }

    #[test]
    fn hilbert_series_three_points() {
        let k = SimplicialComplex::from_facets(3, [vec![1], vec![2], vec![3]]).unwrap();
        let h = hilbert_series(&k);
        assert_eq!(h.numerator, vec![1, 2]);
        assert_eq!(h.denom_pow, 1);
        assert_eq!(h.expand(4), vec![1, 3, 3, 3, 3]);
    }

    #[test]
    fn hilbert_expansion_matches_basis_counts() {
        let corpus = [
            boundary_triangle(),
            SimplicialComplex::simplex(3),
            SimplicialComplex::from_facets(4, [vec![1, 2], vec![3, 4]]).unwrap(),
            SimplicialComplex::from_facets(2, [vec![1]]).unwrap(), // ghost vertex
            SimplicialComplex::empty(2),
        ];
        for k in corpus {
            let h = hilbert_series(&k);
            let coeffs = h.expand(8);
            for d in 0..=8 {
                assert_eq!(
                    coeffs[d] as usize,
                    monomial_basis(&k, d).len(),
                    "degree {d} on {k:?}"
                );
            }
        }
    }

    #[test]
    fn hilbert_series_multiplicative_over_join() {
        let a = boundary_triangle();
        let b = SimplicialComplex::from_facets(2, [vec![1], vec![2]]).unwrap();
        let joined = a.join(&b);
        let hj = hilbert_series(&joined);
        let hprod = hilbert_series(&a).mul(&hilbert_series(&b));
        assert_eq!(poly_trim(hj.numerator.clone()), poly_trim(hprod.numerator.clone()));
        assert_eq!(hj.denom_pow, hprod.denom_pow);
    }

    #[test]
    fn short_exact_sequence_hilbert_identity() {
        // Hilb(F(K)) = Hilb(F(K_i)) + t·Hilb(F(st({i})))
        let corpus = [
            boundary_triangle(),
            SimplicialComplex::simplex(3),
            SimplicialComplex::from_facets(4, [vec![1, 2], vec![3, 4]]).unwrap(),
        ];
        for k in corpus {
            let n = k.n();
            for i in k.used_vertices() {
                let ki = k.full_subcomplex(&[i]).unwrap();
                let st = k.star(&Face::new([i]).unwrap()).unwrap();
                let lift = |h: &HilbertSeries, shift: usize| {
                    // rescale to common denominator (1-t)^n and shift by t^shift
                    let mut p = h.numerator.clone();
                    for _ in h.denom_pow..n {
                        p = poly_mul(&p, &[1, -1]);
                    }
                    let mut shifted = vec![0i64; shift];
                    shifted.extend(p);
                    shifted
                };
                let lhs = poly_trim(lift(&hilbert_series(&k), 0));
                let rhs = poly_trim(poly_add(
                    &lift(&hilbert_series(&ki), 0),
                    &lift(&hilbert_series(&st), 1),
                ));
                assert_eq!(lhs, rhs, "vertex {i} of {k:?}");
            }
        }
    }

    #[test]
    fn multiplication_matrix_degree_zero() {
        let f = FieldSpec::Rational;
        let m = multiplication_matrix(&boundary_triangle(), 1, 0, f);
        assert_eq!((m.rows(), m.cols()), (3, 1));
        assert_eq!(*m.get(0, 0), f.one()); // v1 is first in lex order
        assert!(f.is_zero(m.get(1, 0)));
    }

    #[test]
    fn multiplication_by_ghost_vertex_is_zero() {
        let k = SimplicialComplex::from_facets(2, [vec![1]]).unwrap();
        let f = FieldSpec::Rational;
        let m = multiplication_matrix(&k, 2, 1, f);
        assert!(m.is_zero());
    }

    #[test]
    fn multiplication_matrix_rank_drop() {
        // on ∂Δ² at d=2, v1·(v2v3) = v1v2v3 = 0, the only collapse
        let f = FieldSpec::Rational;
        let m = multiplication_matrix(&boundary_triangle(), 1, 2, f);
        assert_eq!((m.rows(), m.cols()), (9, 6));
        assert_eq!(m.rank(), 5);
    }

    #[test]
    fn multiplication_matrices_commute() {
        let k = boundary_triangle();
        let f = FieldSpec::prime(3).unwrap();
        for d in 0..4 {
            for i in 1..=3 {
                for j in 1..=3 {
                    let a = multiplication_matrix(&k, j, d + 1, f)
                        .mul(&multiplication_matrix(&k, i, d, f));
                    let b = multiplication_matrix(&k, i, d + 1, f)
                        .mul(&multiplication_matrix(&k, j, d, f));
                    assert_eq!(a, b);
                }
            }
        }
    }
}

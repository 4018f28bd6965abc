//! Higher derived limits over the face poset, via the normalized cochain
//! complex on strictly increasing face chains.
//!
//! One chain enumeration serves two indexing categories. A functor with
//! `Direction::Descending` has its value at the smallest face of a chain
//! and maps pointing from larger to smaller faces (functors on the poset
//! of all faces including ∅, e.g. the atomic functor). `Ascending` puts
//! the value at the largest face with maps along inclusions (functors on
//! the opposite category of nonempty faces, e.g. the star functor). The
//! two differentials differ only in which omission carries the functor map
//! and in the sign bookkeeping; δ² = 0 is asserted for every built complex.

use std::collections::BTreeMap;

use crate::complex::{Face, SimplicialComplex};
use crate::face_ring::monomial_basis;
use crate::linalg::{ExactMatrix, FieldSpec, SparseEliminator, SparseVec};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Direction {
    /// value at σ_r of a chain; cover maps value(σ) → value(τ) for σ ⊂ τ
    Ascending,
    /// value at σ_0 of a chain; cover maps value(τ) → value(σ) for σ ⊂ τ
    Descending,
}

/// A functor on the face poset with finite-dimensional values, given by
/// value dimensions per face and matrices on covering pairs.
pub struct PosetFunctor {
    pub field: FieldSpec,
    pub direction: Direction,
    pub includes_empty: bool,
    dims: BTreeMap<Face, usize>,
    /// key (σ, τ) with τ = σ plus one vertex; matrix direction per `direction`
    covers: BTreeMap<(Face, Face), ExactMatrix>,
}

impl PosetFunctor {
    pub fn value_dim(&self, sigma: &Face) -> usize {
        self.dims.get(sigma).copied().unwrap_or(0)
    }

    /// Composed map along σ ⊆ τ, adding vertices of τ∖σ in ascending
    /// order. Functoriality (path independence) is checked by `validate`.
    pub fn map(&self, sigma: &Face, tau: &Face) -> ExactMatrix {
        assert!(sigma.is_subset_of(tau));
        let f = self.field;
        let mut path = vec![sigma.clone()];
        let mut cur = sigma.clone();
        for v in tau.minus(sigma).vertices() {
            cur = cur.union(&Face::new([*v]).unwrap()).unwrap();
            path.push(cur.clone());
        }
        let mut mat = ExactMatrix::identity(
            f,
            match self.direction {
                Direction::Ascending => self.value_dim(sigma),
                Direction::Descending => self.value_dim(tau),
            },
        );
        match self.direction {
            Direction::Ascending => {
                for w in path.windows(2) {
                    let step = &self.covers[&(w[0].clone(), w[1].clone())];
                    mat = step.mul(&mat);
                }
            }
            Direction::Descending => {
                for w in path.windows(2).rev() {
                    let step = &self.covers[&(w[0].clone(), w[1].clone())];
                    mat = step.mul(&mat);
                }
            }
        }
        mat
    }

    /// Asserts that the two cover paths around every square agree.
    pub fn validate(&self, k: &SimplicialComplex) {
        for tau in k.faces() {
            if tau.order() < 2 {
                continue;
            }
            for a in 0..tau.order() {
                for b in (a + 1)..tau.order() {
                    let sigma = tau.without_index(a).without_index(b - 1);
                    if sigma.is_empty() && !self.includes_empty {
                        continue;
                    }
                    let mid1 = tau.without_index(a);
                    let mid2 = tau.without_index(b);
                    let (p1, p2) = match self.direction {
                        Direction::Ascending => (
                            self.covers[&(mid1.clone(), tau.clone())]
                                .mul(&self.covers[&(sigma.clone(), mid1.clone())]),
                            self.covers[&(mid2.clone(), tau.clone())]
                                .mul(&self.covers[&(sigma.clone(), mid2.clone())]),
                        ),
                        Direction::Descending => (
                            self.covers[&(sigma.clone(), mid1.clone())]
                                .mul(&self.covers[&(mid1.clone(), tau.clone())]),
                            self.covers[&(sigma.clone(), mid2.clone())]
                                .mul(&self.covers[&(mid2.clone(), tau.clone())]),
                        ),
                    };
                    assert_eq!(p1, p2, "functoriality violated at {sigma} ⊂ {tau}");
                }
            }
        }
    }
}

/// Cochain complex on strictly increasing face chains; C^r is the direct
/// sum over chains of r+1 objects of the functor value at the chain's
/// value-carrying end.
pub struct NormalizedCochainComplex {
    pub field: FieldSpec,
    /// chains\[r\] lists the length-(r+1) chains, canonical order
    pub chains: Vec<Vec<Vec<Face>>>,
    /// total dimension of C^r
    pub totals: Vec<usize>,
    /// δ_r : C^r → C^{r+1} as sparse columns
    deltas: Vec<Vec<SparseVec>>,
}

pub fn build_normalized_complex(
    k: &SimplicialComplex,
    phi: &PosetFunctor,
) -> NormalizedCochainComplex {
    phi.validate(k);
    let f = phi.field;
    let objects: Vec<Face> = k
        .faces()
        .iter()
        .filter(|s| phi.includes_empty || !s.is_empty())
        .cloned()
        .collect();

    // enumerate strictly increasing chains, grouped by length
    let mut chains: Vec<Vec<Vec<Face>>> = Vec::new();
    let mut frontier: Vec<Vec<Face>> = objects.iter().map(|o| vec![o.clone()]).collect();
    while !frontier.is_empty() {
        chains.push(frontier.clone());
        let mut next = Vec::new();
        for chain in &frontier {
            let last = chain.last().unwrap();
            for o in &objects {
                if o.order() > last.order() && last.is_subset_of(o) {
                    let mut c = chain.clone();
                    c.push(o.clone());
                    next.push(c);
                }
            }
        }
        frontier = next;
    }

    let value_face = |chain: &[Face]| -> Face {
        match phi.direction {
            Direction::Ascending => chain.last().unwrap().clone(),
            Direction::Descending => chain.first().unwrap().clone(),
        }
    };

    // block offsets per degree
    let mut offsets: Vec<BTreeMap<Vec<Face>, usize>> = Vec::new();
    let mut totals = Vec::new();
    for level in &chains {
        let mut map = BTreeMap::new();
        let mut off = 0usize;
        for chain in level {
            map.insert(chain.clone(), off);
            off += phi.value_dim(&value_face(chain));
        }
        offsets.push(map);
        totals.push(off);
    }

    let mut deltas: Vec<Vec<SparseVec>> = Vec::new();
    for r in 0..chains.len().saturating_sub(1) {
        let mut cols: Vec<SparseVec> = vec![Vec::new(); totals[r]];
        for target in &chains[r + 1] {
            let t_off = offsets[r + 1][target];
            let len = target.len(); // r + 2
            for omit in 0..len {
                let mut source = target.clone();
                source.remove(omit);
                let s_off = offsets[r][&source];
                // which omission carries the functor map, and its sign
                let (is_map_term, sign) = match phi.direction {
                    Direction::Descending => (omit == 0, if omit % 2 == 0 { 1 } else { -1 }),
                    Direction::Ascending => {
                        let j = len - 1 - omit; // distance from the top
                        (omit == len - 1, if j % 2 == 0 { 1 } else { -1 })
                    }
                };
                let sgn = f.from_i64(sign);
                if is_map_term {
                    let (small, big) = match phi.direction {
                        Direction::Descending => (&target[0], &target[1]),
                        Direction::Ascending => (&target[len - 2], &target[len - 1]),
                    };
                    let mat = phi.map(small, big);
                    for col in 0..mat.cols() {
                        for row in 0..mat.rows() {
                            let e = mat.get(row, col);
                            if !f.is_zero(e) {
                                cols[s_off + col].push((t_off + row, f.mul(&sgn, e)));
                            }
                        }
                    }
                } else {
                    let dim = phi.value_dim(&value_face(&source));
                    for a in 0..dim {
                        cols[s_off + a].push((t_off + a, sgn.clone()));
                    }
                }
            }
        }
        deltas.push(cols);
    }

    let cx = NormalizedCochainComplex {
        field: f,
        chains,
        totals,
        deltas,
    };
    cx.assert_square_zero();
    cx
}

impl NormalizedCochainComplex {
    fn assert_square_zero(&self) {
        let f = self.field;
        for r in 0..self.deltas.len().saturating_sub(1) {
            for col in &self.deltas[r] {
                let mut acc: BTreeMap<usize, crate::linalg::Scalar> = BTreeMap::new();
                for (i, a) in col {
                    for (i2, b) in &self.deltas[r + 1][*i] {
                        let term = f.mul(a, b);
                        match acc.remove(i2) {
                            Some(prev) => {
                                let s = f.add(&prev, &term);
                                if !f.is_zero(&s) {
                                    acc.insert(*i2, s);
                                }
                            }
                            None => {
                                if !f.is_zero(&term) {
                                    acc.insert(*i2, term);
                                }
                            }
                        }
                    }
                }
                assert!(acc.is_empty(), "δ² ≠ 0 at degree {r}");
            }
        }
    }

    fn delta_rank(&self, r: usize) -> usize {
        match self.deltas.get(r) {
            None => 0,
            Some(cols) => {
                let mut elim = SparseEliminator::new(self.field);
                for col in cols {
                    elim.insert(col.clone());
                }
                elim.rank()
            }
        }
    }
}

/// dims\[i\] = dim lim^i = dim H^i(C^*, δ).
pub fn higher_limit_dims(cx: &NormalizedCochainComplex) -> Vec<usize> {
    (0..cx.totals.len())
        .map(|i| {
            let out = cx.delta_rank(i);
            let inc = if i > 0 { cx.delta_rank(i - 1) } else { 0 };
            cx.totals[i] - out - inc
        })
        .collect()
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CanonicalFunctor {
    /// constant value on nonempty faces
    Constant(usize),
    /// value concentrated at ∅
    Atomic(usize),
    /// σ ↦ degree-d part of the face ring of st(σ)
    Star(usize),
}

pub fn canonical_functor(
    k: &SimplicialComplex,
    field: FieldSpec,
    which: CanonicalFunctor,
) -> PosetFunctor {
    let mut dims = BTreeMap::new();
    let mut covers = BTreeMap::new();
    match which {
        CanonicalFunctor::Constant(d) => {
            for sigma in k.faces() {
                if sigma.is_empty() {
                    continue;
                }
                dims.insert(sigma.clone(), d);
            }
            for (sigma, tau) in covering_pairs(k, false) {
                covers.insert((sigma, tau), ExactMatrix::identity(field, d));
            }
            PosetFunctor {
                field,
                direction: Direction::Ascending,
                includes_empty: false,
                dims,
                covers,
            }
        }
        CanonicalFunctor::Atomic(d) => {
            for sigma in k.faces() {
                dims.insert(sigma.clone(), if sigma.is_empty() { d } else { 0 });
            }
            for (sigma, tau) in covering_pairs(k, true) {
                let rows = if sigma.is_empty() { d } else { 0 };
                covers.insert((sigma, tau), ExactMatrix::zeros(field, rows, 0));
            }
            PosetFunctor {
                field,
                direction: Direction::Descending,
                includes_empty: true,
                dims,
                covers,
            }
        }
        CanonicalFunctor::Star(d) => {
            let mut bases = BTreeMap::new();
            for sigma in k.faces() {
                if sigma.is_empty() {
                    continue;
                }
                let st = k.star(sigma).unwrap();
                let basis = monomial_basis(&st, d);
                dims.insert(sigma.clone(), basis.len());
                bases.insert(sigma.clone(), (st, basis));
            }
            for (sigma, tau) in covering_pairs(k, false) {
                let (_, src) = &bases[&sigma];
                let (st_tau, dst) = &bases[&tau];
                // restriction F(st(σ)) → F(st(τ)): keep monomials whose
                // support survives in st(τ)
                let mut mat = ExactMatrix::zeros(field, dst.len(), src.len());
                for (col, mono) in src.iter().enumerate() {
                    if st_tau.contains(&mono.support()) {
                        let row = crate::face_ring::basis_search(dst, mono)
                            .expect("surviving monomial in target basis");
                        mat.set(row, col, field.one());
                    }
                }
                covers.insert((sigma, tau), mat);
            }
            PosetFunctor {
                field,
                direction: Direction::Ascending,
                includes_empty: false,
                dims,
                covers,
            }
        }
    }
}

fn covering_pairs(k: &SimplicialComplex, with_empty: bool) -> Vec<(Face, Face)> {
    let mut out = Vec::new();
    for tau in k.faces() {
        if tau.order() == 0 {
            continue;
        }
        for j in 0..tau.order() {
            let sigma = tau.without_index(j);
            if sigma.is_empty() && !with_empty {
                continue;
            }
            out.push((sigma, tau.clone()));
        }
    }
    out
}

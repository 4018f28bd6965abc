//! Finite abstract simplicial complexes on the vertex set {1..m}.
//!
//! A complex always contains the empty face; the empty complex `{∅}` is a
//! legal value but a complex with no faces at all is rejected. Vertex
//! labels may be "ghosts": `i` with `{i}` not a face, left behind by links
//! and full subcomplexes so that labels stay stable across derived
//! complexes.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ComplexError {
    #[error("vertex label {0} out of range 1..={1}")]
    LabelOutOfRange(usize, usize),
    #[error("duplicate vertex {0} within a facet")]
    DuplicateVertex(usize),
    #[error("face {0:?} is not a face of the complex")]
    NotAFace(Vec<usize>),
    #[error("{0:?} is not a subcomplex")]
    NotASubcomplex(Vec<usize>),
}

/// A face: strictly increasing vertex labels. The empty vector is the
/// empty face ∅.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Face(Vec<usize>);

impl Face {
    pub fn empty() -> Self {
        Face(Vec::new())
    }

    /// Builds a face from arbitrary labels; sorts and rejects duplicates.
    pub fn new(vertices: impl IntoIterator<Item = usize>) -> Result<Self, ComplexError> {
        let mut v: Vec<usize> = vertices.into_iter().collect();
        v.sort_unstable();
        for w in v.windows(2) {
            if w[0] == w[1] {
                return Err(ComplexError::DuplicateVertex(w[0]));
            }
        }
        Ok(Face(v))
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    /// Number of vertices (the "order" of the face); dimension is order − 1.
    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_subset_of(&self, other: &Face) -> bool {
        self.0.iter().all(|v| other.contains(*v))
    }

    pub fn union(&self, other: &Face) -> Option<Face> {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        v.sort_unstable();
        if v.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some(Face(v))
    }

    /// Union allowing overlap (σ∪τ as sets).
    pub fn union_sets(&self, other: &Face) -> Face {
        let s: BTreeSet<usize> = self.0.iter().chain(other.0.iter()).copied().collect();
        Face(s.into_iter().collect())
    }

    pub fn minus(&self, other: &Face) -> Face {
        Face(
            self.0
                .iter()
                .filter(|v| !other.contains(**v))
                .copied()
                .collect(),
        )
    }

    /// The face with the k-th vertex (0-based) removed.
    pub fn without_index(&self, k: usize) -> Face {
        let mut v = self.0.clone();
        v.remove(k);
        Face(v)
    }

    /// All subsets, including ∅ and self.
    pub fn subsets(&self) -> Vec<Face> {
        let n = self.0.len();
        (0..1u32 << n)
            .map(|mask| {
                Face(
                    (0..n)
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| self.0[i])
                        .collect(),
                )
            })
            .collect()
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "{{}}");
        }
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Canonical face order: by (order, lexicographic). All face lists in this
/// crate are sorted this way, which makes every downstream basis and matrix
/// deterministic.
fn canonical_cmp(a: &Face, b: &Face) -> std::cmp::Ordering {
    a.order().cmp(&b.order()).then_with(|| a.0.cmp(&b.0))
}

/// f-vector: counts[k] = number of faces of order k, so counts[0] = 1 (∅).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FVector(pub Vec<usize>);

/// Summary returned by [`SimplicialComplex::profile`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Profile {
    pub dim: i64,
    pub n: usize,
    pub f_vector: FVector,
    pub is_pure: bool,
    pub used_vertices: Vec<usize>,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SimplicialComplex {
    m: usize,
    // sorted in canonical order, always starts with ∅, downward closed
    faces: Vec<Face>,
}

impl SimplicialComplex {
    /// Downward closure of the given facets, plus ∅.
    pub fn from_facets<I, F>(m: usize, facets: I) -> Result<Self, ComplexError>
    where
        I: IntoIterator<Item = F>,
        F: IntoIterator<Item = usize>,
    {
        let mut set: BTreeSet<Face> = BTreeSet::new();
        set.insert(Face::empty());
        for facet in facets {
            let face = Face::new(facet)?;
            for v in face.vertices() {
                if *v < 1 || *v > m {
                    return Err(ComplexError::LabelOutOfRange(*v, m));
                }
            }
            for sub in face.subsets() {
                set.insert(sub);
            }
        }
        Ok(Self::from_face_set(m, set))
    }

    fn from_face_set(m: usize, set: BTreeSet<Face>) -> Self {
        let mut faces: Vec<Face> = set.into_iter().collect();
        faces.sort_by(canonical_cmp);
        debug_assert!(faces.first().is_some_and(Face::is_empty));
        SimplicialComplex { m, faces }
    }

    /// The empty complex {∅} on m labels.
    pub fn empty(m: usize) -> Self {
        SimplicialComplex {
            m,
            faces: vec![Face::empty()],
        }
    }

    /// The full simplex on all of 1..m.
    pub fn simplex(m: usize) -> Self {
        Self::from_facets(m, [(1..=m).collect::<Vec<_>>()]).unwrap()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn contains(&self, face: &Face) -> bool {
        self.faces
            .binary_search_by(|f| canonical_cmp(f, face))
            .is_ok()
    }

    /// dim K = max face order − 1; −1 for {∅}.
    pub fn dim(&self) -> i64 {
        self.faces.last().unwrap().order() as i64 - 1
    }

    /// n = dim K + 1, the order of the largest faces.
    pub fn n(&self) -> usize {
        self.faces.last().unwrap().order()
    }

    /// Labels i with {i} ∈ K.
    pub fn used_vertices(&self) -> Vec<usize> {
        self.faces
            .iter()
            .filter(|f| f.order() == 1)
            .map(|f| f.vertices()[0])
            .collect()
    }

    /// Faces contained in no strictly larger face.
    pub fn facets(&self) -> Vec<Face> {
        self.faces
            .iter()
            .filter(|f| {
                !self
                    .faces
                    .iter()
                    .any(|g| g.order() > f.order() && f.is_subset_of(g))
            })
            .cloned()
            .collect()
    }

    pub fn f_vector(&self) -> FVector {
        let mut counts = vec![0usize; self.n() + 1];
        for f in &self.faces {
            counts[f.order()] += 1;
        }
        FVector(counts)
    }

    pub fn profile(&self) -> Profile {
        let n = self.n();
        Profile {
            dim: self.dim(),
            n,
            f_vector: self.f_vector(),
            is_pure: self.facets().iter().all(|f| f.order() == n),
            used_vertices: self.used_vertices(),
        }
    }

    /// link_K(σ) = {τ∖σ : σ ⊂ τ ∈ K}, on the same labels.
    pub fn link(&self, sigma: &Face) -> Result<SimplicialComplex, ComplexError> {
        if !self.contains(sigma) {
            return Err(ComplexError::NotAFace(sigma.vertices().to_vec()));
        }
        let set: BTreeSet<Face> = self
            .faces
            .iter()
            .filter(|tau| sigma.is_subset_of(tau))
            .map(|tau| tau.minus(sigma))
            .collect();
        Ok(Self::from_face_set(self.m, set))
    }

    /// st_K(σ) = {τ ∈ K : σ∪τ ∈ K}.
    pub fn star(&self, sigma: &Face) -> Result<SimplicialComplex, ComplexError> {
        if !self.contains(sigma) {
            return Err(ComplexError::NotAFace(sigma.vertices().to_vec()));
        }
        let set: BTreeSet<Face> = self
            .faces
            .iter()
            .filter(|tau| self.contains(&sigma.union_sets(tau)))
            .cloned()
            .collect();
        Ok(Self::from_face_set(self.m, set))
    }

    /// K * L on m_K + m_L labels; L's labels are shifted by m_K.
    pub fn join(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let shift = self.m;
        let mut set: BTreeSet<Face> = BTreeSet::new();
        for sigma in &self.faces {
            for tau in &other.faces {
                let mut v = sigma.vertices().to_vec();
                v.extend(tau.vertices().iter().map(|x| x + shift));
                set.insert(Face(v));
            }
        }
        Self::from_face_set(self.m + other.m, set)
    }

    /// K_τ: faces avoiding every vertex of τ; same labels (removed vertices
    /// become ghosts).
    pub fn full_subcomplex(&self, tau: &[usize]) -> Result<SimplicialComplex, ComplexError> {
        for v in tau {
            if *v < 1 || *v > self.m {
                return Err(ComplexError::LabelOutOfRange(*v, self.m));
            }
        }
        let set: BTreeSet<Face> = self
            .faces
            .iter()
            .filter(|f| !tau.iter().any(|v| f.contains(*v)))
            .cloned()
            .collect();
        Ok(Self::from_face_set(self.m, set))
    }

    /// Minimal non-faces: μ ∉ K with every proper subset a face. These
    /// generate the Stanley-Reisner ideal. A ghost vertex i contributes {i}.
    pub fn minimal_missing_faces(&self) -> Vec<Face> {
        let mut out = Vec::new();
        // candidates: unions {v} ∪ σ over faces σ and vertices v, plus all
        // singletons; a minimal non-face μ has every facet of μ a face, so
        // μ = σ ∪ {v} for a face σ of order |μ|-1
        let mut candidates: BTreeSet<Face> = BTreeSet::new();
        for v in 1..=self.m {
            candidates.insert(Face(vec![v]));
        }
        for sigma in &self.faces {
            for v in 1..=self.m {
                if !sigma.contains(v) {
                    let mut w = sigma.vertices().to_vec();
                    w.push(v);
                    w.sort_unstable();
                    candidates.insert(Face(w));
                }
            }
        }
        for mu in candidates {
            if self.contains(&mu) {
                continue;
            }
            let all_proper_in = (0..mu.order()).all(|k| self.contains(&mu.without_index(k)));
            if all_proper_in {
                out.push(mu);
            }
        }
        out.sort_by(canonical_cmp);
        out
    }

    /// K = Δ(apex) * L with L reduced; apex = cone points {i : st({i}) = K}.
    pub fn core_decomposition(&self) -> CoreDecomposition {
        let apex: Vec<usize> = self
            .used_vertices()
            .into_iter()
            .filter(|&i| {
                let s = Face(vec![i]);
                self.star(&s).unwrap() == *self
            })
            .collect();
        let core = self.full_subcomplex(&apex).unwrap();
        CoreDecomposition {
            is_reduced: apex.is_empty(),
            apex,
            core,
        }
    }

    /// Relabels to dense labels 1..m′ keeping only used vertices. Returns
    /// the compacted complex and the map new label -> old label.
    pub fn compact(&self) -> (SimplicialComplex, Vec<usize>) {
        let used = self.used_vertices();
        let new_of_old: std::collections::BTreeMap<usize, usize> = used
            .iter()
            .enumerate()
            .map(|(idx, &old)| (old, idx + 1))
            .collect();
        let set: BTreeSet<Face> = self
            .faces
            .iter()
            .map(|f| Face(f.vertices().iter().map(|v| new_of_old[v]).collect()))
            .collect();
        (Self::from_face_set(used.len(), set), used)
    }
}

/// Result of [`SimplicialComplex::core_decomposition`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoreDecomposition {
    pub apex: Vec<usize>,
    pub core: SimplicialComplex,
    pub is_reduced: bool,
}

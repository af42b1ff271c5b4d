//! Finite simplicial complexes stored by their facets.

mod cm;
mod homology;
mod shelling;
mod vd;

pub use cm::{depth, is_cohen_macaulay, CmFailure};
pub use homology::{rank, reduced_betti, BettiNumbers};
pub use shelling::{find_shelling, shelling_from_vd, verify_shelling, ShellingOrder};
pub use vd::{is_vd_bruteforce, validate_certificate, vd_certificate_bruteforce, VdCertificate};

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::poset::{Poset, PosetError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error("{0:?} is not a face")]
    NotAFace(Vec<String>),
    #[error("vertex `{0}` appears in both complexes")]
    VertexClash(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("{what} limit {limit} exceeded ({actual})")]
    SizeLimit { what: &'static str, limit: usize, actual: usize },
    #[error("the void complex has no depth")]
    VoidComplex,
    #[error("order is not a permutation of the facets: {0}")]
    NotFacetPermutation(String),
    #[error("invalid certificate at {path}: {reason}")]
    InvalidCertificate { path: String, reason: String },
}

#[derive(Debug)]
struct VertexTable {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl VertexTable {
    fn new(names: Vec<String>) -> Result<Arc<VertexTable>, ComplexError> {
        let mut index = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(ComplexError::VertexClash(n.clone()));
            }
        }
        Ok(Arc::new(VertexTable { names, index }))
    }
}

/// A complex given by its facets over a shared vertex table. No facets is
/// the void complex; a single empty facet is the empty complex `{∅}`.
#[derive(Clone)]
pub struct SimplicialComplex {
    table: Arc<VertexTable>,
    facets: Vec<FixedBitSet>,
}

pub(crate) fn ones(set: &FixedBitSet) -> Vec<usize> {
    set.ones().collect()
}

/// Drops non-maximal and duplicate sets, then sorts.
fn reduce(mut sets: Vec<FixedBitSet>) -> Vec<FixedBitSet> {
    sets.sort_by_key(|s| std::cmp::Reverse(s.count_ones(..)));
    let mut kept: Vec<FixedBitSet> = Vec::with_capacity(sets.len());
    for s in sets {
        if !kept.iter().any(|k| s.is_subset(k)) {
            kept.push(s);
        }
    }
    kept.sort_by_key(ones);
    kept
}

impl SimplicialComplex {
    /// Facets are given by vertex indices into `names`; non-maximal sets are
    /// discarded.
    pub fn new(names: Vec<String>, faces: &[Vec<usize>]) -> Result<SimplicialComplex, ComplexError> {
        let table = VertexTable::new(names)?;
        let n = table.names.len();
        let mut sets = Vec::with_capacity(faces.len());
        for f in faces {
            let mut s = FixedBitSet::with_capacity(n);
            for &v in f {
                if v >= n {
                    return Err(ComplexError::UnknownVertex(format!("#{v}")));
                }
                s.insert(v);
            }
            sets.push(s);
        }
        Ok(SimplicialComplex {
            table,
            facets: reduce(sets),
        })
    }

    /// Vertices are numbered in order of first appearance.
    pub fn from_named<S: AsRef<str>>(faces: &[Vec<S>]) -> Result<SimplicialComplex, ComplexError> {
        let mut names: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut idx_faces = Vec::with_capacity(faces.len());
        for f in faces {
            let mut face = Vec::with_capacity(f.len());
            for v in f {
                let v = v.as_ref();
                let i = *index.entry(v.to_string()).or_insert_with(|| {
                    names.push(v.to_string());
                    names.len() - 1
                });
                face.push(i);
            }
            idx_faces.push(face);
        }
        SimplicialComplex::new(names, &idx_faces)
    }

    pub fn void() -> SimplicialComplex {
        SimplicialComplex::new(Vec::new(), &[]).unwrap()
    }

    pub fn empty() -> SimplicialComplex {
        SimplicialComplex::new(Vec::new(), &[vec![]]).unwrap()
    }

    /// The full simplex on the named vertices.
    pub fn simplex<S: AsRef<str>>(vertices: &[S]) -> Result<SimplicialComplex, ComplexError> {
        SimplicialComplex::from_named(&[vertices.iter().map(|s| s.as_ref()).collect::<Vec<_>>()])
    }

    fn with_facets(&self, sets: Vec<FixedBitSet>) -> SimplicialComplex {
        SimplicialComplex {
            table: Arc::clone(&self.table),
            facets: reduce(sets),
        }
    }

    pub fn table_len(&self) -> usize {
        self.table.names.len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.table.names[v]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.table.index.get(name).copied()
    }

    pub fn facets(&self) -> &[FixedBitSet] {
        &self.facets
    }

    pub fn facet_vertices(&self) -> Vec<Vec<usize>> {
        self.facets.iter().map(ones).collect()
    }

    pub fn face_names(&self, face: &FixedBitSet) -> Vec<String> {
        face.ones().map(|v| self.table.names[v].clone()).collect()
    }

    /// Facets as sorted name lists, sorted.
    pub fn named_facets(&self) -> Vec<Vec<String>> {
        let mut out: Vec<Vec<String>> = self
            .facets
            .iter()
            .map(|f| {
                let mut names = self.face_names(f);
                names.sort();
                names
            })
            .collect();
        out.sort();
        out
    }

    pub fn is_void(&self) -> bool {
        self.facets.is_empty()
    }

    /// True for `{∅}`.
    pub fn is_empty_complex(&self) -> bool {
        self.facets.len() == 1 && self.facets[0].count_ones(..) == 0
    }

    pub fn is_simplex(&self) -> bool {
        self.facets.len() == 1
    }

    /// `None` for the void complex, `-1` for `{∅}`.
    pub fn dim(&self) -> Option<isize> {
        self.facets.iter().map(|f| f.count_ones(..) as isize - 1).max()
    }

    pub fn min_facet_dim(&self) -> Option<isize> {
        self.facets.iter().map(|f| f.count_ones(..) as isize - 1).min()
    }

    pub fn is_pure(&self) -> bool {
        self.dim() == self.min_facet_dim()
    }

    /// Vertices lying in some facet.
    pub fn vertices(&self) -> Vec<usize> {
        let mut all = FixedBitSet::with_capacity(self.table_len());
        for f in &self.facets {
            all.union_with(f);
        }
        ones(&all)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices().len()
    }

    pub fn face_set(&self, vertices: &[usize]) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.table_len());
        vertices.iter().for_each(|&v| s.insert(v));
        s
    }

    pub fn contains_face(&self, face: &FixedBitSet) -> bool {
        self.facets.iter().any(|f| face.is_subset(f))
    }

    /// All faces of dimension `k`, each as sorted vertex indices.
    pub fn faces_of_dim(&self, k: isize) -> Vec<Vec<usize>> {
        let mut out = BTreeSet::new();
        if k < -1 {
            return Vec::new();
        }
        let size = (k + 1) as usize;
        for f in &self.facets {
            let verts = ones(f);
            if verts.len() >= size {
                for_each_subset(&verts, size, |s| {
                    out.insert(s.to_vec());
                });
            }
        }
        out.into_iter().collect()
    }

    /// Number of faces of each dimension from `-1` upward.
    pub fn f_vector(&self) -> Vec<usize> {
        match self.dim() {
            None => Vec::new(),
            Some(d) => (-1..=d).map(|k| self.faces_of_dim(k).len()).collect(),
        }
    }

    /// Faces of dimension at most `k`.
    pub fn skeleton(&self, k: isize) -> SimplicialComplex {
        if k < -1 || self.is_void() {
            return self.with_facets(Vec::new());
        }
        let size = (k + 1) as usize;
        let mut sets = Vec::new();
        let mut seen = BTreeSet::new();
        for f in &self.facets {
            let verts = ones(f);
            if verts.len() <= size {
                sets.push(f.clone());
            } else {
                for_each_subset(&verts, size, |s| {
                    if seen.insert(s.to_vec()) {
                        sets.push(self.face_set(s));
                    }
                });
            }
        }
        self.with_facets(sets)
    }

    pub fn link(&self, face: &FixedBitSet) -> Result<SimplicialComplex, ComplexError> {
        let sets: Vec<FixedBitSet> = self
            .facets
            .iter()
            .filter(|f| face.is_subset(f))
            .map(|f| {
                let mut s = f.clone();
                s.difference_with(face);
                s
            })
            .collect();
        if sets.is_empty() {
            return Err(ComplexError::NotAFace(self.face_names(face)));
        }
        Ok(self.with_facets(sets))
    }

    pub fn link_vertex(&self, v: usize) -> Result<SimplicialComplex, ComplexError> {
        self.link(&self.face_set(&[v]))
    }

    /// Removes every face containing `face`.
    pub fn delete(&self, face: &FixedBitSet) -> SimplicialComplex {
        let mut sets = Vec::with_capacity(self.facets.len());
        for f in &self.facets {
            if face.is_subset(f) && face.count_ones(..) > 0 {
                for v in face.ones() {
                    let mut s = f.clone();
                    s.set(v, false);
                    sets.push(s);
                }
            } else if !face.is_subset(f) {
                sets.push(f.clone());
            }
        }
        self.with_facets(sets)
    }

    pub fn delete_vertex(&self, v: usize) -> SimplicialComplex {
        self.delete(&self.face_set(&[v]))
    }

    /// The join; vertex names must be disjoint. Vertices of `self` come
    /// first in the new table.
    pub fn join(&self, other: &SimplicialComplex) -> Result<SimplicialComplex, ComplexError> {
        let mut names = self.table.names.clone();
        for n in &other.table.names {
            if self.table.index.contains_key(n) {
                return Err(ComplexError::VertexClash(n.clone()));
            }
            names.push(n.clone());
        }
        let offset = self.table_len();
        let table = VertexTable::new(names)?;
        let total = table.names.len();
        let mut sets = Vec::with_capacity(self.facets.len() * other.facets.len());
        for a in &self.facets {
            for b in &other.facets {
                let mut s = FixedBitSet::with_capacity(total);
                a.ones().for_each(|v| s.insert(v));
                b.ones().for_each(|v| s.insert(v + offset));
                sets.push(s);
            }
        }
        Ok(SimplicialComplex {
            table,
            facets: reduce(sets),
        })
    }

    /// A facet containing `v` that cannot trade `v` for an outside vertex,
    /// or `None` when `v` is a shedding vertex.
    pub fn shedding_witness(&self, v: usize) -> Result<Option<FixedBitSet>, ComplexError> {
        if v >= self.table_len() || !self.facets.iter().any(|f| f.contains(v)) {
            return Err(ComplexError::UnknownVertex(
                self.table.names.get(v).cloned().unwrap_or_else(|| format!("#{v}")),
            ));
        }
        for f in self.facets.iter().filter(|f| f.contains(v)) {
            let mut rest = f.clone();
            rest.set(v, false);
            let exchanged = self
                .facets
                .iter()
                .any(|g| !g.contains(v) && rest.is_subset(g) && g.count_ones(..) > rest.count_ones(..));
            if !exchanged {
                return Ok(Some(f.clone()));
            }
        }
        Ok(None)
    }

    pub fn is_shedding_vertex(&self, v: usize) -> Result<bool, ComplexError> {
        Ok(self.shedding_witness(v)?.is_none())
    }

    pub fn shedding_vertex_by_name(&self, name: &str) -> Result<bool, ComplexError> {
        let v = self.vertex_index(name).ok_or_else(|| ComplexError::UnknownVertex(name.into()))?;
        self.is_shedding_vertex(v)
    }
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.named_facets() == other.named_facets()
    }
}

impl Eq for SimplicialComplex {}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SimplicialComplex").field("facets", &self.named_facets()).finish()
    }
}

/// Calls `f` on every `k`-subset of `items`, in lexicographic order.
pub(crate) fn for_each_subset(items: &[usize], k: usize, mut f: impl FnMut(&[usize])) {
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        let need = k - cur.len();
        for i in start..=items.len() - need {
            cur.push(items[i]);
            rec(items, k, i + 1, cur, f);
            cur.pop();
        }
    }
    if k > items.len() {
        return;
    }
    rec(items, k, 0, &mut Vec::with_capacity(k), &mut f);
}

/// The complex of chains of the proper part of a bounded poset. Vertices are
/// the proper elements, in the poset's order.
pub fn order_complex(p: &Poset) -> Result<SimplicialComplex, ComplexError> {
    let (b, t) = p.bounds()?;
    let proper: Vec<usize> = (0..p.len()).filter(|&i| i != b && i != t).collect();
    let mut local = vec![usize::MAX; p.len()];
    for (i, &e) in proper.iter().enumerate() {
        local[e] = i;
    }
    let names = proper.iter().map(|&e| p.name(e).to_string()).collect();
    let facets: Vec<Vec<usize>> = if b == t {
        vec![vec![]]
    } else {
        p.maximal_chains()?
            .iter()
            .map(|c| c.interior().iter().map(|&e| local[e]).collect())
            .collect()
    };
    SimplicialComplex::new(names, &facets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    fn cx(faces: &[&[&str]]) -> SimplicialComplex {
        let v: Vec<Vec<&str>> = faces.iter().map(|f| f.to_vec()).collect();
        SimplicialComplex::from_named(&v).unwrap()
    }

    pub(crate) fn four_cycle() -> SimplicialComplex {
        cx(&[&["a", "b"], &["b", "c"], &["c", "d"], &["d", "a"]])
    }

    #[test]
    fn void_and_empty() {
        assert_eq!(SimplicialComplex::void().dim(), None);
        assert_eq!(SimplicialComplex::empty().dim(), Some(-1));
        assert_ne!(SimplicialComplex::void(), SimplicialComplex::empty());
        assert!(SimplicialComplex::empty().is_simplex());
    }

    #[test]
    fn skeleton_link_delete() {
        let tri = cx(&[&["a", "b", "c"]]);
        assert_eq!(tri.skeleton(0), cx(&[&["a"], &["b"], &["c"]]));
        assert_eq!(tri.skeleton(-1), SimplicialComplex::empty());
        assert!(tri.skeleton(-2).is_void());
        let boundary = tri.skeleton(1);
        let a = boundary.vertex_index("a").unwrap();
        assert_eq!(boundary.link_vertex(a).unwrap(), cx(&[&["b"], &["c"]]));
        assert_eq!(boundary.delete_vertex(a), cx(&[&["b", "c"]]));
        let facet = boundary.face_set(&[0, 1]);
        assert_eq!(boundary.link(&facet).unwrap(), SimplicialComplex::empty());
        let missing = tri.skeleton(0).face_set(&[0, 1]);
        assert!(matches!(tri.skeleton(0).link(&missing), Err(ComplexError::NotAFace(_))));
    }

    #[test]
    fn joins() {
        let s0 = cx(&[&["a"], &["b"]]);
        let t0 = cx(&[&["c"], &["d"]]);
        let j = s0.join(&t0).unwrap();
        assert_eq!(j, cx(&[&["a", "c"], &["a", "d"], &["b", "c"], &["b", "d"]]));
        assert_eq!(j.facets().len(), 4);
        let p = cx(&[&["x"]]).join(&cx(&[&["y"]])).unwrap();
        assert_eq!(p.skeleton(1), cx(&[&["x", "y"]]));
        assert!(matches!(s0.join(&s0), Err(ComplexError::VertexClash(_))));
        assert_eq!(s0.join(&SimplicialComplex::empty()).unwrap(), s0);
        assert!(s0.join(&SimplicialComplex::void()).unwrap().is_void());
    }

    #[test]
    fn shedding_examples() {
        let c = cx(&[&["a", "b"], &["c"]]);
        assert!(!c.shedding_vertex_by_name("a").unwrap());
        let w = c.shedding_witness(c.vertex_index("a").unwrap()).unwrap().unwrap();
        assert_eq!(c.face_names(&w), ["a", "b"]);
        let cyc = four_cycle();
        for v in cyc.vertices() {
            assert!(cyc.is_shedding_vertex(v).unwrap());
        }
        let tri = cx(&[&["a", "b", "c"]]);
        assert!(!tri.shedding_vertex_by_name("a").unwrap());
        assert!(matches!(tri.shedding_vertex_by_name("z"), Err(ComplexError::UnknownVertex(_))));
    }

    #[test]
    fn order_complexes() {
        assert_eq!(order_complex(families::three_chain().poset()).unwrap(), cx(&[&["a"]]));
        assert_eq!(order_complex(families::m3().poset()).unwrap(), cx(&[&["a"], &["b"], &["c"]]));
        assert_eq!(order_complex(families::n5().poset()).unwrap(), cx(&[&["a"], &["b", "c"]]));
        let single = Poset::build(&["x"], &[]).unwrap();
        assert_eq!(order_complex(&single).unwrap(), SimplicialComplex::empty());
        // the barycentric hexagon
        let b3 = order_complex(families::boolean(3).poset()).unwrap();
        assert_eq!(b3.f_vector(), vec![1, 6, 6]);
    }

    #[test]
    fn subsets() {
        let mut seen = Vec::new();
        for_each_subset(&[1, 2, 3], 2, |s| seen.push(s.to_vec()));
        assert_eq!(seen, vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
        let mut count = 0;
        for_each_subset(&[1, 2], 0, |_| count += 1);
        assert_eq!(count, 1);
    }
}

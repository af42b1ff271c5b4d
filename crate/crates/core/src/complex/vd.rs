//! Vertex-decomposability: exhaustive search and certificate checking.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{ComplexError, SimplicialComplex};

/// A recursion tree of shedding vertices. Leaves are simplices; `None` marks
/// the void complex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum VdCertificate {
    Leaf {
        facet: Option<Vec<String>>,
    },
    Shed {
        vertex: String,
        deletion: Box<VdCertificate>,
        link: Box<VdCertificate>,
    },
}

impl VdCertificate {
    pub fn leaf_of(c: &SimplicialComplex) -> Option<VdCertificate> {
        if c.is_void() {
            Some(VdCertificate::Leaf { facet: None })
        } else if c.is_simplex() {
            let mut names = c.face_names(&c.facets()[0]);
            names.sort();
            Some(VdCertificate::Leaf { facet: Some(names) })
        } else {
            None
        }
    }

    /// Number of shedding steps.
    pub fn shed_count(&self) -> usize {
        match self {
            VdCertificate::Leaf { .. } => 0,
            VdCertificate::Shed { deletion, link, .. } => 1 + deletion.shed_count() + link.shed_count(),
        }
    }
}

/// Walks the tree, recomputing deletion and link at every node and checking
/// the shedding condition and every leaf.
pub fn validate_certificate(c: &SimplicialComplex, cert: &VdCertificate) -> Result<(), ComplexError> {
    validate_at(c, cert, &mut String::from("root"))
}

fn validate_at(c: &SimplicialComplex, cert: &VdCertificate, path: &mut String) -> Result<(), ComplexError> {
    let invalid = |path: &str, reason: String| ComplexError::InvalidCertificate {
        path: path.to_string(),
        reason,
    };
    match cert {
        VdCertificate::Leaf { facet } => {
            let expected = VdCertificate::leaf_of(c);
            let ok = match (&expected, facet) {
                (Some(VdCertificate::Leaf { facet: got }), f) => got == f,
                _ => false,
            };
            if ok {
                Ok(())
            } else {
                Err(invalid(path, format!("leaf {facet:?} but complex is {:?}", c.named_facets())))
            }
        }
        VdCertificate::Shed { vertex, deletion, link } => {
            let v = c
                .vertex_index(vertex)
                .filter(|&v| c.facets().iter().any(|f| f.contains(v)))
                .ok_or_else(|| invalid(path, format!("`{vertex}` is not a vertex")))?;
            if let Some(w) = c.shedding_witness(v)? {
                return Err(invalid(
                    path,
                    format!("`{vertex}` is not shedding: facet {:?}", c.face_names(&w)),
                ));
            }
            let len = path.len();
            path.push_str(&format!("/del {vertex}"));
            validate_at(&c.delete_vertex(v), deletion, path)?;
            path.truncate(len);
            path.push_str(&format!("/lk {vertex}"));
            validate_at(&c.link_vertex(v)?, link, path)?;
            path.truncate(len);
            Ok(())
        }
    }
}

/// Facets as vertex bitmasks.
type Masks = Vec<u64>;

fn reduce_masks(mut sets: Masks) -> Masks {
    sets.sort_by_key(|s| std::cmp::Reverse(s.count_ones()));
    let mut kept: Masks = Vec::with_capacity(sets.len());
    for s in sets {
        if !kept.iter().any(|&k| s & k == s) {
            kept.push(s);
        }
    }
    kept.sort_unstable();
    kept
}

fn shedding(facets: &[u64], v: u64) -> bool {
    facets.iter().filter(|&&f| f & v != 0).all(|&f| {
        let rest = f & !v;
        facets.iter().any(|&g| g & v == 0 && g & rest == rest && g != rest)
    })
}

struct Search {
    memo: HashMap<Masks, Option<u64>>,
}

impl Search {
    /// `Some(v)` with a working shedding vertex, `Some(0)` for a leaf,
    /// `None` when not decomposable.
    fn solve(&mut self, facets: &Masks) -> Option<u64> {
        if facets.len() <= 1 {
            return Some(0);
        }
        if let Some(&hit) = self.memo.get(facets) {
            return hit;
        }
        let all = facets.iter().fold(0u64, |a, &f| a | f);
        let mut answer = None;
        let mut bits = all;
        while bits != 0 {
            let v = bits & bits.wrapping_neg();
            bits &= bits - 1;
            if !shedding(facets, v) {
                continue;
            }
            let (del, lk) = split(facets, v);
            if self.solve(&del).is_some() && self.solve(&lk).is_some() {
                answer = Some(v);
                break;
            }
        }
        self.memo.insert(facets.clone(), answer);
        answer
    }

    fn certificate(&mut self, facets: &Masks, names: &[String]) -> VdCertificate {
        let v = self.solve(facets).expect("called on decomposable complexes");
        if v == 0 {
            let facet = facets.first().map(|&f| {
                let mut n: Vec<String> = (0..64).filter(|i| f >> i & 1 == 1).map(|i| names[i].clone()).collect();
                n.sort();
                n
            });
            return VdCertificate::Leaf { facet };
        }
        let (del, lk) = split(facets, v);
        VdCertificate::Shed {
            vertex: names[v.trailing_zeros() as usize].clone(),
            deletion: Box::new(self.certificate(&del, names)),
            link: Box::new(self.certificate(&lk, names)),
        }
    }
}

fn split(facets: &[u64], v: u64) -> (Masks, Masks) {
    let del = reduce_masks(facets.iter().map(|&f| f & !v).collect());
    let lk = reduce_masks(facets.iter().filter(|&&f| f & v != 0).map(|&f| f & !v).collect());
    (del, lk)
}

fn to_masks(c: &SimplicialComplex, vertex_limit: usize) -> Result<(Masks, Vec<String>), ComplexError> {
    let verts = c.vertices();
    let limit = vertex_limit.min(64);
    if verts.len() > limit {
        return Err(ComplexError::SizeLimit {
            what: "vertex",
            limit,
            actual: verts.len(),
        });
    }
    let mut local = vec![0usize; c.table_len()];
    for (i, &v) in verts.iter().enumerate() {
        local[v] = i;
    }
    let names = verts.iter().map(|&v| c.vertex_name(v).to_string()).collect();
    let masks = c
        .facets()
        .iter()
        .map(|f| f.ones().fold(0u64, |m, v| m | 1 << local[v]))
        .collect();
    Ok((reduce_masks(masks), names))
}

/// Exhaustive search over shedding vertices, memoized on facet sets.
/// Simplices, `{∅}` and the void complex count as decomposable.
pub fn is_vd_bruteforce(c: &SimplicialComplex, vertex_limit: usize) -> Result<bool, ComplexError> {
    let (masks, _) = to_masks(c, vertex_limit)?;
    let mut s = Search { memo: HashMap::new() };
    Ok(s.solve(&masks).is_some())
}

pub fn vd_certificate_bruteforce(c: &SimplicialComplex, vertex_limit: usize) -> Result<Option<VdCertificate>, ComplexError> {
    let (masks, names) = to_masks(c, vertex_limit)?;
    let mut s = Search { memo: HashMap::new() };
    if s.solve(&masks).is_none() {
        return Ok(None);
    }
    Ok(Some(s.certificate(&masks, &names)))
}

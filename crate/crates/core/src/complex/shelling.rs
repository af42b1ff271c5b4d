//! Shelling orders: checking, extraction from a decomposition, and a small
//! exhaustive search.

use fixedbitset::FixedBitSet;

use super::vd::VdCertificate;
use super::{ComplexError, SimplicialComplex};

/// Facets in shelling order, as sorted vertex names.
pub type ShellingOrder = Vec<Vec<String>>;

/// Whether `sigma_k` can follow the facets `before`: each earlier
/// intersection lies in a codimension-one intersection.
fn extends(before: &[&FixedBitSet], k: &FixedBitSet) -> bool {
    let size = k.count_ones(..);
    let meets: Vec<FixedBitSet> = before
        .iter()
        .map(|s| {
            let mut m = (*s).clone();
            m.intersect_with(k);
            m
        })
        .collect();
    meets
        .iter()
        .all(|mi| meets.iter().any(|mj| mj.count_ones(..) + 1 == size && mi.is_subset(mj)))
}

/// Returns the first position that breaks the shelling condition, `None` if
/// the order is a shelling.
pub fn verify_shelling(c: &SimplicialComplex, order: &ShellingOrder) -> Result<Option<usize>, ComplexError> {
    let mut sets = Vec::with_capacity(order.len());
    for f in order {
        let mut names = f.clone();
        names.sort();
        let mut set = FixedBitSet::with_capacity(c.table_len());
        for n in &names {
            let v = c
                .vertex_index(n)
                .ok_or_else(|| ComplexError::NotFacetPermutation(format!("unknown vertex `{n}`")))?;
            set.insert(v);
        }
        sets.push(set);
    }
    let mut sorted: Vec<Vec<usize>> = sets.iter().map(super::ones).collect();
    sorted.sort();
    let before = sorted.len();
    sorted.dedup();
    if sorted.len() != before {
        return Err(ComplexError::NotFacetPermutation("a facet is repeated".into()));
    }
    if sorted != c.facet_vertices() {
        return Err(ComplexError::NotFacetPermutation("facets differ from the complex".into()));
    }
    for k in 1..sets.len() {
        let prefix: Vec<&FixedBitSet> = sets[..k].iter().collect();
        if !extends(&prefix, &sets[k]) {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// Deletion facets first, then link facets coned with the shed vertex, at
/// every node.
pub fn shelling_from_vd(c: &SimplicialComplex, cert: &VdCertificate) -> Result<ShellingOrder, ComplexError> {
    super::vd::validate_certificate(c, cert)?;
    let mut out = Vec::new();
    collect(cert, &mut Vec::new(), &mut out);
    for f in out.iter_mut() {
        f.sort();
    }
    Ok(out)
}

fn collect(cert: &VdCertificate, cone: &mut Vec<String>, out: &mut ShellingOrder) {
    match cert {
        VdCertificate::Leaf { facet: None } => {}
        VdCertificate::Leaf { facet: Some(f) } => {
            let mut full = f.clone();
            full.extend(cone.iter().cloned());
            out.push(full);
        }
        VdCertificate::Shed { vertex, deletion, link } => {
            collect(deletion, cone, out);
            cone.push(vertex.clone());
            collect(link, cone, out);
            cone.pop();
        }
    }
}

/// Exhaustive search over facet subsets; refused above `facet_limit`
/// facets (and above 20 regardless).
pub fn find_shelling(c: &SimplicialComplex, facet_limit: usize) -> Result<Option<ShellingOrder>, ComplexError> {
    let facets = c.facets();
    let n = facets.len();
    let limit = facet_limit.min(20);
    if n > limit {
        return Err(ComplexError::SizeLimit {
            what: "facet",
            limit,
            actual: n,
        });
    }
    let full = (1usize << n) - 1;
    // dead[s]: no completion from the used set s
    let mut dead = vec![false; 1 << n];
    let mut order = Vec::with_capacity(n);
    fn dfs(facets: &[FixedBitSet], used: usize, full: usize, dead: &mut [bool], order: &mut Vec<usize>) -> bool {
        if used == full {
            return true;
        }
        if dead[used] {
            return false;
        }
        let prefix: Vec<&FixedBitSet> = order.iter().map(|&i| &facets[i]).collect();
        for k in 0..facets.len() {
            if used >> k & 1 == 0 && extends(&prefix, &facets[k]) {
                order.push(k);
                if dfs(facets, used | 1 << k, full, dead, order) {
                    return true;
                }
                order.pop();
            }
        }
        dead[used] = true;
        false
    }
    if !dfs(facets, 0, full, &mut dead, &mut order) {
        return Ok(None);
    }
    Ok(Some(
        order
            .into_iter()
            .map(|i| {
                let mut names = c.face_names(&facets[i]);
                names.sort();
                names
            })
            .collect(),
    ))
}

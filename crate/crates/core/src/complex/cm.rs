//! Cohen-Macaulay tests over `ℚ` and depth.

use super::homology::reduced_betti;
use super::{ComplexError, SimplicialComplex};

/// Why a complex fails to be Cohen-Macaulay.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CmFailure {
    NotPure,
    /// The link of `face` has homology in dimension `dim`, below its top.
    Link { face: Vec<String>, dim: isize },
}

/// Checks `H̃_i(lk σ) = 0` for `i < dim lk σ` over every face `σ`, `∅`
/// included. Returns the first failure.
pub fn is_cohen_macaulay(c: &SimplicialComplex, face_limit: usize) -> Result<Option<CmFailure>, ComplexError> {
    let Some(dim) = c.dim() else {
        return Ok(None);
    };
    if !c.is_pure() {
        return Ok(Some(CmFailure::NotPure));
    }
    // a face of dimension k in a pure complex has a link of dimension
    // dim - k - 1; vertex links of dimension 0 need only be nonempty
    for k in -1..dim - 1 {
        for face in c.faces_of_dim(k) {
            let set = c.face_set(&face);
            let link = c.link(&set)?;
            let top = link.dim().expect("faces have nonvoid links");
            let betti = reduced_betti(&link, face_limit)?;
            let bad = betti.iter().find(|&(i, b)| i < top && b > 0);
            if let Some((i, _)) = bad {
                return Ok(Some(CmFailure::Link {
                    face: c.face_names(&set),
                    dim: i,
                }));
            }
        }
    }
    Ok(None)
}

/// The largest `r` such that `skel_r Δ` is Cohen-Macaulay, scanning down
/// from the smallest facet dimension. `{∅}` has depth `-1`.
pub fn depth(c: &SimplicialComplex, face_limit: usize) -> Result<isize, ComplexError> {
    let Some(m) = c.min_facet_dim() else {
        return Err(ComplexError::VoidComplex);
    };
    for r in (0..=m).rev() {
        if is_cohen_macaulay(&c.skeleton(r), face_limit)?.is_none() {
            return Ok(r);
        }
    }
    Ok(m.min(0))
}

//! Subgroup lattices of permutation groups, chief series, and the
//! topological tests for solvability.

mod perm;

use std::collections::{BTreeSet, HashSet, VecDeque};

use fixedbitset::FixedBitSet;
use serde::Serialize;
use thiserror::Error;

use crate::complex::{find_shelling, is_cohen_macaulay, order_complex, reduced_betti, shelling_from_vd, verify_shelling, ComplexError, SimplicialComplex};
use crate::construct::{constructive_vd_skeleton, ConstructError};
use crate::labeling::{left_modular_labeling, EdgeLabeling, LabelingError};
use crate::lattice::{Lattice, LatticeError, ModularChain};
use crate::poset::{Poset, PosetError};

pub use perm::{
    alternating, cyclic, dihedral, group_from_generators, group_to_file, klein_four, parse_group_file, symmetric, Perm, PermGroup,
    CLOSURE_LIMIT,
};

pub const DEFAULT_ORDER_LIMIT: usize = 360;
/// Brute-force shelling searches stop above this many facets.
pub const BRUTE_FORCE_FACETS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("group order {order} exceeds the limit {limit}")]
    OrderLimit { limit: usize, order: usize },
    #[error("the group is not solvable")]
    NotSolvable,
    #[error("the trivial group has a one-element subgroup lattice")]
    TrivialGroup,
    #[error("shellability of the {dim}-skeleton could not be decided: {reason}")]
    ShellabilityUndecided { dim: isize, reason: String },
    #[error("subgroup lattice inconsistent: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Labeling(#[from] LabelingError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
}

/// Multiplication table over the sorted element list; index 0 is the
/// identity.
struct Table {
    n: usize,
    mult: Vec<u16>,
    inv: Vec<u16>,
}

impl Table {
    fn new(g: &PermGroup) -> Table {
        let els = g.elements();
        let n = els.len();
        let mut mult = vec![0u16; n * n];
        let mut inv = vec![0u16; n];
        for (i, a) in els.iter().enumerate() {
            for (j, b) in els.iter().enumerate() {
                mult[i * n + j] = g.index_of(&a.then(b)).expect("closed under products") as u16;
            }
            inv[i] = g.index_of(&a.inverse()).expect("closed under inverses") as u16;
        }
        Table { n, mult, inv }
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.n + b] as usize
    }

    fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// Subgroup generated by `gens`.
    fn generate(&self, gens: &[usize]) -> FixedBitSet {
        let mut set = FixedBitSet::with_capacity(self.n);
        set.insert(0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !set.put(y) {
                    queue.push_back(y);
                }
            }
        }
        set
    }

    fn commutator_subgroup(&self, h: &FixedBitSet) -> FixedBitSet {
        let mut gens = BTreeSet::new();
        for a in h.ones() {
            for b in h.ones() {
                let c = self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b));
                gens.insert(c);
            }
        }
        self.generate(&gens.into_iter().collect::<Vec<_>>())
    }
}

fn check_order(g: &PermGroup, limit: usize) -> Result<(), GroupError> {
    if g.order() > limit {
        return Err(GroupError::OrderLimit { limit, order: g.order() });
    }
    Ok(())
}

fn subgroup_sets(t: &Table) -> Vec<FixedBitSet> {
    let mut list: Vec<(FixedBitSet, Vec<usize>)> = Vec::new();
    let mut seen: HashSet<FixedBitSet> = HashSet::new();
    for g in 0..t.n {
        let h = t.generate(&[g]);
        if seen.insert(h.clone()) {
            list.push((h, vec![g]));
        }
    }
    // close under pairwise joins; new subgroups are paired with everything
    // before them when their turn comes
    let mut i = 0;
    while i < list.len() {
        for j in 0..i {
            let (a, b) = (&list[i].0, &list[j].0);
            if a.is_subset(b) || b.is_subset(a) {
                continue;
            }
            let mut gens = list[i].1.clone();
            gens.extend(list[j].1.iter().filter(|&&g| !list[i].0.contains(g)));
            let h = t.generate(&gens);
            if seen.insert(h.clone()) {
                list.push((h, gens));
            }
        }
        i += 1;
    }
    let mut sets: Vec<FixedBitSet> = list.into_iter().map(|(h, _)| h).collect();
    sets.sort_by_key(|h| (h.count_ones(..), h.ones().collect::<Vec<_>>()));
    sets
}

/// Every subgroup, as sorted element indices into `g.elements()`, ordered
/// by `(order, element set)`.
pub fn subgroups(g: &PermGroup, order_limit: usize) -> Result<Vec<Vec<usize>>, GroupError> {
    check_order(g, order_limit)?;
    let t = Table::new(g);
    Ok(subgroup_sets(&t).iter().map(|h| h.ones().collect()).collect())
}

pub fn is_solvable(g: &PermGroup) -> bool {
    derived_series(g).last().is_some_and(|h| h.len() == 1)
}

/// `G ⊇ G' ⊇ G'' ⊇ …` until it stabilizes.
pub fn derived_series(g: &PermGroup) -> Vec<Vec<usize>> {
    let t = Table::new(g);
    let mut cur = FixedBitSet::with_capacity(t.n);
    cur.insert_range(..);
    let mut out = vec![cur.ones().collect::<Vec<_>>()];
    loop {
        let next = t.commutator_subgroup(&cur);
        if next == cur {
            return out;
        }
        out.push(next.ones().collect());
        cur = next;
    }
}

#[derive(Debug, Clone)]
pub struct GroupLattice {
    group: PermGroup,
    subgroups: Vec<Vec<usize>>,
    normal: Vec<bool>,
    lattice: Lattice,
    chief_series: ModularChain,
    solvable: bool,
}

impl GroupLattice {
    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    /// Element indices of subgroup `i`, which is named `H{i}`.
    pub fn subgroup(&self, i: usize) -> &[usize] {
        &self.subgroups[i]
    }

    pub fn subgroups(&self) -> &[Vec<usize>] {
        &self.subgroups
    }

    pub fn order_of(&self, i: usize) -> usize {
        self.subgroups[i].len()
    }

    pub fn is_normal(&self, i: usize) -> bool {
        self.normal[i]
    }

    pub fn normal_subgroups(&self) -> Vec<usize> {
        (0..self.subgroups.len()).filter(|&i| self.normal[i]).collect()
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn poset(&self) -> &Poset {
        self.lattice.poset()
    }

    pub fn chief_series(&self) -> &ModularChain {
        &self.chief_series
    }

    /// Length of the chief series.
    pub fn r(&self) -> usize {
        self.chief_series.len()
    }

    pub fn is_solvable(&self) -> bool {
        self.solvable
    }

    /// The subgroup with exactly these elements, if any.
    pub fn find(&self, elements: &[Perm]) -> Option<usize> {
        let mut idx: Vec<usize> = elements.iter().map(|p| self.group.index_of(p)).collect::<Option<_>>()?;
        idx.sort_unstable();
        idx.dedup();
        self.subgroups.iter().position(|h| *h == idx)
    }

    /// Subgroup generated by the given permutations.
    pub fn generated_by(&self, gens: &[Perm]) -> Option<usize> {
        let t = Table::new(&self.group);
        let idx: Vec<usize> = gens.iter().map(|p| self.group.index_of(p)).collect::<Option<_>>()?;
        let h: Vec<usize> = t.generate(&idx).ones().collect();
        self.subgroups.iter().position(|s| *s == h)
    }

    /// The left-modular labeling for the chief series.
    pub fn chief_labeling(&self) -> Result<EdgeLabeling, GroupError> {
        Ok(left_modular_labeling(&self.lattice, &self.chief_series)?)
    }

    pub fn chief_series_names(&self) -> Vec<String> {
        self.poset().chain_names(self.chief_series.elements())
    }
}

fn is_normal(g: &PermGroup, h: &FixedBitSet) -> bool {
    h.ones().all(|x| {
        g.generators().iter().all(|s| {
            let conj = s.inverse().then(&g.elements()[x]).then(s);
            h.contains(g.index_of(&conj).expect("closed"))
        })
    })
}

/// Among normal `M ⊋ base` with nothing normal strictly between, the one
/// with the smallest element list.
fn minimal_normal_over(sets: &[FixedBitSet], normal: &[bool], base: usize) -> Option<usize> {
    let above: Vec<usize> = (0..sets.len())
        .filter(|&m| normal[m] && m != base && sets[base].is_subset(&sets[m]))
        .collect();
    above
        .iter()
        .copied()
        .filter(|&m| !above.iter().any(|&k| k != m && sets[k].is_subset(&sets[m])))
        .min_by_key(|&m| sets[m].ones().collect::<Vec<_>>())
}

fn maximal_normal_under(sets: &[FixedBitSet], normal: &[bool], top: usize) -> Option<usize> {
    let below: Vec<usize> = (0..sets.len())
        .filter(|&m| normal[m] && m != top && sets[m].is_subset(&sets[top]))
        .collect();
    below
        .iter()
        .copied()
        .filter(|&m| !below.iter().any(|&k| k != m && sets[m].is_subset(&sets[k])))
        .min_by_key(|&m| sets[m].ones().collect::<Vec<_>>())
}

/// Builds `L(G)` and checks it: meets are intersections, joins contain
/// both sides, every normal subgroup is a two-sided modular element, and
/// chief series found from either end have the same length.
pub fn subgroup_lattice(g: &PermGroup, order_limit: usize) -> Result<GroupLattice, GroupError> {
    check_order(g, order_limit)?;
    if g.order() == 1 {
        return Err(GroupError::TrivialGroup);
    }
    let t = Table::new(g);
    let sets = subgroup_sets(&t);
    let n = sets.len();
    let names: Vec<String> = (0..n).map(|i| format!("H{i}")).collect();
    let poset = Poset::from_relation(names, |i, j| sets[i].is_subset(&sets[j]))?;
    let lattice = Lattice::new(poset)?;
    for i in 0..n {
        for j in i + 1..n {
            let m = lattice.meet(i, j);
            if sets[m] != &sets[i] & &sets[j] {
                return Err(GroupError::Inconsistent(format!("meet of H{i} and H{j} is not their intersection")));
            }
            let join = lattice.join(i, j);
            if !(sets[i].is_subset(&sets[join]) && sets[j].is_subset(&sets[join])) {
                return Err(GroupError::Inconsistent(format!("join of H{i} and H{j} misses an element")));
            }
        }
    }
    let normal: Vec<bool> = sets.iter().map(|h| is_normal(g, h)).collect();
    for i in (0..n).filter(|&i| normal[i]) {
        if !lattice.is_modular(i) {
            return Err(GroupError::Inconsistent(format!("normal subgroup H{i} is not modular")));
        }
    }
    let (bottom, top) = (0, n - 1);
    let mut up = vec![bottom];
    while *up.last().unwrap() != top {
        let next = minimal_normal_over(&sets, &normal, *up.last().unwrap()).expect("G is normal");
        up.push(next);
    }
    let mut down = vec![top];
    while *down.last().unwrap() != bottom {
        let next = maximal_normal_under(&sets, &normal, *down.last().unwrap()).expect("1 is normal");
        down.push(next);
    }
    if up.len() != down.len() {
        return Err(GroupError::Inconsistent(format!(
            "chief series of lengths {} and {}",
            up.len() - 1,
            down.len() - 1
        )));
    }
    let chief_series = lattice.verify_chain_modularity(&up)?;
    Ok(GroupLattice {
        subgroups: sets.iter().map(|h| h.ones().collect()).collect(),
        solvable: is_solvable(g),
        group: g.clone(),
        normal,
        lattice,
        chief_series,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DepthVerdict {
    pub r: usize,
    pub depth: isize,
    /// False when only `depth ≥ r − 1` was established.
    pub depth_exact: bool,
    pub solvable_by_depth: bool,
    pub solvable_by_derived_series: bool,
}

impl DepthVerdict {
    pub fn agree(&self) -> bool {
        self.solvable_by_depth == self.solvable_by_derived_series
    }
}

fn is_cm(c: &SimplicialComplex, face_limit: usize) -> Result<bool, ComplexError> {
    Ok(is_cohen_macaulay(c, face_limit)?.is_none())
}

/// Solvable exactly when `depth |L(G)| ≤ r − 2`. Decided by whether
/// `skel_{r−1}` is Cohen-Macaulay; the exact depth is then searched for
/// within `face_limit`.
pub fn solvability_by_depth(gl: &GroupLattice, face_limit: usize) -> Result<DepthVerdict, GroupError> {
    let c = order_complex(gl.poset())?;
    let r = gl.r() as isize;
    let m = c.min_facet_dim().expect("order complexes are nonvoid");
    let deep = m >= r - 1 && is_cm(&c.skeleton(r - 1), face_limit)?;
    let (depth, exact) = if deep {
        let mut d = r - 1;
        let mut exact = true;
        while d < m {
            match is_cm(&c.skeleton(d + 1), face_limit) {
                Ok(true) => d += 1,
                Ok(false) => break,
                Err(ComplexError::SizeLimit { .. }) => {
                    exact = false;
                    break;
                }
                Err(e) => return Err(e.into()),
            }
        }
        (d, exact)
    } else {
        let mut d = (r - 2).min(m);
        while d > 0 && !is_cm(&c.skeleton(d), face_limit)? {
            d -= 1;
        }
        (d.max(m.min(0)), true)
    };
    Ok(DepthVerdict {
        r: gl.r(),
        depth,
        depth_exact: exact,
        solvable_by_depth: !deep,
        solvable_by_derived_series: gl.is_solvable(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShellingEvidence {
    /// A 0-dimensional complex.
    Points,
    /// A 1-dimensional complex with vanishing `β̃₀`.
    Connected,
    /// A 1-dimensional complex with `β̃₀ > 0`.
    Disconnected,
    /// A vertex decomposition built from the chief-series labeling, turned
    /// into a verified shelling.
    Constructive { facets: usize },
    BruteForce { found: bool },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SkeletonVerdict {
    pub r: usize,
    /// Covers in a shortest maximal chain of `L(G)`.
    pub min_chain_length: usize,
    /// `skel_{r−1}` is pure of dimension `r − 1`.
    pub pure: bool,
    pub evidence: Option<ShellingEvidence>,
    pub solvable_by_criterion: bool,
    pub solvable_by_derived_series: bool,
}

impl SkeletonVerdict {
    pub fn agree(&self) -> bool {
        self.solvable_by_criterion == self.solvable_by_derived_series
    }
}

/// Nonsolvable exactly when `skel_{r−1}|L(G)|` is shellable and pure of
/// dimension `r − 1`.
pub fn skeleton_shellability_criterion(gl: &GroupLattice, face_limit: usize) -> Result<SkeletonVerdict, GroupError> {
    let r = gl.r();
    let (min_len, _) = gl.poset().chain_length_range()?;
    let pure = min_len > r;
    let dim = r as isize - 1;
    let evidence = if !pure {
        None
    } else if dim <= 0 {
        Some(ShellingEvidence::Points)
    } else {
        let skel = order_complex(gl.poset())?.skeleton(dim);
        if dim == 1 {
            let b = reduced_betti(&skel, face_limit)?;
            Some(if b.get(0) == 0 { ShellingEvidence::Connected } else { ShellingEvidence::Disconnected })
        } else {
            Some(higher_evidence(gl, &skel, r)?)
        }
    };
    let shellable = matches!(
        evidence,
        Some(ShellingEvidence::Points | ShellingEvidence::Connected | ShellingEvidence::Constructive { .. } | ShellingEvidence::BruteForce { found: true })
    );
    Ok(SkeletonVerdict {
        r,
        min_chain_length: min_len,
        pure,
        evidence,
        solvable_by_criterion: !shellable,
        solvable_by_derived_series: gl.is_solvable(),
    })
}

fn higher_evidence(gl: &GroupLattice, skel: &SimplicialComplex, r: usize) -> Result<ShellingEvidence, GroupError> {
    let lab = gl.chief_labeling()?;
    match constructive_vd_skeleton(gl.poset(), &lab, r + 1) {
        Ok(cert) => {
            let order = shelling_from_vd(skel, &cert)?;
            if let Some(k) = verify_shelling(skel, &order)? {
                return Err(GroupError::Inconsistent(format!("constructed shelling fails at facet {k}")));
            }
            Ok(ShellingEvidence::Constructive { facets: order.len() })
        }
        Err(construct_err) => match find_shelling(skel, BRUTE_FORCE_FACETS) {
            Ok(found) => Ok(ShellingEvidence::BruteForce { found: found.is_some() }),
            Err(ComplexError::SizeLimit { actual, .. }) => Err(GroupError::ShellabilityUndecided {
                dim: r as isize - 1,
                reason: format!("no constructive certificate ({construct_err}) and {actual} facets is too many to search"),
            }),
            Err(e) => Err(e.into()),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThevenazVerdict {
    pub r: usize,
    pub betti: Vec<(isize, usize)>,
    /// Maximal chains refining some chain of complements to the chief
    /// series.
    pub refinement_count: usize,
    pub top_matches: bool,
    pub others_vanish: bool,
}

impl ThevenazVerdict {
    pub fn holds(&self) -> bool {
        self.top_matches && self.others_vanish
    }
}

/// For solvable `G`: `β̃_{r−2}` counts the refined chains of complements
/// and every other reduced Betti number vanishes.
pub fn thevenaz_check(gl: &GroupLattice, face_limit: usize) -> Result<ThevenazVerdict, GroupError> {
    if !gl.is_solvable() {
        return Err(GroupError::NotSolvable);
    }
    let betti = reduced_betti(&order_complex(gl.poset())?, face_limit)?;
    let l = gl.lattice();
    let refinements: BTreeSet<Vec<usize>> = l
        .chains_of_complements(gl.chief_series())
        .iter()
        .flat_map(|c| l.maximal_refinements(c))
        .map(|c| c.into_inner())
        .collect();
    let top = gl.r() as isize - 2;
    let others_vanish = betti.iter().all(|(i, b)| i == top || b == 0);
    Ok(ThevenazVerdict {
        r: gl.r(),
        top_matches: betti.get(top) == refinements.len(),
        others_vanish,
        betti: betti.iter().collect(),
        refinement_count: refinements.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labeling::verify_quasi_el;

    const FACES: usize = 2_000_000;

    /// Oracle: test every subset of the group for closure. Only usable on
    /// tiny groups.
    fn subgroups_by_subsets(g: &PermGroup) -> usize {
        let t = Table::new(g);
        let n = g.order();
        (0u32..1 << n)
            .filter(|mask| {
                mask & 1 == 1
                    && (0..n).all(|a| {
                        mask >> a & 1 == 0 || (0..n).all(|b| mask >> b & 1 == 0 || mask >> t.mul(a, t.inv(b)) & 1 == 1)
                    })
            })
            .count()
    }

    #[test]
    fn counts_agree_with_subset_oracle() {
        for g in [symmetric(3), cyclic(6), klein_four(), dihedral(4), cyclic(4)] {
            assert_eq!(subgroups(&g, 360).unwrap().len(), subgroups_by_subsets(&g), "order {}", g.order());
        }
        assert_eq!(subgroups(&symmetric(3), 360).unwrap().len(), 6);
    }

    #[test]
    fn larger_counts() {
        assert_eq!(subgroups(&alternating(4), 360).unwrap().len(), 10);
        assert_eq!(subgroups(&symmetric(4), 360).unwrap().len(), 30);
        assert!(matches!(subgroups(&symmetric(6), 360), Err(GroupError::OrderLimit { .. })));
    }

    #[test]
    fn chief_series_and_solvability() {
        let s3 = subgroup_lattice(&symmetric(3), 360).unwrap();
        assert_eq!(s3.r(), 2);
        assert_eq!(s3.order_of(s3.chief_series().elements()[1]), 3);
        assert!(s3.is_solvable());
        let s4 = subgroup_lattice(&symmetric(4), 360).unwrap();
        let orders: Vec<usize> = s4.chief_series().elements().iter().map(|&i| s4.order_of(i)).collect();
        assert_eq!(orders, [1, 4, 12, 24]);
        assert!(s4.is_solvable());
        let a5 = group_from_generators(5, vec![Perm::parse_cycles("(1 2 3 4 5)", 5).unwrap(), Perm::parse_cycles("(1 2 3)", 5).unwrap()]).unwrap();
        assert!(!is_solvable(&a5));
        let c2 = subgroup_lattice(&cyclic(2), 360).unwrap();
        assert_eq!(c2.lattice().len(), 2);
        assert!(order_complex(c2.poset()).unwrap().is_empty_complex());
    }

    #[test]
    fn s3_shape_and_complements() {
        let s3 = subgroup_lattice(&symmetric(3), 360).unwrap();
        let p = s3.poset();
        let (b, t) = p.bounds().unwrap();
        let proper: Vec<usize> = (0..p.len()).filter(|&x| x != b && x != t).collect();
        assert_eq!(proper.len(), 4);
        assert!(proper.iter().all(|&x| proper.iter().all(|&y| x == y || !p.comparable(x, y))));
        let lab = s3.chief_labeling().unwrap();
        verify_quasi_el(p, &lab).unwrap();
        let th = thevenaz_check(&s3, FACES).unwrap();
        assert_eq!(th.refinement_count, 3);
        assert!(th.holds());
    }

    #[test]
    fn a4_normal_klein_subgroup() {
        let a4 = subgroup_lattice(&alternating(4), 360).unwrap();
        let v4 = a4.find(klein_four().elements()).unwrap();
        assert!(a4.is_normal(v4));
        assert!(a4.lattice().is_modular(v4));
        assert_eq!(a4.r(), 2);
        let th = thevenaz_check(&a4, FACES).unwrap();
        assert_eq!(th.refinement_count, 4);
        assert!(th.holds());
    }

    #[test]
    fn small_verdicts() {
        for g in [symmetric(3), klein_four(), cyclic(6), dihedral(4), alternating(4)] {
            let gl = subgroup_lattice(&g, 360).unwrap();
            let d = solvability_by_depth(&gl, FACES).unwrap();
            assert_eq!(d.depth, gl.r() as isize - 2, "order {}", g.order());
            assert!(d.solvable_by_depth && d.agree());
            let s = skeleton_shellability_criterion(&gl, FACES).unwrap();
            assert!(!s.pure && s.agree());
        }
        let a5 = subgroup_lattice(&alternating(5), 360).unwrap();
        assert_eq!(a5.subgroups().len(), 59);
        assert_eq!(a5.r(), 1);
        let s = skeleton_shellability_criterion(&a5, FACES).unwrap();
        assert!(s.pure && !s.solvable_by_criterion && s.agree());
        assert!(matches!(thevenaz_check(&a5, FACES), Err(GroupError::NotSolvable)));
    }
}

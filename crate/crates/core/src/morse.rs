//! Skipped intervals of the lexicographic order on maximal chains, and the
//! bounds they give on critical cells of a poset Morse matching.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;

use fixedbitset::FixedBitSet;
use serde::Serialize;
use thiserror::Error;

use crate::complex::{order_complex, reduced_betti, ComplexError};
use crate::labeling::{stats_of, EdgeLabeling, LabelingError};
use crate::lattice::{Lattice, ModularChain};
use crate::poset::{Chain, Poset, PosetError};

pub const DEFAULT_CHAIN_LIMIT: usize = 20_000;

/// Attached to every report: connectivity is only ever checked through
/// reduced homology.
pub const CONNECTIVITY_NOTE: &str = "connectivity is checked homologically (vanishing reduced Betti numbers), not homotopically";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorseError {
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Labeling(#[from] LabelingError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// `c_start ≤ c_end`, as positions in the chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SkippedInterval {
    pub start: usize,
    pub end: usize,
    /// The pair `c_0 < c_ℓ` assigned to the lexicographically first chain.
    pub degenerate: bool,
}

impl SkippedInterval {
    pub fn length(&self) -> usize {
        self.end - self.start
    }

    pub fn contains(&self, k: usize) -> bool {
        self.start <= k && k <= self.end
    }
}

/// Maximal chains sorted by `λ₊ = (λ, ε)`, where `ε` is the element index.
pub struct LexOrder<'p> {
    poset: &'p Poset,
    chains: Vec<Chain>,
    sets: Vec<FixedBitSet>,
}

impl<'p> LexOrder<'p> {
    pub fn new<L: Clone + Ord + Debug>(p: &'p Poset, lab: &EdgeLabeling<L>, chain_limit: usize) -> Result<Self, MorseError> {
        let bound = lab.bind(p)?;
        let mut keyed: Vec<(Vec<(L, usize)>, Chain)> = p
            .maximal_chains_limited(chain_limit)?
            .into_iter()
            .map(|c| (bound.plus_sequence(&c), c))
            .collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        let chains: Vec<Chain> = keyed.into_iter().map(|(_, c)| c).collect();
        let sets = chains
            .iter()
            .map(|c| {
                let mut s = FixedBitSet::with_capacity(p.len());
                c.iter().for_each(|&e| s.insert(e));
                s
            })
            .collect();
        Ok(LexOrder { poset: p, chains, sets })
    }

    pub fn chains(&self) -> &[Chain] {
        &self.chains
    }

    pub fn position(&self, c: &[usize]) -> Option<usize> {
        self.chains.iter().position(|d| d[..] == *c)
    }

    /// Whether `c ∖ [c_i, c_j]` lies in a chain ranked before `rank`.
    fn skipped(&self, rank: usize, i: usize, j: usize) -> bool {
        let c = &self.chains[rank];
        let mut rest = FixedBitSet::with_capacity(self.poset.len());
        for (k, &e) in c.iter().enumerate() {
            if k < i || k > j {
                rest.insert(e);
            }
        }
        self.sets[..rank].iter().any(|s| rest.is_subset(s))
    }

    /// Minimal skipped intervals of the chain at `rank`, by brute force.
    pub fn msis_at(&self, rank: usize) -> Vec<SkippedInterval> {
        let len = self.chains[rank].length();
        if rank == 0 {
            return vec![SkippedInterval {
                start: 0,
                end: len,
                degenerate: true,
            }];
        }
        // every chain contains 0̂ and 1̂, so only interior intervals can be
        // minimal; skipping is monotone, so minimal means neither one-step
        // shrinking is skipped
        let mut out = Vec::new();
        for i in 1..len {
            for j in i..len {
                if !self.skipped(rank, i, j) {
                    continue;
                }
                let smaller = i < j && (self.skipped(rank, i + 1, j) || self.skipped(rank, i, j - 1));
                if !smaller {
                    out.push(SkippedInterval {
                        start: i,
                        end: j,
                        degenerate: false,
                    });
                }
            }
        }
        out
    }
}

/// Minimal skipped intervals of `c` under the `λ₊` order.
pub fn minimal_skipped_intervals<L: Clone + Ord + Debug>(
    p: &Poset,
    lab: &EdgeLabeling<L>,
    c: &[usize],
    chain_limit: usize,
) -> Result<Vec<SkippedInterval>, MorseError> {
    let order = LexOrder::new(p, lab, chain_limit)?;
    let rank = order
        .position(c)
        .ok_or_else(|| LabelingError::NotMaximal(p.chain_names(c)))?;
    Ok(order.msis_at(rank))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SkipViolation {
    pub chain: Vec<String>,
    pub element: String,
    /// 1: a strict descent that is not a minimal skipped interval.
    /// 2: a strict ascent inside a minimal skipped interval.
    pub part: u8,
}

/// Checks on every maximal chain that strict descents are length-0 minimal
/// skipped intervals and that strict ascents avoid all minimal skipped
/// intervals (the lexicographically first chain excepted).
pub fn verify_lemma52<L: Clone + Ord + Debug>(p: &Poset, lab: &EdgeLabeling<L>, chain_limit: usize) -> Result<Vec<SkipViolation>, MorseError> {
    let bound = lab.bind(p)?;
    let order = LexOrder::new(p, lab, chain_limit)?;
    let mut out = Vec::new();
    for (rank, c) in order.chains().iter().enumerate() {
        let stats = stats_of(bound.sequence(c));
        let msis = order.msis_at(rank);
        let violation = |k: usize, part| SkipViolation {
            chain: p.chain_names(c),
            element: p.name(c[k]).to_string(),
            part,
        };
        for &k in &stats.descents {
            if !msis.iter().any(|s| s.start == k && s.end == k) {
                out.push(violation(k, 1));
            }
        }
        if rank > 0 {
            for &k in &stats.ascents {
                if msis.iter().any(|s| s.contains(k)) {
                    out.push(violation(k, 2));
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DescendingChain {
    pub chain: Vec<String>,
    pub labels: Vec<String>,
    pub ell0: usize,
    pub ell1: usize,
    /// `ℓ₀ + ℓ₁ − 2`.
    pub dimension_bound: isize,
}

/// Maximal chains without a strict ascent; the only possible carriers of
/// critical cells.
pub fn weakly_descending_chains<L: Clone + Ord + Debug>(
    p: &Poset,
    lab: &EdgeLabeling<L>,
    chain_limit: usize,
) -> Result<Vec<DescendingChain>, MorseError> {
    let bound = lab.bind(p)?;
    let order = LexOrder::new(p, lab, chain_limit)?;
    Ok(order
        .chains()
        .iter()
        .filter_map(|c| {
            let stats = stats_of(bound.sequence(c));
            stats.weakly_descending().then(|| DescendingChain {
                chain: p.chain_names(c),
                labels: stats.labels.iter().map(|l| format!("{l:?}")).collect(),
                ell0: stats.ell0,
                ell1: stats.ell1,
                dimension_bound: stats.complexity() as isize - 2,
            })
        })
        .collect())
}

/// `min(ℓ₀ + ℓ₁ − 3)` over weakly descending chains; `None` when there are
/// none, in which case the complex is a contractible candidate.
pub fn connectivity_lower_bound<L: Clone + Ord + Debug>(p: &Poset, lab: &EdgeLabeling<L>, chain_limit: usize) -> Result<Option<isize>, MorseError> {
    Ok(weakly_descending_chains(p, lab, chain_limit)?
        .iter()
        .map(|d| d.dimension_bound - 1)
        .min())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplementComparison {
    pub descending: Vec<Vec<String>>,
    pub refinements: Vec<Vec<String>>,
    pub only_descending: Vec<Vec<String>>,
    pub only_refinements: Vec<Vec<String>>,
}

impl ComplementComparison {
    pub fn equal(&self) -> bool {
        self.only_descending.is_empty() && self.only_refinements.is_empty()
    }
}

/// Compares weakly descending chains with maximal refinements of chains of
/// complements to `m`.
pub fn descending_equals_complements<L: Clone + Ord + Debug>(
    l: &Lattice,
    m: &ModularChain,
    lab: &EdgeLabeling<L>,
    chain_limit: usize,
) -> Result<ComplementComparison, MorseError> {
    let p = l.poset();
    let descending: BTreeSet<Vec<String>> = weakly_descending_chains(p, lab, chain_limit)?
        .into_iter()
        .map(|d| d.chain)
        .collect();
    let refinements: BTreeSet<Vec<String>> = l
        .chains_of_complements(m)
        .iter()
        .flat_map(|c| l.maximal_refinements(c))
        .map(|c| p.chain_names(&c))
        .collect();
    Ok(ComplementComparison {
        only_descending: descending.difference(&refinements).cloned().collect(),
        only_refinements: refinements.difference(&descending).cloned().collect(),
        descending: descending.into_iter().collect(),
        refinements: refinements.into_iter().collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyConsistency {
    /// `(dimension, β̃)` from `-1` up.
    pub betti: Vec<(isize, usize)>,
    /// Number of weakly descending chains per dimension bound.
    pub census: BTreeMap<isize, usize>,
    pub connectivity_bound: Option<isize>,
    /// `β̃_i = 0` for `i` up to the connectivity bound (everywhere if none).
    pub vanishing_ok: bool,
    /// Total reduced Betti number at most the number of weakly descending
    /// chains.
    pub count_ok: bool,
    /// The census matches the Betti numbers dimension by dimension.
    pub tight: bool,
}

impl HomologyConsistency {
    pub fn consistent(&self) -> bool {
        self.vanishing_ok && self.count_ok
    }
}

pub fn homology_consistency<L: Clone + Ord + Debug>(
    p: &Poset,
    lab: &EdgeLabeling<L>,
    chain_limit: usize,
    face_limit: usize,
) -> Result<HomologyConsistency, MorseError> {
    let betti = reduced_betti(&order_complex(p)?, face_limit)?;
    let descending = weakly_descending_chains(p, lab, chain_limit)?;
    let mut census = BTreeMap::new();
    for d in &descending {
        *census.entry(d.dimension_bound).or_insert(0) += 1;
    }
    let connectivity_bound = descending.iter().map(|d| d.dimension_bound - 1).min();
    let vanishing_ok = match connectivity_bound {
        Some(b) => betti.vanishes_through(b),
        None => betti.is_zero(),
    };
    let nonzero: BTreeMap<isize, usize> = betti.iter().filter(|&(_, b)| b > 0).collect();
    Ok(HomologyConsistency {
        betti: betti.iter().collect(),
        count_ok: betti.total() <= descending.len(),
        tight: nonzero == census,
        census,
        connectivity_bound,
        vanishing_ok,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainMorse {
    pub chain: Vec<String>,
    pub labels: Vec<String>,
    pub msis: Vec<SkippedInterval>,
    pub length_zero: usize,
    /// Nonempty runs of interior elements left after deleting the length-0
    /// minimal skipped intervals.
    pub components: usize,
    /// `length_zero + components − 1`; absent on the lexicographically
    /// first chain.
    pub dimension_bound: Option<isize>,
    pub weakly_descending: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorseReport {
    pub chains: Vec<ChainMorse>,
    pub weakly_descending: Vec<DescendingChain>,
    /// `None` reads as "contractible candidate".
    pub connectivity_bound: Option<isize>,
    pub violations: Vec<SkipViolation>,
    pub note: String,
}

pub fn morse_report<L: Clone + Ord + Debug>(p: &Poset, lab: &EdgeLabeling<L>, chain_limit: usize) -> Result<MorseReport, MorseError> {
    let bound = lab.bind(p)?;
    let order = LexOrder::new(p, lab, chain_limit)?;
    let chains = order
        .chains()
        .iter()
        .enumerate()
        .map(|(rank, c)| {
            let msis = order.msis_at(rank);
            let stats = stats_of(bound.sequence(c));
            let zero: BTreeSet<usize> = msis.iter().filter(|s| s.length() == 0).map(|s| s.start).collect();
            let mut components = 0;
            let mut open = false;
            for k in 1..c.length() {
                let kept = !zero.contains(&k);
                if kept && !open {
                    components += 1;
                }
                open = kept;
            }
            ChainMorse {
                chain: p.chain_names(c),
                labels: stats.labels.iter().map(|l| format!("{l:?}")).collect(),
                length_zero: zero.len(),
                components,
                dimension_bound: (rank > 0).then(|| (zero.len() + components) as isize - 1),
                weakly_descending: stats.weakly_descending(),
                msis,
            }
        })
        .collect();
    let weakly_descending = weakly_descending_chains(p, lab, chain_limit)?;
    Ok(MorseReport {
        chains,
        connectivity_bound: weakly_descending.iter().map(|d| d.dimension_bound - 1).min(),
        weakly_descending,
        violations: verify_lemma52(p, lab, chain_limit)?,
        note: CONNECTIVITY_NOTE.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::labeling::left_modular_labeling;

    const LIMIT: usize = DEFAULT_CHAIN_LIMIT;

    fn modular(l: &Lattice, chain: &[&str]) -> (ModularChain, EdgeLabeling) {
        let m = l.verify_chain_by_name(chain).unwrap();
        let lab = left_modular_labeling(l, &m).unwrap();
        (m, lab)
    }

    fn ids(p: &Poset, names: &[&str]) -> Vec<usize> {
        names.iter().map(|n| p.index_of(n).unwrap()).collect()
    }

    #[test]
    fn n5_skipped_intervals() {
        let l = families::n5();
        let p = l.poset();
        let (m, lab) = modular(&l, &["0", "b", "c", "1"]);
        let first = minimal_skipped_intervals(p, &lab, &ids(p, &["0", "b", "c", "1"]), LIMIT).unwrap();
        assert_eq!(first, vec![SkippedInterval { start: 0, end: 3, degenerate: true }]);
        let through_a = minimal_skipped_intervals(p, &lab, &ids(p, &["0", "a", "1"]), LIMIT).unwrap();
        assert_eq!(through_a, vec![SkippedInterval { start: 1, end: 1, degenerate: false }]);
        assert!(verify_lemma52(p, &lab, LIMIT).unwrap().is_empty());
        let desc = weakly_descending_chains(p, &lab, LIMIT).unwrap();
        assert_eq!(desc.len(), 1);
        assert_eq!(desc[0].chain, ["0", "a", "1"]);
        assert_eq!(desc[0].dimension_bound, 0);
        assert_eq!(connectivity_lower_bound(p, &lab, LIMIT).unwrap(), Some(-1));
        let cmp = descending_equals_complements(&l, &m, &lab, LIMIT).unwrap();
        assert!(cmp.equal(), "{cmp:?}");
        let h = homology_consistency(p, &lab, LIMIT, 100_000).unwrap();
        assert!(h.consistent() && h.tight, "{h:?}");
    }

    #[test]
    fn m3_and_boolean() {
        let l = families::m3();
        let (m, lab) = modular(&l, &["0", "a", "1"]);
        let desc = weakly_descending_chains(l.poset(), &lab, LIMIT).unwrap();
        let names: Vec<_> = desc.iter().map(|d| d.chain.clone()).collect();
        assert_eq!(names, vec![vec!["0", "b", "1"], vec!["0", "c", "1"]]);
        assert!(desc.iter().all(|d| d.dimension_bound == 0));
        assert!(descending_equals_complements(&l, &m, &lab, LIMIT).unwrap().equal());
        assert!(verify_lemma52(l.poset(), &lab, LIMIT).unwrap().is_empty());

        let b3 = families::boolean(3);
        let lab = families::boolean_labeling(3);
        let desc = weakly_descending_chains(b3.poset(), &lab, LIMIT).unwrap();
        assert_eq!(desc.len(), 1);
        assert_eq!(desc[0].labels, ["3", "2", "1"]);
        assert_eq!(desc[0].dimension_bound, 1);
        assert_eq!(connectivity_lower_bound(b3.poset(), &lab, LIMIT).unwrap(), Some(0));
        let h = homology_consistency(b3.poset(), &lab, LIMIT, 100_000).unwrap();
        assert!(h.consistent() && h.tight);
        assert!(verify_lemma52(b3.poset(), &lab, LIMIT).unwrap().is_empty());
    }

    #[test]
    fn report_bounds_match_label_counts() {
        let b3 = families::boolean(3);
        let lab = families::boolean_labeling(3);
        let rep = morse_report(b3.poset(), &lab, LIMIT).unwrap();
        assert_eq!(rep.chains.len(), 6);
        assert!(rep.chains[0].dimension_bound.is_none());
        for c in rep.chains.iter().filter(|c| c.weakly_descending) {
            let d = rep.weakly_descending.iter().find(|d| d.chain == c.chain).unwrap();
            assert_eq!(c.dimension_bound, Some(d.dimension_bound));
        }
    }

    #[test]
    fn chain_with_no_descents_is_contractible_candidate() {
        let c = families::chain(3);
        let lab = EdgeLabeling::from_fn(c.poset(), |x, _| x as i64);
        assert_eq!(connectivity_lower_bound(c.poset(), &lab, LIMIT).unwrap(), None);
    }

    #[test]
    fn constant_b2_labeling_has_no_skip_violations() {
        let b2 = families::b2();
        let lab = families::constant_labeling(b2.poset(), 0);
        // chains tie on labels and are ordered by ε alone; the second chain
        // ascends weakly but has no strict ascent, so nothing is violated
        let v = verify_lemma52(b2.poset(), &lab, LIMIT).unwrap();
        assert!(v.is_empty());
        let desc = weakly_descending_chains(b2.poset(), &lab, LIMIT).unwrap();
        assert_eq!(desc.len(), 2);
    }
}

//! Edge labelings of bounded posets: the left-modular labeling, quasi-EL and
//! EL verification, chain statistics, refinement, and atom labelings.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::lattice::{Lattice, LatticeError, ModularChain};
use crate::poset::{Chain, Poset, PosetError};

pub type Label = i64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelingError {
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("modular chain was not validated against this lattice")]
    ChainNotValidated,
    #[error("cover ({0}, {1}) has no label")]
    MissingLabel(String, String),
    #[error("labeled pair ({0}, {1}) is not a cover relation")]
    NotACover(String, String),
    #[error("the two closed forms of the left-modular label disagree on ({0}, {1})")]
    FormsDisagree(String, String),
    #[error("interval [{}, {}] has no weakly ascending maximal chain", .0.0, .0.1)]
    NoAscendingChain((String, String)),
    #[error("interval [{}, {}]: covers ({}, {}) and ({}, {}) lie in one spine gap with different labels", .interval.0, .interval.1, .first.0, .first.1, .second.0, .second.1)]
    TwoSpines {
        interval: (String, String),
        first: (String, String),
        second: (String, String),
    },
    #[error("interval [{}, {}]: non-ascending chain {chain:?} is not lexicographically after every ascending chain", .interval.0, .interval.1)]
    LexOrderViolated {
        interval: (String, String),
        chain: Vec<String>,
    },
    #[error("interval [{}, {}] is not EL: {reason}", .interval.0, .interval.1)]
    NotEl { interval: (String, String), reason: String },
    #[error("chain {0:?} is not a maximal chain")]
    NotMaximal(Vec<String>),
    #[error("labelings are defined on different cover sets")]
    IncompatiblePosets,
    #[error("no atom joins `{0}` to `{1}`")]
    NoAtomGenerates(String, String),
    #[error("rooted verification limited to {limit} elements, poset has {size}")]
    SizeLimit { limit: usize, size: usize },
}

/// Labels on cover relations, keyed by element names so they transfer to
/// intervals and induced subposets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeLabeling<L = Label> {
    labels: BTreeMap<(String, String), L>,
}

impl<L> Default for EdgeLabeling<L> {
    fn default() -> Self {
        EdgeLabeling { labels: BTreeMap::new() }
    }
}

impl<L: Clone + Ord + Debug> EdgeLabeling<L> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_fn(poset: &Poset, mut f: impl FnMut(usize, usize) -> L) -> Self {
        let mut lab = Self::new();
        for (x, y) in poset.cover_pairs() {
            lab.insert(poset.name(x).to_string(), poset.name(y).to_string(), f(x, y));
        }
        lab
    }

    pub fn insert(&mut self, from: impl Into<String>, to: impl Into<String>, label: L) {
        self.labels.insert((from.into(), to.into()), label);
    }

    pub fn get(&self, from: &str, to: &str) -> Option<&L> {
        self.labels.get(&(from.to_string(), to.to_string()))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str, &L)> {
        self.labels.iter().map(|((a, b), l)| (a.as_str(), b.as_str(), l))
    }

    /// Resolves labels to indices of `poset`. Every cover needs a label;
    /// labels on other pairs are ignored, so a labeling restricts to
    /// intervals and subposets.
    pub fn bind<'p>(&self, poset: &'p Poset) -> Result<Bound<'p, L>, LabelingError> {
        let mut map = HashMap::new();
        for (x, y) in poset.cover_pairs() {
            let l = self
                .get(poset.name(x), poset.name(y))
                .ok_or_else(|| LabelingError::MissingLabel(poset.name(x).into(), poset.name(y).into()))?;
            map.insert((x, y), l.clone());
        }
        Ok(Bound { poset, map })
    }

    /// Like [`bind`](Self::bind) but also rejects labels on non-covers.
    pub fn bind_exact<'p>(&self, poset: &'p Poset) -> Result<Bound<'p, L>, LabelingError> {
        for (a, b, _) in self.iter() {
            let ok = matches!((poset.index_of(a), poset.index_of(b)), (Some(x), Some(y)) if poset.is_cover(x, y));
            if !ok {
                return Err(LabelingError::NotACover(a.into(), b.into()));
            }
        }
        self.bind(poset)
    }

    /// Keeps only labels on covers of `poset`.
    pub fn restrict(&self, poset: &Poset) -> Result<Self, LabelingError> {
        let bound = self.bind(poset)?;
        Ok(EdgeLabeling::from_fn(poset, |x, y| bound.label(x, y).clone()))
    }
}

/// A labeling resolved against a particular poset.
#[derive(Debug, Clone)]
pub struct Bound<'p, L> {
    poset: &'p Poset,
    map: HashMap<(usize, usize), L>,
}

impl<'p, L: Clone + Ord + Debug> Bound<'p, L> {
    pub fn poset(&self) -> &'p Poset {
        self.poset
    }

    pub fn label(&self, x: usize, y: usize) -> &L {
        &self.map[&(x, y)]
    }

    pub fn sequence(&self, chain: &[usize]) -> Vec<L> {
        chain.windows(2).map(|w| self.label(w[0], w[1]).clone()).collect()
    }

    /// `λ₊ = (λ, ε)` with `ε` the element index of the upper end.
    pub fn plus_sequence(&self, chain: &[usize]) -> Vec<(L, usize)> {
        chain.windows(2).map(|w| (self.label(w[0], w[1]).clone(), w[1])).collect()
    }
}

fn is_weakly_ascending<L: Ord>(seq: &[L]) -> bool {
    seq.windows(2).all(|w| w[0] <= w[1])
}

fn pair_names(p: &Poset, x: usize, y: usize) -> (String, String) {
    (p.name(x).to_string(), p.name(y).to_string())
}

/// The left-modular labeling `λ(y ⋖ z) = min{i : y ∨ (m_i ∧ z) = z}`.
///
/// The max-form, and both forms with the other parenthesization
/// `(y ∨ m_i) ∧ z`, are evaluated too and must agree.
pub fn left_modular_labeling(l: &Lattice, m: &ModularChain) -> Result<EdgeLabeling, LabelingError> {
    if !m.belongs_to(l) {
        return Err(LabelingError::ChainNotValidated);
    }
    let ms = m.elements();
    let r = ms.len() - 1;
    let mut lab = EdgeLabeling::new();
    for (y, z) in l.poset().cover_pairs() {
        let min_form = (1..=r).find(|&i| l.join(y, l.meet(ms[i], z)) == z);
        let max_form = (1..=r).rev().find(|&i| l.join(y, l.meet(ms[i - 1], z)) == y);
        let alt_min = (1..=r).find(|&i| l.meet(l.join(y, ms[i]), z) == z);
        let alt_max = (1..=r).rev().find(|&i| l.meet(l.join(y, ms[i - 1]), z) == y);
        match (min_form, max_form, alt_min, alt_max) {
            (Some(a), Some(b), Some(c), Some(d)) if a == b && b == c && c == d => {
                lab.insert(l.name(y), l.name(z), a as Label);
            }
            _ => return Err(LabelingError::FormsDisagree(l.name(y).into(), l.name(z).into())),
        }
    }
    Ok(lab)
}

/// The spine of one interval: every weakly ascending maximal chain refines
/// `elements`, and each gap carries the single label in `labels`.
///
/// Consecutive gaps are merged when the merged interval still carries one
/// label, so the reported spine is the coarsest valid one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AscentSpine<L = Label> {
    pub interval: (usize, usize),
    pub elements: Vec<usize>,
    pub labels: Vec<L>,
}

#[derive(Debug, Clone)]
pub struct QuasiElCertificate<L = Label> {
    spines: Vec<AscentSpine<L>>,
}

impl<L> QuasiElCertificate<L> {
    pub fn spines(&self) -> &[AscentSpine<L>] {
        &self.spines
    }

    pub fn spine(&self, x: usize, y: usize) -> Option<&AscentSpine<L>> {
        self.spines
            .binary_search_by(|s| s.interval.cmp(&(x, y)))
            .ok()
            .map(|i| &self.spines[i])
    }
}

/// Saturated chains from `x` to every `y ≥ x`, grouped by endpoint.
fn chains_from(p: &Poset, x: usize) -> Vec<Vec<Vec<usize>>> {
    let mut by_end = vec![Vec::new(); p.len()];
    let mut path = vec![x];
    fn dfs(p: &Poset, path: &mut Vec<usize>, by_end: &mut Vec<Vec<Vec<usize>>>) {
        let last = *path.last().unwrap();
        by_end[last].push(path.clone());
        for &n in p.upper_covers(last) {
            path.push(n);
            dfs(p, path, by_end);
            path.pop();
        }
    }
    dfs(p, &mut path, &mut by_end);
    by_end
}

/// Intersection of the weakly ascending chains of `[x, y]`, in order.
/// `None` when no chain ascends.
fn finest_spine<L: Clone + Ord + Debug>(p: &Poset, chains: &[Vec<usize>], seqs: &[Vec<L>]) -> Option<Vec<usize>> {
    let mut common: Option<FixedBitSet> = None;
    for (c, s) in chains.iter().zip(seqs) {
        if is_weakly_ascending(s) {
            let mut set = FixedBitSet::with_capacity(p.len());
            c.iter().for_each(|&e| set.insert(e));
            match &mut common {
                None => common = Some(set),
                Some(cm) => cm.intersect_with(&set),
            }
        }
    }
    let common = common?;
    let mut out: Vec<usize> = common.ones().collect();
    out.sort_by_key(|&e| (p.down_set(e).count_ones(..), e));
    Some(out)
}

/// Covers `u ⋖ v` with `a ≤ u` and `v ≤ b`.
fn covers_within(p: &Poset, a: usize, b: usize) -> Vec<(usize, usize)> {
    let members = p.interval_members(a, b);
    let mut out = Vec::new();
    for &u in &members {
        for &v in p.upper_covers(u) {
            if p.leq(v, b) {
                out.push((u, v));
            }
        }
    }
    out
}

/// The single label on all covers of `[a, b]`, or two covers that differ.
type CoverPair = (usize, usize);

fn uniform_label<L: Clone + Ord + Debug>(bound: &Bound<'_, L>, a: usize, b: usize) -> Result<L, (CoverPair, CoverPair)> {
    let covers = covers_within(bound.poset(), a, b);
    let first = covers[0];
    let l0 = bound.label(first.0, first.1);
    match covers.iter().find(|&&(u, v)| bound.label(u, v) != l0) {
        Some(&other) => Err((first, other)),
        None => Ok(l0.clone()),
    }
}

fn check_interval<L: Clone + Ord + Debug>(
    bound: &Bound<'_, L>,
    x: usize,
    y: usize,
    chains: &[Vec<usize>],
) -> Result<AscentSpine<L>, LabelingError> {
    let p = bound.poset();
    let interval = pair_names(p, x, y);
    let seqs: Vec<Vec<L>> = chains.iter().map(|c| bound.sequence(c)).collect();
    let fine = finest_spine(p, chains, &seqs).ok_or_else(|| LabelingError::NoAscendingChain(interval.clone()))?;

    let mut gaps: Vec<(usize, usize, L)> = Vec::with_capacity(fine.len());
    for w in fine.windows(2) {
        let l = uniform_label(bound, w[0], w[1]).map_err(|(f, s)| LabelingError::TwoSpines {
            interval: interval.clone(),
            first: pair_names(p, f.0, f.1),
            second: pair_names(p, s.0, s.1),
        })?;
        gaps.push((w[0], w[1], l));
    }

    let asc_max = seqs.iter().filter(|s| is_weakly_ascending(s)).max().expect("nonempty");
    if let Some((i, _)) = seqs
        .iter()
        .enumerate()
        .filter(|(_, s)| !is_weakly_ascending(s))
        .find(|(_, s)| s.as_slice().cmp(asc_max.as_slice()) != Ordering::Greater)
    {
        return Err(LabelingError::LexOrderViolated {
            interval,
            chain: p.chain_names(&chains[i]),
        });
    }

    // coarsen where the merged gap still has one label
    let mut elements = vec![x];
    let mut labels: Vec<L> = Vec::new();
    for (_, b, l) in gaps {
        if labels.last() == Some(&l) && uniform_label(bound, elements[elements.len() - 2], b).is_ok() {
            *elements.last_mut().unwrap() = b;
        } else {
            elements.push(b);
            labels.push(l);
        }
    }
    Ok(AscentSpine {
        interval: (x, y),
        elements,
        labels,
    })
}

/// Checks the three quasi-EL conditions on every interval `[x, y]`, `x < y`.
pub fn verify_quasi_el<L: Clone + Ord + Debug>(p: &Poset, lab: &EdgeLabeling<L>) -> Result<QuasiElCertificate<L>, LabelingError> {
    p.bounds()?;
    let bound = lab.bind(p)?;
    let mut spines = Vec::new();
    for x in 0..p.len() {
        let by_end = chains_from(p, x);
        for y in p.up_set(x).ones().filter(|&y| y != x) {
            spines.push(check_interval(&bound, x, y, &by_end[y])?);
        }
    }
    spines.sort_by_key(|s| s.interval);
    Ok(QuasiElCertificate { spines })
}

/// A labeling that may depend on the root chain `0̂ ⋖ … ⋖ x` below a cover.
pub trait ChainEdgeLabeling<L> {
    /// Label of `x ⋖ y`, where `root` is a maximal chain of `[0̂, x]`.
    fn label(&self, root: &[usize], y: usize) -> L;
}

impl<L: Clone + Ord + Debug> ChainEdgeLabeling<L> for Bound<'_, L> {
    fn label(&self, root: &[usize], y: usize) -> L {
        Bound::label(self, *root.last().unwrap(), y).clone()
    }
}

/// Quasi-CL verification over every rooted interval. Exponential in the
/// number of roots, so refused above `limit` elements.
pub fn verify_quasi_cl<L: Clone + Ord + Debug>(
    p: &Poset,
    lab: &impl ChainEdgeLabeling<L>,
    limit: usize,
) -> Result<usize, LabelingError> {
    if p.len() > limit {
        return Err(LabelingError::SizeLimit { limit, size: p.len() });
    }
    let (b, _) = p.bounds()?;
    let mut checked = 0;
    for x in 0..p.len() {
        let roots = p.saturated_chains(b, x, usize::MAX)?;
        let by_end = chains_from(p, x);
        for root in &roots {
            // labels depend on the path taken, so resolve them per chain
            for y in p.up_set(x).ones().filter(|&y| y != x) {
                let chains = &by_end[y];
                let seqs: Vec<Vec<L>> = chains
                    .iter()
                    .map(|c| {
                        let mut path = root.to_vec();
                        c[1..]
                            .iter()
                            .map(|&n| {
                                let l = lab.label(&path, n);
                                path.push(n);
                                l
                            })
                            .collect()
                    })
                    .collect();
                check_rooted(p, x, y, chains, &seqs)?;
                checked += 1;
            }
        }
    }
    Ok(checked)
}

fn check_rooted<L: Clone + Ord + Debug>(p: &Poset, x: usize, y: usize, chains: &[Vec<usize>], seqs: &[Vec<L>]) -> Result<(), LabelingError> {
    let interval = pair_names(p, x, y);
    let fine = finest_spine(p, chains, seqs).ok_or_else(|| LabelingError::NoAscendingChain(interval.clone()))?;
    let pos = |c: &[usize], e: usize| c.iter().position(|&v| v == e);
    // labels inside each gap, over every chain through both gap ends
    for w in fine.windows(2) {
        let mut seen: Option<(L, (usize, usize))> = None;
        for (c, s) in chains.iter().zip(seqs) {
            if let (Some(i), Some(j)) = (pos(c, w[0]), pos(c, w[1])) {
                for k in i..j {
                    match &seen {
                        None => seen = Some((s[k].clone(), (c[k], c[k + 1]))),
                        Some((l, first)) if *l != s[k] => {
                            return Err(LabelingError::TwoSpines {
                                interval,
                                first: pair_names(p, first.0, first.1),
                                second: pair_names(p, c[k], c[k + 1]),
                            })
                        }
                        _ => {}
                    }
                }
            }
        }
    }
    let asc_max = seqs.iter().filter(|s| is_weakly_ascending(s)).max().expect("nonempty");
    if let Some((i, _)) = seqs
        .iter()
        .enumerate()
        .find(|(_, s)| !is_weakly_ascending(s) && s.as_slice() <= asc_max.as_slice())
    {
        return Err(LabelingError::LexOrderViolated {
            interval,
            chain: p.chain_names(&chains[i]),
        });
    }
    Ok(())
}

/// Strict EL check: each interval has exactly one weakly ascending maximal
/// chain, and it is strictly lexicographically first.
pub fn verify_el<L: Clone + Ord + Debug>(p: &Poset, lab: &EdgeLabeling<L>) -> Result<(), LabelingError> {
    p.bounds()?;
    let bound = lab.bind(p)?;
    for x in 0..p.len() {
        let by_end = chains_from(p, x);
        for y in p.up_set(x).ones().filter(|&y| y != x) {
            let chains = &by_end[y];
            let seqs: Vec<Vec<L>> = chains.iter().map(|c| bound.sequence(c)).collect();
            let asc: Vec<usize> = (0..seqs.len()).filter(|&i| is_weakly_ascending(&seqs[i])).collect();
            let fail = |reason: String| LabelingError::NotEl {
                interval: pair_names(p, x, y),
                reason,
            };
            if asc.len() != 1 {
                return Err(fail(format!("{} weakly ascending chains", asc.len())));
            }
            let first = &seqs[asc[0]];
            if seqs.iter().enumerate().any(|(i, s)| i != asc[0] && s <= first) {
                return Err(fail("ascending chain is not strictly first".into()));
            }
        }
    }
    Ok(())
}

/// Label statistics of one maximal chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainStats<L = Label> {
    pub labels: Vec<L>,
    /// Number of distinct labels.
    pub ell0: usize,
    /// Number of labels occurring at least twice.
    pub ell1: usize,
    /// Chain positions `k` (element `c_k`) with `λ_k < λ_{k+1}`.
    pub ascents: Vec<usize>,
    /// Chain positions `k` with `λ_k > λ_{k+1}`.
    pub descents: Vec<usize>,
}

impl<L> ChainStats<L> {
    pub fn weakly_ascending(&self) -> bool {
        self.descents.is_empty()
    }

    pub fn weakly_descending(&self) -> bool {
        self.ascents.is_empty()
    }

    pub fn complexity(&self) -> usize {
        self.ell0 + self.ell1
    }
}

pub fn stats_of<L: Clone + Ord>(labels: Vec<L>) -> ChainStats<L> {
    let mut counts: BTreeMap<&L, usize> = BTreeMap::new();
    for l in &labels {
        *counts.entry(l).or_default() += 1;
    }
    let ell0 = counts.len();
    let ell1 = counts.values().filter(|&&c| c >= 2).count();
    let mut ascents = Vec::new();
    let mut descents = Vec::new();
    for (k, w) in labels.windows(2).enumerate() {
        match w[0].cmp(&w[1]) {
            Ordering::Less => ascents.push(k + 1),
            Ordering::Greater => descents.push(k + 1),
            Ordering::Equal => {}
        }
    }
    ChainStats {
        labels,
        ell0,
        ell1,
        ascents,
        descents,
    }
}

pub fn chain_stats<L: Clone + Ord + Debug>(p: &Poset, lab: &EdgeLabeling<L>, c: &[usize]) -> Result<ChainStats<L>, LabelingError> {
    if !p.is_maximal_chain(c) {
        return Err(LabelingError::NotMaximal(p.chain_names(c)));
    }
    let bound = lab.bind(p)?;
    Ok(stats_of(bound.sequence(c)))
}

/// `min_c (ℓ₀(c) + ℓ₁(c))` over maximal chains, with a witness chain.
pub fn min_chain_complexity<L: Clone + Ord + Debug>(p: &Poset, lab: &EdgeLabeling<L>) -> Result<(usize, Chain), LabelingError> {
    let bound = lab.bind(p)?;
    let chains = p.maximal_chains()?;
    let best = chains
        .into_iter()
        .map(|c| (stats_of(bound.sequence(&c)).complexity(), c))
        .min_by(|a, b| a.0.cmp(&b.0))
        .expect("bounded posets have a maximal chain");
    Ok(best)
}

/// `(λ_q, λ_r)` ordered lexicographically.
pub fn refine_to_el<A: Clone + Ord + Debug, B: Clone + Ord + Debug>(
    q: &EdgeLabeling<A>,
    r: &EdgeLabeling<B>,
) -> Result<EdgeLabeling<(A, B)>, LabelingError> {
    if q.len() != r.len() {
        return Err(LabelingError::IncompatiblePosets);
    }
    let mut out = EdgeLabeling::new();
    for (a, b, lq) in q.iter() {
        let lr = r.get(a, b).ok_or(LabelingError::IncompatiblePosets)?;
        out.insert(a, b, (lq.clone(), lr.clone()));
    }
    Ok(out)
}

/// `λ*(x ⋖ y) = min{i : a_i ∨ x = y}` for an ordering of the atoms.
pub fn geometric_atom_labeling(l: &Lattice, atom_order: &[usize]) -> Result<EdgeLabeling, LabelingError> {
    let mut lab = EdgeLabeling::new();
    for (x, y) in l.poset().cover_pairs() {
        let i = atom_order
            .iter()
            .position(|&a| l.join(a, x) == y)
            .ok_or_else(|| LabelingError::NoAtomGenerates(l.name(x).into(), l.name(y).into()))?;
        lab.insert(l.name(x), l.name(y), i as Label + 1);
    }
    Ok(lab)
}

/// An atom of `[x, y]` on an ascending chain whose first label is not
/// smaller than that of an atom on no ascending chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationViolation {
    pub interval: (usize, usize),
    pub on_ascending: usize,
    pub off_ascending: usize,
}

/// Checks on `[x, y]` (or on every interval) that atoms on ascending chains
/// carry strictly smaller first labels than atoms on none.
pub fn first_label_separation<L: Clone + Ord + Debug>(
    p: &Poset,
    lab: &EdgeLabeling<L>,
    interval: Option<(usize, usize)>,
) -> Result<Vec<SeparationViolation>, LabelingError> {
    let bound = lab.bind(p)?;
    let mut out = Vec::new();
    let pairs: Vec<(usize, usize)> = match interval {
        Some(i) => vec![i],
        None => (0..p.len())
            .flat_map(|x| p.up_set(x).ones().filter(move |&y| y != x).map(move |y| (x, y)))
            .collect(),
    };
    for (x, y) in pairs {
        let by_end = chains_from(p, x);
        let mut on = FixedBitSet::with_capacity(p.len());
        for c in &by_end[y] {
            if is_weakly_ascending(&bound.sequence(c)) {
                on.insert(c[1]);
            }
        }
        let atoms: Vec<usize> = p.upper_covers(x).iter().copied().filter(|&a| p.leq(a, y)).collect();
        for &a in atoms.iter().filter(|&&a| on.contains(a)) {
            for &b in atoms.iter().filter(|&&b| !on.contains(b)) {
                if bound.label(x, a) >= bound.label(x, b) {
                    out.push(SeparationViolation {
                        interval: (x, y),
                        on_ascending: a,
                        off_ascending: b,
                    });
                }
            }
        }
    }
    Ok(out)
}

//! Finite posets stored as dense bitset order relations.
//!
//! Elements are opaque string ids mapped to dense indices in input order. The
//! input order is also the tie-breaking linear extension used by lexicographic
//! chain orders elsewhere in the crate, so every enumeration here is
//! deterministic with respect to it.

use std::collections::HashMap;
use std::fmt;
use std::ops::Deref;

use fixedbitset::FixedBitSet;
use thiserror::Error;

/// Errors raised while building or querying a poset.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("cover relations contain a cycle through `{0}`")]
    CycleDetected(String),
    #[error("cover ({0}, {1}) is redundant: it is repeated or has an intermediate element")]
    RedundantCover(String, String),
    #[error("`{0}` is not below `{1}`")]
    NotComparable(String, String),
    #[error("poset has no unique bottom and top")]
    Unbounded,
    #[error("more than {0} maximal chains")]
    ChainLimit(usize),
}

/// A chain of elements listed from bottom to top.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chain(Vec<usize>);

impl Chain {
    pub fn new(elements: Vec<usize>) -> Self {
        Chain(elements)
    }

    /// Number of steps, one less than the number of elements.
    pub fn length(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }

    /// Elements strictly between the first and last.
    pub fn interior(&self) -> &[usize] {
        if self.0.len() <= 2 {
            &[]
        } else {
            &self.0[1..self.0.len() - 1]
        }
    }

    pub fn covers(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.windows(2).map(|w| (w[0], w[1]))
    }
}

impl Deref for Chain {
    type Target = [usize];
    fn deref(&self) -> &[usize] {
        &self.0
    }
}

/// Outcome of a gradedness test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Grading {
    Graded { rank: Vec<usize> },
    NotGraded { shorter: Chain, longer: Chain },
}

impl Grading {
    pub fn is_graded(&self) -> bool {
        matches!(self, Grading::Graded { .. })
    }
}

#[derive(Clone)]
pub struct Poset {
    names: Vec<String>,
    index: HashMap<String, usize>,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
    upper_covers: Vec<Vec<usize>>,
    lower_covers: Vec<Vec<usize>>,
    bottom: Option<usize>,
    top: Option<usize>,
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Poset")
            .field("elements", &self.names)
            .field("covers", &self.cover_names())
            .finish()
    }
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.up == other.up
    }
}

impl Eq for Poset {}

impl Poset {
    /// Builds a poset from its cover relations.
    ///
    /// Every listed pair must be a genuine cover of the resulting order: a
    /// pair implied by transitivity, or listed twice, is rejected.
    pub fn build<S: AsRef<str>>(elements: &[S], covers: &[(S, S)]) -> Result<Poset, PosetError> {
        let names: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(PosetError::DuplicateElement(name.clone()));
            }
        }
        let n = names.len();
        let lookup = |s: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| PosetError::UnknownElement(s.to_string()))
        };
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (x, y) in covers {
            let (x, y) = (lookup(x.as_ref())?, lookup(y.as_ref())?);
            if x == y {
                return Err(PosetError::CycleDetected(names[x].clone()));
            }
            if succ[x].contains(&y) {
                return Err(PosetError::RedundantCover(names[x].clone(), names[y].clone()));
            }
            succ[x].push(y);
        }

        // Kahn's algorithm; anything left unprocessed lies on a cycle.
        let mut indegree = vec![0usize; n];
        for ys in &succ {
            for &y in ys {
                indegree[y] += 1;
            }
        }
        let mut order = Vec::with_capacity(n);
        let mut stack: Vec<usize> = (0..n).rev().filter(|&i| indegree[i] == 0).collect();
        while let Some(x) = stack.pop() {
            order.push(x);
            for &y in &succ[x] {
                indegree[y] -= 1;
                if indegree[y] == 0 {
                    stack.push(y);
                }
            }
        }
        if order.len() < n {
            let stuck = (0..n).find(|&i| indegree[i] > 0).unwrap();
            return Err(PosetError::CycleDetected(names[stuck].clone()));
        }

        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for &x in order.iter().rev() {
            let mut set = FixedBitSet::with_capacity(n);
            set.insert(x);
            for &y in &succ[x] {
                set.union_with(&up[y]);
            }
            up[x] = set;
        }
        for x in 0..n {
            for &y in &succ[x] {
                if succ[x].iter().any(|&z| z != y && up[z].contains(y)) {
                    return Err(PosetError::RedundantCover(names[x].clone(), names[y].clone()));
                }
            }
        }
        Ok(Poset::from_up_sets(names, index, up))
    }

    /// Builds a poset from a full order relation; `leq(i, j)` must be a
    /// partial order on `0..names.len()`.
    pub fn from_relation(names: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> Result<Poset, PosetError> {
        let n = names.len();
        let mut index = HashMap::with_capacity(n);
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(PosetError::DuplicateElement(name.clone()));
            }
        }
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for (i, set) in up.iter_mut().enumerate() {
            for j in 0..n {
                if leq(i, j) {
                    set.insert(j);
                }
            }
        }
        for i in 0..n {
            if !up[i].contains(i) {
                return Err(PosetError::CycleDetected(names[i].clone()));
            }
            for j in up[i].ones() {
                if j != i && up[j].contains(i) {
                    return Err(PosetError::CycleDetected(names[i].clone()));
                }
                if !up[i].is_superset(&up[j]) {
                    return Err(PosetError::CycleDetected(names[i].clone()));
                }
            }
        }
        Ok(Poset::from_up_sets(names, index, up))
    }

    fn from_up_sets(names: Vec<String>, index: HashMap<String, usize>, up: Vec<FixedBitSet>) -> Poset {
        let n = names.len();
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (i, set) in up.iter().enumerate() {
            for j in set.ones() {
                down[j].insert(i);
            }
        }
        let mut upper_covers = vec![Vec::new(); n];
        let mut lower_covers = vec![Vec::new(); n];
        for x in 0..n {
            for y in up[x].ones() {
                if y == x {
                    continue;
                }
                // x < y is a cover iff nothing else lies in up[x] ∩ down[y].
                let mut between = up[x].clone();
                between.intersect_with(&down[y]);
                if between.count_ones(..) == 2 {
                    upper_covers[x].push(y);
                    lower_covers[y].push(x);
                }
            }
        }
        let bottom = (0..n).find(|&i| up[i].count_ones(..) == n);
        let top = (0..n).find(|&i| down[i].count_ones(..) == n);
        Poset {
            names,
            index,
            up,
            down,
            upper_covers,
            lower_covers,
            bottom,
            top,
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<usize, PosetError> {
        self.index_of(name)
            .ok_or_else(|| PosetError::UnknownElement(name.to_string()))
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    #[inline]
    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.up[x].contains(y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    /// `{ y : x <= y }`.
    pub fn up_set(&self, x: usize) -> &FixedBitSet {
        &self.up[x]
    }

    /// `{ y : y <= x }`.
    pub fn down_set(&self, x: usize) -> &FixedBitSet {
        &self.down[x]
    }

    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.upper_covers[x]
    }

    pub fn lower_covers(&self, x: usize) -> &[usize] {
        &self.lower_covers[x]
    }

    pub fn is_cover(&self, x: usize, y: usize) -> bool {
        self.upper_covers[x].contains(&y)
    }

    /// All cover pairs, ordered by lower element then upper element.
    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.len() {
            for &y in &self.upper_covers[x] {
                out.push((x, y));
            }
        }
        out
    }

    pub fn cover_names(&self) -> Vec<(String, String)> {
        self.cover_pairs()
            .into_iter()
            .map(|(x, y)| (self.names[x].clone(), self.names[y].clone()))
            .collect()
    }

    pub fn bottom(&self) -> Option<usize> {
        self.bottom
    }

    pub fn top(&self) -> Option<usize> {
        self.top
    }

    pub fn bounds(&self) -> Result<(usize, usize), PosetError> {
        match (self.bottom, self.top) {
            (Some(b), Some(t)) => Ok((b, t)),
            _ => Err(PosetError::Unbounded),
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.bottom.is_some() && self.top.is_some()
    }

    /// Elements strictly between bottom and top.
    pub fn proper_part(&self) -> Result<Vec<usize>, PosetError> {
        let (b, t) = self.bounds()?;
        Ok((0..self.len()).filter(|&i| i != b && i != t).collect())
    }

    /// The induced subposet on `keep`, listed in this poset's order.
    pub fn induced(&self, keep: &[usize]) -> Poset {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let names: Vec<String> = keep.iter().map(|&i| self.names[i].clone()).collect();
        Poset::from_relation(names, |a, b| self.leq(keep[a], keep[b]))
            .expect("induced subrelation of a partial order is a partial order")
    }

    /// The closed interval `[x, y]` as an induced subposet.
    pub fn interval(&self, x: usize, y: usize) -> Result<Poset, PosetError> {
        if !self.leq(x, y) {
            return Err(PosetError::NotComparable(self.names[x].clone(), self.names[y].clone()));
        }
        Ok(self.induced(&self.interval_members(x, y)))
    }

    pub fn interval_members(&self, x: usize, y: usize) -> Vec<usize> {
        let mut set = self.up[x].clone();
        set.intersect_with(&self.down[y]);
        set.ones().collect()
    }

    /// Removes the given elements.
    pub fn without(&self, remove: &[usize]) -> Poset {
        let keep: Vec<usize> = (0..self.len()).filter(|i| !remove.contains(i)).collect();
        self.induced(&keep)
    }

    /// The order dual, keeping element names and order.
    pub fn dual(&self) -> Poset {
        Poset::from_relation(self.names.clone(), |a, b| self.leq(b, a))
            .expect("dual of a partial order is a partial order")
    }

    /// Maximal chains from bottom to top in depth-first order by element
    /// index.
    pub fn maximal_chains(&self) -> Result<Vec<Chain>, PosetError> {
        self.maximal_chains_limited(usize::MAX)
    }

    pub fn maximal_chains_limited(&self, limit: usize) -> Result<Vec<Chain>, PosetError> {
        let (b, t) = self.bounds()?;
        self.saturated_chains(b, t, limit)
    }

    /// All saturated chains from `x` to `y`, in depth-first order.
    pub fn saturated_chains(&self, x: usize, y: usize, limit: usize) -> Result<Vec<Chain>, PosetError> {
        if !self.leq(x, y) {
            return Err(PosetError::NotComparable(self.names[x].clone(), self.names[y].clone()));
        }
        let mut out = Vec::new();
        let mut path = vec![x];
        self.chain_dfs(y, &mut path, &mut out, limit)?;
        Ok(out)
    }

    fn chain_dfs(&self, target: usize, path: &mut Vec<usize>, out: &mut Vec<Chain>, limit: usize) -> Result<(), PosetError> {
        let last = *path.last().unwrap();
        if last == target {
            if out.len() >= limit {
                return Err(PosetError::ChainLimit(limit));
            }
            out.push(Chain(path.clone()));
            return Ok(());
        }
        for &next in &self.upper_covers[last] {
            if self.leq(next, target) {
                path.push(next);
                self.chain_dfs(target, path, out, limit)?;
                path.pop();
            }
        }
        Ok(())
    }

    /// Number of maximal chains, counted without enumerating them.
    pub fn count_maximal_chains(&self) -> Result<u128, PosetError> {
        let (b, t) = self.bounds()?;
        let order = self.linear_extension();
        let mut count = vec![0u128; self.len()];
        count[t] = 1;
        for &x in order.iter().rev() {
            if x != t {
                count[x] = self.upper_covers[x].iter().map(|&y| count[y]).sum();
            }
        }
        Ok(count[b])
    }

    /// A linear extension: elements sorted by the size of their down-sets,
    /// ties broken by index.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| (self.down[i].count_ones(..), i));
        order
    }

    /// Shortest and longest maximal chain lengths, by dynamic programming.
    pub fn chain_length_range(&self) -> Result<(usize, usize), PosetError> {
        let (short, long) = self.extremal_chains()?;
        Ok((short.length(), long.length()))
    }

    /// A shortest and a longest maximal chain.
    pub fn extremal_chains(&self) -> Result<(Chain, Chain), PosetError> {
        let (b, t) = self.bounds()?;
        let order = self.linear_extension();
        let n = self.len();
        let mut shortest = vec![usize::MAX; n];
        let mut longest = vec![0usize; n];
        let mut short_pred = vec![usize::MAX; n];
        let mut long_pred = vec![usize::MAX; n];
        shortest[b] = 0;
        for &x in &order {
            if shortest[x] == usize::MAX {
                continue;
            }
            for &y in &self.upper_covers[x] {
                if shortest[x] + 1 < shortest[y] {
                    shortest[y] = shortest[x] + 1;
                    short_pred[y] = x;
                }
                if long_pred[y] == usize::MAX || longest[x] + 1 > longest[y] {
                    longest[y] = longest[x] + 1;
                    long_pred[y] = x;
                }
            }
        }
        let rebuild = |pred: &[usize]| {
            let mut chain = vec![t];
            let mut cur = t;
            while cur != b {
                cur = pred[cur];
                chain.push(cur);
            }
            chain.reverse();
            Chain(chain)
        };
        Ok((rebuild(&short_pred), rebuild(&long_pred)))
    }

    /// Decides gradedness. A graded poset gets its rank function; otherwise
    /// two maximal chains of different lengths are returned.
    pub fn grading(&self) -> Result<Grading, PosetError> {
        let (b, _) = self.bounds()?;
        let (shorter, longer) = self.extremal_chains()?;
        if shorter.length() != longer.length() {
            return Ok(Grading::NotGraded { shorter, longer });
        }
        // All maximal chains share a length, so the distance from bottom is
        // well defined; any saturated chain from bottom computes it.
        let order = self.linear_extension();
        let mut rank = vec![usize::MAX; self.len()];
        rank[b] = 0;
        for &x in &order {
            for &y in &self.upper_covers[x] {
                if rank[y] == usize::MAX {
                    rank[y] = rank[x] + 1;
                }
            }
        }
        Ok(Grading::Graded { rank })
    }

    pub fn is_graded(&self) -> Result<bool, PosetError> {
        Ok(self.grading()?.is_graded())
    }

    /// Atoms: upper covers of the bottom element.
    pub fn atoms(&self) -> Result<Vec<usize>, PosetError> {
        let (b, _) = self.bounds()?;
        Ok(self.upper_covers[b].clone())
    }

    pub fn is_maximal_chain(&self, chain: &[usize]) -> bool {
        match self.bounds() {
            Ok((b, t)) => {
                chain.first() == Some(&b)
                    && chain.last() == Some(&t)
                    && chain.windows(2).all(|w| self.is_cover(w[0], w[1]))
            }
            Err(_) => false,
        }
    }

    pub fn chain_names(&self, chain: &[usize]) -> Vec<String> {
        chain.iter().map(|&i| self.names[i].clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_chain() -> Poset {
        Poset::build(&["0", "a", "1"], &[("0", "a"), ("a", "1")]).unwrap()
    }

    fn n5() -> Poset {
        Poset::build(
            &["0", "a", "b", "c", "1"],
            &[("0", "a"), ("a", "1"), ("0", "b"), ("b", "c"), ("c", "1")],
        )
        .unwrap()
    }

    #[test]
    fn three_chain_bounds() {
        let p = three_chain();
        assert_eq!(p.bottom(), Some(0));
        assert_eq!(p.top(), Some(2));
        assert!(p.leq(0, 2));
    }

    #[test]
    fn two_cycle_is_rejected() {
        let err = Poset::build(&["0", "a"], &[("0", "a"), ("a", "0")]).unwrap_err();
        assert!(matches!(err, PosetError::CycleDetected(_)));
    }

    #[test]
    fn redundant_and_duplicate_inputs() {
        let err = Poset::build(&["0", "a", "1"], &[("0", "a"), ("a", "1"), ("0", "1")]).unwrap_err();
        assert_eq!(err, PosetError::RedundantCover("0".into(), "1".into()));
        let err = Poset::build(&["0", "0"], &[]).unwrap_err();
        assert_eq!(err, PosetError::DuplicateElement("0".into()));
        let err = Poset::build(&["0"], &[("0", "z")]).unwrap_err();
        assert_eq!(err, PosetError::UnknownElement("z".into()));
    }

    #[test]
    fn n5_chains_and_grading() {
        let p = n5();
        let chains = p.maximal_chains().unwrap();
        let lens: Vec<usize> = chains.iter().map(|c| c.length()).collect();
        assert_eq!(lens, vec![2, 3]);
        match p.grading().unwrap() {
            Grading::NotGraded { shorter, longer } => {
                assert_eq!(shorter.length(), 2);
                assert_eq!(longer.length(), 3);
            }
            Grading::Graded { .. } => panic!("N5 is not graded"),
        }
    }

    #[test]
    fn degenerate_interval() {
        let p = three_chain();
        let i = p.interval(1, 1).unwrap();
        assert_eq!(i.len(), 1);
        assert_eq!(i.bottom(), i.top());
        assert!(p.interval(2, 1).is_err());
    }

    #[test]
    fn three_chain_ranks() {
        match three_chain().grading().unwrap() {
            Grading::Graded { rank } => assert_eq!(rank, vec![0, 1, 2]),
            _ => panic!(),
        }
    }

    #[test]
    fn unbounded_chains_error() {
        let p = Poset::build(&["a", "b"], &[]).unwrap();
        assert_eq!(p.maximal_chains().unwrap_err(), PosetError::Unbounded);
    }

    #[test]
    fn chain_count_matches_enumeration() {
        let p = n5();
        assert_eq!(p.count_maximal_chains().unwrap(), 2);
    }
}

//! Meet/join tables, modular and left-modular elements, complements, and
//! distributivity of generated sublattices.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use fixedbitset::FixedBitSet;
use serde::Serialize;
use thiserror::Error;

use crate::poset::{Chain, Poset, PosetError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error("not a lattice: `{0}` and `{1}` have {2}")]
    NotALattice(String, String, String),
    #[error("elements do not form a chain from bottom to top: {0}")]
    NotAChain(String),
    #[error("`{element}` is not left-modular: ({element}, {partner}) fails at z = `{witness}`")]
    NotLeftModular {
        element: String,
        partner: String,
        witness: String,
    },
}

/// A bounded poset with total meet and join tables.
#[derive(Debug, Clone)]
pub struct Lattice {
    poset: Poset,
    meet: Vec<usize>,
    join: Vec<usize>,
    fingerprint: u64,
}

/// Why a pair fails to be a modular pair: `(y ∨ x) ∧ z != y ∨ (x ∧ z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairWitness {
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Modularity {
    pub left_modular: bool,
    pub modular: bool,
    /// First failing pair `(x, y)` when not left-modular.
    pub left_witness: Option<PairWitness>,
    /// First failing pair `(y, x)` when left-modular but not modular.
    pub right_witness: Option<PairWitness>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChainKind {
    LeftModular,
    TwoSidedModular,
}

/// A verified chain `0̂ = m_0 < m_1 < … < m_r = 1̂` of (left-)modular
/// elements. Only [`Lattice::verify_chain_modularity`] constructs one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModularChain {
    elements: Vec<usize>,
    kind: ChainKind,
    lattice: u64,
}

impl ModularChain {
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn kind(&self) -> ChainKind {
        self.kind
    }

    /// Number of gaps `r`.
    pub fn len(&self) -> usize {
        self.elements.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn belongs_to(&self, lattice: &Lattice) -> bool {
        self.lattice == lattice.fingerprint
    }
}

impl Lattice {
    /// Computes meet and join tables, failing with the first pair that lacks
    /// a unique meet or join.
    pub fn new(poset: Poset) -> Result<Lattice, LatticeError> {
        poset.bounds()?;
        let n = poset.len();
        let mut meet = vec![0usize; n * n];
        let mut join = vec![0usize; n * n];
        for x in 0..n {
            for y in x..n {
                let m = extremum(&poset, x, y, true)?;
                let j = extremum(&poset, x, y, false)?;
                meet[x * n + y] = m;
                meet[y * n + x] = m;
                join[x * n + y] = j;
                join[y * n + x] = j;
            }
        }
        let mut hasher = DefaultHasher::new();
        poset.names().hash(&mut hasher);
        for x in 0..n {
            poset.up_set(x).as_slice().hash(&mut hasher);
        }
        Ok(Lattice {
            poset,
            meet,
            join,
            fingerprint: hasher.finish(),
        })
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    pub fn bottom(&self) -> usize {
        self.poset.bottom().expect("lattices are bounded")
    }

    pub fn top(&self) -> usize {
        self.poset.top().expect("lattices are bounded")
    }

    #[inline]
    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.len() + y]
    }

    #[inline]
    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.len() + y]
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.poset.leq(x, y)
    }

    pub fn dual(&self) -> Lattice {
        Lattice::new(self.poset.dual()).expect("dual of a lattice is a lattice")
    }

    fn check_index(&self, x: usize) -> Result<(), LatticeError> {
        if x < self.len() {
            Ok(())
        } else {
            Err(PosetError::UnknownElement(format!("#{x}")).into())
        }
    }

    /// First `z >= y` where `(y ∨ x) ∧ z != y ∨ (x ∧ z)`.
    pub fn modular_pair_witness(&self, x: usize, y: usize) -> Option<usize> {
        let yx = self.join(y, x);
        self.poset
            .up_set(y)
            .ones()
            .find(|&z| self.meet(yx, z) != self.join(y, self.meet(x, z)))
    }

    pub fn is_modular_pair(&self, x: usize, y: usize) -> Result<bool, LatticeError> {
        self.check_index(x)?;
        self.check_index(y)?;
        Ok(self.modular_pair_witness(x, y).is_none())
    }

    pub fn classify_modularity(&self, x: usize) -> Result<Modularity, LatticeError> {
        self.check_index(x)?;
        let n = self.len();
        let left_witness = (0..n).find_map(|y| self.modular_pair_witness(x, y).map(|z| PairWitness { x, y, z }));
        let right_witness = if left_witness.is_none() {
            (0..n).find_map(|y| self.modular_pair_witness(y, x).map(|z| PairWitness { x: y, y: x, z }))
        } else {
            None
        };
        Ok(Modularity {
            left_modular: left_witness.is_none(),
            modular: left_witness.is_none() && right_witness.is_none(),
            left_witness,
            right_witness,
        })
    }

    pub fn is_left_modular(&self, x: usize) -> bool {
        (0..self.len()).all(|y| self.modular_pair_witness(x, y).is_none())
    }

    pub fn is_modular(&self, x: usize) -> bool {
        self.is_left_modular(x) && (0..self.len()).all(|y| self.modular_pair_witness(y, x).is_none())
    }

    /// Validates a chain from bottom to top and classifies it as two-sided
    /// modular when every element is modular, else left-modular.
    pub fn verify_chain_modularity(&self, chain: &[usize]) -> Result<ModularChain, LatticeError> {
        let names = |c: &[usize]| {
            c.iter()
                .map(|&i| self.poset.names().get(i).cloned().unwrap_or_else(|| format!("#{i}")))
                .collect::<Vec<_>>()
                .join(",")
        };
        if chain.len() < 2
            || chain.iter().any(|&i| i >= self.len())
            || chain[0] != self.bottom()
            || *chain.last().unwrap() != self.top()
            || chain.windows(2).any(|w| !self.poset.lt(w[0], w[1]))
        {
            return Err(LatticeError::NotAChain(names(chain)));
        }
        let mut kind = ChainKind::TwoSidedModular;
        for &m in chain {
            let class = self.classify_modularity(m)?;
            if let Some(w) = class.left_witness {
                return Err(LatticeError::NotLeftModular {
                    element: self.poset.name(m).to_string(),
                    partner: self.poset.name(w.y).to_string(),
                    witness: self.poset.name(w.z).to_string(),
                });
            }
            if !class.modular {
                kind = ChainKind::LeftModular;
            }
        }
        Ok(ModularChain {
            elements: chain.to_vec(),
            kind,
            lattice: self.fingerprint,
        })
    }

    pub fn verify_chain_by_name<S: AsRef<str>>(&self, chain: &[S]) -> Result<ModularChain, LatticeError> {
        let ids = chain
            .iter()
            .map(|s| self.poset.require(s.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        self.verify_chain_modularity(&ids)
    }

    /// All `y` with `x ∧ y = 0̂` and `x ∨ y = 1̂`.
    pub fn complements(&self, x: usize) -> Result<Vec<usize>, LatticeError> {
        self.check_index(x)?;
        let (b, t) = (self.bottom(), self.top());
        Ok((0..self.len())
            .filter(|&y| self.meet(x, y) == b && self.join(x, y) == t)
            .collect())
    }

    /// Chains containing a complement to each interior element
    /// `m_1, …, m_{r-1}` of `m`, and consisting only of such complements.
    /// The forced complements of `0̂` and `1̂` are not listed. Distinct
    /// elements of `m` may share a complement.
    pub fn chains_of_complements(&self, m: &ModularChain) -> Vec<Chain> {
        let interior = &m.elements()[1..m.elements().len() - 1];
        let options: Vec<Vec<usize>> = interior
            .iter()
            .map(|&mi| self.complements(mi).expect("chain elements are valid"))
            .collect();
        let mut found: Vec<Vec<usize>> = Vec::new();
        let mut picked: Vec<usize> = Vec::new();
        self.complement_dfs(&options, 0, &mut picked, &mut found);
        let mut out: Vec<Vec<usize>> = found
            .into_iter()
            .map(|mut c| {
                c.sort_by_key(|&e| (self.poset.down_set(e).count_ones(..), e));
                c.dedup();
                c
            })
            .collect();
        out.sort();
        out.dedup();
        out.into_iter().map(Chain::new).collect()
    }

    fn complement_dfs(&self, options: &[Vec<usize>], depth: usize, picked: &mut Vec<usize>, found: &mut Vec<Vec<usize>>) {
        if depth == options.len() {
            found.push(picked.clone());
            return;
        }
        for &y in &options[depth] {
            if picked.iter().all(|&p| self.poset.comparable(p, y)) {
                picked.push(y);
                self.complement_dfs(options, depth + 1, picked, found);
                picked.pop();
            }
        }
    }

    /// Maximal chains of the lattice that contain every element of `c`.
    pub fn maximal_refinements(&self, c: &[usize]) -> Vec<Chain> {
        let mut points: Vec<usize> = c.to_vec();
        points.push(self.bottom());
        points.push(self.top());
        points.sort_by_key(|&e| (self.poset.down_set(e).count_ones(..), e));
        points.dedup();
        let mut chains: Vec<Vec<usize>> = vec![vec![points[0]]];
        for w in points.windows(2) {
            let segs = self
                .poset
                .saturated_chains(w[0], w[1], usize::MAX)
                .expect("points form a chain");
            let mut next = Vec::with_capacity(chains.len() * segs.len());
            for prefix in &chains {
                for seg in &segs {
                    let mut full = prefix.clone();
                    full.extend_from_slice(&seg[1..]);
                    next.push(full);
                }
            }
            chains = next;
        }
        chains.into_iter().map(Chain::new).collect()
    }

    /// Closure of `seed` under meet and join, as a lattice.
    pub fn generated_sublattice(&self, seed: &[usize]) -> Lattice {
        let n = self.len();
        let mut set = FixedBitSet::with_capacity(n);
        for &s in seed {
            set.insert(s);
        }
        loop {
            let members: Vec<usize> = set.ones().collect();
            let mut grew = false;
            for (i, &a) in members.iter().enumerate() {
                for &b in &members[i..] {
                    for c in [self.meet(a, b), self.join(a, b)] {
                        if !set.contains(c) {
                            set.insert(c);
                            grew = true;
                        }
                    }
                }
            }
            if !grew {
                break;
            }
        }
        let members: Vec<usize> = set.ones().collect();
        Lattice::new(self.poset.induced(&members)).expect("a sublattice is a lattice")
    }

    /// Exhaustive check of `x ∧ (y ∨ z) = (x ∧ y) ∨ (x ∧ z)`.
    pub fn is_distributive(&self) -> bool {
        self.distributivity_witness().is_none()
    }

    pub fn distributivity_witness(&self) -> Option<(usize, usize, usize)> {
        let n = self.len();
        for x in 0..n {
            for y in 0..n {
                for z in y..n {
                    if self.meet(x, self.join(y, z)) != self.join(self.meet(x, y), self.meet(x, z)) {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    pub fn name(&self, x: usize) -> &str {
        self.poset.name(x)
    }
}

/// Meet (`lower = true`) or join of `x` and `y`: the unique maximal common
/// lower bound, or minimal common upper bound.
fn extremum(poset: &Poset, x: usize, y: usize, lower: bool) -> Result<usize, LatticeError> {
    let (sx, sy) = if lower {
        (poset.down_set(x), poset.down_set(y))
    } else {
        (poset.up_set(x), poset.up_set(y))
    };
    let mut common = sx.clone();
    common.intersect_with(sy);
    let what = if lower { "meet" } else { "join" };
    let mut best = None;
    for c in common.ones() {
        let reach = if lower { poset.down_set(c) } else { poset.up_set(c) };
        if reach.is_superset(&common) {
            best = Some(c);
            break;
        }
    }
    best.ok_or_else(|| {
        let count = common.count_ones(..);
        let reason = if count == 0 {
            format!("no common {} bound", if lower { "lower" } else { "upper" })
        } else {
            format!("no unique {what}")
        };
        LatticeError::NotALattice(poset.name(x).to_string(), poset.name(y).to_string(), reason)
    })
}

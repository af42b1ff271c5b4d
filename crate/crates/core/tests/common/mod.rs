//! Test suite lattices and brute-force oracles written directly from the
//! definitions, independent of the library's own checks.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use modchain::families;
use modchain::groups::{self, GroupLattice};
use modchain::{EdgeLabeling, Lattice, Poset};

pub struct SuiteEntry {
    pub name: &'static str,
    pub lattice: Lattice,
    /// A left-modular chain of the lattice, by element name.
    pub chain: Vec<String>,
    pub group: Option<GroupLattice>,
}

fn plain(name: &'static str, lattice: Lattice, chain: &[&str]) -> SuiteEntry {
    SuiteEntry {
        name,
        lattice,
        chain: chain.iter().map(|s| s.to_string()).collect(),
        group: None,
    }
}

pub fn group_entry(name: &'static str, g: &groups::PermGroup) -> SuiteEntry {
    let gl = groups::subgroup_lattice(g, groups::DEFAULT_ORDER_LIMIT).unwrap();
    SuiteEntry {
        name,
        lattice: gl.lattice().clone(),
        chain: gl.chief_series_names(),
        group: Some(gl),
    }
}

/// 3-chain, B₂, B₃, M₃, N₅, Π₄, L(S₃), L(A₄), L(S₄).
pub fn suite() -> Vec<SuiteEntry> {
    vec![
        plain("3-chain", families::three_chain(), &["0", "a", "1"]),
        plain("B2", families::b2(), &["0", "1", "12"]),
        plain("B3", families::boolean(3), &["0", "1", "12", "123"]),
        plain("M3", families::m3(), &["0", "a", "1"]),
        plain("N5", families::n5(), &["0", "b", "c", "1"]),
        plain("Pi4", families::pi4(), &families::PI4_CHAIN),
        group_entry("L(S3)", &groups::symmetric(3)),
        group_entry("L(A4)", &groups::alternating(4)),
        group_entry("L(S4)", &groups::symmetric(4)),
    ]
}

pub fn ids(p: &Poset, names: &[String]) -> Vec<usize> {
    names.iter().map(|n| p.index_of(n).unwrap()).collect()
}

/// `λ(y ⋖ z) = min{i : y ∨ (m_i ∧ z) = z}`, evaluated from the meet and
/// join tables.
pub fn oracle_modular_labels(l: &Lattice, m: &[usize]) -> EdgeLabeling {
    let p = l.poset();
    EdgeLabeling::from_fn(p, |y, z| {
        (1..m.len()).find(|&i| l.join(y, l.meet(m[i], z)) == z).expect("m ends at the top") as i64
    })
}

pub fn labels_of(p: &Poset, lab: &EdgeLabeling, c: &[usize]) -> Vec<i64> {
    c.windows(2).map(|w| *lab.get(p.name(w[0]), p.name(w[1])).unwrap()).collect()
}

fn ascending(s: &[i64]) -> bool {
    s.windows(2).all(|w| w[0] <= w[1])
}

/// Quasi-EL straight from the definition: on each interval some weakly
/// ascending maximal chain exists, some chain `a` is refined by every one of
/// them, each gap of `a` carries one label, and the maximal extensions of
/// `a` come strictly before every other maximal chain.
pub fn oracle_quasi_el(p: &Poset, lab: &EdgeLabeling) -> bool {
    for x in 0..p.len() {
        for y in 0..p.len() {
            if !p.lt(x, y) {
                continue;
            }
            let chains = p.saturated_chains(x, y, usize::MAX).unwrap();
            let seqs: Vec<Vec<i64>> = chains.iter().map(|c| labels_of(p, lab, c)).collect();
            let asc: Vec<usize> = (0..chains.len()).filter(|&i| ascending(&seqs[i])).collect();
            if asc.is_empty() {
                return false;
            }
            let common: Vec<usize> = chains[asc[0]]
                .iter()
                .copied()
                .filter(|e| asc.iter().all(|&i| chains[i].contains(e)))
                .collect();
            let inner = &common[1..common.len() - 1];
            let candidates: Vec<Vec<usize>> = (0u32..1 << inner.len())
                .map(|mask| {
                    let mut a = vec![x];
                    a.extend((0..inner.len()).filter(|k| mask >> k & 1 == 1).map(|k| inner[k]));
                    a.push(y);
                    a
                })
                .collect();
            let ok = candidates.iter().any(|a| {
                let refines = asc.iter().all(|&i| a.iter().all(|e| chains[i].contains(e)));
                let uniform = a.windows(2).all(|w| {
                    let gap: BTreeSet<i64> = p
                        .cover_pairs()
                        .into_iter()
                        .filter(|&(s, t)| p.leq(w[0], s) && p.leq(t, w[1]))
                        .map(|(s, t)| *lab.get(p.name(s), p.name(t)).unwrap())
                        .collect();
                    gap.len() == 1
                });
                let (ext, other): (Vec<usize>, Vec<usize>) =
                    (0..chains.len()).partition(|&i| a.iter().all(|e| chains[i].contains(e)));
                let first = ext.iter().all(|&i| other.iter().all(|&j| seqs[i] < seqs[j]));
                refines && uniform && first
            });
            if !ok {
                return false;
            }
        }
    }
    true
}

/// Minimal skipped intervals from the definition: all pairs `i ≤ j`,
/// endpoints included, against chains strictly earlier under `(λ, index)`.
pub fn oracle_msis(p: &Poset, lab: &EdgeLabeling, c: &[usize]) -> BTreeSet<(usize, usize)> {
    let key = |d: &[usize]| -> Vec<(i64, usize)> { d.windows(2).map(|w| (*lab.get(p.name(w[0]), p.name(w[1])).unwrap(), w[1])).collect() };
    let chains = p.maximal_chains().unwrap();
    let mine = key(c);
    let earlier: Vec<BTreeSet<usize>> = chains
        .iter()
        .filter(|d| key(d) < mine)
        .map(|d| d.iter().copied().collect())
        .collect();
    let len = c.len() - 1;
    if earlier.is_empty() {
        return BTreeSet::from([(0, len)]);
    }
    let skipped = |i: usize, j: usize| {
        let rest: BTreeSet<usize> = c.iter().enumerate().filter(|&(k, _)| k < i || k > j).map(|(_, &e)| e).collect();
        earlier.iter().any(|s| rest.is_subset(s))
    };
    let all: Vec<(usize, usize)> = (0..=len).flat_map(|i| (i..=len).map(move |j| (i, j))).filter(|&(i, j)| skipped(i, j)).collect();
    all.iter()
        .copied()
        .filter(|&(i, j)| !all.iter().any(|&(a, b)| (a, b) != (i, j) && i <= a && b <= j))
        .collect()
}

/// `μ(0̂, 1̂)`, which equals the reduced Euler characteristic of the order
/// complex.
pub fn mobius(p: &Poset) -> i64 {
    let (b, t) = p.bounds().unwrap();
    let mut mu: HashMap<usize, i64> = HashMap::new();
    let mut order: Vec<usize> = (0..p.len()).filter(|&x| p.leq(b, x)).collect();
    order.sort_by_key(|&x| p.down_set(x).count_ones(..));
    for &x in &order {
        let v = if x == b {
            1
        } else {
            -order.iter().filter(|&&y| p.lt(y, x)).map(|y| mu[y]).sum::<i64>()
        };
        mu.insert(x, v);
    }
    mu[&t]
}

/// Chains `0̂ = m_0 < … < m_r = 1̂` drawn from `allowed`.
pub fn chains_through(p: &Poset, allowed: &[usize]) -> Vec<Vec<usize>> {
    let (b, t) = p.bounds().unwrap();
    let mut out = Vec::new();
    fn go(p: &Poset, allowed: &[usize], t: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let last = *cur.last().unwrap();
        if last == t {
            out.push(cur.clone());
            return;
        }
        for &z in allowed {
            if p.lt(last, z) {
                cur.push(z);
                go(p, allowed, t, cur, out);
                cur.pop();
            }
        }
    }
    go(p, allowed, t, &mut vec![b], &mut out);
    out
}

/// Left-modular elements by the definition: `(y ∨ x) ∧ z = y ∨ (x ∧ z)`
/// for all `y ≤ z`.
pub fn oracle_left_modular(l: &Lattice) -> Vec<usize> {
    let n = l.len();
    (0..n)
        .filter(|&x| {
            (0..n).all(|y| (0..n).filter(|&z| l.leq(y, z)).all(|z| l.meet(l.join(y, x), z) == l.join(y, l.meet(x, z))))
        })
        .collect()
}

pub fn verdict(id: &str, title: &str, ok: bool, detail: &str) {
    println!("acceptance {id} [{}] {title}: {detail}", if ok { "PASS" } else { "FAIL" });
}

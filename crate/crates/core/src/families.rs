//! Small standard lattices used throughout the tests and the CLI.

use crate::labeling::EdgeLabeling;
use crate::lattice::Lattice;
use crate::poset::Poset;

fn lattice(elements: &[&str], covers: &[(&str, &str)]) -> Lattice {
    Lattice::new(Poset::build(elements, covers).expect("valid family")).expect("family is a lattice")
}

/// `0 < a < 1`.
pub fn three_chain() -> Lattice {
    lattice(&["0", "a", "1"], &[("0", "a"), ("a", "1")])
}

/// A chain with `n` covers, elements `c0 < c1 < … < cn`.
pub fn chain(n: usize) -> Lattice {
    let names: Vec<String> = (0..=n).map(|i| format!("c{i}")).collect();
    let covers: Vec<(String, String)> = (0..n).map(|i| (names[i].clone(), names[i + 1].clone())).collect();
    Lattice::new(Poset::build(&names, &covers).expect("valid chain")).expect("chains are lattices")
}

/// Bottom, three atoms, top.
pub fn m3() -> Lattice {
    lattice(
        &["0", "a", "b", "c", "1"],
        &[("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")],
    )
}

/// The pentagon `0 < a < 1`, `0 < b < c < 1`.
pub fn n5() -> Lattice {
    lattice(
        &["0", "a", "b", "c", "1"],
        &[("0", "a"), ("a", "1"), ("0", "b"), ("b", "c"), ("c", "1")],
    )
}

fn subset_name(mask: u32) -> String {
    if mask == 0 {
        return "0".to_string();
    }
    (0..32).filter(|i| mask >> i & 1 == 1).map(|i| char::from_digit(i + 1, 10).unwrap()).collect()
}

fn subsets_by_size(n: usize) -> Vec<u32> {
    let mut masks: Vec<u32> = (0..1u32 << n).collect();
    masks.sort_by_key(|&m| (m.count_ones(), subset_name(m)));
    masks
}

/// Subsets of `{1, …, n}` named by their digits, `"0"` for the empty set.
pub fn boolean(n: usize) -> Lattice {
    assert!(n <= 9, "subset names use one digit per element");
    let masks = subsets_by_size(n);
    let names = masks.iter().map(|&m| subset_name(m)).collect();
    let poset = Poset::from_relation(names, |a, b| masks[a] & !masks[b] == 0).expect("subset order");
    Lattice::new(poset).expect("Boolean lattices are lattices")
}

pub fn b2() -> Lattice {
    boolean(2)
}

/// Label each cover `S ⋖ S ∪ {i}` with `i`.
pub fn boolean_labeling(n: usize) -> EdgeLabeling {
    let mut lab = EdgeLabeling::new();
    for m in 0..1u32 << n {
        for i in 0..n {
            if m >> i & 1 == 0 {
                lab.insert(subset_name(m), subset_name(m | 1 << i), i as i64 + 1);
            }
        }
    }
    lab
}

/// The same labeling for every cover.
pub fn constant_labeling(poset: &Poset, label: i64) -> EdgeLabeling {
    EdgeLabeling::from_fn(poset, |_, _| label)
}

/// Set partitions of `{1, …, n}`, ordered by refinement. Blocks are written
/// in order of their least element and separated by `|`, e.g. `12|3|4`.
pub fn partition_lattice(n: usize) -> Lattice {
    assert!((1..=9).contains(&n));
    let mut parts: Vec<Vec<usize>> = Vec::new();
    let mut rgs = vec![0usize; n];
    restricted_growth(&mut rgs, 1, 0, &mut parts);
    parts.sort_by(|a, b| {
        let ka = a.iter().max().unwrap();
        let kb = b.iter().max().unwrap();
        kb.cmp(ka).then_with(|| partition_name(a).cmp(&partition_name(b)))
    });
    let names = parts.iter().map(|p| partition_name(p)).collect();
    // a refines b iff elements sharing a block in a share one in b
    let poset = Poset::from_relation(names, |a, b| {
        let (pa, pb) = (&parts[a], &parts[b]);
        (0..n).all(|i| (0..n).all(|j| pa[i] != pa[j] || pb[i] == pb[j]))
    })
    .expect("refinement order");
    Lattice::new(poset).expect("partition lattices are lattices")
}

fn restricted_growth(rgs: &mut Vec<usize>, pos: usize, max: usize, out: &mut Vec<Vec<usize>>) {
    if pos == rgs.len() {
        out.push(rgs.clone());
        return;
    }
    for b in 0..=max + 1 {
        rgs[pos] = b;
        restricted_growth(rgs, pos + 1, max.max(b), out);
    }
}

fn partition_name(rgs: &[usize]) -> String {
    let blocks = rgs.iter().max().unwrap() + 1;
    (0..blocks)
        .map(|b| {
            rgs.iter()
                .enumerate()
                .filter(|&(_, &x)| x == b)
                .map(|(i, _)| char::from_digit(i as u32 + 1, 10).unwrap())
                .collect::<String>()
        })
        .collect::<Vec<_>>()
        .join("|")
}

pub fn pi4() -> Lattice {
    partition_lattice(4)
}

/// A left-modular maximal chain of `Π₄`.
pub const PI4_CHAIN: [&str; 4] = ["1|2|3|4", "12|3|4", "123|4", "1234"];

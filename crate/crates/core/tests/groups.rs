//! Topological solvability verdicts against a commutator-subgroup oracle.

use std::collections::BTreeSet;

use modchain::groups::{self, PermGroup};
use modchain::Perm;

/// Closure of the commutators `[a, b]` for `a, b` in `h`.
fn commutator_subgroup(h: &BTreeSet<Perm>) -> BTreeSet<Perm> {
    let mut out: BTreeSet<Perm> = h.iter().flat_map(|a| h.iter().map(move |b| a.inverse().then(&b.inverse()).then(a).then(b))).collect();
    loop {
        let next: BTreeSet<Perm> = out.iter().flat_map(|a| out.iter().map(move |b| a.then(b))).collect();
        if next.len() == out.len() {
            return out;
        }
        out = next;
    }
}

fn solvable_oracle(g: &PermGroup) -> bool {
    let mut h: BTreeSet<Perm> = g.elements().iter().cloned().collect();
    loop {
        let d = commutator_subgroup(&h);
        if d.len() == 1 {
            return true;
        }
        if d.len() == h.len() {
            return false;
        }
        h = d;
    }
}

fn zoo() -> Vec<(String, PermGroup)> {
    let mut out: Vec<(String, PermGroup)> = (2..=12).map(|n| (format!("C{n}"), groups::cyclic(n))).collect();
    out.extend((3..=8).map(|n| (format!("D{n}"), groups::dihedral(n))));
    out.push(("C2xC2".into(), groups::klein_four()));
    out.push(("S3".into(), groups::symmetric(3)));
    out.push(("A4".into(), groups::alternating(4)));
    out.push(("S4".into(), groups::symmetric(4)));
    out.push(("A5".into(), groups::alternating(5)));
    out
}

#[test]
fn trivial_group_rejected() {
    let g = groups::cyclic(1);
    assert!(matches!(groups::subgroup_lattice(&g, 10), Err(groups::GroupError::TrivialGroup)));
}

#[test]
fn verdicts_match_derived_series() {
    for (name, g) in zoo() {
        let gl = groups::subgroup_lattice(&g, groups::DEFAULT_ORDER_LIMIT).unwrap();
        let expected = solvable_oracle(&g);
        assert_eq!(gl.is_solvable(), expected, "{name}");
        let d = groups::solvability_by_depth(&gl, 2_000_000).unwrap();
        assert_eq!(d.solvable_by_depth, expected, "{name}: {d:?}");
        let s = groups::skeleton_shellability_criterion(&gl, 2_000_000).unwrap();
        assert_eq!(s.solvable_by_criterion, expected, "{name}: {s:?}");
        if expected {
            assert_eq!(d.depth, gl.r() as isize - 2, "{name}: {d:?}");
        }
    }
}

#[test]
fn chief_series_length_is_composition_length_for_solvable_groups() {
    // for solvable groups every chief factor is elementary abelian, so the
    // chief length counts prime-power steps rather than prime factors
    for (name, g) in zoo() {
        if !solvable_oracle(&g) {
            continue;
        }
        let gl = groups::subgroup_lattice(&g, groups::DEFAULT_ORDER_LIMIT).unwrap();
        let series = gl.chief_series().elements().to_vec();
        for w in series.windows(2) {
            let index = gl.order_of(w[1]) / gl.order_of(w[0]);
            let p = (2..=index).find(|&q| index.is_multiple_of(q)).unwrap();
            let mut k = index;
            while k.is_multiple_of(p) {
                k /= p;
            }
            assert_eq!(k, 1, "{name}: chief factor of order {index} is not a prime power");
        }
    }
}

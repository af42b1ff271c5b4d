//! Permutations of `{1..n}` in cycle notation, and groups given by
//! generators.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use super::GroupError;

/// Images of `0..n`; printed and parsed 1-based.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm(Vec<u8>);

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm((0..n as u8).collect())
    }

    pub fn from_images(images: Vec<u8>) -> Result<Perm, GroupError> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let slot = seen
                .get_mut(i as usize)
                .ok_or_else(|| GroupError::NotAPermutation(format!("{images:?}")))?;
            if std::mem::replace(slot, true) {
                return Err(GroupError::NotAPermutation(format!("{images:?}")));
            }
        }
        Ok(Perm(images))
    }

    /// Parses `(1 2)(3 4 5)`; `()` or an empty string is the identity.
    /// Commas may separate points.
    pub fn parse_cycles(text: &str, n: usize) -> Result<Perm, GroupError> {
        let bad = |why: &str| GroupError::NotAPermutation(format!("`{text}`: {why}"));
        let mut images: Vec<u8> = (0..n as u8).collect();
        let mut rest = text.trim();
        let mut used = BTreeSet::new();
        while !rest.is_empty() {
            let body = rest.strip_prefix('(').ok_or_else(|| bad("expected `(`"))?;
            let close = body.find(')').ok_or_else(|| bad("unclosed cycle"))?;
            let points: Vec<usize> = body[..close]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<usize>().map_err(|_| bad("points are integers")))
                .collect::<Result<_, _>>()?;
            for &pt in &points {
                if pt == 0 || pt > n {
                    return Err(bad(&format!("point {pt} outside 1..{n}")));
                }
                if !used.insert(pt) {
                    return Err(bad(&format!("point {pt} repeated")));
                }
            }
            for (k, &pt) in points.iter().enumerate() {
                images[pt - 1] = (points[(k + 1) % points.len()] - 1) as u8;
            }
            rest = body[close + 1..].trim_start();
        }
        Ok(Perm(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u8] {
        &self.0
    }

    /// `self` then `other`, acting on the right: `i ↦ other(self(i))`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u8;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j as usize)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.0.len()];
        let mut any = false;
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            any = true;
            write!(f, "(")?;
            let mut i = start;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{}", i + 1)?;
                first = false;
                i = self.0[i] as usize;
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// Refuses closures beyond this many elements.
pub const CLOSURE_LIMIT: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    /// Sorted; the identity comes first.
    elements: Vec<Perm>,
}

impl PermGroup {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, g: &Perm) -> Option<usize> {
        self.elements.binary_search(g).ok()
    }
}

/// Breadth-first closure of the generators under right multiplication.
pub fn group_from_generators(n: usize, gens: Vec<Perm>) -> Result<PermGroup, GroupError> {
    if n > u8::MAX as usize {
        return Err(GroupError::NotAPermutation(format!("degree {n} is too large")));
    }
    if let Some(g) = gens.iter().find(|g| g.degree() != n) {
        return Err(GroupError::NotAPermutation(format!("{g} has degree {}, expected {n}", g.degree())));
    }
    let id = Perm::identity(n);
    let mut seen: BTreeSet<Perm> = BTreeSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y = x.then(g);
            if !seen.contains(&y) {
                if seen.len() >= CLOSURE_LIMIT {
                    return Err(GroupError::OrderLimit {
                        limit: CLOSURE_LIMIT,
                        order: seen.len() + 1,
                    });
                }
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(PermGroup {
        degree: n,
        generators: gens,
        elements: seen.into_iter().collect(),
    })
}

/// Reads a `degree: n` header and one generator per line. Blank lines and
/// `#` comments are skipped.
pub fn parse_group_file(text: &str) -> Result<PermGroup, GroupError> {
    let mut degree = None;
    let mut gens = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parse_err = |reason: String| GroupError::Parse { line: no + 1, reason };
        match degree {
            None => {
                let value = line
                    .strip_prefix("degree:")
                    .ok_or_else(|| parse_err("expected `degree: n` header".into()))?;
                let n = value
                    .trim()
                    .parse::<usize>()
                    .map_err(|e| parse_err(format!("bad degree: {e}")))?;
                degree = Some(n);
            }
            Some(n) => gens.push(Perm::parse_cycles(line, n).map_err(|e| parse_err(e.to_string()))?),
        }
    }
    let n = degree.ok_or(GroupError::Parse {
        line: 0,
        reason: "missing `degree: n` header".into(),
    })?;
    group_from_generators(n, gens)
}

pub fn group_to_file(g: &PermGroup) -> String {
    let mut out = format!("degree: {}\n", g.degree());
    for p in g.generators() {
        out.push_str(&format!("{p}\n"));
    }
    out
}

fn from_cycles(n: usize, gens: &[&str]) -> PermGroup {
    let gens = gens.iter().map(|s| Perm::parse_cycles(s, n).expect("valid literal")).collect();
    group_from_generators(n, gens).expect("small literal groups")
}

pub fn symmetric(n: usize) -> PermGroup {
    match n {
        0 | 1 => from_cycles(n.max(1), &[]),
        2 => from_cycles(2, &["(1 2)"]),
        _ => {
            let long: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
            from_cycles(n, &["(1 2)", &format!("({})", long.join(" "))])
        }
    }
}

/// Generated by the 3-cycles `(1 2 k)`.
pub fn alternating(n: usize) -> PermGroup {
    let gens: Vec<String> = (3..=n).map(|k| format!("(1 2 {k})")).collect();
    let refs: Vec<&str> = gens.iter().map(|s| s.as_str()).collect();
    from_cycles(n.max(1), &refs)
}

pub fn cyclic(n: usize) -> PermGroup {
    if n == 1 {
        return from_cycles(1, &[]);
    }
    let long: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    from_cycles(n, &[&format!("({})", long.join(" "))])
}

/// Symmetries of the regular `n`-gon, order `2n`.
pub fn dihedral(n: usize) -> PermGroup {
    let long: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let flips: Vec<String> = (1..=n / 2)
        .filter(|&i| i != n + 1 - i)
        .map(|i| format!("({} {})", i, n + 1 - i))
        .collect();
    from_cycles(n, &[&format!("({})", long.join(" ")), &flips.concat()])
}

/// `C₂ × C₂` acting regularly on four points.
pub fn klein_four() -> PermGroup {
    from_cycles(4, &["(1 2)(3 4)", "(1 3)(2 4)"])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycles_round_trip() {
        let p = Perm::parse_cycles("(1 2 3)(4 5)", 5).unwrap();
        assert_eq!(p.images(), &[1, 2, 0, 4, 3]);
        assert_eq!(p.to_string(), "(1 2 3)(4 5)");
        assert_eq!(Perm::parse_cycles("()", 3).unwrap(), Perm::identity(3));
        assert!(p.then(&p.inverse()).is_identity());
        assert!(Perm::parse_cycles("(1 1)", 3).is_err());
        assert!(Perm::parse_cycles("(1 4)", 3).is_err());
        assert!(Perm::parse_cycles("(1 2", 3).is_err());
    }

    #[test]
    fn standard_orders() {
        assert_eq!(symmetric(3).order(), 6);
        assert_eq!(symmetric(4).order(), 24);
        assert_eq!(alternating(4).order(), 12);
        assert_eq!(alternating(5).order(), 60);
        assert_eq!(cyclic(6).order(), 6);
        assert_eq!(dihedral(4).order(), 8);
        assert_eq!(klein_four().order(), 4);
        assert_eq!(group_from_generators(5, vec![]).unwrap().order(), 1);
        let a5 = group_from_generators(
            5,
            vec![Perm::parse_cycles("(1 2 3 4 5)", 5).unwrap(), Perm::parse_cycles("(1 2 3)", 5).unwrap()],
        )
        .unwrap();
        assert_eq!(a5.order(), 60);
        assert!(symmetric(4).elements()[0].is_identity());
    }

    #[test]
    fn group_files() {
        let g = parse_group_file("# S3\ndegree: 3\n(1 2)\n(1 2 3)\n").unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(parse_group_file(&group_to_file(&g)).unwrap(), g);
        assert!(matches!(parse_group_file("(1 2)\n"), Err(GroupError::Parse { line: 1, .. })));
        assert!(matches!(parse_group_file("degree: 3\n(1 5)\n"), Err(GroupError::Parse { line: 2, .. })));
    }
}

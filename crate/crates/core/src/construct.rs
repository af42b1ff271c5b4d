//! Vertex decompositions of order-complex skeleta built from a quasi-EL
//! labeling.
//!
//! A [`Recipe`] names a complex `skel_level(underlying)` together with a way
//! to shed a vertex from it. Posets shed the descent element of the
//! lexicographically greatest single-descent chain; joins shed from one
//! factor; the fully ascending base case splits into a spine simplex joined
//! with the gap intervals. The certificate produced is always re-validated
//! against the target complex.

use std::fmt::Debug;

use thiserror::Error;

use crate::complex::{order_complex, validate_certificate, ComplexError, SimplicialComplex, VdCertificate};
use crate::labeling::{min_chain_complexity, stats_of, verify_quasi_el, EdgeLabeling, LabelingError};
use crate::poset::{Chain, Poset, PosetError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Labeling(#[from] LabelingError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("every maximal chain is weakly ascending")]
    AllChainsAscending,
    #[error("shedding candidate `{element}` fails property {property}: {detail}")]
    CandidateFailed {
        element: String,
        property: u8,
        detail: String,
    },
    #[error("target {target} exceeds the minimum chain complexity {bound}")]
    TargetTooLarge { target: usize, bound: usize },
    #[error("chain {chain:?} repeats label {label} three times in a row")]
    RepeatRunTooLong { chain: Vec<String>, label: String },
    #[error("join factor is not pure: {0}")]
    PurityViolated(String),
}

/// The chain chosen for shedding and its descent element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SheddingCandidate {
    pub chain: Chain,
    pub element: usize,
}

/// Among maximal chains with exactly one strict descent, takes the
/// lexicographically greatest by labels and checks that its descent
/// element `x` satisfies:
/// 1. every maximal chain of `[0̂, x]` is weakly ascending;
/// 2. `λ(w ⋖ x) > λ(x ⋖ z)` whenever `w ⋖ x ⋖ z`;
/// 3. every `w ⋖ x ⋖ z` has some `y ≠ x` with `w < y < z`;
/// 4. the labeling restricted to `P ∖ x` is quasi-EL.
pub fn lex_greatest_single_descent_chain<L: Clone + Ord + Debug>(
    p: &Poset,
    lab: &EdgeLabeling<L>,
) -> Result<SheddingCandidate, ConstructError> {
    let bound = lab.bind(p)?;
    let chains = p.maximal_chains()?;
    let mut any_descent = false;
    let mut best: Option<(Vec<L>, Chain, usize)> = None;
    for c in chains {
        let stats = stats_of(bound.sequence(&c));
        if stats.descents.is_empty() {
            continue;
        }
        any_descent = true;
        if stats.descents.len() != 1 {
            continue;
        }
        // labels first; element indices only break exact ties
        let key = bound.sequence(&c);
        if best.as_ref().is_none_or(|(k, b, _)| key > *k || (key == *k && c[..] > b[..])) {
            let x = c[stats.descents[0]];
            best = Some((key, c, x));
        }
    }
    if !any_descent {
        return Err(ConstructError::AllChainsAscending);
    }
    let fail = |x: usize, property: u8, detail: String| ConstructError::CandidateFailed {
        element: p.name(x).to_string(),
        property,
        detail,
    };
    let Some((_, chain, x)) = best else {
        return Err(ConstructError::CandidateFailed {
            element: String::new(),
            property: 0,
            detail: "no maximal chain has exactly one descent".into(),
        });
    };
    let (b, _) = p.bounds()?;
    for c in p.saturated_chains(b, x, usize::MAX)? {
        if !stats_of(bound.sequence(&c)).descents.is_empty() {
            return Err(fail(x, 1, format!("{:?} descends", p.chain_names(&c))));
        }
    }
    for &w in p.lower_covers(x) {
        for &z in p.upper_covers(x) {
            if bound.label(w, x) <= bound.label(x, z) {
                return Err(fail(x, 2, format!("ascent {} < {} < {}", p.name(w), p.name(x), p.name(z))));
            }
            let bypass = p.interval_members(w, z).into_iter().any(|y| y != x && y != w && y != z);
            if !bypass {
                return Err(fail(x, 3, format!("no bypass from {} to {}", p.name(w), p.name(z))));
            }
        }
    }
    let rest = p.without(&[x]);
    if let Err(e) = verify_quasi_el(&rest, lab) {
        return Err(fail(x, 4, e.to_string()));
    }
    Ok(SheddingCandidate { chain, element: x })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    /// Certify `skel_{r-2}`.
    Skeleton(isize),
    /// Certify the whole order complex.
    Full,
}

#[derive(Debug, Clone)]
enum Kind {
    Poset(Poset, Mode),
    Join(Box<Recipe>, Box<Recipe>),
    Truncate(Box<Recipe>),
    Points,
    SimplexSkel,
    Fixed,
}

/// `skel_level(underlying)` with a rule for shedding.
#[derive(Debug, Clone)]
struct Recipe {
    kind: Kind,
    underlying: SimplicialComplex,
    level: isize,
}

#[allow(clippy::large_enum_variant)]
enum Step {
    Leaf(SimplicialComplex),
    Node(String, Recipe, Recipe),
}

impl Recipe {
    fn poset(p: Poset, mode: Mode) -> Result<Recipe, ConstructError> {
        let underlying = order_complex(&p)?;
        let level = match mode {
            Mode::Skeleton(r) => r - 2,
            Mode::Full => underlying.dim().expect("order complexes are nonvoid"),
        };
        Ok(Recipe {
            kind: Kind::Poset(p, mode),
            underlying,
            level,
        })
    }

    fn join(a: Recipe, b: Recipe) -> Result<Recipe, ConstructError> {
        let underlying = a.underlying.join(&b.underlying)?;
        let level = a.level + b.level + 1;
        Ok(Recipe {
            kind: Kind::Join(Box::new(a), Box::new(b)),
            underlying,
            level,
        })
    }

    fn truncate(inner: Recipe, t: isize) -> Recipe {
        let underlying = inner.underlying.clone();
        let level = inner.level.min(t);
        Recipe {
            kind: Kind::Truncate(Box::new(inner)),
            underlying,
            level,
        }
    }

    fn points(x: SimplicialComplex) -> Recipe {
        Recipe {
            kind: Kind::Points,
            underlying: x,
            level: 0,
        }
    }

    fn simplex_skel(s: SimplicialComplex, t: isize) -> Recipe {
        Recipe {
            kind: Kind::SimplexSkel,
            underlying: s,
            level: t,
        }
    }

    fn fixed(x: SimplicialComplex, level: isize) -> Recipe {
        Recipe {
            kind: Kind::Fixed,
            underlying: x,
            level,
        }
    }

    fn certified(&self) -> SimplicialComplex {
        self.underlying.skeleton(self.level)
    }

    fn leaf(&self) -> Step {
        Step::Leaf(self.certified())
    }

    fn expand<L: Clone + Ord + Debug>(&self, lab: &EdgeLabeling<L>) -> Result<Step, ConstructError> {
        if self.level <= -1 || self.underlying.is_void() {
            return Ok(self.leaf());
        }
        match &self.kind {
            Kind::Fixed => Ok(self.leaf()),
            Kind::Points => {
                let verts = self.underlying.vertices();
                if verts.len() <= 1 {
                    return Ok(self.leaf());
                }
                let v = verts[0];
                Ok(Step::Node(
                    self.underlying.vertex_name(v).to_string(),
                    Recipe::points(self.underlying.delete_vertex(v)),
                    Recipe::fixed(self.underlying.link_vertex(v)?, -1),
                ))
            }
            Kind::SimplexSkel => {
                let verts = self.underlying.vertices();
                if verts.len() as isize <= self.level + 1 {
                    return Ok(self.leaf());
                }
                let v = verts[0];
                let rest = self.underlying.delete_vertex(v);
                Ok(Step::Node(
                    self.underlying.vertex_name(v).to_string(),
                    Recipe::simplex_skel(rest.clone(), self.level),
                    Recipe::simplex_skel(rest, self.level - 1),
                ))
            }
            Kind::Truncate(inner) => match inner.expand(lab)? {
                Step::Leaf(k) if k.is_void() => Ok(Step::Leaf(k)),
                Step::Leaf(k) => Recipe::simplex_skel(k, self.level).expand(lab),
                Step::Node(v, d, l) => Ok(Step::Node(v, Recipe::truncate(d, self.level), Recipe::truncate(l, self.level - 1))),
            },
            Kind::Join(a, b) => self.expand_join(a, b, lab),
            Kind::Poset(p, mode) => expand_poset(p, *mode, self.level, lab),
        }
    }

    fn expand_join<L: Clone + Ord + Debug>(&self, a: &Recipe, b: &Recipe, lab: &EdgeLabeling<L>) -> Result<Step, ConstructError> {
        let t = self.level;
        if b.level <= -2 {
            let j = Recipe::join(a.clone(), Recipe::fixed(b.underlying.clone(), -1))?;
            return Recipe::truncate(j, t).expand(lab);
        }
        if a.level <= -2 {
            let j = Recipe::join(Recipe::fixed(a.underlying.clone(), -1), b.clone())?;
            return Recipe::truncate(j, t).expand(lab);
        }
        if let Step::Node(v, d, l) = a.expand(lab)? {
            return Ok(Step::Node(v, Recipe::join(d, b.clone())?, Recipe::join(l, b.clone())?));
        }
        if let Step::Node(v, d, l) = b.expand(lab)? {
            return Ok(Step::Node(v, Recipe::join(a.clone(), d)?, Recipe::join(a.clone(), l)?));
        }
        if a.level >= 0 && b.level >= 0 {
            return Ok(self.leaf());
        }
        // one factor sits at level -1, so only its vertices matter; the
        // other is a simplex of full dimension whose vertices shed one by one
        let (low, high, low_first) = if a.level == -1 { (a, b, true) } else { (b, a, false) };
        if low.underlying.is_empty_complex() {
            return Ok(self.leaf());
        }
        let gamma = high.certified();
        let size = gamma.vertices().len() as isize;
        if !gamma.is_simplex() || size != high.level + 1 {
            return Err(ConstructError::PurityViolated(format!("{:?} at level {}", gamma, high.level)));
        }
        let tau = gamma.vertices()[0];
        let rest = gamma.delete_vertex(tau);
        let pair = |x: Recipe, y: Recipe| if low_first { Recipe::join(x, y) } else { Recipe::join(y, x) };
        Ok(Step::Node(
            gamma.vertex_name(tau).to_string(),
            pair(Recipe::points(low.underlying.clone()), Recipe::fixed(rest.clone(), high.level - 1))?,
            pair(Recipe::fixed(low.underlying.clone(), -1), Recipe::fixed(rest, high.level - 1))?,
        ))
    }
}

fn ascending_complexity<L: Clone + Ord + Debug>(p: &Poset, lab: &EdgeLabeling<L>) -> Result<isize, ConstructError> {
    let bound = lab.bind(p)?;
    let chains = p.maximal_chains()?;
    Ok(stats_of(bound.sequence(&chains[0])).complexity() as isize)
}

fn expand_poset<L: Clone + Ord + Debug>(p: &Poset, mode: Mode, level: isize, lab: &EdgeLabeling<L>) -> Result<Step, ConstructError> {
    match lex_greatest_single_descent_chain(p, lab) {
        Ok(cand) => {
            let x = cand.element;
            let (b, t) = p.bounds()?;
            let lower = p.interval(b, x)?;
            let upper = p.interval(x, t)?;
            let link = match mode {
                Mode::Skeleton(r) => {
                    let ij = ascending_complexity(&lower, lab)?;
                    Recipe::join(Recipe::poset(lower, Mode::Skeleton(ij))?, Recipe::poset(upper, Mode::Skeleton(r - ij))?)?
                }
                Mode::Full => Recipe::join(Recipe::poset(lower, Mode::Full)?, Recipe::poset(upper, Mode::Full)?)?,
            };
            Ok(Step::Node(p.name(x).to_string(), Recipe::poset(p.without(&[x]), mode)?, link))
        }
        Err(ConstructError::AllChainsAscending) => base_case(p, mode, level, lab)?.expand(lab),
        Err(e) => Err(e),
    }
}

/// All maximal chains ascend: the order complex is the simplex on the spine
/// joined with the order complexes of the spine gaps.
fn base_case<L: Clone + Ord + Debug>(p: &Poset, mode: Mode, level: isize, lab: &EdgeLabeling<L>) -> Result<Recipe, ConstructError> {
    let chains = p.maximal_chains()?;
    let mut common = chains[0].to_vec();
    for c in &chains[1..] {
        common.retain(|e| c.contains(e));
    }
    let spine_names: Vec<&str> = common[1..common.len() - 1].iter().map(|&e| p.name(e)).collect();
    let k = common.len() as isize - 1;
    let spine = Recipe::fixed(SimplicialComplex::simplex(&spine_names)?, k - 2);
    let mut link: Option<Recipe> = None;
    let mut s = 0;
    for w in common.windows(2) {
        let gap = p.interval(w[0], w[1])?;
        if gap.len() == 2 {
            continue;
        }
        let gc = order_complex(&gap)?;
        if mode == Mode::Full && gc.dim() != Some(0) {
            return Err(ConstructError::RepeatRunTooLong {
                chain: p.chain_names(&chains[0]),
                label: format!("{:?}", lab.get(p.name(w[0]), p.name(gap.upper_covers(0)[0]))),
            });
        }
        s += 1;
        let pts = Recipe::points(gc);
        link = Some(match link {
            None => pts,
            Some(prev) => Recipe::join(prev, pts)?,
        });
    }
    let link = link.unwrap_or_else(|| Recipe::fixed(SimplicialComplex::empty(), -1));
    let whole = Recipe::join(spine, link)?;
    debug_assert_eq!(whole.level, k + s - 2);
    Ok(if level < whole.level { Recipe::truncate(whole, level) } else { whole })
}

fn build<L: Clone + Ord + Debug>(r: &Recipe, lab: &EdgeLabeling<L>) -> Result<VdCertificate, ConstructError> {
    match r.expand(lab)? {
        Step::Leaf(k) => VdCertificate::leaf_of(&k).ok_or_else(|| ConstructError::PurityViolated(format!("leaf {k:?} is not a simplex"))),
        Step::Node(v, d, l) => Ok(VdCertificate::Shed {
            vertex: v,
            deletion: Box::new(build(&d, lab)?),
            link: Box::new(build(&l, lab)?),
        }),
    }
}

/// Certificate that `skel_{target_r - 2}` of the order complex is vertex
/// decomposable, for `target_r` at most the minimum of `ℓ₀ + ℓ₁` over
/// maximal chains.
pub fn constructive_vd_skeleton<L: Clone + Ord + Debug>(
    p: &Poset,
    lab: &EdgeLabeling<L>,
    target_r: usize,
) -> Result<VdCertificate, ConstructError> {
    verify_quasi_el(p, lab)?;
    let (bound, _) = min_chain_complexity(p, lab)?;
    if target_r > bound {
        return Err(ConstructError::TargetTooLarge { target: target_r, bound });
    }
    let r = target_r as isize;
    let cert = build(&Recipe::poset(p.clone(), Mode::Skeleton(r))?, lab)?;
    validate_certificate(&order_complex(p)?.skeleton(r - 2), &cert)?;
    Ok(cert)
}

/// First run of three equal consecutive labels on a maximal chain.
pub fn repeat_run<L: Clone + Ord + Debug>(p: &Poset, lab: &EdgeLabeling<L>) -> Result<Option<(Chain, L)>, ConstructError> {
    let bound = lab.bind(p)?;
    for c in p.maximal_chains()? {
        let seq = bound.sequence(&c);
        if let Some(w) = seq.windows(3).find(|w| w[0] == w[1] && w[1] == w[2]) {
            let l = w[0].clone();
            return Ok(Some((c, l)));
        }
    }
    Ok(None)
}

/// Certificate for the whole order complex, when no maximal chain carries
/// three equal labels in a row.
pub fn constructive_vd_full<L: Clone + Ord + Debug>(p: &Poset, lab: &EdgeLabeling<L>) -> Result<VdCertificate, ConstructError> {
    if let Some((c, l)) = repeat_run(p, lab)? {
        return Err(ConstructError::RepeatRunTooLong {
            chain: p.chain_names(&c),
            label: format!("{l:?}"),
        });
    }
    verify_quasi_el(p, lab)?;
    let cert = build(&Recipe::poset(p.clone(), Mode::Full)?, lab)?;
    validate_certificate(&order_complex(p)?, &cert)?;
    Ok(cert)
}

//! Reduced Betti numbers over the rationals.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedMul, CheckedSub, Signed};

use super::{ComplexError, SimplicialComplex};

/// `values[i]` is the reduced Betti number in dimension `i - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BettiNumbers {
    values: Vec<usize>,
}

impl BettiNumbers {
    pub fn get(&self, dim: isize) -> usize {
        if dim < -1 {
            return 0;
        }
        self.values.get((dim + 1) as usize).copied().unwrap_or(0)
    }

    /// `(dimension, β̃)` pairs from `-1` upward.
    pub fn iter(&self) -> impl Iterator<Item = (isize, usize)> + '_ {
        self.values.iter().enumerate().map(|(i, &b)| (i as isize - 1, b))
    }

    pub fn total(&self) -> usize {
        self.values.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total() == 0
    }

    /// True when `β̃_i = 0` for every `i ≤ dim`.
    pub fn vanishes_through(&self, dim: isize) -> bool {
        self.iter().all(|(i, b)| i > dim || b == 0)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.values
    }
}

type SparseRow<T> = Vec<(usize, T)>;

/// Rank over `ℚ` of a sparse integer matrix given by rows of
/// `(column, value)` pairs, by fraction-free elimination. Runs in `i64` and
/// repeats in arbitrary precision if an intermediate value overflows.
pub fn rank(rows: &[Vec<(usize, i64)>]) -> usize {
    if let Some(r) = eliminate::<i64>(rows.to_vec()) {
        return r;
    }
    let big = rows
        .iter()
        .map(|r| r.iter().map(|&(c, v)| (c, BigInt::from(v))).collect())
        .collect();
    eliminate::<BigInt>(big).expect("arbitrary precision cannot overflow")
}

fn eliminate<T>(rows: Vec<SparseRow<T>>) -> Option<usize>
where
    T: Clone + Integer + Signed + CheckedMul + CheckedSub,
{
    let mut pivots: HashMap<usize, SparseRow<T>> = HashMap::new();
    for mut row in rows {
        row.retain(|(_, v)| !v.is_zero());
        row.sort_by_key(|&(c, _)| c);
        while let Some((lead, _)) = row.first() {
            let lead = *lead;
            match pivots.get(&lead) {
                None => {
                    pivots.insert(lead, row);
                    break;
                }
                Some(piv) => row = combine(&row, piv)?,
            }
        }
    }
    Some(pivots.len())
}

/// `row·p − pivot·r` where `p`, `r` are the leading entries, divided by the
/// gcd of the result. The leading entry cancels.
fn combine<T>(row: &SparseRow<T>, piv: &SparseRow<T>) -> Option<SparseRow<T>>
where
    T: Clone + Integer + Signed + CheckedMul + CheckedSub,
{
    let p = piv[0].1.clone();
    let r = row[0].1.clone();
    let g = p.gcd(&r);
    let (p, r) = (p / g.clone(), r / g);
    let mut out = Vec::with_capacity(row.len() + piv.len());
    let (mut i, mut j) = (1, 1);
    while i < row.len() || j < piv.len() {
        let (c, v) = match (row.get(i), piv.get(j)) {
            (Some(a), Some(b)) if a.0 == b.0 => {
                i += 1;
                j += 1;
                (a.0, a.1.checked_mul(&p)?.checked_sub(&b.1.checked_mul(&r)?)?)
            }
            (Some(a), Some(b)) if a.0 < b.0 => {
                i += 1;
                (a.0, a.1.checked_mul(&p)?)
            }
            (Some(a), None) => {
                i += 1;
                (a.0, a.1.checked_mul(&p)?)
            }
            (_, Some(b)) => {
                j += 1;
                (b.0, T::zero().checked_sub(&b.1.checked_mul(&r)?)?)
            }
            (None, None) => unreachable!(),
        };
        if !v.is_zero() {
            out.push((c, v));
        }
    }
    let g = out.iter().fold(T::zero(), |acc, (_, v)| acc.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for (_, v) in out.iter_mut() {
            *v = v.clone() / g.clone();
        }
    }
    Some(out)
}

/// Reduced Betti numbers from dimension `-1` to `dim Δ`. The void complex
/// has none; `{∅}` has `β̃₋₁ = 1`.
pub fn reduced_betti(c: &SimplicialComplex, face_limit: usize) -> Result<BettiNumbers, ComplexError> {
    let Some(dim) = c.dim() else {
        return Ok(BettiNumbers::default());
    };
    let faces: Vec<Vec<Vec<usize>>> = (-1..=dim).map(|k| c.faces_of_dim(k)).collect();
    let total: usize = faces.iter().map(|f| f.len()).sum();
    if total > face_limit {
        return Err(ComplexError::SizeLimit {
            what: "face",
            limit: face_limit,
            actual: total,
        });
    }
    // ranks[k] is the rank of the boundary from faces[k] to faces[k-1]
    let mut ranks = vec![0usize; faces.len() + 1];
    for k in 1..faces.len() {
        let index: HashMap<&[usize], usize> = faces[k - 1].iter().enumerate().map(|(i, f)| (f.as_slice(), i)).collect();
        let rows: Vec<Vec<(usize, i64)>> = faces[k]
            .iter()
            .map(|f| {
                (0..f.len())
                    .map(|drop| {
                        let sub: Vec<usize> = f.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, &v)| v).collect();
                        let sign = if drop % 2 == 0 { 1 } else { -1 };
                        (index[sub.as_slice()], sign)
                    })
                    .collect()
            })
            .collect();
        ranks[k] = rank(&rows);
    }
    let values = (0..faces.len())
        .map(|k| faces[k].len() - ranks[k] - ranks[k + 1])
        .collect();
    Ok(BettiNumbers { values })
}

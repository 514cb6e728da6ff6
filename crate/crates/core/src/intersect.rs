//! Intersection numbers of closed geodesics from their river words.
//!
//! `Int^RS` counts places where the second river joins the first from the
//! right and flows the same way; the other three components reduce to it:
//! `Int^LS(q1,q2) = Int^RS(q2,q1)`, `Int^RO(q1,q2) = Int^RS(-q2,q1)` and
//! `Int^LO(q1,q2) = Int^RS(q1,-q2)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{is_equivalent, Pibqf, UniModularMatrix};
use crate::river::{river_of, river_reverse, turn_matrix, RiverSequence, RiverWalk};

/// Agreement beyond `m + n` letters means the two cyclic words coincide.
fn depth_cap(m: usize, n: usize) -> usize {
    m + n
}

fn rs_pairs_naive(x: &[u8], y: &[u8], mut hit: impl FnMut(usize, usize)) {
    let (m, n) = (x.len(), y.len());
    let cap = depth_cap(m, n);
    for i in (0..m).filter(|&i| x[i] == 0) {
        for j in (0..n).filter(|&j| y[j] == 1) {
            let mut k = 1;
            while k <= cap && x[(i + k) % m] == y[(j + k) % n] {
                k += 1;
            }
            if k <= cap && x[(i + k) % m] == 1 {
                hit(i, j);
            }
        }
    }
}

/// Algorithm 1 on raw bit words.
pub fn int_rs_naive_bits(x: &[u8], y: &[u8]) -> u64 {
    let mut count = 0;
    rs_pairs_naive(x, y, |_, _| count += 1);
    count
}

/// Algorithm 2 on raw bit words: refine the sets of positions sharing a
/// common prefix, with an explicit stack instead of recursion.
pub fn int_rs_fast_bits(x: &[u8], y: &[u8]) -> u64 {
    let (m, n) = (x.len(), y.len());
    let cap = depth_cap(m, n);
    let t1: Vec<usize> = (0..m).filter(|&i| x[i] == 0).map(|i| (i + 1) % m).collect();
    let t2: Vec<usize> = (0..n).filter(|&j| y[j] == 1).map(|j| (j + 1) % n).collect();
    let mut stack = vec![(t1, t2, 1usize)];
    let mut count = 0u64;
    while let Some((t1, t2, depth)) = stack.pop() {
        let (mut a0, mut a1) = (Vec::new(), Vec::new());
        for &t in &t1 {
            if x[t] == 1 { a1.push((t + 1) % m) } else { a0.push((t + 1) % m) }
        }
        let (mut b0, mut b1) = (Vec::new(), Vec::new());
        for &u in &t2 {
            if y[u] == 1 { b1.push((u + 1) % n) } else { b0.push((u + 1) % n) }
        }
        count += (a1.len() * b0.len()) as u64;
        if depth < cap {
            if !a0.is_empty() && !b0.is_empty() {
                stack.push((a0, b0, depth + 1));
            }
            if !a1.is_empty() && !b1.is_empty() {
                stack.push((a1, b1, depth + 1));
            }
        }
    }
    count
}

pub fn int_rs_naive(r1: &RiverSequence, r2: &RiverSequence) -> u64 {
    int_rs_naive_bits(r1.bits(), r2.bits())
}

pub fn int_rs_fast(r1: &RiverSequence, r2: &RiverSequence) -> u64 {
    int_rs_fast_bits(r1.bits(), r2.bits())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct IntersectionComponents {
    pub rs: u64,
    pub ro: u64,
    pub ls: u64,
    pub lo: u64,
}

impl IntersectionComponents {
    /// From the rivers of `q1` and `q2`; each component is counted separately.
    pub fn from_rivers(r1: &RiverSequence, r2: &RiverSequence) -> Self {
        let neg2 = river_reverse(r2);
        IntersectionComponents {
            rs: int_rs_fast(r1, r2),
            ro: int_rs_fast(&neg2, r1),
            ls: int_rs_fast(r2, r1),
            lo: int_rs_fast(r1, &neg2),
        }
    }

    pub fn total(&self) -> u64 {
        self.rs + self.ro + self.ls + self.lo
    }

    /// Crossings weighted by their sign; always zero.
    pub fn signed(&self) -> i64 {
        self.rs as i64 + self.ro as i64 - self.ls as i64 - self.lo as i64
    }
}

/// `Int(q1,q2) = 2 (Int^RS + Int^RO)` from precomputed rivers.
pub fn intersection_from_rivers(r1: &RiverSequence, r2: &RiverSequence) -> u64 {
    2 * (int_rs_fast(r1, r2) + int_rs_fast(&river_reverse(r2), r1))
}

pub fn check_strongly_inequivalent(q1: &Pibqf, q2: &Pibqf) -> Result<()> {
    if q1.discriminant() == q2.discriminant()
        && (is_equivalent(q1, q2).is_some() || is_equivalent(q1, &q2.reciprocal()).is_some())
    {
        return Err(Error::StronglyEquivalent(q1.to_string(), q2.to_string()));
    }
    Ok(())
}

pub fn components(q1: &Pibqf, q2: &Pibqf) -> Result<IntersectionComponents> {
    check_strongly_inequivalent(q1, q2)?;
    Ok(IntersectionComponents::from_rivers(&river_of(q1), &river_of(q2)))
}

pub fn intersection_number(q1: &Pibqf, q2: &Pibqf) -> Result<u64> {
    check_strongly_inequivalent(q1, q2)?;
    Ok(intersection_from_rivers(&river_of(q1), &river_of(q2)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CrossingKind {
    Rs,
    Ro,
    Ls,
    Lo,
}

impl CrossingKind {
    pub fn sign(self) -> i8 {
        match self {
            CrossingKind::Rs | CrossingKind::Ro => 1,
            CrossingKind::Ls | CrossingKind::Lo => -1,
        }
    }
}

/// One intersection of the closed geodesics of `q1` and `q2`, lifted so that
/// `partner` (a form equivalent to `q2`) crosses the root geodesic of `q1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Crossing {
    pub kind: CrossingKind,
    pub partner: Pibqf,
    /// Index of the river edge of `q1` where the crossing was found.
    pub edge: usize,
}

/// Every crossing of the two closed geodesics, each realized as a form pair
/// `(q1, partner)`. The pairs are pairwise inequivalent under the stabilizer
/// of `q1`, and their number is `Int(q1, q2)`.
pub fn enumerate_crossings(q1: &Pibqf, q2: &Pibqf) -> Result<Vec<Crossing>> {
    check_strongly_inequivalent(q1, q2)?;
    let neg2 = q2.reciprocal();
    let w1 = RiverWalk::new(q1);
    let w2 = RiverWalk::new(q2);
    let wn = RiverWalk::new(&neg2);
    // (edge of q1, partner before transport, kind)
    let mut found: Vec<(usize, Pibqf, CrossingKind)> = Vec::new();
    let next = |t: usize, len: usize| (t + 1) % len;

    rs_pairs_naive(&w1.bits, &w2.bits, |i, j| {
        let t = next(i, w1.len());
        found.push((t, w2.forms[next(j, w2.len())].clone(), CrossingKind::Rs));
    });
    rs_pairs_naive(&w2.bits, &w1.bits, |i, j| {
        let t = next(j, w1.len());
        found.push((t, w2.forms[next(i, w2.len())].clone(), CrossingKind::Ls));
    });
    rs_pairs_naive(&wn.bits, &w1.bits, |i, j| {
        let t = next(j, w1.len());
        found.push((t, wn.forms[next(i, wn.len())].reciprocal(), CrossingKind::Ro));
    });
    rs_pairs_naive(&w1.bits, &wn.bits, |i, j| {
        let t = next(i, w1.len());
        found.push((t, wn.forms[next(j, wn.len())].reciprocal(), CrossingKind::Lo));
    });
    found.sort_by_key(|(t, _, kind)| (*t, *kind as u8));

    // act(prefix, q1) = w1.forms[t]; carry partners back to q1.
    let mut prefix = w1.to_start.clone();
    let mut at = 0;
    let mut out = Vec::with_capacity(found.len());
    for (t, g, kind) in found {
        while at < t {
            prefix = &prefix * &turn_matrix(w1.bits[at]);
            at += 1;
        }
        let back: UniModularMatrix = prefix.inverse();
        out.push(Crossing { kind, partner: g.act(&back), edge: t });
    }
    Ok(out)
}

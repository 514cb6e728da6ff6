//! River sequences: the cyclic turn word of the river in a Conway topograph.
//!
//! Bits are `1 = R` and `0 = L`. Words are stored at their minimal period in
//! the rotation that reads first in the order `R < L`, so `RRRLLRL`, `RLL`
//! and `R^n L^n` print as themselves.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use crate::arith::cf_quadratic;
use crate::error::{Error, Result};
use crate::forms::flow::{apply, next_turn, Turn};
use crate::forms::{reduce, Pibqf, UniModularMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RiverSequence {
    bits: Vec<u8>,
}

/// Start of the rotation that is least when `R` sorts before `L`.
fn canonical_start(bits: &[u8]) -> usize {
    let n = bits.len();
    let key = |t: usize| 1 - bits[t % n];
    let (mut i, mut j, mut k) = (0, 1, 0);
    while i < n && j < n && k < n {
        let (a, b) = (key(i + k), key(j + k));
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i += k + 1;
        } else {
            j += k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j)
}

pub(crate) fn minimal_period(bits: &[u8]) -> usize {
    let n = bits.len();
    (1..=n)
        .find(|&p| n.is_multiple_of(p) && (p..n).all(|i| bits[i] == bits[i - p]))
        .unwrap_or(n)
}

impl RiverSequence {
    /// Builds a river from any rotation of any power of its word.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) || !bits.contains(&0) || !bits.contains(&1) {
            return Err(Error::InvalidRiver(bits.iter().map(|b| b.to_string()).collect()));
        }
        let p = minimal_period(bits);
        let word = &bits[..p];
        let s = canonical_start(word);
        let mut out = Vec::with_capacity(p);
        out.extend_from_slice(&word[s..]);
        out.extend_from_slice(&word[..s]);
        Ok(RiverSequence { bits: out })
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn period(&self) -> usize {
        self.bits.len()
    }

    pub fn is_reciprocal(&self) -> bool {
        self == &river_reverse(self)
    }
}

impl fmt::Display for RiverSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.bits.iter().map(|&b| if b == 1 { 'R' } else { 'L' }).collect();
        f.write_str(&s)
    }
}

impl FromStr for RiverSequence {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                'R' => Ok(1),
                'L' => Ok(0),
                _ => Err(Error::InvalidRiver(s.to_string())),
            })
            .collect::<Result<Vec<u8>>>()?;
        RiverSequence::from_bits(&bits).map_err(|_| Error::InvalidRiver(s.to_string()))
    }
}

/// River word from the continued fraction of `q_f = (-B + sqrt D)/(2A)`: over
/// the smallest even period following the preperiod, partial quotient `a_t`
/// contributes `a_t` copies of the bit `t mod 2`.
pub fn river_of(q: &Pibqf) -> RiverSequence {
    let cf = cf_quadratic(&-q.b(), &(BigInt::from(2) * q.a()), &q.discriminant())
        .expect("a valid form has a nonsquare discriminant");
    let s = cf.preperiod.len();
    let p = if cf.period.len().is_multiple_of(2) { cf.period.len() } else { 2 * cf.period.len() };
    let mut bits = Vec::new();
    for i in 0..p {
        let t = s + i;
        let a = cf.term(t).to_usize().expect("partial quotients of a river are machine sized");
        bits.extend(std::iter::repeat_n((t % 2) as u8, a));
    }
    RiverSequence::from_bits(&bits).expect("river words contain both turns")
}

pub(crate) fn turn_matrix(bit: u8) -> UniModularMatrix {
    if bit == 1 {
        UniModularMatrix::r()
    } else {
        UniModularMatrix::l()
    }
}

/// Product of the turn matrices over one period, read from rotation `anchor`.
pub fn river_automorph(seq: &RiverSequence, anchor: usize) -> UniModularMatrix {
    let n = seq.period();
    let one = BigInt::one();
    let mut m = UniModularMatrix::identity();
    for t in 0..n {
        match seq.bits[(anchor + t) % n] {
            1 => m.mul_r_pow(&one),
            _ => m.mul_l_pow(&one),
        }
    }
    m
}

/// River of the reciprocal class: swap `L` and `R`, then reverse.
pub fn river_reverse(seq: &RiverSequence) -> RiverSequence {
    let bits: Vec<u8> = seq.bits.iter().rev().map(|b| 1 - b).collect();
    RiverSequence::from_bits(&bits).expect("still contains both turns")
}

pub fn is_reciprocal_river(seq: &RiverSequence) -> bool {
    seq.is_reciprocal()
}

/// One period of the river edge by edge, starting at `reduce(q)`.
///
/// `forms[t]` is the flow-oriented form `[A,B,C]` (`A > 0 > C`) on edge `t`
/// and `bits[t]` the turn from edge `t` to edge `t + 1`. Since the start is a
/// reduced form the word begins with an `R`-run.
#[derive(Debug, Clone)]
pub struct RiverWalk {
    pub start: Pibqf,
    /// `act(to_start, q) = start`.
    pub to_start: UniModularMatrix,
    pub forms: Vec<Pibqf>,
    pub bits: Vec<u8>,
}

impl RiverWalk {
    pub fn new(q: &Pibqf) -> Self {
        let (start, to_start) = reduce(q);
        let one = BigInt::one();
        let mut forms = Vec::new();
        let mut bits = Vec::new();
        let mut cur = start.clone();
        loop {
            let turn = next_turn(&cur);
            let next = apply(&cur, turn, &one);
            forms.push(std::mem::replace(&mut cur, next));
            bits.push(u8::from(turn == Turn::R));
            if cur == start {
                break;
            }
        }
        RiverWalk { start, to_start, forms, bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

/// The flow-oriented forms on the river edges over one period, starting at `reduce(q)`.
pub fn river_forms(q: &Pibqf) -> Vec<Pibqf> {
    RiverWalk::new(q).forms
}

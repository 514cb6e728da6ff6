use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An element of PSL(2,Z), stored as the representative whose first nonzero
/// entry (reading a, b, c, d) is positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UniModularMatrix {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl UniModularMatrix {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self> {
        let (a, b, c, d) = (a.into(), b.into(), c.into(), d.into());
        let det = &a * &d - &b * &c;
        if !det.is_one() {
            return Err(Error::NotUnimodular(det.to_string()));
        }
        Ok(Self::canonical(a, b, c, d))
    }

    pub(crate) fn canonical(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        let first = [&a, &b, &c, &d].into_iter().find(|x| !x.is_zero()).cloned();
        if first.is_some_and(|x| x.is_negative()) {
            UniModularMatrix { a: -a, b: -b, c: -c, d: -d }
        } else {
            UniModularMatrix { a, b, c, d }
        }
    }

    pub fn identity() -> Self {
        Self::canonical(BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one())
    }

    /// `S = (0 1; -1 0)`, reversing an oriented edge of the topograph.
    pub fn s() -> Self {
        Self::canonical(BigInt::zero(), BigInt::one(), -BigInt::one(), BigInt::zero())
    }

    /// `T = L = (1 1; 0 1)`.
    pub fn t() -> Self {
        Self::l_pow(&BigInt::one())
    }

    pub fn l() -> Self {
        Self::t()
    }

    /// `R = (1 0; 1 1)`.
    pub fn r() -> Self {
        Self::r_pow(&BigInt::one())
    }

    pub fn l_pow(k: &BigInt) -> Self {
        Self::canonical(BigInt::one(), k.clone(), BigInt::zero(), BigInt::one())
    }

    pub fn r_pow(k: &BigInt) -> Self {
        Self::canonical(BigInt::one(), BigInt::zero(), k.clone(), BigInt::one())
    }

    /// Left-to-right product of the generators named in `word` (letters L, R, S).
    pub fn from_path(word: &str) -> Result<Self> {
        let mut m = Self::identity();
        for ch in word.chars() {
            let g = match ch {
                'L' => Self::l(),
                'R' => Self::r(),
                'S' => Self::s(),
                other => return Err(Error::InvalidPathLetter(other)),
            };
            m = &m * &g;
        }
        Ok(m)
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }
    pub fn b(&self) -> &BigInt {
        &self.b
    }
    pub fn c(&self) -> &BigInt {
        &self.c
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    /// Entries of the SL(2,Z) lift with nonnegative trace.
    pub fn positive_trace_lift(&self) -> [BigInt; 4] {
        let tr = &self.a + &self.d;
        if tr.is_negative() {
            [-&self.a, -&self.b, -&self.c, -&self.d]
        } else {
            [self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone()]
        }
    }

    /// Absolute value of the trace (the trace is only defined up to sign in PSL).
    pub fn abs_trace(&self) -> BigInt {
        (&self.a + &self.d).abs()
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.abs_trace() > BigInt::from(2)
    }

    pub fn inverse(&self) -> Self {
        Self::canonical(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    /// Right multiplication by `L^k`, i.e. adding `k` times the first column to the second.
    pub(crate) fn mul_l_pow(&mut self, k: &BigInt) {
        self.b += &self.a * k;
        self.d += &self.c * k;
        self.renormalize();
    }

    /// Right multiplication by `R^k`.
    pub(crate) fn mul_r_pow(&mut self, k: &BigInt) {
        self.a += &self.b * k;
        self.c += &self.d * k;
        self.renormalize();
    }

    fn renormalize(&mut self) {
        let m = std::mem::replace(self, Self::identity());
        *self = Self::canonical(m.a, m.b, m.c, m.d);
    }
}

impl Mul for &UniModularMatrix {
    type Output = UniModularMatrix;
    fn mul(self, o: &UniModularMatrix) -> UniModularMatrix {
        UniModularMatrix::canonical(
            &self.a * &o.a + &self.b * &o.c,
            &self.a * &o.b + &self.b * &o.d,
            &self.c * &o.a + &self.d * &o.c,
            &self.c * &o.b + &self.d * &o.d,
        )
    }
}

impl Mul for UniModularMatrix {
    type Output = UniModularMatrix;
    fn mul(self, o: UniModularMatrix) -> UniModularMatrix {
        &self * &o
    }
}

impl fmt::Display for UniModularMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

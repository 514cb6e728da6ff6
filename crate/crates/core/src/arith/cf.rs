use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::is_square;
use crate::error::{Error, Result};

/// Eventually periodic continued fraction `[a0; a1, ..., as, (as+1, ..., as+p)]`.
///
/// Both the preperiod and the period are minimal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicCF {
    pub preperiod: Vec<BigInt>,
    pub period: Vec<BigInt>,
}

impl PeriodicCF {
    /// The `i`-th partial quotient.
    pub fn term(&self, i: usize) -> &BigInt {
        if i < self.preperiod.len() {
            &self.preperiod[i]
        } else {
            &self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    /// Value of the convergent built from the first `n` partial quotients.
    pub fn convergent(&self, n: usize) -> BigRational {
        let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
        let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
        for i in 0..n.max(1) {
            let a = self.term(i);
            let h2 = a * &h1 + &h0;
            let k2 = a * &k1 + &k0;
            h0 = std::mem::replace(&mut h1, h2);
            k0 = std::mem::replace(&mut k1, k2);
        }
        BigRational::new(h1, k1)
    }

    pub fn approximate(&self, n: usize) -> f64 {
        self.convergent(n).to_f64().unwrap_or(f64::NAN)
    }
}

/// `floor((p + sqrt(d)) / q)` for nonsquare `d > 0` and `q != 0`, given
/// `sqrt_d = floor(sqrt(d))`.
pub(crate) fn floor_quadratic(p: &BigInt, q: &BigInt, sqrt_d: &BigInt) -> BigInt {
    if q.is_positive() {
        (p + sqrt_d).div_floor(q)
    } else {
        // -sqrt(d) lies strictly between -s-1 and -s.
        (-(p + sqrt_d) - 1i32).div_floor(&-q)
    }
}

/// Continued fraction of `(p + sqrt(d)) / q` by the classical PQa recurrence
/// with cycle detection on the `(P, Q)` state.
pub fn cf_quadratic(p: &BigInt, q: &BigInt, d: &BigInt) -> Result<PeriodicCF> {
    if q.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    if !d.is_positive() {
        return Err(Error::InvalidArgument(format!("radicand {d} must be positive")));
    }
    if is_square(d) {
        return Err(Error::SquareDiscriminant(d.to_string()));
    }
    let (mut p, mut q, d) = if ((d - p * p) % q).is_zero() {
        (p.clone(), q.clone(), d.clone())
    } else {
        let qa = q.abs();
        (p * &qa, q * &qa, d * &qa * &qa)
    };
    let sqrt_d = d.sqrt();

    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    let mut terms = Vec::new();
    loop {
        if let Some(&start) = seen.get(&(p.clone(), q.clone())) {
            let period = terms.split_off(start);
            return Ok(PeriodicCF { preperiod: terms, period });
        }
        seen.insert((p.clone(), q.clone()), terms.len());
        let a = floor_quadratic(&p, &q, &sqrt_d);
        let p_next = &a * &q - &p;
        let q_next = (&d - &p_next * &p_next) / &q;
        terms.push(a);
        p = p_next;
        q = q_next;
    }
}

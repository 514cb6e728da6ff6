//! Primitive indefinite binary quadratic forms and the right action of
//! PSL(2,Z) on them.
//!
//! `act(m, q)(x, y) = q(ax + by, cx + dy)`, so `act(m1 * m2, q) = act(m2, act(m1, q))`.

mod classgroup;
pub(crate) mod flow;
mod matrix;
mod reduce;

pub use classgroup::narrow_class_group;
pub use matrix::UniModularMatrix;
pub use reduce::{is_equivalent, is_reciprocal_class, reduce, reduced_cycle};

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{is_square, pell_minimal};
use crate::error::{Error, Result};

/// The form `Ax^2 + Bxy + Cy^2`, written `[A,B,C]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pibqf {
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

impl Pibqf {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Result<Self> {
        let q = Pibqf { a: a.into(), b: b.into(), c: c.into() };
        let d = q.discriminant();
        if !d.is_positive() {
            return Err(Error::InvalidForm { form: q.to_string(), reason: "discriminant is not positive" });
        }
        if is_square(&d) {
            return Err(Error::SquareDiscriminant(d.to_string()));
        }
        if !q.a.gcd(&q.b).gcd(&q.c).is_one() {
            return Err(Error::InvalidForm { form: q.to_string(), reason: "coefficients are not coprime" });
        }
        Ok(q)
    }

    /// Construction without validation; callers guarantee the invariants
    /// (images of valid forms under the group action, negations, and so on).
    pub(crate) fn raw(a: BigInt, b: BigInt, c: BigInt) -> Self {
        Pibqf { a, b, c }
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

    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    /// Value `q(x, y)`.
    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        &self.a * x * x + &self.b * x * y + &self.c * y * y
    }

    pub fn act(&self, m: &UniModularMatrix) -> Pibqf {
        let (a, b, c, d) = (m.a(), m.b(), m.c(), m.d());
        let (qa, qb, qc) = (&self.a, &self.b, &self.c);
        Pibqf {
            a: qa * a * a + qb * a * c + qc * c * c,
            b: BigInt::from(2) * qa * a * b + qb * (a * d + b * c) + BigInt::from(2) * qc * c * d,
            c: qa * b * b + qb * b * d + qc * d * d,
        }
    }

    /// The reciprocal form `[-A,-B,-C]`.
    pub fn reciprocal(&self) -> Pibqf {
        Pibqf { a: -&self.a, b: -&self.b, c: -&self.c }
    }

    pub fn is_reduced(&self) -> bool {
        (&self.a * &self.c).is_negative() && self.b > (&self.a + &self.c).abs()
    }

    /// `A > 0 > C`: the edge carrying this form lies on the river and is
    /// oriented along the flow.
    pub fn is_flow(&self) -> bool {
        self.a.is_positive() && self.c.is_negative()
    }

    /// `S`-image `[C,-B,A]`, the same edge read in the opposite direction.
    pub fn flip(&self) -> Pibqf {
        Pibqf { a: self.c.clone(), b: -&self.b, c: self.a.clone() }
    }
}

pub fn discriminant(q: &Pibqf) -> BigInt {
    q.discriminant()
}

pub fn act(m: &UniModularMatrix, q: &Pibqf) -> Pibqf {
    q.act(m)
}

pub fn reciprocal(q: &Pibqf) -> Pibqf {
    q.reciprocal()
}

pub fn is_reduced(q: &Pibqf) -> bool {
    q.is_reduced()
}

pub fn path_to_matrix(word: &str) -> Result<UniModularMatrix> {
    UniModularMatrix::from_path(word)
}

/// `B_1 B_2 - 2 A_1 C_2 - 2 A_2 C_1`.
pub fn b_delta(q1: &Pibqf, q2: &Pibqf) -> BigInt {
    &q1.b * &q2.b - BigInt::from(2) * (&q1.a * &q2.c + &q2.a * &q1.c)
}

/// Invariant automorph `((T-BU)/2, -CU; AU, (T+BU)/2)` built from the minimal
/// solution of `T^2 - D U^2 = 4`.
pub fn automorph(q: &Pibqf) -> UniModularMatrix {
    let pell = pell_minimal(&q.discriminant()).expect("valid form has a valid discriminant");
    automorph_with(q, &pell.t, &pell.u)
}

pub(crate) fn automorph_with(q: &Pibqf, t: &BigInt, u: &BigInt) -> UniModularMatrix {
    let two = BigInt::from(2);
    UniModularMatrix::canonical(
        (t - &q.b * u) / &two,
        -&q.c * u,
        &q.a * u,
        (t + &q.b * u) / &two,
    )
}

/// The primitive form fixed by a hyperbolic matrix: `[c, d-a, -b] / g` for the
/// positive-trace lift.
pub fn form_from_matrix(m: &UniModularMatrix) -> Result<Pibqf> {
    if !m.is_hyperbolic() {
        return Err(Error::NotHyperbolic(m.to_string()));
    }
    let [a, b, c, d] = m.positive_trace_lift();
    let da = &d - &a;
    let g = c.gcd(&da).gcd(&b);
    Ok(Pibqf { a: &c / &g, b: &da / &g, c: -&b / &g })
}

pub(crate) fn ser_display<T: fmt::Display, S: serde::Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

impl fmt::Display for Pibqf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.a, self.b, self.c)
    }
}

impl FromStr for Pibqf {
    type Err = Error;

    /// Parses `[A,B,C]`; whitespace is ignored.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::FormSyntax(s.to_string()))?;
        let parts: Vec<&str> = inner.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::FormSyntax(s.to_string()));
        }
        let mut coeffs = Vec::with_capacity(3);
        for p in parts {
            coeffs.push(p.parse::<BigInt>().map_err(|_| Error::FormSyntax(s.to_string()))?);
        }
        let c = coeffs.pop().unwrap_or_else(BigInt::zero);
        let b = coeffs.pop().unwrap_or_else(BigInt::zero);
        let a = coeffs.pop().unwrap_or_else(BigInt::zero);
        Pibqf::new(a, b, c)
    }
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;
    use proptest::prelude::*;

    pub fn f(a: i64, b: i64, c: i64) -> Pibqf {
        Pibqf::new(a, b, c).unwrap()
    }

    pub fn m(a: i64, b: i64, c: i64, d: i64) -> UniModularMatrix {
        UniModularMatrix::new(a, b, c, d).unwrap()
    }

    /// Random forms with small coefficients.
    pub fn arb_form() -> impl Strategy<Value = Pibqf> {
        (-40i64..40, -60i64..60, -40i64..40).prop_filter_map("not a PIBQF", |(a, b, c)| Pibqf::new(a, b, c).ok())
    }

    /// Random matrices as words in the generators.
    pub fn arb_matrix() -> impl Strategy<Value = UniModularMatrix> {
        proptest::collection::vec(prop_oneof![Just('L'), Just('R'), Just('S')], 0..12)
            .prop_map(|w| UniModularMatrix::from_path(&w.into_iter().collect::<String>()).unwrap())
    }
}

//! Walking the river one run at a time.
//!
//! A flow form `[A,B,C]` with `A > 0 > C` sits on a river edge. The next turn
//! is `R` when `q(1,1) = A+B+C > 0` and `L` otherwise; a maximal run of equal
//! turns has closed-form length, so a whole run costs one square root.

use num_bigint::BigInt;
use num_traits::Signed;

use super::{Pibqf, UniModularMatrix};
use crate::arith::cf::floor_quadratic;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Turn {
    L,
    R,
}

pub(crate) fn next_turn(f: &Pibqf) -> Turn {
    debug_assert!(f.is_flow());
    if (&f.a + &f.b + &f.c).is_positive() {
        Turn::R
    } else {
        Turn::L
    }
}

/// Number of consecutive turns equal to `next_turn(f)`.
pub(crate) fn run_length(f: &Pibqf, sqrt_d: &BigInt) -> (Turn, BigInt) {
    match next_turn(f) {
        // largest k with A k^2 + B k + C < 0
        Turn::L => (Turn::L, floor_quadratic(&-&f.b, &(BigInt::from(2) * &f.a), sqrt_d)),
        // largest k with A + B k + C k^2 > 0
        Turn::R => (Turn::R, floor_quadratic(&f.b, &(BigInt::from(-2) * &f.c), sqrt_d)),
    }
}

/// `act(L^k, f)` or `act(R^k, f)`.
pub(crate) fn apply(f: &Pibqf, turn: Turn, k: &BigInt) -> Pibqf {
    match turn {
        Turn::L => Pibqf::raw(
            f.a.clone(),
            &f.b + BigInt::from(2) * &f.a * k,
            &f.a * k * k + &f.b * k + &f.c,
        ),
        Turn::R => Pibqf::raw(
            &f.a + &f.b * k + &f.c * k * k,
            &f.b + BigInt::from(2) * &f.c * k,
            f.c.clone(),
        ),
    }
}

pub(crate) fn mul_turn(m: &mut UniModularMatrix, turn: Turn, k: &BigInt) {
    match turn {
        Turn::L => m.mul_l_pow(k),
        Turn::R => m.mul_r_pow(k),
    }
}

/// Advance a flow form over one full run, updating `m` so that the
/// relation `act(m, q0) = f` is preserved.
pub(crate) fn step_run(f: &Pibqf, m: &mut UniModularMatrix, sqrt_d: &BigInt) -> (Turn, BigInt, Pibqf) {
    let (turn, k) = run_length(f, sqrt_d);
    let g = apply(f, turn, &k);
    mul_turn(m, turn, &k);
    (turn, k, g)
}

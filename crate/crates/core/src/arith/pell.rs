use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use super::is_square;
use crate::error::{Error, Result};
use crate::forms::flow::step_run;
use crate::forms::{reduce, Pibqf, UniModularMatrix};

/// Minimal positive solution of `t^2 - D u^2 = 4`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PellSolution {
    pub t: BigInt,
    pub u: BigInt,
}

pub(crate) fn validate_discriminant(d: &BigInt) -> Result<()> {
    let r = d.mod_floor(&BigInt::from(4));
    if !d.is_positive() || r > BigInt::one() || is_square(d) {
        return Err(Error::InvalidDiscriminant(d.to_string()));
    }
    Ok(())
}

/// The river product of the principal form of discriminant `D` over one
/// period is its invariant automorph; read `T` from the trace and `U` from
/// the entries.
pub fn pell_minimal(d: &BigInt) -> Result<PellSolution> {
    validate_discriminant(d)?;
    let parity = d.mod_floor(&BigInt::from(2));
    let principal = Pibqf::raw(BigInt::one(), parity.clone(), (&parity - d) / 4);
    let (start, _) = reduce(&principal);
    let sqrt_d = d.sqrt();
    let mut w = UniModularMatrix::identity();
    let mut cur = start.clone();
    loop {
        let (_, _, next) = step_run(&cur, &mut w, &sqrt_d);
        cur = next;
        if cur == start {
            break;
        }
    }
    let [a, b, c, dd] = w.positive_trace_lift();
    let u = c.gcd(&b).gcd(&(&dd - &a));
    Ok(PellSolution { t: &a + &dd, u })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{isqrt_u64, Discriminant};
    use num_traits::{ToPrimitive, Zero};

    fn pell(d: i64) -> PellSolution {
        pell_minimal(&BigInt::from(d)).unwrap()
    }

    #[test]
    fn examples() {
        let p = |t: i64, u: i64| PellSolution { t: t.into(), u: u.into() };
        assert_eq!(pell(5), p(3, 1));
        assert_eq!(pell(8), p(6, 2));
        assert_eq!(pell(13), p(11, 3));
        assert_eq!(pell(12), p(4, 1));
        assert!(pell_minimal(&BigInt::from(9)).is_err());
        assert!(pell_minimal(&BigInt::from(7)).is_err());
        assert!(pell_minimal(&BigInt::from(-3)).is_err());
    }

    // Smallest y > 0 with x^2 - m y^2 = 1 from the continued fraction of sqrt(m).
    fn lagrange(m: i64) -> (BigInt, BigInt) {
        let a0 = isqrt_u64(m as u64) as i64;
        let (mut mm, mut dd, mut a) = (0i64, 1i64, a0);
        let (mut h0, mut h1) = (BigInt::one(), BigInt::from(a0));
        let (mut k0, mut k1) = (BigInt::zero(), BigInt::one());
        loop {
            if &h1 * &h1 - BigInt::from(m) * &k1 * &k1 == BigInt::one() {
                return (h1, k1);
            }
            mm = dd * a - mm;
            dd = (m - mm * mm) / dd;
            a = (a0 + mm) / dd;
            let h2 = BigInt::from(a) * &h1 + &h0;
            let k2 = BigInt::from(a) * &k1 + &k0;
            h0 = std::mem::replace(&mut h1, h2);
            k0 = std::mem::replace(&mut k1, k2);
        }
    }

    fn icbrt_solution(target: &BigInt) -> Option<BigInt> {
        // integer t > 2 with t^3 - 3t = target, by bisection
        let (mut lo, mut hi) = (BigInt::from(2), BigInt::from(3));
        let f = |t: &BigInt| t * t * t - BigInt::from(3) * t;
        while &f(&hi) <= target {
            hi *= 2;
        }
        while &hi - &lo > BigInt::one() {
            let mid = (&lo + &hi) / 2;
            if &f(&mid) <= target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (&f(&lo) == target).then_some(lo)
    }

    /// Fundamental solution of `t^2 - D u^2 = 4` through `x^2 - m y^2 = 1`.
    fn oracle(d: i64) -> PellSolution {
        if d % 4 == 0 {
            let (x, y) = lagrange(d / 4);
            return PellSolution { t: 2 * x, u: y };
        }
        let (x, y) = lagrange(d);
        if d % 8 == 5 {
            // the fundamental unit may be the cube root of x + y sqrt(D)
            if let Some(t) = icbrt_solution(&(BigInt::from(2) * &x)) {
                let u2 = (&t * &t - 4) / BigInt::from(d);
                if (&t * &t - 4) % BigInt::from(d) == BigInt::zero() && is_square(&u2) && t.is_odd() {
                    return PellSolution { t, u: u2.sqrt() };
                }
            }
        }
        PellSolution { t: 2 * x, u: 2 * y }
    }

    fn brute_force(d: i64, limit: u64) -> Option<(u64, u64)> {
        (1..=limit).find_map(|u| {
            let v = d as u64 * u * u + 4;
            let t = isqrt_u64(v);
            (t * t == v).then_some((t, u))
        })
    }

    #[test]
    fn matches_oracles_up_to_ten_thousand() {
        const LIMIT: u64 = 20_000;
        for d in 1..=10_000i64 {
            if !Discriminant::is_valid(d) {
                continue;
            }
            let p = pell(d);
            assert_eq!(&p.t * &p.t - BigInt::from(d) * &p.u * &p.u, BigInt::from(4), "D={d}");
            assert_eq!(p, oracle(d), "D={d}");
            match p.u.to_u64().filter(|&u| u <= LIMIT) {
                Some(u) => {
                    let (t, u2) = brute_force(d, u).expect("found by the river");
                    assert_eq!((BigInt::from(t), BigInt::from(u2)), (p.t.clone(), p.u.clone()), "D={d}");
                }
                None => assert!(brute_force(d, LIMIT).is_none(), "D={d}"),
            }
        }
    }
}

//! Exact integer primitives: square roots, Kronecker symbols, factorization,
//! continued fractions of quadratic irrationals and the Pell equation
//! `t^2 - D u^2 = 4`.

pub(crate) mod cf;
mod discriminant;
mod factor;
mod pell;

pub use cf::{cf_quadratic, PeriodicCF};
pub use discriminant::Discriminant;
pub use factor::{factorize, factorize_u64, is_prime_u64, Factorization};
pub use pell::{pell_minimal, PellSolution};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `floor(sqrt(n))` for a nonnegative integer.
pub fn isqrt(n: &BigInt) -> Result<BigInt> {
    if n.is_negative() {
        return Err(Error::NegativeInput(n.to_string()));
    }
    Ok(n.sqrt())
}

/// True when `n` is a perfect square. Negative numbers are never squares.
pub fn is_square(n: &BigInt) -> bool {
    match isqrt(n) {
        Ok(r) => &(&r * &r) == n,
        Err(_) => false,
    }
}

pub fn isqrt_u64(n: u64) -> u64 {
    n.isqrt()
}

pub fn is_square_u64(n: u64) -> bool {
    let r = n.isqrt();
    r * r == n
}

/// Kronecker symbol `(a/n)` for arbitrary integers.
pub fn kronecker(a: &BigInt, n: &BigInt) -> i8 {
    if let (Some(a), Some(n)) = (a.to_i64(), n.to_i64()) {
        return kronecker_i64(a, n);
    }
    let one = BigInt::from(1);
    if n.is_zero() {
        return if a.abs() == one { 1 } else { 0 };
    }
    let mut result = 1i8;
    let mut n = n.clone();
    if n.is_negative() {
        n = -n;
        if a.is_negative() {
            result = -result;
        }
    }
    let twos = n.trailing_zeros().unwrap_or(0);
    if twos > 0 {
        if a.is_even() {
            return 0;
        }
        n >>= twos;
        let r8 = a.mod_floor(&BigInt::from(8)).to_u8().unwrap_or(0);
        if twos % 2 == 1 && (r8 == 3 || r8 == 5) {
            result = -result;
        }
    }
    let mut a = a.mod_floor(&n);
    // Jacobi symbol for odd positive n.
    while !a.is_zero() {
        let t = a.trailing_zeros().unwrap_or(0);
        if t > 0 {
            a >>= t;
            let r8 = n.mod_floor(&BigInt::from(8)).to_u8().unwrap_or(0);
            if t % 2 == 1 && (r8 == 3 || r8 == 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        let a4 = a.mod_floor(&BigInt::from(4));
        let n4 = n.mod_floor(&BigInt::from(4));
        if a4 == BigInt::from(3) && n4 == BigInt::from(3) {
            result = -result;
        }
        a = a.mod_floor(&n);
    }
    if n == one {
        result
    } else {
        0
    }
}

/// Machine-integer Kronecker symbol, used on hot paths.
pub fn kronecker_i64(a: i64, n: i64) -> i8 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut result = 1i8;
    let mut n = n as i128;
    let a = a as i128;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let twos = n.trailing_zeros();
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        n >>= twos;
        let r8 = a.rem_euclid(8);
        if twos % 2 == 1 && (r8 == 3 || r8 == 5) {
            result = -result;
        }
    }
    let mut a = a.rem_euclid(n);
    while a != 0 {
        let t = a.trailing_zeros();
        a >>= t;
        let r8 = n % 8;
        if t % 2 == 1 && (r8 == 3 || r8 == 5) {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isqrt_examples() {
        assert_eq!(isqrt(&BigInt::from(0)).unwrap(), BigInt::from(0));
        assert_eq!(isqrt(&BigInt::from(680)).unwrap(), BigInt::from(26));
        assert_eq!(isqrt(&BigInt::from(396)).unwrap(), BigInt::from(19));
        assert!(matches!(isqrt(&BigInt::from(-1)), Err(Error::NegativeInput(_))));
        assert!(is_square(&BigInt::from(169)));
        assert!(!is_square(&BigInt::from(170)));
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker_i64(5, 2), -1);
        assert_eq!(kronecker_i64(136, 5), 1);
        for a in -20..20 {
            assert_eq!(kronecker_i64(a, 1), 1);
        }
        assert_eq!(kronecker_i64(136, 2), 0);
        assert_eq!(kronecker_i64(-1, -1), -1);
    }

    // Euler's criterion on odd primes is an independent route to the symbol.
    #[test]
    fn kronecker_matches_euler_criterion() {
        for &p in &[3i64, 5, 7, 11, 13, 97, 101] {
            for a in -50i64..50 {
                let r = a.rem_euclid(p);
                let e = if r == 0 {
                    0
                } else {
                    let mut acc = 1i64;
                    for _ in 0..(p - 1) / 2 {
                        acc = acc * r % p;
                    }
                    if acc == 1 {
                        1
                    } else {
                        -1
                    }
                };
                assert_eq!(kronecker_i64(a, p) as i64, e, "({a}/{p})");
            }
        }
    }

    #[test]
    fn big_and_small_agree() {
        let huge = BigInt::from(u64::MAX) * BigInt::from(7) + 3;
        for n in [1i64, 2, 3, 8, 15, 21, 1000, -7] {
            let big = kronecker(&huge, &BigInt::from(n));
            let reduced = huge.mod_floor(&BigInt::from(8 * n.abs())).to_i64().unwrap();
            assert_eq!(big, kronecker_i64(reduced, n), "n={n}");
        }
    }
}

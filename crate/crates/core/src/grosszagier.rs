//! Total intersection numbers of two discriminants, both from the exact
//! divisor-sum formula and by summing over pairs of narrow classes.

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{factorize_u64, isqrt_u64, kronecker_i64, Discriminant};
use crate::error::{Error, Result};
use crate::forms::{narrow_class_group, Pibqf};
use crate::intersect::intersection_from_rivers;
use crate::river::river_of;

/// All `n` with `n^2 < D1 D2` and `n = D1 D2 (mod 2)`, increasing.
pub fn s_range(d1: Discriminant, d2: Discriminant) -> Result<Vec<i64>> {
    let prod = product(d1, d2)?;
    let mut top = isqrt_u64(prod) as i64;
    if (top as u64) * (top as u64) == prod {
        top -= 1;
    }
    let parity = (prod % 2) as i64;
    if top.rem_euclid(2) != parity {
        top -= 1;
    }
    Ok((-top..=top).step_by(2).collect())
}

fn product(d1: Discriminant, d2: Discriminant) -> Result<u64> {
    (d1.get() as u64)
        .checked_mul(d2.get() as u64)
        .ok_or_else(|| Error::Overflow(format!("{d1} * {d2}")))
}

/// `epsilon(p)`: the nonzero one of `(D1/p)` and `(D2/p)`.
fn epsilon_prime(d1: i64, d2: i64, p: u64) -> Result<i8> {
    let p = p as i64;
    let (k1, k2) = (kronecker_i64(d1, p), kronecker_i64(d2, p));
    if k1 == 0 && k2 == 0 {
        return Err(Error::EpsilonUndefined { prime: p as u64, reason: "divides both discriminants" });
    }
    if k1 * k2 == -1 {
        return Err(Error::EpsilonUndefined { prime: p as u64, reason: "D1*D2 is not a square modulo p" });
    }
    Ok(if k1 != 0 { k1 } else { k2 })
}

/// Multiplicative extension of `epsilon` to `m >= 1`.
pub fn epsilon(d1: Discriminant, d2: Discriminant, m: u64) -> Result<i8> {
    let mut e = 1i8;
    for &(p, k) in factorize_u64(m)?.pairs() {
        if k % 2 == 1 {
            e *= epsilon_prime(d1.get(), d2.get(), p)?;
        }
    }
    Ok(e)
}

/// How a prime of `(D1 D2 - n^2)/4` enters the product formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PrimeRole {
    /// `epsilon = -1` to an odd power; forces `p(n) = 0`.
    P,
    /// `epsilon = -1` to an even power; contributes a factor 1.
    Q,
    /// `epsilon = +1`; contributes `g + 1`.
    W,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeFactor {
    pub prime: u64,
    pub exponent: u32,
    pub epsilon: i8,
    pub role: PrimeRole,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PnProfile {
    pub n: i64,
    /// `(D1 D2 - n^2) / 4`.
    pub m: u64,
    pub value: u64,
    pub factors: Vec<PrimeFactor>,
}

impl PnProfile {
    pub fn factorization_string(&self) -> String {
        if self.factors.is_empty() {
            return "1".into();
        }
        self.factors
            .iter()
            .map(|f| if f.exponent == 1 { f.prime.to_string() } else { format!("{}^{}", f.prime, f.exponent) })
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// Scope of the closed formula: distinct, coprime, fundamental.
pub fn check_formula_scope(d1: Discriminant, d2: Discriminant) -> Result<()> {
    use num_integer::Integer;
    if d1 == d2 {
        return Err(Error::FormulaScope(format!("discriminants must differ, got {d1} twice")));
    }
    if d1.get().gcd(&d2.get()) != 1 {
        return Err(Error::FormulaScope(format!("{d1} and {d2} are not coprime")));
    }
    for d in [d1, d2] {
        if !d.is_fundamental() {
            return Err(Error::FormulaScope(format!("{d} is not a fundamental discriminant")));
        }
    }
    Ok(())
}

// 2 * sum over divisors of m of epsilon(d), from the factorization.
fn divisor_sum(factors: &[PrimeFactor]) -> i64 {
    let mut divisors: Vec<(u64, i64)> = vec![(1, 1)];
    for f in factors {
        let mut next = Vec::with_capacity(divisors.len() * (f.exponent as usize + 1));
        for &(d, e) in &divisors {
            let (mut pd, mut pe) = (d, e);
            next.push((pd, pe));
            for _ in 0..f.exponent {
                pd *= f.prime;
                pe *= f.epsilon as i64;
                next.push((pd, pe));
            }
        }
        divisors = next;
    }
    2 * divisors.iter().map(|&(_, e)| e).sum::<i64>()
}

/// `p(n)` by the product formula, cross-checked against the divisor sum.
pub fn p_count(d1: Discriminant, d2: Discriminant, n: i64) -> Result<PnProfile> {
    check_formula_scope(d1, d2)?;
    let prod = product(d1, d2)?;
    let n2 = (n.unsigned_abs()).checked_mul(n.unsigned_abs()).ok_or_else(|| Error::Overflow(n.to_string()))?;
    if n2 >= prod || (prod - n2) % 4 != 0 {
        return Err(Error::InvalidArgument(format!("{n} is not in S({d1},{d2})")));
    }
    let m = (prod - n2) / 4;
    let mut factors = Vec::new();
    for &(p, k) in factorize_u64(m)?.pairs() {
        let e = epsilon_prime(d1.get(), d2.get(), p)?;
        let role = match (e, k % 2) {
            (1, _) => PrimeRole::W,
            (_, 1) => PrimeRole::P,
            _ => PrimeRole::Q,
        };
        factors.push(PrimeFactor { prime: p, exponent: k, epsilon: e, role });
    }
    let value = if factors.iter().any(|f| f.role == PrimeRole::P) {
        0
    } else {
        2 * factors
            .iter()
            .filter(|f| f.role == PrimeRole::W)
            .map(|f| f.exponent as u64 + 1)
            .product::<u64>()
    };
    let check = divisor_sum(&factors);
    assert_eq!(value as i64, check, "product and divisor-sum forms of p({n}) disagree");
    Ok(PnProfile { n, m, value, factors })
}

pub fn p_table(d1: Discriminant, d2: Discriminant) -> Result<Vec<PnProfile>> {
    check_formula_scope(d1, d2)?;
    s_range(d1, d2)?.into_par_iter().map(|n| p_count(d1, d2, n)).collect()
}

/// `Int(D1, D2)` as the sum of `p(n)` over `S(D1, D2)`.
pub fn total_intersection_formula(d1: Discriminant, d2: Discriminant) -> Result<u64> {
    Ok(p_table(d1, d2)?.iter().map(|p| p.value).sum())
}

/// `Int(q1, q2)` for every pair of class representatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassBreakdown {
    pub reps1: Vec<Pibqf>,
    pub reps2: Vec<Pibqf>,
    /// `cells[i][j] = Int(reps1[i], reps2[j])`.
    pub cells: Vec<Vec<u64>>,
}

impl ClassBreakdown {
    pub fn total(&self) -> u64 {
        self.cells.iter().flatten().sum()
    }
}

pub fn class_breakdown(d1: Discriminant, d2: Discriminant) -> Result<ClassBreakdown> {
    if d1 == d2 {
        return Err(Error::InvalidArgument(format!("discriminants must differ, got {d1} twice")));
    }
    let reps1 = narrow_class_group(d1);
    let reps2 = narrow_class_group(d2);
    let rivers1: Vec<_> = reps1.par_iter().map(river_of).collect();
    let rivers2: Vec<_> = reps2.par_iter().map(river_of).collect();
    let cells = rivers1
        .par_iter()
        .map(|r1| rivers2.iter().map(|r2| intersection_from_rivers(r1, r2)).collect())
        .collect();
    Ok(ClassBreakdown { reps1, reps2, cells })
}

/// `Int(D1, D2)` as the double sum over narrow classes.
pub fn total_intersection_classes(d1: Discriminant, d2: Discriminant) -> Result<u64> {
    Ok(class_breakdown(d1, d2)?.total())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disc(d: i64) -> Discriminant {
        Discriminant::new(d).unwrap()
    }

    #[test]
    fn s_range_examples() {
        let s = s_range(disc(5), disc(136)).unwrap();
        assert_eq!(s, (-26..=26).step_by(2).collect::<Vec<_>>());
        assert_eq!(s.len(), 27);
        assert_eq!(s_range(disc(5), disc(12)).unwrap(), vec![-6, -4, -2, 0, 2, 4, 6]);
        assert_eq!(s_range(disc(5), disc(13)).unwrap(), vec![-7, -5, -3, -1, 1, 3, 5, 7]);
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(epsilon(disc(5), disc(136), 5).unwrap(), 1);
        assert_eq!(epsilon(disc(5), disc(136), 2).unwrap(), -1);
        assert_eq!(epsilon(disc(5), disc(136), 1).unwrap(), 1);
        assert!(matches!(
            epsilon(disc(5), disc(40), 5),
            Err(Error::EpsilonUndefined { prime: 5, .. })
        ));
        // (5*136 / 3) = (2/3) = -1
        assert!(matches!(epsilon(disc(5), disc(136), 3), Err(Error::EpsilonUndefined { prime: 3, .. })));
    }

    #[test]
    fn p_examples() {
        let p = |n| p_count(disc(5), disc(136), n).unwrap().value;
        assert_eq!(p(10), 8);
        assert_eq!(p(26), 2);
        assert_eq!(p(0), 0);
        let prof = p_count(disc(5), disc(136), 0).unwrap();
        assert_eq!(prof.m, 170);
        assert_eq!(prof.factorization_string(), "2*5*17");
        assert!(prof.factors.iter().any(|f| f.prime == 2 && f.role == PrimeRole::P));
        assert!(matches!(p_count(disc(5), disc(136), 27), Err(Error::InvalidArgument(_))));
        assert!(matches!(p_count(disc(8), disc(12), 0), Err(Error::FormulaScope(_))));
        assert!(matches!(p_count(disc(5), disc(20), 0), Err(Error::FormulaScope(_))));
    }

    #[test]
    fn totals() {
        assert_eq!(total_intersection_formula(disc(5), disc(136)).unwrap(), 48);
        assert_eq!(total_intersection_classes(disc(5), disc(136)).unwrap(), 48);
        let mut cells: Vec<u64> = class_breakdown(disc(5), disc(136)).unwrap().cells.concat();
        cells.sort();
        assert_eq!(cells, vec![8, 8, 16, 16]);
        assert_eq!(total_intersection_formula(disc(5), disc(12)).unwrap(), 8);
        assert_eq!(class_breakdown(disc(5), disc(12)).unwrap().cells, vec![vec![4, 4]]);
        assert_eq!(
            total_intersection_formula(disc(5), disc(8)).unwrap(),
            total_intersection_classes(disc(5), disc(8)).unwrap()
        );
        assert!(total_intersection_classes(disc(5), disc(5)).is_err());
        // the class-sum route has no fundamentality requirement
        assert!(total_intersection_classes(disc(20), disc(45)).is_ok());
    }

    fn fundamentals(limit: i64) -> Vec<Discriminant> {
        (5..=limit)
            .filter(|&d| Discriminant::is_valid(d))
            .map(disc)
            .filter(|d| d.is_fundamental())
            .collect()
    }

    #[test]
    fn formula_matches_classes_small() {
        use num_integer::Integer;
        let ds = fundamentals(120);
        for (i, &d1) in ds.iter().enumerate() {
            for &d2 in &ds[i + 1..] {
                if d1.get().gcd(&d2.get()) != 1 {
                    continue;
                }
                let f = total_intersection_formula(d1, d2).unwrap();
                let b = class_breakdown(d1, d2).unwrap();
                assert_eq!(f, b.total(), "({d1},{d2})");
                assert!(f >= 4 * (b.reps1.len() * b.reps2.len()) as u64);
            }
        }
    }

    #[test]
    fn p_symmetry_and_parity() {
        for (d1, d2) in [(5, 136), (5, 13), (8, 21), (12, 385), (13, 17)] {
            let (d1, d2) = (disc(d1), disc(d2));
            for prof in p_table(d1, d2).unwrap() {
                assert_eq!(prof.value % 2, 0);
                assert_eq!(prof.value, p_count(d1, d2, -prof.n).unwrap().value);
            }
        }
    }
}

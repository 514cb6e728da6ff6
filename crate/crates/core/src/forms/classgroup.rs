use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use super::reduce::reduced_cycle;
use super::Pibqf;
use crate::arith::{isqrt_u64, Discriminant};

/// All reduced forms `[A,B,C]` of discriminant `D` with `A > 0`.
///
/// Such forms have `0 < B < sqrt(D)`, `A |C| = (D - B^2)/4` and `|A - |C|| < B`.
pub(crate) fn positive_reduced_forms(d: Discriminant) -> Vec<Pibqf> {
    let d = d.get();
    let s = isqrt_u64(d as u64) as i64;
    let mut out = Vec::new();
    let mut b = if d % 2 == 0 { 2 } else { 1 };
    while b <= s {
        let n = (d - b * b) / 4;
        let mut a = 1i64;
        while a * a <= n {
            if n % a == 0 {
                for (x, y) in [(a, n / a), (n / a, a)] {
                    if (x - y).abs() < b && x.gcd(&b).gcd(&y) == 1 {
                        out.push(Pibqf::raw(BigInt::from(x), BigInt::from(b), BigInt::from(-y)));
                    }
                }
            }
            a += 1;
        }
        b += 2;
    }
    out.sort();
    out.dedup();
    out
}

fn rep_key(q: &Pibqf) -> (BigInt, BigInt, BigInt) {
    (q.a().abs(), q.a().clone(), q.b().clone())
}

/// One representative per narrow class, chosen as the element of the class's
/// reduced cycle minimal under `(|A|, A, B)`. The list is sorted by that key.
pub fn narrow_class_group(d: Discriminant) -> Vec<Pibqf> {
    let forms = positive_reduced_forms(d);
    let mut seen: HashSet<Pibqf> = HashSet::with_capacity(forms.len());
    let mut reps = Vec::new();
    for f in &forms {
        if seen.contains(f) {
            continue;
        }
        let cycle = reduced_cycle(f).expect("enumerated forms are reduced");
        seen.extend(cycle.iter().filter(|g| g.a().is_positive()).cloned());
        let rep = cycle
            .into_iter()
            .min_by_key(rep_key)
            .expect("cycles are nonempty");
        reps.push(rep);
    }
    reps.sort_by_key(rep_key);
    reps
}

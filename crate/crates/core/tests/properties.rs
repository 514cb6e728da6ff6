//! Cross-module properties through the public API.

use num_integer::Integer;
use proptest::prelude::*;

use riverlink::arith::Discriminant;
use riverlink::experiments::{fundamental_discriminants_in, intersection_locus};
use riverlink::forms::{is_equivalent, narrow_class_group, Pibqf};
use riverlink::grosszagier::{class_breakdown, p_table, total_intersection_formula};
use riverlink::intersect::{components, enumerate_crossings, intersection_number};
use riverlink::river::{river_of, river_reverse};

fn fundamentals() -> Vec<i64> {
    fundamental_discriminants_in(5, 2000).unwrap().into_iter().map(Discriminant::get).collect()
}

fn coprime_pair() -> impl Strategy<Value = (Discriminant, Discriminant)> {
    let ds = fundamentals();
    (proptest::sample::select(ds.clone()), proptest::sample::select(ds))
        .prop_filter("distinct coprime", |(a, b)| a != b && a.gcd(b) == 1)
        .prop_map(|(a, b)| (Discriminant::new(a).unwrap(), Discriminant::new(b).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn formula_matches_class_sum((d1, d2) in coprime_pair()) {
        let b = class_breakdown(d1, d2).unwrap();
        prop_assert_eq!(total_intersection_formula(d1, d2).unwrap(), b.total());
        prop_assert!(b.total() >= 4 * (b.reps1.len() * b.reps2.len()) as u64);
        for p in p_table(d1, d2).unwrap() {
            prop_assert_eq!(p.value % 2, 0);
        }
    }

    #[test]
    fn locus_counts_match_classwise((d1, d2) in coprime_pair()) {
        let (d1, d2) = if d1.get() < d2.get() { (d1, d2) } else { (d2, d1) };
        prop_assume!(d2.get() <= 800);
        let b = class_breakdown(d1, d2).unwrap();
        let q = &b.reps1[0];
        let samples = intersection_locus(q, d2, None).unwrap();
        prop_assert_eq!(samples.len() as u64, b.cells[0].iter().sum::<u64>());
        for s in &samples {
            let [a, bb, c] = &s.record.point_form;
            prop_assert_eq!(bb * bb - 4 * a * c, &s.record.bdelta * &s.record.bdelta - d1.to_bigint() * d2.to_bigint());
        }
    }

    #[test]
    fn crossings_realize_the_components(i in 0usize..400, j in 0usize..400) {
        let ds = fundamentals();
        let (d1, d2) = (Discriminant::new(ds[i % ds.len()]).unwrap(), Discriminant::new(ds[j % ds.len()]).unwrap());
        prop_assume!(d1 != d2 && d1.get() * d2.get() < 40_000);
        let q1 = narrow_class_group(d1).pop().unwrap();
        let q2 = narrow_class_group(d2).pop().unwrap();
        let c = components(&q1, &q2).unwrap();
        let crossings = enumerate_crossings(&q1, &q2).unwrap();
        prop_assert_eq!(crossings.len() as u64, c.total());
        prop_assert_eq!(crossings.iter().map(|x| x.kind.sign() as i64).sum::<i64>(), c.signed());
        for x in &crossings {
            prop_assert!(is_equivalent(&x.partner, &q2).is_some(), "{} not in the class of {}", x.partner, q2);
        }
    }
}

#[test]
fn reciprocal_symmetry_of_intersections() {
    let q1: Pibqf = "[1,1,-1]".parse().unwrap();
    for d in [12, 13, 17, 21, 28, 33, 136] {
        for q2 in narrow_class_group(Discriminant::new(d).unwrap()) {
            let a = intersection_number(&q1, &q2).unwrap();
            assert_eq!(a, intersection_number(&q2, &q1).unwrap());
            assert_eq!(a, intersection_number(&q1, &q2.reciprocal()).unwrap());
            assert_eq!(river_of(&q2.reciprocal()), river_reverse(&river_of(&q2)));
        }
    }
}

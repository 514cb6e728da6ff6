//! Batch studies: intersection loci and angle statistics along a fixed
//! geodesic, the normalized total intersection `C(D1, D2)`, and timings of
//! the two `Int^RS` algorithms.
//!
//! Randomness comes from a seeded SplitMix64 generator. Batches run on a
//! rayon pool sized by `RIVERLINK_THREADS` (unset or 0 means one worker per
//! core) and results are always merged in input order.

use std::time::Instant;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{pell_minimal, Discriminant};
use crate::error::{Error, Result};
use crate::forms::{automorph, narrow_class_group, Pibqf};
use crate::geometry::{apex, arc_coordinate, crossing_point, hyperbolic_distance, mobius, semicircle, IntersectionRecord};
use crate::grosszagier::{check_formula_scope, total_intersection_classes, total_intersection_formula};
use crate::intersect::{enumerate_crossings, int_rs_fast, int_rs_naive};
use crate::river::river_of;

pub const THREADS_ENV: &str = "RIVERLINK_THREADS";

/// Worker count requested through `RIVERLINK_THREADS`; 0 means automatic.
pub fn configured_threads() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(0),
        Ok(s) if s.trim().is_empty() => Ok(0),
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("{THREADS_ENV}={s:?} is not a nonnegative integer"))),
    }
}

/// Run `f` on a pool sized by `RIVERLINK_THREADS`.
pub fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(configured_threads()?)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot build thread pool: {e}")))?;
    Ok(pool.install(f))
}

pub fn seeded_rng(seed: u64) -> SplitMix64 {
    SplitMix64::seed_from_u64(seed)
}

fn check_range(lo: i64, hi: i64) -> Result<()> {
    if lo > hi {
        return Err(Error::InvalidArgument(format!("empty range [{lo}, {hi}]")));
    }
    Ok(())
}

/// Valid (positive, nonsquare, 0 or 1 mod 4) discriminants in `[lo, hi]`.
pub fn discriminants_in(lo: i64, hi: i64) -> Result<Vec<Discriminant>> {
    check_range(lo, hi)?;
    let v: Vec<_> = (lo.max(1)..=hi)
        .filter(|&d| Discriminant::is_valid(d))
        .map(|d| Discriminant::new(d).expect("filtered"))
        .collect();
    if v.is_empty() {
        return Err(Error::InvalidArgument(format!("no discriminants in [{lo}, {hi}]")));
    }
    Ok(v)
}

pub fn fundamental_discriminants_in(lo: i64, hi: i64) -> Result<Vec<Discriminant>> {
    let v: Vec<_> = discriminants_in(lo, hi)?.into_iter().filter(|d| d.is_fundamental()).collect();
    if v.is_empty() {
        return Err(Error::InvalidArgument(format!("no fundamental discriminants in [{lo}, {hi}]")));
    }
    Ok(v)
}

/// A uniformly random narrow class representative of discriminant `d`.
pub fn random_class(rng: &mut SplitMix64, d: Discriminant) -> Pibqf {
    narrow_class_group(d).choose(rng).expect("every class group is nonempty").clone()
}

/// `ln x` for a positive integer of any size.
fn ln_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().unwrap_or(f64::NAN).ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().unwrap_or(f64::NAN).ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ln((T + U sqrt D)/2)` for the minimal solution of `T^2 - D U^2 = 4`,
/// i.e. the log of the fundamental totally positive unit.
pub fn log_unit(d: Discriminant) -> f64 {
    let p = pell_minimal(&d.to_bigint()).expect("valid discriminant");
    // (T + sqrt(T^2 - 4))/2 = (T/2)(1 + sqrt(1 - 4/T^2))
    let ln_t = ln_big(&p.t);
    let inv_sq = (-2.0 * ln_t).exp() * 4.0;
    ln_t + (1.0 + (1.0 - inv_sq).sqrt()).ln() - std::f64::consts::LN_2
}

/// Length of the closed geodesic of `q`: `d(z, gamma_q z)` for `z` on its
/// root geodesic, falling back to `2 ln epsilon` when the automorph is too
/// large for floating point.
pub fn geodesic_length(q: &Pibqf) -> f64 {
    let z = apex(q);
    let l = hyperbolic_distance(z, mobius(&automorph(q), z)).unwrap_or(f64::NAN);
    if l.is_finite() && l > 0.0 {
        l
    } else {
        let d = Discriminant::new(q.discriminant().to_i64().expect("machine-sized discriminant")).expect("valid");
        2.0 * log_unit(d)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocusSample {
    #[serde(serialize_with = "crate::forms::ser_display")]
    pub partner_class: Pibqf,
    pub record: IntersectionRecord,
    /// Distance along the closed geodesic from the base point, in `[0, length)`.
    pub arc_distance: f64,
}

/// Every intersection of the closed geodesic of `q` with the closed
/// geodesics of discriminant `d`, lifted to the root geodesic of `q`.
///
/// `base` must lie on the root geodesic of `q`; it defaults to the apex.
pub fn intersection_locus(q: &Pibqf, d: Discriminant, base: Option<Complex64>) -> Result<Vec<LocusSample>> {
    if q.discriminant() == d.to_bigint() {
        return Err(Error::InvalidArgument(format!(
            "discriminant {d} equals that of {q}; the locus needs a different discriminant"
        )));
    }
    let base = match base {
        None => apex(q),
        Some(z) => {
            let (c, r) = semicircle(q);
            if z.im.is_nan() || z.im <= 0.0 {
                return Err(Error::NotInUpperHalfPlane(z.to_string()));
            }
            if ((z - c).norm() - r).abs() > 1e-9 * (1.0 + r) {
                return Err(Error::InvalidArgument(format!("base point {z} is not on the root geodesic of {q}")));
            }
            z
        }
    };
    let length = geodesic_length(q);
    let s0 = arc_coordinate(q, base);
    let per_class: Vec<Result<Vec<LocusSample>>> = narrow_class_group(d)
        .into_par_iter()
        .map(|rep| {
            enumerate_crossings(q, &rep)?
                .into_iter()
                .map(|c| {
                    let mut record = crossing_point(q, &c.partner)?;
                    let mut s = (arc_coordinate(q, record.point) - s0).rem_euclid(length);
                    if s >= length {
                        s = 0.0;
                    }
                    record.arc_distance = s;
                    Ok(LocusSample { partner_class: rep.clone(), record, arc_distance: s })
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for v in per_class {
        out.extend(v?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HistogramBin {
    pub bin_lo: f64,
    pub bin_hi: f64,
    /// Fraction of the samples in the bin.
    pub mass: f64,
}

impl HistogramBin {
    /// Height of the bin as a density on `[0, pi]`.
    pub fn density(&self) -> f64 {
        self.mass / (self.bin_hi - self.bin_lo)
    }
}

/// Equal-width histogram of angles over `[0, pi]`; masses sum to one.
pub fn angle_histogram(angles: &[f64], bins: usize) -> Result<Vec<HistogramBin>> {
    if bins == 0 {
        return Err(Error::InvalidArgument("bins must be at least 1".into()));
    }
    if angles.is_empty() {
        return Ok(Vec::new());
    }
    let pi = std::f64::consts::PI;
    let width = pi / bins as f64;
    let mut counts = vec![0u64; bins];
    for &a in angles {
        if !(0.0..=pi).contains(&a) {
            return Err(Error::InvalidArgument(format!("angle {a} is outside [0, pi]")));
        }
        counts[((a / width) as usize).min(bins - 1)] += 1;
    }
    let n = angles.len() as f64;
    Ok(counts
        .iter()
        .enumerate()
        .map(|(i, &k)| HistogramBin {
            bin_lo: i as f64 * width,
            bin_hi: if i + 1 == bins { pi } else { (i + 1) as f64 * width },
            mass: k as f64 / n,
        })
        .collect())
}

/// Kolmogorov-Smirnov distance between the sample and the density
/// `sin(x)/2` on `[0, pi]`.
pub fn ks_half_sine(angles: &[f64]) -> f64 {
    let mut xs = angles.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = (1.0 - x.cos()) / 2.0;
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CStat {
    pub d1: i64,
    pub d2: i64,
    pub int_total: u64,
    pub h1: usize,
    pub h2: usize,
    /// `ln((T + U sqrt D)/2)`, the log of the fundamental totally positive unit.
    pub r1: f64,
    pub r2: f64,
    pub c: f64,
}

impl CStat {
    /// `c` recomputed with the uncorrected regulators `ln(T + U sqrt D)`.
    ///
    /// Averaged over random pairs this settles near 2.25, while `c` settles
    /// near 2.44.
    pub fn c_literal(&self) -> f64 {
        let ln2 = std::f64::consts::LN_2;
        self.c * self.r1 * self.r2 / ((self.r1 + ln2) * (self.r2 + ln2))
    }
}

/// `Int(D1, D2) / (h1 h2 R1 R2)` with `R = ln((T + U sqrt D)/2)`.
///
/// Uses the divisor-sum formula when the pair is in its scope and the
/// class-pair sum otherwise.
pub fn c_statistic(d1: Discriminant, d2: Discriminant) -> Result<CStat> {
    let int_total = if check_formula_scope(d1, d2).is_ok() {
        total_intersection_formula(d1, d2)?
    } else {
        total_intersection_classes(d1, d2)?
    };
    let h1 = narrow_class_group(d1).len();
    let h2 = narrow_class_group(d2).len();
    let (r1, r2) = (log_unit(d1), log_unit(d2));
    let c = int_total as f64 / (h1 as f64 * h2 as f64 * r1 * r2);
    Ok(CStat { d1: d1.get(), d2: d2.get(), int_total, h1, h2, r1, r2, c })
}

/// Seeded random pairs of distinct coprime fundamental discriminants.
pub fn sample_coprime_fundamental_pairs(
    range1: (i64, i64),
    range2: (i64, i64),
    trials: usize,
    seed: u64,
) -> Result<Vec<(Discriminant, Discriminant)>> {
    let f1 = fundamental_discriminants_in(range1.0, range1.1)?;
    let f2 = fundamental_discriminants_in(range2.0, range2.1)?;
    let mut rng = seeded_rng(seed);
    let mut out = Vec::with_capacity(trials);
    let mut misses = 0usize;
    while out.len() < trials {
        let d1 = *f1.choose(&mut rng).expect("nonempty");
        let d2 = *f2.choose(&mut rng).expect("nonempty");
        if d1 != d2 && d1.get().gcd(&d2.get()) == 1 {
            out.push((d1, d2));
        } else {
            misses += 1;
            if misses > 1000 * (trials + 1) {
                return Err(Error::InvalidArgument("ranges contain no coprime pair".into()));
            }
        }
    }
    Ok(out)
}

/// `c_statistic` over seeded random coprime fundamental pairs.
pub fn c_statistic_batch(range1: (i64, i64), range2: (i64, i64), trials: usize, seed: u64) -> Result<Vec<CStat>> {
    let pairs = sample_coprime_fundamental_pairs(range1, range2, trials, seed)?;
    with_pool(|| pairs.par_iter().map(|&(a, b)| c_statistic(a, b)).collect())?
}

/// Reproducible part of one benchmark trial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BenchPair {
    #[serde(serialize_with = "crate::forms::ser_display")]
    pub q1: Pibqf,
    #[serde(serialize_with = "crate::forms::ser_display")]
    pub q2: Pibqf,
    pub p1: usize,
    pub p2: usize,
    pub int_rs: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub d1_lo: i64,
    pub d1_hi: i64,
    pub d2_lo: i64,
    pub d2_hi: i64,
    pub p1_avg: f64,
    pub p2_avg: f64,
    pub intrs_avg: f64,
    pub t_river_ms: f64,
    pub t_naive_ms: f64,
    pub t_fast_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub row: BenchRow,
    pub pairs: Vec<BenchPair>,
}

/// Seeded random form pairs: a uniform valid discriminant from each range,
/// then a uniform class representative of it.
pub fn sample_form_pairs(range1: (i64, i64), range2: (i64, i64), trials: usize, seed: u64) -> Result<Vec<(Pibqf, Pibqf)>> {
    let ds1 = discriminants_in(range1.0, range1.1)?;
    let ds2 = discriminants_in(range2.0, range2.1)?;
    let mut rng = seeded_rng(seed);
    Ok((0..trials)
        .map(|_| {
            let d1 = *ds1.choose(&mut rng).expect("nonempty");
            let d2 = *ds2.choose(&mut rng).expect("nonempty");
            (random_class(&mut rng, d1), random_class(&mut rng, d2))
        })
        .collect())
}

fn millis(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

/// Mean timings of `Int^RS` by both algorithms on precomputed rivers.
///
/// Timing runs sequentially so the two algorithms see the same machine load.
pub fn bench_compare(range1: (i64, i64), range2: (i64, i64), trials: usize, seed: u64) -> Result<BenchReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let forms = sample_form_pairs(range1, range2, trials, seed)?;
    let (mut t_river, mut t_naive, mut t_fast) = (0.0, 0.0, 0.0);
    let mut pairs = Vec::with_capacity(trials);
    for (q1, q2) in forms {
        let t = Instant::now();
        let (r1, r2) = (river_of(&q1), river_of(&q2));
        t_river += millis(t);
        let t = Instant::now();
        let naive = int_rs_naive(&r1, &r2);
        t_naive += millis(t);
        let t = Instant::now();
        let fast = int_rs_fast(&r1, &r2);
        t_fast += millis(t);
        assert_eq!(naive, fast, "Int^RS algorithms disagree on {q1}, {q2}");
        pairs.push(BenchPair { p1: r1.period(), p2: r2.period(), int_rs: fast, q1, q2 });
    }
    let n = trials as f64;
    let avg = |f: &dyn Fn(&BenchPair) -> f64| pairs.iter().map(f).sum::<f64>() / n;
    let row = BenchRow {
        d1_lo: range1.0,
        d1_hi: range1.1,
        d2_lo: range2.0,
        d2_hi: range2.1,
        p1_avg: avg(&|p| p.p1 as f64),
        p2_avg: avg(&|p| p.p2 as f64),
        intrs_avg: avg(&|p| p.int_rs as f64),
        t_river_ms: t_river / n,
        t_naive_ms: t_naive / n,
        t_fast_ms: t_fast / n,
    };
    Ok(BenchReport { row, pairs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::testutil::f;
    use crate::grosszagier::class_breakdown;
    use std::f64::consts::PI;

    fn disc(d: i64) -> Discriminant {
        Discriminant::new(d).unwrap()
    }

    #[test]
    fn locus_counts() {
        let q = f(1, 1, -1);
        assert_eq!(intersection_locus(&q, disc(136), None).unwrap().len(), 48);
        assert_eq!(intersection_locus(&q, disc(12), None).unwrap().len(), 8);
        assert!(intersection_locus(&q, disc(5), None).is_err());
        for d in [8, 13, 21, 40, 60, 85, 104, 221] {
            let samples = intersection_locus(&q, disc(d), None).unwrap();
            let b = class_breakdown(disc(5), disc(d)).unwrap();
            assert_eq!(samples.len() as u64, b.total(), "D={d}");
            for (rep, &cell) in b.reps2.iter().zip(&b.cells[0]) {
                assert_eq!(samples.iter().filter(|s| &s.partner_class == rep).count() as u64, cell);
            }
        }
    }

    #[test]
    fn locus_samples_are_consistent() {
        let q = f(1, 1, -1);
        let len = geodesic_length(&q);
        // 2 ln of the golden ratio squared
        assert!((len - 2.0 * ((3.0 + 5f64.sqrt()) / 2.0).ln()).abs() < 1e-12);
        let base = Complex64::new(-4.0 / 3.0, 5f64.sqrt() / 3.0);
        for b in [None, Some(base)] {
            for s in intersection_locus(&q, disc(136), b).unwrap() {
                assert!((0.0..len).contains(&s.arc_distance));
                let [a, bb, c] = &s.record.point_form;
                assert_eq!(bb * bb - 4 * a * c, &s.record.bdelta * &s.record.bdelta - BigInt::from(5 * 136));
                let z = s.record.point;
                assert!((z.norm_sqr() + z.re - 1.0).abs() < 1e-9);
            }
        }
        assert!(intersection_locus(&q, disc(136), Some(Complex64::new(0.0, 3.0))).is_err());
    }

    // A point, an angle and a crossing sign fix an oriented geodesic, so two
    // crossings can share a position (reciprocal classes retrace their
    // geodesic, elliptic points carry several lifts) but not all three.
    #[test]
    fn locus_points_are_distinct_modulo_the_geodesic() {
        let q = f(1, 1, -1);
        for d in [221, 136, 1001] {
            let mut s: Vec<((BigInt, i8), f64)> = intersection_locus(&q, disc(d), None)
                .unwrap()
                .into_iter()
                .map(|s| ((s.record.bdelta, s.record.sign), s.arc_distance))
                .collect();
            s.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
            for w in s.windows(2) {
                assert!(w[0].0 != w[1].0 || w[1].1 - w[0].1 > 1e-9, "D={d}: {w:?}");
            }
        }
    }

    #[test]
    fn histograms() {
        let h = angle_histogram(&[PI / 2.0], 5).unwrap();
        assert_eq!(h.iter().map(|b| b.mass).collect::<Vec<_>>(), vec![0.0, 0.0, 1.0, 0.0, 0.0]);
        let h = angle_histogram(&[0.3, 2.0, 3.0], 1).unwrap();
        assert_eq!(h.len(), 1);
        assert!((h[0].density() - 1.0 / PI).abs() < 1e-15);
        assert!(angle_histogram(&[], 10).unwrap().is_empty());
        assert!(angle_histogram(&[1.0], 0).is_err());
        assert!(angle_histogram(&[4.0], 3).is_err());
        let angles: Vec<f64> = (0..1000).map(|i| (i as f64 * 0.618).rem_euclid(PI)).collect();
        let h = angle_histogram(&angles, 37).unwrap();
        assert!((h.iter().map(|b| b.mass).sum::<f64>() - 1.0).abs() < 1e-12);
        assert_eq!(h.last().unwrap().bin_hi, PI);
    }

    #[test]
    fn ks_against_exact_quantiles() {
        // the i/n quantiles of (1 - cos x)/2 have KS distance exactly 1/n
        let n = 400;
        let xs: Vec<f64> = (1..=n).map(|i| (1.0 - 2.0 * i as f64 / n as f64).acos()).collect();
        assert!((ks_half_sine(&xs) - 1.0 / n as f64).abs() < 1e-12);
        let uniform: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) * PI / n as f64).collect();
        assert!(ks_half_sine(&uniform) > 0.05);
    }

    #[test]
    fn cstat_example() {
        let c = c_statistic(disc(5), disc(136)).unwrap();
        assert_eq!((c.int_total, c.h1, c.h2), (48, 1, 4));
        assert!((c.r1 - ((3.0 + 5f64.sqrt()) / 2.0).ln()).abs() < 1e-12);
        let p = pell_minimal(&BigInt::from(136)).unwrap();
        let lit2 = (p.t.to_f64().unwrap() + p.u.to_f64().unwrap() * 136f64.sqrt()).ln();
        assert!((c.r2 - (lit2 - std::f64::consts::LN_2)).abs() < 1e-12);
        assert!((c.c - 48.0 / (4.0 * c.r1 * c.r2)).abs() < 1e-12);
        let literal = 48.0 / (4.0 * (3.0 + 5f64.sqrt()).ln() * lit2);
        assert!((c.c_literal() - literal).abs() < 1e-12);
        assert!(c.c > 0.0);
        // outside the formula's scope the class sum is used
        assert_eq!(c_statistic(disc(8), disc(12)).unwrap().int_total, total_intersection_classes(disc(8), disc(12)).unwrap());
    }

    #[test]
    fn log_unit_of_huge_units() {
        // D = 94 * 4 has a large fundamental unit; compare with direct f64
        for d in [376, 1000005, 999997] {
            if !Discriminant::is_valid(d) {
                continue;
            }
            let p = pell_minimal(&BigInt::from(d)).unwrap();
            let direct = if p.t.bits() < 1000 {
                ((p.t.to_f64().unwrap() + p.u.to_f64().unwrap() * (d as f64).sqrt()) / 2.0).ln()
            } else {
                ln_big(&p.t)
            };
            assert!((log_unit(disc(d)) - direct).abs() < 1e-9 * direct.max(1.0), "D={d}");
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let a = sample_form_pairs((1, 1000), (1, 1000), 20, 7).unwrap();
        assert_eq!(a, sample_form_pairs((1, 1000), (1, 1000), 20, 7).unwrap());
        assert_ne!(a, sample_form_pairs((1, 1000), (1, 1000), 20, 8).unwrap());
        let p = sample_coprime_fundamental_pairs((1, 100), (1, 1000), 50, 3).unwrap();
        assert!(p.iter().all(|(a, b)| a.is_fundamental() && b.is_fundamental() && a.get().gcd(&b.get()) == 1));
        assert!(discriminants_in(10, 3).is_err());
        assert!(discriminants_in(2, 3).is_err());
    }

    #[test]
    fn bench_counts_are_deterministic() {
        let a = bench_compare((1, 1000), (1, 1000), 10, 11).unwrap();
        let b = bench_compare((1, 1000), (1, 1000), 10, 11).unwrap();
        assert_eq!(a.pairs, b.pairs);
        assert_eq!((a.row.p1_avg, a.row.intrs_avg), (b.row.p1_avg, b.row.intrs_avg));
        let one = bench_compare((1, 1000), (1, 1000), 1, 11).unwrap();
        assert_eq!(one.pairs[0], a.pairs[0]);
        assert!(bench_compare((1, 1000), (1, 1000), 0, 11).is_err());
        assert!(bench_compare((5, 4), (1, 1000), 3, 11).is_err());
    }

    #[test]
    fn thread_setting_is_parsed() {
        // the variable is read on every call; an unset variable means automatic
        if std::env::var(THREADS_ENV).is_err() {
            assert_eq!(configured_threads().unwrap(), 0);
        }
        assert_eq!(with_pool(|| 1 + 1).unwrap(), 2);
    }
}

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::flow::{next_turn, step_run, Turn};
use super::{Pibqf, UniModularMatrix};
use crate::error::{Error, Result};

/// Reduce `q` to a reduced form `q'` with `A > 0`, returning `(q', m)` with
/// `act(m, q) = q'`.
///
/// Gauss-style steps bring the form to `AC < 0`; from there at most two river
/// runs reach a reduced form.
pub fn reduce(q: &Pibqf) -> (Pibqf, UniModularMatrix) {
    let mut m = UniModularMatrix::identity();
    let mut cur = q.clone();
    loop {
        if (&cur.a * &cur.c).is_negative() {
            break;
        }
        let two_a = BigInt::from(2) * cur.a.abs();
        let mut r = cur.b.mod_floor(&two_a);
        if r > cur.a.abs() {
            r -= &two_a;
        }
        let k = (&r - &cur.b) / (BigInt::from(2) * &cur.a);
        if !k.is_zero() {
            let t = UniModularMatrix::l_pow(&k);
            cur = cur.act(&t);
            m = &m * &t;
        }
        if (&cur.a * &cur.c).is_negative() {
            break;
        }
        // |B| <= |A| <= |C| with AC > 0 would make D negative.
        debug_assert!(cur.c.abs() < cur.a.abs());
        cur = cur.flip();
        m = &m * &UniModularMatrix::s();
    }
    if cur.a.is_negative() {
        cur = cur.flip();
        m = &m * &UniModularMatrix::s();
    }
    let sqrt_d = cur.discriminant().sqrt();
    while !cur.is_reduced() {
        let (_, _, next) = step_run(&cur, &mut m, &sqrt_d);
        cur = next;
    }
    (cur, m)
}

fn boundary_form(f: &Pibqf) -> Pibqf {
    match next_turn(f) {
        Turn::R => f.clone(),
        Turn::L => f.flip(),
    }
}

/// The reduced forms met riding the river in flow direction, starting at `q`.
///
/// Reduced forms with `A > 0` sit where an `L`-run meets an `R`-run; those with
/// `A < 0` are flips of the river forms where an `R`-run meets an `L`-run.
pub fn reduced_cycle(q: &Pibqf) -> Result<Vec<Pibqf>> {
    if !q.is_reduced() {
        return Err(Error::NotReduced(q.to_string()));
    }
    let start = if q.a.is_positive() { q.clone() } else { q.flip() };
    let sqrt_d = q.discriminant().sqrt();
    let mut m = UniModularMatrix::identity();
    let mut cur = start.clone();
    let mut out = Vec::new();
    loop {
        out.push(boundary_form(&cur));
        let (_, _, next) = step_run(&cur, &mut m, &sqrt_d);
        cur = next;
        if cur == start {
            return Ok(out);
        }
    }
}

/// Walk the reduced flow forms of `r`'s cycle (two runs per step), calling
/// `visit(form, w)` with `act(w, r) = form`; stops early when `visit` returns true.
pub(crate) fn walk_cycle<F>(r: &Pibqf, mut visit: F) -> bool
where
    F: FnMut(&Pibqf, &UniModularMatrix) -> bool,
{
    debug_assert!(r.is_reduced() && r.a.is_positive());
    let sqrt_d = r.discriminant().sqrt();
    let mut w = UniModularMatrix::identity();
    let mut cur = r.clone();
    loop {
        if visit(&cur, &w) {
            return true;
        }
        let (_, _, mid) = step_run(&cur, &mut w, &sqrt_d);
        let (_, _, next) = step_run(&mid, &mut w, &sqrt_d);
        cur = next;
        if &cur == r {
            return false;
        }
    }
}

/// A witness `m` with `act(m, q1) = q2`, if the forms are properly equivalent.
pub fn is_equivalent(q1: &Pibqf, q2: &Pibqf) -> Option<UniModularMatrix> {
    if q1.discriminant() != q2.discriminant() {
        return None;
    }
    let (r1, m1) = reduce(q1);
    let (r2, m2) = reduce(q2);
    let mut witness = None;
    walk_cycle(&r1, |f, w| {
        if f == &r2 {
            witness = Some(&(&m1 * w) * &m2.inverse());
            true
        } else {
            false
        }
    });
    witness
}

pub fn is_reciprocal_class(q: &Pibqf) -> bool {
    is_equivalent(q, &q.reciprocal()).is_some()
}

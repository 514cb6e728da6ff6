//! Root geodesics in the upper half plane.
//!
//! Predicates and signs are exact; floats only appear in emitted points,
//! angles and distances.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
pub use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{b_delta, Pibqf, UniModularMatrix};

/// The real number `(p + q sqrt(d)) / r` with `r > 0` and `gcd(p, q, r) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadraticNumber {
    p: BigInt,
    q: BigInt,
    r: BigInt,
    d: BigInt,
}

impl QuadraticNumber {
    pub fn new(p: BigInt, q: BigInt, r: BigInt, d: BigInt) -> Result<Self> {
        if r.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if !d.is_positive() {
            return Err(Error::InvalidArgument(format!("radicand {d} must be positive")));
        }
        let s = if r.is_negative() { -1 } else { 1 };
        let g = p.gcd(&q).gcd(&r);
        Ok(QuadraticNumber { p: s * &p / &g, q: s * &q / &g, r: s * &r / &g, d })
    }

    pub fn parts(&self) -> (&BigInt, &BigInt, &BigInt, &BigInt) {
        (&self.p, &self.q, &self.r, &self.d)
    }

    pub fn to_f64(&self) -> f64 {
        let d = self.d.to_f64().unwrap_or(f64::NAN);
        (self.p.to_f64().unwrap_or(f64::NAN) + self.q.to_f64().unwrap_or(f64::NAN) * d.sqrt())
            / self.r.to_f64().unwrap_or(f64::NAN)
    }

    /// Exact comparison; both numbers must share the radicand.
    pub fn cmp_exact(&self, other: &QuadraticNumber) -> Result<Ordering> {
        if self.d != other.d {
            return Err(Error::InvalidArgument(format!(
                "radicands {} and {} differ",
                self.d, other.d
            )));
        }
        let x = &self.p * &other.r - &other.p * &self.r;
        let y = &self.q * &other.r - &other.q * &self.r;
        Ok(sign_of_sum(&x, &y, &self.d))
    }

    pub fn cmp_rational(&self, v: &BigRational) -> Ordering {
        // (p + q sqrt d)/r - n/m, scaled by r m > 0
        let x = &self.p * v.denom() - v.numer() * &self.r;
        let y = &self.q * v.denom();
        sign_of_sum(&x, &y, &self.d)
    }
}

/// Sign of `x + y sqrt(d)` for `d > 0` nonsquare (or any `d` when `y = 0`).
fn sign_of_sum(x: &BigInt, y: &BigInt, d: &BigInt) -> Ordering {
    let zero = BigInt::zero();
    match (x.cmp(&zero), y.cmp(&zero)) {
        (Ordering::Equal, sy) => sy,
        (sx, Ordering::Equal) => sx,
        (sx, sy) if sx == sy => sx,
        (sx, _) => {
            // opposite signs: compare magnitudes
            let lhs = x * x;
            let rhs = y * y * d;
            match lhs.cmp(&rhs) {
                Ordering::Greater => sx,
                Ordering::Less => sx.reverse(),
                Ordering::Equal => Ordering::Equal,
            }
        }
    }
}

impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}*sqrt({}))/{}", self.p, self.q, self.d, self.r)
    }
}

/// `(q_f, q_s) = ((-B + sqrt D)/2A, (-B - sqrt D)/2A)`; the root geodesic runs
/// from `q_s` to `q_f`.
pub fn roots(q: &Pibqf) -> (QuadraticNumber, QuadraticNumber) {
    let d = q.discriminant();
    let two_a = BigInt::from(2) * q.a();
    let mk = |s: i32| {
        QuadraticNumber::new(-q.b(), BigInt::from(s), two_a.clone(), d.clone())
            .expect("A is nonzero for a PIBQF")
    };
    (mk(1), mk(-1))
}

/// Exact sign of `q(x, 1)` at a quadratic number `x`.
pub fn form_sign_at(q: &Pibqf, x: &QuadraticNumber) -> Ordering {
    // r^2 q(x,1) = A (p + s t)^2 + B r (p + s t) + C r^2 with t = sqrt d
    let (p, s, r, d) = x.parts();
    let (a, b, c) = (q.a(), q.b(), q.c());
    let rational = a * (p * p + s * s * d) + b * r * p + c * r * r;
    let irrational = a * BigInt::from(2) * p * s + b * r * s;
    sign_of_sum(&rational, &irrational, d)
}

pub fn geodesics_cross(q1: &Pibqf, q2: &Pibqf) -> bool {
    let x = b_delta(q1, q2);
    &x * &x < q1.discriminant() * q2.discriminant()
}

fn require_crossing(q1: &Pibqf, q2: &Pibqf) -> Result<()> {
    if geodesics_cross(q1, q2) {
        Ok(())
    } else {
        Err(Error::NotCrossing(q1.to_string(), q2.to_string()))
    }
}

/// `sign(B1 A2 - B2 A1)`: `+1` when the geodesic of `q2` crosses that of `q1`
/// from its right-hand side.
pub fn crossing_sign(q1: &Pibqf, q2: &Pibqf) -> Result<i8> {
    require_crossing(q1, q2)?;
    let v = q1.b() * q2.a() - q2.b() * q1.a();
    Ok(if v.is_positive() { 1 } else { -1 })
}

/// The definite form `[-A1 B2 + A2 B1, -2 A1 C2 + 2 A2 C1, -B1 C2 + B2 C1]`
/// whose upper-half-plane root is the crossing point.
pub fn point_form(q1: &Pibqf, q2: &Pibqf) -> [BigInt; 3] {
    let (a1, b1, c1) = (q1.a(), q1.b(), q1.c());
    let (a2, b2, c2) = (q2.a(), q2.b(), q2.c());
    let two = BigInt::from(2);
    [
        a2 * b1 - a1 * b2,
        &two * a2 * c1 - &two * a1 * c2,
        b2 * c1 - b1 * c2,
    ]
}

/// Upper-half-plane root of a definite form `[a, b, c]`.
pub fn upper_root(f: &[BigInt; 3]) -> Result<Complex64> {
    let disc = &f[1] * &f[1] - BigInt::from(4) * &f[0] * &f[2];
    if !disc.is_negative() || f[0].is_zero() {
        return Err(Error::NotInUpperHalfPlane(format!("[{},{},{}]", f[0], f[1], f[2])));
    }
    let a = f[0].to_f64().unwrap_or(f64::NAN);
    let b = f[1].to_f64().unwrap_or(f64::NAN);
    let root = (-disc).to_f64().unwrap_or(f64::NAN).sqrt();
    Ok(Complex64::new(-b / (2.0 * a), root / (2.0 * a.abs())))
}

/// Angle from the tangent of the first geodesic to that of the second,
/// `atan2(sqrt(D1 D2 - x^2), x)` with `x = B_Delta`.
pub fn crossing_angle(q1: &Pibqf, q2: &Pibqf) -> Result<f64> {
    require_crossing(q1, q2)?;
    let x = b_delta(q1, q2);
    let gap = q1.discriminant() * q2.discriminant() - &x * &x;
    Ok(angle_from(&x, &gap))
}

fn angle_from(x: &BigInt, gap: &BigInt) -> f64 {
    if x.is_zero() {
        return std::f64::consts::FRAC_PI_2;
    }
    let g = gap.to_f64().unwrap_or(f64::NAN).sqrt();
    g.atan2(x.to_f64().unwrap_or(f64::NAN))
}

/// One transverse crossing of two root geodesics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntersectionRecord {
    #[serde(serialize_with = "ser_bigint")]
    pub bdelta: BigInt,
    pub sign: i8,
    #[serde(serialize_with = "ser_triple")]
    pub point_form: [BigInt; 3],
    #[serde(serialize_with = "ser_complex")]
    pub point: Complex64,
    pub angle: f64,
    /// Hyperbolic distance along the geodesic of `q1`; measured from its apex
    /// unless a caller reassigns it.
    pub arc_distance: f64,
}

pub(crate) fn ser_bigint<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v.to_i64() {
        Some(x) => s.serialize_i64(x),
        None => s.serialize_str(&v.to_string()),
    }
}

fn ser_triple<S: serde::Serializer>(v: &[BigInt; 3], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(3))?;
    for x in v {
        match x.to_i64() {
            Some(n) => seq.serialize_element(&n)?,
            None => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

fn ser_complex<S: serde::Serializer>(v: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("point", 2)?;
    st.serialize_field("re", &v.re)?;
    st.serialize_field("im", &v.im)?;
    st.end()
}

/// Centre and radius of the root geodesic of `q` (always a semicircle).
pub fn semicircle(q: &Pibqf) -> (f64, f64) {
    let a = q.a().to_f64().unwrap_or(f64::NAN);
    let b = q.b().to_f64().unwrap_or(f64::NAN);
    let d = q.discriminant().to_f64().unwrap_or(f64::NAN);
    (-b / (2.0 * a), d.sqrt() / (2.0 * a.abs()))
}

/// Signed arc coordinate of a point on the root geodesic of `q`, increasing
/// in the direction of travel (towards `q_f`) and zero at the apex.
pub fn arc_coordinate(q: &Pibqf, z: Complex64) -> f64 {
    let (c, r) = semicircle(q);
    let phi = ((z.re - c) / r).clamp(-1.0, 1.0).acos();
    let s = -(phi / 2.0).tan().ln();
    if q.a().is_negative() {
        -s
    } else {
        s
    }
}

pub fn apex(q: &Pibqf) -> Complex64 {
    let (c, r) = semicircle(q);
    Complex64::new(c, r)
}

pub fn crossing_point(q1: &Pibqf, q2: &Pibqf) -> Result<IntersectionRecord> {
    require_crossing(q1, q2)?;
    let x = b_delta(q1, q2);
    let gap = q1.discriminant() * q2.discriminant() - &x * &x;
    let form = point_form(q1, q2);
    let point = upper_root(&form)?;
    Ok(IntersectionRecord {
        sign: crossing_sign(q1, q2)?,
        angle: angle_from(&x, &gap),
        arc_distance: arc_coordinate(q1, point).abs(),
        bdelta: x,
        point_form: form,
        point,
    })
}

pub type RationalMatrix = [[BigRational; 2]; 2];

/// `Z_M = M - (tr M / 2) Id` for the positive-trace lift of `m`.
pub fn trace_zero(m: &UniModularMatrix) -> RationalMatrix {
    let [a, b, c, d] = m.positive_trace_lift();
    let half_tr = BigRational::new(&a + &d, BigInt::from(2));
    let r = |x: &BigInt| BigRational::from_integer(x.clone());
    [
        [r(&a) - &half_tr, r(&b)],
        [r(&c), r(&d) - &half_tr],
    ]
}

/// `det(M1 M2 - M2 M1) > 0`, which holds exactly when the axes of the two
/// hyperbolic elements cross.
pub fn commutator_det_positive(m1: &UniModularMatrix, m2: &UniModularMatrix) -> Result<bool> {
    for m in [m1, m2] {
        if !m.is_hyperbolic() {
            return Err(Error::NotHyperbolic(m.to_string()));
        }
    }
    let x = m1.positive_trace_lift();
    let y = m2.positive_trace_lift();
    let mul = |p: &[BigInt; 4], q: &[BigInt; 4]| {
        [
            &p[0] * &q[0] + &p[1] * &q[2],
            &p[0] * &q[1] + &p[1] * &q[3],
            &p[2] * &q[0] + &p[3] * &q[2],
            &p[2] * &q[1] + &p[3] * &q[3],
        ]
    };
    let xy = mul(&x, &y);
    let yx = mul(&y, &x);
    let k: Vec<BigInt> = (0..4).map(|i| &xy[i] - &yx[i]).collect();
    Ok((&k[0] * &k[3] - &k[1] * &k[2]).is_positive())
}

/// Möbius action `z -> (az + b)/(cz + d)`.
pub fn mobius(m: &UniModularMatrix, z: Complex64) -> Complex64 {
    let e = |x: &BigInt| Complex64::new(x.to_f64().unwrap_or(f64::NAN), 0.0);
    (e(m.a()) * z + e(m.b())) / (e(m.c()) * z + e(m.d()))
}

pub fn hyperbolic_distance(z1: Complex64, z2: Complex64) -> Result<f64> {
    for z in [z1, z2] {
        if z.im.is_nan() || z.im <= 0.0 {
            return Err(Error::NotInUpperHalfPlane(z.to_string()));
        }
    }
    let arg = 1.0 + (z1 - z2).norm_sqr() / (2.0 * z1.im * z2.im);
    Ok(arg.max(1.0).acosh())
}

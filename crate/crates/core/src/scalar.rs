//! Exact scalars: rationals and elements of a real quadratic field.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

/// Parses `"p/q"`, `"p"` or a terminating decimal such as `"-0.25"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = ip.starts_with('-');
        let ip_abs = ip.trim_start_matches(['-', '+']);
        let whole: BigInt = if ip_abs.is_empty() {
            BigInt::zero()
        } else {
            ip_abs.parse().map_err(|_| bad())?
        };
        let frac: BigInt = fp.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), fp.len());
        let mag = Rational::new(whole * &scale + frac, scale);
        return Ok(if neg { -mag } else { mag });
    }
    let p: BigInt = t.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(p))
}

pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Best rational approximation of `x` with denominator at most `max_den`
/// (continued-fraction convergents).
pub fn rationalize(x: f64, max_den: u64) -> Rational {
    if !x.is_finite() {
        return <Rational as Zero>::zero();
    }
    let neg = x < 0.0;
    let mut v = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let max_den = BigInt::from(max_den);
    for _ in 0..64 {
        let a = v.floor();
        let ai = BigInt::from(a as u64);
        let p2 = &ai * &p1 + &p0;
        let q2 = &ai * &q1 + &q0;
        if q2 > max_den {
            break;
        }
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let frac = v - a;
        if frac < 1e-15 {
            break;
        }
        v = 1.0 / frac;
        if v > 1e18 {
            break;
        }
    }
    if q1.is_zero() {
        return <Rational as Zero>::zero();
    }
    let r = Rational::new(p1, q1);
    if neg {
        -r
    } else {
        r
    }
}

/// Scales a rational vector to the primitive integer vector on the same ray.
/// Returns `None` for the zero vector.
pub fn primitive_integer(v: &[Rational]) -> Option<Vec<BigInt>> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let g = scaled.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return None;
    }
    Some(scaled.into_iter().map(|x| x / &g).collect())
}

pub fn to_rationals(v: &[BigInt]) -> Vec<Rational> {
    v.iter().map(|x| Rational::from_integer(x.clone())).collect()
}

/// Ordered field operations needed by the linear-algebra and cone code.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    /// Exact sign, as an ordering against zero.
    fn sign(&self) -> Ordering;
    fn from_rational(q: Rational) -> Self;
    fn approx(&self) -> f64;
    /// Rational and irrational parts `(a, b)` of `a + b√d`.
    fn parts(&self) -> (Rational, Rational);
    /// Galois conjugate `a - b√d`; the identity on rationals.
    fn conjugate(&self) -> Self;
    fn to_json(&self) -> serde_json::Value;

    /// Canonical positive representative of the ray through `v`.
    fn normalize_ray(v: &[Self]) -> Vec<Self> {
        match v.iter().find(|x| !x.is_zero()) {
            Some(p) => {
                let s = p.abs();
                v.iter().map(|x| x.clone() / s.clone()).collect()
            }
            None => v.to_vec(),
        }
    }

    fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }
    fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }
    fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn sign(&self) -> Ordering {
        if Signed::is_positive(self) {
            Ordering::Greater
        } else if Signed::is_negative(self) {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
    fn from_rational(q: Rational) -> Self {
        q
    }
    fn approx(&self) -> f64 {
        to_f64(self)
    }
    fn parts(&self) -> (Rational, Rational) {
        (self.clone(), Zero::zero())
    }
    fn conjugate(&self) -> Self {
        self.clone()
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_string())
    }
    fn normalize_ray(v: &[Self]) -> Vec<Self> {
        match primitive_integer(v) {
            Some(p) => to_rationals(&p),
            None => v.to_vec(),
        }
    }
}

/// An element `a + b√d` of the real quadratic field `Q(√d)`, `d` square-free.
///
/// Rational elements (`b = 0`) mix freely with any field; mixing two
/// irrational elements of different fields panics.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuadElem {
    #[serde(with = "rational_str")]
    pub a: Rational,
    #[serde(with = "rational_str")]
    pub b: Rational,
    #[serde(skip, default)]
    pub d: u64,
}

impl QuadElem {
    pub fn new(a: Rational, b: Rational, d: u64) -> Self {
        let d = if Zero::is_zero(&b) { 0 } else { d };
        QuadElem { a, b, d }
    }

    pub fn rational(a: Rational) -> Self {
        QuadElem::new(a, Zero::zero(), 0)
    }

    pub fn sqrt_of(d: u64) -> Self {
        QuadElem::new(Zero::zero(), One::one(), d)
    }

    pub fn is_rational(&self) -> bool {
        Zero::is_zero(&self.b)
    }

    pub fn conjugate(&self) -> Self {
        QuadElem::new(self.a.clone(), -self.b.clone(), self.d)
    }

    fn field(&self, other: &Self) -> u64 {
        match (self.is_rational(), other.is_rational()) {
            (true, _) => other.d,
            (_, true) => self.d,
            _ => {
                assert_eq!(self.d, other.d, "mixing elements of different quadratic fields");
                self.d
            }
        }
    }

    fn d_rational(&self) -> Rational {
        Rational::from_integer(BigInt::from(self.d))
    }
}

impl PartialEq for QuadElem {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && (self.is_rational() || self.d == other.d)
    }
}

impl Eq for QuadElem {}

impl PartialOrd for QuadElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadElem {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).sign()
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
        }
    }
}

impl Add for QuadElem {
    type Output = QuadElem;
    fn add(self, o: QuadElem) -> QuadElem {
        let d = self.field(&o);
        QuadElem::new(self.a + o.a, self.b + o.b, d)
    }
}

impl Sub for QuadElem {
    type Output = QuadElem;
    fn sub(self, o: QuadElem) -> QuadElem {
        let d = self.field(&o);
        QuadElem::new(self.a - o.a, self.b - o.b, d)
    }
}

impl Neg for QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem::new(-self.a, -self.b, self.d)
    }
}

impl Mul for QuadElem {
    type Output = QuadElem;
    fn mul(self, o: QuadElem) -> QuadElem {
        let d = self.field(&o);
        let dr = Rational::from_integer(BigInt::from(d));
        let a = &self.a * &o.a + &self.b * &o.b * dr;
        let b = &self.a * &o.b + &self.b * &o.a;
        QuadElem::new(a, b, d)
    }
}

impl Div for QuadElem {
    type Output = QuadElem;
    fn div(self, o: QuadElem) -> QuadElem {
        let norm = &o.a * &o.a - &o.b * &o.b * o.d_rational();
        assert!(!Zero::is_zero(&norm), "division by zero in quadratic field");
        let num = self * o.conjugate();
        QuadElem::new(num.a / &norm, num.b / &norm, num.d)
    }
}

impl Field for QuadElem {
    fn zero() -> Self {
        QuadElem::rational(Zero::zero())
    }
    fn one() -> Self {
        QuadElem::rational(One::one())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.a) && Zero::is_zero(&self.b)
    }
    fn sign(&self) -> Ordering {
        let sa = Field::sign(&self.a);
        let sb = Field::sign(&self.b);
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        // a and b√d have opposite signs: the larger magnitude wins.
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * self.d_rational();
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }
    fn from_rational(q: Rational) -> Self {
        QuadElem::rational(q)
    }
    fn approx(&self) -> f64 {
        to_f64(&self.a) + to_f64(&self.b) * (self.d as f64).sqrt()
    }
    fn parts(&self) -> (Rational, Rational) {
        (self.a.clone(), self.b.clone())
    }
    fn conjugate(&self) -> Self {
        QuadElem::conjugate(self)
    }
    fn to_json(&self) -> serde_json::Value {
        if self.is_rational() {
            serde_json::Value::String(self.a.to_string())
        } else {
            serde_json::json!({"a": self.a.to_string(), "b": self.b.to_string()})
        }
    }
}

/// Splits `n = s² · d` with `d` square-free; returns `(s, d)`.
pub fn square_free_part(n: &BigInt) -> (BigInt, BigInt) {
    assert!(!n.is_negative(), "square_free_part of a negative number");
    if n.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    let mut rest = n.clone();
    let mut s = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        let pp = &p * &p;
        while (&rest % &pp).is_zero() {
            rest /= &pp;
            s *= &p;
        }
        p += 1;
    }
    (s, rest)
}

/// Writes `√q` for a non-negative rational `q` as `s·√d` with `s` rational
/// and `d` a square-free integer.
pub fn sqrt_rational(q: &Rational) -> (Rational, u64) {
    // √(p/r) = √(p·r)/r
    let pr = q.numer() * q.denom();
    let (s, d) = square_free_part(&pr);
    let d = d.to_u64().expect("square-free part too large");
    (Rational::new(s, q.denom().clone()), d)
}

/// Serde helpers for rationals as `"p/q"` strings.
pub mod rational_str {
    use super::Rational;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        super::rational_from_json(&v).map_err(D::Error::custom)
    }
}

/// Accepts a JSON string `"p/q"` or an integer literal.
pub fn rational_from_json(v: &serde_json::Value) -> std::result::Result<Rational, String> {
    match v {
        serde_json::Value::String(s) => parse_rational(s).map_err(|e| e.to_string()),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(int(i))
            } else {
                Err(format!("non-integer JSON number {n}; write rationals as strings"))
            }
        }
        other => Err(format!("expected a rational, found {other}")),
    }
}

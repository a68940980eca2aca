use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::render;
use super::sqrtsum::{squarefree_split_big, SqrtSum};
use super::Rational;
use crate::Error;

/// Element of the real field generated by square roots of integers.
///
/// Values are stored fully rationalized as a canonical [`SqrtSum`], so
/// structural equality coincides with numerical equality and division
/// never leaves a radical in a denominator.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FieldElem(SqrtSum);

impl FieldElem {
    pub fn zero() -> Self {
        FieldElem(SqrtSum::zero())
    }

    pub fn one() -> Self {
        FieldElem(SqrtSum::one())
    }

    pub fn from_int(n: i64) -> Self {
        FieldElem(SqrtSum::rational(Rational::from_int(n)))
    }

    pub fn from_rational(q: Rational) -> Self {
        FieldElem(SqrtSum::rational(q))
    }

    pub fn from_sqrtsum(s: SqrtSum) -> Self {
        FieldElem(s)
    }

    /// `a + b·√n`.
    pub fn number(a: Rational, b: Rational, n: u64) -> Self {
        FieldElem(SqrtSum::rational(a).add(&SqrtSum::term(b, n)))
    }

    /// `√n` for a non-negative integer.
    pub fn sqrt_int(n: u64) -> Self {
        FieldElem(SqrtSum::term(Rational::one(), n))
    }

    /// Builds `num / den`, rationalizing the denominator.
    pub fn from_fraction(num: SqrtSum, den: SqrtSum) -> Result<Self, Error> {
        let inv = FieldElem(den).inv()?;
        Ok(FieldElem(num.mul(&inv.0)))
    }

    pub fn as_sqrtsum(&self) -> &SqrtSum {
        &self.0
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.0.as_rational()
    }

    /// Canonical form. Values are always kept canonical, so this is the
    /// identity and exists for callers that build elements term by term.
    pub fn simplify(&self) -> Self {
        self.clone()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.0.is_rational()
    }

    pub fn signum(&self) -> i32 {
        self.0.signum()
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    pub fn scale(&self, q: &Rational) -> Self {
        FieldElem(self.0.scale(q))
    }

    pub fn inv(&self) -> Result<Self, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // Multiplying by the conjugate in √p removes p from every radicand;
        // repeating over the remaining primes reaches a rational norm.
        let mut cur = self.0.clone();
        let mut acc = SqrtSum::one();
        while !cur.is_rational() {
            let p = cur.primes()[0];
            let c = cur.conjugate(p);
            acc = acc.mul(&c);
            cur = cur.mul(&c);
        }
        let norm = cur.as_rational().expect("rational after conjugation");
        Ok(FieldElem(acc.scale(&norm.recip()?)))
    }

    pub fn div(&self, other: &Self) -> Result<Self, Error> {
        if let Some(q) = other.as_rational() {
            return Ok(self.scale(&q.recip()?));
        }
        Ok(self * &other.inv()?)
    }

    /// Square root inside the field, when one exists and can be found.
    ///
    /// Handles rationals and two-term values `a + b√n` that are perfect
    /// squares of the form `(√u ± √v)²`. Returns `None` for negative input
    /// and when no root is found.
    pub fn sqrt(&self) -> Option<Self> {
        match self.signum() {
            0 => return Some(Self::zero()),
            -1 => return None,
            _ => {}
        }
        if let Some(q) = self.as_rational() {
            return sqrt_rational(&q).map(FieldElem);
        }
        let terms = self.0.terms();
        if terms.len() == 2 && terms[0].0 == 1 {
            let a = &terms[0].1;
            let (n, b) = (terms[1].0, &terms[1].1);
            let disc = &(a * a) - &(b * b).mul_u64(n);
            let root = sqrt_rational(&disc)?.as_rational()?;
            let half = Rational::new(1, 2).ok()?;
            let u = &(a + &root) * &half;
            let v = &(a - &root) * &half;
            if u.signum() < 0 || v.signum() < 0 {
                return None;
            }
            let su = sqrt_rational(&u)?;
            let sv = sqrt_rational(&v)?;
            let out = if b.signum() > 0 { su.add(&sv) } else { su.sub(&sv) };
            let out = FieldElem(out);
            debug_assert_eq!(&(&out * &out), self);
            return Some(out);
        }
        None
    }

    pub fn to_plain(&self) -> String {
        render::plain(&self.0)
    }

    pub fn to_tex(&self) -> String {
        render::tex(&self.0)
    }

    pub fn to_mathematica(&self) -> String {
        render::mathematica(&self.0)
    }
}

/// `√q` for a non-negative rational: `√(p/q) = √(pq)/q`.
fn sqrt_rational(q: &Rational) -> Option<SqrtSum> {
    match q.signum() {
        -1 => return None,
        0 => return Some(SqrtSum::zero()),
        _ => {}
    }
    let den = q.denom();
    let (s, r) = squarefree_split_big(&(q.numer() * &den))?;
    let coeff = Rational::from_bigints(s, den).ok()?;
    let mut out = SqrtSum::zero();
    if r >= 1 {
        out = SqrtSum::term(coeff, r);
    }
    Some(out)
}

/// Largest common factor of a list of field elements, used to pull a common
/// scale out of a coefficient vector.
///
/// If every nonzero entry is a rational multiple of the same `√n`, the result
/// is the rational gcd of those multiples times `√n`. A single nonzero entry
/// yields its absolute value. Otherwise the result is 1; all zeros give 0.
pub fn gcd_of_fields(xs: &[FieldElem]) -> FieldElem {
    let nonzero: Vec<&FieldElem> = xs.iter().filter(|x| !x.is_zero()).collect();
    match nonzero.as_slice() {
        [] => return FieldElem::zero(),
        [x] => return x.abs(),
        _ => {}
    }
    let mut radicand = None;
    let mut g: Option<Rational> = None;
    for x in &nonzero {
        let terms = x.0.terms();
        if terms.len() != 1 {
            return FieldElem::one();
        }
        let (r, q) = &terms[0];
        match radicand {
            None => radicand = Some(*r),
            Some(r0) if r0 != *r => return FieldElem::one(),
            _ => {}
        }
        g = Some(match g {
            None => q.abs(),
            Some(g) => g.gcd(q),
        });
    }
    FieldElem(SqrtSum::term(g.unwrap(), radicand.unwrap()))
}

impl PartialOrd for FieldElem {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElem {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        if self == other {
            return std::cmp::Ordering::Equal;
        }
        (self - other).signum().cmp(&0)
    }
}

impl<'a> Add<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: &FieldElem) -> FieldElem {
        FieldElem(self.0.add(&rhs.0))
    }
}

impl<'a> Sub<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: &FieldElem) -> FieldElem {
        FieldElem(self.0.sub(&rhs.0))
    }
}

impl<'a> Mul<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: &FieldElem) -> FieldElem {
        FieldElem(self.0.mul(&rhs.0))
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem(self.0.neg())
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

impl Add for FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: FieldElem) -> FieldElem {
        &self + &rhs
    }
}

impl Sub for FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: FieldElem) -> FieldElem {
        &self - &rhs
    }
}

impl Mul for FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: FieldElem) -> FieldElem {
        &self * &rhs
    }
}

impl Zero for FieldElem {
    fn zero() -> Self {
        FieldElem::zero()
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for FieldElem {
    fn one() -> Self {
        FieldElem::one()
    }
}

impl From<i64> for FieldElem {
    fn from(n: i64) -> Self {
        FieldElem::from_int(n)
    }
}

impl From<Rational> for FieldElem {
    fn from(q: Rational) -> Self {
        FieldElem::from_rational(q)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_plain())
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_plain())
    }
}

impl FromStr for FieldElem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        render::parse(s).map(FieldElem)
    }
}

impl Serialize for FieldElem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_plain())
    }
}

impl<'de> Deserialize<'de> for FieldElem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

//! Rational linear combinations of square roots, `Σ qₙ √n`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::Rational;

pub(crate) type Terms = SmallVec<[(u64, Rational); 2]>;

/// Splits `n = s² · r` with `r` square-free. Returns `(s, r)`.
///
/// Trial division runs up to `2^21`; a cofactor below `2^63` left after that
/// has at most two prime factors, so it is either a perfect square or
/// square-free.
pub fn squarefree_split(mut n: u64) -> (u64, u64) {
    if n < 4 {
        return (1, n);
    }
    let mut square = 1u64;
    let mut free = 1u64;
    let mut p = 2u64;
    while p <= TRIAL_LIMIT && p.saturating_mul(p) <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        for _ in 0..e / 2 {
            square *= p;
        }
        if e % 2 == 1 {
            free *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let root = n.isqrt();
    if n > 1 && root * root == n {
        (square * root, free)
    } else {
        (square, free * n)
    }
}

const TRIAL_LIMIT: u64 = 1 << 21;

/// [`squarefree_split`] for big integers whose square-free part fits in a
/// `u64`. Returns `None` otherwise.
pub fn squarefree_split_big(n: &BigInt) -> Option<(BigInt, u64)> {
    use num_traits::ToPrimitive;
    if let Some(small) = n.to_u64() {
        let (s, r) = squarefree_split(small);
        return Some((BigInt::from(s), r));
    }
    let mut n = n.clone();
    let mut square = BigInt::one();
    let mut free = 1u64;
    let mut p = 2u32;
    while p < 1000 {
        let bp = BigInt::from(p);
        let mut e = 0;
        while (&n % &bp).is_zero() {
            n /= &bp;
            e += 1;
        }
        for _ in 0..e / 2 {
            square *= p;
        }
        if e % 2 == 1 {
            free *= p as u64;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if let Some(small) = n.to_u64() {
        let (s, r) = squarefree_split(small);
        return Some((square * s, free.checked_mul(r)?));
    }
    let root = n.sqrt();
    if &root * &root == n {
        Some((square * root, free))
    } else {
        None
    }
}

/// Prime divisors of a square-free radicand.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Canonical element of the ring `ℚ[√2, √3, √5, ...]`.
///
/// Terms are sorted by radicand, every radicand is square-free, radicand 1
/// carries the rational part and no coefficient is zero. Two values are equal
/// iff their term lists are identical.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SqrtSum {
    terms: Terms,
}

impl SqrtSum {
    pub fn zero() -> Self {
        SqrtSum { terms: Terms::new() }
    }

    pub fn one() -> Self {
        Self::rational(Rational::one())
    }

    pub fn rational(q: Rational) -> Self {
        let mut terms = Terms::new();
        if !q.is_zero() {
            terms.push((1, q));
        }
        SqrtSum { terms }
    }

    /// `q · √n` in canonical form.
    pub fn term(q: Rational, n: u64) -> Self {
        if q.is_zero() || n == 0 {
            return Self::zero();
        }
        let (s, r) = squarefree_split(n);
        let mut terms = Terms::new();
        terms.push((r, q.mul_u64(s)));
        SqrtSum { terms }
    }

    /// Canonicalizes an arbitrary list of `(coefficient, radicand)` pairs.
    pub fn from_terms<I: IntoIterator<Item = (Rational, u64)>>(items: I) -> Self {
        let raw: Vec<(u64, Rational)> = items
            .into_iter()
            .filter(|(q, n)| !q.is_zero() && *n != 0)
            .map(|(q, n)| {
                let (s, r) = squarefree_split(n);
                (r, q.mul_u64(s))
            })
            .collect();
        Self::from_reduced(raw)
    }

    /// Sorts and merges terms whose radicands are already square-free.
    pub(crate) fn from_reduced(mut raw: Vec<(u64, Rational)>) -> Self {
        raw.sort_by_key(|t| t.0);
        let mut terms = Terms::with_capacity(raw.len());
        for (r, q) in raw {
            match terms.last_mut() {
                Some((lr, lq)) if *lr == r => *lq = &*lq + &q,
                _ => terms.push((r, q)),
            }
        }
        terms.retain(|(_, q)| !q.is_zero());
        SqrtSum { terms }
    }

    /// `(radicand, coefficient)` pairs in canonical order.
    pub fn terms(&self) -> &[(u64, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0 == 1)
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(1, q)] => Some(q.clone()),
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self.terms.as_slice(), [(1, q)] if q.is_one())
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (a, b) = (&self.terms, &other.terms);
        let mut terms = Terms::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    terms.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    terms.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let q = &a[i].1 + &b[j].1;
                    if !q.is_zero() {
                        terms.push((a[i].0, q));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        terms.extend(a[i..].iter().cloned());
        terms.extend(b[j..].iter().cloned());
        SqrtSum { terms }
    }

    pub fn neg(&self) -> Self {
        SqrtSum {
            terms: self.terms.iter().map(|(r, q)| (*r, -q)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        SqrtSum {
            terms: self.terms.iter().map(|(r, c)| (*r, c * q)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if let [(1, q)] = other.terms.as_slice() {
            return self.scale(q);
        }
        if let [(1, q)] = self.terms.as_slice() {
            return other.scale(q);
        }
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (r1, q1) in &self.terms {
            for (r2, q2) in &other.terms {
                // √r1·√r2 = g·√((r1/g)(r2/g)), and the product of coprime
                // square-free numbers is square-free.
                let g = gcd_u64(*r1, *r2);
                let rad = (r1 / g)
                    .checked_mul(r2 / g)
                    .expect("radicand overflow in square-root product");
                raw.push((rad, (q1 * q2).mul_u64(g)));
            }
        }
        Self::from_reduced(raw)
    }

    /// Distinct primes dividing some radicand.
    pub(crate) fn primes(&self) -> Vec<u64> {
        let mut ps: Vec<u64> = self
            .terms
            .iter()
            .flat_map(|(r, _)| prime_factors(*r))
            .collect();
        ps.sort_unstable();
        ps.dedup();
        ps
    }

    /// Image under the field automorphism `√p ↦ -√p`.
    pub(crate) fn conjugate(&self, p: u64) -> Self {
        SqrtSum {
            terms: self
                .terms
                .iter()
                .map(|(r, q)| if r % p == 0 { (*r, -q) } else { (*r, q.clone()) })
                .collect(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(r, q)| q.to_f64() * (*r as f64).sqrt())
            .sum()
    }

    /// Exact sign: -1, 0 or +1.
    pub fn signum(&self) -> i32 {
        if self.terms.is_empty() {
            return 0;
        }
        let first = self.terms[0].1.signum();
        if self.terms.iter().all(|(_, q)| q.signum() == first) {
            return first;
        }
        // Nonzero is established, so refining dyadic enclosures of every √n
        // eventually yields an interval that excludes zero.
        let mut bits = 32u32;
        loop {
            let (lo, hi) = self.enclosure(bits);
            if lo.is_positive() {
                return 1;
            }
            if hi.is_negative() {
                return -1;
            }
            bits *= 2;
        }
    }

    /// Interval `[lo, hi]` containing the value, using √n enclosures of
    /// width `2^-bits`.
    fn enclosure(&self, bits: u32) -> (BigRational, BigRational) {
        let scale = BigInt::one() << bits;
        let mut lo = BigRational::zero();
        let mut hi = BigRational::zero();
        for (r, q) in &self.terms {
            let qb = BigRational::new(q.numer(), q.denom());
            let (rl, rh) = if *r == 1 {
                (BigRational::one(), BigRational::one())
            } else {
                let scaled = BigInt::from(*r) * (&scale * &scale);
                let root = scaled.sqrt();
                let exact = &root * &root == scaled;
                let l = BigRational::new(root.clone(), scale.clone());
                let h = if exact {
                    l.clone()
                } else {
                    BigRational::new(root + 1, scale.clone())
                };
                (l, h)
            };
            if qb.is_positive() {
                lo += &qb * &rl;
                hi += &qb * &rh;
            } else {
                lo += &qb * &rh;
                hi += &qb * &rl;
            }
        }
        (lo, hi)
    }
}

impl std::fmt::Debug for SqrtSum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", super::render::plain(self))
    }
}

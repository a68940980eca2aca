//! Text forms of [`SqrtSum`] values: plain, TeX and Mathematica, plus a
//! parser for the plain form.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use super::sqrtsum::SqrtSum;
use super::Rational;
use crate::Error;

/// Plain form, e.g. `-1`, `1/2*sqrt(2)`, `1+sqrt(3)`.
pub fn plain(x: &SqrtSum) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (r, q)) in x.terms().iter().enumerate() {
        let neg = q.signum() < 0;
        let a = q.abs();
        if neg {
            out.push('-');
        } else if i > 0 {
            out.push('+');
        }
        if *r == 1 {
            out.push_str(&a.to_string());
        } else if a.is_one() {
            out.push_str(&format!("sqrt({r})"));
        } else {
            out.push_str(&format!("{a}*sqrt({r})"));
        }
    }
    out
}

pub fn tex(x: &SqrtSum) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (r, q)) in x.terms().iter().enumerate() {
        let neg = q.signum() < 0;
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let a = q.abs();
        let coeff = if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("\\frac{{{}}}{{{}}}", a.numer(), a.denom())
        };
        if *r == 1 {
            out.push_str(&coeff);
        } else {
            if !a.is_one() {
                out.push_str(&coeff);
            }
            out.push_str(&format!("\\sqrt{{{r}}}"));
        }
    }
    out
}

pub fn mathematica(x: &SqrtSum) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (r, q)) in x.terms().iter().enumerate() {
        let neg = q.signum() < 0;
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let a = q.abs();
        let num = a.numer();
        let den = a.denom();
        let mut term = if *r == 1 {
            num.to_string()
        } else if num.is_one() {
            format!("Sqrt[{r}]")
        } else {
            format!("{num}*Sqrt[{r}]")
        };
        if !den.is_one() {
            term.push_str(&format!("/{den}"));
        }
        out.push_str(&term);
    }
    out
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        self.skip_ws();
        if self.s[self.pos..].starts_with(w.as_bytes()) {
            self.pos += w.len();
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.s[start..self.pos]).ok()?.parse().ok()
    }
}

/// Parses the plain form. Accepts sums of terms `[c][*]sqrt(n)[/d]` and
/// rationals `p/q`, with `Sqrt[n]` and `√n` as alternative spellings.
pub fn parse(text: &str) -> Result<SqrtSum, Error> {
    let bad = |why: &str| Error::Parse(format!("invalid number `{text}`: {why}"));
    let mut c = Cursor {
        s: text.as_bytes(),
        pos: 0,
    };
    let mut acc = SqrtSum::zero();
    let mut first = true;
    loop {
        let mut sign = 1i64;
        match c.peek() {
            None if first => return Err(bad("empty")),
            None => break,
            Some(b'+') => {
                c.pos += 1;
            }
            Some(b'-') => {
                c.pos += 1;
                sign = -1;
            }
            Some(_) if !first => return Err(bad("expected + or -")),
            _ => {}
        }
        first = false;
        let mut coeff = Rational::from_int(sign);
        let mut radicand: Option<Rational> = None;
        if let Some(n) = c.integer() {
            coeff = &coeff * &Rational::from_bigints(n, BigInt::one())?;
            if c.eat(b'/') {
                let d = c.integer().ok_or_else(|| bad("missing denominator"))?;
                coeff = &coeff * &Rational::from_bigints(BigInt::one(), d)?;
            }
            c.eat(b'*');
        }
        if let Some(rad) = parse_sqrt(&mut c).map_err(bad)? {
            radicand = Some(rad);
            if c.eat(b'/') {
                let d = c.integer().ok_or_else(|| bad("missing denominator"))?;
                coeff = &coeff * &Rational::from_bigints(BigInt::one(), d)?;
            }
        }
        let term = match radicand {
            None => SqrtSum::rational(coeff),
            Some(rad) => {
                // √(p/q) = √(pq)/q
                let n = rad.numer() * rad.denom();
                if n.is_negative() {
                    return Err(bad("negative radicand"));
                }
                let n = n.to_u64().ok_or_else(|| bad("radicand too large"))?;
                let coeff = &coeff * &Rational::from_bigints(BigInt::one(), rad.denom())?;
                SqrtSum::term(coeff, n)
            }
        };
        acc = acc.add(&term);
    }
    Ok(acc)
}

fn parse_sqrt(c: &mut Cursor<'_>) -> Result<Option<Rational>, &'static str> {
    let close = if c.eat_word("sqrt(") {
        b')'
    } else if c.eat_word("Sqrt[") {
        b']'
    } else if c.eat_word("√") {
        let n = c.integer().ok_or("missing radicand")?;
        return Rational::from_bigints(n, BigInt::one())
            .map(Some)
            .map_err(|_| "bad radicand");
    } else {
        return Ok(None);
    };
    let n = c.integer().ok_or("missing radicand")?;
    let mut d = BigInt::one();
    if c.eat(b'/') {
        d = c.integer().ok_or("missing radicand denominator")?;
    }
    if !c.eat(close) {
        return Err("unclosed square root");
    }
    Rational::from_bigints(n, d).map(Some).map_err(|_| "bad radicand")
}

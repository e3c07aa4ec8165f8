//! Exact coefficients: rationals and Laurent polynomials in the even
//! deformation parameter `q`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary precision rational, always kept in lowest terms.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse {
        pos: 0,
        msg: format!("invalid rational `{s}`"),
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse {
                    pos: 0,
                    msg: "zero denominator".into(),
                });
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
    }
}

/// A Laurent polynomial in `q` with rational coefficients.
///
/// No zero coefficient is ever stored, so the empty map is the unique zero
/// and structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Laurent {
    terms: BTreeMap<i32, Rational>,
}

impl Laurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(int(c))
    }

    /// `c * q^e`.
    pub fn monomial(c: Rational, e: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Self { terms }
    }

    /// `q^e`.
    pub fn q_pow(e: i32) -> Self {
        Self::monomial(Rational::one(), e)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Rational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, e: i32) -> Rational {
        self.terms.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    /// The value if this is a constant (degree-0 or zero) polynomial.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    fn add_term(&mut self, e: i32, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, v)| (e + k, v.clone())).collect(),
        }
    }

    /// Substitutes `q := q0`. The parameter is a unit, so `q0 = 0` is rejected.
    pub fn eval(&self, q0: &Rational) -> Result<Rational> {
        if q0.is_zero() {
            return Err(Error::ZeroParameter);
        }
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            acc += c * pow_rat(q0, *e);
        }
        Ok(acc)
    }

    /// Lowest and highest exponents, if nonzero.
    pub fn degree_range(&self) -> Option<(i32, i32)> {
        let lo = *self.terms.keys().next()?;
        let hi = *self.terms.keys().next_back()?;
        Some((lo, hi))
    }
}

pub fn pow_rat(x: &Rational, e: i32) -> Rational {
    let base = if e < 0 { x.recip() } else { x.clone() };
    let mut acc = Rational::one();
    for _ in 0..e.unsigned_abs() {
        acc *= &base;
    }
    acc
}

impl From<Rational> for Laurent {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}

impl Add for &Laurent {
    type Output = Laurent;
    fn add(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Laurent {
    type Output = Laurent;
    fn add(mut self, rhs: Laurent) -> Laurent {
        self += &rhs;
        self
    }
}

impl AddAssign<&Laurent> for Laurent {
    fn add_assign(&mut self, rhs: &Laurent) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c);
        }
    }
}

impl SubAssign<&Laurent> for Laurent {
    fn sub_assign(&mut self, rhs: &Laurent) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, &-c);
        }
    }
}

impl Sub for &Laurent {
    type Output = Laurent;
    fn sub(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Laurent {
    type Output = Laurent;
    fn sub(mut self, rhs: Laurent) -> Laurent {
        self -= &rhs;
        self
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        Laurent {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        -&self
    }
}

impl Mul for &Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &Laurent) -> Laurent {
        // schoolbook convolution
        let mut out = Laurent::zero();
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, &(c1 * c2));
            }
        }
        out
    }
}

impl Mul for Laurent {
    type Output = Laurent;
    fn mul(self, rhs: Laurent) -> Laurent {
        &self * &rhs
    }
}

fn fmt_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Laurent {
    /// Descending powers of `q`, e.g. `q^2 - 3*q^-2 + 1/2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let qpart = match e {
                0 => String::new(),
                1 => "q".to_string(),
                e => format!("q^{e}"),
            };
            if qpart.is_empty() {
                write!(f, "{}", fmt_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{qpart}")?;
            } else {
                write!(f, "{}*{qpart}", fmt_rational(&mag))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Laurent({self})")
    }
}

impl FromStr for Laurent {
    type Err = Error;

    /// Accepts sums of terms `c`, `c*q^e`, `q^e`, `c/d*q`, with optional signs.
    fn from_str(src: &str) -> Result<Laurent> {
        let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse {
                pos: 0,
                msg: "empty scalar".into(),
            });
        }
        let mut out = Laurent::zero();
        let bytes = s.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let start = i;
            let mut sign = Rational::one();
            if bytes[i] == b'+' || bytes[i] == b'-' {
                if bytes[i] == b'-' {
                    sign = -sign;
                }
                i += 1;
            }
            // a term ends at the next +/- that is not an exponent sign
            let mut j = i;
            while j < bytes.len() {
                if (bytes[j] == b'+' || bytes[j] == b'-') && j > i && bytes[j - 1] != b'^' {
                    break;
                }
                j += 1;
            }
            let term = &s[i..j];
            let (c, e) = parse_term(term).map_err(|msg| Error::Parse { pos: start, msg })?;
            out.add_term(e, &(sign * c));
            i = j;
        }
        Ok(out)
    }
}

fn parse_term(t: &str) -> std::result::Result<(Rational, i32), String> {
    if t.is_empty() {
        return Err("missing term".into());
    }
    let (coeff, qpart) = match t.find('q') {
        Some(k) => {
            let c = t[..k].trim_end_matches('*');
            (c, Some(&t[k + 1..]))
        }
        None => (t, None),
    };
    let c = if coeff.is_empty() {
        Rational::one()
    } else {
        parse_rational(coeff).map_err(|_| format!("invalid coefficient `{coeff}`"))?
    };
    let e = match qpart {
        None => 0,
        Some("") => 1,
        Some(rest) => {
            let exp = rest
                .strip_prefix('^')
                .ok_or_else(|| format!("expected `^` after q in `{t}`"))?;
            exp.parse::<i32>()
                .map_err(|_| format!("invalid exponent `{exp}`"))?
        }
    };
    Ok((c, e))
}

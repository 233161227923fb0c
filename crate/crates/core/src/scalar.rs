//! Exact scalars.
//!
//! The base field is the Gaussian rationals `Q(α)` with `α² = −1`. It houses
//! both constants used by the exceptional constructions: `α` and
//! `ε = (1 + α)/2`, which satisfies `ε² = α/2`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision reduced rational.
pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// An element `re + im·α` of `Q(α)`, `α² = −1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElem {
    re: Rat,
    im: Rat,
}

impl FieldElem {
    pub fn new(re: Rat, im: Rat) -> Self {
        FieldElem { re, im }
    }

    pub fn from_rat(r: Rat) -> Self {
        FieldElem {
            re: r,
            im: Rat::zero(),
        }
    }

    pub fn int(n: i64) -> Self {
        Self::from_rat(Rat::from_integer(BigInt::from(n)))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Self::from_rat(rat(n, d))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    /// The square root of −1 used throughout the exceptional examples.
    pub fn alpha() -> Self {
        FieldElem {
            re: Rat::zero(),
            im: Rat::one(),
        }
    }

    /// `ε = (1 + α)/2`, the root of `ε² = α/2`.
    pub fn epsilon() -> Self {
        FieldElem {
            re: rat(1, 2),
            im: rat(1, 2),
        }
    }

    pub fn re(&self) -> &Rat {
        &self.re
    }

    pub fn im(&self) -> &Rat {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        FieldElem {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn norm(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(FieldElem {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// A square root in `Q(α)`, if one exists.
    pub fn sqrt(&self) -> Option<Self> {
        if self.im.is_zero() {
            if self.re.is_negative() {
                return rat_sqrt(&-self.re.clone()).map(|r| FieldElem {
                    re: Rat::zero(),
                    im: r,
                });
            }
            return rat_sqrt(&self.re).map(FieldElem::from_rat);
        }
        let s = rat_sqrt(&self.norm())?;
        let two = Rat::from_integer(BigInt::from(2));
        let x = rat_sqrt(&((&self.re + &s) / &two))?;
        let y = &self.im / &(&two * &x);
        Some(FieldElem { re: x, im: y })
    }

    /// `(−1)^k` as a field element.
    pub fn sign(negative: bool) -> Self {
        if negative {
            Self::int(-1)
        } else {
            Self::one()
        }
    }
}

fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer().sqrt(), r.denom().sqrt());
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| Rat::new(n, d))
}

fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for FieldElem {
    /// Canonical form: `3`, `-1/2`, `α`, `-2α`, `(1/2+1/2α)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im_part = |im: &Rat| -> String {
            if im.is_one() {
                "α".to_string()
            } else if (-im.clone()).is_one() {
                "-α".to_string()
            } else {
                format!("{}α", fmt_rat(im))
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rat(&self.re)),
            (true, false) => write!(f, "{}", im_part(&self.im)),
            (false, false) => {
                let im = im_part(&self.im);
                if self.im.is_negative() {
                    write!(f, "({}{})", fmt_rat(&self.re), im)
                } else {
                    write!(f, "({}+{})", fmt_rat(&self.re), im)
                }
            }
        }
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::str::FromStr for FieldElem {
    type Err = String;

    /// Parses the output of `Display`.
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let inner = s
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(s);
        if inner.is_empty() {
            return Err("empty scalar".into());
        }
        let parse_rat = |t: &str| -> Result<Rat, String> {
            let t = t.trim();
            let (n, d) = match t.split_once('/') {
                Some((n, d)) => (n, d),
                None => (t, "1"),
            };
            let n: BigInt = n.parse().map_err(|_| format!("bad rational `{t}`"))?;
            let d: BigInt = d.parse().map_err(|_| format!("bad rational `{t}`"))?;
            if d.is_zero() {
                return Err(format!("zero denominator in `{t}`"));
            }
            Ok(Rat::new(n, d))
        };
        let parse_im = |t: &str| -> Result<Rat, String> {
            let body = t
                .strip_suffix('α')
                .ok_or_else(|| format!("bad imaginary part `{t}`"))?;
            match body {
                "" | "+" => Ok(Rat::one()),
                "-" => Ok(-Rat::one()),
                b => parse_rat(b),
            }
        };
        if !inner.ends_with('α') {
            return Ok(FieldElem::from_rat(parse_rat(inner)?));
        }
        // split at the last sign that is not the leading one
        let split = inner
            .char_indices()
            .skip(1)
            .filter(|&(i, c)| (c == '+' || c == '-') && !inner[..i].ends_with('/'))
            .map(|(i, _)| i)
            .last();
        match split {
            Some(i) => Ok(FieldElem::new(
                parse_rat(&inner[..i])?,
                parse_im(&inner[i..])?,
            )),
            None => Ok(FieldElem::new(Rat::zero(), parse_im(inner)?)),
        }
    }
}

impl serde::Serialize for FieldElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for FieldElem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for FieldElem {
    fn from(n: i64) -> Self {
        FieldElem::int(n)
    }
}

impl From<Rat> for FieldElem {
    fn from(r: Rat) -> Self {
        FieldElem::from_rat(r)
    }
}

impl<'a> Add<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn add(self, o: &FieldElem) -> FieldElem {
        FieldElem {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }
}

impl<'a> Sub<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn sub(self, o: &FieldElem) -> FieldElem {
        FieldElem {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }
}

impl<'a> Mul<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn mul(self, o: &FieldElem) -> FieldElem {
        if self.im.is_zero() && o.im.is_zero() {
            return FieldElem::from_rat(&self.re * &o.re);
        }
        FieldElem {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl<'a> Div<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn div(self, o: &FieldElem) -> FieldElem {
        self * &o.inv().expect("division by zero in FieldElem")
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Add for FieldElem {
    type Output = FieldElem;
    fn add(self, o: FieldElem) -> FieldElem {
        &self + &o
    }
}

impl Sub for FieldElem {
    type Output = FieldElem;
    fn sub(self, o: FieldElem) -> FieldElem {
        &self - &o
    }
}

impl Mul for FieldElem {
    type Output = FieldElem;
    fn mul(self, o: FieldElem) -> FieldElem {
        &self * &o
    }
}

impl Div for FieldElem {
    type Output = FieldElem;
    fn div(self, o: FieldElem) -> FieldElem {
        &self / &o
    }
}

impl AddAssign<&FieldElem> for FieldElem {
    fn add_assign(&mut self, o: &FieldElem) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&FieldElem> for FieldElem {
    fn sub_assign(&mut self, o: &FieldElem) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl MulAssign<&FieldElem> for FieldElem {
    fn mul_assign(&mut self, o: &FieldElem) {
        *self = &*self * o;
    }
}

/// Binomial coefficient `C(m, j)` for any integer `m` and `j ≥ 0`.
pub fn binomial(m: i64, j: u32) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..j as i64 {
        num *= BigInt::from(m - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

pub fn factorial(j: u32) -> BigInt {
    (1..=j as i64).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_and_epsilon_relations() {
        let a = FieldElem::alpha();
        let e = FieldElem::epsilon();
        assert_eq!(&a * &a, FieldElem::int(-1));
        assert_eq!(&e * &e, &a / &FieldElem::int(2));
        assert_eq!(&FieldElem::int(2) * &(&e * &e), a);
    }

    #[test]
    fn inverse_roundtrip() {
        let x = FieldElem::new(rat(3, 4), rat(-5, 7));
        assert!((&x * &x.inv().unwrap()).is_one());
        assert!(FieldElem::zero().inv().is_none());
    }

    #[test]
    fn display_and_parse() {
        for x in [
            FieldElem::int(3),
            FieldElem::frac(-1, 2),
            FieldElem::alpha(),
            -FieldElem::alpha(),
            FieldElem::new(rat(1, 2), rat(-3, 2)),
            FieldElem::epsilon(),
            FieldElem::new(rat(-2, 3), rat(-1, 5)),
        ] {
            let s = x.to_string();
            assert_eq!(s.parse::<FieldElem>().unwrap(), x, "{s}");
        }
        assert_eq!(
            FieldElem::new(rat(1, 2), rat(1, 2)).to_string(),
            "(1/2+1/2α)"
        );
    }

    #[test]
    fn square_roots() {
        for x in [
            FieldElem::int(4),
            FieldElem::int(-1),
            FieldElem::frac(-9, 4),
            FieldElem::frac(1, 2) * FieldElem::alpha(),
            FieldElem::new(rat(3, 1), rat(4, 1)),
            FieldElem::new(rat(-5, 4), rat(3, 1)),
        ] {
            let r = x.sqrt().unwrap_or_else(|| panic!("{x}"));
            assert_eq!(&r * &r, x);
        }
        assert!(FieldElem::int(2).sqrt().is_none());
        assert!(FieldElem::alpha().sqrt().is_none());
        assert!(FieldElem::new(rat(1, 1), rat(1, 1)).sqrt().is_none());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(0, 1), BigInt::from(0));
        assert_eq!(binomial(-1, 3), BigInt::from(-1));
        assert_eq!(binomial(-3, 2), BigInt::from(6));
        assert_eq!(factorial(4), BigInt::from(24));
    }
}

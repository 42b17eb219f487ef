//! Exact Gaussian rationals (`a + b·i` with `a, b ∈ ℚ`) and rational helpers.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `"p"`, `"p/q"` or a plain decimal such as `"1.25"` into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((num, den)) = text.split_once('/') {
        let n = BigInt::from_str(num.trim()).ok()?;
        let d = BigInt::from_str(den.trim()).ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let value = match body.split_once('.') {
        Some((int, frac)) => {
            if int.is_empty() && frac.is_empty() {
                return None;
            }
            if !int.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
                return None;
            }
            let digits = format!("{int}{frac}");
            let n = BigInt::from_str(&digits).ok()?;
            let d = num::pow(BigInt::from(10), frac.len());
            BigRational::new(n, d)
        }
        None => {
            if !body.chars().all(|c| c.is_ascii_digit()) {
                return None;
            }
            BigRational::from_integer(BigInt::from_str(body).ok()?)
        }
    };
    Some(if neg { -value } else { value })
}

/// `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// An exact complex rational.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coeff {
    pub re: Rational,
    pub im: Rational,
}

impl Coeff {
    pub fn new(re: Rational, im: Rational) -> Self {
        Coeff { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Coeff { re, im: Rational::zero() }
    }

    pub fn int(n: i64) -> Self {
        Coeff::real(rat_int(n))
    }

    pub fn zero() -> Self {
        Coeff::int(0)
    }

    pub fn one() -> Self {
        Coeff::int(1)
    }

    pub fn i() -> Self {
        Coeff { re: Rational::zero(), im: Rational::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// `(−i)^k`
    pub fn neg_i_pow(k: u32) -> Self {
        match k % 4 {
            0 => Coeff::one(),
            1 => -Coeff::i(),
            2 => Coeff::int(-1),
            _ => Coeff::i(),
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Coeff { re: &self.re * r, im: &self.im * r }
    }

    pub fn inv(&self) -> Option<Self> {
        let norm = &self.re * &self.re + &self.im * &self.im;
        if norm.is_zero() {
            return None;
        }
        Some(Coeff { re: &self.re / &norm, im: -&self.im / &norm })
    }

    /// Whether a printed form needs parentheses when used as a multiplicative prefix.
    pub fn is_compound(&self) -> bool {
        !self.re.is_zero() && !self.im.is_zero()
    }

    pub fn is_negative_real(&self) -> bool {
        self.im.is_zero() && self.re.is_negative()
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", format_rational(&self.re)),
            (true, false) => {
                if self.im.is_one() {
                    write!(f, "i")
                } else if (-&self.im).is_one() {
                    write!(f, "-i")
                } else {
                    write!(f, "{}*i", format_rational(&self.im))
                }
            }
            (false, false) => {
                let sign = if self.im.is_negative() { "-" } else { "+" };
                let mag = self.im.abs();
                if mag.is_one() {
                    write!(f, "({} {} i)", format_rational(&self.re), sign)
                } else {
                    write!(f, "({} {} {}*i)", format_rational(&self.re), sign, format_rational(&mag))
                }
            }
        }
    }
}

impl Add for &Coeff {
    type Output = Coeff;
    fn add(self, rhs: &Coeff) -> Coeff {
        Coeff { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub for &Coeff {
    type Output = Coeff;
    fn sub(self, rhs: &Coeff) -> Coeff {
        Coeff { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul for &Coeff {
    type Output = Coeff;
    fn mul(self, rhs: &Coeff) -> Coeff {
        Coeff {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff { re: -self.re, im: -self.im }
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff { re: -&self.re, im: -&self.im }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rational_forms() {
        assert_eq!(parse_rational("3/4"), Some(rat(3, 4)));
        assert_eq!(parse_rational("-6/8"), Some(rat(-3, 4)));
        assert_eq!(parse_rational("1.25"), Some(rat(5, 4)));
        assert_eq!(parse_rational("7"), Some(rat_int(7)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
        assert_eq!(parse_rational("."), None);
    }

    #[test]
    fn i_squared_is_minus_one() {
        let i = Coeff::i();
        assert_eq!(&i * &i, Coeff::int(-1));
        assert_eq!(Coeff::neg_i_pow(2), Coeff::int(-1));
        assert_eq!(&Coeff::neg_i_pow(1) * &Coeff::i(), Coeff::one());
    }

    #[test]
    fn display_forms() {
        assert_eq!(Coeff::real(rat(-1, 2)).to_string(), "-1/2");
        assert_eq!(Coeff::new(rat(1, 2), rat(-3, 1)).to_string(), "(1/2 - 3*i)");
        assert_eq!((-Coeff::i()).to_string(), "-i");
    }
}

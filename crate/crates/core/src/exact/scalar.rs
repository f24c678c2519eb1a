use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

/// An element `re + im*i` of the Gaussian rationals.
///
/// Both parts are kept as reduced big rationals, so arithmetic is exact and
/// equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussScalar {
    re: BigRational,
    im: BigRational,
}

impl GaussScalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussScalar { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        GaussScalar::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        GaussScalar::new(
            BigRational::new(num.into(), den.into()),
            BigRational::zero(),
        )
    }

    pub fn from_bigint(n: BigInt) -> Self {
        GaussScalar::new(BigRational::from_integer(n), BigRational::zero())
    }

    pub fn real(re: BigRational) -> Self {
        GaussScalar::new(re, BigRational::zero())
    }

    /// `a + b*i` with integer parts.
    pub fn gauss(a: i64, b: i64) -> Self {
        GaussScalar::new(
            BigRational::from_integer(a.into()),
            BigRational::from_integer(b.into()),
        )
    }

    pub fn i() -> Self {
        GaussScalar::gauss(0, 1)
    }

    pub fn zero() -> Self {
        GaussScalar::default()
    }

    pub fn one() -> Self {
        GaussScalar::from_int(1)
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
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

    /// True when the value is a rational integer.
    pub fn is_integer(&self) -> bool {
        self.im.is_zero() && self.re.is_integer()
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.re.to_integer())
    }

    pub fn conj(&self) -> Self {
        GaussScalar::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(GaussScalar::new(&self.re / &n, -(&self.im / &n)))
    }

    /// Least common multiple of the two denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        num::integer::lcm(self.re.denom().clone(), self.im.denom().clone())
    }
}

impl From<i64> for GaussScalar {
    fn from(n: i64) -> Self {
        GaussScalar::from_int(n)
    }
}

impl From<BigInt> for GaussScalar {
    fn from(n: BigInt) -> Self {
        GaussScalar::from_bigint(n)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a, 'b> $tr<&'b GaussScalar> for &'a GaussScalar {
            type Output = GaussScalar;
            fn $method(self, rhs: &'b GaussScalar) -> GaussScalar {
                let f: fn(&GaussScalar, &GaussScalar) -> GaussScalar = $body;
                f(self, rhs)
            }
        }
        impl $tr<GaussScalar> for GaussScalar {
            type Output = GaussScalar;
            fn $method(self, rhs: GaussScalar) -> GaussScalar {
                (&self).$method(&rhs)
            }
        }
        impl<'b> $tr<&'b GaussScalar> for GaussScalar {
            type Output = GaussScalar;
            fn $method(self, rhs: &'b GaussScalar) -> GaussScalar {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<GaussScalar> for &'a GaussScalar {
            type Output = GaussScalar;
            fn $method(self, rhs: GaussScalar) -> GaussScalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| GaussScalar::new(&a.re + &b.re, &a.im + &b.im));
forward_binop!(Sub, sub, |a, b| GaussScalar::new(&a.re - &b.re, &a.im - &b.im));
forward_binop!(Mul, mul, |a, b| {
    if a.im.is_zero() && b.im.is_zero() {
        return GaussScalar::real(&a.re * &b.re);
    }
    GaussScalar::new(
        &a.re * &b.re - &a.im * &b.im,
        &a.re * &b.im + &a.im * &b.re,
    )
});
forward_binop!(Div, div, |a, b| a * &b.inv().expect("division by zero"));

impl Neg for GaussScalar {
    type Output = GaussScalar;
    fn neg(self) -> GaussScalar {
        GaussScalar::new(-self.re, -self.im)
    }
}

impl Neg for &GaussScalar {
    type Output = GaussScalar;
    fn neg(self) -> GaussScalar {
        GaussScalar::new(-self.re.clone(), -self.im.clone())
    }
}

impl AddAssign<&GaussScalar> for GaussScalar {
    fn add_assign(&mut self, rhs: &GaussScalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussScalar> for GaussScalar {
    fn sub_assign(&mut self, rhs: &GaussScalar) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GaussScalar> for GaussScalar {
    fn mul_assign(&mut self, rhs: &GaussScalar) {
        *self = &*self * rhs;
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Prints the exact form `a/b+c/d*i`; zero parts are omitted.
impl fmt::Display for GaussScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rational(&self.re)),
            (true, false) => write!(f, "{}*i", fmt_rational(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { "-" } else { "+" };
                write!(
                    f,
                    "{}{}{}*i",
                    fmt_rational(&self.re),
                    sign,
                    fmt_rational(&self.im.abs())
                )
            }
        }
    }
}

impl fmt::Debug for GaussScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_rational(s: &str, whole: &str) -> Result<BigRational> {
    let bad = |why: &str| Error::Scalar(format!("{whole:?}: {why}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| bad("malformed numerator"))?;
    let d = BigInt::from_str(d).map_err(|_| bad("malformed denominator"))?;
    if d.is_zero() {
        return Err(bad("zero denominator"));
    }
    if d.is_negative() {
        return Err(bad("negative denominator"));
    }
    Ok(BigRational::new(n, d))
}

impl FromStr for GaussScalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.is_empty() {
            return Err(Error::Scalar("empty scalar".into()));
        }
        let Some(body) = t.strip_suffix("*i") else {
            return Ok(GaussScalar::real(parse_rational(t, s)?));
        };
        // split at the last sign that is not the leading one
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(k, _)| k)
            .last();
        match split {
            None => Ok(GaussScalar::new(BigRational::zero(), parse_rational(body, s)?)),
            Some(k) => {
                let re = parse_rational(&body[..k], s)?;
                let (sign, im) = body[k..].split_at(1);
                let im = parse_rational(im, s)?;
                let im = if sign == "-" { -im } else { im };
                Ok(GaussScalar::new(re, im))
            }
        }
    }
}

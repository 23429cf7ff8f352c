//! Exact arithmetic over Q and the real quadratic field Q(sqrt 5).
//!
//! Every coefficient of the methods handled by this crate lives in Q(sqrt 5),
//! so a value is stored as a pair of canonical big rationals `(r, s)` meaning
//! `r + s*sqrt(5)`. Canonical form is maintained after every operation, which
//! makes equality structural and lets residuals be compared to literal zero.
//!
//! The text form is `p/q` for rationals and `p/q+r/t*sqrt5` for extension
//! elements, without spaces; either part may carry a leading `-`.

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("value {0} does not fit in binary64")]
    Overflow(String),
    #[error("malformed scalar `{input}`: {reason}")]
    Parse { input: String, reason: String },
}

/// An element `r + s*sqrt(5)` of Q(sqrt 5).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QSqrt5 {
    r: Rational,
    s: Rational,
}

impl QSqrt5 {
    pub fn new(r: Rational, s: Rational) -> Self {
        QSqrt5 { r, s }
    }

    pub fn from_rational(r: Rational) -> Self {
        QSqrt5 { r, s: Rational::zero() }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// `num/den`; panics on a zero denominator like `Ratio::new`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(rat(num, den))
    }

    /// `(r_num/r_den) + (s_num/s_den)*sqrt(5)`.
    pub fn with_sqrt5(r_num: i64, r_den: i64, s_num: i64, s_den: i64) -> Self {
        QSqrt5::new(rat(r_num, r_den), rat(s_num, s_den))
    }

    pub fn sqrt5() -> Self {
        QSqrt5::new(Rational::zero(), Rational::one())
    }

    pub fn rational_part(&self) -> &Rational {
        &self.r
    }

    pub fn sqrt5_part(&self) -> &Rational {
        &self.s
    }

    pub fn is_rational(&self) -> bool {
        self.s.is_zero()
    }

    /// Galois conjugate `r - s*sqrt(5)`.
    pub fn conjugate(&self) -> Self {
        QSqrt5::new(self.r.clone(), -self.s.clone())
    }

    /// Field norm `r^2 - 5 s^2`; zero only at zero.
    pub fn norm(&self) -> Rational {
        &self.r * &self.r - Rational::from_integer(5.into()) * &self.s * &self.s
    }

    pub fn inv(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let n = self.norm();
        Ok(QSqrt5::new(&self.r / &n, -(&self.s / &n)))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ExactError> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = QSqrt5::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Sign of the real number `r + s*sqrt(5)`.
    pub fn signum(&self) -> Ordering {
        let rs = self.r.cmp(&Rational::zero());
        let ss = self.s.cmp(&Rational::zero());
        match (rs, ss) {
            (a, Ordering::Equal) => a,
            (Ordering::Equal, b) => b,
            (a, b) if a == b => a,
            (a, b) => {
                // Opposite signs: the part with the larger square wins.
                // r^2 == 5 s^2 cannot happen for nonzero rationals.
                if self.norm() > Rational::zero() {
                    a
                } else {
                    b
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Nearest binary64 to the exact value.
    ///
    /// sqrt(5) is bracketed by dyadic rationals of increasing precision (128
    /// bits to start) until both ends of the bracket round to the same double.
    /// Since the value is irrational whenever `s != 0`, the loop terminates.
    pub fn to_f64(&self) -> Result<f64, ExactError> {
        let check = |v: f64| {
            if v.is_finite() {
                Ok(v)
            } else {
                Err(ExactError::Overflow(self.to_string()))
            }
        };
        if self.s.is_zero() {
            return check(self.r.to_f64().unwrap_or(f64::NAN));
        }
        let mut bits: u32 = 128;
        loop {
            let (lo, hi) = sqrt5_bracket(bits);
            let a = (&self.r + &self.s * &lo).to_f64().unwrap_or(f64::NAN);
            let b = (&self.r + &self.s * &hi).to_f64().unwrap_or(f64::NAN);
            if a == b || bits >= 1 << 14 {
                return check(a);
            }
            bits *= 2;
        }
    }
}

fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Dyadic rationals `lo < sqrt(5) < hi` with `hi - lo = 2^-bits`.
fn sqrt5_bracket(bits: u32) -> (Rational, Rational) {
    let scale = BigInt::one() << bits;
    let root = (BigInt::from(5) * &scale * &scale).sqrt();
    let lo = Rational::new(root.clone(), scale.clone());
    let hi = Rational::new(root + 1, scale);
    (lo, hi)
}

impl Zero for QSqrt5 {
    fn zero() -> Self {
        QSqrt5::default()
    }

    fn is_zero(&self) -> bool {
        self.r.is_zero() && self.s.is_zero()
    }
}

impl One for QSqrt5 {
    fn one() -> Self {
        QSqrt5::from_integer(1)
    }
}

impl PartialOrd for QSqrt5 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QSqrt5 {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl From<Rational> for QSqrt5 {
    fn from(r: Rational) -> Self {
        QSqrt5::from_rational(r)
    }
}

impl From<i64> for QSqrt5 {
    fn from(n: i64) -> Self {
        QSqrt5::from_integer(n)
    }
}

impl<'a> Add<&'a QSqrt5> for &'a QSqrt5 {
    type Output = QSqrt5;
    fn add(self, rhs: &QSqrt5) -> QSqrt5 {
        QSqrt5::new(&self.r + &rhs.r, &self.s + &rhs.s)
    }
}

impl<'a> Sub<&'a QSqrt5> for &'a QSqrt5 {
    type Output = QSqrt5;
    fn sub(self, rhs: &QSqrt5) -> QSqrt5 {
        QSqrt5::new(&self.r - &rhs.r, &self.s - &rhs.s)
    }
}

impl<'a> Mul<&'a QSqrt5> for &'a QSqrt5 {
    type Output = QSqrt5;
    fn mul(self, rhs: &QSqrt5) -> QSqrt5 {
        // (a + b√5)(c + d√5) = (ac + 5bd) + (ad + bc)√5
        let five = Rational::from_integer(5.into());
        QSqrt5::new(
            &self.r * &rhs.r + five * &self.s * &rhs.s,
            &self.r * &rhs.s + &self.s * &rhs.r,
        )
    }
}

impl<'a> Div<&'a QSqrt5> for &'a QSqrt5 {
    type Output = QSqrt5;
    /// Panics on division by zero; use [`QSqrt5::checked_div`] to recover.
    fn div(self, rhs: &QSqrt5) -> QSqrt5 {
        self.checked_div(rhs).expect("QSqrt5 division by zero")
    }
}

macro_rules! forward_owned_binop {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<QSqrt5> for QSqrt5 {
            type Output = QSqrt5;
            fn $m(self, rhs: QSqrt5) -> QSqrt5 {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a QSqrt5> for QSqrt5 {
            type Output = QSqrt5;
            fn $m(self, rhs: &QSqrt5) -> QSqrt5 {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<QSqrt5> for &'a QSqrt5 {
            type Output = QSqrt5;
            fn $m(self, rhs: QSqrt5) -> QSqrt5 {
                self.$m(&rhs)
            }
        }
    )*};
}

forward_owned_binop!(Add add, Sub sub, Mul mul, Div div);

impl Neg for QSqrt5 {
    type Output = QSqrt5;
    fn neg(self) -> QSqrt5 {
        QSqrt5::new(-self.r, -self.s)
    }
}

impl Neg for &QSqrt5 {
    type Output = QSqrt5;
    fn neg(self) -> QSqrt5 {
        -self.clone()
    }
}

impl AddAssign<&QSqrt5> for QSqrt5 {
    fn add_assign(&mut self, rhs: &QSqrt5) {
        self.r += &rhs.r;
        self.s += &rhs.s;
    }
}

impl SubAssign<&QSqrt5> for QSqrt5 {
    fn sub_assign(&mut self, rhs: &QSqrt5) {
        self.r -= &rhs.r;
        self.s -= &rhs.s;
    }
}

impl MulAssign<&QSqrt5> for QSqrt5 {
    fn mul_assign(&mut self, rhs: &QSqrt5) {
        *self = &*self * rhs;
    }
}

impl Sum for QSqrt5 {
    fn sum<I: Iterator<Item = QSqrt5>>(iter: I) -> Self {
        iter.fold(QSqrt5::zero(), |mut acc, x| {
            acc += &x;
            acc
        })
    }
}

impl Product for QSqrt5 {
    fn product<I: Iterator<Item = QSqrt5>>(iter: I) -> Self {
        iter.fold(QSqrt5::one(), |acc, x| acc * x)
    }
}

impl fmt::Display for QSqrt5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.s.is_zero() {
            write!(f, "{}", self.r)
        } else {
            write!(f, "{}+{}*sqrt5", self.r, self.s)
        }
    }
}

impl fmt::Debug for QSqrt5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

fn parse_rational(input: &str, part: &str) -> Result<Rational, ExactError> {
    let err = |reason: &str| ExactError::Parse {
        input: input.to_string(),
        reason: reason.to_string(),
    };
    if part.is_empty() {
        return Err(err("empty component"));
    }
    let (num, den) = match part.split_once('/') {
        Some((n, d)) => (n, d),
        None => (part, "1"),
    };
    let valid = |s: &str, signed: bool| {
        let digits = if signed { s.strip_prefix('-').unwrap_or(s) } else { s };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num, true) || !valid(den, false) {
        return Err(err("expected an integer or p/q"));
    }
    let num: BigInt = num.parse().map_err(|_| err("bad numerator"))?;
    let den: BigInt = den.parse().map_err(|_| err("bad denominator"))?;
    if den.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(Rational::new(num, den))
}

impl FromStr for QSqrt5 {
    type Err = ExactError;

    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let text = input.trim();
        match text.strip_suffix("*sqrt5") {
            None => Ok(QSqrt5::from_rational(parse_rational(input, text)?)),
            Some(head) => {
                // The rational part never contains '+', so the first '+' after
                // position 0 separates the two components.
                match head[1.min(head.len())..].find('+').map(|i| i + 1) {
                    Some(split) => Ok(QSqrt5::new(
                        parse_rational(input, &head[..split])?,
                        parse_rational(input, &head[split + 1..])?,
                    )),
                    None => Ok(QSqrt5::new(Rational::zero(), parse_rational(input, head)?)),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> QSqrt5 {
        s.parse().unwrap()
    }

    #[test]
    fn conjugate_product() {
        let x = QSqrt5::with_sqrt5(1, 1, 1, 1);
        let y = QSqrt5::with_sqrt5(1, 1, -1, 1);
        assert_eq!(&x * &y, QSqrt5::from_integer(-4));
    }

    #[test]
    fn additive_identity_and_doubling() {
        let c2 = QSqrt5::with_sqrt5(1, 2, -1, 6);
        assert_eq!(QSqrt5::zero() + &c2, c2);
        assert_eq!(&c2 * QSqrt5::from_integer(2), QSqrt5::with_sqrt5(1, 1, -1, 3));
    }

    #[test]
    fn inverses() {
        assert_eq!(QSqrt5::from_integer(2).inv().unwrap(), QSqrt5::ratio(1, 2));
        assert_eq!(QSqrt5::sqrt5().inv().unwrap(), QSqrt5::with_sqrt5(0, 1, 1, 5));
        let x = QSqrt5::with_sqrt5(1, 1, 1, 1);
        let inv = x.inv().unwrap();
        assert_eq!(inv, QSqrt5::with_sqrt5(-1, 4, 1, 4));
        assert_eq!(&x * &inv, QSqrt5::one());
        assert_eq!(QSqrt5::zero().inv(), Err(ExactError::DivisionByZero));
    }

    #[test]
    fn float_conversion() {
        assert_eq!(QSqrt5::ratio(1, 4).to_f64().unwrap(), 0.25);
        assert_eq!(QSqrt5::sqrt5().to_f64().unwrap(), 5f64.sqrt());
        assert_eq!(QSqrt5::sqrt5().to_f64().unwrap(), 5f64.sqrt());
        let c2 = QSqrt5::with_sqrt5(1, 2, -1, 6).to_f64().unwrap();
        // 1/2 - sqrt(5)/6 = 0.12732200375003505...
        assert_eq!(c2, 0.127_322_003_750_035_05);
    }

    #[test]
    fn float_conversion_overflow() {
        let huge = QSqrt5::from_rational(Rational::from_integer(BigInt::one() << 1100));
        assert!(matches!(huge.to_f64(), Err(ExactError::Overflow(_))));
        let huge = QSqrt5::new(Rational::zero(), Rational::from_integer(BigInt::one() << 1100));
        assert!(matches!(huge.to_f64(), Err(ExactError::Overflow(_))));
    }

    #[test]
    fn near_cancellation_is_accurate() {
        // 2207 - 987*sqrt5 = phi^-16 ~ 4.53e-4 (Lucas/Fibonacci pair)
        let x = QSqrt5::with_sqrt5(2207, 2, -987, 2);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let expect = phi.powi(-16);
        assert!((x.to_f64().unwrap() - expect).abs() <= 4.0 * f64::EPSILON * expect);
    }

    #[test]
    fn ordering() {
        assert!(QSqrt5::sqrt5() > QSqrt5::from_integer(2));
        assert!(QSqrt5::sqrt5() < QSqrt5::ratio(9, 4));
        assert!(QSqrt5::with_sqrt5(3, 1, -1, 1).is_positive());
        assert!(QSqrt5::with_sqrt5(2, 1, -1, 1).is_negative());
        assert_eq!(QSqrt5::zero().signum(), Ordering::Equal);
    }

    #[test]
    fn wire_format() {
        let x = q("1/4+-1/12*sqrt5");
        assert_eq!(x.rational_part(), &rat(1, 4));
        assert_eq!(x.sqrt5_part(), &rat(-1, 12));
        assert_eq!(x.to_string(), "1/4+-1/12*sqrt5");
        assert_eq!(q("-3/6"), QSqrt5::ratio(-1, 2));
        assert_eq!(q("-3/6").to_string(), "-1/2");
        assert_eq!(q("7"), QSqrt5::from_integer(7));
        assert_eq!(q("-2/5*sqrt5"), QSqrt5::with_sqrt5(0, 1, -2, 5));
        assert_eq!(q("-1/2+1*sqrt5"), QSqrt5::with_sqrt5(-1, 2, 1, 1));
        for bad in ["", "1/0", "a/2", "1/-2", "1 /2", "1/2+", "1/2+x*sqrt5", "--1", "1/2/3"] {
            assert!(bad.parse::<QSqrt5>().is_err(), "accepted {bad:?}");
        }
    }
}

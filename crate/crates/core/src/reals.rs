//! Exact rationals, Cauchy-sequence reals and the semidecidable sign test.
//!
//! A real is represented by a sequence `f : ℕ → ℚ` with
//! `-1 < m·(f_m - f_n) < 1` for all `m < n`. Its sign cannot be decided,
//! but it can be semidecided: [`is_positive`] returns a monotone sequence
//! that settles on `1` for positive reals, on `0` for negative reals, and
//! stays pending for zero. All arithmetic is exact.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::rc::Rc;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::seq::{Progress, Seq};

/// An exact rational number in lowest terms with positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    /// # Panics
    ///
    /// If `den` is zero.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        let den = den.into();
        assert!(!den.is_zero(), "zero denominator");
        Rational(BigRational::new(num.into(), den))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($tr::$method(self.0, rhs.0))
            }
        }

        impl<'a> $tr<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational($tr::$method(&self.0, &rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RationalParseError {
    #[error("empty rational")]
    Empty,
    #[error("invalid integer `{0}`")]
    InvalidInteger(String),
    #[error("denominator must be a positive integer, got `{0}`")]
    InvalidDenominator(String),
}

fn parse_digits(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// `p/q` or `p`, with an optional leading `-` and `q > 0`.
impl FromStr for Rational {
    type Err = RationalParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(RationalParseError::Empty);
        }
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let (num, den) = match body.split_once('/') {
            Some((p, q)) => (p, Some(q)),
            None => (body, None),
        };
        let num =
            parse_digits(num).ok_or_else(|| RationalParseError::InvalidInteger(s.to_string()))?;
        let num = if negative { -num } else { num };
        let den = match den {
            None => BigInt::from(1),
            Some(q) => match parse_digits(q) {
                Some(d) if !d.is_zero() => d,
                _ => return Err(RationalParseError::InvalidDenominator(q.to_string())),
            },
        };
        Ok(Rational::new(num, den))
    }
}

/// A Cauchy sequence of rationals, `-1 < m·(f_m - f_n) < 1` for `m < n`.
///
/// The condition is a contract of the caller; see [`CauchySeq::check_within`].
#[derive(Clone)]
pub struct CauchySeq(Rc<dyn Fn(usize) -> Rational>);

impl fmt::Debug for CauchySeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CauchySeq({}, {}, {}, ..)",
            self.approx(0),
            self.approx(1),
            self.approx(2)
        )
    }
}

impl CauchySeq {
    pub fn from_fn(f: impl Fn(usize) -> Rational + 'static) -> Self {
        CauchySeq(Rc::new(f))
    }

    pub fn constant(r: Rational) -> Self {
        Self::from_fn(move |_| r.clone())
    }

    pub fn approx(&self, n: usize) -> Rational {
        (self.0)(n)
    }

    /// Check the Cauchy condition on all pairs `m < n <= bound`. Returns the
    /// first failing pair.
    pub fn check_within(&self, bound: usize) -> Result<(), (usize, usize)> {
        let values: Vec<_> = (0..=bound).map(|n| self.approx(n)).collect();
        let one = Rational::from_integer(1);
        for m in 0..=bound {
            for n in m + 1..=bound {
                let d = Rational::from(m as i64) * (&values[m] - &values[n]);
                if d.abs() >= one {
                    return Err((m, n));
                }
            }
        }
        Ok(())
    }
}

/// Approximate sign: `-`, `?` or `+`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign3 {
    Minus,
    Query,
    Plus,
}

impl fmt::Display for Sign3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign3::Minus => "-",
            Sign3::Query => "?",
            Sign3::Plus => "+",
        })
    }
}

/// A binary digit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bit {
    Zero,
    One,
}

impl fmt::Display for Bit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Bit::Zero => "0",
            Bit::One => "1",
        })
    }
}

/// What `f_n` alone says about the sign: decide only if `|n·f_n| > 2`.
fn sign_hint(f: &CauchySeq, n: usize) -> Sign3 {
    if n == 0 {
        return Sign3::Query;
    }
    let scaled = Rational::from(n as i64) * f.approx(n);
    let two = Rational::from_integer(2);
    match scaled.cmp(&two) {
        Ordering::Greater => Sign3::Plus,
        _ if scaled < -two => Sign3::Minus,
        _ => Sign3::Query,
    }
}

/// The sign approximations `f̄_0, f̄_1, ...`.
///
/// `f̄_0 = ?`; a decided sign is kept forever; otherwise `f̄_n` is `-` if
/// `n·f_n < -2`, `+` if `n·f_n > 2`, and `?` in between (inclusive).
pub struct SignApprox {
    f: CauchySeq,
    n: usize,
    last: Sign3,
}

impl Iterator for SignApprox {
    type Item = Sign3;

    fn next(&mut self) -> Option<Sign3> {
        if self.last == Sign3::Query {
            self.last = sign_hint(&self.f, self.n);
        }
        self.n += 1;
        Some(self.last)
    }
}

pub fn sign_approx(f: &CauchySeq) -> SignApprox {
    SignApprox {
        f: f.clone(),
        n: 0,
        last: Sign3::Query,
    }
}

/// Semidecide the sign of `f`: `Done(One)` for positive, `Done(Zero)` for
/// negative, pending forever for zero.
pub fn is_positive(f: &CauchySeq) -> Seq<Bit> {
    let f = f.clone();
    // `from_fn` keeps the first decided entry, which is exactly the
    // recurrence of `sign_approx`.
    Seq::from_fn(move |n| match sign_hint(&f, n) {
        Sign3::Minus => Progress::Done(Bit::Zero),
        Sign3::Plus => Progress::Done(Bit::One),
        Sign3::Query => Progress::Pending,
    })
}

/// `-2 <= n·(f_n - g_n) <= 2` for every `n <= bound`.
pub fn equiv_within(f: &CauchySeq, g: &CauchySeq, bound: usize) -> bool {
    let two = Rational::from_integer(2);
    (0..=bound).all(|n| {
        let d = Rational::from(n as i64) * (f.approx(n) - g.approx(n));
        d.abs() <= two
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::{converges_within, Witness};

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p, d)
    }

    #[test]
    fn rational_parsing() {
        assert_eq!("3/4".parse::<Rational>().unwrap(), q(3, 4));
        assert_eq!("-1/1".parse::<Rational>().unwrap(), q(-1, 1));
        assert_eq!("6/4".parse::<Rational>().unwrap(), q(3, 2));
        assert_eq!("12".parse::<Rational>().unwrap(), q(12, 1));
        assert_eq!("0/7".parse::<Rational>().unwrap(), Rational::zero());
        for bad in ["", "1/0", "a", "1/-2", "--1", "+1", "1/", "/2", "1.5"] {
            assert!(bad.parse::<Rational>().is_err(), "{bad:?} should not parse");
        }
        assert_eq!(q(3, 2).to_string(), "3/2");
        assert_eq!(q(-4, 2).to_string(), "-2");
    }

    #[test]
    fn sign_approx_of_constants() {
        use Sign3::*;
        let one: Vec<_> = sign_approx(&CauchySeq::constant(q(1, 1))).take(6).collect();
        assert_eq!(one, [Query, Query, Query, Plus, Plus, Plus]);
        let zero: Vec<_> = sign_approx(&CauchySeq::constant(Rational::zero()))
            .take(200)
            .collect();
        assert!(zero.iter().all(|s| *s == Query));
        let minus: Vec<_> = sign_approx(&CauchySeq::constant(q(-1, 1)))
            .take(5)
            .collect();
        assert_eq!(minus, [Query, Query, Query, Minus, Minus]);
    }

    #[test]
    fn boundary_is_not_decided() {
        // n·f_n = 2 exactly at n = 2 and n = 4: stay undecided.
        let f = CauchySeq::constant(q(1, 2));
        let s: Vec<_> = sign_approx(&f).take(6).collect();
        assert_eq!(s[4], Sign3::Query);
        assert_eq!(s[5], Sign3::Plus);
    }

    #[test]
    fn decided_signs_stick() {
        // Not Cauchy, but the approximation must still never change its mind.
        let f = CauchySeq::from_fn(|n| if n == 3 { q(5, 1) } else { q(-5, 1) });
        let s: Vec<_> = sign_approx(&f).take(6).collect();
        assert_eq!(s[1], Sign3::Minus);
        assert!(s[1..].iter().all(|x| *x == Sign3::Minus));
    }

    #[test]
    fn is_positive_examples() {
        assert_eq!(
            converges_within(&is_positive(&CauchySeq::constant(q(1, 1))), 3),
            Some(Witness {
                value: Bit::One,
                index: 3
            })
        );
        assert_eq!(
            converges_within(&is_positive(&CauchySeq::constant(Rational::zero())), 1000),
            None
        );
        assert_eq!(
            converges_within(&is_positive(&CauchySeq::constant(q(-1, 1))), 3),
            Some(Witness {
                value: Bit::Zero,
                index: 3
            })
        );
    }

    #[test]
    fn is_positive_matches_sign_approx() {
        let fs = [
            CauchySeq::constant(q(2, 7)),
            CauchySeq::constant(q(-9, 4)),
            CauchySeq::from_fn(|n| q(1, n as i64 + 1)),
            CauchySeq::from_fn(|n| q(3, 1) - q(1, n as i64 + 1)),
        ];
        for f in &fs {
            let via_seq = is_positive(f).prefix(40);
            let via_recurrence: Vec<_> = sign_approx(f)
                .take(40)
                .map(|s| match s {
                    Sign3::Minus => Progress::Done(Bit::Zero),
                    Sign3::Plus => Progress::Done(Bit::One),
                    Sign3::Query => Progress::Pending,
                })
                .collect();
            assert_eq!(via_seq, via_recurrence);
        }
    }

    #[test]
    fn fuel_bound_for_positive_constants() {
        for (p, d) in [(1, 1), (1, 3), (7, 2), (2, 1), (1, 100), (5, 11)] {
            let r = q(p, d);
            let bound = (2 * d + p - 1) / p + 1;
            let w = converges_within(&is_positive(&CauchySeq::constant(r)), bound as usize);
            assert_eq!(w.map(|w| w.value), Some(Bit::One), "{p}/{d}");
        }
    }

    #[test]
    fn equivalence() {
        let f = CauchySeq::constant(q(1, 1));
        assert!(equiv_within(&f, &f, 50));
        let g = CauchySeq::from_fn(|n| q(1, 1) + q(1, n as i64 + 1));
        for bound in [0, 1, 10, 100] {
            assert!(equiv_within(&f, &g, bound));
        }
        let zero = CauchySeq::constant(Rational::zero());
        assert!(equiv_within(&zero, &f, 2));
        assert!(!equiv_within(&zero, &f, 3));
    }

    #[test]
    fn cauchy_contract_check() {
        assert!(CauchySeq::from_fn(|n| q(1, n as i64 + 1))
            .check_within(30)
            .is_ok());
        assert!(CauchySeq::constant(q(5, 3)).check_within(30).is_ok());
        assert_eq!(
            CauchySeq::from_fn(|n| q(n as i64, 1)).check_within(5),
            Err((1, 2))
        );
    }
}

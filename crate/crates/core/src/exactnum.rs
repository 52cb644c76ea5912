//! Exact arbitrary-precision rationals and ordered quadratic irrationals.
//!
//! Every predicate in this crate is decided here, in exact arithmetic.
//! Floating point never enters a decision path: slopes, discriminants and
//! wall radii are rationals, and the handful of genuinely irrational
//! quantities (the roots `β±` of the zero-slope equation) are numbers of
//! the form `p + q*sqrt(d)` with rational `p`, `q`, `d`, compared by case
//! analysis and sign-tracked squaring.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

/// Exact rational number, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Shorthand for an integer rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for the fraction `n/d`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"a"` or `"a/b"` (ASCII, no whitespace).
pub fn parse_rational(s: &str) -> Result<Rational, ExactNumError> {
    Rational::from_str(s).map_err(|_| ExactNumError::BadRational(s.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactNumError {
    #[error("negative radicand: sqrt({0}) is not real")]
    NegativeRadicand(Rational),
    #[error("not a rational number: {0:?}")]
    BadRational(String),
}

/// Integer square root if `n` is a perfect square.
fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Rational square root if `x` is a perfect square of a rational.
fn rational_sqrt(x: &Rational) -> Option<Rational> {
    let n = exact_sqrt(x.numer())?;
    let d = exact_sqrt(x.denom())?;
    Some(Rational::new(n, d))
}

/// The real number `p + q*sqrt(d)`, canonicalized so that `q = 0, d = 0`
/// whenever the value is rational.
///
/// Radicands are not reduced to squarefree form; equality and ordering are
/// value-based (two representations of the same real compare equal), so
/// `2 + sqrt(8)` and `2 + 2*sqrt(2)` are equal.
#[derive(Debug, Clone)]
pub struct QuadraticValue {
    p: Rational,
    q: Rational,
    d: Rational,
}

impl QuadraticValue {
    /// Builds `p + q*sqrt(d)`. Fails on `d < 0`.
    pub fn new(p: Rational, q: Rational, d: Rational) -> Result<Self, ExactNumError> {
        if d.is_negative() {
            return Err(ExactNumError::NegativeRadicand(d));
        }
        let mut v = QuadraticValue { p, q, d };
        v.canonicalize();
        Ok(v)
    }

    pub fn from_rational(p: Rational) -> Self {
        QuadraticValue { p, q: Rational::zero(), d: Rational::zero() }
    }

    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    fn canonicalize(&mut self) {
        if self.q.is_zero() || self.d.is_zero() {
            self.q = Rational::zero();
            self.d = Rational::zero();
        } else if let Some(s) = rational_sqrt(&self.d) {
            self.p += &self.q * s;
            self.q = Rational::zero();
            self.d = Rational::zero();
        }
    }

    pub fn rational_part(&self) -> &Rational {
        &self.p
    }

    pub fn surd_coefficient(&self) -> &Rational {
        &self.q
    }

    pub fn radicand(&self) -> &Rational {
        &self.d
    }

    /// The value as a rational, if it is one.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.q.is_zero().then_some(&self.p)
    }

    /// Exact sign of `p + q*sqrt(d)`: `-1`, `0` or `+1`.
    pub fn sign(&self) -> i32 {
        let sp = rational_signum(&self.p);
        if self.q.is_zero() {
            return sp;
        }
        let sq = rational_signum(&self.q);
        if sp == 0 {
            return sq;
        }
        if sp == sq {
            return sp;
        }
        // Opposite signs: the comparison |p| vs |q|*sqrt(d) rationalizes
        // to p^2 vs q^2*d.
        let t = rational_signum(&(&self.p * &self.p - &self.q * &self.q * &self.d));
        if sp > 0 {
            t
        } else {
            -t
        }
    }

    /// Exact difference sign against another value, allowing distinct
    /// radicands. Two radicands are removed one at a time by squaring,
    /// tracking signs so the squaring is order-faithful.
    fn cmp_sign(&self, other: &QuadraticValue) -> i32 {
        if self.d == other.d || other.q.is_zero() {
            let mut diff = QuadraticValue {
                p: &self.p - &other.p,
                q: &self.q - &other.q,
                d: self.d.clone(),
            };
            diff.canonicalize();
            return diff.sign();
        }
        if self.q.is_zero() {
            return -other.cmp_sign(self);
        }
        // self - other = u - v with u = (p1-p2) + q1*sqrt(d1), v = q2*sqrt(d2).
        let u = QuadraticValue {
            p: &self.p - &other.p,
            q: self.q.clone(),
            d: self.d.clone(),
        };
        let v = QuadraticValue {
            p: Rational::zero(),
            q: other.q.clone(),
            d: other.d.clone(),
        };
        let su = u.sign();
        let sv = v.sign();
        if su == 0 {
            return -sv;
        }
        if su != sv {
            return su;
        }
        // Same nonzero sign: compare squares. u^2 has radicand d1 only,
        // v^2 is rational.
        let u_sq = QuadraticValue::new(
            &u.p * &u.p + &u.q * &u.q * &u.d,
            rat(2) * &u.p * &u.q,
            u.d.clone(),
        )
        .expect("nonnegative radicand preserved");
        let v_sq = QuadraticValue::from_rational(&v.q * &v.q * &v.d);
        let t = u_sq.cmp_sign(&v_sq);
        if su > 0 {
            t
        } else {
            -t
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign() == 0
    }

    /// `self + other`; both values must carry the same radicand (or be
    /// rational).
    pub fn checked_add(&self, other: &QuadraticValue) -> Option<QuadraticValue> {
        let d = self.common_radicand(other)?;
        QuadraticValue::new(&self.p + &other.p, &self.q + &other.q, d).ok()
    }

    /// `self * other` in the quadratic field `Q(sqrt(d))`.
    pub fn checked_mul(&self, other: &QuadraticValue) -> Option<QuadraticValue> {
        let d = self.common_radicand(other)?;
        QuadraticValue::new(
            &self.p * &other.p + &self.q * &other.q * &d,
            &self.p * &other.q + &self.q * &other.p,
            d,
        )
        .ok()
    }

    fn common_radicand(&self, other: &QuadraticValue) -> Option<Rational> {
        if self.q.is_zero() {
            Some(other.d.clone())
        } else if other.q.is_zero() || self.d == other.d {
            Some(self.d.clone())
        } else {
            None
        }
    }

    pub fn scale(&self, c: &Rational) -> QuadraticValue {
        let mut v = QuadraticValue {
            p: &self.p * c,
            q: &self.q * c,
            d: self.d.clone(),
        };
        v.canonicalize();
        v
    }

    pub fn add_rational(&self, c: &Rational) -> QuadraticValue {
        QuadraticValue {
            p: &self.p + c,
            q: self.q.clone(),
            d: self.d.clone(),
        }
    }

    pub fn neg(&self) -> QuadraticValue {
        self.scale(&rat(-1))
    }
}

fn rational_signum(x: &Rational) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

impl PartialEq for QuadraticValue {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_sign(other) == 0
    }
}

impl Eq for QuadraticValue {}

impl PartialOrd for QuadraticValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadraticValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.cmp_sign(other) {
            s if s < 0 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

impl fmt::Display for QuadraticValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            return write!(f, "{}", self.p);
        }
        if self.q.is_negative() {
            write!(f, "{} - {}*sqrt({})", self.p, -&self.q, self.d)
        } else {
            write!(f, "{} + {}*sqrt({})", self.p, self.q, self.d)
        }
    }
}

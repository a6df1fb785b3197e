//! Exact scalars: rational numbers optionally extended by one square root.
//!
//! Every value is either a `BigRational` or `a + b*sqrt(d)` with `a, b`
//! rational, `b != 0`, and `d` a squarefree integer `>= 2`.  A computation
//! works inside a single extension `Q(sqrt d)`: combining values that carry
//! different radicands is an error ([`ScalarError::MixedRadicands`]).  The
//! only operation that introduces a radicand is [`Scalar::sqrt`].

use num::bigint::{BigInt, BigUint};
use num::traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// Arbitrary precision rational, the base field.
pub type Rat = num::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("values carry different radicands and cannot be combined")]
    MixedRadicands,
    #[error("square root of a negative value")]
    SqrtOfNegative,
    #[error("value has no square root in the current field")]
    NotASquareInField,
}

/// An exact real scalar in `Q` or `Q(sqrt d)`.
///
/// The representation is normalised: a quadratic value always has a nonzero
/// irrational part, so structural equality coincides with equality of real
/// numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scalar {
    Rational(Rat),
    /// `a + b*sqrt(d)` with `b != 0` and `d` squarefree, `d >= 2`.
    Quadratic { a: Rat, b: Rat, d: u64 },
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(Rat::zero())
    }

    pub fn one() -> Self {
        Scalar::Rational(Rat::one())
    }

    pub fn int(n: i64) -> Self {
        Scalar::Rational(Rat::from_integer(BigInt::from(n)))
    }

    /// The rational `p/q`.  Panics if `q == 0`.
    pub fn rat(p: i64, q: i64) -> Self {
        Scalar::Rational(Rat::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn from_rat(r: Rat) -> Self {
        Scalar::Rational(r)
    }

    /// Builds `a + b*sqrt(d)`, normalising `b == 0` down to a rational.
    /// `d` must already be squarefree and `>= 2`.
    pub fn quadratic(a: Rat, b: Rat, d: u64) -> Self {
        debug_assert!(d >= 2, "radicand must be at least 2");
        if b.is_zero() {
            Scalar::Rational(a)
        } else {
            Scalar::Quadratic { a, b, d }
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_one())
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Scalar::Rational(_))
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Quadratic { .. } => None,
        }
    }

    /// The radicand this value carries, if any.
    pub fn radicand(&self) -> Option<u64> {
        match self {
            Scalar::Rational(_) => None,
            Scalar::Quadratic { d, .. } => Some(*d),
        }
    }

    /// True when the two values can live in one field `Q(sqrt d)`.
    pub fn compatible(&self, other: &Scalar) -> bool {
        match (self.radicand(), other.radicand()) {
            (Some(d1), Some(d2)) => d1 == d2,
            _ => true,
        }
    }

    fn parts(&self, d: u64) -> (Rat, Rat) {
        match self {
            Scalar::Rational(r) => (r.clone(), Rat::zero()),
            Scalar::Quadratic { a, b, d: dd } => {
                debug_assert_eq!(*dd, d);
                (a.clone(), b.clone())
            }
        }
    }

    fn joint_radicand(&self, other: &Scalar) -> Result<Option<u64>, ScalarError> {
        match (self.radicand(), other.radicand()) {
            (None, None) => Ok(None),
            (Some(d), None) | (None, Some(d)) => Ok(Some(d)),
            (Some(d1), Some(d2)) => {
                if d1 == d2 {
                    Ok(Some(d1))
                } else {
                    Err(ScalarError::MixedRadicands)
                }
            }
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        match self.joint_radicand(other)? {
            None => {
                let (x, y) = (self.as_rational().unwrap(), other.as_rational().unwrap());
                Ok(Scalar::Rational(x + y))
            }
            Some(d) => {
                let (a1, b1) = self.parts(d);
                let (a2, b2) = other.parts(d);
                Ok(Scalar::quadratic(a1 + a2, b1 + b2, d))
            }
        }
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.try_add(&other.checked_neg())
    }

    fn checked_neg(&self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Quadratic { a, b, d } => Scalar::Quadratic {
                a: -a,
                b: -b,
                d: *d,
            },
        }
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        match self.joint_radicand(other)? {
            None => {
                let (x, y) = (self.as_rational().unwrap(), other.as_rational().unwrap());
                Ok(Scalar::Rational(x * y))
            }
            Some(d) => {
                let (a1, b1) = self.parts(d);
                let (a2, b2) = other.parts(d);
                let dd = Rat::from_integer(BigInt::from(d));
                let a = &a1 * &a2 + &dd * &b1 * &b2;
                let b = &a1 * &b2 + &a2 * &b1;
                Ok(Scalar::quadratic(a, b, d))
            }
        }
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.try_mul(&other.try_inv()?)
    }

    /// Multiplicative inverse.
    pub fn try_inv(&self) -> Result<Scalar, ScalarError> {
        match self {
            Scalar::Rational(r) => {
                if r.is_zero() {
                    Err(ScalarError::DivisionByZero)
                } else {
                    Ok(Scalar::Rational(r.recip()))
                }
            }
            Scalar::Quadratic { a, b, d } => {
                // 1/(a + b sqrt d) = (a - b sqrt d) / (a^2 - d b^2); the norm
                // is nonzero because sqrt d is irrational and b != 0.
                let dd = Rat::from_integer(BigInt::from(*d));
                let n = a * a - &dd * b * b;
                debug_assert!(!n.is_zero());
                Ok(Scalar::quadratic(a / &n, -(b / &n), *d))
            }
        }
    }

    /// Integer power; negative exponents invert first.
    pub fn try_pow(&self, e: i64) -> Result<Scalar, ScalarError> {
        let base = if e < 0 { self.try_inv()? } else { self.clone() };
        let mut acc = Scalar::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.try_mul(&base)?;
        }
        Ok(acc)
    }

    /// Sign of the value as a real number: -1, 0, or +1.
    pub fn sign(&self) -> i32 {
        match self {
            Scalar::Rational(r) => {
                if r.is_zero() {
                    0
                } else if r.is_positive() {
                    1
                } else {
                    -1
                }
            }
            Scalar::Quadratic { a, b, d } => {
                // b != 0 here, so the value is irrational and never zero.
                let sa = rat_sign(a);
                let sb = rat_sign(b);
                if sa == 0 {
                    return sb;
                }
                if sa == sb {
                    return sa;
                }
                // Signs differ: compare |a| against |b| sqrt(d) via squares.
                let dd = Rat::from_integer(BigInt::from(*d));
                let lhs = a * a;
                let rhs = &dd * b * b;
                match lhs.cmp(&rhs) {
                    Ordering::Greater => sa,
                    Ordering::Less => sb,
                    // a^2 = d b^2 would make sqrt(d) rational.
                    Ordering::Equal => unreachable!("radicand is not a perfect square"),
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    pub fn abs(&self) -> Scalar {
        if self.is_negative() {
            self.checked_neg()
        } else {
            self.clone()
        }
    }

    /// Total order as real numbers.  Fails when the two values carry
    /// different radicands.
    pub fn cmp_real(&self, other: &Scalar) -> Result<Ordering, ScalarError> {
        let diff = self.try_sub(other)?;
        Ok(match diff.sign() {
            0 => Ordering::Equal,
            s if s > 0 => Ordering::Greater,
            _ => Ordering::Less,
        })
    }

    /// Exact nonnegative square root, when one exists in the tower.
    ///
    /// For a rational argument the root is rewritten as `s*sqrt(d)/q` with
    /// `d` squarefree, so the result either stays rational or opens the
    /// radicand `d`.  For an argument already in `Q(sqrt d)` the root must
    /// exist in that same field; otherwise [`ScalarError::NotASquareInField`].
    pub fn sqrt(&self) -> Result<Scalar, ScalarError> {
        if self.is_negative() {
            return Err(ScalarError::SqrtOfNegative);
        }
        match self {
            Scalar::Rational(r) => {
                if r.is_zero() {
                    return Ok(Scalar::zero());
                }
                // sqrt(p/q) = sqrt(p*q)/q with p, q > 0 coprime.
                let p = r.numer().magnitude().clone();
                let q = r.denom().magnitude().clone();
                let n = &p * &q;
                let (s, d) = squarefree_split(&n);
                let coeff = Rat::new(BigInt::from(s), BigInt::from(q));
                if d.is_one() {
                    Ok(Scalar::Rational(coeff))
                } else {
                    let d = d
                        .to_u64()
                        .expect("radicand exceeds the supported magnitude");
                    Ok(Scalar::quadratic(Rat::zero(), coeff, d))
                }
            }
            Scalar::Quadratic { a, b, d } => {
                // Candidate root u + v sqrt(d): then u^2 + d v^2 = a and
                // 2uv = b, so (u^2) satisfies t^2 - a t + d b^2/4 = 0 and
                // u^2 = (a +- N)/2 where N = sqrt(a^2 - d b^2) must be
                // rational.
                let dd = Rat::from_integer(BigInt::from(*d));
                let norm = a * a - &dd * b * b;
                let n = rat_sqrt(&norm).ok_or(ScalarError::NotASquareInField)?;
                for cand in [(a + &n) / Rat::from_integer(BigInt::from(2)),
                             (a - &n) / Rat::from_integer(BigInt::from(2))] {
                    if let Some(u) = rat_sqrt(&cand) {
                        if u.is_zero() {
                            continue;
                        }
                        let v = b / (Rat::from_integer(BigInt::from(2)) * &u);
                        let root = Scalar::quadratic(u, v, *d);
                        if root.try_mul(&root).unwrap() == *self {
                            return Ok(if root.is_negative() {
                                root.checked_neg()
                            } else {
                                root
                            });
                        }
                    }
                }
                Err(ScalarError::NotASquareInField)
            }
        }
    }

    /// Closest double, for the floating point cross-check.
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Quadratic { a, b, d } => {
                a.to_f64().unwrap_or(f64::NAN)
                    + b.to_f64().unwrap_or(f64::NAN) * (*d as f64).sqrt()
            }
        }
    }
}

fn rat_sign(r: &Rat) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Exact square root of a rational, when it is a perfect square.
pub fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    if r.is_zero() {
        return Some(Rat::zero());
    }
    let p = r.numer().magnitude();
    let q = r.denom().magnitude();
    let sp = p.sqrt();
    let sq = q.sqrt();
    if &(&sp * &sp) == p && &(&sq * &sq) == q {
        Some(Rat::new(BigInt::from(sp), BigInt::from(sq)))
    } else {
        None
    }
}

/// Writes `n = s^2 * d` with `d` squarefree; returns `(s, d)`.
fn squarefree_split(n: &BigUint) -> (BigUint, BigUint) {
    let mut rem = n.clone();
    let mut s = BigUint::one();
    let mut d = BigUint::one();
    let mut f = BigUint::from(2u32);
    let two = BigUint::from(2u32);
    while &(&f * &f) <= &rem {
        let mut e = 0u32;
        while (&rem % &f).is_zero() {
            rem /= &f;
            e += 1;
        }
        if e > 0 {
            s *= f.pow(e / 2);
            if e % 2 == 1 {
                d *= &f;
            }
        }
        f = if f == two { BigUint::from(3u32) } else { f + &two };
    }
    if !rem.is_one() {
        // The remaining cofactor is prime: every factor up to its square
        // root has been removed.
        d *= &rem;
    }
    (s, d)
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl From<Rat> for Scalar {
    fn from(r: Rat) -> Self {
        Scalar::Rational(r)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn radical(f: &mut fmt::Formatter<'_>, b: &Rat, d: u64) -> fmt::Result {
            if b.is_one() {
                write!(f, "sqrt({d})")
            } else {
                write!(f, "{b}*sqrt({d})")
            }
        }
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::Quadratic { a, b, d } => {
                if a.is_zero() {
                    if b.is_negative() {
                        write!(f, "-")?;
                        radical(f, &-b, *d)
                    } else {
                        radical(f, b, *d)
                    }
                } else {
                    write!(f, "{a}")?;
                    if b.is_negative() {
                        write!(f, "-")?;
                        radical(f, &-b, *d)
                    } else {
                        write!(f, "+")?;
                        radical(f, b, *d)
                    }
                }
            }
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

// Operator sugar.  Model validation guarantees that all scalars flowing
// through a computation share one radicand, so the panicking operators are
// used internally after that check; fallible call sites use the try_ forms.
macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident, $msg:expr) => {
        impl $trait for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs).expect($msg)
            }
        }
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add, "scalar addition mixed radicands");
binop!(Sub, sub, try_sub, "scalar subtraction mixed radicands");
binop!(Mul, mul, try_mul, "scalar multiplication mixed radicands");
binop!(Div, div, try_div, "scalar division failed");

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.checked_neg()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.checked_neg()
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, q_: i64) -> Scalar {
        Scalar::rat(p, q_)
    }

    #[test]
    fn rational_arithmetic() {
        let x = q(3, 2);
        let y = q(-1, 3);
        assert_eq!(&x + &y, q(7, 6));
        assert_eq!(&x * &y, q(-1, 2));
        assert_eq!(&x / &y, q(-9, 2));
        assert_eq!(-&x, q(-3, 2));
        assert!(q(0, 1).is_zero());
        assert_eq!(
            q(1, 1).try_div(&Scalar::zero()),
            Err(ScalarError::DivisionByZero)
        );
    }

    #[test]
    fn sqrt_of_rationals() {
        assert_eq!(Scalar::int(9).sqrt().unwrap(), Scalar::int(3));
        assert_eq!(q(9, 4).sqrt().unwrap(), q(3, 2));
        // sqrt(8) = 2*sqrt(2)
        let r = Scalar::int(8).sqrt().unwrap();
        assert_eq!(
            r,
            Scalar::quadratic(Rat::zero(), Rat::from_integer(2.into()), 2)
        );
        // sqrt(1/2) = (1/2)*sqrt(2)
        let h = q(1, 2).sqrt().unwrap();
        assert_eq!(
            h,
            Scalar::quadratic(Rat::zero(), Rat::new(1.into(), 2.into()), 2)
        );
        assert_eq!(q(-1, 4).sqrt(), Err(ScalarError::SqrtOfNegative));
        assert_eq!(Scalar::zero().sqrt().unwrap(), Scalar::zero());
        // sqrt(12) = 2*sqrt(3)
        let t = Scalar::int(12).sqrt().unwrap();
        assert_eq!(
            t,
            Scalar::quadratic(Rat::zero(), Rat::from_integer(2.into()), 3)
        );
    }

    #[test]
    fn sqrt_inside_extension() {
        // sqrt(3 + 2 sqrt 2) = 1 + sqrt 2
        let x = Scalar::quadratic(Rat::from_integer(3.into()), Rat::from_integer(2.into()), 2);
        let r = x.sqrt().unwrap();
        assert_eq!(
            r,
            Scalar::quadratic(Rat::one(), Rat::one(), 2)
        );
        assert_eq!(r.try_mul(&r).unwrap(), x);
        // 1 + sqrt 2 is positive but not a square in Q(sqrt 2).
        let y = Scalar::quadratic(Rat::one(), Rat::one(), 2);
        assert_eq!(y.sqrt(), Err(ScalarError::NotASquareInField));
        // 2 - sqrt 2 > 0, norm 2 is not a rational square.
        let z = Scalar::quadratic(Rat::from_integer(2.into()), Rat::from_integer((-1).into()), 2);
        assert_eq!(z.sqrt(), Err(ScalarError::NotASquareInField));
    }

    #[test]
    fn extension_arithmetic_and_normalisation() {
        let s2 = Scalar::int(2).sqrt().unwrap();
        // (1 + sqrt 2)(1 - sqrt 2) = -1, radicand closes.
        let p = (Scalar::one() + &s2) * (Scalar::one() - &s2);
        assert_eq!(p, Scalar::int(-1));
        // (sqrt 2)^2 = 2
        assert_eq!(s2.try_pow(2).unwrap(), Scalar::int(2));
        assert_eq!(s2.try_pow(-2).unwrap(), q(1, 2));
        // inverse of 1 + sqrt 2 is -1 + sqrt 2
        let inv = (Scalar::one() + &s2).try_inv().unwrap();
        assert_eq!(inv, Scalar::quadratic(Rat::from_integer((-1).into()), Rat::one(), 2));
    }

    #[test]
    fn mixed_radicands_are_rejected() {
        let s2 = Scalar::int(2).sqrt().unwrap();
        let s3 = Scalar::int(3).sqrt().unwrap();
        assert_eq!(s2.try_add(&s3), Err(ScalarError::MixedRadicands));
        assert_eq!(s2.try_mul(&s3), Err(ScalarError::MixedRadicands));
        assert!(!s2.compatible(&s3));
        assert!(s2.compatible(&Scalar::int(5)));
    }

    #[test]
    fn signs_and_ordering() {
        let s2 = Scalar::int(2).sqrt().unwrap();
        // 3 - sqrt 2 > 0, 1 - sqrt 2 < 0
        let x = Scalar::int(3) - &s2;
        assert_eq!(x.sign(), 1);
        let y = Scalar::one() - &s2;
        assert_eq!(y.sign(), -1);
        assert_eq!((-&s2).sign(), -1);
        assert_eq!(Scalar::zero().sign(), 0);
        assert_eq!(x.cmp_real(&y).unwrap(), Ordering::Greater);
        assert_eq!(s2.cmp_real(&q(3, 2)).unwrap(), Ordering::Less);
        assert_eq!(s2.cmp_real(&q(7, 5)).unwrap(), Ordering::Greater);
        assert_eq!(x.abs(), x);
        assert_eq!(y.abs(), s2 - Scalar::one());
    }

    #[test]
    fn display_forms() {
        assert_eq!(Scalar::rat(3, 2).to_string(), "3/2");
        assert_eq!(Scalar::int(-4).to_string(), "-4");
        let s2 = Scalar::int(2).sqrt().unwrap();
        assert_eq!(s2.to_string(), "sqrt(2)");
        assert_eq!((q(1, 4) * &s2).to_string(), "1/4*sqrt(2)");
        assert_eq!((q(3, 2) + q(1, 4) * &s2).to_string(), "3/2+1/4*sqrt(2)");
        assert_eq!((q(3, 2) - q(1, 4) * &s2).to_string(), "3/2-1/4*sqrt(2)");
        assert_eq!((-&s2).to_string(), "-sqrt(2)");
    }

    #[test]
    fn float_images() {
        let s2 = Scalar::int(2).sqrt().unwrap();
        assert!((s2.to_f64() - 1.4142135623730951).abs() < 1e-15);
        assert!(((q(3, 2) + &s2).to_f64() - (1.5 + 1.4142135623730951)).abs() < 1e-15);
    }
}

//! Scalar fields the algebra is generic over.
//!
//! Everything in this crate is a polynomial identity in the structure
//! constants, so the intended field is [`Rat`]. Floating point types satisfy
//! the same trait for quick numerical experiments, and [`Dual`] adjoins a
//! nilpotent `ε` (with `ε² = 0`) for first-order derivatives of tensors.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rat = BigRational;

/// The operations the algebra needs from its scalars.
///
/// Division is never required except by small integer constants, which are
/// folded into [`Scalar::frac`].
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// The scalar `p / q`. Panics if `q == 0`.
    fn frac(p: i64, q: i64) -> Self;

    fn int(p: i64) -> Self {
        Self::frac(p, 1)
    }
}

impl Scalar for BigRational {
    fn frac(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }
}

impl Scalar for f64 {
    fn frac(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        p as f64 / q as f64
    }
}

impl Scalar for f32 {
    fn frac(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        p as f32 / q as f32
    }
}

/// Parses `"p"` or `"p/q"` (optional leading `-`, decimal digits only).
///
/// Decimal points, exponents and whitespace are rejected so that every
/// accepted string denotes exactly one rational.
pub fn parse_rat(text: &str) -> Option<Rat> {
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    let num_body = num.strip_prefix('-').unwrap_or(num);
    if !digits(num_body) {
        return None;
    }
    let numer: BigInt = num.parse().ok()?;
    let denom: BigInt = match den {
        Some(d) if digits(d) => d.parse().ok()?,
        Some(_) => return None,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return None;
    }
    Some(BigRational::new(numer, denom))
}

/// Formats a rational as `"p"` or `"p/q"`, the inverse of [`parse_rat`].
pub fn format_rat(value: &Rat) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// First-order dual number `re + eps·ε` with `ε² = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dual<T> {
    pub re: T,
    pub eps: T,
}

impl<T: Scalar> Dual<T> {
    pub fn new(re: T, eps: T) -> Self {
        Self { re, eps }
    }

    pub fn real(re: T) -> Self {
        Self { re, eps: T::zero() }
    }
}

impl<T: Scalar> fmt::Display for Dual<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}ε", self.re, self.eps)
    }
}

impl<T: Scalar> Add for Dual<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.eps + rhs.eps)
    }
}

impl<T: Scalar> Sub for Dual<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.eps - rhs.eps)
    }
}

impl<T: Scalar> Mul for Dual<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let eps = self.re.clone() * rhs.eps + self.eps * rhs.re.clone();
        Self::new(self.re * rhs.re, eps)
    }
}

impl<T: Scalar> Neg for Dual<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.eps)
    }
}

impl<T: Scalar> Zero for Dual<T> {
    fn zero() -> Self {
        Self::new(T::zero(), T::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.eps.is_zero()
    }
}

impl<T: Scalar> One for Dual<T> {
    fn one() -> Self {
        Self::real(T::one())
    }
}

impl<T: Scalar> Scalar for Dual<T> {
    fn frac(p: i64, q: i64) -> Self {
        Self::real(T::frac(p, q))
    }
}

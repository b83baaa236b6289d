//! Minimal field abstraction shared by the float, double-double, exact rational
//! and interval code paths, plus a dense univariate polynomial over it.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use twofloat::TwoFloat;

pub trait Scalar:
    Clone
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(n: i64) -> Self;

    /// `None` when the divisor is zero or (for intervals) may be zero.
    fn checked_div(&self, rhs: &Self) -> Option<Self>;

    /// Sign of the value; `None` when it cannot be decided.
    fn sign(&self) -> Option<Ordering>;

    /// True only for a structurally exact zero.
    fn is_exact_zero(&self) -> bool;

    fn approx_f64(&self) -> f64;

    fn zero() -> Self {
        Self::from_i64(0)
    }

    fn one() -> Self {
        Self::from_i64(1)
    }
}

impl Scalar for f64 {
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        (*rhs != 0.0).then(|| self / rhs)
    }
    fn sign(&self) -> Option<Ordering> {
        self.partial_cmp(&0.0)
    }
    fn is_exact_zero(&self) -> bool {
        *self == 0.0
    }
    fn approx_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for TwoFloat {
    fn from_i64(n: i64) -> Self {
        TwoFloat::from(n as f64)
    }
    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        (rhs.hi() != 0.0).then(|| dd_div(*self, *rhs))
    }
    fn sign(&self) -> Option<Ordering> {
        self.hi().partial_cmp(&0.0)
    }
    fn is_exact_zero(&self) -> bool {
        self.hi() == 0.0 && self.lo() == 0.0
    }
    fn approx_f64(&self) -> f64 {
        self.hi() + self.lo()
    }
}

/// Double-double quotient by long division with two correction steps.
/// `TwoFloat`'s own division is accurate only to about one double.
fn dd_div(a: TwoFloat, b: TwoFloat) -> TwoFloat {
    let q1 = a.hi() / b.hi();
    let r = a - b * q1;
    let q2 = r.hi() / b.hi();
    let r = r - b * q2;
    let q3 = r.hi() / b.hi();
    TwoFloat::new_add(q1, q2) + q3
}

impl Scalar for BigRational {
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        (!rhs.is_zero()).then(|| self / rhs)
    }
    fn sign(&self) -> Option<Ordering> {
        Some(if self.is_zero() {
            Ordering::Equal
        } else if self.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        })
    }
    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }
    fn approx_f64(&self) -> f64 {
        rational_to_f64(self)
    }
}

/// Nearest-ish double of a big rational (exact enough for reporting).
pub fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let n = r.numer().bits() as i64;
    let d = r.denom().bits() as i64;
    let shift = 60 - (n - d);
    let scaled = if shift >= 0 {
        (r.numer() << shift as usize) / r.denom()
    } else {
        r.numer() / (r.denom() << (-shift) as usize)
    };
    scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-shift as i32)
}

/// Dense polynomial with ascending coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    pub fn new(coeffs: Vec<T>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `t`.
    pub fn x() -> Self {
        Self::new(vec![T::zero(), T::one()])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_exact_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn eval(&self, t: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.clone() * T::from_i64(i as i64))
            .collect();
        Self::new(coeffs)
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    /// Divide by `t^n`; fails unless the `n` lowest coefficients are exact zeros.
    pub fn shift_down(&self, n: usize) -> Option<Self> {
        if self.coeffs.iter().take(n).any(|c| !c.is_exact_zero()) {
            return None;
        }
        Some(Self::new(self.coeffs.iter().skip(n).cloned().collect()))
    }

    /// Remainder of Euclidean division. The eliminated leading terms are
    /// dropped structurally so interval coefficients do not leave spurious
    /// zero-straddling tails. Returns `None` if the divisor is zero or its
    /// leading coefficient sign cannot be decided.
    pub fn rem(&self, divisor: &Self) -> Option<Self> {
        let lead = divisor.leading()?;
        lead.sign().filter(|s| *s != Ordering::Equal)?;
        let dd = divisor.degree();
        let mut r = self.coeffs.clone();
        while r.len() > dd && !r.is_empty() {
            let top = r.len() - 1;
            let factor = r[top].checked_div(lead)?;
            let shift = top - dd;
            for (i, c) in divisor.coeffs.iter().enumerate().take(dd) {
                r[shift + i] = r[shift + i].clone() - factor.clone() * c.clone();
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_exact_zero()) {
                r.pop();
            }
        }
        Some(Self::new(r))
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<T: Scalar> Add for Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let c = (0..n)
            .map(|i| match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => a.clone() + b.clone(),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Poly::new(c)
    }
}

impl<T: Scalar> Neg for Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Self {
        Poly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl<T: Scalar> Sub for Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: Scalar> Mul for Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Poly::new(vec![]);
        }
        let mut c = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] = c[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(c)
    }
}

/// Polynomials form a ring; division is not needed by callers that use
/// `Poly` as a scalar (e.g. substituting a parabola into a bivariate form).
impl<T: Scalar> Scalar for Poly<T> {
    fn from_i64(n: i64) -> Self {
        Poly::constant(T::from_i64(n))
    }
    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.degree() == 0 && !rhs.is_zero() {
            let c = &rhs.coeffs[0];
            let coeffs = self
                .coeffs
                .iter()
                .map(|a| a.checked_div(c))
                .collect::<Option<Vec<_>>>()?;
            Some(Poly::new(coeffs))
        } else {
            None
        }
    }
    fn sign(&self) -> Option<Ordering> {
        if self.is_zero() {
            Some(Ordering::Equal)
        } else if self.degree() == 0 {
            self.coeffs[0].sign()
        } else {
            None
        }
    }
    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }
    fn approx_f64(&self) -> f64 {
        self.coeffs.first().map_or(0.0, T::approx_f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_i64(n)
    }

    #[test]
    fn remainder_matches_hand_division() {
        // (t^3 - 2t + 1) mod (t - 1) = 0; mod (t^2 + 1) = -3t + 1
        let p = Poly::new(vec![q(1), q(-2), q(0), q(1)]);
        assert!(p.rem(&Poly::new(vec![q(-1), q(1)])).unwrap().is_zero());
        let r = p.rem(&Poly::new(vec![q(1), q(0), q(1)])).unwrap();
        assert_eq!(r, Poly::new(vec![q(1), q(-3)]));
    }

    #[test]
    fn shift_down_requires_zero_tail() {
        let p = Poly::new(vec![0.0, 0.0, 3.0, 1.0]);
        assert_eq!(p.shift_down(2).unwrap().coeffs(), &[3.0, 1.0]);
        assert!(p.shift_down(3).is_none());
    }

    #[test]
    fn double_double_division() {
        let third = TwoFloat::from(1.0).checked_div(&TwoFloat::from(3.0)).unwrap();
        let back = third * TwoFloat::from(3.0) - TwoFloat::from(1.0);
        assert!(back.hi().abs() < 1e-31);
        let a = TwoFloat::new_add(0.7, 1e-20);
        let b = TwoFloat::new_add(1.3, -3e-19);
        let q = a.checked_div(&b).unwrap();
        let r = q * b - a;
        assert!(r.hi().abs() < 1e-31);
    }

    #[test]
    fn product_and_derivative() {
        let a = Poly::new(vec![1.0, 1.0]);
        let sq = a.clone() * a;
        assert_eq!(sq.coeffs(), &[1.0, 2.0, 1.0]);
        assert_eq!(sq.derivative().coeffs(), &[2.0, 2.0]);
        assert_eq!(sq.eval(&2.0), 9.0);
    }
}

//! Exact arithmetic in the quadratic field Q(√5), which contains the golden
//! ratio and every coordinate of the icosahedral configurations used here.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::interval::Interval;
use crate::scalar::{rational_to_f64, Scalar};

/// `a + b√5` with rational `a`, `b`.
#[derive(Clone, PartialEq, Eq)]
pub struct QSqrt5 {
    pub a: BigRational,
    pub b: BigRational,
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl fmt::Debug for QSqrt5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}√5", self.a, self.b)
    }
}

impl QSqrt5 {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        QSqrt5 { a, b }
    }

    pub fn from_ratios(an: i64, ad: i64, bn: i64, bd: i64) -> Self {
        QSqrt5 { a: q(an, ad), b: q(bn, bd) }
    }

    pub fn rational(r: BigRational) -> Self {
        QSqrt5 { a: r, b: BigRational::from_integer(BigInt::from(0)) }
    }

    /// τ = (1 + √5)/2.
    pub fn golden() -> Self {
        Self::from_ratios(1, 2, 1, 2)
    }

    pub fn sqrt5() -> Self {
        Self::from_ratios(0, 1, 1, 1)
    }

    pub fn conjugate(&self) -> Self {
        QSqrt5 { a: self.a.clone(), b: -self.b.clone() }
    }

    /// Field norm `a² − 5b²`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - q(5, 1) * &self.b * &self.b
    }

    /// Enclosing interval at the given precision.
    pub fn to_interval(&self, prec: u32) -> Interval {
        let a = Interval::point(self.a.clone(), prec);
        if self.b.is_zero() {
            return a;
        }
        a + Interval::point(self.b.clone(), prec) * Interval::sqrt5(prec)
    }

    /// Recognizes `x` as `(m + n√5)/d` with small integers, within `tol`.
    pub fn snap(x: f64, tol: f64) -> Option<Self> {
        let s5 = 5f64.sqrt();
        for d in 1..=12i64 {
            for n in -12..=12i64 {
                let m = (x * d as f64 - n as f64 * s5).round();
                if ((m + n as f64 * s5) / d as f64 - x).abs() < tol {
                    return Some(Self::from_ratios(m as i64, d, n, d));
                }
            }
        }
        None
    }
}

impl Add for QSqrt5 {
    type Output = QSqrt5;
    fn add(self, r: Self) -> Self {
        QSqrt5 { a: self.a + r.a, b: self.b + r.b }
    }
}

impl Sub for QSqrt5 {
    type Output = QSqrt5;
    fn sub(self, r: Self) -> Self {
        QSqrt5 { a: self.a - r.a, b: self.b - r.b }
    }
}

impl Neg for QSqrt5 {
    type Output = QSqrt5;
    fn neg(self) -> Self {
        QSqrt5 { a: -self.a, b: -self.b }
    }
}

impl Mul for QSqrt5 {
    type Output = QSqrt5;
    fn mul(self, r: Self) -> Self {
        QSqrt5 {
            a: &self.a * &r.a + q(5, 1) * &self.b * &r.b,
            b: &self.a * &r.b + &self.b * &r.a,
        }
    }
}

impl Scalar for QSqrt5 {
    fn from_i64(n: i64) -> Self {
        Self::from_ratios(n, 1, 0, 1)
    }

    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        let n = rhs.norm();
        if n.is_zero() {
            return None;
        }
        let num = self.clone() * rhs.conjugate();
        Some(QSqrt5 { a: num.a / &n, b: num.b / n })
    }

    fn sign(&self) -> Option<Ordering> {
        let sa = crate::interval::sign_of(&self.a);
        let sb = crate::interval::sign_of(&self.b);
        Some(match (sa, sb) {
            (x, Ordering::Equal) => x,
            (Ordering::Equal, y) => y,
            (x, y) if x == y => x,
            (x, _) => {
                // opposite signs: compare a² with 5b²
                match (&self.a * &self.a).cmp(&(q(5, 1) * &self.b * &self.b)) {
                    Ordering::Greater => x,
                    Ordering::Less => x.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        })
    }

    fn is_exact_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn approx_f64(&self) -> f64 {
        rational_to_f64(&self.a) + rational_to_f64(&self.b) * 5f64.sqrt()
    }
}

impl QSqrt5 {
    pub fn is_negative(&self) -> bool {
        self.sign() == Some(Ordering::Less)
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_ratio_identities() {
        let t = QSqrt5::golden();
        assert_eq!(t.clone() * t.clone(), t.clone() + QSqrt5::from_i64(1));
        let inv = QSqrt5::from_i64(1).checked_div(&t).unwrap();
        assert_eq!(inv, t - QSqrt5::from_i64(1));
    }

    #[test]
    fn exact_signs() {
        assert_eq!(QSqrt5::from_ratios(-2, 1, 1, 1).sign(), Some(Ordering::Greater));
        assert_eq!(QSqrt5::from_ratios(-3, 1, 1, 1).sign(), Some(Ordering::Less));
        assert_eq!(QSqrt5::from_ratios(9, 1, -4, 1).sign(), Some(Ordering::Greater));
        assert_eq!(QSqrt5::from_i64(0).sign(), Some(Ordering::Equal));
    }

    #[test]
    fn snapping_recognizes_icosahedral_values() {
        let tau = (1.0 + 5f64.sqrt()) / 2.0;
        assert_eq!(QSqrt5::snap(tau / 2.0, 1e-12).unwrap(), QSqrt5::from_ratios(1, 4, 1, 4));
        assert_eq!(QSqrt5::snap(-0.5 / tau, 1e-12).unwrap(), QSqrt5::from_ratios(1, 4, -1, 4));
        assert_eq!(QSqrt5::snap(1.0 / 3.0, 1e-12).unwrap(), QSqrt5::from_ratios(1, 3, 0, 1));
        assert_eq!(QSqrt5::snap(5f64.sqrt() / 3.0, 1e-12).unwrap(), QSqrt5::from_ratios(0, 1, 1, 3));
        assert!(QSqrt5::snap(std::f64::consts::PI, 1e-12).is_none());
    }

    #[test]
    fn interval_enclosure() {
        let t = QSqrt5::golden().to_interval(128);
        assert!((t.mid() - 1.618_033_988_749_895).abs() < 1e-15);
        assert!(t.width() < 1e-35);
    }
}

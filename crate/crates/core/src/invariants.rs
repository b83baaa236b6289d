//! Primary invariant polynomials of the prismatic, tetrahedral, octahedral
//! and icosahedral rotation groups (canonical orientations of
//! [`crate::groups`]), the icosahedral secondary invariant squared, and the
//! range of the icosahedral orbit map.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::TAU;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Invariant {
    Rho,
    Gamma(u32),
    I2,
    I3,
    I4,
    I6,
    I6Prime,
    I10,
    J15Squared,
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Invariant::Rho => write!(f, "rho"),
            Invariant::Gamma(n) => write!(f, "gamma:{n}"),
            Invariant::I2 => write!(f, "I2"),
            Invariant::I3 => write!(f, "I3"),
            Invariant::I4 => write!(f, "I4"),
            Invariant::I6 => write!(f, "I6"),
            Invariant::I6Prime => write!(f, "I6'"),
            Invariant::I10 => write!(f, "I10"),
            Invariant::J15Squared => write!(f, "J15^2"),
        }
    }
}

impl FromStr for Invariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        Ok(match t {
            "rho" => Invariant::Rho,
            "I2" => Invariant::I2,
            "I3" => Invariant::I3,
            "I4" => Invariant::I4,
            "I6" => Invariant::I6,
            "I6'" | "I6p" | "I6prime" => Invariant::I6Prime,
            "I10" => Invariant::I10,
            "J15^2" | "J15sq" | "J15_squared" => Invariant::J15Squared,
            "gamma" | "gamma_n" => {
                return Err(Error::InvalidArgument("gamma_n requires n, e.g. gamma:5".into()))
            }
            _ => {
                let n = t
                    .strip_prefix("gamma:")
                    .or_else(|| t.strip_prefix("gamma_"))
                    .ok_or_else(|| Error::UnknownInvariant(t.to_string()))?;
                let n: u32 = n.parse().map_err(|_| Error::UnknownInvariant(t.to_string()))?;
                Invariant::Gamma(n)
            }
        })
    }
}

/// `Re (x + iy)^n`.
pub fn gamma<T: Scalar>(x: &T, y: &T, n: u32) -> T {
    let (mut re, mut im) = (T::one(), T::zero());
    for _ in 0..n {
        let nre = re.clone() * x.clone() - im.clone() * y.clone();
        im = re * y.clone() + im * x.clone();
        re = nre;
    }
    re
}

pub fn i2<T: Scalar>(x: &T, y: &T, z: &T) -> T {
    x.clone() * x.clone() + y.clone() * y.clone() + z.clone() * z.clone()
}

fn pow<T: Scalar>(x: &T, n: u32) -> T {
    (0..n).fold(T::one(), |acc, _| acc * x.clone())
}

pub fn i4<T: Scalar>(x: &T, y: &T, z: &T) -> T {
    pow(x, 4) + pow(y, 4) + pow(z, 4)
}

pub fn i6<T: Scalar>(x: &T, y: &T, z: &T) -> T {
    pow(x, 6) + pow(y, 6) + pow(z, 6)
}

/// `(τ²x² − y²)(τ²y² − z²)(τ²z² − x²)`.
pub fn i6_prime<T: Scalar>(x: &T, y: &T, z: &T, tau: &T) -> T {
    let t2 = tau.clone() * tau.clone();
    let (x2, y2, z2) = (pow(x, 2), pow(y, 2), pow(z, 2));
    (t2.clone() * x2.clone() - y2.clone()) * (t2.clone() * y2 - z2.clone()) * (t2 * z2 - x2)
}

/// Degree-10 icosahedral invariant.
pub fn i10<T: Scalar>(x: &T, y: &T, z: &T, tau: &T) -> T {
    let (x, y, z) = (x.clone(), y.clone(), z.clone());
    let t2 = tau.clone() * tau.clone();
    let ti2 = T::one().checked_div(&t2).expect("τ ≠ 0");
    let (x2, y2, z2) = (x.clone() * x.clone(), y.clone() * y.clone(), z.clone() * z.clone());
    let linear = (x.clone() + y.clone() + z.clone())
        * (x.clone() - y.clone() - z.clone())
        * (y.clone() - z.clone() - x.clone())
        * (z - y - x);
    let quad = (ti2.clone() * x2.clone() - t2.clone() * y2.clone())
        * (ti2.clone() * y2 - t2.clone() * z2.clone())
        * (ti2 * z2 - t2 * x2);
    linear * quad
}

/// The squared secondary invariant as a polynomial in the orbit-map
/// coordinates `θ₁ = I₆′`, `θ₂ = I₁₀`.
pub fn j15_squared_generic<T: Scalar>(t1: &T, t2: &T, tau: &T) -> T {
    let c = |a: i64, b: i64| T::from_i64(a) + T::from_i64(b) * tau.clone();
    let n = |k: i64| T::from_i64(k);
    let (a, b) = (t1.clone(), t2.clone());
    let a2 = a.clone() * a.clone();
    let b2 = b.clone() * b.clone();
    n(4) * a2.clone()
        - n(8) * c(3, 4) * a.clone() * b.clone()
        - n(91) * c(3, -2) * a2.clone() * a.clone()
        + n(4) * c(5, 8) * b2.clone()
        + n(159) * c(1, -2) * a2.clone() * b.clone()
        + n(688) * c(13, -8) * a2.clone() * a2.clone()
        + n(325) * c(1, 2) * a.clone() * b2.clone()
        - n(720) * c(7, -4) * a2.clone() * a.clone() * b.clone()
        - n(1728) * c(55, -34) * a2.clone() * a2 * a
        - n(25) * c(11, 18) * b2 * b
}

pub fn j15_squared(theta1: f64, theta2: f64) -> f64 {
    j15_squared_generic(&theta1, &theta2, &TAU)
}

/// Orbit map `w ↦ (I₆′(w), I₁₀(w))`.
pub fn orbit_map_icosahedral(w: &[f64; 3]) -> (f64, f64) {
    let [x, y, z] = *w;
    (i6_prime(&x, &y, &z, &TAU), i10(&x, &y, &z, &TAU))
}

/// Membership in the curvilinear triangle bounding the orbit-map range.
pub fn range_membership_icosahedral(theta1: f64, theta2: f64) -> bool {
    const TOL: f64 = 1e-10;
    let lo = -(2.0 * TAU + 1.0) / 5.0;
    let hi = (2.0 * TAU + 1.0) / 27.0;
    theta1 >= lo - TOL
        && theta1 <= hi + TOL
        && (7.0 - 4.0 * TAU) * theta1 <= theta2 + TOL
        && j15_squared(theta1, theta2) >= -TOL
}

/// Evaluates a named invariant at `x`.
pub fn evaluate(inv: Invariant, p: &[f64; 3]) -> f64 {
    let [x, y, z] = *p;
    match inv {
        Invariant::Rho => x * x + y * y,
        Invariant::Gamma(n) => gamma(&x, &y, n),
        Invariant::I2 => i2(&x, &y, &z),
        Invariant::I3 => x * y * z,
        Invariant::I4 => i4(&x, &y, &z),
        Invariant::I6 => i6(&x, &y, &z),
        Invariant::I6Prime => i6_prime(&x, &y, &z, &TAU),
        Invariant::I10 => i10(&x, &y, &z, &TAU),
        Invariant::J15Squared => {
            let (a, b) = orbit_map_icosahedral(p);
            j15_squared(a, b)
        }
    }
}

/// Evaluates an invariant given by name (`rho`, `gamma:n`, `I2`, ..., `J15^2`).
pub fn evaluate_named(name: &str, p: &[f64; 3]) -> Result<f64> {
    Ok(evaluate(name.parse()?, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic::QSqrt5;
    use approx::assert_abs_diff_eq;

    fn unit(v: [f64; 3]) -> [f64; 3] {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        v.map(|c| c / n)
    }

    #[test]
    fn octahedral_values() {
        let x2 = unit([0.0, 1.0, 1.0]);
        let x3 = unit([1.0, 1.0, 1.0]);
        assert_abs_diff_eq!(evaluate(Invariant::I4, &x2), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(evaluate(Invariant::I6, &x3), 1.0 / 9.0, epsilon = 1e-15);
    }

    #[test]
    fn icosahedral_values_exact() {
        // I₆′ is even in each coordinate and homogeneous, so the values at the
        // normalized vertices are exact elements of Q(√5).
        let t = QSqrt5::golden();
        let zero = QSqrt5::from_i64(0);
        let one = QSqrt5::from_i64(1);
        let norm5 = t.clone() + QSqrt5::from_i64(2);
        let raw = i6_prime(&zero, &t, &one, &t);
        let v5 = raw.checked_div(&(norm5.clone() * norm5.clone() * norm5)).unwrap();
        assert_eq!(v5, QSqrt5::from_ratios(-2, 5, -1, 5));
        let inv_t = one.checked_div(&t).unwrap();
        let raw = i6_prime(&zero, &inv_t, &t, &t);
        let v6 = raw.checked_div(&QSqrt5::from_i64(27)).unwrap();
        assert_eq!(v6, QSqrt5::from_ratios(2, 27, 1, 27));
    }

    #[test]
    fn orbit_map_examples() {
        assert_eq!(orbit_map_icosahedral(&[0.0, 0.0, 1.0]), (0.0, 0.0));
        let x6 = unit([0.0, 1.0 / TAU, TAU]);
        assert_abs_diff_eq!(orbit_map_icosahedral(&x6).0, (2.0 + 5f64.sqrt()) / 27.0, epsilon = 1e-15);
        let x5 = unit([0.0, TAU, 1.0]);
        assert_abs_diff_eq!(orbit_map_icosahedral(&x5).0, -(2.0 + 5f64.sqrt()) / 5.0, epsilon = 1e-15);
    }

    #[test]
    fn j15_examples() {
        assert_eq!(j15_squared(0.0, 0.0), 0.0);
        // x = 0 is a mirror plane of the icosahedral reflection group.
        for i in 0..50 {
            let a = i as f64 * 0.13;
            let (t1, t2) = orbit_map_icosahedral(&[0.0, a.cos(), a.sin()]);
            assert_abs_diff_eq!(j15_squared(t1, t2), 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn range_examples() {
        assert!(range_membership_icosahedral(0.0, 0.0));
        assert!(!range_membership_icosahedral((2.0 + 5f64.sqrt()) / 27.0 + 0.01, 0.0));
    }

    #[test]
    fn gamma_on_equator() {
        for i in 0..40 {
            let a = i as f64 * 0.17;
            let v = [a.cos(), a.sin(), 0.0];
            assert_abs_diff_eq!(evaluate(Invariant::Gamma(7), &v), (7.0 * a).cos(), epsilon = 1e-12);
        }
    }

    #[test]
    fn names_parse() {
        assert_eq!("I6'".parse::<Invariant>().unwrap(), Invariant::I6Prime);
        assert_eq!("gamma:5".parse::<Invariant>().unwrap(), Invariant::Gamma(5));
        assert!("gamma_n".parse::<Invariant>().is_err());
        assert!(evaluate_named("I7", &[0.0, 0.0, 1.0]).is_err());
    }
}

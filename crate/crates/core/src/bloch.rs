//! Pure qubit states as unit Bloch vectors, outcome probabilities, and the
//! entropy kernels `η` and `h`.

use std::fmt;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Renormalization tolerance on construction.
pub const RENORMALIZE_TOL: f64 = 1e-9;

/// Unit vector in R³ representing a pure qubit state.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct BlochVector {
    v: Vector3<f64>,
}

impl fmt::Debug for BlochVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.v.x, self.v.y, self.v.z)
    }
}

impl BlochVector {
    /// Builds a unit vector, renormalizing small deviations and rejecting larger ones.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::from_vector(Vector3::new(x, y, z))
    }

    pub fn from_vector(v: Vector3<f64>) -> Result<Self> {
        let n = v.norm();
        if !n.is_finite() || (n - 1.0).abs() > RENORMALIZE_TOL {
            return Err(Error::NotUnit { norm: n });
        }
        Ok(BlochVector { v: v / n })
    }

    /// Normalizes any nonzero vector.
    pub fn normalize(v: Vector3<f64>) -> Result<Self> {
        let n = v.norm();
        if !n.is_finite() || n < 1e-300 {
            return Err(Error::NotUnit { norm: n });
        }
        Ok(BlochVector { v: v / n })
    }

    pub fn x(&self) -> f64 {
        self.v.x
    }
    pub fn y(&self) -> f64 {
        self.v.y
    }
    pub fn z(&self) -> f64 {
        self.v.z
    }

    pub fn as_vector(&self) -> Vector3<f64> {
        self.v
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.v.x, self.v.y, self.v.z]
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.v.dot(&other.v)
    }

    pub fn antipode(&self) -> BlochVector {
        BlochVector { v: -self.v }
    }

    /// Angle between two unit vectors, computed stably via atan2.
    pub fn angle_to(&self, other: &BlochVector) -> f64 {
        self.v.cross(&other.v).norm().atan2(self.v.dot(&other.v))
    }
}

impl TryFrom<[f64; 3]> for BlochVector {
    type Error = Error;
    fn try_from(a: [f64; 3]) -> Result<Self> {
        BlochVector::new(a[0], a[1], a[2])
    }
}

impl From<BlochVector> for [f64; 3] {
    fn from(b: BlochVector) -> Self {
        b.to_array()
    }
}

/// Outcome distribution of a k-outcome measurement in dimension d.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbabilityVector {
    p: Vec<f64>,
}

impl ProbabilityVector {
    /// Validates `0 ≤ pᵢ ≤ d/k` and `Σpᵢ = 1` (tolerance 1e-12).
    pub fn new(p: Vec<f64>, d: usize) -> Result<Self> {
        let k = p.len();
        if k == 0 {
            return Err(Error::InvalidArgument("empty probability vector".into()));
        }
        let cap = d as f64 / k as f64 + 1e-12;
        if let Some(&bad) = p.iter().find(|&&x| !(-1e-12..=cap).contains(&x)) {
            return Err(Error::Domain { function: "probability", value: bad });
        }
        let s: f64 = p.iter().sum();
        if (s - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("probabilities sum to {s}")));
        }
        Ok(ProbabilityVector { p })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }
}

/// Entropy functional applied to an outcome distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "alpha", rename_all = "lowercase")]
pub enum EntropyKernel {
    Shannon,
    Renyi(f64),
    Tsallis(f64),
}

impl fmt::Display for EntropyKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntropyKernel::Shannon => write!(f, "shannon"),
            EntropyKernel::Renyi(a) => write!(f, "renyi:{a}"),
            EntropyKernel::Tsallis(a) => write!(f, "tsallis:{a}"),
        }
    }
}

impl std::str::FromStr for EntropyKernel {
    type Err = Error;

    /// `shannon`, `renyi:ALPHA` or `tsallis:ALPHA`.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let bad = || Error::InvalidArgument(format!("unknown entropy kernel `{s}`"));
        let kernel = match lower.split_once(':') {
            None if lower == "shannon" => EntropyKernel::Shannon,
            Some(("renyi", a)) => EntropyKernel::Renyi(a.parse().map_err(|_| bad())?),
            Some(("tsallis", a)) => EntropyKernel::Tsallis(a.parse().map_err(|_| bad())?),
            _ => return Err(bad()),
        };
        kernel.validate()?;
        Ok(kernel)
    }
}

impl EntropyKernel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            EntropyKernel::Shannon => Ok(()),
            EntropyKernel::Renyi(a) | EntropyKernel::Tsallis(a) => {
                if a > 0.0 && a.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidArgument(format!("entropy order α = {a} must be positive")))
                }
            }
        }
    }

    /// Order α, or `None` for the Shannon kernel (and α = 1 limits).
    fn order(&self) -> Option<f64> {
        match *self {
            EntropyKernel::Shannon => None,
            EntropyKernel::Renyi(a) | EntropyKernel::Tsallis(a) => {
                ((a - 1.0).abs() > 1e-14).then_some(a)
            }
        }
    }

    /// Per-outcome summand `φ(p)`; the Tsallis entropy is `Σφ(pᵢ)` and the
    /// Shannon entropy is `Σ η(pᵢ)`. Rényi shares the Tsallis summand.
    pub fn summand(&self, p: f64) -> f64 {
        match self.order() {
            None => eta_clamped(p),
            Some(a) => {
                let p = p.max(0.0);
                (p - p.powf(a)) / (a - 1.0)
            }
        }
    }

    /// Entropy of a distribution.
    pub fn entropy(&self, p: &[f64]) -> f64 {
        match (self, self.order()) {
            (_, None) => p.iter().map(|&x| eta_clamped(x)).sum(),
            (EntropyKernel::Renyi(_), Some(a)) => {
                let s: f64 = p.iter().map(|&x| x.max(0.0).powf(a)).sum();
                s.ln() / (1.0 - a)
            }
            (_, Some(_)) => p.iter().map(|&x| self.summand(x)).sum(),
        }
    }
}

/// Probability of outcome `v` for the pure state `u`: `((d−1)u·v + 1)/k`.
pub fn probability(u: &BlochVector, v: &BlochVector, d: usize, k: usize) -> f64 {
    probability_from_dot(u.dot(v), d, k)
}

pub fn probability_from_dot(dot: f64, d: usize, k: usize) -> f64 {
    ((d as f64 - 1.0) * dot + 1.0) / k as f64
}

/// `η(x) = −x ln x`, with `η(0) = 0`.
pub fn eta(x: f64) -> Result<f64> {
    if !(-1e-12..=1.0 + 1e-12).contains(&x) || x.is_nan() {
        return Err(Error::Domain { function: "eta", value: x });
    }
    Ok(eta_clamped(x))
}

/// `η` with rounding dust below zero treated as zero; no domain check.
#[inline]
pub fn eta_clamped(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.ln()
    }
}

/// `h(t) = η(((d−1)t + 1)/d)` on `[−1/(d−1), 1]`.
pub fn h(t: f64, d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidArgument("dimension must be at least 2".into()));
    }
    let lo = -1.0 / (d as f64 - 1.0);
    if t < lo - 1e-12 || t > 1.0 + 1e-12 || t.is_nan() {
        return Err(Error::Domain { function: "h", value: t });
    }
    Ok(eta_clamped(((d as f64 - 1.0) * t + 1.0) / d as f64))
}

/// Qubit `h(t) = η((1+t)/2)` without domain checks, for hot loops.
#[inline]
pub fn h2(t: f64) -> f64 {
    eta_clamped(0.5 * (1.0 + t))
}

/// Derivatives of the qubit `h`: `h⁽ⁿ⁾(t) = 2⁻ⁿ η⁽ⁿ⁾((1+t)/2)`.
pub fn h_derivative(t: f64, order: u32) -> Result<f64> {
    if !(-1.0..=1.0).contains(&t) {
        return Err(Error::Domain { function: "h_derivative", value: t });
    }
    if order == 0 {
        return Ok(h2(t));
    }
    if t == -1.0 {
        return Err(Error::Singularity { function: "h_derivative", at: t });
    }
    Ok(h_derivative_unchecked(t, order))
}

pub(crate) fn h_derivative_unchecked(t: f64, order: u32) -> f64 {
    let x = 0.5 * (1.0 + t);
    let scale = 0.5f64.powi(order as i32);
    match order {
        0 => eta_clamped(x),
        1 => -scale * (x.ln() + 1.0),
        n => {
            let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
            let fact: f64 = (1..=(n - 2)).map(f64::from).product();
            scale * sign * fact * x.powi(-(n as i32 - 1))
        }
    }
}

/// Fubini–Study distance `arccos √((1 + u·v)/2)`.
pub fn fubini_study_distance(u: &BlochVector, v: &BlochVector) -> f64 {
    let c = (0.5 * (1.0 + u.dot(v))).clamp(0.0, 1.0);
    c.sqrt().acos()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_names_round_trip() {
        for k in [EntropyKernel::Shannon, EntropyKernel::Renyi(0.5), EntropyKernel::Tsallis(2.0)] {
            assert_eq!(k.to_string().parse::<EntropyKernel>().unwrap(), k);
        }
        assert!("tsallis:abc".parse::<EntropyKernel>().is_err());
        assert!("renyi".parse::<EntropyKernel>().is_err());
    }
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{E, LN_2, PI};

    fn bv(x: f64, y: f64, z: f64) -> BlochVector {
        BlochVector::normalize(Vector3::new(x, y, z)).unwrap()
    }

    #[test]
    fn construction_renormalizes_or_rejects() {
        let v = BlochVector::new(0.0, 0.0, 1.0 + 5e-10).unwrap();
        assert_abs_diff_eq!(v.as_vector().norm(), 1.0, epsilon = 1e-15);
        assert!(BlochVector::new(0.0, 0.0, 1.1).is_err());
    }

    #[test]
    fn probability_examples() {
        let v = bv(0.3, -0.2, 0.9);
        assert_abs_diff_eq!(probability(&v, &v, 2, 4), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(probability(&v.antipode(), &v, 2, 4), 0.0, epsilon = 1e-15);
        let a = bv(1.0, 0.0, 0.0);
        let b = bv(0.0, 1.0, 0.0);
        assert_abs_diff_eq!(probability(&a, &b, 2, 6), 1.0 / 6.0, epsilon = 1e-15);
    }

    #[test]
    fn eta_examples() {
        assert_eq!(eta(0.0).unwrap(), 0.0);
        assert_eq!(eta(1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(eta(0.5).unwrap(), 0.5 * LN_2, epsilon = 1e-15);
        assert_abs_diff_eq!(eta(1.0 / E).unwrap(), 1.0 / E, epsilon = 1e-15);
        assert_eq!(eta(-5e-13).unwrap(), 0.0);
        assert!(eta(-1e-6).is_err());
        assert!(eta(1.5).is_err());
    }

    #[test]
    fn h_examples() {
        assert_eq!(h(1.0, 2).unwrap(), 0.0);
        assert_eq!(h(-1.0, 2).unwrap(), 0.0);
        assert_abs_diff_eq!(h(0.0, 2).unwrap(), 0.5 * LN_2, epsilon = 1e-15);
        assert!(h(-1.2, 2).is_err());
        assert!(h(-0.5, 3).is_ok());
        assert!(h(-0.6, 3).is_err());
    }

    #[test]
    fn h_derivative_examples() {
        assert_abs_diff_eq!(h_derivative(1.0, 1).unwrap(), -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(h_derivative(0.0, 2).unwrap(), -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(
            h_derivative(0.5, 1).unwrap(),
            -0.5 * (0.75f64.ln() + 1.0),
            epsilon = 1e-15
        );
        assert!(matches!(h_derivative(-1.0, 1), Err(Error::Singularity { .. })));
        assert_eq!(h_derivative(-1.0, 0).unwrap(), 0.0);
    }

    #[test]
    fn finite_difference_oracle_for_second_derivative() {
        let step = 1e-5;
        let fd = (h2(step) - 2.0 * h2(0.0) + h2(-step)) / (step * step);
        assert_abs_diff_eq!(fd, -0.5, epsilon = 1e-5);
    }

    #[test]
    fn even_derivatives_negative() {
        for n in [2u32, 4, 6, 8, 16] {
            for i in 1..100 {
                let t = -1.0 + 2.0 * i as f64 / 100.0;
                assert!(h_derivative(t, n).unwrap() < 0.0);
            }
        }
    }

    #[test]
    fn fubini_study_examples() {
        let u = bv(1.0, 2.0, 3.0);
        assert_abs_diff_eq!(fubini_study_distance(&u, &u), 0.0, epsilon = 1e-7);
        assert_abs_diff_eq!(fubini_study_distance(&u, &u.antipode()), PI / 2.0, epsilon = 1e-12);
        let a = bv(1.0, 0.0, 0.0);
        let b = bv(0.0, 0.0, 1.0);
        assert_abs_diff_eq!(fubini_study_distance(&a, &b), PI / 4.0, epsilon = 1e-15);
    }

    #[test]
    fn kernels_agree_at_order_one_and_validate() {
        let p = [0.1, 0.2, 0.3, 0.4];
        let s = EntropyKernel::Shannon.entropy(&p);
        assert_abs_diff_eq!(EntropyKernel::Renyi(1.0).entropy(&p), s, epsilon = 1e-15);
        assert_abs_diff_eq!(EntropyKernel::Renyi(1.0 + 1e-7).entropy(&p), s, epsilon = 1e-6);
        assert_abs_diff_eq!(EntropyKernel::Tsallis(1.0 - 1e-7).entropy(&p), s, epsilon = 1e-6);
        let q: f64 = p.iter().map(|x| x * x).sum();
        assert_abs_diff_eq!(EntropyKernel::Renyi(2.0).entropy(&p), -q.ln(), epsilon = 1e-15);
        assert_abs_diff_eq!(EntropyKernel::Tsallis(2.0).entropy(&p), 1.0 - q, epsilon = 1e-15);
        assert!(EntropyKernel::Renyi(-1.0).validate().is_err());
    }

    #[test]
    fn probability_vector_checks() {
        assert!(ProbabilityVector::new(vec![0.5, 0.5], 2).is_ok());
        assert!(ProbabilityVector::new(vec![0.25; 4], 2).is_ok());
        assert!(ProbabilityVector::new(vec![0.7, 0.2, 0.1], 2).is_err());
        assert!(ProbabilityVector::new(vec![0.5, 0.4], 2).is_err());
    }

    #[test]
    fn serde_round_trip_as_triple() {
        let v = bv(0.0, 0.6, 0.8);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, "[0.0,0.6,0.8]");
        let back: BlochVector = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
        assert!(serde_json::from_str::<BlochVector>("[0,0,2]").is_err());
    }
}

//! Hermite interpolation of the entropy profile from below.
//!
//! The interpolant is built from Newton divided differences with repeated
//! abscissae in 192-bit interval arithmetic, converted to the monomial basis
//! there, and rounded to double-double coefficients for evaluation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::bloch::{h_derivative_unchecked, EntropyKernel};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::scalar::{Poly, Scalar};

/// Number of uniform grid points used by [`verify_below`].
pub const VERIFY_GRID: usize = 100_000;

/// Interpolation node `t` with the number of matched derivatives (value included).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub t: f64,
    pub multiplicity: u32,
}

/// Nodes for an interpolation set: multiplicity 1 at ±1, 2 elsewhere.
pub fn nodes_for(set: &[f64]) -> Vec<Node> {
    set.iter()
        .map(|&t| Node { t, multiplicity: if (t.abs() - 1.0).abs() < 1e-12 { 1 } else { 2 } })
        .collect()
}

/// Single-variable profile `f(t)` whose interpolant bounds the entropy.
///
/// For Shannon entropy `f = h`. For the Tsallis and Rényi kernels of order α
/// the profile is `φ_α((1+t)/k)` with `φ_α(p) = (p − p^α)/(α − 1)`; Rényi
/// entropy is an increasing function of the Tsallis one, so both share it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelProfile {
    pub kernel: EntropyKernel,
    pub k: usize,
}

impl KernelProfile {
    pub fn shannon() -> Self {
        KernelProfile { kernel: EntropyKernel::Shannon, k: 2 }
    }

    pub fn new(kernel: EntropyKernel, k: usize) -> Result<Self> {
        kernel.validate()?;
        if k < 2 {
            return Err(Error::InvalidArgument("profile needs k ≥ 2".into()));
        }
        Ok(KernelProfile { kernel, k })
    }

    fn alpha(&self) -> Option<f64> {
        match self.kernel {
            EntropyKernel::Shannon => None,
            EntropyKernel::Renyi(a) | EntropyKernel::Tsallis(a) => ((a - 1.0).abs() > 1e-14).then_some(a),
        }
    }

    /// `f⁽ⁿ⁾(t)` in double precision.
    pub fn derivative(&self, t: f64, n: u32) -> f64 {
        match self.alpha() {
            None => {
                if self.kernel == EntropyKernel::Shannon {
                    h_derivative_unchecked(t, n)
                } else {
                    // α = 1 limit of the generalized kernels: η((1+t)/k)
                    let k = self.k as f64;
                    let p = ((1.0 + t) / k).max(0.0);
                    let d = match n {
                        0 => crate::bloch::eta_clamped(p),
                        1 => -(p.ln() + 1.0),
                        m => {
                            let sign = if m % 2 == 0 { -1.0 } else { 1.0 };
                            let fact: f64 = (1..=(m - 2)).map(f64::from).product();
                            sign * fact * p.powi(-(m as i32 - 1))
                        }
                    };
                    d * k.powi(-(n as i32))
                }
            }
            Some(a) => {
                let k = self.k as f64;
                let p = ((1.0 + t) / k).max(0.0);
                let d = match n {
                    0 => (p - p.powf(a)) / (a - 1.0),
                    1 => (1.0 - a * p.powf(a - 1.0)) / (a - 1.0),
                    m => {
                        // −α(α−2)(α−3)…(α−m+1) p^(α−m)
                        let falling: f64 = (2..m).map(|j| a - j as f64).product();
                        -a * falling * p.powf(a - m as f64)
                    }
                };
                d * k.powi(-(n as i32))
            }
        }
    }

    /// Enclosure of `f⁽ⁿ⁾(t)/n!`. Shannon values and slopes are enclosed
    /// rigorously; everything else starts from the double value.
    fn taylor_coefficient(&self, t: &Interval, tf: f64, n: u32) -> Interval {
        if self.kernel == EntropyKernel::Shannon && n <= 1 && tf > -1.0 {
            if let Ok(v) = shannon_values_interval(t, n) {
                return v;
            }
        }
        let fact = (1..=n).fold(1i64, |acc, j| acc * i64::from(j));
        Interval::from_f64(self.derivative(tf, n), t.prec()) * Interval::from_ratio(1, fact, t.prec())
    }
}

fn to_twofloat(v: &Interval) -> TwoFloat {
    let hi = v.mid();
    let rest = v.clone() - Interval::from_f64(hi, v.prec());
    TwoFloat::new_add(hi, rest.mid())
}

/// Interpolating polynomial together with its nodes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HermitePolynomial {
    /// Monomial coefficients, ascending degree (rounded from double-double).
    pub coefficients: Vec<f64>,
    pub nodes: Vec<Node>,
    pub profile: KernelProfile,
    #[serde(skip)]
    ext: Vec<TwoFloat>,
}

impl HermitePolynomial {
    /// Evaluates in double-double precision.
    pub fn eval(&self, t: f64) -> f64 {
        let tt = TwoFloat::from(t);
        let mut acc = TwoFloat::from(0.0);
        for c in self.ext.iter().rev() {
            acc = acc * tt + *c;
        }
        acc.hi() + acc.lo()
    }

    pub fn derivative_at(&self, t: f64) -> f64 {
        let tt = TwoFloat::from(t);
        let mut acc = TwoFloat::from(0.0);
        for (i, c) in self.ext.iter().enumerate().skip(1).rev() {
            acc = acc * tt + *c * (i as f64);
        }
        acc.hi() + acc.lo()
    }

    /// Degree after dropping trailing coefficients below `tol` in magnitude.
    pub fn degree(&self, tol: f64) -> usize {
        self.coefficients.iter().rposition(|c| c.abs() > tol).unwrap_or(0)
    }

    /// Copy with `delta` added to the monomial coefficients.
    pub fn perturbed(&self, delta: &[f64]) -> Self {
        let mut ext = self.ext.clone();
        if ext.len() < delta.len() {
            ext.resize(delta.len(), TwoFloat::from(0.0));
        }
        for (c, d) in ext.iter_mut().zip(delta) {
            *c += *d;
        }
        HermitePolynomial {
            coefficients: ext.iter().map(|c| c.hi() + c.lo()).collect(),
            nodes: self.nodes.clone(),
            profile: self.profile,
            ext,
        }
    }

    pub fn from_coefficients(coefficients: Vec<f64>, nodes: Vec<Node>, profile: KernelProfile) -> Self {
        let ext = coefficients.iter().map(|&c| TwoFloat::from(c)).collect();
        HermitePolynomial { coefficients, nodes, profile, ext }
    }
}

fn check_nodes(ts: &[f64], mults: &[u32]) -> Result<()> {
    if ts.is_empty() || ts.len() != mults.len() {
        return Err(Error::SingularInterpolation("empty node list".into()));
    }
    for w in ts.windows(2) {
        if w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less) {
            return Err(Error::SingularInterpolation(format!("nodes {} and {} not strictly increasing", w[0], w[1])));
        }
    }
    if mults.contains(&0) {
        return Err(Error::SingularInterpolation("zero multiplicity".into()));
    }
    Ok(())
}

/// Newton divided differences with repeated abscissae, returned in the
/// monomial basis. `nodes[i]` is repeated `mults[i]` times and
/// `value(i, j)` must return `f⁽ʲ⁾(nodes[i]) / j!`.
pub fn hermite_newton<T, F>(nodes: &[T], mults: &[u32], value: F) -> Result<Poly<T>>
where
    T: Scalar,
    F: Fn(usize, u32) -> T,
{
    let mut z: Vec<usize> = Vec::new();
    for (i, &m) in mults.iter().enumerate() {
        z.extend(std::iter::repeat_n(i, m as usize));
    }
    let n = z.len();
    let mut col: Vec<T> = z.iter().map(|&i| value(i, 0)).collect();
    let mut newton = vec![col[0].clone()];
    for j in 1..n {
        let mut next = Vec::with_capacity(n - j);
        for i in 0..n - j {
            if z[i] == z[i + j] {
                next.push(value(z[i], j as u32));
            } else {
                let num = col[i + 1].clone() - col[i].clone();
                let den = nodes[z[i + j]].clone() - nodes[z[i]].clone();
                next.push(num.checked_div(&den).ok_or_else(|| {
                    Error::SingularInterpolation("coincident abscissae".into())
                })?);
            }
        }
        newton.push(next[0].clone());
        col = next;
    }
    // p = c₀ + (t − z₀)(c₁ + (t − z₁)(c₂ + …))
    let mut p = Poly::constant(newton[n - 1].clone());
    for j in (0..n - 1).rev() {
        let lin = Poly::new(vec![-nodes[z[j]].clone(), T::one()]);
        p = p * lin + Poly::constant(newton[j].clone());
    }
    Ok(p)
}

/// Precision (bits) of the logarithm enclosures behind the Shannon node data.
const NODE_PREC: u32 = 128;

/// Hermite interpolant of the profile through the given nodes.
pub fn hermite_interpolate(profile: &KernelProfile, nodes: &[Node]) -> Result<HermitePolynomial> {
    let ts: Vec<f64> = nodes.iter().map(|n| n.t).collect();
    let mults: Vec<u32> = nodes.iter().map(|n| n.multiplicity).collect();
    check_nodes(&ts, &mults)?;
    for n in nodes {
        if !(-1.0..=1.0).contains(&n.t) {
            return Err(Error::Domain { function: "hermite_interpolate", value: n.t });
        }
        if n.t == -1.0 && n.multiplicity > 1 {
            return Err(Error::Singularity { function: "hermite_interpolate", at: -1.0 });
        }
    }
    // Taylor data f^(j)(t_i)/j! per node, in double-double.
    let data: Vec<Vec<TwoFloat>> = nodes
        .iter()
        .map(|n| {
            let ti = Interval::from_f64(n.t, NODE_PREC);
            (0..n.multiplicity).map(|j| to_twofloat(&profile.taylor_coefficient(&ti, n.t, j))).collect()
        })
        .collect();
    let td: Vec<TwoFloat> = ts.iter().map(|&t| TwoFloat::from(t)).collect();
    let poly = hermite_newton(&td, &mults, |i, j| data[i][j as usize])?;
    let ext: Vec<TwoFloat> = poly.coeffs().to_vec();
    Ok(HermitePolynomial {
        coefficients: ext.iter().map(|c| c.hi() + c.lo()).collect(),
        nodes: nodes.to_vec(),
        profile: *profile,
        ext,
    })
}

/// Residuals `|p(tᵢ) − f(tᵢ)|` (values) and `|p′(tᵢ) − f′(tᵢ)|` at double nodes.
pub fn interpolation_residuals(p: &HermitePolynomial) -> (f64, f64) {
    let mut rv: f64 = 0.0;
    let mut rd: f64 = 0.0;
    for n in &p.nodes {
        rv = rv.max((p.eval(n.t) - p.profile.derivative(n.t, 0)).abs());
        if n.multiplicity >= 2 {
            rd = rd.max((p.derivative_at(n.t) - p.profile.derivative(n.t, 1)).abs());
        }
    }
    (rv, rd)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BelowCheck {
    pub min_gap: f64,
    pub argmin: f64,
    pub passed: bool,
    /// Location of a failure (negative gap, or a near-zero gap away from the nodes).
    pub offending: Option<f64>,
    /// Refined local minima of the gap below 1e-9.
    pub touch_points: Vec<f64>,
}

/// Verifies `f − p ≥ 0` on `[−1, 1]`, with equality only at the nodes.
pub fn verify_below(p: &HermitePolynomial) -> BelowCheck {
    let profile = p.profile;
    let gap = |t: f64| profile.derivative(t, 0) - p.eval(t);
    let n = VERIFY_GRID;
    let ts: Vec<f64> = (0..=n).map(|i| -1.0 + 2.0 * i as f64 / n as f64).collect();
    let gs: Vec<f64> = ts.par_iter().map(|&t| gap(t)).collect();
    let mut minima = Vec::new();
    for i in 0..=n {
        let left = if i == 0 { f64::INFINITY } else { gs[i - 1] };
        let right = if i == n { f64::INFINITY } else { gs[i + 1] };
        if gs[i] <= left && gs[i] <= right {
            let a = ts[i.saturating_sub(1)];
            let b = ts[(i + 1).min(n)];
            minima.push(chebyshev_refine(&gap, a, b, ts[i], gs[i]));
        }
    }
    let (argmin, min_gap) = minima
        .iter()
        .copied()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap_or((0.0, gap(0.0)));
    let near_node = |t: f64| p.nodes.iter().any(|nd| (nd.t - t).abs() < 1e-6);
    let touch_points: Vec<f64> = minima.iter().filter(|m| m.1 < 1e-9).map(|m| m.0).collect();
    let mut offending = None;
    if min_gap < -1e-12 {
        offending = Some(argmin);
    } else if let Some(&t) = touch_points.iter().find(|&&t| !near_node(t)) {
        offending = Some(t);
    }
    BelowCheck { min_gap, argmin, passed: offending.is_none(), offending, touch_points }
}

/// Shrinks `[a, b]` around the smallest value among Chebyshev points.
fn chebyshev_refine<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, mut best_t: f64, mut best: f64) -> (f64, f64) {
    const M: usize = 17;
    for _ in 0..40 {
        if b - a < 1e-13 {
            break;
        }
        for j in 0..M {
            let x = ((2 * j + 1) as f64 * std::f64::consts::PI / (2 * M) as f64).cos();
            let t = 0.5 * (a + b) + 0.5 * (b - a) * x;
            let v = f(t);
            if v < best {
                best = v;
                best_t = t;
            }
        }
        let half = (b - a) / 4.0;
        a = (best_t - half).max(a);
        b = (best_t + half).min(b);
    }
    (best_t, best)
}

/// Enclosures of the Shannon profile values for the rigorous path:
/// `h(t)` and `h′(t)` with `t` an exact interval.
pub fn shannon_values_interval(t: &Interval, order: u32) -> Result<Interval> {
    let prec = t.prec();
    let x = (t.clone() + Interval::one().with_prec(prec)) * Interval::from_ratio(1, 2, 0);
    if x.is_exact_zero() {
        return match order {
            0 => Ok(Interval::zero()),
            _ => Err(Error::Singularity { function: "h", at: -1.0 }),
        };
    }
    let ln = x.ln().ok_or(Error::Domain { function: "h", value: t.mid() })?;
    match order {
        0 => Ok(-(x * ln)),
        1 => Ok(-(ln + Interval::one()) * Interval::from_ratio(1, 2, 0)),
        _ => Err(Error::Unsupported("higher derivatives on the interval path".into())),
    }
}

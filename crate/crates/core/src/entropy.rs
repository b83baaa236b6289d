//! Entropy and relative entropy of measurement on the Bloch ball, global
//! extremum search, and classification of inert critical points.

use std::f64::consts::PI;

use nalgebra::Vector3;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bloch::{h2, BlochVector, EntropyKernel};
use crate::catalog::HsPovm;
use crate::error::{Error, Result};
use crate::groups::{dedup_points, sort_points};
use crate::sphere::{fibonacci_sphere, geodesic, golden_section, lattice_spacing, minimize_on_sphere, tangent_basis};

/// Default number of lattice points scanned by [`find_extrema`].
pub const DEFAULT_GRID: usize = 200_000;

/// Entropy at the pure state `u`.
pub fn entropy_at(u: &BlochVector, povm: &HsPovm, kernel: EntropyKernel) -> f64 {
    entropy_at_vector(&u.as_vector(), povm, kernel)
}

/// Entropy at a Bloch-ball point (`‖u‖ ≤ 1`, mixed states allowed).
pub fn entropy_at_point(u: &Vector3<f64>, povm: &HsPovm, kernel: EntropyKernel) -> Result<f64> {
    let n = u.norm();
    if n > 1.0 + 1e-12 || !n.is_finite() {
        return Err(Error::Domain { function: "entropy_at_point", value: n });
    }
    Ok(entropy_at_vector(u, povm, kernel))
}

pub(crate) fn entropy_at_vector(u: &Vector3<f64>, povm: &HsPovm, kernel: EntropyKernel) -> f64 {
    let k = povm.k() as f64;
    match kernel {
        EntropyKernel::Shannon => {
            let s: f64 = povm.vectors().iter().map(|v| h2(u.dot(&v.as_vector()))).sum();
            (k / 2.0).ln() + 2.0 / k * s
        }
        _ => {
            let p: Vec<f64> = povm.vectors().iter().map(|v| (1.0 + u.dot(&v.as_vector())) / k).collect();
            kernel.entropy(&p)
        }
    }
}

/// `ln k − H`.
pub fn relative_entropy_at(u: &BlochVector, povm: &HsPovm) -> f64 {
    (povm.k() as f64).ln() - entropy_at(u, povm, EntropyKernel::Shannon)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CriticalKind {
    Min,
    Max,
    Saddle,
}

/// Position of a critical point relative to the symmetry: antipodal to a POVM
/// vector (I), on an axis with stabilizer order > 2 (II), on a 2-fold axis
/// (III), or off every axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TypeLabel {
    #[serde(rename = "I")]
    I,
    #[serde(rename = "II")]
    II,
    #[serde(rename = "III")]
    III,
    #[serde(rename = "non-inert")]
    NonInert,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub location: BlochVector,
    pub value: f64,
    pub kind: CriticalKind,
    pub type_label: TypeLabel,
    pub classifier_statistic: Option<f64>,
    pub converged: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EntropyLandscape {
    pub family: String,
    pub samples: Vec<(BlochVector, f64)>,
    pub extrema: Vec<CriticalPoint>,
}

/// Entropy on an `n`-point Fibonacci lattice (parallel).
pub fn sample_landscape(povm: &HsPovm, n: usize, kernel: EntropyKernel) -> Vec<(BlochVector, f64)> {
    fibonacci_sphere(n)
        .into_par_iter()
        .map(|p| {
            let b = BlochVector::normalize(p).expect("unit");
            (b, entropy_at_vector(&p, povm, kernel))
        })
        .collect()
}

/// Landscape with its global minima attached.
pub fn landscape(povm: &HsPovm, n: usize, kernel: EntropyKernel) -> EntropyLandscape {
    let samples = sample_landscape(povm, n, kernel);
    let extrema = find_extrema_with(povm, Mode::Min, &ExtremaOptions { grid: n.max(1000), kernel, ..Default::default() });
    EntropyLandscape { family: povm.family().to_string(), samples, extrema }
}

#[derive(Debug, Clone, Copy)]
pub struct ExtremaOptions {
    pub grid: usize,
    pub kernel: EntropyKernel,
    pub max_iter: usize,
    /// Values within this distance of the best one count as global extrema.
    pub value_tol: f64,
}

impl Default for ExtremaOptions {
    fn default() -> Self {
        ExtremaOptions { grid: DEFAULT_GRID, kernel: EntropyKernel::Shannon, max_iter: 4000, value_tol: 1e-9 }
    }
}

/// Global minimizers (or maximizers) of the entropy on the sphere.
pub fn find_extrema(povm: &HsPovm, mode: Mode) -> Vec<CriticalPoint> {
    find_extrema_with(povm, mode, &ExtremaOptions::default())
}

pub fn find_extrema_with(povm: &HsPovm, mode: Mode, opts: &ExtremaOptions) -> Vec<CriticalPoint> {
    let sign = if mode == Mode::Min { 1.0 } else { -1.0 };
    let kernel = opts.kernel;
    let f = |p: &Vector3<f64>| sign * entropy_at_vector(p, povm, kernel);
    let raw = match (mode, povm.plane_normal()) {
        (Mode::Min, Some(n)) => circle_search(&f, povm, &n, opts),
        _ => sphere_search(&f, opts),
    };
    let best = raw.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let tol = opts.value_tol * best.abs().max(1.0);
    let mut global: Vec<(BlochVector, f64, bool)> = raw.into_iter().filter(|r| r.1 <= best + tol).collect();
    global.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut clusters: Vec<(BlochVector, f64, bool)> = Vec::new();
    for g in global {
        if !clusters.iter().any(|c| c.0.angle_to(&g.0) < 1e-4) {
            clusters.push(g);
        }
    }
    let mut pts: Vec<BlochVector> = clusters.iter().map(|c| c.0).collect();
    sort_points(&mut pts);
    pts.iter()
        .map(|p| {
            let c = clusters.iter().find(|c| c.0 == *p).expect("present");
            let kind = if mode == Mode::Min { CriticalKind::Min } else { CriticalKind::Max };
            CriticalPoint {
                location: *p,
                value: sign * c.1,
                kind,
                type_label: type_label(p, povm),
                classifier_statistic: None,
                converged: c.2,
            }
        })
        .collect()
}

fn type_label(u: &BlochVector, povm: &HsPovm) -> TypeLabel {
    if povm.vectors().iter().any(|v| u.angle_to(&v.antipode()) < 1e-6) {
        return TypeLabel::I;
    }
    match stabilizer_order_near(u, povm) {
        0 | 1 => TypeLabel::NonInert,
        2 => TypeLabel::III,
        _ => TypeLabel::II,
    }
}

/// Stabilizer order, tolerant to the residual error of a numerical optimizer.
fn stabilizer_order_near(u: &BlochVector, povm: &HsPovm) -> usize {
    povm.group()
        .elements()
        .iter()
        .filter(|m| (*m * u.as_vector() - u.as_vector()).norm() < 1e-5)
        .count()
}

fn sphere_search<F>(f: &F, opts: &ExtremaOptions) -> Vec<(BlochVector, f64, bool)>
where
    F: Fn(&Vector3<f64>) -> f64 + Sync,
{
    let pts = fibonacci_sphere(opts.grid);
    let vals: Vec<f64> = pts.par_iter().map(f).collect();
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    let spacing = lattice_spacing(opts.grid);
    let radius = 4.0 * spacing;
    let cos_r = radius.cos();
    let max_seeds = 256;
    let mut seeds: Vec<Vector3<f64>> = Vec::new();
    for &i in &order {
        if seeds.len() >= max_seeds {
            break;
        }
        if seeds.iter().all(|s| s.dot(&pts[i]) < cos_r) {
            seeds.push(pts[i]);
        }
    }
    // Only basins whose sampled bottom is competitive are refined.
    let floor = vals[order[0]];
    let spread = (vals[order[order.len() - 1]] - floor).abs().max(1e-12);
    let cutoff = floor + 0.05 * spread;
    let seeds: Vec<Vector3<f64>> = seeds.into_iter().filter(|s| f(s) <= cutoff).collect();
    seeds
        .par_iter()
        .map(|s| {
            let r = minimize_on_sphere(f, s, spacing, 1e-10, opts.max_iter);
            (r.point, r.value, r.converged)
        })
        .collect()
}

fn circle_search<F>(f: &F, povm: &HsPovm, normal: &Vector3<f64>, opts: &ExtremaOptions) -> Vec<(BlochVector, f64, bool)>
where
    F: Fn(&Vector3<f64>) -> f64 + Sync,
{
    let e1 = povm.fiducial().as_vector();
    let e2 = normal.cross(&e1).normalize();
    let at = |phi: f64| e1 * phi.cos() + e2 * phi.sin();
    let m = (opts.grid / 10).clamp(2_000, 100_000);
    let dphi = 2.0 * PI / m as f64;
    let vals: Vec<f64> = (0..m).into_par_iter().map(|i| f(&at(i as f64 * dphi))).collect();
    (0..m)
        .filter(|&i| {
            let prev = vals[(i + m - 1) % m];
            let next = vals[(i + 1) % m];
            vals[i] <= prev && vals[i] <= next
        })
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&i| {
            let c = i as f64 * dphi;
            let (phi, v) = golden_section(|t| f(&at(t)), c - dphi, c + dphi, 1e-12);
            (BlochVector::normalize(at(phi)).expect("unit"), v, true)
        })
        .collect()
}

/// Largest angular mismatch of a bijective matching between two point sets,
/// or `None` if their sizes differ or some point has no partner within 1e-3.
pub fn orbit_match_error(found: &[BlochVector], expected: &[BlochVector]) -> Option<f64> {
    if found.len() != expected.len() {
        return None;
    }
    let mut used = vec![false; expected.len()];
    let mut worst: f64 = 0.0;
    for p in found {
        let (j, d) = expected
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, q)| (j, p.angle_to(q)))
            .min_by(|a, b| a.1.total_cmp(&b.1))?;
        if d > 1e-3 {
            return None;
        }
        used[j] = true;
        worst = worst.max(d);
    }
    Some(worst)
}

/// Antipodes of the POVM vectors (deduplicated).
pub fn antipodal_orbit(povm: &HsPovm) -> Vec<BlochVector> {
    let mut pts = dedup_points(povm.vectors().iter().map(|v| v.antipode()).collect(), 1e-8);
    sort_points(&mut pts);
    pts
}

/// Classifies a critical point lying on a rotation axis of the POVM's group.
pub fn classify_inert_point(u: &BlochVector, povm: &HsPovm) -> Result<CriticalPoint> {
    let group = povm.group();
    let value = entropy_at(u, povm, EntropyKernel::Shannon);
    let in_orbit = povm.vectors().iter().any(|v| u.angle_to(v) < 1e-8);
    let antipodal = povm.vectors().iter().any(|v| u.angle_to(&v.antipode()) < 1e-8);
    let stab = group.stabilizer(u).order();
    if !(stab >= 2 || in_orbit || antipodal) {
        return Err(Error::NotOnAxis);
    }
    if antipodal {
        return Ok(CriticalPoint {
            location: *u,
            value,
            kind: CriticalKind::Min,
            type_label: TypeLabel::I,
            classifier_statistic: None,
            converged: true,
        });
    }
    let v = povm.fiducial();
    let orbit = group.orbit(u);
    let s = 2.0 / orbit.len() as f64
        * orbit.iter().map(|x| {
            let c = x.dot(v);
            c * (1.0 + c).ln()
        }).sum::<f64>();
    if (s - 1.0).abs() < 1e-9 {
        return Err(Error::Degenerate(s));
    }
    let (kind, label) = if stab > 2 {
        (if s > 1.0 { CriticalKind::Min } else { CriticalKind::Max }, TypeLabel::II)
    } else {
        (probe_hessian(u, povm), TypeLabel::III)
    };
    Ok(CriticalPoint { location: *u, value, kind, type_label: label, classifier_statistic: Some(s), converged: true })
}

/// Second derivative of the entropy along the geodesic through `u` with unit
/// tangent `dir`, by central differences.
pub fn geodesic_second_derivative(u: &BlochVector, dir: &Vector3<f64>, povm: &HsPovm, step: f64) -> f64 {
    let p = u.as_vector();
    let f = |t: f64| entropy_at_vector(&geodesic(&p, dir, t), povm, EntropyKernel::Shannon);
    (f(step) - 2.0 * f(0.0) + f(-step)) / (step * step)
}

fn probe_hessian(u: &BlochVector, povm: &HsPovm) -> CriticalKind {
    let (e1, e2) = tangent_basis(&u.as_vector());
    let step = 1e-4;
    let a = geodesic_second_derivative(u, &e1, povm, step);
    let c = geodesic_second_derivative(u, &e2, povm, step);
    let d = geodesic_second_derivative(u, &(e1 + e2).normalize(), povm, step);
    // d = (a + 2b + c)/2 along the diagonal
    let b = d - (a + c) / 2.0;
    let tr = a + c;
    let det = a * c - b * b;
    if det < 0.0 {
        CriticalKind::Saddle
    } else if tr > 0.0 {
        CriticalKind::Min
    } else {
        CriticalKind::Max
    }
}

/// Defining function of the rectangle bifurcation threshold.
pub fn bifurcation_function(alpha: f64) -> f64 {
    let t = (alpha / 4.0).tan();
    (alpha / 2.0).cos() * (t * t).ln() + 2.0
}

/// Root of `cos(α/2) ln tan²(α/4) + 2` on `(0, π/2)`, by bisection.
pub fn rectangle_bifurcation_threshold() -> f64 {
    let (mut a, mut b) = (1e-6, PI / 2.0);
    while b - a > 1e-13 {
        let m = 0.5 * (a + b);
        if bifurcation_function(m) < 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Mean relative entropy over an `n`-point Fibonacci lattice.
pub fn sphere_average_relative_entropy(povm: &HsPovm, n: usize) -> f64 {
    let lnk = (povm.k() as f64).ln();
    let s: f64 = fibonacci_sphere(n)
        .par_iter()
        .map(|p| lnk - entropy_at_vector(p, povm, EntropyKernel::Shannon))
        .sum();
    s / n as f64
}

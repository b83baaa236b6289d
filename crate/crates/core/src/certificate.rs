//! Certification of the global minimizers of the measurement entropy.
//!
//! The Hermite interpolant `p` of the entropy profile is summed over the
//! POVM to obtain a group-invariant lower bound `P(u) = ln(k/2) + (2/k) Σⱼ p(u·vⱼ)`
//! which touches the entropy on the antipodal orbit. Its restriction to the
//! sphere is expanded in primary invariants and minimized family by family.

use std::time::Instant;

use nalgebra::{DMatrix, DVector, Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebraic::QSqrt5;
use crate::bloch::{BlochVector, EntropyKernel};
use crate::catalog::{interpolation_set, make_hs_povm, Family, HsPovm};
use crate::entropy::{antipodal_orbit, entropy_at_vector, orbit_match_error};
use crate::error::{Error, Result};
use crate::groups::{dedup_points, sort_points, TAU};
use crate::hermite::{hermite_interpolate, hermite_newton, nodes_for, shannon_values_interval, verify_below};
use crate::hermite::{BelowCheck, HermitePolynomial, KernelProfile, Node};
use crate::interval::Interval;
use crate::invariants::{i10, i4, i6, i6_prime, j15_squared_generic, orbit_map_icosahedral};
use crate::scalar::{rational_to_f64, Poly, Scalar};
use crate::sphere::{fibonacci_sphere, tangent_basis};
use crate::sturm::{Bound, SturmChain};

/// Working precisions tried in turn by the interval Sturm step.
pub const PRECISION_LADDER: [u32; 6] = [200, 256, 320, 384, 448, 512];

/// Ladder entries at or above `min_prec`, starting with `min_prec` itself.
pub fn ladder_from(min_prec: u32) -> Vec<u32> {
    let mut v = vec![min_prec];
    v.extend(PRECISION_LADDER.iter().copied().filter(|&p| p > min_prec));
    v
}

const EXPANSION_CHECKPOINTS: usize = 50;
const CONSTANT_TOL: f64 = 1e-9;

/// The lower-bound polynomial `P` as an evaluator on `R³`.
#[derive(Debug, Clone)]
pub struct LowerBound {
    poly: HermitePolynomial,
    vectors: Vec<Vector3<f64>>,
    shift: f64,
    weight: f64,
}

impl LowerBound {
    /// `Σⱼ p(u·vⱼ)`.
    pub fn orbit_sum(&self, u: &Vector3<f64>) -> f64 {
        self.vectors.iter().map(|v| self.poly.eval(u.dot(v))).sum()
    }

    pub fn eval(&self, u: &Vector3<f64>) -> f64 {
        self.shift + self.weight * self.orbit_sum(u)
    }

    pub fn polynomial(&self) -> &HermitePolynomial {
        &self.poly
    }
}

/// Builds `P` from a verified interpolant. For the Shannon kernel this is
/// the entropy bound itself; for generalized kernels it bounds `Σⱼ f(u·vⱼ)`.
pub fn assemble_lower_bound(povm: &HsPovm, p: &HermitePolynomial) -> LowerBound {
    let k = povm.k() as f64;
    let (shift, weight) = match p.profile.kernel {
        EntropyKernel::Shannon => ((k / 2.0).ln(), 2.0 / k),
        _ => (0.0, 1.0),
    };
    LowerBound {
        poly: p.clone(),
        vectors: povm.vectors().iter().map(|v| v.as_vector()).collect(),
        shift,
        weight,
    }
}

/// Coefficients of the orbit sum `S(u) = Σⱼ p(u·vⱼ) = A + B·b₁ + C·b₂ + D·b₃`
/// on the sphere; `P = ln(k/2) + (2/k)S` for the Shannon kernel.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct InvariantCoefficients {
    pub a: f64,
    pub b: Option<f64>,
    pub c: Option<f64>,
    pub d: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Expansion {
    pub coefficients: InvariantCoefficients,
    /// Names of the non-constant basis functions, in order B, C, D.
    pub basis: Vec<String>,
    pub probes: Vec<[f64; 3]>,
    /// Largest deviation of the model from `P` at the checkpoints.
    pub residual: f64,
    /// True when the checkpoints lie on the POVM circle rather than the sphere.
    pub on_circle: bool,
}

type BasisFn = fn(&[f64; 3]) -> f64;

fn b_i4(p: &[f64; 3]) -> f64 {
    i4(&p[0], &p[1], &p[2])
}
fn b_i6(p: &[f64; 3]) -> f64 {
    i6(&p[0], &p[1], &p[2])
}
fn b_i6p(p: &[f64; 3]) -> f64 {
    i6_prime(&p[0], &p[1], &p[2], &TAU)
}
fn b_i10(p: &[f64; 3]) -> f64 {
    i10(&p[0], &p[1], &p[2], &TAU)
}
fn b_i6p_sq(p: &[f64; 3]) -> f64 {
    b_i6p(p).powi(2)
}

fn unit3(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    v.map(|c| c / n)
}

/// Inert probe points in the canonical orientation.
pub fn probe_point(name: &str) -> Option<[f64; 3]> {
    Some(match name {
        "x1" => [0.0, 0.0, 1.0],
        "x2" => unit3([0.0, 1.0, 1.0]),
        "x3" => unit3([1.0, 1.0, 1.0]),
        "x5" => unit3([0.0, TAU, 1.0]),
        "x6" => unit3([0.0, 1.0 / TAU, TAU]),
        "g" => [2.0 / 7.0, 3.0 / 7.0, 6.0 / 7.0],
        _ => return None,
    })
}

fn family_basis(family: Family) -> (Vec<(&'static str, BasisFn)>, Vec<&'static str>) {
    match family {
        Family::Cube => (vec![("I4", b_i4)], vec!["x1", "x3"]),
        Family::Cuboctahedron => (vec![("I4", b_i4), ("I6", b_i6)], vec!["x1", "x2", "x3"]),
        Family::Dodecahedron => (vec![("I6'", b_i6p)], vec!["x1", "x5"]),
        Family::Icosidodecahedron => (
            vec![("I6'", b_i6p), ("I10", b_i10), ("I6'^2", b_i6p_sq)],
            vec!["x1", "x5", "x6", "g"],
        ),
        _ => (vec![], vec![]),
    }
}

fn is_planar_family(family: Family) -> bool {
    matches!(family, Family::Ngon(_))
}

/// Checkpoints on the sphere, or on the POVM circle for polygons.
fn checkpoints(povm: &HsPovm, n: usize, seed: u64) -> Vec<Vector3<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if is_planar_family(povm.family()) {
        let normal = povm.plane_normal().unwrap_or_else(Vector3::z);
        let (e1, e2) = tangent_basis(&normal);
        (0..n)
            .map(|_| {
                let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                e1 * phi.cos() + e2 * phi.sin()
            })
            .collect()
    } else {
        (0..n)
            .map(|_| loop {
                let v = Vector3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                let r = v.norm();
                if r > 1e-3 && r <= 1.0 {
                    break v / r;
                }
            })
            .collect()
    }
}

/// Expands the orbit sum on the sphere in the family's invariant basis by
/// solving the linear system at the inert probe points. Constant families
/// are fitted at `−v`.
pub fn expand_in_invariants(povm: &HsPovm, lb: &LowerBound) -> Result<Expansion> {
    let family = povm.family();
    if !family.is_highly_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let (basis, probe_names) = family_basis(family);
    let probes: Vec<[f64; 3]> = if basis.is_empty() {
        vec![povm.fiducial().antipode().to_array()]
    } else {
        probe_names.iter().map(|n| probe_point(n).expect("known probe")).collect()
    };
    let m = basis.len() + 1;
    let mut a = DMatrix::zeros(m, m);
    let mut rhs = DVector::zeros(m);
    for (i, p) in probes.iter().enumerate() {
        a[(i, 0)] = 1.0;
        for (j, (_, f)) in basis.iter().enumerate() {
            a[(i, j + 1)] = f(p);
        }
        rhs[i] = lb.orbit_sum(&Vector3::from(*p));
    }
    let sv = a.clone().singular_values();
    let cond = sv.max() / sv.min();
    if !cond.is_finite() || cond > 1e8 {
        return Err(Error::IllConditioned(format!("probe system condition number {cond:e}")));
    }
    let sol = a.lu().solve(&rhs).ok_or_else(|| Error::IllConditioned("singular probe system".into()))?;
    let model = |p: &[f64; 3]| sol[0] + basis.iter().enumerate().map(|(j, (_, f))| sol[j + 1] * f(p)).sum::<f64>();
    let residual = checkpoints(povm, EXPANSION_CHECKPOINTS, 42)
        .iter()
        .map(|u| (lb.orbit_sum(u) - model(&[u.x, u.y, u.z])).abs())
        .fold(0.0, f64::max);
    let coefficients = InvariantCoefficients {
        a: sol[0],
        b: (m > 1).then(|| sol[1]),
        c: (m > 2).then(|| sol[2]),
        d: (m > 3).then(|| sol[3]),
    };
    Ok(Expansion {
        coefficients,
        basis: basis.iter().map(|(n, _)| n.to_string()).collect(),
        probes,
        residual,
        on_circle: is_planar_family(family),
    })
}

/// Outcome of the icosidodecahedral positivity argument.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PositivityReport {
    /// Real roots of `Q(θ₁) = J₁₅²(θ₁, −(B/C)θ₁ − (D/C)θ₁²)/θ₁²`.
    pub root_count: usize,
    pub precision_used: u32,
    /// Midpoints of the coefficients of `Q`, ascending.
    pub q_coefficients: Vec<f64>,
    /// Minimum of `Bθ₁ + Cθ₂ + Dθ₁²` over sampled orbit-map images.
    pub sampled_min: f64,
    pub verdict: bool,
}

/// Coefficient enclosures `(B, C, D)` of the icosidodecahedral bound.
#[derive(Debug, Clone)]
pub struct IntervalCoefficients {
    pub b: Interval,
    pub c: Interval,
    pub d: Interval,
    pub prec: u32,
}

fn to_pair(x: &Interval) -> (f64, f64) {
    (rational_to_f64(x.lo()), rational_to_f64(x.hi()))
}

/// Builds `Q` with interval coefficients and counts its real roots.
fn sturm_quartic(b: &Interval, c: &Interval, d: &Interval, prec: u32) -> Result<(usize, Vec<f64>)> {
    let tau = Interval::golden(prec);
    let nb = (-b.clone()).checked_div(c).ok_or_else(|| Error::InvalidArgument("C encloses zero".into()))?;
    let nd = (-d.clone()).checked_div(c).ok_or_else(|| Error::InvalidArgument("C encloses zero".into()))?;
    let t1: Poly<Interval> = Poly::x();
    let t2 = Poly::new(vec![Interval::zero(), nb, nd]);
    let j = j15_squared_generic(&t1, &t2, &Poly::constant(tau));
    let q = j
        .shift_down(2)
        .ok_or_else(|| Error::ChainDegenerate("J15² does not vanish to second order".into()))?;
    let mids = q.coeffs().iter().map(|c| c.mid()).collect();
    let chain = SturmChain::new(&q).map_err(|e| reprec(e, prec))?;
    let n = chain.count(&Bound::NegInf, &Bound::PosInf).map_err(|e| reprec(e, prec))?;
    Ok((n, mids))
}

fn reprec(e: Error, prec: u32) -> Error {
    match e {
        Error::AmbiguousSign { .. } => Error::AmbiguousSign { precision: prec },
        other => other,
    }
}

fn sampled_p1_min(b: f64, c: f64, d: f64) -> f64 {
    fibonacci_sphere(10_000)
        .iter()
        .map(|w| {
            let (t1, t2) = orbit_map_icosahedral(&[w.x, w.y, w.z]);
            b * t1 + c * t2 + d * t1 * t1
        })
        .fold(f64::INFINITY, f64::min)
}

/// Decides whether `P₁ = Bθ₁ + Cθ₂ + Dθ₁²` is nonnegative on the orbit-map
/// range with zero only at the origin. The doubles are converted exactly.
pub fn icosidodeca_positivity(b: f64, c: f64, d: f64) -> Result<PositivityReport> {
    if !(b.is_finite() && c.is_finite() && d.is_finite()) {
        return Err(Error::InvalidArgument("non-finite coefficient".into()));
    }
    if c.abs() < 1e-12 {
        return Err(Error::InvalidArgument("C vanishes; the zero-level parabola is undefined".into()));
    }
    let exact = |x: f64| Interval::from_f64(x, 0);
    let mut last = None;
    for &prec in &PRECISION_LADDER {
        match sturm_quartic(&exact(b), &exact(c), &exact(d), prec) {
            Ok((root_count, q_coefficients)) => {
                let sampled_min = sampled_p1_min(b, c, d);
                return Ok(PositivityReport {
                    root_count,
                    precision_used: prec,
                    q_coefficients,
                    sampled_min,
                    verdict: root_count == 0 && sampled_min >= -1e-12,
                });
            }
            Err(e @ Error::AmbiguousSign { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap_or(Error::AmbiguousSign { precision: 512 }))
}

fn snap_interval(x: f64, prec: u32) -> Result<Interval> {
    QSqrt5::snap(x, 1e-12)
        .map(|q| q.to_interval(prec))
        .ok_or_else(|| Error::Unsupported(format!("{x} is not in Q(√5)")))
}

fn interval_dot(a: &[Interval; 3], b: &[Interval; 3]) -> Interval {
    a[0].clone() * b[0].clone() + a[1].clone() * b[1].clone() + a[2].clone() * b[2].clone()
}

/// Encloses `(B, C, D)` for the icosidodecahedron at the given precision,
/// repeating the interpolation and probe solve in interval arithmetic.
pub fn icosidodeca_coefficients_interval(povm: &HsPovm, prec: u32) -> Result<IntervalCoefficients> {
    if povm.family() != Family::Icosidodecahedron {
        return Err(Error::Unsupported("interval coefficients only for the icosidodecahedron".into()));
    }
    let ts = interpolation_set(povm);
    let nodes = nodes_for(&ts);
    let tnodes: Vec<Interval> = ts.iter().map(|&t| snap_interval(t, prec)).collect::<Result<_>>()?;
    let mults: Vec<u32> = nodes.iter().map(|n| n.multiplicity).collect();
    let mut values = Vec::with_capacity(ts.len());
    for t in &tnodes {
        let h0 = shannon_values_interval(t, 0)?;
        let h1 = if t.sign() == Some(std::cmp::Ordering::Less) && t.mid() <= -1.0 {
            None
        } else {
            shannon_values_interval(t, 1).ok()
        };
        values.push((h0, h1));
    }
    let p = hermite_newton(&tnodes, &mults, |i, j| match j {
        0 => values[i].0.clone(),
        _ => values[i].1.clone().expect("slope at interior node"),
    })?;
    let vecs: Vec<[Interval; 3]> = povm
        .vectors()
        .iter()
        .map(|v| Ok([snap_interval(v.x(), prec)?, snap_interval(v.y(), prec)?, snap_interval(v.z(), prec)?]))
        .collect::<Result<_>>()?;
    let tau = Interval::golden(prec);
    let q = |n: i64, d: i64| Interval::from_ratio(n, d, prec);
    let z = Interval::zero();
    let norm = |x: Interval| x.sqrt().expect("positive");
    let s5 = norm(tau.clone() + q(2, 1));
    let s3 = norm(q(3, 1));
    let x1 = [z.clone(), z.clone(), Interval::one()];
    let x5 = [z.clone(), tau.clone().checked_div(&s5).unwrap(), Interval::one().checked_div(&s5).unwrap()];
    let x6 = [
        z.clone(),
        Interval::one().checked_div(&(tau.clone() * s3.clone())).unwrap(),
        tau.clone().checked_div(&s3).unwrap(),
    ];
    let g = [q(2, 7), q(3, 7), q(6, 7)];
    let sum_at = |u: &[Interval; 3]| {
        vecs.iter().fold(Interval::zero(), |acc, v| acc + p.eval(&interval_dot(u, v)))
    };
    let s1 = sum_at(&x1);
    let mut rows = Vec::new();
    for u in [&x5, &x6, &g] {
        let th1 = i6_prime(&u[0], &u[1], &u[2], &tau);
        let th2 = i10(&u[0], &u[1], &u[2], &tau);
        let dp = sum_at(u) - s1.clone();
        rows.push([th1.clone(), th2, th1.clone() * th1, dp]);
    }
    let det3 = |c0: usize, c1: usize, c2: usize| {
        let m = |r: usize, c: usize| rows[r][c].clone();
        m(0, c0) * (m(1, c1) * m(2, c2) - m(1, c2) * m(2, c1)) - m(0, c1) * (m(1, c0) * m(2, c2) - m(1, c2) * m(2, c0))
            + m(0, c2) * (m(1, c0) * m(2, c1) - m(1, c1) * m(2, c0))
    };
    let det = det3(0, 1, 2);
    let div = |x: Interval| {
        x.checked_div(&det)
            .ok_or_else(|| Error::IllConditioned("probe determinant encloses zero".into()))
    };
    Ok(IntervalCoefficients {
        b: div(det3(3, 1, 2))?,
        c: div(det3(0, 3, 2))?,
        d: div(det3(0, 1, 3))?,
        prec,
    })
}

/// Closed forms of the icosidodecahedral coefficients, enclosed at `prec`.
pub fn icosidodeca_closed_forms(prec: u32) -> (Interval, Interval, Interval) {
    let q = |n: i64, d: i64| Interval::from_ratio(n, d, prec);
    let s5 = Interval::sqrt5(prec);
    let ln = |n: i64| q(n, 1).ln().expect("positive");
    let (l2, l3, l5) = (ln(2), ln(3), ln(5));
    let ac5 = s5.acoth().expect("√5 > 1");
    let ac35 = q(3, 1).checked_div(&s5).unwrap().acoth().expect("3/√5 > 1");
    let l7 = (q(7, 1) + q(3, 1) * s5.clone()).ln().expect("positive");
    let b = -(q(1, 50) * (s5.clone() - q(2, 1)))
        * (q(7122, 1) * s5.clone() * ac5.clone()
            + q(3, 1) * (q(2773, 1) * s5.clone() - q(3728, 1)) * l2.clone()
            + q(39575, 1) * l3.clone()
            - q(4700, 1) * l5.clone()
            - q(8319, 1) * s5.clone() * l7);
    let c = q(1, 180)
        * (q(47970, 1) * ac5.clone() - q(108414, 1) * ac35.clone()
            + s5.clone() * (q(51120, 1) * l3.clone() - q(16352, 1) * l2.clone() - q(5265, 1) * l5.clone()));
    let d = q(29, 900)
        * (q(9, 1) - q(4, 1) * s5.clone())
        * (q(53766, 1) * s5.clone() * ac35 - q(23418, 1) * s5 * ac5 + q(34816, 1) * l2 - q(126450, 1) * l3
            + q(15075, 1) * l5);
    (b, c, d)
}

/// Rigorous Sturm step for the icosidodecahedron, raising the precision
/// until every sign in the chain is decided.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SturmReport {
    pub root_count: usize,
    pub precision_used: u32,
    pub b: (f64, f64),
    pub c: (f64, f64),
    pub d: (f64, f64),
    pub q_coefficients: Vec<f64>,
    /// Whether the closed forms agree with the enclosures to 1e-9.
    pub closed_forms_agree: bool,
}

pub fn icosidodeca_sturm(povm: &HsPovm) -> Result<SturmReport> {
    icosidodeca_sturm_from(povm, PRECISION_LADDER[0])
}

/// As [`icosidodeca_sturm`], starting the ladder at `min_prec` bits.
pub fn icosidodeca_sturm_from(povm: &HsPovm, min_prec: u32) -> Result<SturmReport> {
    let mut last = None;
    for prec in ladder_from(min_prec) {
        let coeffs = match icosidodeca_coefficients_interval(povm, prec) {
            Ok(c) => c,
            Err(e @ Error::IllConditioned(_)) => {
                last = Some(e);
                continue;
            }
            Err(e) => return Err(e),
        };
        match sturm_quartic(&coeffs.b, &coeffs.c, &coeffs.d, prec) {
            Ok((root_count, q_coefficients)) => {
                let (pb, pc, pd) = icosidodeca_closed_forms(prec);
                let agree = [(&coeffs.b, &pb), (&coeffs.c, &pc), (&coeffs.d, &pd)]
                    .iter()
                    .all(|(x, y)| (x.mid() - y.mid()).abs() < 1e-9);
                return Ok(SturmReport {
                    root_count,
                    precision_used: prec,
                    b: to_pair(&coeffs.b),
                    c: to_pair(&coeffs.c),
                    d: to_pair(&coeffs.d),
                    q_coefficients,
                    closed_forms_agree: agree,
                });
            }
            Err(e @ Error::AmbiguousSign { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap_or(Error::AmbiguousSign { precision: min_prec.max(512) }))
}

/// Points `w` on the sphere (on the circle for polygons) with every `w·u`
/// in `T`. Any global minimizer of the entropy lies in this set.
pub fn minimizer_candidates(povm: &HsPovm, nodes: &[f64]) -> Vec<BlochVector> {
    const TOL: f64 = 1e-9;
    let vs: Vec<Vector3<f64>> = povm.vectors().iter().map(|v| v.as_vector()).collect();
    let in_t = |x: f64| nodes.iter().any(|&t| (t - x).abs() < TOL);
    let admissible = |w: &Vector3<f64>| vs.iter().all(|v| in_t(w.dot(v)));
    let mut out = Vec::new();
    let a = vs[0];
    let b = vs.iter().copied().max_by(|x, y| a.cross(x).norm().total_cmp(&a.cross(y).norm())).unwrap();
    if a.cross(&b).norm() < 1e-9 {
        for &t in nodes {
            if (t.abs() - 1.0).abs() < TOL {
                let w = a * t.signum();
                if admissible(&w) {
                    out.push(w);
                }
            }
        }
    } else if let (true, Some(n)) = (is_planar_family(povm.family()), povm.plane_normal()) {
        let m = nalgebra::Matrix2::new(a.dot(&a), a.dot(&b), b.dot(&a), b.dot(&b));
        let inv = m.try_inverse().expect("independent");
        for &s in nodes {
            for &t in nodes {
                // w = αa + βb with w·a = s, w·b = t
                let c = inv * nalgebra::Vector2::new(s, t);
                let w = a * c[0] + b * c[1];
                if (w.norm() - 1.0).abs() < TOL && w.dot(&n).abs() < TOL && admissible(&w) {
                    out.push(w);
                }
            }
        }
    } else {
        let c = vs
            .iter()
            .copied()
            .max_by(|x, y| a.cross(&b).dot(x).abs().total_cmp(&a.cross(&b).dot(y).abs()))
            .unwrap();
        let m = Matrix3::from_rows(&[a.transpose(), b.transpose(), c.transpose()]);
        let inv = m.try_inverse().expect("three independent vectors");
        for &x in nodes {
            for &y in nodes {
                for &z in nodes {
                    let w = inv * Vector3::new(x, y, z);
                    if (w.norm() - 1.0).abs() < TOL && admissible(&w) {
                        out.push(w);
                    }
                }
            }
        }
    }
    let mut pts = dedup_points(out.into_iter().filter_map(|w| BlochVector::normalize(w).ok()).collect(), 1e-8);
    sort_points(&mut pts);
    pts
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HermiteCertificate {
    pub family: Family,
    pub kernel: EntropyKernel,
    pub nodes: Vec<Node>,
    /// Monomial coefficients of the interpolant, ascending.
    pub polynomial: Vec<f64>,
    pub degree: usize,
    /// Bound from the literal double-coset count.
    pub degree_bound: usize,
    /// Bound from the number of distinct inner products.
    pub value_degree_bound: usize,
    pub interpolation_residual: (f64, f64),
    pub below_check: BelowCheck,
    pub basis: Vec<String>,
    pub coefficients: InvariantCoefficients,
    pub expansion_residual: f64,
    pub probes: Vec<[f64; 3]>,
    /// `−B/(3C)` for the cuboctahedron.
    pub beta: Option<f64>,
    /// Values of `P` at the inert probes compared by the dispatch.
    pub probe_values: Vec<(String, f64)>,
    /// `P(−v)`, equal to the entropy there.
    pub minimum_value: f64,
    pub orbit_min_verdict: bool,
    pub uniqueness_verdict: bool,
    pub candidate_count: usize,
    pub sturm_root_count: Option<usize>,
    pub sturm: Option<SturmReport>,
    pub precision_used: Option<u32>,
    pub valid: bool,
    pub reason: Option<String>,
    pub elapsed_ms: f64,
}

/// Runs the full pipeline for a named highly symmetric family.
pub fn certify_minimum(povm: &HsPovm) -> Result<HermiteCertificate> {
    certify_minimum_from(povm, PRECISION_LADDER[0])
}

/// As [`certify_minimum`], with the interval Sturm step starting at `min_prec` bits.
pub fn certify_minimum_from(povm: &HsPovm, min_prec: u32) -> Result<HermiteCertificate> {
    let start = Instant::now();
    let family = povm.family();
    if !family.is_highly_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let ts = interpolation_set(povm);
    let nodes = nodes_for(&ts);
    let profile = KernelProfile::shannon();
    let p = hermite_interpolate(&profile, &nodes)?;
    let residual = crate::hermite::interpolation_residuals(&p);
    let below = verify_below(&p);
    let lb = assemble_lower_bound(povm, &p);
    let expansion = expand_in_invariants(povm, &lb)?;
    let dcp = povm.group().double_coset_profile(povm.fiducial());
    let stab = povm.group().stabilizer(povm.fiducial()).order();
    let orbit_size = povm.group().orbit(povm.fiducial()).len();

    let minus_v = povm.fiducial().antipode().as_vector();
    let minimum_value = lb.eval(&minus_v);
    let coeffs = expansion.coefficients.clone();
    let mut reasons: Vec<String> = Vec::new();
    let mut beta = None;
    let mut probe_values = Vec::new();
    let mut sturm = None;

    let orbit_min_verdict = match family {
        Family::Digon
        | Family::Ngon(_)
        | Family::Tetrahedron
        | Family::Octahedron
        | Family::Icosahedron => {
            let ok = expansion.residual < CONSTANT_TOL;
            if !ok {
                reasons.push(format!("P not constant (spread {:e})", expansion.residual));
            }
            ok
        }
        Family::Cube => {
            let b = coeffs.b.expect("cube has B");
            if b <= 0.0 {
                reasons.push(format!("B = {b} is not positive"));
            }
            b > 0.0
        }
        Family::Dodecahedron => {
            let b = coeffs.b.expect("dodecahedron has B");
            if b >= 0.0 {
                reasons.push(format!("B = {b} is not negative"));
            }
            b < 0.0
        }
        Family::Cuboctahedron => {
            let (b, c) = (coeffs.b.unwrap(), coeffs.c.unwrap());
            let bt = -b / (3.0 * c);
            beta = Some(bt);
            for name in ["x1", "x2", "x3"] {
                probe_values.push((name.to_string(), lb.eval(&Vector3::from(probe_point(name).unwrap()))));
            }
            if bt > 0.25 && bt < 0.5 {
                let x4 = Vector3::new((4.0 * bt - 1.0).sqrt(), (1.0 - 2.0 * bt).sqrt(), (1.0 - 2.0 * bt).sqrt());
                probe_values.push(("x4".to_string(), lb.eval(&x4)));
            }
            let at_x2 = probe_values[1].1;
            let ok = probe_values.iter().filter(|(n, _)| n != "x2").all(|(_, v)| *v > at_x2 + 1e-9);
            if !ok {
                reasons.push("x2 is not the strict minimum among the critical orbits".into());
            }
            ok
        }
        Family::Icosidodecahedron => match icosidodeca_sturm_from(povm, min_prec) {
            Ok(rep) => {
                let sampled = sampled_p1_min(coeffs.b.unwrap(), coeffs.c.unwrap(), coeffs.d.unwrap());
                let ok = rep.root_count == 0 && sampled >= -1e-12;
                if rep.root_count != 0 {
                    reasons.push(format!("Q has {} real roots", rep.root_count));
                }
                if sampled < -1e-12 {
                    reasons.push(format!("P1 negative on a sample ({sampled:e})"));
                }
                sturm = Some(rep);
                ok
            }
            Err(e) => {
                reasons.push(format!("Sturm step failed: {e}"));
                false
            }
        },
        _ => unreachable!("checked highly symmetric"),
    };

    if !below.passed {
        reasons.push(format!("interpolant not below h at t = {:?}", below.offending));
    }
    if expansion.residual >= 1e-9 {
        reasons.push(format!("expansion residual {:e}", expansion.residual));
    }
    let candidates = minimizer_candidates(povm, &ts);
    let uniqueness_verdict = orbit_match_error(&candidates, &antipodal_orbit(povm)).is_some_and(|e| e < 1e-6);
    if !uniqueness_verdict {
        reasons.push(format!("{} minimizer candidates do not match the antipodal orbit", candidates.len()));
    }
    let degree = p.degree(1e-10);
    let valid = reasons.is_empty() && orbit_min_verdict;
    Ok(HermiteCertificate {
        family,
        kernel: EntropyKernel::Shannon,
        nodes,
        polynomial: p.coefficients.clone(),
        degree,
        degree_bound: crate::groups::degree_bound(&dcp, orbit_size, stab),
        value_degree_bound: dcp.value_degree_bound(),
        interpolation_residual: residual,
        below_check: below,
        basis: expansion.basis,
        coefficients: coeffs,
        expansion_residual: expansion.residual,
        probes: expansion.probes,
        beta,
        probe_values,
        minimum_value,
        orbit_min_verdict,
        uniqueness_verdict,
        candidate_count: candidates.len(),
        sturm_root_count: sturm.as_ref().map(|s| s.root_count),
        precision_used: sturm.as_ref().map(|s| s.precision_used),
        sturm,
        valid,
        reason: (!reasons.is_empty()).then(|| reasons.join("; ")),
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Certificate for a generalized entropy kernel: interpolate its profile,
/// verify from below and test whether the lower bound is constant.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KernelCertificate {
    pub family: Family,
    pub kernel: EntropyKernel,
    pub degree: usize,
    pub below_check: BelowCheck,
    /// `f − p ≥ −1e-12` on the verification grid.
    pub below: bool,
    /// Equality `f = p` occurs only at the nodes; fails when the profile is
    /// itself a low-degree polynomial (Tsallis order 2).
    pub contact_only_at_nodes: bool,
    pub spread: f64,
    pub constant: bool,
    /// `Σⱼ f(−v·vⱼ)`, the kernel sum at the antipode.
    pub minimum_sum: f64,
}

pub fn kernel_certificate(povm: &HsPovm, kernel: EntropyKernel) -> Result<KernelCertificate> {
    if !povm.family().is_highly_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let profile = KernelProfile::new(kernel, povm.k())?;
    let ts = interpolation_set(povm);
    let p = hermite_interpolate(&profile, &nodes_for(&ts))?;
    let below = verify_below(&p);
    let lb = assemble_lower_bound(povm, &p);
    let pts = checkpoints(povm, 200, 7);
    let vals: Vec<f64> = pts.iter().map(|u| lb.eval(u)).collect();
    let spread = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - vals.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(KernelCertificate {
        family: povm.family(),
        kernel,
        degree: p.degree(1e-10),
        below: below.min_gap >= -1e-12,
        contact_only_at_nodes: below.passed,
        below_check: below,
        spread,
        constant: spread < CONSTANT_TOL,
        minimum_sum: lb.eval(&povm.fiducial().antipode().as_vector()),
    })
}

/// Convenience wrapper taking a family name.
pub fn certify_family(family: Family) -> Result<HermiteCertificate> {
    certify_minimum(&make_hs_povm(family)?)
}

/// Largest violation of `H(u) ≥ P(u)` over `n` random unit vectors.
pub fn lower_bound_violation(povm: &HsPovm, lb: &LowerBound, n: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let v = loop {
                let v = Vector3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                let r: f64 = v.norm();
                if r > 1e-3 && r <= 1.0 {
                    break v / r;
                }
            };
            lb.eval(&v) - entropy_at_vector(&v, povm, EntropyKernel::Shannon)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn cube_coefficient() {
        let cert = certify_family(Family::Cube).unwrap();
        assert!(cert.valid, "{:?}", cert.reason);
        assert_abs_diff_eq!(cert.coefficients.b.unwrap(), 0.375 * (27.0f64 / 16.0).ln(), epsilon = 1e-10);
    }

    #[test]
    fn cuboctahedron_coefficients() {
        let cert = certify_family(Family::Cuboctahedron).unwrap();
        assert!(cert.valid, "{:?}", cert.reason);
        let (l2, l3) = (2f64.ln(), 3f64.ln());
        assert_abs_diff_eq!(cert.coefficients.b.unwrap(), 520.0 / 9.0 * l2 - 37.0 * l3, epsilon = 1e-9);
        assert_abs_diff_eq!(cert.coefficients.c.unwrap(), -364.0 / 9.0 * l2 + 26.0 * l3, epsilon = 1e-9);
        assert_abs_diff_eq!(cert.beta.unwrap(), 0.3775, epsilon = 1e-4);
    }

    #[test]
    fn dodecahedron_sign() {
        let cert = certify_family(Family::Dodecahedron).unwrap();
        assert!(cert.valid, "{:?}", cert.reason);
        assert_abs_diff_eq!(cert.coefficients.b.unwrap(), -0.06509, epsilon = 1e-4);
    }

    #[test]
    fn constant_families() {
        for f in [Family::Digon, Family::Tetrahedron, Family::Octahedron, Family::Icosahedron, Family::Ngon(5)] {
            let cert = certify_family(f).unwrap();
            assert!(cert.valid, "{f}: {:?}", cert.reason);
            assert!(cert.expansion_residual < 1e-9);
        }
    }

    #[test]
    fn positivity_guards() {
        assert!(icosidodeca_positivity(-1.0, 0.0, 0.0).is_err());
        assert!(icosidodeca_positivity(-1.0, 1e-14, 0.0).is_err());
    }

    #[test]
    fn closed_forms_enclose_small_intervals() {
        let (b, c, d) = icosidodeca_closed_forms(200);
        assert!(b.width() < 1e-40 && c.width() < 1e-40 && d.width() < 1e-40);
        assert_abs_diff_eq!(b.mid(), -0.0886504, epsilon = 1e-6);
        assert_abs_diff_eq!(c.mid(), 0.174294, epsilon = 1e-6);
        assert_abs_diff_eq!(d.mid(), -0.0288943, epsilon = 1e-6);
    }

    #[test]
    fn candidates_for_octahedron() {
        let povm = make_hs_povm(Family::Octahedron).unwrap();
        let c = minimizer_candidates(&povm, &interpolation_set(&povm));
        assert_eq!(c.len(), 6);
    }
}

#[cfg(test)]
mod icosidodecahedron {
    use super::*;

    #[test]
    fn sturm_verdict() {
        let cert = certify_family(Family::Icosidodecahedron).unwrap();
        let rep = cert.sturm.as_ref().unwrap();
        eprintln!("{rep:?} {:?} ms={}", cert.coefficients, cert.elapsed_ms);
        assert!(cert.valid, "{:?}", cert.reason);
        assert_eq!(cert.sturm_root_count, Some(0));
        assert!(cert.precision_used.unwrap() <= 512);
        assert!(rep.closed_forms_agree);
        assert!((rep.b.0 - cert.coefficients.b.unwrap()).abs() < 1e-9);
    }
}

//! Sphere sampling and a small derivative-free local optimizer working on
//! tangent-plane charts.

use nalgebra::Vector3;

use crate::bloch::BlochVector;

/// Fibonacci lattice of `n` nearly uniform points on the unit sphere.
pub fn fibonacci_sphere(n: usize) -> Vec<Vector3<f64>> {
    let golden_angle = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden_angle * i as f64;
            Vector3::new(r * phi.cos(), r * phi.sin(), z)
        })
        .collect()
}

/// Typical spacing between neighbours of an `n`-point lattice.
pub fn lattice_spacing(n: usize) -> f64 {
    (4.0 * std::f64::consts::PI / n.max(1) as f64).sqrt()
}

/// Orthonormal basis of the tangent plane at `p`.
pub fn tangent_basis(p: &Vector3<f64>) -> (Vector3<f64>, Vector3<f64>) {
    let helper = if p.x.abs() < 0.6 { Vector3::x() } else if p.y.abs() < 0.6 { Vector3::y() } else { Vector3::z() };
    let e1 = (helper - p * p.dot(&helper)).normalize();
    let e2 = p.cross(&e1).normalize();
    (e1, e2)
}

/// Point reached from `p` along the geodesic with unit tangent `dir`.
pub fn geodesic(p: &Vector3<f64>, dir: &Vector3<f64>, t: f64) -> Vector3<f64> {
    p * t.cos() + dir * t.sin()
}

#[derive(Debug, Clone, Copy)]
pub struct LocalResult {
    pub point: BlochVector,
    pub value: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Nelder–Mead minimization of `f` on the sphere starting at `start`.
///
/// Works in the chart `(a, b) ↦ normalize(p + a e₁ + b e₂)` and re-centres the
/// chart after each pass so the chart distortion never matters. Stops when the
/// simplex diameter drops below `xtol` radians.
pub fn minimize_on_sphere<F>(f: &F, start: &Vector3<f64>, step: f64, xtol: f64, max_iter: usize) -> LocalResult
where
    F: Fn(&Vector3<f64>) -> f64,
{
    let mut p = start.normalize();
    let mut step = step;
    let mut total = 0;
    let mut converged = false;
    for _pass in 0..6 {
        let (e1, e2) = tangent_basis(&p);
        let chart = |a: f64, b: f64| (p + e1 * a + e2 * b).normalize();
        let g = |x: &[f64; 2]| f(&chart(x[0], x[1]));
        let (best, iters, ok) = nelder_mead_2d(&g, step, xtol, max_iter.saturating_sub(total));
        total += iters;
        let moved = (best[0] * best[0] + best[1] * best[1]).sqrt();
        p = chart(best[0], best[1]);
        if ok && moved < 10.0 * xtol {
            converged = true;
            break;
        }
        if total >= max_iter {
            break;
        }
        step = (moved * 2.0).clamp(xtol * 100.0, step);
    }
    let point = BlochVector::normalize(p).expect("unit");
    LocalResult { point, value: f(&p), converged, iterations: total }
}

fn nelder_mead_2d<G>(g: &G, step: f64, xtol: f64, max_iter: usize) -> ([f64; 2], usize, bool)
where
    G: Fn(&[f64; 2]) -> f64,
{
    let mut s = [[0.0, 0.0], [step, 0.0], [0.0, step]];
    let mut fs = s.map(|x| g(&x));
    let mut it = 0;
    while it < max_iter {
        // order
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&a, &b| fs[a].total_cmp(&fs[b]));
        s = idx.map(|i| s[i]);
        fs = idx.map(|i| fs[i]);
        let diam = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .map(|(i, j)| ((s[i][0] - s[j][0]).powi(2) + (s[i][1] - s[j][1]).powi(2)).sqrt())
            .fold(0.0, f64::max);
        if diam < xtol {
            return (s[0], it, true);
        }
        it += 1;
        let c = [(s[0][0] + s[1][0]) / 2.0, (s[0][1] + s[1][1]) / 2.0];
        let at = |t: f64| [c[0] + t * (s[2][0] - c[0]), c[1] + t * (s[2][1] - c[1])];
        let xr = at(-1.0);
        let fr = g(&xr);
        if fr < fs[0] {
            let xe = at(-2.0);
            let fe = g(&xe);
            if fe < fr {
                s[2] = xe;
                fs[2] = fe;
            } else {
                s[2] = xr;
                fs[2] = fr;
            }
        } else if fr < fs[1] {
            s[2] = xr;
            fs[2] = fr;
        } else {
            let (xc, fc) = if fr < fs[2] {
                let x = at(-0.5);
                (x, g(&x))
            } else {
                let x = at(0.5);
                (x, g(&x))
            };
            if fc < fs[2].min(fr) {
                s[2] = xc;
                fs[2] = fc;
            } else {
                for i in 1..3 {
                    s[i] = [(s[0][0] + s[i][0]) / 2.0, (s[0][1] + s[i][1]) / 2.0];
                    fs[i] = g(&s[i]);
                }
            }
        }
    }
    let best = (0..3).min_by(|&a, &b| fs[a].total_cmp(&fs[b])).unwrap_or(0);
    (s[best], it, false)
}

/// Golden-section minimization of a unimodal function on `[a, b]`.
pub fn golden_section<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_is_on_sphere_and_balanced() {
        let pts = fibonacci_sphere(1000);
        assert!(pts.iter().all(|p| (p.norm() - 1.0).abs() < 1e-12));
        let c: Vector3<f64> = pts.iter().sum::<Vector3<f64>>() / 1000.0;
        assert!(c.norm() < 1e-3);
    }

    #[test]
    fn nelder_mead_finds_nearest_pole() {
        let target = Vector3::new(0.2, -0.3, 0.9).normalize();
        let f = |p: &Vector3<f64>| -p.dot(&target);
        let r = minimize_on_sphere(&f, &Vector3::new(0.0, 0.0, 1.0), 0.1, 1e-10, 5000);
        assert!(r.converged);
        let err = (r.point.as_vector() - target).norm();
        assert!(err < 1e-7, "{err}");
    }

    #[test]
    fn golden_section_on_parabola() {
        let (x, fx) = golden_section(|x| (x - 0.3) * (x - 0.3), -1.0, 2.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-9);
        assert!(fx < 1e-17);
    }
}

//! Acceptance criteria, one test per criterion. Each prints a single
//! PASS/FAIL line straight to stdout so it shows without `--nocapture`.

use std::f64::consts::{LN_2, PI};
use std::io::Write;
use std::time::Instant;

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use povm_entropy::bloch::{h_derivative, probability};
use povm_entropy::catalog::{interpolation_set, spherical_design_order};
use povm_entropy::certificate::{certify_minimum, kernel_certificate};
use povm_entropy::dynamics::{dynamical_entropy, empirical_entropy_rate, measurement_entropy, UnitaryAsRotation};
use povm_entropy::entropy::{
    antipodal_orbit, entropy_at, find_extrema, orbit_match_error, rectangle_bifurcation_threshold,
    sphere_average_relative_entropy, Mode, TypeLabel,
};
use povm_entropy::info::{antipodal_pairs, average_relative_entropy, informational_power, info_power_table, uncertainty_upper_bound};
use povm_entropy::{make_hs_povm, make_rectangle_povm, BlochVector, EntropyKernel, Family, HsPovm};

fn report(n: u32, passed: bool, detail: &str, start: Instant) {
    let line = format!(
        "acceptance criterion {n:>2}: {} ({detail}; {:.2} s)\n",
        if passed { "PASS" } else { "FAIL" },
        start.elapsed().as_secs_f64()
    );
    let mut out = std::io::stdout().lock();
    out.write_all(line.as_bytes()).unwrap();
    out.flush().unwrap();
}

fn families() -> Vec<Family> {
    let mut f = vec![Family::Digon, Family::Ngon(3), Family::Ngon(4), Family::Ngon(5), Family::Ngon(6)];
    f.extend(&Family::SOLIDS[1..]);
    f
}

fn unit(x: f64, y: f64, z: f64) -> BlochVector {
    BlochVector::normalize(Vector3::new(x, y, z)).unwrap()
}

fn random_unit(rng: &mut ChaCha8Rng) -> BlochVector {
    loop {
        let v = Vector3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let r: f64 = v.norm();
        if r > 1e-3 && r <= 1.0 {
            return BlochVector::normalize(v).unwrap();
        }
    }
}

#[test]
fn criterion_01_informational_power() {
    let start = Instant::now();
    let rows = info_power_table().unwrap();
    let worst = rows.iter().map(|r| r.delta.abs()).fold(0.0, f64::max);
    let elapsed = start.elapsed().as_secs_f64();
    let passed = rows.len() == 9 && worst < 5e-6 && elapsed < 1.0;
    report(1, passed, &format!("max |Δ| = {worst:.2e} over {} rows", rows.len()), start);
    assert!(passed);
}

#[test]
fn criterion_02_global_minimizers() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut slowest: f64 = 0.0;
    for f in families() {
        let t0 = Instant::now();
        let povm = make_hs_povm(f).unwrap();
        let minima = find_extrema(&povm, Mode::Min);
        let secs = t0.elapsed().as_secs_f64();
        slowest = slowest.max(secs);
        let locs: Vec<_> = minima.iter().map(|m| m.location).collect();
        let err = orbit_match_error(&locs, &antipodal_orbit(&povm));
        let target = (povm.k() as f64).ln() - informational_power(&povm).unwrap();
        let value_err = minima.iter().map(|m| (m.value - target).abs()).fold(0.0, f64::max);
        if !err.is_some_and(|e| e < 1e-6) || value_err >= 1e-8 || secs >= 30.0 {
            failures.push(format!("{f} (orbit {err:?}, value {value_err:.1e}, {secs:.1} s)"));
        }
    }
    let passed = failures.is_empty();
    let detail = if passed {
        format!("{} families, slowest {slowest:.1} s", families().len())
    } else {
        failures.join(", ")
    };
    report(2, passed, &detail, start);
    assert!(passed, "{detail}");
}

fn reference_degree_bound(f: Family) -> usize {
    match f {
        Family::Digon => 1,
        Family::Ngon(n) => n as usize - 1,
        Family::Tetrahedron => 2,
        Family::Octahedron => 3,
        Family::Cube | Family::Icosahedron => 5,
        Family::Cuboctahedron => 7,
        Family::Dodecahedron => 9,
        Family::Icosidodecahedron => 15,
        _ => unreachable!(),
    }
}

#[test]
fn criterion_03_certificates() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut sturm_prec = None;
    for f in families() {
        let cert = certify_minimum(&make_hs_povm(f).unwrap()).unwrap();
        let nodes: Vec<f64> = cert.nodes.iter().map(|n| n.t).collect();
        let touches_ok = cert
            .below_check
            .touch_points
            .iter()
            .all(|t| nodes.iter().any(|n| (n - t).abs() < 1e-6));
        let mut ok = cert.valid && cert.below_check.min_gap >= -1e-12 && touches_ok;
        ok &= cert.degree <= reference_degree_bound(f);
        let c = &cert.coefficients;
        let (l2, l3) = (LN_2, 3f64.ln());
        match f {
            Family::Cube => ok &= (c.b.unwrap() - 0.375 * (27.0f64 / 16.0).ln()).abs() < 1e-10,
            Family::Cuboctahedron => {
                ok &= (c.b.unwrap() - (520.0 / 9.0 * l2 - 37.0 * l3)).abs() < 1e-9;
                ok &= (c.c.unwrap() - (-364.0 / 9.0 * l2 + 26.0 * l3)).abs() < 1e-9;
                ok &= (cert.beta.unwrap() - 0.3775).abs() < 1e-4;
            }
            Family::Dodecahedron => ok &= (c.b.unwrap() + 0.06509).abs() < 1e-4,
            Family::Icosidodecahedron => {
                ok &= cert.sturm_root_count == Some(0) && cert.precision_used.is_some_and(|p| p <= 512);
                sturm_prec = cert.precision_used;
            }
            _ => {}
        }
        if !ok {
            failures.push(format!("{f}: {:?}", cert.reason));
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let passed = failures.is_empty() && elapsed < 60.0;
    let detail = if failures.is_empty() {
        format!("{} certificates valid, Sturm verdict at {} bits", families().len(), sturm_prec.map_or("-".into(), |p: u32| p.to_string()))
    } else {
        failures.join("; ")
    };
    report(3, passed, &detail, start);
    assert!(passed, "{detail}");
}

/// (n_a, n_s, n(v), degree bound)
type Profile = (usize, usize, f64, usize);

/// Reference rows: family, profile, interpolation set.
fn reference_profiles() -> Vec<(Family, Profile, Vec<f64>)> {
    let s5 = 5f64.sqrt();
    let tau = (1.0 + s5) / 2.0;
    let ngon = |n: u32| {
        let (na, ns) = if n.is_multiple_of(2) { (n as usize - 2, 2) } else { (n as usize - 1, 1) };
        let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
        let t: Vec<f64> = (1..=n).map(|j| sign * (2.0 * PI * f64::from(j) / f64::from(n)).cos()).collect();
        (Family::Ngon(n), (na, ns, f64::from(n) / 2.0 + if n.is_multiple_of(2) { 1.0 } else { 0.5 }, n as usize - 1), t)
    };
    vec![
        (Family::Digon, (0, 2, 2.0, 1), vec![-1.0, 1.0]),
        ngon(3),
        ngon(4),
        ngon(5),
        ngon(6),
        (Family::Tetrahedron, (0, 2, 2.0, 2), vec![-1.0, 1.0 / 3.0]),
        (Family::Octahedron, (0, 3, 3.0, 3), vec![-1.0, 0.0, 1.0]),
        (Family::Cube, (0, 4, 4.0, 5), vec![-1.0, -1.0 / 3.0, 1.0 / 3.0, 1.0]),
        (Family::Cuboctahedron, (4, 3, 5.0, 7), vec![-1.0, -0.5, 0.0, 0.5, 1.0]),
        (Family::Icosahedron, (0, 4, 4.0, 5), vec![-1.0, -1.0 / s5, 1.0 / s5, 1.0]),
        (Family::Dodecahedron, (4, 4, 6.0, 9), vec![-1.0, -s5 / 3.0, -1.0 / 3.0, 1.0 / 3.0, s5 / 3.0, 1.0]),
        (
            Family::Icosidodecahedron,
            (14, 2, 9.0, 15),
            vec![-1.0, -tau / 2.0, -0.5, -1.0 / (2.0 * tau), 0.0, 1.0 / (2.0 * tau), 0.5, tau / 2.0, 1.0],
        ),
    ]
}

#[test]
fn criterion_04_coset_profiles_and_nodes() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for (f, (na, ns, nv, bound), t) in reference_profiles() {
        let povm = make_hs_povm(f).unwrap();
        let g = povm.group();
        let v = povm.fiducial();
        let prof = g.double_coset_profile(v);
        let lit_bound = povm_entropy::groups::degree_bound(&prof, g.orbit(v).len(), g.stabilizer(v).order());
        if (prof.n_a, prof.n_s) != (na, ns) || (prof.n_v - nv).abs() > 1e-12 || lit_bound != bound {
            failures.push(format!(
                "{f} coset profile: computed (n_a, n_s, n(v), bound) = ({}, {}, {}, {lit_bound}), expected ({na}, {ns}, {nv}, {bound})",
                prof.n_a, prof.n_s, prof.n_v
            ));
        }
        let mut expected = t.clone();
        expected.sort_by(f64::total_cmp);
        expected.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        let got = interpolation_set(&povm);
        if got.len() != expected.len() || got.iter().zip(&expected).any(|(a, b)| (a - b).abs() > 1e-12) {
            failures.push(format!("{f} interpolation set: computed {got:?}, expected {expected:?}"));
        }
    }
    let passed = failures.is_empty();
    let detail = if passed { "all rows exact".to_string() } else { failures.join("; ") };
    report(4, passed, &detail, start);
    assert!(passed, "{detail}");
}

#[test]
fn criterion_05_average_relative_entropy() {
    let start = Instant::now();
    let target = average_relative_entropy(2).unwrap();
    let fams = [Family::Tetrahedron, Family::Octahedron, Family::Cube, Family::Icosahedron];
    let errs: Vec<f64> = fams
        .iter()
        .map(|&f| (sphere_average_relative_entropy(&make_hs_povm(f).unwrap(), 1_000_000) - target).abs())
        .collect();
    let good = errs.iter().filter(|e| **e < 2e-3).count();
    let elapsed = start.elapsed().as_secs_f64();
    let passed = good >= 3 && elapsed < 20.0;
    let worst = errs.iter().cloned().fold(0.0, f64::max);
    report(5, passed, &format!("{good} of {} families within 2e-3, worst {worst:.1e}", fams.len()), start);
    assert!(passed);
}

#[test]
fn criterion_06_design_orders() {
    let start = Instant::now();
    let order = |f| spherical_design_order(make_hs_povm(f).unwrap().vectors(), 5);
    let mut ok = order(Family::Tetrahedron) >= 2;
    for f in [Family::Octahedron, Family::Cube, Family::Cuboctahedron] {
        ok &= order(f) >= 3;
    }
    for f in [Family::Icosahedron, Family::Dodecahedron, Family::Icosidodecahedron] {
        ok &= order(f) >= 5;
    }
    let c = 2.0;
    let disphenoid = vec![unit(1.0, 1.0, c), unit(1.0, -1.0, -c), unit(-1.0, 1.0, -c), unit(-1.0, -1.0, c)];
    let d = spherical_design_order(&disphenoid, 5);
    ok &= d < 2;
    report(6, ok, &format!("tetrahedron {}, cube {}, icosahedron {}, disphenoid {d}", order(Family::Tetrahedron), order(Family::Cube), order(Family::Icosahedron)), start);
    assert!(ok);
}

#[test]
fn criterion_07_rectangle_bifurcation() {
    let start = Instant::now();
    let a = rectangle_bifurcation_threshold();
    let mut ok = (a - 1.17056).abs() < 1e-4;
    let below = find_extrema(&make_rectangle_povm(0.8).unwrap(), Mode::Min);
    let axis = unit(1.0, 0.0, 0.0);
    ok &= below.len() == 2
        && below.iter().all(|e| e.location.angle_to(&axis).min(e.location.angle_to(&axis.antipode())) < 1e-6);
    let above = find_extrema(&make_rectangle_povm(1.4).unwrap(), Mode::Min);
    ok &= above.len() == 4 && above.iter().all(|e| e.type_label == TypeLabel::NonInert);
    report(7, ok, &format!("threshold {a:.6}, minima {} below and {} above", below.len(), above.len()), start);
    assert!(ok);
}

#[test]
fn criterion_08_uncertainty_bound() {
    let start = Instant::now();
    let sq = make_hs_povm(Family::Ngon(4)).unwrap();
    let hmin = find_extrema(&sq, Mode::Min).iter().map(|e| e.value).fold(f64::INFINITY, f64::min);
    let max_rel = 4f64.ln() - hmin;
    let (a, b) = antipodal_pairs(&sq).unwrap();
    let bound = uncertainty_upper_bound(&a, &b);
    let ok = (max_rel - 0.5 * LN_2).abs() < 1e-9 && (bound - 0.5 * LN_2).abs() < 1e-12;
    report(8, ok, &format!("max relative entropy {max_rel:.12}, bound {bound:.12}"), start);
    assert!(ok);
}

#[test]
fn criterion_09_dynamical_entropy() {
    let start = Instant::now();
    let id = UnitaryAsRotation::identity();
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for f in families() {
        let povm = make_hs_povm(f).unwrap();
        let e = (dynamical_entropy(&id, &povm) - measurement_entropy(&povm)).abs();
        worst = worst.max(e);
        ok &= e < 1e-12;
    }
    let r = UnitaryAsRotation::about(Vector3::new(0.3, -0.2, 1.0), 0.9).unwrap();
    let mut enum_worst: f64 = 0.0;
    for f in [Family::Digon, Family::Tetrahedron, Family::Octahedron, Family::Cube, Family::Icosahedron] {
        let povm = make_hs_povm(f).unwrap();
        let h = dynamical_entropy(&r, &povm);
        for n in 1..=3 {
            let e = (empirical_entropy_rate(&r, &povm, n).unwrap() - h).abs();
            enum_worst = enum_worst.max(e);
            ok &= e < 1e-12;
        }
    }
    let digon = dynamical_entropy(&id, &make_hs_povm(Family::Digon).unwrap());
    ok &= digon == 0.0;
    report(9, ok, &format!("H(I) vs measurement {worst:.1e}, enumeration {enum_worst:.1e}, digon {digon}"), start);
    assert!(ok);
}

fn invariance_error(povm: &HsPovm, rng: &mut ChaCha8Rng) -> f64 {
    let u = random_unit(rng);
    let h = entropy_at(&u, povm, EntropyKernel::Shannon);
    (0..povm.group().order())
        .map(|g| (entropy_at(&povm.group().apply(g, &u), povm, EntropyKernel::Shannon) - h).abs())
        .fold(0.0, f64::max)
}

#[test]
fn criterion_10_property_suites() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut ok = true;
    let mut notes = Vec::new();
    let mut inv: f64 = 0.0;
    let mut norm: f64 = 0.0;
    let mut bounds_ok = true;
    for f in families() {
        let povm = make_hs_povm(f).unwrap();
        let k = povm.k() as f64;
        for _ in 0..200 {
            inv = inv.max(invariance_error(&povm, &mut rng));
            let u = random_unit(&mut rng);
            let s: f64 = povm.vectors().iter().map(|v| probability(&u, v, 2, povm.k())).sum();
            norm = norm.max((s - 1.0).abs());
            let h = entropy_at(&u, &povm, EntropyKernel::Shannon);
            bounds_ok &= h >= (k / 2.0).ln() - 1e-12 && h <= k.ln() + 1e-12;
        }
    }
    ok &= inv < 1e-12 && norm < 1e-12 && bounds_ok;
    notes.push(format!("invariance {inv:.1e}, normalization {norm:.1e}, bounds {bounds_ok}"));
    let mut fd_worst: f64 = 0.0;
    for _ in 0..200 {
        let t: f64 = rng.gen_range(-0.95..0.95);
        let n: u32 = rng.gen_range(0..5);
        let step = 1e-5;
        let fd = (h_derivative(t + step, n).unwrap() - h_derivative(t - step, n).unwrap()) / (2.0 * step);
        let an = h_derivative(t, n + 1).unwrap();
        fd_worst = fd_worst.max((fd - an).abs() / an.abs().max(1.0));
    }
    ok &= fd_worst < 1e-6;
    notes.push(format!("derivative check {fd_worst:.1e}"));
    let mut kernels_ok = true;
    for f in [Family::Digon, Family::Ngon(3), Family::Tetrahedron] {
        for kernel in [EntropyKernel::Tsallis(0.5), EntropyKernel::Tsallis(2.0), EntropyKernel::Renyi(0.5), EntropyKernel::Renyi(1.5)] {
            let c = kernel_certificate(&make_hs_povm(f).unwrap(), kernel).unwrap();
            kernels_ok &= c.constant && c.below && c.degree <= 2;
        }
    }
    ok &= kernels_ok;
    notes.push(format!("generalized kernels constant {kernels_ok}"));
    report(10, ok, &notes.join(", "), start);
    assert!(ok);
}

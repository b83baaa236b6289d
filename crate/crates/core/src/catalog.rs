//! Highly symmetric qubit POVMs, the rectangle family, and frame/design
//! diagnostics for arbitrary Bloch-vector sets.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bloch::BlochVector;
use crate::error::{Error, Result};
use crate::groups::{generate_group, GroupKind, RotationGroup, TAU};

/// Seed of the random directions used by [`spherical_design_order`].
pub const DESIGN_SEED: u64 = 42;
/// Number of random directions used by [`spherical_design_order`].
pub const DESIGN_DIRECTIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Family {
    Digon,
    Ngon(u32),
    Tetrahedron,
    Octahedron,
    Cube,
    Cuboctahedron,
    Icosahedron,
    Dodecahedron,
    Icosidodecahedron,
    Rectangle(f64),
    Custom,
}

impl Family {
    /// The eight fixed-size highly symmetric families.
    pub const SOLIDS: [Family; 8] = [
        Family::Digon,
        Family::Tetrahedron,
        Family::Octahedron,
        Family::Cube,
        Family::Cuboctahedron,
        Family::Icosahedron,
        Family::Dodecahedron,
        Family::Icosidodecahedron,
    ];

    /// Fixed-size families plus a sample of polygons, for sweeps over "all".
    pub fn all_hs() -> Vec<Family> {
        let mut v = Family::SOLIDS.to_vec();
        v.extend([3, 4, 5, 6].map(Family::Ngon));
        v
    }

    pub fn is_highly_symmetric(&self) -> bool {
        !matches!(self, Family::Rectangle(_) | Family::Custom)
    }

    pub fn is_symmetric(&self) -> bool {
        !matches!(self, Family::Custom)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Digon => write!(f, "digon"),
            Family::Ngon(n) => write!(f, "{n}-gon"),
            Family::Tetrahedron => write!(f, "tetrahedron"),
            Family::Octahedron => write!(f, "octahedron"),
            Family::Cube => write!(f, "cube"),
            Family::Cuboctahedron => write!(f, "cuboctahedron"),
            Family::Icosahedron => write!(f, "icosahedron"),
            Family::Dodecahedron => write!(f, "dodecahedron"),
            Family::Icosidodecahedron => write!(f, "icosidodecahedron"),
            Family::Rectangle(a) => write!(f, "rectangle:{a}"),
            Family::Custom => write!(f, "custom"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    /// Accepts the display names plus `ngon:N`, `N-gon` and `rectangle:ALPHA`.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let named = match lower.as_str() {
            "digon" => Some(Family::Digon),
            "tetrahedron" => Some(Family::Tetrahedron),
            "octahedron" => Some(Family::Octahedron),
            "cube" => Some(Family::Cube),
            "cuboctahedron" => Some(Family::Cuboctahedron),
            "icosahedron" => Some(Family::Icosahedron),
            "dodecahedron" => Some(Family::Dodecahedron),
            "icosidodecahedron" => Some(Family::Icosidodecahedron),
            "custom" => Some(Family::Custom),
            _ => None,
        };
        if let Some(f) = named {
            return Ok(f);
        }
        let unknown = || Error::UnknownFamily(s.to_string());
        if let Some(n) = lower.strip_prefix("ngon:").or_else(|| lower.strip_suffix("-gon")) {
            let n: u32 = n.parse().map_err(|_| unknown())?;
            return Ok(Family::Ngon(n));
        }
        if let Some(a) = lower.strip_prefix("rectangle:") {
            let a: f64 = a.parse().map_err(|_| unknown())?;
            return Ok(Family::Rectangle(a));
        }
        Err(unknown())
    }
}

impl TryFrom<String> for Family {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Family> for String {
    fn from(f: Family) -> Self {
        f.to_string()
    }
}

/// Normalized rank-1 qubit POVM given by its Bloch vectors. The first vector
/// is the fiducial one.
#[derive(Debug, Clone)]
pub struct HsPovm {
    vectors: Vec<BlochVector>,
    family: Family,
    group: RotationGroup,
}

impl HsPovm {
    /// Arbitrary Bloch set with the trivial group; not checked for the POVM condition.
    pub fn custom(vectors: Vec<BlochVector>) -> Result<Self> {
        if vectors.len() < 2 {
            return Err(Error::InvalidArgument("a POVM needs at least two elements".into()));
        }
        Ok(HsPovm {
            vectors,
            family: Family::Custom,
            group: generate_group(GroupKind::Cyclic(1))?,
        })
    }

    pub fn vectors(&self) -> &[BlochVector] {
        &self.vectors
    }

    pub fn k(&self) -> usize {
        self.vectors.len()
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn group(&self) -> &RotationGroup {
        &self.group
    }

    pub fn fiducial(&self) -> &BlochVector {
        &self.vectors[0]
    }

    /// True if all vectors lie in one plane through the origin.
    pub fn plane_normal(&self) -> Option<Vector3<f64>> {
        let vs = &self.vectors;
        let a = vs[0].as_vector();
        let b = vs.iter().map(|v| a.cross(&v.as_vector())).max_by(|x, y| x.norm().total_cmp(&y.norm()))?;
        if b.norm() < 1e-9 {
            // collinear: any perpendicular works
            let p = if a.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
            return Some(a.cross(&p).normalize());
        }
        let n = b.normalize();
        vs.iter().all(|v| v.as_vector().dot(&n).abs() < 1e-9).then_some(n)
    }
}

fn unit(x: f64, y: f64, z: f64) -> BlochVector {
    BlochVector::normalize(Vector3::new(x, y, z)).expect("nonzero seed")
}

fn orbit_with_seed_first(group: &RotationGroup, seed: BlochVector) -> Vec<BlochVector> {
    let orbit = group.orbit(&seed);
    let mut out = vec![seed];
    out.extend(orbit.into_iter().filter(|p| (p.as_vector() - seed.as_vector()).norm() > 1e-8));
    out
}

/// Builds a named highly symmetric POVM in its canonical orientation.
pub fn make_hs_povm(family: Family) -> Result<HsPovm> {
    let (kind, seed) = match family {
        Family::Digon => {
            let group = generate_group(GroupKind::Dihedral(1))?;
            return Ok(HsPovm {
                vectors: vec![unit(0.0, 0.0, 1.0), unit(0.0, 0.0, -1.0)],
                family,
                group,
            });
        }
        Family::Ngon(n) => {
            if n < 2 {
                return Err(Error::InvalidArgument(format!("n-gon needs n ≥ 2, got {n}")));
            }
            let group = generate_group(GroupKind::Cyclic(n))?;
            let vectors = (0..n)
                .map(|j| {
                    let a = 2.0 * PI * j as f64 / n as f64;
                    unit(a.cos(), a.sin(), 0.0)
                })
                .collect();
            return Ok(HsPovm { vectors, family, group });
        }
        Family::Rectangle(a) => return make_rectangle_povm(a),
        Family::Custom => {
            return Err(Error::InvalidArgument("custom POVMs are read from a file".into()))
        }
        Family::Tetrahedron => (GroupKind::Tetrahedral, unit(1.0, 1.0, 1.0)),
        Family::Octahedron => (GroupKind::Octahedral, unit(0.0, 0.0, 1.0)),
        Family::Cube => (GroupKind::Octahedral, unit(1.0, 1.0, 1.0)),
        Family::Cuboctahedron => (GroupKind::Octahedral, unit(0.0, 1.0, 1.0)),
        Family::Icosahedron => (GroupKind::Icosahedral, unit(0.0, TAU, 1.0)),
        Family::Dodecahedron => (GroupKind::Icosahedral, unit(0.0, 1.0 / TAU, TAU)),
        Family::Icosidodecahedron => (GroupKind::Icosahedral, unit(0.0, 0.0, 1.0)),
    };
    let group = generate_group(kind)?;
    let vectors = orbit_with_seed_first(&group, seed);
    Ok(HsPovm { vectors, family, group })
}

/// Rectangle `{v₁, −v₁, v₂, −v₂}` in the z = 0 plane with angle `alpha`
/// between `v₁` and `v₂`. The square (α = π/2) is returned as the 4-gon.
pub fn make_rectangle_povm(alpha: f64) -> Result<HsPovm> {
    if !(alpha > 0.0 && alpha < PI) {
        return Err(Error::Domain { function: "make_rectangle_povm", value: alpha });
    }
    let (c, s) = ((alpha / 2.0).cos(), (alpha / 2.0).sin());
    let v1 = unit(c, s, 0.0);
    let v2 = unit(c, -s, 0.0);
    let vectors = vec![v1, v1.antipode(), v2, v2.antipode()];
    if (alpha - PI / 2.0).abs() < 1e-12 {
        return Ok(HsPovm { vectors, family: Family::Ngon(4), group: generate_group(GroupKind::Cyclic(4))? });
    }
    Ok(HsPovm {
        vectors,
        family: Family::Rectangle(alpha),
        group: generate_group(GroupKind::Dihedral(2))?,
    })
}

/// Frame and design diagnostics for a Bloch set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignReport {
    pub is_povm: bool,
    pub informationally_complete: bool,
    pub design_order: u32,
    /// Largest deviation of the order-t moment from its sphere average, t = 1..=5.
    pub moment_values: Vec<(u32, f64)>,
    pub centroid_norm: f64,
    pub rank: usize,
}

pub fn centroid(vectors: &[BlochVector]) -> Vector3<f64> {
    vectors.iter().map(|v| v.as_vector()).sum::<Vector3<f64>>() / vectors.len() as f64
}

pub fn validate_povm(vectors: &[BlochVector]) -> DesignReport {
    validate_povm_seeded(vectors, DESIGN_SEED)
}

/// As [`validate_povm`], drawing the test directions from `seed`.
pub fn validate_povm_seeded(vectors: &[BlochVector], seed: u64) -> DesignReport {
    let k = vectors.len();
    let centroid_norm = if k == 0 { f64::INFINITY } else { centroid(vectors).norm() };
    let is_povm = k >= 2 && centroid_norm < 1e-10;
    let m = DMatrix::from_fn(3, k, |i, j| vectors[j].as_vector()[i]);
    let rank = if k == 0 {
        0
    } else {
        m.svd(false, false).singular_values.iter().filter(|&&s| s > 1e-8).count()
    };
    let dirs = random_directions(seed);
    let moment_values = (1..=5).map(|t| (t, moment_deviation(vectors, t, &dirs))).collect();
    let design_order = if is_povm { design_order_with(vectors, 5, &dirs) } else { 0 };
    DesignReport {
        is_povm,
        informationally_complete: rank == 3,
        design_order,
        moment_values,
        centroid_norm,
        rank,
    }
}

fn random_directions(seed: u64) -> Vec<Vector3<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..DESIGN_DIRECTIONS)
        .map(|_| loop {
            let v = Vector3::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            let n = v.norm();
            if n > 1e-3 && n <= 1.0 {
                break v / n;
            }
        })
        .collect()
}

/// Sphere average of `(w·x)^s`.
fn sphere_moment(s: u32) -> f64 {
    if s % 2 == 1 {
        0.0
    } else {
        1.0 / (s as f64 + 1.0)
    }
}

fn moment_deviation(vectors: &[BlochVector], s: u32, dirs: &[Vector3<f64>]) -> f64 {
    if vectors.is_empty() {
        return f64::INFINITY;
    }
    dirs.iter()
        .map(|w| {
            let m = vectors.iter().map(|v| w.dot(&v.as_vector()).powi(s as i32)).sum::<f64>()
                / vectors.len() as f64;
            (m - sphere_moment(s)).abs()
        })
        .fold(0.0, f64::max)
}

/// Largest `t ≤ t_max` such that all moments of order `≤ t` match the sphere.
pub fn spherical_design_order(vectors: &[BlochVector], t_max: u32) -> u32 {
    design_order_with(vectors, t_max, &random_directions(DESIGN_SEED))
}

fn design_order_with(vectors: &[BlochVector], t_max: u32, dirs: &[Vector3<f64>]) -> u32 {
    let mut t = 0;
    for s in 1..=t_max.min(5) {
        if moment_deviation(vectors, s, dirs) > 1e-9 {
            break;
        }
        t = s;
    }
    t
}

/// Sorted distinct values of `−v·u` over the POVM's vectors, `v` the fiducial.
pub fn interpolation_set(povm: &HsPovm) -> Vec<f64> {
    let v = povm.fiducial();
    let mut vals: Vec<f64> = povm.vectors().iter().map(|u| -v.dot(u)).collect();
    vals.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::new();
    for x in vals {
        if out.last().is_none_or(|&l| (x - l).abs() > 1e-9) {
            out.push(x.clamp(-1.0, 1.0));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn cardinalities() {
        let expected = [2, 4, 6, 8, 12, 12, 20, 30];
        for (f, k) in Family::SOLIDS.iter().zip(expected) {
            let p = make_hs_povm(*f).unwrap();
            assert_eq!(p.k(), k, "{f}");
            assert!(centroid(p.vectors()).norm() < 1e-12, "{f}");
        }
        assert_eq!(make_hs_povm(Family::Ngon(7)).unwrap().k(), 7);
    }

    #[test]
    fn tetrahedron_pairwise_dots() {
        let p = make_hs_povm(Family::Tetrahedron).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert_abs_diff_eq!(p.vectors()[i].dot(&p.vectors()[j]), -1.0 / 3.0, epsilon = 1e-14);
                }
            }
        }
    }

    #[test]
    fn digon_and_polygon_layout() {
        let d = make_hs_povm(Family::Digon).unwrap();
        assert_eq!(d.vectors()[0].to_array(), [0.0, 0.0, 1.0]);
        assert_eq!(d.vectors()[1].to_array(), [0.0, 0.0, -1.0]);
        let p = make_hs_povm(Family::Ngon(5)).unwrap();
        assert_eq!(p.fiducial().to_array(), [1.0, 0.0, 0.0]);
        assert!(p.plane_normal().is_some());
        assert!(make_hs_povm(Family::Cube).unwrap().plane_normal().is_none());
    }

    #[test]
    fn seeds_come_first() {
        let p = make_hs_povm(Family::Dodecahedron).unwrap();
        let x6 = p.fiducial().to_array();
        assert_abs_diff_eq!(x6[0], 0.0);
        assert_abs_diff_eq!(x6[1], 1.0 / (TAU * 3f64.sqrt()), epsilon = 1e-15);
    }

    #[test]
    fn rectangle_examples() {
        let r = make_rectangle_povm(PI / 3.0).unwrap();
        assert_eq!(r.k(), 4);
        assert!(centroid(r.vectors()).norm() < 1e-15);
        assert!(r.vectors().iter().all(|v| v.z() == 0.0));
        let r = make_rectangle_povm(1.0).unwrap();
        assert_abs_diff_eq!(r.vectors()[0].dot(&r.vectors()[2]), 1.0f64.cos(), epsilon = 1e-15);
        assert_eq!(make_rectangle_povm(PI / 2.0).unwrap().family(), Family::Ngon(4));
        assert!(make_rectangle_povm(0.0).is_err());
        assert!(make_rectangle_povm(PI).is_err());
    }

    #[test]
    fn validate_examples() {
        let r = validate_povm(make_hs_povm(Family::Ngon(6)).unwrap().vectors());
        assert!(r.is_povm && !r.informationally_complete);
        let r = validate_povm(make_hs_povm(Family::Tetrahedron).unwrap().vectors());
        assert!(r.is_povm && r.informationally_complete);
        let z = unit(0.0, 0.0, 1.0);
        assert!(!validate_povm(&[z, z]).is_povm);
    }

    #[test]
    fn design_orders() {
        let order = |f| spherical_design_order(make_hs_povm(f).unwrap().vectors(), 5);
        assert_eq!(order(Family::Octahedron), 3);
        assert_eq!(order(Family::Icosahedron), 5);
        assert_eq!(order(Family::Tetrahedron), 2);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let disphenoid = [unit(s, s, 0.0), unit(s, -s, 0.0), unit(-s, 0.0, s), unit(-s, 0.0, -s)];
        assert!(validate_povm(&disphenoid).is_povm);
        assert_eq!(spherical_design_order(&disphenoid, 5), 1);
    }

    #[test]
    fn interpolation_sets() {
        let t = |f| interpolation_set(&make_hs_povm(f).unwrap());
        let close = |a: Vec<f64>, b: &[f64]| {
            assert_eq!(a.len(), b.len(), "{a:?}");
            for (x, y) in a.iter().zip(b) {
                assert_abs_diff_eq!(x, y, epsilon = 1e-12);
            }
        };
        close(t(Family::Octahedron), &[-1.0, 0.0, 1.0]);
        close(t(Family::Cuboctahedron), &[-1.0, -0.5, 0.0, 0.5, 1.0]);
        close(
            t(Family::Icosidodecahedron),
            &[-1.0, -TAU / 2.0, -0.5, -0.5 / TAU, 0.0, 0.5 / TAU, 0.5, TAU / 2.0, 1.0],
        );
        close(t(Family::Tetrahedron), &[-1.0, 1.0 / 3.0]);
    }

    #[test]
    fn family_names_round_trip() {
        for f in Family::all_hs() {
            assert_eq!(f.to_string().parse::<Family>().unwrap(), f);
        }
        assert_eq!("ngon:9".parse::<Family>().unwrap(), Family::Ngon(9));
        assert!("pentagram".parse::<Family>().is_err());
    }
}

//! Finite rotation groups as explicit matrix lists: closure from generators,
//! orbits, stabilizers and double-coset profiles.

use std::cmp::Ordering;
use std::fmt;

use nalgebra::{Matrix3, Rotation3, Unit, Vector3};
use serde::{Deserialize, Serialize};

use crate::bloch::BlochVector;
use crate::error::{Error, Result};

/// Golden ratio.
pub const TAU: f64 = 1.618_033_988_749_895;

const MATRIX_TOL: f64 = 1e-8;
const POINT_TOL: f64 = 1e-8;

/// Abstract type of a finite rotation group.
///
/// `generate_group` realizes each kind in a fixed orientation: cyclic groups
/// about the z-axis; dihedral groups as `C_n` about z plus the half-turn about
/// x (so `Dihedral(1)` is the half-turn about x alone); `T` with 3-fold axes
/// through `(±1,±1,±1)`; `O` with 4-fold axes along the coordinate axes; `I`
/// with 5-fold axes through `(0,±τ,±1)` and cyclic permutations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupKind {
    Cyclic(u32),
    Dihedral(u32),
    Tetrahedral,
    Octahedral,
    Icosahedral,
}

impl GroupKind {
    pub fn order(&self) -> usize {
        match *self {
            GroupKind::Cyclic(n) => n as usize,
            GroupKind::Dihedral(n) => 2 * n as usize,
            GroupKind::Tetrahedral => 12,
            GroupKind::Octahedral => 24,
            GroupKind::Icosahedral => 60,
        }
    }

    /// Parses `C_n`/`Cn`, `D_n`/`Dn`, `T`, `O`, `I`.
    pub fn parse(name: &str, n: Option<u32>) -> Result<Self> {
        let s = name.trim();
        let numbered = |rest: &str| -> Result<u32> {
            let rest = rest.trim_start_matches('_');
            let v = if rest.is_empty() || rest == "n" {
                n.ok_or_else(|| Error::InvalidArgument(format!("{s} requires an order")))?
            } else {
                rest.parse()
                    .map_err(|_| Error::InvalidArgument(format!("bad group order in `{s}`")))?
            };
            if v == 0 {
                return Err(Error::InvalidArgument("group order must be positive".into()));
            }
            Ok(v)
        };
        match s {
            "T" => Ok(GroupKind::Tetrahedral),
            "O" => Ok(GroupKind::Octahedral),
            "I" => Ok(GroupKind::Icosahedral),
            _ if s.starts_with('C') => Ok(GroupKind::Cyclic(numbered(&s[1..])?)),
            _ if s.starts_with('D') => Ok(GroupKind::Dihedral(numbered(&s[1..])?)),
            _ => Err(Error::InvalidArgument(format!("unknown group tag `{s}`"))),
        }
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::Cyclic(n) => write!(f, "C{n}"),
            GroupKind::Dihedral(n) => write!(f, "D{n}"),
            GroupKind::Tetrahedral => write!(f, "T"),
            GroupKind::Octahedral => write!(f, "O"),
            GroupKind::Icosahedral => write!(f, "I"),
        }
    }
}

/// Finite group of proper rotations, identity first.
#[derive(Debug, Clone)]
pub struct RotationGroup {
    kind: GroupKind,
    elements: Vec<Matrix3<f64>>,
}

/// Double-coset statistics of a point stabilizer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoubleCosetProfile {
    pub n_s: usize,
    pub n_a: usize,
    pub n_v: f64,
    pub antipodal_in_orbit: bool,
    pub coset_sizes: Vec<usize>,
    /// Number of distinct values of `gv·v`, i.e. double cosets merged when
    /// they share the same inner product with `v`.
    pub value_classes: usize,
}

impl DoubleCosetProfile {
    /// Degree bound obtained by counting distinct inner products instead of
    /// double cosets: `2|T| − 3` if `−v` is in the orbit, else `2|T| − 2`.
    pub fn value_degree_bound(&self) -> usize {
        let sub = if self.antipodal_in_orbit { 3 } else { 2 };
        (2 * self.value_classes).saturating_sub(sub)
    }
}

pub fn rotation_about(axis: Vector3<f64>, angle: f64) -> Matrix3<f64> {
    Rotation3::from_axis_angle(&Unit::new_normalize(axis), angle).into_inner()
}

fn cyclic_permutation() -> Matrix3<f64> {
    // (x, y, z) -> (z, x, y)
    Matrix3::new(0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0)
}

fn snap_entry(x: f64) -> f64 {
    const TARGETS: [f64; 5] = [0.0, 1.0, 0.5, TAU / 2.0, 1.0 / (2.0 * TAU)];
    for t in TARGETS {
        if (x.abs() - t).abs() < 1e-9 {
            return t.copysign(x);
        }
    }
    x
}

fn same_matrix(a: &Matrix3<f64>, b: &Matrix3<f64>) -> bool {
    (a - b).norm() < MATRIX_TOL
}

fn generators(kind: GroupKind) -> Vec<Matrix3<f64>> {
    let z = Vector3::z();
    let half_turn_x = Matrix3::from_diagonal(&Vector3::new(1.0, -1.0, -1.0));
    match kind {
        GroupKind::Cyclic(n) => vec![rotation_about(z, 2.0 * std::f64::consts::PI / n as f64)],
        GroupKind::Dihedral(n) => vec![
            rotation_about(z, 2.0 * std::f64::consts::PI / n as f64),
            half_turn_x,
        ],
        GroupKind::Tetrahedral => vec![
            cyclic_permutation(),
            Matrix3::from_diagonal(&Vector3::new(-1.0, -1.0, 1.0)),
        ],
        GroupKind::Octahedral => vec![
            rotation_about(z, std::f64::consts::FRAC_PI_2),
            cyclic_permutation(),
        ],
        GroupKind::Icosahedral => vec![
            cyclic_permutation(),
            rotation_about(Vector3::new(0.0, TAU, 1.0), 2.0 * std::f64::consts::PI / 5.0),
        ],
    }
}

/// Generates the group in its canonical orientation by closure.
pub fn generate_group(kind: GroupKind) -> Result<RotationGroup> {
    let expected = kind.order();
    if expected == 0 {
        return Err(Error::InvalidArgument("group order must be positive".into()));
    }
    let gens = generators(kind);
    let mut elements = vec![Matrix3::identity()];
    let mut i = 0;
    while i < elements.len() {
        let e = elements[i];
        for g in &gens {
            let m = (g * e).map(snap_entry);
            if !elements.iter().any(|x| same_matrix(x, &m)) {
                elements.push(m);
                if elements.len() > expected {
                    return Err(Error::GroupClosure { name: kind.to_string(), expected });
                }
            }
        }
        i += 1;
    }
    if elements.len() != expected {
        return Err(Error::GroupClosure { name: kind.to_string(), expected });
    }
    Ok(RotationGroup { kind, elements })
}

/// Sorts points lexicographically on coordinates rounded to 1e-9.
pub fn sort_points(points: &mut [BlochVector]) {
    let key = |v: &BlochVector| v.to_array().map(|c| (c * 1e9).round() as i64);
    points.sort_by_key(key);
}

pub fn dedup_points(points: Vec<BlochVector>, tol: f64) -> Vec<BlochVector> {
    let mut out: Vec<BlochVector> = Vec::with_capacity(points.len());
    for p in points {
        if !out.iter().any(|q| (q.as_vector() - p.as_vector()).norm() < tol) {
            out.push(p);
        }
    }
    out
}

impl RotationGroup {
    /// Group from an explicit list; checks orthogonality, determinant and closure.
    pub fn from_elements(kind: GroupKind, elements: Vec<Matrix3<f64>>) -> Result<Self> {
        for m in &elements {
            if (m.transpose() * m - Matrix3::identity()).norm() > 1e-10 || (m.determinant() - 1.0).abs() > 1e-10 {
                return Err(Error::InvalidArgument("element is not a proper rotation".into()));
            }
        }
        let g = RotationGroup { kind, elements };
        for a in &g.elements {
            for b in &g.elements {
                if g.index_of(&(a * b)).is_none() {
                    return Err(Error::GroupClosure { name: kind.to_string(), expected: g.order() });
                }
            }
        }
        Ok(g)
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Matrix3<f64>] {
        &self.elements
    }

    pub fn index_of(&self, m: &Matrix3<f64>) -> Option<usize> {
        self.elements.iter().position(|x| same_matrix(x, m))
    }

    pub fn apply(&self, index: usize, v: &BlochVector) -> BlochVector {
        BlochVector::normalize(self.elements[index] * v.as_vector()).expect("rotation preserves norm")
    }

    /// Distinct images of `v`, lexicographically ordered.
    pub fn orbit(&self, v: &BlochVector) -> Vec<BlochVector> {
        let images = (0..self.order()).map(|i| self.apply(i, v)).collect();
        let mut pts = dedup_points(images, POINT_TOL);
        sort_points(&mut pts);
        pts
    }

    /// Subgroup fixing `v`.
    pub fn stabilizer(&self, v: &BlochVector) -> RotationGroup {
        let elements: Vec<_> = self
            .elements
            .iter()
            .filter(|m| (*m * v.as_vector() - v.as_vector()).norm() < POINT_TOL)
            .copied()
            .collect();
        RotationGroup { kind: GroupKind::Cyclic(elements.len() as u32), elements }
    }

    /// Partitions the group into double cosets `K_v g K_v` of the stabilizer.
    pub fn double_coset_profile(&self, v: &BlochVector) -> DoubleCosetProfile {
        let k = self.stabilizer(v);
        let n = self.order();
        let mut assigned = vec![false; n];
        let (mut n_s, mut n_a) = (0, 0);
        let mut coset_sizes = Vec::new();
        for i in 0..n {
            if assigned[i] {
                continue;
            }
            let g = self.elements[i];
            let mut members = Vec::new();
            for a in k.elements() {
                for b in k.elements() {
                    let idx = self.index_of(&(a * g * b)).expect("closed group");
                    if !members.contains(&idx) {
                        members.push(idx);
                    }
                }
            }
            for &m in &members {
                assigned[m] = true;
            }
            let inv = self.index_of(&g.transpose()).expect("closed group");
            if members.contains(&inv) {
                n_s += 1;
            } else {
                n_a += 1;
            }
            coset_sizes.push(members.len());
        }
        let mut dots: Vec<f64> = self.elements.iter().map(|m| (m * v.as_vector()).dot(&v.as_vector())).collect();
        dots.sort_by(f64::total_cmp);
        dots.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        let antipode = v.antipode();
        let antipodal_in_orbit = (0..n)
            .any(|i| (self.elements[i] * v.as_vector() - antipode.as_vector()).norm() < POINT_TOL);
        DoubleCosetProfile {
            n_s,
            n_a,
            n_v: n_s as f64 + n_a as f64 / 2.0,
            antipodal_in_orbit,
            coset_sizes,
            value_classes: dots.len(),
        }
    }

    /// True when `v` lies on a rotation axis (nontrivial stabilizer).
    pub fn is_on_axis(&self, v: &BlochVector) -> bool {
        self.stabilizer(v).order() >= 2
    }
}

/// Upper bound on the degree of the Hermite interpolant from the double-coset counts.
pub fn degree_bound(profile: &DoubleCosetProfile, orbit_size: usize, stabilizer_order: usize) -> usize {
    let removed = if profile.antipodal_in_orbit { 2 } else { 1 };
    ((orbit_size - removed) / stabilizer_order + profile.n_s).saturating_sub(1)
}

/// Lexicographic comparison helper used by callers that need stable tie-breaks.
pub fn cmp_points(a: &BlochVector, b: &BlochVector) -> Ordering {
    a.to_array()
        .iter()
        .zip(b.to_array().iter())
        .map(|(x, y)| x.partial_cmp(y).unwrap_or(Ordering::Equal))
        .find(|o| *o != Ordering::Equal)
        .unwrap_or(Ordering::Equal)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(x: f64, y: f64, z: f64) -> BlochVector {
        BlochVector::normalize(Vector3::new(x, y, z)).unwrap()
    }

    #[test]
    fn group_orders() {
        assert_eq!(generate_group(GroupKind::Octahedral).unwrap().order(), 24);
        assert_eq!(generate_group(GroupKind::Icosahedral).unwrap().order(), 60);
        assert_eq!(generate_group(GroupKind::Tetrahedral).unwrap().order(), 12);
        assert_eq!(generate_group(GroupKind::Cyclic(5)).unwrap().order(), 5);
        assert_eq!(generate_group(GroupKind::Dihedral(1)).unwrap().order(), 2);
        assert_eq!(generate_group(GroupKind::Dihedral(2)).unwrap().order(), 4);
    }

    #[test]
    fn elements_are_proper_rotations_and_closed() {
        for kind in [GroupKind::Tetrahedral, GroupKind::Octahedral, GroupKind::Icosahedral] {
            let g = generate_group(kind).unwrap();
            let again = RotationGroup::from_elements(kind, g.elements().to_vec()).unwrap();
            assert_eq!(again.order(), g.order());
        }
    }

    #[test]
    fn icosahedral_entries_snap_to_golden_values() {
        let g = generate_group(GroupKind::Icosahedral).unwrap();
        let allowed = [0.0, 1.0, 0.5, TAU / 2.0, 1.0 / (2.0 * TAU)];
        for m in g.elements() {
            for &e in m.iter() {
                assert!(allowed.iter().any(|a| (e.abs() - a).abs() < 1e-15), "entry {e}");
            }
        }
    }

    #[test]
    fn orbit_and_stabilizer_examples() {
        let o = generate_group(GroupKind::Octahedral).unwrap();
        let i = generate_group(GroupKind::Icosahedral).unwrap();
        let z = unit(0.0, 0.0, 1.0);
        assert_eq!(o.orbit(&z).len(), 6);
        assert_eq!(o.orbit(&unit(1.0, 1.0, 1.0)).len(), 8);
        let x5 = unit(0.0, TAU, 1.0);
        assert_eq!(i.orbit(&x5).len(), 12);
        assert_eq!(o.stabilizer(&z).order(), 4);
        assert_eq!(i.stabilizer(&x5).order(), 5);
        let c7 = generate_group(GroupKind::Cyclic(7)).unwrap();
        assert_eq!(c7.stabilizer(&unit(0.3, 0.9, 0.0)).order(), 1);
    }

    #[test]
    fn double_coset_examples() {
        let o = generate_group(GroupKind::Octahedral).unwrap();
        let i = generate_group(GroupKind::Icosahedral).unwrap();
        let p = o.double_coset_profile(&unit(0.0, 0.0, 1.0));
        assert_eq!((p.n_a, p.n_s, p.n_v), (0, 3, 3.0));
        // Two of the five nontrivial double cosets of the cuboctahedral seed
        // are mutually inverse; the other three are self-inverse, so the
        // literal count exceeds the number of distinct inner products.
        let p = o.double_coset_profile(&unit(0.0, 1.0, 1.0));
        assert_eq!((p.n_a, p.n_s, p.n_v), (2, 5, 6.0));
        assert_eq!(p.value_classes, 5);
        assert_eq!(p.value_degree_bound(), 7);
        let p = i.double_coset_profile(&unit(0.0, 0.0, 1.0));
        assert_eq!((p.n_a, p.n_s, p.n_v), (8, 8, 12.0));
        assert_eq!(p.n_a + p.n_s, 16);
        assert_eq!(p.value_classes, 9);
        assert_eq!(p.value_degree_bound(), 15);
        assert_eq!(p.coset_sizes.iter().sum::<usize>(), 60);
    }

    #[test]
    fn degree_bound_examples() {
        let o = generate_group(GroupKind::Octahedral).unwrap();
        let i = generate_group(GroupKind::Icosahedral).unwrap();
        let t = generate_group(GroupKind::Tetrahedral).unwrap();
        let cube = unit(1.0, 1.0, 1.0);
        let p = o.double_coset_profile(&cube);
        assert_eq!(degree_bound(&p, 8, 3), 5);
        let dodeca = unit(0.0, 1.0 / TAU, TAU);
        let p = i.double_coset_profile(&dodeca);
        assert_eq!(degree_bound(&p, 20, 3), 11);
        assert_eq!(p.value_degree_bound(), 9);
        let p = t.double_coset_profile(&cube);
        assert!(!p.antipodal_in_orbit);
        assert_eq!(degree_bound(&p, 4, 3), 2);
    }

    #[test]
    fn parse_tags() {
        assert_eq!(GroupKind::parse("C_n", Some(5)).unwrap(), GroupKind::Cyclic(5));
        assert_eq!(GroupKind::parse("C7", None).unwrap(), GroupKind::Cyclic(7));
        assert_eq!(GroupKind::parse("I", None).unwrap(), GroupKind::Icosahedral);
        assert!(GroupKind::parse("X", None).is_err());
        assert!(GroupKind::parse("C_n", None).is_err());
    }
}

//! Informational power, the average relative entropy and entropic
//! uncertainty bounds.

use serde::{Deserialize, Serialize};

use crate::bloch::eta_clamped;
use crate::catalog::{make_hs_povm, Family, HsPovm};
use crate::error::{Error, Result};

/// Five-digit reference values, in display order. The polygon row
/// is the `n → ∞` limit.
#[allow(clippy::approx_constant)]
pub const REFERENCE_INFO_POWER: [(&str, f64); 9] = [
    ("digon", 0.69315),
    ("n-gon (n→∞)", 0.30685),
    ("tetrahedron", 0.28768),
    ("octahedron", 0.23105),
    ("cube", 0.21576),
    ("cuboctahedron", 0.20273),
    ("icosahedron", 0.20189),
    ("dodecahedron", 0.19686),
    ("icosidodecahedron", 0.19486),
];

/// Reference average relative entropy in dimension two.
pub const REFERENCE_AVERAGE: f64 = 0.19315;

/// Polygon size standing in for the `n → ∞` row.
pub const NGON_LIMIT_N: u32 = 100_000;

/// `W = ln 2 − (2/k) Σⱼ η((1 − vⱼ·v)/2)` for a highly symmetric POVM.
pub fn informational_power(povm: &HsPovm) -> Result<f64> {
    if !povm.family().is_highly_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let v = povm.fiducial();
    let k = povm.k() as f64;
    let s: f64 = povm.vectors().iter().map(|u| eta_clamped((1.0 - u.dot(v)) / 2.0)).sum();
    Ok(std::f64::consts::LN_2 - 2.0 / k * s)
}

/// `W = ln 2 − (2/n) Σⱼ η(sin²(πj/n))`.
pub fn ngon_informational_power(n: u32) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("polygon needs n ≥ 2, got {n}")));
    }
    let nf = f64::from(n);
    let s: f64 = (1..=n)
        .map(|j| eta_clamped((std::f64::consts::PI * f64::from(j) / nf).sin().powi(2)))
        .sum();
    Ok(std::f64::consts::LN_2 - 2.0 / nf * s)
}

/// `ln d − Σ_{j=2}^{d} 1/j`, the average of the relative entropy over pure states.
pub fn average_relative_entropy(d: u64) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("dimension must be ≥ 2, got {d}")));
    }
    // sum smallest terms first
    let tail: f64 = (2..=d).rev().map(|j| 1.0 / j as f64).sum();
    Ok((d as f64).ln() - tail)
}

/// Qubit bound `ln 2 + ln max |cos θ|`, `θ` half the Bloch angle between
/// elements of the two halves of `Π = (½Π¹, ½Π²)`.
pub fn uncertainty_upper_bound(first: &HsPovm, second: &HsPovm) -> f64 {
    let mut best: f64 = 0.0;
    for a in first.vectors() {
        for b in second.vectors() {
            best = best.max((a.angle_to(b) / 2.0).cos().abs());
        }
    }
    std::f64::consts::LN_2 + best.ln()
}

/// Dimension-`d` form `ln d + ½ ln((1 − 1/d) max cos 2θ + 1/d)`.
pub fn uncertainty_upper_bound_general(d: u32, max_cos_2theta: f64) -> Result<f64> {
    if d < 2 || !(-1.0..=1.0).contains(&max_cos_2theta) {
        return Err(Error::InvalidArgument("need d ≥ 2 and a cosine in [−1, 1]".into()));
    }
    let df = f64::from(d);
    let arg = (1.0 - 1.0 / df) * max_cos_2theta + 1.0 / df;
    Ok(df.ln() + 0.5 * arg.ln())
}

/// `(ln(k/2), ln k)`, the range of the measurement entropy.
pub fn entropy_bounds(povm: &HsPovm) -> (f64, f64) {
    let k = povm.k() as f64;
    ((k / 2.0).ln(), k.ln())
}

/// Splits a centrally symmetric 4-element POVM into its two antipodal pairs.
pub fn antipodal_pairs(povm: &HsPovm) -> Option<(HsPovm, HsPovm)> {
    let vs = povm.vectors();
    if vs.len() != 4 {
        return None;
    }
    let partner = (1..4).find(|&j| vs[0].dot(&vs[j]) < -1.0 + 1e-12)?;
    let rest: Vec<_> = (1..4).filter(|&j| j != partner).map(|j| vs[j]).collect();
    if rest[0].dot(&rest[1]) > -1.0 + 1e-12 {
        return None;
    }
    Some((HsPovm::custom(vec![vs[0], vs[partner]]).ok()?, HsPovm::custom(rest).ok()?))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InfoPowerReport {
    pub family: Family,
    pub w: f64,
    pub h_min: f64,
    pub average_relative_entropy: f64,
    pub uncertainty_bound: Option<f64>,
}

pub fn info_power_report(povm: &HsPovm) -> Result<InfoPowerReport> {
    let w = informational_power(povm)?;
    Ok(InfoPowerReport {
        family: povm.family(),
        w,
        h_min: (povm.k() as f64).ln() - w,
        average_relative_entropy: average_relative_entropy(2)?,
        uncertainty_bound: antipodal_pairs(povm).map(|(a, b)| uncertainty_upper_bound(&a, &b)),
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InfoPowerRow {
    pub label: String,
    pub computed: f64,
    pub reference: f64,
    pub delta: f64,
}

/// Recomputes the nine informational-power rows.
pub fn info_power_table() -> Result<Vec<InfoPowerRow>> {
    let families = [
        None,
        Some(Family::Tetrahedron),
        Some(Family::Octahedron),
        Some(Family::Cube),
        Some(Family::Cuboctahedron),
        Some(Family::Icosahedron),
        Some(Family::Dodecahedron),
        Some(Family::Icosidodecahedron),
    ];
    let mut rows = Vec::with_capacity(9);
    for (i, (label, reference)) in REFERENCE_INFO_POWER.iter().enumerate() {
        let computed = match i {
            0 => informational_power(&make_hs_povm(Family::Digon)?)?,
            1 => ngon_informational_power(NGON_LIMIT_N)?,
            _ => informational_power(&make_hs_povm(families[i - 1].expect("solid"))?)?,
        };
        rows.push(InfoPowerRow { label: label.to_string(), computed, reference: *reference, delta: computed - reference });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::LN_2;

    #[test]
    fn closed_forms() {
        let w = |f| informational_power(&make_hs_povm(f).unwrap()).unwrap();
        assert_abs_diff_eq!(w(Family::Tetrahedron), (4.0f64 / 3.0).ln(), epsilon = 1e-14);
        assert_abs_diff_eq!(w(Family::Octahedron), LN_2 / 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(w(Family::Digon), LN_2, epsilon = 1e-15);
        assert_abs_diff_eq!(ngon_informational_power(4).unwrap(), LN_2 / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ngon_informational_power(2).unwrap(), LN_2, epsilon = 1e-15);
        assert_abs_diff_eq!(ngon_informational_power(10_000).unwrap(), 1.0 - LN_2, epsilon = 1e-4);
        assert_abs_diff_eq!(w(Family::Ngon(7)), ngon_informational_power(7).unwrap(), epsilon = 1e-14);
    }

    #[test]
    fn table_rows_match() {
        for row in info_power_table().unwrap() {
            assert!(row.delta.abs() < 5e-6, "{row:?}");
        }
    }

    #[test]
    fn averages() {
        assert_abs_diff_eq!(average_relative_entropy(2).unwrap(), LN_2 - 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(average_relative_entropy(3).unwrap(), 3f64.ln() - 5.0 / 6.0, epsilon = 1e-15);
        let euler_gamma = 0.577_215_664_901_532_9;
        assert_abs_diff_eq!(average_relative_entropy(1_000_000).unwrap(), 1.0 - euler_gamma, epsilon = 1e-5);
        assert!(average_relative_entropy(1).is_err());
    }

    #[test]
    fn uncertainty() {
        let sq = make_hs_povm(Family::Ngon(4)).unwrap();
        let (a, b) = antipodal_pairs(&sq).unwrap();
        assert_abs_diff_eq!(uncertainty_upper_bound(&a, &b), LN_2 / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(uncertainty_upper_bound(&a, &a), LN_2, epsilon = 1e-15);
        let alpha = 1.0f64;
        let r = crate::catalog::make_rectangle_povm(alpha).unwrap();
        let (a, b) = antipodal_pairs(&r).unwrap();
        let expected = LN_2 + (alpha / 2.0).sin().abs().max((alpha / 2.0).cos().abs()).ln();
        assert_abs_diff_eq!(uncertainty_upper_bound(&a, &b), expected, epsilon = 1e-12);
        // the general form reduces to the qubit one
        let theta: f64 = 0.4;
        assert_abs_diff_eq!(
            uncertainty_upper_bound_general(2, (2.0 * theta).cos()).unwrap(),
            LN_2 + theta.cos().ln(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn bounds_and_refusal() {
        let (lo, hi) = entropy_bounds(&make_hs_povm(Family::Icosidodecahedron).unwrap());
        assert_abs_diff_eq!(lo, 15f64.ln());
        assert_abs_diff_eq!(hi, 30f64.ln());
        let r = crate::catalog::make_rectangle_povm(1.0).unwrap();
        assert!(matches!(informational_power(&r), Err(Error::NotSymmetric)));
    }
}

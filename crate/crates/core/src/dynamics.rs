//! Dynamical entropy of a qubit unitary with respect to a POVM.

use nalgebra::{DMatrix, Matrix3, Vector3};

use crate::bloch::{eta_clamped, EntropyKernel};
use crate::catalog::HsPovm;
use crate::entropy::entropy_at;
use crate::error::{Error, Result};
use crate::groups::rotation_about;

/// Longest block enumerated by [`block_entropy`].
pub const MAX_BLOCK: usize = 8;
/// Largest number of sequences enumerated by [`block_entropy`].
pub const SEQUENCE_BUDGET: u128 = 10_000_000;

/// Bloch-space action of a qubit unitary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitaryAsRotation {
    r: Matrix3<f64>,
}

impl UnitaryAsRotation {
    pub fn new(r: Matrix3<f64>) -> Result<Self> {
        let orth = (r.transpose() * r - Matrix3::identity()).abs().max();
        if orth > 1e-10 || (r.determinant() - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidArgument("matrix is not a proper rotation".into()));
        }
        Ok(UnitaryAsRotation { r })
    }

    pub fn identity() -> Self {
        UnitaryAsRotation { r: Matrix3::identity() }
    }

    pub fn about(axis: Vector3<f64>, angle: f64) -> Result<Self> {
        if axis.norm() < 1e-12 {
            return Err(Error::InvalidArgument("rotation axis is zero".into()));
        }
        Ok(UnitaryAsRotation { r: rotation_about(axis, angle) })
    }

    pub fn inverse(&self) -> Self {
        UnitaryAsRotation { r: self.r.transpose() }
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.r
    }
}

/// Row-stochastic matrix `pᵢⱼ = (1 + (R vᵢ)·vⱼ)/k`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    p: DMatrix<f64>,
}

impl TransitionMatrix {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.p
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.p[(i, j)]
    }

    /// Largest deviation of a row or column sum from 1.
    pub fn stochasticity_error(&self) -> f64 {
        let rows = self.p.row_iter().map(|r| (r.sum() - 1.0).abs());
        let cols = self.p.column_iter().map(|c| (c.sum() - 1.0).abs());
        rows.chain(cols).fold(0.0, f64::max)
    }
}

pub fn transition_matrix(r: &UnitaryAsRotation, povm: &HsPovm) -> TransitionMatrix {
    let k = povm.k();
    let vs: Vec<Vector3<f64>> = povm.vectors().iter().map(|v| v.as_vector()).collect();
    let p = DMatrix::from_fn(k, k, |i, j| ((1.0 + (r.r * vs[i]).dot(&vs[j])) / k as f64).max(0.0));
    TransitionMatrix { p }
}

/// `(1/k) Σᵢⱼ η(pᵢⱼ)`.
pub fn dynamical_entropy(r: &UnitaryAsRotation, povm: &HsPovm) -> f64 {
    let t = transition_matrix(r, povm);
    t.p.iter().map(|&x| eta_clamped(x)).sum::<f64>() / povm.k() as f64
}

/// Mean entropy over the POVM's own states.
pub fn measurement_entropy(povm: &HsPovm) -> f64 {
    let k = povm.k() as f64;
    povm.vectors().iter().map(|v| entropy_at(v, povm, EntropyKernel::Shannon)).sum::<f64>() / k
}

/// Probability of the outcome sequence (0-based indices) for the initial
/// Bloch vector `rho`.
pub fn sequence_probability(
    rho: &Vector3<f64>,
    r: &UnitaryAsRotation,
    povm: &HsPovm,
    sequence: &[usize],
) -> Result<f64> {
    if rho.norm() > 1.0 + 1e-12 {
        return Err(Error::NotUnit { norm: rho.norm() });
    }
    let k = povm.k();
    if let Some(&bad) = sequence.iter().find(|&&i| i >= k) {
        return Err(Error::InvalidArgument(format!("outcome index {bad} out of range 0..{k}")));
    }
    let Some(&first) = sequence.first() else {
        return Ok(1.0);
    };
    let t = transition_matrix(r, povm);
    let mut p = (1.0 + rho.dot(&povm.vectors()[first].as_vector())) / k as f64;
    for w in sequence.windows(2) {
        p *= t.get(w[0], w[1]);
    }
    Ok(p)
}

/// Shannon entropy `H_n` of length-`n` outcome blocks from the maximally
/// mixed state, by exhaustive enumeration.
pub fn block_entropy(r: &UnitaryAsRotation, povm: &HsPovm, n: usize) -> Result<f64> {
    let k = povm.k();
    let needed = (k as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if n > MAX_BLOCK || needed > SEQUENCE_BUDGET {
        return Err(Error::EnumerationBudget { needed, budget: SEQUENCE_BUDGET });
    }
    if n == 0 {
        return Ok(0.0);
    }
    let t = transition_matrix(r, povm);
    fn walk(t: &TransitionMatrix, last: usize, p: f64, left: usize, acc: &mut f64) {
        if left == 0 {
            *acc += eta_clamped(p);
            return;
        }
        for j in 0..t.p.ncols() {
            walk(t, j, p * t.get(last, j), left - 1, acc);
        }
    }
    let mut acc = 0.0;
    for i in 0..k {
        walk(&t, i, 1.0 / k as f64, n - 1, &mut acc);
    }
    Ok(acc)
}

/// `H_{n+1} − H_n` by enumeration.
pub fn empirical_entropy_rate(r: &UnitaryAsRotation, povm: &HsPovm, n: usize) -> Result<f64> {
    Ok(block_entropy(r, povm, n + 1)? - block_entropy(r, povm, n)?)
}

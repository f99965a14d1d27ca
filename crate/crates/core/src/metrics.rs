//! Two-qubit entanglement and nonlocality measures.

use nalgebra::{Matrix3, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qstate::{c, CMatrix, DensityMatrix, C64};

/// States with purity this close to one are treated as pure in [`fidelity`].
const PURE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub concurrence: f64,
    pub bell_max: f64,
    pub linear_entropy: f64,
    pub purity: f64,
}

impl MetricReport {
    pub fn of(rho: &DensityMatrix) -> Result<Self> {
        Ok(MetricReport {
            concurrence: concurrence(rho)?,
            bell_max: bell_max(rho)?,
            linear_entropy: linear_entropy(rho)?,
            purity: rho.purity(),
        })
    }
}

fn require_two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() == 4 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "two-qubit measure applied to a {}-dimensional state",
            rho.dim()
        )))
    }
}

pub fn pauli(k: usize) -> CMatrix {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    let v = match k {
        0 => [one, z, z, one],
        1 => [z, one, one, z],
        2 => [z, -i, i, z],
        3 => [one, z, z, -one],
        _ => panic!("pauli index {k} out of range"),
    };
    CMatrix::from_row_slice(2, 2, &v)
}

/// ρ = W W† with W = V √Λ, negative eigenvalues dropped.
fn factor(rho: &DensityMatrix) -> CMatrix {
    let eig = rho.matrix().clone().symmetric_eigen();
    let n = rho.dim();
    let mut w = eig.eigenvectors.clone();
    for k in 0..n {
        let s = eig.eigenvalues[k].max(0.0).sqrt();
        w.column_mut(k).scale_mut(s);
    }
    w
}

/// Wootters concurrence.
///
/// The λᵢ (square roots of the spectrum of ρ ρ̃) are taken as the singular
/// values of Wᵀ (σy⊗σy) W for any factorization ρ = W W†. This stays
/// accurate to rounding for rank-deficient states, where the spectrum of
/// ρ ρ̃ itself loses half the digits.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubit(rho)?;
    let w = factor(rho);
    let yy = pauli(2).kronecker(&pauli(2));
    let m = w.transpose() * yy * &w;
    let mut s: Vec<f64> = m.singular_values().iter().cloned().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok((s[0] - s[1] - s[2] - s[3]).clamp(0.0, 1.0))
}

/// T_ij = Tr[ρ (σ_i ⊗ σ_j)], i, j ∈ {x, y, z}.
pub fn correlation_matrix(rho: &DensityMatrix) -> Result<Matrix3<f64>> {
    require_two_qubit(rho)?;
    let mut t = Matrix3::zeros();
    for i in 0..3 {
        for j in 0..3 {
            let op = pauli(i + 1).kronecker(&pauli(j + 1));
            t[(i, j)] = (rho.matrix() * op).trace().re;
        }
    }
    Ok(t)
}

/// Maximal CHSH value 2√(m₁+m₂) over all measurement settings.
pub fn bell_max(rho: &DensityMatrix) -> Result<f64> {
    let t = correlation_matrix(rho)?;
    let mut m: Vec<f64> = SymmetricEigen::new(t.transpose() * t).eigenvalues.iter().cloned().collect();
    m.sort_by(|a, b| b.total_cmp(a));
    Ok(2.0 * (m[0] + m[1]).max(0.0).sqrt())
}

/// Uhlmann fidelity (Tr √(√ρ σ √ρ))².
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::InvalidArgument(format!(
            "fidelity between dimensions {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    if rho.purity() >= 1.0 - PURE_TOL || sigma.purity() >= 1.0 - PURE_TOL {
        let f = (rho.matrix() * sigma.matrix()).trace().re;
        return Ok(f.clamp(0.0, 1.0));
    }
    // Tr √(√ρ σ √ρ) is the nuclear norm of √ρ √σ.
    let prod = sqrt_psd(rho) * sqrt_psd(sigma);
    let nuclear: f64 = prod.singular_values().iter().sum();
    Ok((nuclear * nuclear).clamp(0.0, 1.0))
}

fn sqrt_psd(rho: &DensityMatrix) -> CMatrix {
    let eig = rho.matrix().clone().symmetric_eigen();
    let n = rho.dim();
    let mut out = CMatrix::zeros(n, n);
    for k in 0..n {
        let l = eig.eigenvalues[k];
        if l > 1e-14 {
            let v = eig.eigenvectors.column(k);
            out += (v * v.adjoint()) * C64::new(l.sqrt(), 0.0);
        }
    }
    out
}

/// (4/3)(1 − Tr ρ²): 0 for pure states, 1 for 𝟙/4.
pub fn linear_entropy(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubit(rho)?;
    Ok((4.0 / 3.0 * (1.0 - rho.purity())).clamp(0.0, 1.0))
}

/// Partial transpose on photon B.
pub fn partial_transpose(rho: &DensityMatrix) -> Result<CMatrix> {
    require_two_qubit(rho)?;
    let m = rho.matrix();
    Ok(CMatrix::from_fn(4, 4, |r, s| {
        let (a, b) = (r / 2, r % 2);
        let (a2, b2) = (s / 2, s % 2);
        m[(a * 2 + b2, a2 * 2 + b)]
    }))
}

/// Positive partial transpose, equivalent to separability for two qubits.
pub fn is_ppt(rho: &DensityMatrix, tol: f64) -> Result<bool> {
    let pt = partial_transpose(rho)?;
    let min = pt.symmetric_eigen().eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(min >= -tol)
}

//! Closed-form subproblem solutions for the three blocks.

use nalgebra::DMatrix;

use crate::engine::BlockError;
use crate::maps::{spectral_map, sym_eigen};

/// Log-det block: minimiser of
/// `⟨X, C⟩ − log det X + (σ̄/2)‖X − Xᵏ − (τ/σ̄)λ̄‖²_F`.
///
/// With `C − σ̄Xᵏ − τλ̄ = U·Diag(ρ)·Uᵀ` the solution is `U·Diag(γ)·Uᵀ` where
/// `γᵢ` is the positive root of `σ̄γ² + ργ − 1 = 0`.
pub fn x_prox(
    center: &DMatrix<f64>,
    multiplier: &DMatrix<f64>,
    sigma_bar: f64,
    tau: f64,
    covariance: &DMatrix<f64>,
) -> Result<DMatrix<f64>, BlockError> {
    if !(sigma_bar > 0.0) {
        return Err(BlockError::Domain(format!("σ̄ must be positive, got {sigma_bar}")));
    }
    let m = covariance - center * sigma_bar - multiplier * tau;
    let eig = sym_eigen(&m).ok_or(BlockError::EigenFailure)?;
    Ok(spectral_map(&eig, |rho| log_det_root(rho, sigma_bar)))
}

/// Positive root of `σ̄γ² + ργ − 1 = 0`.
pub fn log_det_root(rho: f64, sigma_bar: f64) -> f64 {
    let disc = (rho * rho + 4.0 * sigma_bar).sqrt();
    if rho > 0.0 {
        // Avoids cancellation in −ρ + √(ρ² + 4σ̄) for large positive ρ.
        2.0 / (rho + disc)
    } else {
        (-rho + disc) / (2.0 * sigma_bar)
    }
}

/// `sign(a)·max(|a| − κ, 0)`.
pub fn shrink(a: f64, kappa: f64) -> f64 {
    if a > kappa {
        a - kappa
    } else if a < -kappa {
        a + kappa
    } else {
        0.0
    }
}

/// Sparse block: `Shrink(Sᵏ − (τ/σ̄)λ̄, ν/σ̄)` entrywise.
pub fn s_prox(
    center: &DMatrix<f64>,
    multiplier: &DMatrix<f64>,
    sigma_bar: f64,
    tau: f64,
    nu: f64,
) -> DMatrix<f64> {
    let kappa = nu / sigma_bar;
    let coef = tau / sigma_bar;
    center.zip_map(multiplier, |s, l| shrink(s - coef * l, kappa))
}

/// Low-rank block: projection of `Lᵏ + (τλ̄ − μI)/σ̄` onto the PSD cone.
pub fn l_prox(
    center: &DMatrix<f64>,
    multiplier: &DMatrix<f64>,
    sigma_bar: f64,
    tau: f64,
    mu: f64,
) -> Result<DMatrix<f64>, BlockError> {
    let n = center.nrows();
    let shifted =
        center + (multiplier * tau - DMatrix::identity(n, n) * mu) / sigma_bar;
    project_psd(&shifted)
}

/// Nearest positive semidefinite matrix in Frobenius norm.
pub fn project_psd(m: &DMatrix<f64>) -> Result<DMatrix<f64>, BlockError> {
    let eig = sym_eigen(m).ok_or(BlockError::EigenFailure)?;
    Ok(spectral_map(&eig, |rho| rho.max(0.0)))
}

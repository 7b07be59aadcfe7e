//! Latent-variable Gaussian graphical model selection:
//!
//! ```text
//! min  ⟨X, C⟩ − log det X + ν‖S‖₁ + μ·tr(L)
//! s.t. X − S + L = 0,  L ⪰ 0.
//! ```
//!
//! Mapped onto three blocks with `A₁ = I` (X), `A₂ = −I` (S), `A₃ = I` (L)
//! and `b = 0`. Matrices travel through the engine as column-major flattened
//! vectors of length `n²`. The generic subproblem
//! `fᵢ(x) + (σ̄/2)‖Aᵢ(x − xᵏ) − (τ/σ̄)λ‖²` reduces, for `A₂ = −I`, to the
//! centre `Sᵏ − (τ/σ̄)λ`, and for `A₁ = A₃ = I` to `· + (τ/σ̄)λ`.

mod generate;
mod io;
pub mod prox;

pub use generate::{generate, GeneratorSpec, DEFAULT_MU, DEFAULT_NU};
pub use io::{
    format_instance, parse_instance, read_instance, read_reference, reference_path, write_instance,
    write_reference, InstanceFileError, ReferenceRecord,
};
pub use prox::{l_prox, s_prox, x_prox};

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::engine::{BlockError, BlockProblem, ProxBlock};
use crate::maps::{flatten, symmetrize, unflatten, BlockMap};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LvggmsError {
    #[error("dimension must be at least 2, got {0}")]
    Dimension(usize),
    #[error("weight {name} must be positive, got {value}")]
    Weight { name: &'static str, value: f64 },
    #[error("covariance must be {n}×{n}, got {rows}×{cols}")]
    Shape { n: usize, rows: usize, cols: usize },
    #[error("density must lie in (0, 1), got {0}")]
    Density(f64),
    #[error("X is not positive definite")]
    NotPositiveDefinite,
}

/// Problem data `(C, ν, μ)`; `C` is symmetrised on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct LvggmsInstance {
    covariance: DMatrix<f64>,
    nu: f64,
    mu: f64,
    /// Generator seed, when the instance came from [`generate`].
    pub seed: Option<u64>,
}

impl LvggmsInstance {
    pub fn new(covariance: DMatrix<f64>, nu: f64, mu: f64) -> Result<Self, LvggmsError> {
        let (rows, cols) = covariance.shape();
        if rows != cols {
            return Err(LvggmsError::Shape { n: rows, rows, cols });
        }
        if rows < 2 {
            return Err(LvggmsError::Dimension(rows));
        }
        if !(nu > 0.0) {
            return Err(LvggmsError::Weight { name: "ν", value: nu });
        }
        if !(mu > 0.0) {
            return Err(LvggmsError::Weight { name: "μ", value: mu });
        }
        Ok(Self { covariance: symmetrize(&covariance), nu, mu, seed: None })
    }

    pub fn n(&self) -> usize {
        self.covariance.nrows()
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.covariance
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// `F(X, S, L)`.
    pub fn objective(&self, x: &DMatrix<f64>, s: &DMatrix<f64>, l: &DMatrix<f64>) -> Result<f64, LvggmsError> {
        Ok(self.smooth_part(x)? + self.nu * l1_norm(s) + self.mu * l.trace())
    }

    /// `⟨X, C⟩ − log det X`.
    fn smooth_part(&self, x: &DMatrix<f64>) -> Result<f64, LvggmsError> {
        Ok(x.dot(&self.covariance) - log_det(x)?)
    }

    /// The three-block problem for the engine.
    pub fn problem(&self) -> BlockProblem {
        let n = self.n();
        let dim = n * n;
        let blocks: Vec<Box<dyn ProxBlock>> = vec![
            Box::new(LogDetBlock { covariance: self.covariance.clone(), n, map: BlockMap::identity(dim) }),
            Box::new(SparseBlock { nu: self.nu, n, map: BlockMap::negative_identity(dim) }),
            Box::new(LowRankBlock { mu: self.mu, n, map: BlockMap::identity(dim) }),
        ];
        BlockProblem::new(blocks, DVector::zeros(dim)).expect("blocks share the constraint space")
    }
}

/// Starting point `(X⁰, S⁰, L⁰, λ⁰) = (aI, bI, cI, dI)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct IdentityStart {
    pub x: f64,
    pub s: f64,
    pub l: f64,
    pub lambda: f64,
}

impl Default for IdentityStart {
    /// `(I, 4I, 3I, 0)`, which is feasible.
    fn default() -> Self {
        Self { x: 1.0, s: 4.0, l: 3.0, lambda: 0.0 }
    }
}

impl IdentityStart {
    /// Flattened blocks and multiplier for an `n × n` instance.
    pub fn vectors(&self, n: usize) -> (Vec<DVector<f64>>, DVector<f64>) {
        let eye = flatten(&DMatrix::identity(n, n));
        (
            vec![&eye * self.x, &eye * self.s, &eye * self.l],
            &eye * self.lambda,
        )
    }
}

/// Splits flattened engine blocks back into `(X, S, L)`.
pub fn unpack(x: &[DVector<f64>], n: usize) -> (DMatrix<f64>, DMatrix<f64>, DMatrix<f64>) {
    (unflatten(&x[0], n), unflatten(&x[1], n), unflatten(&x[2], n))
}

/// `Σ |Sᵢⱼ|`.
pub fn l1_norm(s: &DMatrix<f64>) -> f64 {
    s.iter().map(|v| v.abs()).sum()
}

/// `log det X` through a Cholesky factorisation.
pub fn log_det(x: &DMatrix<f64>) -> Result<f64, LvggmsError> {
    let chol = symmetrize(x).cholesky().ok_or(LvggmsError::NotPositiveDefinite)?;
    Ok(2.0 * chol.l_dirty().diagonal().iter().map(|d| d.ln()).sum::<f64>())
}

/// `‖X − S + L‖_F / max{1, ‖X‖_F, ‖S‖_F, ‖L‖_F}`.
pub fn cer(x: &DMatrix<f64>, s: &DMatrix<f64>, l: &DMatrix<f64>) -> f64 {
    let denom = [x.norm(), s.norm(), l.norm()].into_iter().fold(1.0, f64::max);
    (x - s + l).norm() / denom
}

struct LogDetBlock {
    covariance: DMatrix<f64>,
    n: usize,
    map: BlockMap,
}

impl ProxBlock for LogDetBlock {
    fn map(&self) -> &BlockMap {
        &self.map
    }

    fn prox(&self, center: &DVector<f64>, multiplier: &DVector<f64>, weight: f64, tau: f64) -> Result<DVector<f64>, BlockError> {
        let x = x_prox(&unflatten(center, self.n), &unflatten(multiplier, self.n), weight, tau, &self.covariance)?;
        debug_assert!(x.clone().cholesky().is_some(), "log-det prox left the PD cone");
        Ok(flatten(&x))
    }

    fn objective(&self, x: &DVector<f64>) -> Result<f64, BlockError> {
        let x = unflatten(x, self.n);
        let ld = log_det(&x).map_err(|e| BlockError::Domain(e.to_string()))?;
        Ok(x.dot(&self.covariance) - ld)
    }
}

struct SparseBlock {
    nu: f64,
    n: usize,
    map: BlockMap,
}

impl ProxBlock for SparseBlock {
    fn map(&self) -> &BlockMap {
        &self.map
    }

    fn prox(&self, center: &DVector<f64>, multiplier: &DVector<f64>, weight: f64, tau: f64) -> Result<DVector<f64>, BlockError> {
        Ok(flatten(&s_prox(&unflatten(center, self.n), &unflatten(multiplier, self.n), weight, tau, self.nu)))
    }

    fn objective(&self, x: &DVector<f64>) -> Result<f64, BlockError> {
        Ok(self.nu * x.iter().map(|v| v.abs()).sum::<f64>())
    }
}

struct LowRankBlock {
    mu: f64,
    n: usize,
    map: BlockMap,
}

impl ProxBlock for LowRankBlock {
    fn map(&self) -> &BlockMap {
        &self.map
    }

    fn prox(&self, center: &DVector<f64>, multiplier: &DVector<f64>, weight: f64, tau: f64) -> Result<DVector<f64>, BlockError> {
        let l = l_prox(&unflatten(center, self.n), &unflatten(multiplier, self.n), weight, tau, self.mu)?;
        debug_assert!(
            {
                let shift = 1e-9 * l.norm().max(1.0);
                (&l + DMatrix::identity(self.n, self.n) * shift).cholesky().is_some()
            },
            "low-rank prox left the PSD cone"
        );
        Ok(flatten(&l))
    }

    fn objective(&self, x: &DVector<f64>) -> Result<f64, BlockError> {
        Ok(self.mu * unflatten(x, self.n).trace())
    }
}

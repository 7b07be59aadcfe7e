//! The parameterized proximal matrix `G` and its inner product.
//!
//! For block maps `A₁..A_p` and parameters `(σ, s, τ, ε)`,
//!
//! ```text
//!     ⎡ c₁A₁ᵀA₁                      −εA₁ᵀ ⎤
//! G = ⎢          c₂A₂ᵀA₂             −τA₂ᵀ ⎥
//!     ⎢                   ⋱            ⋮   ⎥
//!     ⎢                      c_pA_pᵀA_p −τA_pᵀ ⎥
//!     ⎣ −εA₁    −τA₂   ⋯   −τA_p        s·I  ⎦
//! ```
//!
//! with `c₁ = σ₁ + (ε²−1)/s` and `cᵢ = σᵢ + (τ²−1)/s`. `G` only appears in
//! the convergence theory; the iteration itself never touches it. This module
//! exists for diagnostics and tests.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::maps::{symmetrize, BlockMap};
use crate::params::SolverParams;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("expected {expected} block maps, got {got}")]
    BlockCount { expected: usize, got: usize },
    #[error("block {block} maps into R^{got}, expected R^{expected}")]
    RowMismatch { block: usize, expected: usize, got: usize },
    #[error("block {0} does not have full column rank")]
    RankDeficient(usize),
    #[error("vector has length {got}, expected {expected}")]
    Length { expected: usize, got: usize },
}

#[derive(Debug, Clone)]
pub struct GMetric {
    params: SolverParams,
    maps: Vec<BlockMap>,
    m: usize,
}

/// Outcome of the positive-definiteness check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PdReport {
    Definite { min_eigenvalue: f64 },
    NotDefinite { min_eigenvalue: f64 },
    /// The eigensolver did not converge.
    Indeterminate,
}

impl PdReport {
    pub fn is_positive_definite(&self) -> bool {
        matches!(self, PdReport::Definite { .. })
    }

    pub fn min_eigenvalue(&self) -> Option<f64> {
        match *self {
            PdReport::Definite { min_eigenvalue } | PdReport::NotDefinite { min_eigenvalue } => {
                Some(min_eigenvalue)
            }
            PdReport::Indeterminate => None,
        }
    }
}

impl GMetric {
    /// Builds the metric. Parameters are not validated here: the metric can be
    /// formed for any tuple, which is what makes it useful for checking where
    /// positive definiteness fails.
    pub fn new(params: SolverParams, maps: Vec<BlockMap>) -> Result<Self, MetricError> {
        if maps.len() != params.p() {
            return Err(MetricError::BlockCount { expected: params.p(), got: maps.len() });
        }
        let m = maps.first().map(BlockMap::nrows).unwrap_or(0);
        for (i, a) in maps.iter().enumerate() {
            if a.nrows() != m {
                return Err(MetricError::RowMismatch { block: i, expected: m, got: a.nrows() });
            }
            if !a.has_full_column_rank() {
                return Err(MetricError::RankDeficient(i));
            }
        }
        Ok(Self { params, maps, m })
    }

    pub fn params(&self) -> &SolverParams {
        &self.params
    }

    pub fn maps(&self) -> &[BlockMap] {
        &self.maps
    }

    pub fn constraint_dim(&self) -> usize {
        self.m
    }

    /// Order of `G`: `Σ nᵢ + m`.
    pub fn order(&self) -> usize {
        self.maps.iter().map(BlockMap::ncols).sum::<usize>() + self.m
    }

    fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.maps.len() + 1);
        let mut acc = 0;
        for a in &self.maps {
            out.push(acc);
            acc += a.ncols();
        }
        out.push(acc);
        out
    }

    /// Diagonal weight `cᵢ` and coupling `bᵢ` for zero-based block `i`.
    fn block_coefficients(&self, i: usize) -> (f64, f64) {
        let p = &self.params;
        if i == 0 {
            (p.sigma[0] + (p.epsilon * p.epsilon - 1.0) / p.s, p.epsilon)
        } else {
            (p.sigma[i] + (p.tau * p.tau - 1.0) / p.s, p.tau)
        }
    }

    pub fn assemble(&self) -> DMatrix<f64> {
        let order = self.order();
        let offsets = self.offsets();
        let lam = offsets[self.maps.len()];
        let mut g = DMatrix::zeros(order, order);
        for (i, a) in self.maps.iter().enumerate() {
            let (c, b) = self.block_coefficients(i);
            let ni = a.ncols();
            let off = offsets[i];
            g.view_mut((off, off), (ni, ni)).copy_from(&(a.gram() * c));
            let coupling = a.to_dense() * (-b);
            g.view_mut((lam, off), (self.m, ni)).copy_from(&coupling);
            g.view_mut((off, lam), (ni, self.m)).copy_from(&coupling.transpose());
        }
        for j in 0..self.m {
            g[(lam + j, lam + j)] = self.params.s;
        }
        g
    }

    /// Splits a stacked vector `(x₁, …, x_p, λ)` into per-block views.
    fn split(&self, w: &DVector<f64>) -> Result<(Vec<DVector<f64>>, DVector<f64>), MetricError> {
        if w.len() != self.order() {
            return Err(MetricError::Length { expected: self.order(), got: w.len() });
        }
        let offsets = self.offsets();
        let blocks = self
            .maps
            .iter()
            .enumerate()
            .map(|(i, a)| w.rows(offsets[i], a.ncols()).into_owned())
            .collect();
        let lam = w.rows(offsets[self.maps.len()], self.m).into_owned();
        Ok((blocks, lam))
    }

    /// `⟨w₁, G w₂⟩`, evaluated blockwise without forming `G`.
    pub fn inner(&self, w1: &DVector<f64>, w2: &DVector<f64>) -> Result<f64, MetricError> {
        let (x1, l1) = self.split(w1)?;
        let (x2, l2) = self.split(w2)?;
        let mut acc = self.params.s * l1.dot(&l2);
        for (i, a) in self.maps.iter().enumerate() {
            let (c, b) = self.block_coefficients(i);
            let ax1 = a.apply(&x1[i]);
            let ax2 = a.apply(&x2[i]);
            acc += c * ax1.dot(&ax2) - b * (ax1.dot(&l2) + l1.dot(&ax2));
        }
        Ok(acc)
    }

    pub fn norm_squared(&self, w: &DVector<f64>) -> Result<f64, MetricError> {
        self.inner(w, w)
    }

    pub fn norm(&self, w: &DVector<f64>) -> Result<f64, MetricError> {
        Ok(self.norm_squared(w)?.max(0.0).sqrt())
    }

    /// Smallest eigenvalue of `(G + Gᵀ)/2` and whether it is positive.
    pub fn verify_pd(&self) -> PdReport {
        let g = symmetrize(&self.assemble());
        let n = g.nrows();
        match nalgebra::SymmetricEigen::try_new(g, f64::EPSILON, 1000usize.max(100 * n)) {
            Some(eig) => {
                let min = eig.eigenvalues.min();
                if min > 0.0 {
                    PdReport::Definite { min_eigenvalue: min }
                } else {
                    PdReport::NotDefinite { min_eigenvalue: min }
                }
            }
            None => PdReport::Indeterminate,
        }
    }
}

/// Stacks block variables and a multiplier into a single vector.
pub fn stack(blocks: &[DVector<f64>], multiplier: &DVector<f64>) -> DVector<f64> {
    let len = blocks.iter().map(DVector::len).sum::<usize>() + multiplier.len();
    let mut out = DVector::zeros(len);
    let mut off = 0;
    for b in blocks.iter().chain(std::iter::once(multiplier)) {
        out.rows_mut(off, b.len()).copy_from(b);
        off += b.len();
    }
    out
}

fn identity_blocks(p: usize, m: usize, entry: impl Fn(usize, usize) -> f64) -> DMatrix<f64> {
    let size = (p + 1) * m;
    let mut out = DMatrix::zeros(size, size);
    for bi in 0..=p {
        for bj in 0..=p {
            let v = entry(bi, bj);
            if v != 0.0 {
                for k in 0..m {
                    out[(bi * m + k, bj * m + k)] = v;
                }
            }
        }
    }
    out
}

/// The core matrix `G₀` with `G = DᵀG₀D`, `D = Diag(A₁, …, A_p, I)`; every
/// block is a multiple of the `m × m` identity.
pub fn core_matrix(params: &SolverParams, m: usize) -> DMatrix<f64> {
    let p = params.p();
    let (s, tau, eps) = (params.s, params.tau, params.epsilon);
    identity_blocks(p, m, |bi, bj| match (bi, bj) {
        (0, 0) => params.sigma[0] + (eps * eps - 1.0) / s,
        (i, j) if i == j && i < p => params.sigma[i] + (tau * tau - 1.0) / s,
        (i, j) if i == p && j == p => s,
        (0, j) if j == p => -eps,
        (i, 0) if i == p => -eps,
        (i, j) if j == p && i < p => -tau,
        (i, j) if i == p && j < p => -tau,
        _ => 0.0,
    })
}

/// Unit upper-triangular `T` with last block column `(ε/s, τ/s, …, τ/s, 1)`.
pub fn congruence_transform(params: &SolverParams, m: usize) -> DMatrix<f64> {
    let p = params.p();
    identity_blocks(p, m, |bi, bj| {
        if bi == bj {
            1.0
        } else if bj == p && bi == 0 {
            params.epsilon / params.s
        } else if bj == p {
            params.tau / params.s
        } else {
            0.0
        }
    })
}

/// `T·G₀·Tᵀ` written out directly: an upper-left block with diagonal
/// `σᵢ − 1/s`, off-diagonals `−ετ/s` (against block 1) or `−τ²/s`, decoupled
/// from a lower-right `s·I`.
pub fn reduced_core_matrix(params: &SolverParams, m: usize) -> DMatrix<f64> {
    let p = params.p();
    let (s, tau, eps) = (params.s, params.tau, params.epsilon);
    identity_blocks(p, m, |bi, bj| {
        if bi == p || bj == p {
            if bi == bj {
                s
            } else {
                0.0
            }
        } else if bi == bj {
            params.sigma[bi] - 1.0 / s
        } else if bi == 0 || bj == 0 {
            -eps * tau / s
        } else {
            -tau * tau / s
        }
    })
}

/// `D = Diag(A₁, …, A_p, I_m)`.
pub fn block_diagonal_maps(maps: &[BlockMap], m: usize) -> DMatrix<f64> {
    let rows = maps.len() * m + m;
    let cols = maps.iter().map(BlockMap::ncols).sum::<usize>() + m;
    let mut d = DMatrix::zeros(rows, cols);
    let mut col = 0;
    for (i, a) in maps.iter().enumerate() {
        d.view_mut((i * m, col), (m, a.ncols())).copy_from(&a.to_dense());
        col += a.ncols();
    }
    d.view_mut((maps.len() * m, col), (m, m)).fill_with_identity();
    d
}

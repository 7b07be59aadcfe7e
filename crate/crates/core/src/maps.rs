//! Linear block maps `A_i` and small dense symmetric helpers.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Linear map from a block variable `x_i ∈ R^{n_i}` into the constraint space `R^m`.
#[derive(Debug, Clone, PartialEq)]
pub enum BlockMap {
    /// An explicit `m × n_i` matrix.
    Dense(DMatrix<f64>),
    /// `scale · I` of order `dim`.
    ScaledIdentity { dim: usize, scale: f64 },
}

impl BlockMap {
    pub fn identity(dim: usize) -> Self {
        BlockMap::ScaledIdentity { dim, scale: 1.0 }
    }

    pub fn negative_identity(dim: usize) -> Self {
        BlockMap::ScaledIdentity { dim, scale: -1.0 }
    }

    /// Constraint dimension `m`.
    pub fn nrows(&self) -> usize {
        match self {
            BlockMap::Dense(a) => a.nrows(),
            BlockMap::ScaledIdentity { dim, .. } => *dim,
        }
    }

    /// Block dimension `n_i`.
    pub fn ncols(&self) -> usize {
        match self {
            BlockMap::Dense(a) => a.ncols(),
            BlockMap::ScaledIdentity { dim, .. } => *dim,
        }
    }

    pub fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        match self {
            BlockMap::Dense(a) => a * x,
            BlockMap::ScaledIdentity { scale, .. } => x * *scale,
        }
    }

    pub fn apply_transpose(&self, y: &DVector<f64>) -> DVector<f64> {
        match self {
            BlockMap::Dense(a) => a.tr_mul(y),
            BlockMap::ScaledIdentity { scale, .. } => y * *scale,
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        match self {
            BlockMap::Dense(a) => a.clone(),
            BlockMap::ScaledIdentity { dim, scale } => DMatrix::identity(*dim, *dim) * *scale,
        }
    }

    /// `AᵀA` as a dense matrix.
    pub fn gram(&self) -> DMatrix<f64> {
        match self {
            BlockMap::Dense(a) => a.tr_mul(a),
            BlockMap::ScaledIdentity { dim, scale } => {
                DMatrix::identity(*dim, *dim) * (*scale * *scale)
            }
        }
    }

    pub fn has_full_column_rank(&self) -> bool {
        match self {
            BlockMap::Dense(a) => {
                if a.ncols() == 0 || a.ncols() > a.nrows() {
                    return false;
                }
                let svd = a.clone().svd(false, false);
                let smax = svd.singular_values.max();
                let tol = smax * (a.nrows().max(a.ncols()) as f64) * f64::EPSILON;
                smax > 0.0 && svd.rank(tol) == a.ncols()
            }
            BlockMap::ScaledIdentity { dim, scale } => *dim > 0 && *scale != 0.0,
        }
    }
}

/// `(M + Mᵀ)/2`.
pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Eigendecomposition of the symmetric part of `m`, or `None` if the QR
/// iteration does not converge.
pub fn sym_eigen(m: &DMatrix<f64>) -> Option<SymmetricEigen<f64, nalgebra::Dyn>> {
    let max_iters = 1000usize.max(100 * m.nrows());
    SymmetricEigen::try_new(symmetrize(m), f64::EPSILON, max_iters)
}

/// `V · Diag(f(ρ)) · Vᵀ` for an eigendecomposition `(V, ρ)`.
pub fn spectral_map(
    eig: &SymmetricEigen<f64, nalgebra::Dyn>,
    f: impl Fn(f64) -> f64,
) -> DMatrix<f64> {
    let v = &eig.eigenvectors;
    let mut scaled = v.clone();
    for (j, &rho) in eig.eigenvalues.iter().enumerate() {
        let g = f(rho);
        scaled.column_mut(j).scale_mut(g);
    }
    symmetrize(&(scaled * v.transpose()))
}

/// Reshape a column-major `n × n` matrix into a vector of length `n²`.
pub fn flatten(m: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_column_slice(m.as_slice())
}

/// Inverse of [`flatten`].
pub fn unflatten(v: &DVector<f64>, n: usize) -> DMatrix<f64> {
    assert_eq!(v.len(), n * n, "vector length is not n²");
    DMatrix::from_column_slice(n, n, v.as_slice())
}

//! Seeded synthetic instances: a sparse precision matrix, its covariance, and
//! a sample covariance drawn from it.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{LvggmsError, LvggmsInstance};

pub const DEFAULT_NU: f64 = 0.005;
pub const DEFAULT_MU: f64 = 0.05;

/// Samples drawn per dimension for the sample covariance.
const SAMPLES_PER_DIM: usize = 10;
/// Smallest eigenvalue enforced on the precision matrix.
const PRECISION_FLOOR: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GeneratorSpec {
    pub n: usize,
    pub density: f64,
    pub seed: u64,
    #[serde(default = "default_nu")]
    pub nu: f64,
    #[serde(default = "default_mu")]
    pub mu: f64,
}

fn default_nu() -> f64 {
    DEFAULT_NU
}

fn default_mu() -> f64 {
    DEFAULT_MU
}

impl GeneratorSpec {
    pub fn new(n: usize, density: f64, seed: u64) -> Self {
        Self { n, density, seed, nu: DEFAULT_NU, mu: DEFAULT_MU }
    }
}

/// Deterministic for a fixed spec. The precision matrix has unit diagonal and
/// off-diagonal `±1` entries at the given density, shifted until its smallest
/// eigenvalue is at least 0.1; `C` is the sample covariance of `10n` draws from
/// the corresponding zero-mean Gaussian.
pub fn generate(spec: &GeneratorSpec) -> Result<LvggmsInstance, LvggmsError> {
    let n = spec.n;
    if n < 2 {
        return Err(LvggmsError::Dimension(n));
    }
    if !(spec.density > 0.0 && spec.density < 1.0) {
        return Err(LvggmsError::Density(spec.density));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let mut precision = DMatrix::<f64>::identity(n, n);
    for j in 0..n {
        for i in 0..j {
            if rng.random::<f64>() < spec.density {
                let v = if rng.random::<bool>() { 1.0 } else { -1.0 };
                precision[(i, j)] = v;
                precision[(j, i)] = v;
            }
        }
    }
    let min_eig = SymmetricEigen::new(precision.clone()).eigenvalues.min();
    if min_eig < PRECISION_FLOOR {
        let shift = PRECISION_FLOOR - min_eig + 0.1 * min_eig.abs();
        for i in 0..n {
            precision[(i, i)] += shift;
        }
    }

    let covariance = precision
        .cholesky()
        .expect("shifted precision matrix is positive definite")
        .inverse();
    let factor = covariance
        .clone()
        .cholesky()
        .expect("inverse of a PD matrix is PD")
        .unpack();

    let samples = SAMPLES_PER_DIM * n;
    let draws = DMatrix::<f64>::from_fn(n, samples, |_, _| rng.sample(StandardNormal));
    let data = factor * draws;
    let sample_cov = (&data * data.transpose()) / samples as f64;

    let mut instance = LvggmsInstance::new(sample_cov, spec.nu, spec.mu)?;
    instance.seed = Some(spec.seed);
    Ok(instance)
}

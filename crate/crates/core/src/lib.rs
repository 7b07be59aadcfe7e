//! Relaxed parameterized proximal point solver for multi-block separable
//! convex programs
//!
//! ```text
//! min Σ fᵢ(xᵢ)   s.t.  Σ Aᵢxᵢ = b,  xᵢ ∈ 𝒳ᵢ,
//! ```
//!
//! together with the latent-variable Gaussian graphical model selection
//! problem as a worked three-block instance and an experiment driver.
//!
//! * [`params`]: parameter tuple and admissible region.
//! * [`gmetric`]: the proximal matrix `G`, its inner product and PD check.
//! * [`engine`]: the iteration over an abstract [`engine::BlockProblem`].
//! * [`lvggms`]: the graphical model instance, generator and closed-form
//!   subproblems.
//! * [`metrics`]: stopping residuals, traces, ergodic averages.
//! * [`cli`]: configuration files and the `generate`/`solve`/`sweep` commands.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod engine;
pub mod gmetric;
pub mod lvggms;
pub mod maps;
pub mod metrics;
pub mod params;

pub use engine::{BlockProblem, Engine, EngineError, IterState, ProxBlock, StepReport};
pub use gmetric::GMetric;
pub use lvggms::LvggmsInstance;
pub use metrics::{ConvergenceTrace, StoppingRule};
pub use params::SolverParams;

//! The relaxed parameterized proximal point iteration for
//!
//! ```text
//! min Σ fᵢ(xᵢ)   s.t.  Σ Aᵢxᵢ = b,  xᵢ ∈ 𝒳ᵢ.
//! ```
//!
//! The multiplier carried between iterations is the shifted multiplier
//! `λ̄ = λ − ((τ+ε)/s)·r` with `r = Σ Aᵢxᵢ − b`. One iteration solves the
//! first block against `λ̄ᵏ`, forms the half-step multiplier, solves blocks
//! `2..p` independently against it, assembles the predictor `λ̃ᵏ` and then
//! relaxes every component by `γ`.

use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use thiserror::Error;

use crate::maps::BlockMap;
use crate::metrics::{
    self, ConvergenceTrace, IterationRecord, MetricsError, SolveStatus, StopDecision,
    StoppingRule,
};
use crate::params::{ParamError, SolverParams};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BlockError {
    #[error("eigendecomposition did not converge")]
    EigenFailure,
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("linear solve failed: {0}")]
    Linear(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("block {index} subproblem failed: {source}")]
    Block { index: usize, source: BlockError },
}

/// One block of a separable problem.
///
/// `prox` returns a minimiser of
/// `fᵢ(x) + (σ̄/2)·‖Aᵢ(x − center) − (τ/σ̄)·multiplier‖²` over `𝒳ᵢ`.
pub trait ProxBlock: Send + Sync {
    fn map(&self) -> &BlockMap;

    fn prox(
        &self,
        center: &DVector<f64>,
        multiplier: &DVector<f64>,
        weight: f64,
        tau: f64,
    ) -> Result<DVector<f64>, BlockError>;

    fn objective(&self, x: &DVector<f64>) -> Result<f64, BlockError>;

    fn dim(&self) -> usize {
        self.map().ncols()
    }
}

pub struct BlockProblem {
    blocks: Vec<Box<dyn ProxBlock>>,
    rhs: DVector<f64>,
}

impl std::fmt::Debug for BlockProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BlockProblem")
            .field("p", &self.blocks.len())
            .field("dims", &self.blocks.iter().map(|b| b.dim()).collect::<Vec<_>>())
            .field("m", &self.rhs.len())
            .finish()
    }
}

impl BlockProblem {
    pub fn new(blocks: Vec<Box<dyn ProxBlock>>, rhs: DVector<f64>) -> Result<Self, EngineError> {
        if blocks.len() < 2 {
            return Err(EngineError::Dimension(format!(
                "need at least two blocks, got {}",
                blocks.len()
            )));
        }
        for (i, b) in blocks.iter().enumerate() {
            if b.map().nrows() != rhs.len() {
                return Err(EngineError::Dimension(format!(
                    "block {i} maps into R^{}, right-hand side has length {}",
                    b.map().nrows(),
                    rhs.len()
                )));
            }
        }
        Ok(Self { blocks, rhs })
    }

    pub fn p(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Box<dyn ProxBlock>] {
        &self.blocks
    }

    pub fn rhs(&self) -> &DVector<f64> {
        &self.rhs
    }

    pub fn maps(&self) -> Vec<BlockMap> {
        self.blocks.iter().map(|b| b.map().clone()).collect()
    }

    /// `Σ Aᵢxᵢ − b`, accumulated in block order.
    pub fn residual(&self, x: &[DVector<f64>]) -> DVector<f64> {
        let mut r = -&self.rhs;
        for (b, xi) in self.blocks.iter().zip(x) {
            r += b.map().apply(xi);
        }
        r
    }

    /// `φ(u) = Σ fᵢ(xᵢ)`.
    pub fn objective(&self, x: &[DVector<f64>]) -> Result<f64, EngineError> {
        let mut total = 0.0;
        for (i, (b, xi)) in self.blocks.iter().zip(x).enumerate() {
            total += b.objective(xi).map_err(|source| EngineError::Block { index: i, source })?;
        }
        Ok(total)
    }
}

/// Iterate `wᵏ = (x₁ᵏ, …, x_pᵏ, λ̄ᵏ)` with its cached residual.
#[derive(Debug, Clone, PartialEq)]
pub struct IterState {
    pub x: Vec<DVector<f64>>,
    pub lambda_bar: DVector<f64>,
    pub residual: DVector<f64>,
    pub k: usize,
}

/// Intermediate quantities of one iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct StepReport {
    pub tilde_x: Vec<DVector<f64>>,
    /// Predictor for the shifted multiplier.
    pub tilde_lambda: DVector<f64>,
    pub lambda_half: DVector<f64>,
    pub deltas: Vec<DVector<f64>>,
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub state: IterState,
    pub trace: ConvergenceTrace,
}

impl SolveOutcome {
    pub fn status(&self) -> SolveStatus {
        self.trace.status.unwrap_or(SolveStatus::MaxIterations)
    }

    pub fn converged(&self) -> bool {
        self.status() == SolveStatus::Converged
    }
}

/// Runs the iteration for one problem and one parameter tuple.
#[derive(Debug)]
pub struct Engine<'a> {
    problem: &'a BlockProblem,
    params: &'a SolverParams,
    sigma_bar: Vec<f64>,
    parallel: bool,
}

impl<'a> Engine<'a> {
    pub fn new(problem: &'a BlockProblem, params: &'a SolverParams) -> Result<Self, EngineError> {
        params.check()?;
        if params.p() != problem.p() {
            return Err(EngineError::Dimension(format!(
                "parameters describe {} blocks, problem has {}",
                params.p(),
                problem.p()
            )));
        }
        let sigma_bar = params.sigma_bars();
        assert!(sigma_bar.iter().all(|&v| v > 0.0), "σ̄ must be positive inside the region");
        Ok(Self { problem, params, sigma_bar, parallel: false })
    }

    /// Solve blocks `2..p` on the rayon pool.
    pub fn with_parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }

    pub fn problem(&self) -> &BlockProblem {
        self.problem
    }

    pub fn params(&self) -> &SolverParams {
        self.params
    }

    /// `(τ+ε)/s`, the shift between `λ` and `λ̄`.
    fn shift(&self) -> f64 {
        (self.params.tau + self.params.epsilon) / self.params.s
    }

    fn check_blocks(&self, x: &[DVector<f64>]) -> Result<(), EngineError> {
        if x.len() != self.problem.p() {
            return Err(EngineError::Dimension(format!(
                "expected {} blocks, got {}",
                self.problem.p(),
                x.len()
            )));
        }
        for (i, (b, xi)) in self.problem.blocks.iter().zip(x).enumerate() {
            if xi.len() != b.dim() {
                return Err(EngineError::Dimension(format!(
                    "block {i} has length {}, expected {}",
                    xi.len(),
                    b.dim()
                )));
            }
        }
        Ok(())
    }

    pub fn init(&self, x0: Vec<DVector<f64>>, lambda0: DVector<f64>) -> Result<IterState, EngineError> {
        self.check_blocks(&x0)?;
        if lambda0.len() != self.problem.rhs.len() {
            return Err(EngineError::Dimension(format!(
                "multiplier has length {}, expected {}",
                lambda0.len(),
                self.problem.rhs.len()
            )));
        }
        let residual = self.problem.residual(&x0);
        let lambda_bar = lambda0 - &residual * self.shift();
        Ok(IterState { x: x0, lambda_bar, residual, k: 0 })
    }

    /// `λᵏ = λ̄ᵏ + ((τ+ε)/s)·rᵏ`.
    pub fn recover_lambda(&self, state: &IterState) -> DVector<f64> {
        &state.lambda_bar + &state.residual * self.shift()
    }

    fn prox(&self, i: usize, center: &DVector<f64>, multiplier: &DVector<f64>) -> Result<DVector<f64>, EngineError> {
        self.problem.blocks[i]
            .prox(center, multiplier, self.sigma_bar[i], self.params.tau)
            .map_err(|source| EngineError::Block { index: i, source })
    }

    pub fn step(&self, state: &IterState) -> Result<(StepReport, IterState), EngineError> {
        let SolverParams { s, tau, epsilon, gamma, .. } = *self.params;
        let blocks = &self.problem.blocks;
        let r = &state.residual;

        let x1 = self.prox(0, &state.x[0], &state.lambda_bar)?;
        let delta1 = &x1 - &state.x[0];
        let a1_delta1 = blocks[0].map().apply(&delta1);

        let lambda_half = &state.lambda_bar - (&a1_delta1 * 2.0 + r) * ((tau - epsilon) / s);

        let rest: Vec<DVector<f64>> = if self.parallel {
            (1..blocks.len())
                .into_par_iter()
                .map(|i| self.prox(i, &state.x[i], &lambda_half))
                .collect::<Result<_, _>>()?
        } else {
            (1..blocks.len())
                .map(|i| self.prox(i, &state.x[i], &lambda_half))
                .collect::<Result<_, _>>()?
        };

        let mut tilde_x = Vec::with_capacity(blocks.len());
        tilde_x.push(x1);
        tilde_x.extend(rest);
        let deltas: Vec<DVector<f64>> =
            tilde_x.iter().zip(&state.x).map(|(t, x)| t - x).collect();

        // Fixed block order keeps the reduction deterministic.
        let mut sum_a_delta = a1_delta1.clone();
        for (b, d) in blocks.iter().zip(&deltas).skip(1) {
            sum_a_delta += b.map().apply(d);
        }

        let tilde_lambda = &state.lambda_bar
            - &sum_a_delta * ((tau + epsilon) / s)
            - (&a1_delta1 * (tau - epsilon) + r * tau) / s;

        let x: Vec<DVector<f64>> =
            state.x.iter().zip(&deltas).map(|(x, d)| x + d * gamma).collect();
        let lambda_bar = &state.lambda_bar + (&tilde_lambda - &state.lambda_bar) * gamma;
        let residual = self.problem.residual(&x);

        let report = StepReport { tilde_x, tilde_lambda, lambda_half, deltas };
        Ok((report, IterState { x, lambda_bar, residual, k: state.k + 1 }))
    }

    /// Iterates until `rule` fires. Running out of iterations is reported in
    /// the trace status, not as an error. `observer` sees every record as it
    /// is produced.
    pub fn solve(
        &self,
        x0: Vec<DVector<f64>>,
        lambda0: DVector<f64>,
        rule: &StoppingRule,
        mut observer: impl FnMut(&IterationRecord),
    ) -> Result<SolveOutcome, EngineError> {
        rule.check()?;
        let mut state = self.init(x0, lambda0)?;
        let mut trace = ConvergenceTrace::new(self.params.clone());
        let mut elapsed = 0.0;
        if rule.max_iters == 0 {
            trace.status = Some(SolveStatus::MaxIterations);
            return Ok(SolveOutcome { state, trace });
        }
        loop {
            let started = Instant::now();
            let (_, next) = self.step(&state)?;
            elapsed += started.elapsed().as_secs_f64();

            // A relaxed iterate may leave the objective's domain; that only
            // makes OER unavailable for this iteration.
            let objective = self.problem.objective(&next.x).unwrap_or(f64::NAN);
            let record = IterationRecord {
                k: next.k,
                ier: metrics::ier(&state.x, &next.x),
                oer: rule.oer(objective),
                cer: metrics::cer(&next.residual, &next.x),
                objective,
                elapsed_s: elapsed,
            };
            observer(&record);
            trace.push(record);
            state = next;
            match rule.should_stop(&record) {
                StopDecision::Continue => {}
                StopDecision::Converged => {
                    trace.status = Some(SolveStatus::Converged);
                    break;
                }
                StopDecision::MaxIterations => {
                    trace.status = Some(SolveStatus::MaxIterations);
                    break;
                }
            }
        }
        Ok(SolveOutcome { state, trace })
    }
}

/// Unconstrained quadratic block `f(x) = ½xᵀQx + qᵀx` with `Q` positive
/// semidefinite.
#[derive(Debug, Clone)]
pub struct QuadraticBlock {
    pub hessian: DMatrix<f64>,
    pub linear: DVector<f64>,
    map: BlockMap,
}

impl QuadraticBlock {
    pub fn new(hessian: DMatrix<f64>, linear: DVector<f64>, map: BlockMap) -> Self {
        assert_eq!(hessian.nrows(), map.ncols());
        assert_eq!(linear.len(), map.ncols());
        Self { hessian, linear, map }
    }
}

impl ProxBlock for QuadraticBlock {
    fn map(&self) -> &BlockMap {
        &self.map
    }

    fn prox(
        &self,
        center: &DVector<f64>,
        multiplier: &DVector<f64>,
        weight: f64,
        tau: f64,
    ) -> Result<DVector<f64>, BlockError> {
        // (Q + σ̄AᵀA)x = −q + σ̄AᵀA·center + τAᵀλ
        let gram = self.map.gram();
        let lhs = &self.hessian + &gram * weight;
        let rhs = -&self.linear + &gram * center * weight + self.map.apply_transpose(multiplier) * tau;
        let chol = lhs
            .cholesky()
            .ok_or_else(|| BlockError::Linear("Q + σ̄AᵀA is not positive definite".into()))?;
        Ok(chol.solve(&rhs))
    }

    fn objective(&self, x: &DVector<f64>) -> Result<f64, BlockError> {
        Ok(0.5 * x.dot(&(&self.hessian * x)) + self.linear.dot(x))
    }
}

//! Stopping residuals, ergodic averaging and convergence traces.
//!
//! The three residuals follow the usual relative definitions:
//!
//! * IER: `maxᵢ ‖xᵢᵏ − xᵢᵏ⁻¹‖ / ‖xᵢᵏ‖`
//! * OER: `|Fᵏ − F*| / |F*|`
//! * CER: `‖Σ Aᵢxᵢᵏ − b‖ / max{1, ‖x₁ᵏ‖, …, ‖x_pᵏ‖}`
//!
//! For the three-block graphical model (`A = (I, −I, I)`, `b = 0`) the CER
//! numerator is exactly `‖X − S + L‖_F`.

use std::io::{self, Write};

use nalgebra::DVector;
use thiserror::Error;

use crate::gmetric::{GMetric, MetricError};
use crate::params::SolverParams;

/// Floor for the IER denominators; a block can legitimately be zero (e.g. a
/// fully shrunk sparse component).
pub const NORM_FLOOR: f64 = 1e-300;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("ergodic average requested before any iterate was pushed")]
    EmptyAverager,
    #[error("iterate shape mismatch: {0}")]
    Shape(String),
    #[error("tolerance {name} must be positive, got {value}")]
    Tolerance { name: &'static str, value: f64 },
}

fn guard(z: f64) -> f64 {
    z.max(NORM_FLOOR)
}

/// Relative iterate change, maximised over blocks.
///
/// Each denominator is clamped below at `√ε_mach` times the largest block
/// norm. Without this a block whose solution is zero never passes: under
/// over-relaxation it decays like `(1−γ)ᵏ` and its relative change stays at
/// `γ/|1−γ|` forever.
pub fn ier(previous: &[DVector<f64>], current: &[DVector<f64>]) -> f64 {
    assert_eq!(previous.len(), current.len(), "block count mismatch");
    let scale = current.iter().map(|c| c.norm()).fold(0.0, f64::max) * f64::EPSILON.sqrt();
    previous
        .iter()
        .zip(current)
        .map(|(prev, cur)| (cur - prev).norm() / guard(cur.norm().max(scale)))
        .fold(0.0, f64::max)
}

/// Relative objective error. When the reference is exactly zero the absolute
/// gap is returned instead.
pub fn oer(objective: f64, reference: f64) -> f64 {
    let gap = (objective - reference).abs();
    if reference == 0.0 {
        gap
    } else {
        gap / reference.abs()
    }
}

/// Constraint violation relative to the largest block norm (at least one).
pub fn cer(residual: &DVector<f64>, blocks: &[DVector<f64>]) -> f64 {
    let denom = blocks.iter().map(|b| b.norm()).fold(1.0, f64::max);
    residual.norm() / denom
}

#[derive(Debug, Clone, PartialEq)]
pub struct StoppingRule {
    pub tol_iterate: f64,
    pub tol_objective: f64,
    pub tol_constraint: f64,
    pub max_iters: usize,
    /// `F*`; OER is unavailable (and never satisfied) until this is set.
    pub reference_objective: Option<f64>,
}

impl StoppingRule {
    pub fn new(tol_iterate: f64, tol_objective: f64, tol_constraint: f64, max_iters: usize) -> Self {
        Self { tol_iterate, tol_objective, tol_constraint, max_iters, reference_objective: None }
    }

    pub fn uniform(tol: f64, max_iters: usize) -> Self {
        Self::new(tol, tol, tol, max_iters)
    }

    pub fn with_reference(mut self, reference: f64) -> Self {
        self.reference_objective = Some(reference);
        self
    }

    /// Runs for exactly `iters` iterations.
    pub fn fixed_iterations(iters: usize) -> Self {
        Self::new(f64::MIN_POSITIVE, f64::MIN_POSITIVE, f64::MIN_POSITIVE, iters)
    }

    pub fn check(&self) -> Result<(), MetricsError> {
        for (name, value) in [
            ("tol1", self.tol_iterate),
            ("tol2", self.tol_objective),
            ("tol3", self.tol_constraint),
        ] {
            if !(value > 0.0) {
                return Err(MetricsError::Tolerance { name, value });
            }
        }
        Ok(())
    }

    pub fn oer(&self, objective: f64) -> f64 {
        match self.reference_objective {
            Some(reference) => oer(objective, reference),
            None => f64::NAN,
        }
    }

    /// All three criteria must hold simultaneously; NaN never satisfies a
    /// tolerance.
    pub fn criteria_met(&self, record: &IterationRecord) -> bool {
        record.ier <= self.tol_iterate
            && record.oer <= self.tol_objective
            && record.cer <= self.tol_constraint
    }

    pub fn should_stop(&self, record: &IterationRecord) -> StopDecision {
        if self.criteria_met(record) {
            StopDecision::Converged
        } else if record.k >= self.max_iters {
            StopDecision::MaxIterations
        } else {
            StopDecision::Continue
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopDecision {
    Continue,
    Converged,
    MaxIterations,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Converged,
    MaxIterations,
}

/// One row of a convergence trace. `k` counts completed iterations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub k: usize,
    pub ier: f64,
    pub oer: f64,
    pub cer: f64,
    pub objective: f64,
    /// Cumulative wall-clock seconds spent inside the step calls.
    pub elapsed_s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTrace {
    pub records: Vec<IterationRecord>,
    pub status: Option<SolveStatus>,
    pub params: SolverParams,
}

pub const TRACE_HEADER: &str = "k,ier,oer,cer,objective,elapsed_s";

fn fmt_sci(v: f64) -> String {
    if v.is_nan() {
        "NA".to_string()
    } else {
        format!("{v:.12e}")
    }
}

impl ConvergenceTrace {
    pub fn new(params: SolverParams) -> Self {
        Self { records: Vec::new(), status: None, params }
    }

    pub fn push(&mut self, record: IterationRecord) {
        self.records.push(record);
    }

    pub fn iterations(&self) -> usize {
        self.records.len()
    }

    pub fn last(&self) -> Option<&IterationRecord> {
        self.records.last()
    }

    /// Re-evaluates OER for every record against a new reference objective.
    pub fn rebase_oer(&mut self, reference: f64) {
        for r in &mut self.records {
            r.oer = oer(r.objective, reference);
        }
    }

    /// Writes `k,ier,oer,cer,objective,elapsed_s`, one row per iteration.
    /// Residuals and objective use 13 significant digits; unavailable values
    /// are written as `NA`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{TRACE_HEADER}")?;
        for r in &self.records {
            writeln!(
                out,
                "{},{},{},{},{},{:.6}",
                r.k,
                fmt_sci(r.ier),
                fmt_sci(r.oer),
                fmt_sci(r.cer),
                fmt_sci(r.objective),
                r.elapsed_s
            )?;
        }
        Ok(())
    }
}

/// Running arithmetic mean of the predictor iterates `x̃ᵏ`.
#[derive(Debug, Clone, Default)]
pub struct ErgodicAverager {
    sums: Vec<DVector<f64>>,
    count: usize,
}

impl ErgodicAverager {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn push(&mut self, blocks: &[DVector<f64>]) -> Result<(), MetricsError> {
        if self.count == 0 {
            self.sums = blocks.to_vec();
        } else {
            if blocks.len() != self.sums.len() {
                return Err(MetricsError::Shape(format!(
                    "expected {} blocks, got {}",
                    self.sums.len(),
                    blocks.len()
                )));
            }
            for (i, (sum, b)) in self.sums.iter_mut().zip(blocks).enumerate() {
                if sum.len() != b.len() {
                    return Err(MetricsError::Shape(format!(
                        "block {i}: expected length {}, got {}",
                        sum.len(),
                        b.len()
                    )));
                }
                *sum += b;
            }
        }
        self.count += 1;
        Ok(())
    }

    pub fn average(&self) -> Result<Vec<DVector<f64>>, MetricsError> {
        if self.count == 0 {
            return Err(MetricsError::EmptyAverager);
        }
        let c = self.count as f64;
        Ok(self.sums.iter().map(|s| s / c).collect())
    }
}

/// Terms of the contraction inequality
/// `‖wᵏ⁺¹−w*‖²_G ≤ ‖wᵏ−w*‖²_G − ((2−γ)/γ)‖wᵏ−wᵏ⁺¹‖²_G`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractionCheck {
    pub dist_before: f64,
    pub dist_after: f64,
    pub step: f64,
    /// `rhs − lhs`; nonnegative when the inequality holds.
    pub margin: f64,
}

impl ContractionCheck {
    pub fn holds(&self, slack: f64) -> bool {
        self.margin >= -slack
    }
}

/// All vectors are stacked `(x₁, …, x_p, λ)`.
pub fn contraction_check(
    metric: &GMetric,
    current: &DVector<f64>,
    next: &DVector<f64>,
    reference: &DVector<f64>,
    gamma: f64,
) -> Result<ContractionCheck, MetricError> {
    let dist_before = metric.norm_squared(&(current - reference))?;
    let dist_after = metric.norm_squared(&(next - reference))?;
    let step = metric.norm_squared(&(current - next))?;
    let rhs = dist_before - (2.0 - gamma) / gamma * step;
    Ok(ContractionCheck { dist_before, dist_after, step, margin: rhs - dist_after })
}

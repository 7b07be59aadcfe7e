//! Solver parameters and the admissible parameter region.
//!
//! The proximal matrix is positive definite whenever
//!
//! ```text
//! s > 0,
//! σ₁ > (1 + (p−1)·τ·|ε|) / s,
//! σᵢ > (1 + (p−2)·τ² + τ·|ε|) / s      for i = 2..p,
//! ```
//!
//! with `τ > 0` and `ε` unrestricted. The relaxation factor `γ` must lie in
//! `(0, 2)`. All inequalities are strict and checked without slack.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// `(√5 − 1)/2`, the default for both `τ` and `ε`.
pub const GOLDEN_SECTION: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParamError {
    #[error("block index {index} out of range for p = {p}")]
    BlockIndex { index: usize, p: usize },
    #[error("parameters outside the admissible region: {0}")]
    Invalid(Violations),
}

/// Parameter tuple `(σ₁..σ_p, s, τ, ε, γ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverParams {
    pub sigma: Vec<f64>,
    pub s: f64,
    pub tau: f64,
    pub epsilon: f64,
    pub gamma: f64,
}

/// One violated constraint, carrying the offending value and the bound it
/// failed to exceed (or the interval it fell outside of).
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    TooFewBlocks { p: usize },
    NonPositiveS { s: f64 },
    NonPositiveTau { tau: f64 },
    GammaOutOfRange { gamma: f64 },
    NonFinite { name: &'static str },
    /// `block` is zero-based; block 0 is `σ₁`.
    SigmaBelowBound { block: usize, sigma: f64, bound: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TooFewBlocks { p } => write!(f, "p ≥ 2 (got p = {p})"),
            Violation::NonPositiveS { s } => write!(f, "s > 0 (got s = {s})"),
            Violation::NonPositiveTau { tau } => write!(f, "τ > 0 (got τ = {tau})"),
            Violation::GammaOutOfRange { gamma } => write!(f, "0 < γ < 2 (got γ = {gamma})"),
            Violation::NonFinite { name } => write!(f, "{name} must be finite"),
            Violation::SigmaBelowBound { block, sigma, bound } => write!(
                f,
                "σ{} ≤ {:.6} (got σ{} = {}, needs σ{} > {})",
                subscript(block + 1),
                bound,
                subscript(block + 1),
                sigma,
                subscript(block + 1),
                bound
            ),
        }
    }
}

fn subscript(i: usize) -> String {
    const DIGITS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    i.to_string()
        .chars()
        .map(|c| DIGITS[c.to_digit(10).unwrap() as usize])
        .collect()
}

/// A non-empty list of violations.
#[derive(Debug, Clone, PartialEq)]
pub struct Violations(pub Vec<Violation>);

impl fmt::Display for Violations {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Validation {
    Ok,
    Violated(Violations),
}

impl Validation {
    pub fn is_ok(&self) -> bool {
        matches!(self, Validation::Ok)
    }

    pub fn violations(&self) -> &[Violation] {
        match self {
            Validation::Ok => &[],
            Validation::Violated(v) => &v.0,
        }
    }
}

impl SolverParams {
    pub fn new(sigma: Vec<f64>, s: f64, tau: f64, epsilon: f64, gamma: f64) -> Self {
        Self { sigma, s, tau, epsilon, gamma }
    }

    /// The tuned three-block setting `σ = (0.178, 0.178, 0.178)`, `s = 10`,
    /// `τ = ε = (√5−1)/2`, `γ = 1.8`.
    pub fn tuned_three_block() -> Self {
        Self::new(vec![0.178; 3], 10.0, GOLDEN_SECTION, GOLDEN_SECTION, 1.8)
    }

    pub fn p(&self) -> usize {
        self.sigma.len()
    }

    /// Lower bound on `σ₁`: `(1 + (p−1)·τ·|ε|)/s`.
    pub fn sigma1_bound(&self) -> f64 {
        let p = self.p() as f64;
        (1.0 + (p - 1.0) * self.tau * self.epsilon.abs()) / self.s
    }

    /// Lower bound on `σᵢ`, `i ≥ 2`: `(1 + (p−2)·τ² + τ·|ε|)/s`.
    pub fn sigma_rest_bound(&self) -> f64 {
        let p = self.p() as f64;
        (1.0 + (p - 2.0) * self.tau * self.tau + self.tau * self.epsilon.abs()) / self.s
    }

    /// Bound for zero-based block `i`.
    pub fn sigma_bound(&self, i: usize) -> f64 {
        if i == 0 {
            self.sigma1_bound()
        } else {
            self.sigma_rest_bound()
        }
    }

    pub fn validate(&self) -> Validation {
        let mut out = Vec::new();
        if self.p() < 2 {
            out.push(Violation::TooFewBlocks { p: self.p() });
        }
        let named = [("s", self.s), ("τ", self.tau), ("ε", self.epsilon), ("γ", self.gamma)];
        let mut finite = true;
        for (name, v) in named {
            if !v.is_finite() {
                out.push(Violation::NonFinite { name });
                finite = false;
            }
        }
        if self.sigma.iter().any(|v| !v.is_finite()) {
            out.push(Violation::NonFinite { name: "σ" });
            finite = false;
        }
        if self.s.is_finite() && self.s <= 0.0 {
            out.push(Violation::NonPositiveS { s: self.s });
        }
        if self.tau.is_finite() && self.tau <= 0.0 {
            out.push(Violation::NonPositiveTau { tau: self.tau });
        }
        if self.gamma.is_finite() && !(self.gamma > 0.0 && self.gamma < 2.0) {
            out.push(Violation::GammaOutOfRange { gamma: self.gamma });
        }
        // The σ bounds are only meaningful once s and τ are admissible.
        if finite && self.s > 0.0 && self.tau > 0.0 {
            for (i, &sigma) in self.sigma.iter().enumerate() {
                let bound = self.sigma_bound(i);
                if !(sigma > bound) {
                    out.push(Violation::SigmaBelowBound { block: i, sigma, bound });
                }
            }
        }
        if out.is_empty() {
            Validation::Ok
        } else {
            Validation::Violated(Violations(out))
        }
    }

    /// Validate, turning violations into an error.
    pub fn check(&self) -> Result<(), ParamError> {
        match self.validate() {
            Validation::Ok => Ok(()),
            Validation::Violated(v) => Err(ParamError::Invalid(v)),
        }
    }

    /// `σ̄ᵢ = σᵢ + (τ² − 1)/s` for zero-based block `i`.
    pub fn sigma_bar(&self, i: usize) -> Result<f64, ParamError> {
        let sigma = self
            .sigma
            .get(i)
            .ok_or(ParamError::BlockIndex { index: i, p: self.p() })?;
        Ok(sigma + (self.tau * self.tau - 1.0) / self.s)
    }

    /// All `σ̄ᵢ` in block order.
    pub fn sigma_bars(&self) -> Vec<f64> {
        let shift = (self.tau * self.tau - 1.0) / self.s;
        self.sigma.iter().map(|s| s + shift).collect()
    }
}

//! Bisection on the Lyapunov exponent.
//!
//! Each step tests a shift `c`: with `ε' = ε/6` the family
//! `𝒜' = 𝒜 - (c + ε')I` is discretized as `I + τ𝒜'` for a step `τ` certified for
//! `𝒜'` at accuracy `ε'`, and the joint spectral radius is decided at `δ = τε'`.
//! `ρ > 1` gives `σ(𝒜) ≥ c`; `ρ < 1 + δ` gives `σ(𝒜) < c + ε/3`.

use crate::error::{Error, Result};
use crate::jsr::{jsr_decide, JsrDecision, JsrOptions, Verdict};
use crate::linalg::{eigenvalues, operator_norm, MatrixSet, NormKind};
use crate::stepsize::{family_step_bound, StepBound, StepMethod, StepOptions};

#[derive(Clone, Debug)]
pub struct BisectOptions {
    pub step: StepOptions,
    pub method: StepMethod,
    pub jsr: JsrOptions,
    /// Test this shift first instead of the midpoint.
    pub first_shift: Option<f64>,
    pub max_steps: usize,
}

impl Default for BisectOptions {
    fn default() -> Self {
        Self {
            step: StepOptions::default(),
            method: StepMethod::Prob3Exact,
            jsr: JsrOptions::default(),
            first_shift: None,
            max_steps: 200,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stability {
    Stable,
    Unstable,
    NearMargin,
}

impl Stability {
    pub fn name(self) -> &'static str {
        match self {
            Stability::Stable => "stable",
            Stability::Unstable => "unstable",
            Stability::NearMargin => "near_margin",
        }
    }
}

#[derive(Clone, Debug)]
pub struct BisectionStep {
    pub c: f64,
    pub step: StepBound,
    pub delta: f64,
    pub decision: JsrDecision,
    pub bracket: (f64, f64),
}

#[derive(Clone, Debug)]
pub struct LyapunovEstimate {
    pub sigma_star: f64,
    pub bracket: (f64, f64),
    pub epsilon: f64,
    /// Accuracy of a single shift test, `ε/3`.
    pub decision_accuracy: f64,
    pub initial: (f64, f64),
    pub iterations: Vec<BisectionStep>,
    pub verdict: Stability,
}

/// Largest spectral abscissa and largest 2-norm over the family.
pub fn initial_bounds(set: &MatrixSet) -> Result<(f64, f64)> {
    let mut a0 = f64::NEG_INFINITY;
    let mut b0: f64 = 0.0;
    for m in set.matrices() {
        a0 = a0.max(eigenvalues(m, 1e-8)?.spectral_abscissa);
        b0 = b0.max(operator_norm(m, NormKind::Two));
    }
    Ok((a0, b0.max(a0)))
}

/// One shift test; the step records the outcome in `decision.verdict`.
pub fn single_shift_test(
    set: &MatrixSet,
    c: f64,
    eps: f64,
    opts: &BisectOptions,
) -> Result<(StepBound, JsrDecision)> {
    if !(eps > 0.0) {
        return Err(Error::Domain("epsilon must be positive".into()));
    }
    let e6 = eps / 6.0;
    let step = match family_step_bound(set, c + e6, e6, opts.method, &opts.step) {
        // Some shifted abscissa is at least -ε', so every step is admissible;
        // the closed form keeps τ on the scale of the family.
        Err(Error::ShiftTooSmall { .. }) => {
            match family_step_bound(set, c + e6, e6, StepMethod::Theorem10, &opts.step) {
                Ok(s) => s,
                Err(_) => {
                    let n = set
                        .matrices()
                        .iter()
                        .map(|m| operator_norm(&m.shift(-(c + e6)), NormKind::Two))
                        .fold(0.0, f64::max);
                    StepBound {
                        tau: if n > 0.0 { 1.0 / n } else { 1.0 },
                        method: StepMethod::Theorem10,
                        epsilon: e6,
                        witness: None,
                    }
                }
            }
        }
        other => other?,
    };
    let tau = step.tau;
    let delta = tau * e6;
    let disc = set.map(|m| m.shift(-(c + e6)).euler(tau));
    let decision = jsr_decide(&disc, delta, &opts.jsr)?;
    Ok((step, decision))
}

fn check_real(set: &MatrixSet, tol: f64) -> Result<()> {
    for m in set.matrices() {
        eigenvalues(m, tol)?.real_eigenvalues()?;
    }
    Ok(())
}

pub fn lyapunov_bisect(
    set: &MatrixSet,
    eps: f64,
    opts: &BisectOptions,
) -> Result<LyapunovEstimate> {
    if !(eps > 0.0) {
        return Err(Error::Domain("epsilon must be positive".into()));
    }
    check_real(set, opts.step.eigen_tol)?;
    let (a0, b0) = initial_bounds(set)?;
    let (mut a, mut b) = (a0, b0);
    let mut trace = Vec::new();
    let mut forced = opts.first_shift;

    while forced.is_some() || b - a > 2.0 * eps {
        if trace.len() >= opts.max_steps {
            break;
        }
        let c = forced.take().unwrap_or(0.5 * (a + b));
        let (step, decision) = match single_shift_test(set, c, eps, opts) {
            Ok(r) => r,
            Err(Error::JsrInconclusive { lower, upper, .. }) => {
                let tau = family_step_bound(set, c + eps / 6.0, eps / 6.0, opts.method, &opts.step)
                    .map(|s| s.tau)
                    .unwrap_or(f64::NAN);
                return Err(Error::BisectionInconclusive {
                    a,
                    b,
                    c,
                    tau,
                    lower,
                    upper,
                });
            }
            Err(e) => return Err(e),
        };
        match decision.verdict {
            Verdict::CertifiedAbove => a = a.max(c),
            Verdict::CertifiedBelow => b = b.min(c + eps / 3.0),
        }
        let delta = decision.delta;
        trace.push(BisectionStep {
            c,
            step,
            delta,
            decision,
            bracket: (a, b),
        });
    }

    let verdict = if b < 0.0 {
        Stability::Stable
    } else if a > 0.0 {
        Stability::Unstable
    } else {
        Stability::NearMargin
    };
    Ok(LyapunovEstimate {
        sigma_star: 0.5 * (a + b),
        bracket: (a, b),
        epsilon: eps,
        decision_accuracy: eps / 3.0,
        initial: (a0, b0),
        iterations: trace,
        verdict,
    })
}

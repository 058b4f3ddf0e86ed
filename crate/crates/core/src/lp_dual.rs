//! Closed-form LP dual of the entropy-regularized program.
//!
//! For `ε > 0` the Lagrangian infimum over `x ≥ 0` is attained at
//! `x*(λ)_i = exp((Aᵀλ − c)_i/ε − 1)`, which yields
//!
//! ```text
//! G_ε(λ) = bᵀλ − ε Σ_i x*_i(λ),      ∇G_ε(λ) = b − A x*(λ).
//! ```
//!
//! `G_ε` is finite, concave and smooth on all of `R^m`. The log-barrier dual
//! [`log_barrier_dual_eval`] is included for contrast: it only exists where
//! `Aᵀλ < c`.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::model::{LpInstance, DEFAULT_EXP_CLAMP};

/// Value and gradient of a dual function at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct DualEval {
    /// `-∞` when an exponent had to be clamped.
    pub value: f64,
    pub gradient: DVector<f64>,
}

/// Neumaier-compensated sum; order is fixed so results are reproducible.
pub(crate) fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Primal map `x*(λ)` with exponents clamped to `[-clamp, clamp]`.
///
/// Returns the point and whether the upper clamp fired. The lower clamp only
/// keeps entries strictly positive; it has no effect on the dual value at
/// double precision.
pub fn lp_primal_point_clamped(
    inst: &LpInstance,
    lambda: &DVector<f64>,
    epsilon: f64,
    clamp: f64,
) -> Result<(DVector<f64>, bool)> {
    if lambda.len() != inst.num_cons() {
        return Err(Error::dims("dual vector", inst.num_cons(), lambda.len()));
    }
    let mut reduced = inst.matrix().tr_mul(lambda);
    reduced -= inst.cost();
    let mut clamped = false;
    let x = reduced.map(|r| {
        let e = r / epsilon - 1.0;
        if e > clamp {
            clamped = true;
        }
        e.clamp(-clamp, clamp).exp()
    });
    Ok((x, clamped))
}

/// `x*(λ)_i = exp((Aᵀλ − c)_i/ε − 1)`, strictly positive.
pub fn lp_primal_point(inst: &LpInstance, lambda: &DVector<f64>, epsilon: f64) -> Result<DVector<f64>> {
    lp_primal_point_clamped(inst, lambda, epsilon, DEFAULT_EXP_CLAMP).map(|(x, _)| x)
}

pub fn lp_dual_eval_clamped(
    inst: &LpInstance,
    lambda: &DVector<f64>,
    epsilon: f64,
    clamp: f64,
) -> Result<DualEval> {
    let (x, clamped) = lp_primal_point_clamped(inst, lambda, epsilon, clamp)?;
    let mut gradient = inst.matrix() * &x;
    gradient.neg_mut();
    gradient += inst.rhs();
    let value = if clamped {
        f64::NEG_INFINITY
    } else {
        inst.rhs().dot(lambda) - epsilon * compensated_sum(x.iter().copied())
    };
    Ok(DualEval { value, gradient })
}

/// `G_ε(λ)` and `∇G_ε(λ)` with the default exponent clamp.
pub fn lp_dual_eval(inst: &LpInstance, lambda: &DVector<f64>, epsilon: f64) -> Result<DualEval> {
    lp_dual_eval_clamped(inst, lambda, epsilon, DEFAULT_EXP_CLAMP)
}

/// Outcome of evaluating the log-barrier dual.
#[derive(Clone, Debug, PartialEq)]
pub enum BarrierDual {
    Defined {
        value: f64,
        /// `x_i(μ) = μ / (c − Aᵀλ)_i`.
        point: DVector<f64>,
    },
    /// `(c − Aᵀλ)_index ≤ 0`: the barrier minimizer does not exist.
    DomainViolation { index: usize, slack: f64 },
}

impl BarrierDual {
    pub fn is_defined(&self) -> bool {
        matches!(self, BarrierDual::Defined { .. })
    }
}

/// Dual function of the log-barrier problem `min cᵀx − μ Σ ln x_i, Ax = b`.
///
/// With `s = c − Aᵀλ > 0` the inner minimizer is `x_i = μ/s_i`, and
/// substituting back gives `bᵀλ + dμ(1 − ln μ) + μ Σ ln s_i`.
pub fn log_barrier_dual_eval(inst: &LpInstance, lambda: &DVector<f64>, mu: f64) -> Result<BarrierDual> {
    if lambda.len() != inst.num_cons() {
        return Err(Error::dims("dual vector", inst.num_cons(), lambda.len()));
    }
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::InvalidConfig(format!("barrier parameter must be positive, got {mu}")));
    }
    let mut slack = inst.matrix().tr_mul(lambda);
    slack.neg_mut();
    slack += inst.cost();
    if let Some((index, &s)) = slack.iter().enumerate().find(|(_, s)| **s <= 0.0) {
        return Ok(BarrierDual::DomainViolation { index, slack: s });
    }
    let d = inst.num_vars() as f64;
    let log_sum = compensated_sum(slack.iter().map(|s| s.ln()));
    let value = inst.rhs().dot(lambda) + d * mu * (1.0 - mu.ln()) + mu * log_sum;
    let point = slack.map(|s| mu / s);
    Ok(BarrierDual::Defined { value, point })
}

//! Boltzmann–Shannon and von Neumann entropies and the regularized primal
//! objectives built from them.
//!
//! Both entropies are extended-valued: outside the nonnegative orthant (resp.
//! the PSD cone) they return `f64::INFINITY` instead of failing, so callers
//! can treat the value as a rejection.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::model::{LpInstance, SdpInstance, SymMatrix};
use crate::sdp_dual::sym_eig;

#[inline]
fn xlogx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// `Σ x_i ln x_i` with `0·ln 0 = 0`; `+∞` if any entry is negative.
pub fn shannon_entropy(x: &[f64]) -> f64 {
    let mut acc = 0.0;
    for &xi in x {
        if xi < 0.0 {
            return f64::INFINITY;
        }
        acc += xlogx(xi);
    }
    acc
}

/// Zero tolerance for eigenvalues in the von Neumann entropy.
pub fn eigen_zero_tol(x: &SymMatrix) -> f64 {
    1e-12 * x.frobenius_norm().max(1.0)
}

/// `Tr(X ln X) = Σ σ_i ln σ_i` over the spectrum of `X`.
///
/// Eigenvalues within `eigen_zero_tol` of zero count as zero, which gives the
/// continuous extension to singular PSD matrices. Returns `+∞` when `X` has an
/// eigenvalue below `-eigen_zero_tol`.
pub fn von_neumann_entropy(x: &SymMatrix) -> f64 {
    let tol = eigen_zero_tol(x);
    let eig = sym_eig(x);
    let mut acc = 0.0;
    for &s in eig.values.iter() {
        if s < -tol {
            return f64::INFINITY;
        }
        if s > tol {
            acc += xlogx(s);
        }
    }
    acc
}

/// `cᵀx + ε·Σ x_i ln x_i`.
pub fn lp_primal_objective(inst: &LpInstance, x: &DVector<f64>, epsilon: f64) -> Result<f64> {
    if x.len() != inst.num_vars() {
        return Err(Error::dims("primal vector", inst.num_vars(), x.len()));
    }
    let linear = inst.cost().dot(x);
    if epsilon == 0.0 {
        return Ok(linear);
    }
    Ok(linear + epsilon * shannon_entropy(x.as_slice()))
}

/// `Tr(C·X) + ε·Tr(X ln X)`.
pub fn sdp_primal_objective(inst: &SdpInstance, x: &SymMatrix, epsilon: f64) -> Result<f64> {
    if x.dim() != inst.dim() {
        return Err(Error::dims("primal matrix", inst.dim(), x.dim()));
    }
    let linear = inst.cost().trace_product(x);
    if epsilon == 0.0 {
        return Ok(linear);
    }
    Ok(linear + epsilon * von_neumann_entropy(x))
}

//! Spectral kernels and the closed-form SDP dual.
//!
//! With `X(λ) = exp((𝒜*λ − C)/ε − I)` the von Neumann-regularized SDP has the
//! dual function `Ĝ_ε(λ) = bᵀλ − ε Tr X(λ)` with gradient `b − 𝒜(X(λ))`.
//! Every evaluation costs one symmetric eigendecomposition.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::lp_dual::{compensated_sum, DualEval};
use crate::model::{SdpInstance, SymMatrix, DEFAULT_EXP_CLAMP};

/// Eigendecomposition `M = Q diag(σ) Qᵀ` with `σ` ascending.
#[derive(Clone, Debug)]
pub struct SymEig {
    pub vectors: DMatrix<f64>,
    pub values: DVector<f64>,
}

impl SymEig {
    /// `Q diag(f(σ)) Qᵀ`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> SymMatrix {
        let mut scaled = self.vectors.clone();
        for (j, &s) in self.values.iter().enumerate() {
            let fj = f(s);
            scaled.column_mut(j).scale_mut(fj);
        }
        SymMatrix::from_matrix(scaled * self.vectors.transpose()).expect("square by construction")
    }
}

pub fn sym_eig(m: &SymMatrix) -> SymEig {
    let n = m.dim();
    if n == 0 {
        return SymEig {
            vectors: DMatrix::zeros(0, 0),
            values: DVector::zeros(0),
        };
    }
    let eig = SymmetricEigen::new(m.as_matrix().clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    SymEig { vectors, values }
}

/// Matrix exponential through the spectrum, exponents clamped to
/// `[-clamp, clamp]`. The flag reports whether the upper clamp fired.
pub fn mat_exp_sym_clamped(m: &SymMatrix, clamp: f64) -> (SymMatrix, bool) {
    let eig = sym_eig(m);
    let clamped = eig.values.iter().any(|&s| s > clamp);
    (eig.reconstruct_with(|s| s.clamp(-clamp, clamp).exp()), clamped)
}

pub fn mat_exp_sym(m: &SymMatrix) -> SymMatrix {
    mat_exp_sym_clamped(m, DEFAULT_EXP_CLAMP).0
}

fn check_lambda(inst: &SdpInstance, lambda: &DVector<f64>) -> Result<()> {
    if lambda.len() != inst.num_cons() {
        return Err(Error::dims("dual vector", inst.num_cons(), lambda.len()));
    }
    Ok(())
}

/// Spectrum of the exponent `(𝒜*λ − C)/ε − I` of `X(λ)`.
fn exponent_eig(inst: &SdpInstance, lambda: &DVector<f64>, epsilon: f64) -> SymEig {
    let n = inst.dim();
    let shifted = inst
        .adjoint(lambda)
        .add_scaled(-1.0, inst.cost())
        .scale(1.0 / epsilon)
        .add_scaled(-1.0, &SymMatrix::identity(n));
    sym_eig(&shifted)
}

/// `X(λ)` plus the clamp flag and `Tr X(λ)` summed from the spectrum.
pub fn sdp_primal_point_clamped(
    inst: &SdpInstance,
    lambda: &DVector<f64>,
    epsilon: f64,
    clamp: f64,
) -> Result<(SymMatrix, bool, f64)> {
    check_lambda(inst, lambda)?;
    let eig = exponent_eig(inst, lambda, epsilon);
    let clamped = eig.values.iter().any(|&s| s > clamp);
    let exps: Vec<f64> = eig.values.iter().map(|s| s.clamp(-clamp, clamp).exp()).collect();
    let trace = compensated_sum(exps.iter().copied());
    let mut scaled = eig.vectors.clone();
    for (j, e) in exps.iter().enumerate() {
        scaled.column_mut(j).scale_mut(*e);
    }
    let x = SymMatrix::from_matrix(scaled * eig.vectors.transpose()).expect("square by construction");
    Ok((x, clamped, trace))
}

/// `X(λ) = exp((𝒜*λ − C)/ε − I)`, positive definite.
pub fn sdp_primal_point(inst: &SdpInstance, lambda: &DVector<f64>, epsilon: f64) -> Result<SymMatrix> {
    sdp_primal_point_clamped(inst, lambda, epsilon, DEFAULT_EXP_CLAMP).map(|(x, _, _)| x)
}

pub fn sdp_dual_eval_clamped(
    inst: &SdpInstance,
    lambda: &DVector<f64>,
    epsilon: f64,
    clamp: f64,
) -> Result<DualEval> {
    let (x, clamped, trace) = sdp_primal_point_clamped(inst, lambda, epsilon, clamp)?;
    let gradient = inst.rhs() - inst.apply(&x);
    let value = if clamped {
        f64::NEG_INFINITY
    } else {
        inst.rhs().dot(lambda) - epsilon * trace
    };
    Ok(DualEval { value, gradient })
}

/// `Ĝ_ε(λ)` and its gradient with the default exponent clamp.
pub fn sdp_dual_eval(inst: &SdpInstance, lambda: &DVector<f64>, epsilon: f64) -> Result<DualEval> {
    sdp_dual_eval_clamped(inst, lambda, epsilon, DEFAULT_EXP_CLAMP)
}

/// Eigenvalue bounds on `Tr(A·B)` for symmetric `A` and PSD `B`:
/// pairing the spectra in opposite order gives the lower bound, in the same
/// order the upper bound.
pub fn trace_bounds(a: &SymMatrix, b: &SymMatrix) -> Result<(f64, f64)> {
    if a.dim() != b.dim() {
        return Err(Error::dims("trace bound operand", a.dim(), b.dim()));
    }
    let sa = sym_eig(a).values;
    let sb = sym_eig(b).values;
    let n = sa.len();
    if n == 0 {
        return Ok((0.0, 0.0));
    }
    let min_b = sb[0];
    if min_b < -1e-10 * b.frobenius_norm() {
        return Err(Error::NotPositiveSemidefinite { min_eigenvalue: min_b });
    }
    let lower = (0..n).map(|j| sa[j] * sb[n - 1 - j]).sum();
    let upper = (0..n).map(|j| sa[j] * sb[j]).sum();
    Ok((lower, upper))
}

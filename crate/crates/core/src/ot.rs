//! Discrete optimal transport: the standard-form LP reduction, a plain
//! Sinkhorn baseline, and a side-by-side comparison of the two.

use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};

use crate::entropy::shannon_entropy;
use crate::error::{Error, Result};
use crate::model::{LpInstance, OtInstance, SolveReport, SolverConfig};
use crate::optimizer::solve_lp;

/// How LP variables map back onto the transport plan.
///
/// Variables are the plan in row-major order. Constraints are the `rows`
/// row sums followed by the column sums of every column except
/// `dropped_column`, which is implied by the others.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PlanShape {
    pub rows: usize,
    pub cols: usize,
    pub dropped_column: usize,
}

impl PlanShape {
    pub fn num_vars(&self) -> usize {
        self.rows * self.cols
    }

    pub fn num_cons(&self) -> usize {
        self.rows + self.cols - 1
    }

    /// Reshapes a row-major plan vector.
    pub fn plan(&self, x: &DVector<f64>) -> Result<DMatrix<f64>> {
        if x.len() != self.num_vars() {
            return Err(Error::dims("plan vector", self.num_vars(), x.len()));
        }
        Ok(DMatrix::from_row_slice(self.rows, self.cols, x.as_slice()))
    }
}

pub fn ot_to_lp(ot: &OtInstance) -> (LpInstance, PlanShape) {
    let (n1, n2) = (ot.rows(), ot.cols());
    let shape = PlanShape {
        rows: n1,
        cols: n2,
        dropped_column: n2 - 1,
    };
    let d = shape.num_vars();
    let m = shape.num_cons();
    let cost = DVector::from_fn(d, |k, _| ot.cost()[(k / n2, k % n2)]);
    let mut a = DMatrix::zeros(m, d);
    let mut b = DVector::zeros(m);
    for i in 0..n1 {
        for j in 0..n2 {
            a[(i, i * n2 + j)] = 1.0;
        }
        b[i] = ot.source()[i];
    }
    for j in 0..n2 - 1 {
        for i in 0..n1 {
            a[(n1 + j, i * n2 + j)] = 1.0;
        }
        b[n1 + j] = ot.target()[j];
    }
    let lp = LpInstance::new(cost, a, b).expect("transport constraints have full row rank");
    (lp, shape)
}

/// `‖P·1 − p‖₁` and `‖Pᵀ·1 − q‖₁`.
pub fn marginal_residuals(ot: &OtInstance, plan: &DMatrix<f64>) -> (f64, f64) {
    let rows: f64 = plan
        .row_iter()
        .zip(ot.source().iter())
        .map(|(r, p)| (r.sum() - p).abs())
        .sum();
    let cols: f64 = plan
        .column_iter()
        .zip(ot.target().iter())
        .map(|(c, q)| (c.sum() - q).abs())
        .sum();
    (rows, cols)
}

/// `Σ P_ij C_ij + ε Σ P_ij ln P_ij`.
pub fn regularized_cost(ot: &OtInstance, plan: &DMatrix<f64>, epsilon: f64) -> f64 {
    ot.cost().component_mul(plan).sum() + epsilon * shannon_entropy(plan.as_slice())
}

#[derive(Clone, Debug, PartialEq)]
pub struct SinkhornResult {
    pub plan: DMatrix<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Classic matrix scaling with `K = exp(−C/ε)`: `u ← p ⊘ Kv`, `v ← q ⊘ Kᵀu`.
///
/// Stops once both marginal residuals are at most `tol` in ℓ¹. Works in the
/// linear domain: entries of `K` underflow once `C_ij/ε` exceeds about 745,
/// and a row or column lost that way is reported as [`Error::KernelUnderflow`].
/// For costs of order one, keep `ε ≥ 0.005`.
pub fn sinkhorn(ot: &OtInstance, epsilon: f64, tol: f64, max_iter: usize) -> Result<SinkhornResult> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidConfig(format!("epsilon must be positive, got {epsilon}")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidConfig(format!("tolerance must be positive, got {tol}")));
    }
    let kernel = ot.cost().map(|c| (-c / epsilon).exp());
    let underflow = |axis, index| Error::KernelUnderflow { axis, index, epsilon };
    if let Some(i) = kernel.row_iter().position(|r| r.iter().all(|&k| k == 0.0)) {
        return Err(underflow("row", i));
    }
    if let Some(j) = kernel.column_iter().position(|c| c.iter().all(|&k| k == 0.0)) {
        return Err(underflow("column", j));
    }

    let p = ot.source();
    let q = ot.target();
    let mut u = DVector::from_element(ot.rows(), 1.0);
    let mut v = DVector::from_element(ot.cols(), 1.0);
    let plan_of = |u: &DVector<f64>, v: &DVector<f64>| {
        DMatrix::from_fn(kernel.nrows(), kernel.ncols(), |i, j| u[i] * kernel[(i, j)] * v[j])
    };
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        u = p.component_div(&(&kernel * &v));
        v = q.component_div(&kernel.tr_mul(&u));
        iterations += 1;
        if let Some(i) = u.iter().position(|x| !x.is_finite()) {
            return Err(underflow("row", i));
        }
        if let Some(j) = v.iter().position(|x| !x.is_finite()) {
            return Err(underflow("column", j));
        }
        let (r, c) = marginal_residuals(ot, &plan_of(&u, &v));
        if r <= tol && c <= tol {
            converged = true;
            break;
        }
    }
    let plan = plan_of(&u, &v);
    let value = regularized_cost(ot, &plan, epsilon);
    Ok(SinkhornResult {
        plan,
        value,
        iterations,
        converged,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SinkhornOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SinkhornOptions {
    fn default() -> Self {
        SinkhornOptions {
            tol: 1e-9,
            max_iter: 100_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct OtComparison {
    pub sinkhorn: SinkhornResult,
    pub dual: SolveReport,
    /// Plan reconstructed from the dual solver's `x*(ε)`.
    pub dual_plan: DMatrix<f64>,
    /// `|dual_value − sinkhorn.value|`.
    pub value_gap: f64,
    /// Entrywise ℓ¹ distance between the two plans.
    pub plan_l1: f64,
    pub sinkhorn_time: Duration,
    pub dual_time: Duration,
}

/// Solves `ot` both ways at `config.epsilon`.
pub fn compare_ot(ot: &OtInstance, config: &SolverConfig, sinkhorn_opts: SinkhornOptions) -> Result<OtComparison> {
    let start = Instant::now();
    let sk = sinkhorn(ot, config.epsilon, sinkhorn_opts.tol, sinkhorn_opts.max_iter)?;
    let sinkhorn_time = start.elapsed();

    let start = Instant::now();
    let (lp, shape) = ot_to_lp(ot);
    let report = solve_lp(&lp, config)?;
    let dual_time = start.elapsed();

    let x = report.primal_point.as_vector().expect("LP solve yields a vector");
    let dual_plan = shape.plan(x)?;
    let plan_l1 = (&dual_plan - &sk.plan).abs().sum();
    let value_gap = (report.dual_value - sk.value).abs();
    Ok(OtComparison {
        sinkhorn: sk,
        dual: report,
        dual_plan,
        value_gap,
        plan_l1,
        sinkhorn_time,
        dual_time,
    })
}

//! Brute-force references for small LPs, independent of the dual machinery.
//!
//! [`lp_vertex_solve`] enumerates every basis. [`primal_bruteforce`] minimizes
//! the regularized primal objective directly with Newton steps on the
//! equality-constrained problem.

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};

use crate::entropy::lp_primal_objective;
use crate::error::{Error, Result};
use crate::model::LpInstance;

pub const MAX_VERTEX_VARS: usize = 25;
pub const MAX_BASES: u128 = 200_000;
pub const MAX_BRUTEFORCE_VARS: usize = 50;

/// Residual above which the brute-force minimizer reports infeasibility.
pub const FEASIBILITY_TOL: f64 = 1e-8;

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

#[derive(Clone, Debug, PartialEq)]
pub struct VertexSolution {
    pub optimal_value: f64,
    /// Every distinct vertex whose objective is within `1e-9·(1 + |τ|)` of `τ`.
    pub optimal_vertices: Vec<DVector<f64>>,
}

/// Exact LP optimum `τ` by enumerating all `m`-column bases.
pub fn lp_vertex_solve(inst: &LpInstance) -> Result<VertexSolution> {
    let (d, m) = (inst.num_vars(), inst.num_cons());
    if d > MAX_VERTEX_VARS {
        return Err(Error::TooLarge(format!("{d} variables exceeds {MAX_VERTEX_VARS}")));
    }
    let bases = binomial(d, m);
    if bases > MAX_BASES {
        return Err(Error::TooLarge(format!("C({d}, {m}) = {bases} bases exceeds {MAX_BASES}")));
    }
    let a = inst.matrix();
    let b = inst.rhs();
    let scale = 1.0 + b.amax();

    let mut vertices: Vec<(f64, DVector<f64>)> = Vec::new();
    for basis in (0..d).combinations(m) {
        let sub = a.select_columns(basis.iter());
        let svd = sub.clone().svd(false, false);
        let (smax, smin) = (svd.singular_values.max(), svd.singular_values.min());
        if !(smin > 1e-12 * smax) {
            continue;
        }
        let Some(xb) = sub.lu().solve(b) else { continue };
        if xb.iter().any(|&v| v < -1e-9 * scale) {
            continue;
        }
        let mut x = DVector::zeros(d);
        for (&j, &v) in basis.iter().zip(xb.iter()) {
            x[j] = v.max(0.0);
        }
        if (a * &x - b).amax() > 1e-9 * scale {
            continue;
        }
        let value = inst.cost().dot(&x);
        vertices.push((value, x));
    }
    let Some(tau) = vertices.iter().map(|(v, _)| *v).min_by(f64::total_cmp) else {
        return Err(Error::Infeasible("no nonnegative basic solution".into()));
    };
    let tie = 1e-9 * (1.0 + tau.abs());
    let mut optimal: Vec<DVector<f64>> = Vec::new();
    for (value, x) in vertices {
        if value <= tau + tie && !optimal.iter().any(|y| (y - &x).amax() <= 1e-9 * scale) {
            optimal.push(x);
        }
    }
    Ok(VertexSolution {
        optimal_value: tau,
        optimal_vertices: optimal,
    })
}

/// Solves the SPD system `S w = r` after symmetric diagonal scaling, which
/// keeps rows whose variables have collapsed towards zero well conditioned.
fn solve_equilibrated(s: DMatrix<f64>, r: DVector<f64>) -> Option<DVector<f64>> {
    let scale = s.diagonal().map(|v| if v > 0.0 { 1.0 / v.sqrt() } else { 1.0 });
    let scaled = DMatrix::from_fn(s.nrows(), s.ncols(), |i, j| s[(i, j)] * scale[i] * scale[j]);
    let rs = r.component_mul(&scale);
    let y = match scaled.clone().cholesky() {
        Some(ch) => ch.solve(&rs),
        None => scaled.lu().solve(&rs)?,
    };
    let w = y.component_mul(&scale);
    w.iter().all(|v| v.is_finite()).then_some(w)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BruteforceSolution {
    pub value: f64,
    pub point: DVector<f64>,
    pub iterations: usize,
}

/// Barrier weight at which [`primal_bruteforce`] stops following the path.
const FINAL_BARRIER: f64 = 1e-13;

/// Minimizes `cᵀx + ε Σ x ln x` over `{Ax = b, x ≥ 0}`.
///
/// Coordinates of the regularized optimum can be far below the smallest
/// double, so the objective is augmented with a barrier `−μ Σ ln x` that is
/// driven from `μ = 1` down to `1e-13`, where its effect on the value is
/// below `d·μ`. Each barrier problem is solved by infeasible-start Newton on
/// the KKT residual `(∇φ_μ + Aᵀν, Ax − b)` from `x = 1`, `ν = 0`, with the
/// Newton system reduced to `A H⁻¹ Aᵀ`.
pub fn primal_bruteforce(inst: &LpInstance, epsilon: f64) -> Result<BruteforceSolution> {
    let d = inst.num_vars();
    if d > MAX_BRUTEFORCE_VARS {
        return Err(Error::TooLarge(format!("{d} variables exceeds {MAX_BRUTEFORCE_VARS}")));
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidConfig(format!("epsilon must be positive, got {epsilon}")));
    }
    let a = inst.matrix();
    let b = inst.rhs();
    let c = inst.cost();
    let tol = 1e-10 * (1.0 + c.amax() + b.amax());

    let mut x: DVector<f64> = DVector::from_element(d, 1.0);
    let mut nu: DVector<f64> = DVector::zeros(a.nrows());
    let mut iterations = 0;
    let mut mu = 1.0;
    loop {
        let grad_of = |x: &DVector<f64>| DVector::from_fn(d, |i, _| c[i] + epsilon * (1.0 + x[i].ln()) - mu / x[i]);
        let residual = |x: &DVector<f64>, nu: &DVector<f64>| {
            let dual = grad_of(x) + a.tr_mul(nu);
            let primal = a * x - b;
            (dual.norm_squared() + primal.norm_squared()).sqrt()
        };
        for _ in 0..200 {
            let r0 = residual(&x, &nu);
            if r0 <= tol {
                break;
            }
            iterations += 1;
            let grad = grad_of(&x);
            let inv_hess = x.map(|v| v * v / (epsilon * v + mu));
            let ah = DMatrix::from_fn(a.nrows(), d, |i, j| a[(i, j)] * inv_hess[j]);
            let rhs = (a * &x - b) - &ah * &grad;
            let w = solve_equilibrated(&ah * a.transpose(), rhs).ok_or_else(|| {
                Error::InvalidInstance("singular Newton system in brute-force minimizer".into())
            })?;
            let dx = -(grad + a.tr_mul(&w)).component_mul(&inv_hess);
            let dnu = w - &nu;
            let mut t = 1.0;
            while (0..d).any(|i| x[i] + t * dx[i] <= 0.0) {
                t *= 0.5;
            }
            while t > 1e-14 && residual(&(&x + &dx * t), &(&nu + &dnu * t)) > (1.0 - 0.01 * t) * r0 {
                t *= 0.5;
            }
            if t <= 1e-14 {
                break;
            }
            x += &dx * t;
            nu += &dnu * t;
        }
        if mu <= FINAL_BARRIER {
            break;
        }
        mu = (mu * 0.1).max(FINAL_BARRIER);
    }
    let residual = (a * &x - b).amax();
    if residual > FEASIBILITY_TOL {
        return Err(Error::Infeasible(format!(
            "brute-force minimizer ended with residual {residual:e}"
        )));
    }
    Ok(BruteforceSolution {
        value: lp_primal_objective(inst, &x, epsilon)?,
        point: x,
        iterations,
    })
}

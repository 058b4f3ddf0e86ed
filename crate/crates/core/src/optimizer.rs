//! Unconstrained maximization of the concave duals.
//!
//! [`maximize_concave`] is a limited-memory BFGS ascent with a strong-Wolfe
//! line search. [`solve_lp`] and [`solve_sdp`] run it on `G_ε` / `Ĝ_ε` from
//! `λ = 0` and recover the unique regularized primal optimum from the dual
//! maximizer. [`solve_continuation`] walks a decreasing ε schedule with warm
//! starts.

use std::collections::VecDeque;

use nalgebra::DVector;

use crate::entropy::{lp_primal_objective, sdp_primal_objective};
use crate::error::{Error, Result};
use crate::lp_dual::{lp_dual_eval_clamped, lp_primal_point_clamped};
use crate::model::{
    LpInstance, PrimalPoint, SdpInstance, SolveReport, SolverConfig, Termination, TraceEntry,
};
use crate::sdp_dual::{sdp_dual_eval_clamped, sdp_primal_point_clamped};

/// Maximum number of function evaluations inside one line search.
pub const MAX_LINE_SEARCH_EVALS: usize = 50;

/// Objective differences below this many ulps of `|φ(0)|` are treated as
/// rounding noise by the line search.
pub const VALUE_NOISE_ULPS: f64 = 64.0;

/// Result of [`maximize_concave`].
#[derive(Clone, Debug)]
pub struct Ascent {
    pub lambda: DVector<f64>,
    pub value: f64,
    pub gradient: DVector<f64>,
    pub iterations: usize,
    pub evaluations: usize,
    pub termination: Termination,
    pub trace: Vec<TraceEntry>,
}

impl Ascent {
    pub fn converged(&self) -> bool {
        self.termination == Termination::Converged
    }

    pub fn grad_inf_norm(&self) -> f64 {
        self.gradient.amax()
    }
}

/// One point on the line together with the objective (negated dual value).
struct LinePoint {
    t: f64,
    f: f64,
    grad: DVector<f64>,
    slope: f64,
}

struct LineSearch<'a, F> {
    eval: &'a mut F,
    origin: &'a DVector<f64>,
    dir: &'a DVector<f64>,
    f0: f64,
    slope0: f64,
    c1: f64,
    c2: f64,
    evals: usize,
}

impl<F> LineSearch<'_, F>
where
    F: FnMut(&DVector<f64>) -> (f64, DVector<f64>),
{
    fn probe(&mut self, t: f64) -> LinePoint {
        self.evals += 1;
        let x = self.origin + self.dir * t;
        let (value, g) = (self.eval)(&x);
        // Minimize f = -value; a -∞ dual value becomes +∞.
        let f = if value.is_nan() { f64::INFINITY } else { -value };
        let grad = -g;
        let slope = grad.dot(self.dir);
        LinePoint { t, f, grad, slope }
    }

    /// Armijo condition, with the approximate-Wolfe fallback of Hager and
    /// Zhang: when `φ(t)` is within rounding noise of `φ(0)` the decrease is
    /// judged from the slope instead, `φ'(t) ≤ (1 − 2c1)|φ'(0)|`.
    fn sufficient(&self, p: &LinePoint) -> bool {
        if !p.f.is_finite() {
            return false;
        }
        if p.f <= self.f0 + self.c1 * p.t * self.slope0 {
            return true;
        }
        p.f <= self.f0 + self.noise() && p.slope <= (2.0 * self.c1 - 1.0) * self.slope0
    }

    /// Rounding level of the objective at the origin.
    fn noise(&self) -> f64 {
        VALUE_NOISE_ULPS * f64::EPSILON * self.f0.abs()
    }

    fn curvature(&self, p: &LinePoint) -> bool {
        p.slope.abs() <= -self.c2 * self.slope0
    }

    fn exhausted(&self) -> bool {
        self.evals >= MAX_LINE_SEARCH_EVALS
    }

    /// Returns a strong-Wolfe point, or failing that the best point with
    /// sufficient decrease seen during the search.
    fn run(mut self, t0: f64) -> (Option<LinePoint>, usize) {
        let mut prev = LinePoint {
            t: 0.0,
            f: self.f0,
            grad: DVector::zeros(0),
            slope: self.slope0,
        };
        let mut t = t0;
        let mut first = true;
        while !self.exhausted() {
            let cur = self.probe(t);
            if !self.sufficient(&cur) || (!first && cur.f > prev.f + self.noise()) {
                let out = self.zoom(prev, cur);
                return (out, self.evals);
            }
            if self.curvature(&cur) {
                return (Some(cur), self.evals);
            }
            if cur.slope >= 0.0 {
                let out = self.zoom(cur, prev);
                return (out, self.evals);
            }
            let lo = cur.t + 0.01 * (cur.t - prev.t);
            let hi = cur.t * 10.0;
            t = cubic_minimizer(&prev, &cur).map_or(hi, |c| c.clamp(lo, hi));
            prev = cur;
            first = false;
        }
        let best = if prev.t > 0.0 { Some(prev) } else { None };
        (best, self.evals)
    }

    /// Zoom phase. `lo` always satisfies sufficient decrease (or is the origin)
    /// and has the lowest objective seen; the minimizer lies between `lo` and `hi`.
    fn zoom(&mut self, mut lo: LinePoint, mut hi: LinePoint) -> Option<LinePoint> {
        while !self.exhausted() {
            let width = (hi.t - lo.t).abs();
            if width <= 1e-16 * lo.t.abs().max(hi.t.abs()).max(1e-300) {
                break;
            }
            let (a, b) = if lo.t < hi.t { (lo.t, hi.t) } else { (hi.t, lo.t) };
            let guard = 0.1 * width;
            let t = match cubic_minimizer(&lo, &hi) {
                Some(c) if c > a + guard && c < b - guard => c,
                _ => 0.5 * (a + b),
            };
            let cur = self.probe(t);
            if !self.sufficient(&cur) || cur.f > lo.f + self.noise() {
                hi = cur;
            } else {
                if self.curvature(&cur) {
                    return Some(cur);
                }
                if cur.slope * (hi.t - lo.t) >= 0.0 {
                    hi = lo;
                }
                lo = cur;
            }
        }
        if lo.t > 0.0 {
            Some(lo)
        } else {
            None
        }
    }
}

/// Minimizer of the cubic interpolating values and slopes at two points.
fn cubic_minimizer(p: &LinePoint, q: &LinePoint) -> Option<f64> {
    if !(p.f.is_finite() && q.f.is_finite() && p.slope.is_finite() && q.slope.is_finite()) {
        return None;
    }
    let d1 = p.slope + q.slope - 3.0 * (p.f - q.f) / (p.t - q.t);
    let disc = d1 * d1 - p.slope * q.slope;
    if disc < 0.0 {
        return None;
    }
    let d2 = disc.sqrt().copysign(q.t - p.t);
    let denom = q.slope - p.slope + 2.0 * d2;
    if denom == 0.0 {
        return None;
    }
    let t = q.t - (q.t - p.t) * (q.slope + d2 - d1) / denom;
    t.is_finite().then_some(t)
}

/// Maximizes a concave function given by `eval(λ) = (value, gradient)`.
///
/// L-BFGS ascent with memory `config.lbfgs_memory` and a strong-Wolfe line
/// search `(wolfe_c1, wolfe_c2)`. Stops when `‖∇‖∞ ≤ config.grad_tol`, after
/// `config.max_iter` iterations, or when the line search cannot make progress
/// within [`MAX_LINE_SEARCH_EVALS`] evaluations; the last iterate is returned
/// in every case. A value of `-∞` is treated as outside the domain and makes
/// the line search backtrack.
pub fn maximize_concave<F>(mut eval: F, lambda0: DVector<f64>, config: &SolverConfig) -> Result<Ascent>
where
    F: FnMut(&DVector<f64>) -> (f64, DVector<f64>),
{
    config.validate()?;
    let mut x = lambda0;
    let (value0, g0) = eval(&x);
    if !value0.is_finite() || g0.iter().any(|g| !g.is_finite()) {
        return Err(Error::NonFiniteStart);
    }
    if g0.len() != x.len() {
        return Err(Error::dims("gradient", x.len(), g0.len()));
    }
    let mut f = -value0;
    let mut grad = -g0;
    let mut evaluations = 1;
    let mut trace = vec![TraceEntry {
        iteration: 0,
        dual_value: value0,
        grad_inf_norm: grad.amax(),
    }];
    let mut history: VecDeque<(DVector<f64>, DVector<f64>, f64)> = VecDeque::new();
    let mut iterations = 0;
    let mut termination = Termination::MaxIterations;

    while iterations < config.max_iter {
        if grad.amax() <= config.grad_tol {
            termination = Termination::Converged;
            break;
        }
        let mut dir = two_loop_direction(&grad, &history);
        let mut slope = grad.dot(&dir);
        let mut t0 = 1.0;
        if history.is_empty() || !(slope < 0.0 && slope.is_finite()) {
            // Unit steepest-ascent direction; the gradient norm itself may
            // be too large to square.
            history.clear();
            let norm = scaled_norm(&grad);
            dir = &grad * (-1.0 / norm);
            slope = grad.dot(&dir);
            t0 = norm.min(1.0);
        }
        let search = LineSearch {
            eval: &mut eval,
            origin: &x,
            dir: &dir,
            f0: f,
            slope0: slope,
            c1: config.wolfe_c1,
            c2: config.wolfe_c2,
            evals: 0,
        };
        let (step, used) = search.run(t0);
        evaluations += used;
        // A quasi-Newton step that improved neither the value nor the gradient
        // means the curvature pairs are stale: retry along steepest ascent.
        let stalled = match &step {
            None => true,
            Some(p) => p.f >= f && p.grad.amax() >= grad.amax(),
        };
        if stalled && !history.is_empty() {
            history.clear();
            continue;
        }
        let Some(step) = step else {
            termination = Termination::LineSearchFailed;
            break;
        };
        let s = &dir * step.t;
        let y = &step.grad - &grad;
        let sy = s.dot(&y);
        if sy.is_finite() && sy > 1e-12 * s.norm() * y.norm() && sy > 0.0 {
            if history.len() == config.lbfgs_memory {
                history.pop_front();
            }
            history.push_back((s.clone(), y, 1.0 / sy));
        }
        x += s;
        f = step.f;
        grad = step.grad;
        iterations += 1;
        trace.push(TraceEntry {
            iteration: iterations,
            dual_value: -f,
            grad_inf_norm: grad.amax(),
        });
    }
    if termination == Termination::MaxIterations && grad.amax() <= config.grad_tol {
        termination = Termination::Converged;
    }
    Ok(Ascent {
        lambda: x,
        value: -f,
        gradient: -grad,
        iterations,
        evaluations,
        termination,
        trace,
    })
}

/// Euclidean norm that does not overflow for entries near `f64::MAX`.
fn scaled_norm(v: &DVector<f64>) -> f64 {
    let big = v.amax();
    if big == 0.0 || !big.is_finite() {
        return big;
    }
    big * (v / big).norm()
}

fn two_loop_direction(grad: &DVector<f64>, history: &VecDeque<(DVector<f64>, DVector<f64>, f64)>) -> DVector<f64> {
    let mut q = grad.clone();
    let Some((s_last, y_last, _)) = history.back() else {
        return -q;
    };
    let mut alphas = Vec::with_capacity(history.len());
    for (s, y, rho) in history.iter().rev() {
        let a = rho * s.dot(&q);
        q.axpy(-a, y, 1.0);
        alphas.push(a);
    }
    let gamma = s_last.dot(y_last) / y_last.norm_squared();
    q *= gamma;
    for ((s, y, rho), a) in history.iter().zip(alphas.into_iter().rev()) {
        let b = rho * y.dot(&q);
        q.axpy(a - b, s, 1.0);
    }
    -q
}

/// A regularized program whose dual is available in closed form.
pub trait EntropicProgram {
    fn num_cons(&self) -> usize;

    /// Dual value and gradient; `λ` has length `num_cons()`.
    fn dual(&self, lambda: &DVector<f64>, epsilon: f64, clamp: f64) -> (f64, DVector<f64>);

    /// Primal point attached to `λ`.
    fn primal(&self, lambda: &DVector<f64>, epsilon: f64, clamp: f64) -> PrimalPoint;

    /// Regularized primal objective at `point`.
    fn primal_objective(&self, point: &PrimalPoint, epsilon: f64) -> f64;
}

impl EntropicProgram for LpInstance {
    fn num_cons(&self) -> usize {
        LpInstance::num_cons(self)
    }

    fn dual(&self, lambda: &DVector<f64>, epsilon: f64, clamp: f64) -> (f64, DVector<f64>) {
        let ev = lp_dual_eval_clamped(self, lambda, epsilon, clamp).expect("dual length checked by solver");
        (ev.value, ev.gradient)
    }

    fn primal(&self, lambda: &DVector<f64>, epsilon: f64, clamp: f64) -> PrimalPoint {
        let (x, _) = lp_primal_point_clamped(self, lambda, epsilon, clamp).expect("dual length checked by solver");
        PrimalPoint::Vector(x)
    }

    fn primal_objective(&self, point: &PrimalPoint, epsilon: f64) -> f64 {
        match point {
            PrimalPoint::Vector(x) => lp_primal_objective(self, x, epsilon).unwrap_or(f64::NAN),
            PrimalPoint::Matrix(_) => f64::NAN,
        }
    }
}

impl EntropicProgram for SdpInstance {
    fn num_cons(&self) -> usize {
        SdpInstance::num_cons(self)
    }

    fn dual(&self, lambda: &DVector<f64>, epsilon: f64, clamp: f64) -> (f64, DVector<f64>) {
        let ev = sdp_dual_eval_clamped(self, lambda, epsilon, clamp).expect("dual length checked by solver");
        (ev.value, ev.gradient)
    }

    fn primal(&self, lambda: &DVector<f64>, epsilon: f64, clamp: f64) -> PrimalPoint {
        let (x, _, _) =
            sdp_primal_point_clamped(self, lambda, epsilon, clamp).expect("dual length checked by solver");
        PrimalPoint::Matrix(x)
    }

    fn primal_objective(&self, point: &PrimalPoint, epsilon: f64) -> f64 {
        match point {
            PrimalPoint::Matrix(x) => sdp_primal_objective(self, x, epsilon).unwrap_or(f64::NAN),
            PrimalPoint::Vector(_) => f64::NAN,
        }
    }
}

/// Largest number of doublings tried when looking for an ε at which the dual
/// is finite at the starting point.
const MAX_WARMUP_DOUBLINGS: usize = 64;

/// When the dual is `-∞` at `λ0` (an exponent exceeds the clamp), solve at
/// `2^k ε` for the smallest such `k` that is finite and halve back down,
/// warm-starting each stage. Returns the final starting point and the
/// iterations spent.
fn warm_up<P: EntropicProgram + ?Sized>(
    program: &P,
    config: &SolverConfig,
    lambda0: DVector<f64>,
) -> Result<(DVector<f64>, usize)> {
    let finite_at = |lambda: &DVector<f64>, eps: f64| program.dual(lambda, eps, config.exp_clamp).0.is_finite();
    if finite_at(&lambda0, config.epsilon) {
        return Ok((lambda0, 0));
    }
    let mut doublings = 0;
    while !finite_at(&lambda0, config.epsilon * 2f64.powi(doublings as i32)) {
        doublings += 1;
        if doublings > MAX_WARMUP_DOUBLINGS {
            return Err(Error::NonFiniteStart);
        }
    }
    let stage_config = SolverConfig {
        grad_tol: config.grad_tol.max(1e-6),
        ..config.clone()
    };
    let mut lambda = lambda0;
    let mut spent = 0;
    for k in (1..=doublings).rev() {
        let eps = config.epsilon * 2f64.powi(k as i32);
        if !finite_at(&lambda, eps) {
            return Err(Error::NonFiniteStart);
        }
        let ascent = maximize_concave(
            |l: &DVector<f64>| program.dual(l, eps, config.exp_clamp),
            lambda,
            &stage_config.with_epsilon(eps),
        )?;
        spent += ascent.iterations;
        lambda = ascent.lambda;
    }
    if !finite_at(&lambda, config.epsilon) {
        return Err(Error::NonFiniteStart);
    }
    Ok((lambda, spent))
}

/// Maximizes the dual of `program` from `lambda0` and assembles the report.
pub fn solve_from<P: EntropicProgram + ?Sized>(
    program: &P,
    config: &SolverConfig,
    lambda0: DVector<f64>,
) -> Result<SolveReport> {
    config.validate()?;
    if lambda0.len() != program.num_cons() {
        return Err(Error::dims("starting dual vector", program.num_cons(), lambda0.len()));
    }
    let (start, warmup_iterations) = warm_up(program, config, lambda0)?;
    let eps = config.epsilon;
    let ascent = maximize_concave(|l: &DVector<f64>| program.dual(l, eps, config.exp_clamp), start, config)?;
    let primal_point = program.primal(&ascent.lambda, eps, config.exp_clamp);
    let primal_value = program.primal_objective(&primal_point, eps);
    Ok(SolveReport {
        epsilon: eps,
        grad_inf_norm: ascent.grad_inf_norm(),
        dual_value: ascent.value,
        primal_value,
        primal_point,
        iterations: ascent.iterations,
        warmup_iterations,
        converged: ascent.converged(),
        termination: ascent.termination,
        trace: ascent.trace,
        dual_opt: ascent.lambda,
    })
}

/// Solves the Shannon-regularized LP through its dual, starting from `λ = 0`.
pub fn solve_lp(inst: &LpInstance, config: &SolverConfig) -> Result<SolveReport> {
    solve_from(inst, config, DVector::zeros(inst.num_cons()))
}

/// Solves the von Neumann-regularized SDP through its dual, starting from `λ = 0`.
pub fn solve_sdp(inst: &SdpInstance, config: &SolverConfig) -> Result<SolveReport> {
    solve_from(inst, config, DVector::zeros(inst.num_cons()))
}

/// Geometric ε schedule `ε_k = eps_start · ratio^k`, `k = 0..num_steps`.
#[derive(Clone, Debug, PartialEq)]
pub struct Schedule {
    eps_start: f64,
    ratio: f64,
    num_steps: usize,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule {
            eps_start: 1.0,
            ratio: 0.5,
            num_steps: 8,
        }
    }
}

impl Schedule {
    pub fn new(eps_start: f64, ratio: f64, num_steps: usize) -> Result<Self> {
        if !(eps_start.is_finite() && eps_start > 0.0) {
            return Err(Error::InvalidConfig(format!("schedule start must be positive, got {eps_start}")));
        }
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::InvalidConfig(format!("schedule ratio must lie in (0, 1), got {ratio}")));
        }
        if num_steps == 0 {
            return Err(Error::InvalidConfig("schedule needs at least one step".into()));
        }
        Ok(Schedule {
            eps_start,
            ratio,
            num_steps,
        })
    }

    pub fn epsilons(&self) -> Vec<f64> {
        (0..self.num_steps)
            .map(|k| self.eps_start * self.ratio.powi(k as i32))
            .collect()
    }
}

/// Solves along the schedule, warm-starting each ε from the previous dual
/// optimum. A step that fails or does not converge is recorded and the next
/// step starts cold from `λ = 0`.
pub fn solve_continuation<P: EntropicProgram + ?Sized>(
    program: &P,
    schedule: &Schedule,
    config: &SolverConfig,
) -> Vec<Result<SolveReport>> {
    let zeros = DVector::zeros(program.num_cons());
    let mut start = zeros.clone();
    let mut out = Vec::with_capacity(schedule.num_steps);
    for eps in schedule.epsilons() {
        let result = solve_from(program, &config.with_epsilon(eps), start.clone());
        start = match &result {
            Ok(report) if report.converged => report.dual_opt.clone(),
            _ => zeros.clone(),
        };
        out.push(result);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::DMatrix;
    use std::f64::consts::LN_2;

    #[test]
    fn concave_quadratic() {
        let target = DVector::from_vec(vec![1.0, 2.0]);
        let eval = |l: &DVector<f64>| {
            let diff = l - &target;
            (-diff.norm_squared(), -2.0 * diff)
        };
        let config = SolverConfig::default();
        let out = maximize_concave(eval, DVector::zeros(2), &config).unwrap();
        assert!(out.converged());
        assert!((out.lambda - target).amax() < 1e-8);
    }

    #[test]
    fn ill_conditioned_quadratic_is_monotone() {
        let scales = [1.0, 1e3, 1e-2, 50.0];
        let eval = |l: &DVector<f64>| {
            let v: f64 = l.iter().zip(scales).map(|(x, s)| -s * (x - 1.0).powi(2)).sum();
            let g = DVector::from_iterator(4, l.iter().zip(scales).map(|(x, s)| -2.0 * s * (x - 1.0)));
            (v, g)
        };
        let config = SolverConfig {
            grad_tol: 1e-10,
            ..Default::default()
        };
        let out = maximize_concave(eval, DVector::zeros(4), &config).unwrap();
        assert!(out.converged(), "{:?}", out.termination);
        assert!(out.trace.windows(2).all(|w| w[1].dual_value >= w[0].dual_value));
    }

    #[test]
    fn non_finite_start_is_an_error() {
        let eval = |_: &DVector<f64>| (f64::NEG_INFINITY, DVector::zeros(1));
        assert_eq!(
            maximize_concave(eval, DVector::zeros(1), &SolverConfig::default()).unwrap_err(),
            Error::NonFiniteStart
        );
    }

    #[test]
    fn iteration_cap_is_reported() {
        let eval = |l: &DVector<f64>| {
            let v: f64 = l.iter().enumerate().map(|(i, x)| -(i as f64 + 1.0) * x.powi(4)).sum::<f64>() + l[0];
            let mut g = DVector::from_iterator(3, l.iter().enumerate().map(|(i, x)| -4.0 * (i as f64 + 1.0) * x.powi(3)));
            g[0] += 1.0;
            (v, g)
        };
        let config = SolverConfig {
            max_iter: 2,
            grad_tol: 1e-14,
            ..Default::default()
        };
        let out = maximize_concave(eval, DVector::zeros(3), &config).unwrap();
        assert_eq!(out.termination, Termination::MaxIterations);
        assert_eq!(out.iterations, 2);
        assert_eq!(out.trace.len(), 3);
    }

    fn pair_lp() -> LpInstance {
        LpInstance::new(
            DVector::zeros(2),
            DMatrix::from_row_slice(1, 2, &[1.0, 1.0]),
            DVector::from_element(1, 1.0),
        )
        .unwrap()
    }

    #[test]
    fn lp_dual_analytic_maximizer() {
        let inst = pair_lp();
        let config = SolverConfig::lp(1.0);
        let eval = |l: &DVector<f64>| inst.dual(l, 1.0, config.exp_clamp);
        let out = maximize_concave(eval, DVector::zeros(1), &config).unwrap();
        assert_relative_eq!(out.lambda[0], 1.0 - LN_2, epsilon = 1e-8);
        assert_relative_eq!(out.value, -LN_2, epsilon = 1e-12);
    }

    #[test]
    fn solve_lp_pair() {
        let report = solve_lp(&pair_lp(), &SolverConfig::lp(1.0)).unwrap();
        assert!(report.converged);
        let x = report.primal_point.as_vector().unwrap();
        assert_relative_eq!(x[0], 0.5, epsilon = 1e-8);
        assert_relative_eq!(x[1], 0.5, epsilon = 1e-8);
        assert_relative_eq!(report.dual_value, -LN_2, epsilon = 1e-12);
        assert!(report.strong_duality_holds(1e-6));
    }

    #[test]
    fn solve_sdp_trace_constraint() {
        let inst = SdpInstance::new(
            crate::model::SymMatrix::zeros(2),
            vec![crate::model::SymMatrix::identity(2)],
            DVector::from_element(1, 1.0),
        )
        .unwrap();
        let report = solve_sdp(&inst, &SolverConfig::sdp(1.0)).unwrap();
        assert!(report.converged);
        let x = report.primal_point.as_matrix().unwrap();
        assert_relative_eq!(x.as_matrix(), &(DMatrix::identity(2, 2) * 0.5), epsilon = 1e-6);
        assert_relative_eq!(report.dual_value, -LN_2, epsilon = 1e-10);
    }

    #[test]
    fn warm_up_handles_overflowing_start() {
        // At λ = 0 the exponent is 1/1e-3 − 1 > 700.
        let inst = LpInstance::new(
            DVector::from_vec(vec![-1.0, 0.0]),
            DMatrix::from_row_slice(1, 2, &[1.0, 1.0]),
            DVector::from_element(1, 1.0),
        )
        .unwrap();
        let config = SolverConfig::lp(1e-3);
        assert!(!inst.dual(&DVector::zeros(1), 1e-3, 700.0).0.is_finite());
        let report = solve_lp(&inst, &config).unwrap();
        assert!(report.converged);
        assert!(report.warmup_iterations > 0);
        let x = report.primal_point.as_vector().unwrap();
        assert!((x[0] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn schedule_validation_and_values() {
        assert!(Schedule::new(1.0, 1.0, 3).is_err());
        assert!(Schedule::new(-1.0, 0.5, 3).is_err());
        assert!(Schedule::new(1.0, 0.5, 0).is_err());
        let s = Schedule::new(1.0, 0.5, 4).unwrap();
        assert_eq!(s.epsilons(), vec![1.0, 0.5, 0.25, 0.125]);
    }

    #[test]
    fn continuation_on_pair_converges_to_uniform() {
        let reports = solve_continuation(&pair_lp(), &Schedule::new(1.0, 0.1, 4).unwrap(), &SolverConfig::default());
        assert_eq!(reports.len(), 4);
        for r in reports {
            let r = r.unwrap();
            let x = r.primal_point.as_vector().unwrap();
            assert!((x[0] - 0.5).abs() < 1e-8 && (x[1] - 0.5).abs() < 1e-8);
        }
    }
}

//! Checks shared by the property suites and the acceptance harness. Each
//! returns `Err(description)` when the property fails on the given input.

#![allow(dead_code)]

use std::path::PathBuf;

use entreg::entropy::{lp_primal_objective, sdp_primal_objective};
use entreg::generate::SplitMix64;
use entreg::io::{parse_instance, Instance};
use entreg::lp_dual::{lp_dual_eval, lp_primal_point};
use entreg::model::{LpInstance, SdpInstance, SymMatrix};
use entreg::ot::ot_to_lp;
use entreg::sdp_dual::{sdp_dual_eval, sdp_primal_point, sym_eig, trace_bounds};
use nalgebra::{DMatrix, DVector};

pub type Check = Result<(), String>;

pub fn instances_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../instances")
}

pub fn bundled_path(name: &str) -> PathBuf {
    instances_dir().join(name)
}

pub fn bundled_instances() -> Vec<(String, Instance)> {
    let mut entries: Vec<_> = std::fs::read_dir(instances_dir())
        .expect("instances directory")
        .map(|e| e.expect("directory entry").path())
        .collect();
    entries.sort();
    entries
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p).expect("readable instance");
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            let inst = parse_instance(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
            (name, inst)
        })
        .collect()
}

/// Bundled LPs, with transport instances through their LP reduction.
pub fn bundled_lps() -> Vec<(String, LpInstance)> {
    bundled_instances()
        .into_iter()
        .filter_map(|(name, inst)| match inst {
            Instance::Lp(lp) => Some((name, lp)),
            Instance::Ot(ot) => Some((name, ot_to_lp(&ot).0)),
            Instance::Sdp(_) => None,
        })
        .collect()
}

pub fn bundled_sdps() -> Vec<(String, SdpInstance)> {
    bundled_instances()
        .into_iter()
        .filter_map(|(name, inst)| match inst {
            Instance::Sdp(sdp) => Some((name, sdp)),
            _ => None,
        })
        .collect()
}

pub fn uniform_vec(rng: &mut SplitMix64, len: usize, lo: f64, hi: f64) -> DVector<f64> {
    DVector::from_fn(len, |_, _| rng.uniform_in(lo, hi))
}

pub fn unit_vector(rng: &mut SplitMix64, len: usize) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(len, |_, _| rng.normal());
        let n = v.norm();
        if n > 1e-3 {
            return v / n;
        }
    }
}

pub fn random_symmetric(rng: &mut SplitMix64, n: usize) -> SymMatrix {
    let m = DMatrix::from_fn(n, n, |_, _| rng.normal());
    SymMatrix::from_matrix(m).unwrap()
}

pub fn random_psd(rng: &mut SplitMix64, n: usize) -> SymMatrix {
    let m = DMatrix::from_fn(n, n, |_, _| rng.normal());
    SymMatrix::from_matrix(m.tr_mul(&m)).unwrap()
}

fn lp_value(inst: &LpInstance, lambda: &DVector<f64>, eps: f64) -> f64 {
    lp_dual_eval(inst, lambda, eps).unwrap().value
}

fn sdp_value(inst: &SdpInstance, lambda: &DVector<f64>, eps: f64) -> f64 {
    sdp_dual_eval(inst, lambda, eps).unwrap().value
}

/// Central differences of `f` at `x` with step `h`.
pub fn central_difference(f: impl Fn(&DVector<f64>) -> f64, x: &DVector<f64>, h: f64) -> DVector<f64> {
    DVector::from_fn(x.len(), |k, _| {
        let mut plus = x.clone();
        let mut minus = x.clone();
        plus[k] += h;
        minus[k] -= h;
        (f(&plus) - f(&minus)) / (2.0 * h)
    })
}

/// `‖fd − ∇‖∞ / max(1, ‖∇‖∞)` for the LP dual.
pub fn lp_gradient_error(inst: &LpInstance, lambda: &DVector<f64>, eps: f64) -> f64 {
    let g = lp_dual_eval(inst, lambda, eps).unwrap().gradient;
    let fd = central_difference(|l| lp_value(inst, l, eps), lambda, 1e-6);
    (fd - &g).amax() / g.amax().max(1.0)
}

pub fn sdp_gradient_error(inst: &SdpInstance, lambda: &DVector<f64>, eps: f64) -> f64 {
    let g = sdp_dual_eval(inst, lambda, eps).unwrap().gradient;
    let fd = central_difference(|l| sdp_value(inst, l, eps), lambda, 1e-6);
    (fd - &g).amax() / g.amax().max(1.0)
}

pub fn lp_weak_duality(inst: &LpInstance, x0: &DVector<f64>, lambda: &DVector<f64>, eps: f64) -> Check {
    let g = lp_value(inst, lambda, eps);
    let p = lp_primal_objective(inst, x0, eps).unwrap();
    if g <= p + 1e-9 * (1.0 + p.abs()) {
        Ok(())
    } else {
        Err(format!("G = {g} exceeds primal {p}"))
    }
}

pub fn lp_concavity(inst: &LpInstance, l1: &DVector<f64>, l2: &DVector<f64>, t: f64, eps: f64) -> Check {
    let (g1, g2) = (lp_value(inst, l1, eps), lp_value(inst, l2, eps));
    let gm = lp_value(inst, &(l1 * t + l2 * (1.0 - t)), eps);
    let chord = t * g1 + (1.0 - t) * g2;
    let scale = 1.0 + g1.abs() + g2.abs();
    if gm >= chord - 1e-9 * scale {
        Ok(())
    } else {
        Err(format!("G(mix) = {gm} below chord {chord}"))
    }
}

/// `G(t·u)` strictly decreasing from `t = 100` to `t = 1000`.
pub fn lp_coercivity(inst: &LpInstance, u: &DVector<f64>, eps: f64) -> Check {
    let vals: Vec<f64> = [10.0, 100.0, 1000.0].iter().map(|t| lp_value(inst, &(u * *t), eps)).collect();
    if vals[1].is_finite() && vals[2] < vals[1] {
        Ok(())
    } else {
        Err(format!("G along ray: {vals:?}"))
    }
}

pub fn lp_positivity(inst: &LpInstance, lambda: &DVector<f64>, eps: f64) -> Check {
    let x = lp_primal_point(inst, lambda, eps).unwrap();
    match x.iter().position(|&v| !(v > 0.0 && v.is_finite())) {
        None => Ok(()),
        Some(i) => Err(format!("x[{i}] = {}", x[i])),
    }
}

/// `ε Σ x*(λ)` against `(ε/e) Σ exp((Aᵀλ − c)/ε)`.
pub fn lp_scale_identity(inst: &LpInstance, lambda: &DVector<f64>, eps: f64) -> Check {
    let x = lp_primal_point(inst, lambda, eps).unwrap();
    let lhs = eps * x.sum();
    let reduced = inst.matrix().tr_mul(lambda) - inst.cost();
    let rhs = eps / std::f64::consts::E * reduced.iter().map(|r| (r / eps).exp()).sum::<f64>();
    if (lhs - rhs).abs() <= 1e-12 * lhs.abs().max(rhs.abs()) {
        Ok(())
    } else {
        Err(format!("{lhs} vs {rhs}"))
    }
}

pub fn sdp_weak_duality(inst: &SdpInstance, x0: &SymMatrix, lambda: &DVector<f64>, eps: f64) -> Check {
    let g = sdp_value(inst, lambda, eps);
    let p = sdp_primal_objective(inst, x0, eps).unwrap();
    if g <= p + 1e-9 * (1.0 + p.abs()) {
        Ok(())
    } else {
        Err(format!("Ĝ = {g} exceeds primal {p}"))
    }
}

pub fn sdp_concavity(inst: &SdpInstance, l1: &DVector<f64>, l2: &DVector<f64>, t: f64, eps: f64) -> Check {
    let (g1, g2) = (sdp_value(inst, l1, eps), sdp_value(inst, l2, eps));
    let gm = sdp_value(inst, &(l1 * t + l2 * (1.0 - t)), eps);
    let chord = t * g1 + (1.0 - t) * g2;
    let scale = 1.0 + g1.abs() + g2.abs();
    if gm >= chord - 1e-9 * scale {
        Ok(())
    } else {
        Err(format!("Ĝ(mix) = {gm} below chord {chord}"))
    }
}

pub fn sdp_coercivity(inst: &SdpInstance, u: &DVector<f64>, eps: f64) -> Check {
    let vals: Vec<f64> = [10.0, 100.0, 1000.0].iter().map(|t| sdp_value(inst, &(u * *t), eps)).collect();
    if vals[1].is_finite() && vals[2] < vals[1] {
        Ok(())
    } else {
        Err(format!("Ĝ along ray: {vals:?}"))
    }
}

/// `X(λ) ≻ 0` up to rounding: an eigendecomposition only resolves the
/// spectrum to `n·ulp·λ_max`, so smaller eigenvalues may come back at that
/// level with either sign.
pub fn sdp_positivity(inst: &SdpInstance, lambda: &DVector<f64>, eps: f64) -> Check {
    let x = sdp_primal_point(inst, lambda, eps).unwrap();
    let values = sym_eig(&x).values;
    let (min, max) = (values[0], values[values.len() - 1]);
    let resolution = 64.0 * f64::EPSILON * x.dim() as f64 * max;
    if max > 0.0 && max.is_finite() && min > -resolution {
        Ok(())
    } else {
        Err(format!("eigenvalues in [{min:e}, {max:e}]"))
    }
}

/// The LP with `c = diag C`, rows `diag A_k` and its diagonal SDP, or `None`
/// when the rows are linearly dependent.
pub fn diagonal_pair(cost: &[f64], rows: &[Vec<f64>], rhs: &[f64]) -> Option<(LpInstance, SdpInstance)> {
    let (d, m) = (cost.len(), rows.len());
    let lp = LpInstance::new(
        DVector::from_column_slice(cost),
        DMatrix::from_fn(m, d, |i, j| rows[i][j]),
        DVector::from_column_slice(rhs),
    )
    .ok()?;
    let sdp = SdpInstance::new(
        SymMatrix::from_diagonal(cost),
        rows.iter().map(|r| SymMatrix::from_diagonal(r)).collect(),
        DVector::from_column_slice(rhs),
    )
    .ok()?;
    Some((lp, sdp))
}

pub fn diagonal_equivalence(lp: &LpInstance, sdp: &SdpInstance, lambda: &DVector<f64>, eps: f64) -> Check {
    let a = lp_dual_eval(lp, lambda, eps).unwrap();
    let b = sdp_dual_eval(sdp, lambda, eps).unwrap();
    let scale = 1.0 + a.value.abs();
    let gscale = 1.0 + a.gradient.amax();
    if (a.value - b.value).abs() <= 1e-8 * scale && (a.gradient - b.gradient).amax() <= 1e-8 * gscale {
        Ok(())
    } else {
        Err(format!("LP {} vs SDP {}", a.value, b.value))
    }
}

pub fn trace_sandwich(a: &SymMatrix, b: &SymMatrix) -> Check {
    let (lo, hi) = trace_bounds(a, b).map_err(|e| e.to_string())?;
    let t = a.trace_product(b);
    let tol = 1e-9 * (1.0 + a.frobenius_norm() * b.frobenius_norm());
    if lo <= t + tol && t <= hi + tol {
        Ok(())
    } else {
        Err(format!("{lo} <= {t} <= {hi} violated"))
    }
}

/// A random SDP instance small enough for exhaustive probing, with its
/// feasible point.
pub fn small_sdp(seed: u64, n: usize, m: usize) -> (SdpInstance, SymMatrix) {
    entreg::generate::generate_sdp(seed, n, m.min(n * (n + 1) / 2), true).unwrap()
}

pub fn small_lp(seed: u64, d: usize, m: usize) -> (LpInstance, DVector<f64>) {
    entreg::generate::generate_lp(seed, d, m.min(d), true).unwrap()
}

/// Entrywise sup-distance to the closest point of `set`.
pub fn distance_to_set(x: &DVector<f64>, set: &[DVector<f64>]) -> f64 {
    set.iter().map(|v| (x - v).amax()).fold(f64::INFINITY, f64::min)
}

pub fn eig_min(m: &SymMatrix) -> f64 {
    sym_eig(m).values[0]
}

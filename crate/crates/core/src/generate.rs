//! Seeded random instances.
//!
//! All randomness comes from [`SplitMix64`] so instances are reproducible
//! across platforms and can be regenerated by other implementations:
//!
//! * `next_u64`: `state += 0x9E3779B97F4A7C15; z = state;`
//!   `z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9; z = (z ^ (z >> 27)) * 0x94D049BB133111EB;`
//!   `return z ^ (z >> 31)` (wrapping arithmetic).
//! * `uniform`: `(next_u64 >> 11) · 2⁻⁵³`, in `[0, 1)`.
//! * `normal`: Box–Muller with `u1 = 1 − uniform()`, `u2 = uniform()`,
//!   returning `sqrt(−2 ln u1) · cos(2π u2)`; one normal per two uniforms.
//!
//! Draw order is part of the format and is documented on each generator.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::model::{LpInstance, OtInstance, SdpInstance, SymMatrix};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn normal(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// Seed of the independent stream used for retry `attempt` (0 is the
    /// caller's seed itself).
    pub fn substream_seed(seed: u64, attempt: u64) -> u64 {
        if attempt == 0 {
            seed
        } else {
            SplitMix64::new(seed ^ attempt.wrapping_mul(GOLDEN_GAMMA).rotate_left(17)).next_u64()
        }
    }
}

/// Random feasible LP with a strictly positive feasible point.
///
/// Draws, in order: the entries of `A` row by row (skipping row 0 when
/// `with_compactness_row`, which is then all ones), `d` cost entries, and `d`
/// entries of `x₀` uniform in `[0.5, 1.5)`. `A` and `c` are standard normal and
/// `b = A x₀`. The all-ones row bounds the feasible set, so the LP has a finite
/// optimum.
pub fn generate_lp(seed: u64, d: usize, m: usize, with_compactness_row: bool) -> Result<(LpInstance, DVector<f64>)> {
    if m == 0 || d == 0 {
        return Err(Error::Generator("d and m must be positive".into()));
    }
    if m > d {
        return Err(Error::Generator(format!("m = {m} exceeds d = {d}")));
    }
    let mut rng = SplitMix64::new(seed);
    let mut a = DMatrix::zeros(m, d);
    for i in 0..m {
        for j in 0..d {
            a[(i, j)] = if i == 0 && with_compactness_row { 1.0 } else { rng.normal() };
        }
    }
    let c = DVector::from_fn(d, |_, _| rng.normal());
    let x0 = DVector::from_fn(d, |_, _| rng.uniform_in(0.5, 1.5));
    let b = &a * &x0;
    let inst = LpInstance::new(c, a, b)?;
    Ok((inst, x0))
}

/// Symmetric matrix with entries `N(0, 1)/√n`, drawn over the upper triangle
/// row by row (diagonal included) and mirrored.
fn random_symmetric(rng: &mut SplitMix64, n: usize) -> SymMatrix {
    let scale = 1.0 / (n as f64).sqrt();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = rng.normal() * scale;
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    SymMatrix::from_matrix(m).expect("square")
}

/// Random SDP with a positive definite feasible point.
///
/// Draws, in order: `C`, then each random `A_k` (row 0 is the identity when
/// `with_trace_row`), then a full `n×n` standard-normal `M`; `X₀ = MᵀM/n + 0.1 I`
/// and `b_k = Tr(A_k X₀)`. If the `A_k` come out linearly dependent the whole
/// draw is repeated on [`SplitMix64::substream_seed`], at most 10 attempts.
pub fn generate_sdp(seed: u64, n: usize, m: usize, with_trace_row: bool) -> Result<(SdpInstance, SymMatrix)> {
    if n == 0 || m == 0 {
        return Err(Error::Generator("n and m must be positive".into()));
    }
    if m > n * (n + 1) / 2 {
        return Err(Error::Generator(format!("m = {m} exceeds n(n+1)/2 = {}", n * (n + 1) / 2)));
    }
    let mut last_err = None;
    for attempt in 0..10u64 {
        let mut rng = SplitMix64::new(SplitMix64::substream_seed(seed, attempt));
        let cost = random_symmetric(&mut rng, n);
        let cons: Vec<SymMatrix> = (0..m)
            .map(|k| {
                if k == 0 && with_trace_row {
                    SymMatrix::identity(n)
                } else {
                    random_symmetric(&mut rng, n)
                }
            })
            .collect();
        let factor = DMatrix::from_fn(n, n, |_, _| rng.normal());
        let x0 = SymMatrix::from_matrix(factor.tr_mul(&factor) / n as f64 + DMatrix::identity(n, n) * 0.1)
            .expect("square");
        let rhs = DVector::from_iterator(m, cons.iter().map(|a| a.trace_product(&x0)));
        match SdpInstance::new(cost, cons, rhs) {
            Ok(inst) => return Ok((inst, x0)),
            Err(e) => last_err = Some(e),
        }
    }
    Err(Error::Generator(format!(
        "could not draw independent constraint matrices in 10 attempts: {}",
        last_err.map(|e| e.to_string()).unwrap_or_default()
    )))
}

/// Random OT instance: costs uniform in `[0, 1)` row by row, then `n1` source
/// and `n2` target weights uniform in `[0.5, 1.5)`, each normalized to sum 1.
pub fn generate_ot(seed: u64, n1: usize, n2: usize) -> Result<OtInstance> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::Generator("n1 and n2 must be positive".into()));
    }
    let mut rng = SplitMix64::new(seed);
    let mut cost = DMatrix::zeros(n1, n2);
    for i in 0..n1 {
        for j in 0..n2 {
            cost[(i, j)] = rng.uniform();
        }
    }
    let mut weights = |len: usize| {
        let v = DVector::from_fn(len, |_, _| rng.uniform_in(0.5, 1.5));
        let total = v.sum();
        v / total
    };
    let p = weights(n1);
    let q = weights(n2);
    OtInstance::new(cost, p, q)
}

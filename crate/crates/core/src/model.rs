//! Problem data shared by every solver in the crate.
//!
//! All instances are validated on construction and immutable afterwards, so
//! they can be shared read-only between threads.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Relative tolerance used for symmetry checks and rank/independence checks.
pub const SYMMETRY_TOL: f64 = 1e-12;
pub const RANK_TOL: f64 = 1e-10;
/// Smallest accepted regularization parameter.
pub const MIN_EPSILON: f64 = 1e-9;
/// Cap on exponents fed to `exp`, just below the f64 overflow threshold.
pub const DEFAULT_EXP_CLAMP: f64 = 700.0;

/// Dense real symmetric matrix. Symmetry is exact: construction averages the
/// input with its transpose.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix(DMatrix<f64>);

impl SymMatrix {
    /// Symmetrizes `m` as `(m + mᵀ)/2`.
    pub fn from_matrix(mut m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::dims("symmetric matrix columns", m.nrows(), m.ncols()));
        }
        let n = m.nrows();
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
                m[(i, j)] = avg;
                m[(j, i)] = avg;
            }
        }
        Ok(SymMatrix(m))
    }

    /// Like [`SymMatrix::from_matrix`] but rejects inputs whose asymmetry
    /// exceeds `SYMMETRY_TOL` relative to `max(1, ‖m‖_F)`.
    pub fn from_matrix_checked(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::dims("symmetric matrix columns", m.nrows(), m.ncols()));
        }
        let asym = (&m - m.transpose()).norm();
        let scale = m.norm().max(1.0);
        if asym > SYMMETRY_TOL * scale {
            return Err(Error::InvalidInstance(format!(
                "matrix asymmetry {asym:e} exceeds tolerance {:e}",
                SYMMETRY_TOL * scale
            )));
        }
        Self::from_matrix(m)
    }

    pub fn from_row_slice(n: usize, data: &[f64]) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::dims("symmetric matrix entries", n * n, data.len()));
        }
        Self::from_matrix(DMatrix::from_row_slice(n, n, data))
    }

    pub fn zeros(n: usize) -> Self {
        SymMatrix(DMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        SymMatrix(DMatrix::identity(n, n))
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        SymMatrix(DMatrix::from_diagonal(&DVector::from_column_slice(diag)))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    /// `Tr(self · other)`, which for symmetric matrices is the entrywise inner product.
    pub fn trace_product(&self, other: &SymMatrix) -> f64 {
        self.0.dot(&other.0)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn diagonal(&self) -> Vec<f64> {
        self.0.diagonal().iter().copied().collect()
    }

    pub fn scale(&self, s: f64) -> SymMatrix {
        SymMatrix(&self.0 * s)
    }

    /// `self + s·other`, symmetric by construction.
    pub fn add_scaled(&self, s: f64, other: &SymMatrix) -> SymMatrix {
        SymMatrix(&self.0 + &other.0 * s)
    }

    /// `q · self · qᵀ` for an arbitrary square `q`.
    pub fn congruence(&self, q: &DMatrix<f64>) -> SymMatrix {
        SymMatrix::from_matrix(q * &self.0 * q.transpose()).expect("square by construction")
    }
}

impl std::ops::Index<(usize, usize)> for SymMatrix {
    type Output = f64;
    fn index(&self, idx: (usize, usize)) -> &f64 {
        &self.0[idx]
    }
}

fn all_finite<'a>(it: impl IntoIterator<Item = &'a f64>) -> bool {
    it.into_iter().all(|v| v.is_finite())
}

/// Ratio of the smallest to the largest singular value of `a` (rows ≤ cols).
fn row_rank_ratio(a: &DMatrix<f64>) -> f64 {
    // QR of the tall transpose first: the SVD then runs on an m×m factor.
    let r = a.transpose().qr().r();
    let sv = r.singular_values();
    let max = sv.max();
    if max <= 0.0 {
        return 0.0;
    }
    sv.min() / max
}

/// Standard-form LP data: `min cᵀx` subject to `Ax = b`, `x ≥ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct LpInstance {
    cost: DVector<f64>,
    matrix: DMatrix<f64>,
    rhs: DVector<f64>,
}

impl LpInstance {
    /// Validates dimensions, finiteness, `m ≤ d` and full row rank of `A`.
    pub fn new(cost: DVector<f64>, matrix: DMatrix<f64>, rhs: DVector<f64>) -> Result<Self> {
        let (m, d) = matrix.shape();
        if d == 0 || m == 0 {
            return Err(Error::InvalidInstance("LP needs at least one variable and one constraint".into()));
        }
        if cost.len() != d {
            return Err(Error::dims("cost vector", d, cost.len()));
        }
        if rhs.len() != m {
            return Err(Error::dims("right-hand side", m, rhs.len()));
        }
        if m > d {
            return Err(Error::InvalidInstance(format!(
                "standard form requires m <= d, got m = {m}, d = {d}"
            )));
        }
        if !(all_finite(cost.iter()) && all_finite(matrix.iter()) && all_finite(rhs.iter())) {
            return Err(Error::InvalidInstance("non-finite entry in LP data".into()));
        }
        let ratio = row_rank_ratio(&matrix);
        if ratio <= RANK_TOL {
            return Err(Error::InvalidInstance(format!(
                "constraint matrix is not full row rank (singular value ratio {ratio:e})"
            )));
        }
        Ok(LpInstance { cost, matrix, rhs })
    }

    pub fn num_vars(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn num_cons(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn cost(&self) -> &DVector<f64> {
        &self.cost
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn rhs(&self) -> &DVector<f64> {
        &self.rhs
    }
}

/// Standard-form SDP data: `min Tr(C·X)` subject to `Tr(A_k·X) = b_k`, `X ⪰ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct SdpInstance {
    cost: SymMatrix,
    constraints: Vec<SymMatrix>,
    rhs: DVector<f64>,
}

impl SdpInstance {
    /// Validates dimensions, finiteness and linear independence of the `A_k`
    /// (so that `λ ↦ Σ λ_k A_k` is injective).
    pub fn new(cost: SymMatrix, constraints: Vec<SymMatrix>, rhs: DVector<f64>) -> Result<Self> {
        let n = cost.dim();
        let m = constraints.len();
        if n == 0 || m == 0 {
            return Err(Error::InvalidInstance("SDP needs n >= 1 and at least one constraint".into()));
        }
        if rhs.len() != m {
            return Err(Error::dims("right-hand side", m, rhs.len()));
        }
        for a in &constraints {
            if a.dim() != n {
                return Err(Error::dims("constraint matrix", n, a.dim()));
            }
        }
        if !(cost.is_finite() && constraints.iter().all(SymMatrix::is_finite) && all_finite(rhs.iter())) {
            return Err(Error::InvalidInstance("non-finite entry in SDP data".into()));
        }
        let gram = DMatrix::from_fn(m, m, |i, j| constraints[i].trace_product(&constraints[j]));
        let eig = gram.symmetric_eigenvalues();
        let (lo, hi) = (eig.min(), eig.max());
        if hi <= 0.0 || lo <= RANK_TOL * hi {
            return Err(Error::InvalidInstance(format!(
                "constraint matrices are linearly dependent (Gram eigenvalue ratio {:e})",
                if hi > 0.0 { lo / hi } else { 0.0 }
            )));
        }
        Ok(SdpInstance {
            cost,
            constraints,
            rhs,
        })
    }

    pub fn dim(&self) -> usize {
        self.cost.dim()
    }

    pub fn num_cons(&self) -> usize {
        self.constraints.len()
    }

    pub fn cost(&self) -> &SymMatrix {
        &self.cost
    }

    pub fn constraints(&self) -> &[SymMatrix] {
        &self.constraints
    }

    pub fn rhs(&self) -> &DVector<f64> {
        &self.rhs
    }

    /// `𝒜*λ = Σ_k λ_k A_k`.
    pub fn adjoint(&self, lambda: &DVector<f64>) -> SymMatrix {
        let mut acc = DMatrix::zeros(self.dim(), self.dim());
        for (lk, ak) in lambda.iter().zip(&self.constraints) {
            acc += ak.as_matrix() * *lk;
        }
        SymMatrix(acc)
    }

    /// `𝒜(X)_k = Tr(A_k·X)`.
    pub fn apply(&self, x: &SymMatrix) -> DVector<f64> {
        DVector::from_iterator(self.num_cons(), self.constraints.iter().map(|a| a.trace_product(x)))
    }
}

/// Discrete optimal transport between two probability vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct OtInstance {
    cost: DMatrix<f64>,
    source: DVector<f64>,
    target: DVector<f64>,
}

impl OtInstance {
    pub const MASS_TOL: f64 = 1e-12;

    pub fn new(cost: DMatrix<f64>, source: DVector<f64>, target: DVector<f64>) -> Result<Self> {
        let (n1, n2) = cost.shape();
        if n1 == 0 || n2 == 0 {
            return Err(Error::InvalidInstance("empty cost matrix".into()));
        }
        if source.len() != n1 {
            return Err(Error::dims("source marginal", n1, source.len()));
        }
        if target.len() != n2 {
            return Err(Error::dims("target marginal", n2, target.len()));
        }
        if !(all_finite(cost.iter()) && all_finite(source.iter()) && all_finite(target.iter())) {
            return Err(Error::InvalidInstance("non-finite entry in OT data".into()));
        }
        if source.iter().chain(target.iter()).any(|&v| v <= 0.0) {
            return Err(Error::InvalidInstance("marginals must be strictly positive".into()));
        }
        for (name, v) in [("source", &source), ("target", &target)] {
            let mass = v.sum();
            if (mass - 1.0).abs() > Self::MASS_TOL {
                return Err(Error::InvalidInstance(format!("{name} marginal sums to {mass}, expected 1")));
            }
        }
        Ok(OtInstance {
            cost,
            source,
            target,
        })
    }

    pub fn rows(&self) -> usize {
        self.cost.nrows()
    }

    pub fn cols(&self) -> usize {
        self.cost.ncols()
    }

    pub fn cost(&self) -> &DMatrix<f64> {
        &self.cost
    }

    pub fn source(&self) -> &DVector<f64> {
        &self.source
    }

    pub fn target(&self) -> &DVector<f64> {
        &self.target
    }
}

/// Parameters for the dual ascent.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub epsilon: f64,
    /// Termination threshold on the sup-norm of the dual gradient.
    pub grad_tol: f64,
    pub max_iter: usize,
    pub lbfgs_memory: usize,
    pub wolfe_c1: f64,
    pub wolfe_c2: f64,
    pub exp_clamp: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            epsilon: 0.01,
            grad_tol: 1e-8,
            max_iter: 500,
            lbfgs_memory: 10,
            wolfe_c1: 1e-4,
            wolfe_c2: 0.9,
            exp_clamp: DEFAULT_EXP_CLAMP,
        }
    }
}

impl SolverConfig {
    /// Defaults for LP duals at the given regularization.
    pub fn lp(epsilon: f64) -> Self {
        SolverConfig {
            epsilon,
            ..Default::default()
        }
    }

    /// Defaults for SDP duals; the gradient tolerance is looser because every
    /// evaluation goes through an eigendecomposition.
    pub fn sdp(epsilon: f64) -> Self {
        SolverConfig {
            epsilon,
            grad_tol: 1e-6,
            ..Default::default()
        }
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Self {
        SolverConfig {
            epsilon,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.epsilon.is_finite() && self.epsilon >= MIN_EPSILON) {
            return bad(format!("epsilon must be a finite value >= {MIN_EPSILON:e}, got {}", self.epsilon));
        }
        if !(self.grad_tol.is_finite() && self.grad_tol > 0.0) {
            return bad(format!("grad_tol must be positive, got {}", self.grad_tol));
        }
        if self.max_iter == 0 {
            return bad("max_iter must be positive".into());
        }
        if self.lbfgs_memory == 0 {
            return bad("lbfgs_memory must be positive".into());
        }
        if !(0.0 < self.wolfe_c1 && self.wolfe_c1 < self.wolfe_c2 && self.wolfe_c2 < 1.0) {
            return bad(format!(
                "Wolfe constants must satisfy 0 < c1 < c2 < 1, got c1 = {}, c2 = {}",
                self.wolfe_c1, self.wolfe_c2
            ));
        }
        if !(self.exp_clamp.is_finite() && self.exp_clamp > 0.0) {
            return bad(format!("exp_clamp must be positive, got {}", self.exp_clamp));
        }
        Ok(())
    }
}

/// Primal iterate recovered from the dual optimum.
#[derive(Clone, Debug, PartialEq)]
pub enum PrimalPoint {
    Vector(DVector<f64>),
    Matrix(SymMatrix),
}

impl PrimalPoint {
    pub fn as_vector(&self) -> Option<&DVector<f64>> {
        match self {
            PrimalPoint::Vector(v) => Some(v),
            PrimalPoint::Matrix(_) => None,
        }
    }

    pub fn as_matrix(&self) -> Option<&SymMatrix> {
        match self {
            PrimalPoint::Matrix(m) => Some(m),
            PrimalPoint::Vector(_) => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceEntry {
    pub iteration: usize,
    pub dual_value: f64,
    pub grad_inf_norm: f64,
}

/// Why the ascent stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    Converged,
    MaxIterations,
    /// No step satisfying the strong Wolfe conditions was found.
    LineSearchFailed,
}

impl Termination {
    pub fn as_str(&self) -> &'static str {
        match self {
            Termination::Converged => "converged",
            Termination::MaxIterations => "max_iterations",
            Termination::LineSearchFailed => "line_search_failed",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub epsilon: f64,
    pub dual_opt: DVector<f64>,
    pub primal_point: PrimalPoint,
    pub dual_value: f64,
    /// Regularized primal objective at `primal_point`.
    pub primal_value: f64,
    pub grad_inf_norm: f64,
    pub iterations: usize,
    /// Iterations spent on the larger-epsilon warm-up when the dual was not
    /// finite at the starting point; zero otherwise.
    pub warmup_iterations: usize,
    pub converged: bool,
    pub termination: Termination,
    pub trace: Vec<TraceEntry>,
}

impl SolveReport {
    pub fn duality_gap(&self) -> f64 {
        (self.primal_value - self.dual_value).abs()
    }

    /// Strong duality at the reported optimum, relative to `1 + |dual_value|`.
    pub fn strong_duality_holds(&self, rel_tol: f64) -> bool {
        self.duality_gap() <= rel_tol * (1.0 + self.dual_value.abs())
    }
}

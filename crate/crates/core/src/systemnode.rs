//! Trace systems `(E₀, U, L, K)` for `G = D = d/dx` on `(0, 1)` and their
//! boundary relations `h` on `BD(G)`.
//!
//! A trace system is given by a subspace `V ⊆ ℂ²` of admissible endpoint
//! pairs, `E₀ = {u ∈ H¹ : (u(0), u(1)) ∈ V}`, and a matrix `M` with
//! `K u = M (u(0), u(1))`. The condition `K⋄Ku − L⋄w ∈ E` splits into the
//! regular part `w'` and the endpoint coefficients
//! `γ = M†M ξ_u + (w(0), −w(1))`, which must annihilate `V`.

use nalgebra::Complex;
use rand::Rng;

use crate::arens::ArensDecomposition;
use crate::bdspace::{interpolation_matrix, projection_matrix, swap_matrix, BdKind, BoundarySpace, TestFunction1D};
use crate::error::{Error, Result};
use crate::hilbert::{HilbertSpace, Subspace};
use crate::linalg;
use crate::quadrature::Quadrature01;
use crate::relation::LinearRelation;
use crate::scalar::{CMatrix, CVector, Cx, Real};

/// Tolerance for trace-form and graph membership tests.
pub const MEMBERSHIP_TOL: f64 = 1e-10;

/// The boundary data space `BD(G)` in `(cosh, sinh)` coordinates.
pub fn bd_space<T: Real>() -> HilbertSpace<T> {
    BoundarySpace::new(BdKind::G).hilbert()
}

fn cvec2<T: Real>(a: Cx<T>, b: Cx<T>) -> CVector<T> {
    CVector::from_vec(vec![a, b])
}

fn block_diag<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    let mut out = CMatrix::zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut(a.shape(), b.shape()).copy_from(b);
    out
}

fn vstack<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    let mut out = CMatrix::zeros(a.nrows() + b.nrows(), a.ncols());
    out.rows_mut(0, a.nrows()).copy_from(a);
    out.rows_mut(a.nrows(), b.nrows()).copy_from(b);
    out
}

fn hstack<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    let mut out = CMatrix::zeros(a.nrows(), a.ncols() + b.ncols());
    out.columns_mut(0, a.ncols()).copy_from(a);
    out.columns_mut(a.ncols(), b.ncols()).copy_from(b);
    out
}

/// `diag(1, −1)`: the sign pattern of the endpoint terms of integration by parts.
fn flux_signs<T: Real>() -> CMatrix<T> {
    let z = Complex::new(T::zero(), T::zero());
    CMatrix::from_row_slice(2, 2, &[Complex::new(T::one(), T::zero()), z, z, Complex::new(-T::one(), T::zero())])
}

/// Rows with orthonormal rows spanning the same row space.
fn orthonormal_rows<T: Real>(rows: &CMatrix<T>) -> CMatrix<T> {
    linalg::column_space(&rows.adjoint()).adjoint()
}

/// Endpoint traces `(f(0), f(1))` as a vector.
pub fn traces<T: Real>(f: &TestFunction1D<T>) -> CVector<T> {
    let (a, b) = f.traces();
    cvec2(a, b)
}

/// `(u(0), u(1), w(0), w(1))`.
pub fn trace_quadruple<T: Real>(u: &TestFunction1D<T>, w: &TestFunction1D<T>) -> CVector<T> {
    let (u0, u1) = u.traces();
    let (w0, w1) = w.traces();
    CVector::from_vec(vec![u0, u1, w0, w1])
}

#[derive(Debug, Clone)]
pub struct TraceSystem<T: Real> {
    v: Subspace<T>,
    m: CMatrix<T>,
}

impl<T: Real> TraceSystem<T> {
    /// `V` spanned by the independent columns of `v_basis` (2 rows), `K = M·ξ`.
    pub fn new(v_basis: &CMatrix<T>, m: CMatrix<T>) -> Result<Self> {
        if v_basis.nrows() != 2 {
            return Err(Error::MalformedScenario(format!("V basis vectors have {} entries, expected 2", v_basis.nrows())));
        }
        if linalg::rank(v_basis) != v_basis.ncols() {
            return Err(Error::MalformedScenario("V basis is rank deficient".into()));
        }
        if m.ncols() != 2 {
            return Err(Error::MalformedScenario(format!("M has {} columns, expected 2", m.ncols())));
        }
        let v = Subspace::span(&HilbertSpace::standard(2), v_basis)?;
        Ok(Self { v, m })
    }

    /// `E₀ = H¹₀`, no `K`.
    pub fn dirichlet() -> Self {
        Self::new(&CMatrix::zeros(2, 0), CMatrix::zeros(0, 2)).expect("valid")
    }

    /// `E₀ = H¹`, no `K`.
    pub fn neumann() -> Self {
        Self::new(&CMatrix::identity(2, 2), CMatrix::zeros(0, 2)).expect("valid")
    }

    /// `E₀ = H¹`, `K u = √k·u(1)`.
    pub fn robin(k: T) -> Self {
        let m = CMatrix::from_row_slice(1, 2, &[Complex::new(T::zero(), T::zero()), Complex::new(k.sqrt(), T::zero())]);
        Self::new(&CMatrix::identity(2, 2), m).expect("valid")
    }

    /// `E₀ = H¹`, `K u = (u(0), u(1))`; the impedance system.
    pub fn full_trace() -> Self {
        Self::new(&CMatrix::identity(2, 2), CMatrix::identity(2, 2)).expect("valid")
    }

    pub fn v(&self) -> &Subspace<T> {
        &self.v
    }

    pub fn m(&self) -> &CMatrix<T> {
        &self.m
    }

    pub fn u_dim(&self) -> usize {
        self.m.nrows()
    }

    /// Same `V`, `M` replaced by `unitary · M`.
    pub fn rebased(&self, unitary: &CMatrix<T>) -> Result<Self> {
        if unitary.nrows() != self.u_dim() || unitary.ncols() != self.u_dim() {
            return Err(Error::DimensionMismatch("rebasing matrix does not match dim U".into()));
        }
        Ok(Self { v: self.v.clone(), m: unitary * &self.m })
    }

    /// `γ = M†M ξ_u + (w(0), −w(1))`.
    pub fn gamma(&self, xi_u: &CVector<T>, xi_w: &CVector<T>) -> CVector<T> {
        self.m.adjoint() * (&self.m * xi_u) + flux_signs() * xi_w
    }

    /// Linear constraints on `(ξ_u, ξ_w)` equivalent to characterization (i).
    pub fn trace_form_constraints(&self) -> CMatrix<T> {
        let basis = self.v.basis();
        let perp = self.v.complement();
        let first = hstack(&perp.basis().adjoint(), &CMatrix::zeros(perp.dim(), 2));
        let mtm = self.m.adjoint() * &self.m;
        let second = hstack(&(basis.adjoint() * mtm), &(basis.adjoint() * flux_signs()));
        vstack(&first, &second)
    }

    /// Characterization (i): `ξ_u ∈ V` and `γ ∈ V⊥`.
    pub fn satisfies(&self, xi_u: &CVector<T>, xi_w: &CVector<T>) -> bool {
        let tol = T::tol(MEMBERSHIP_TOL);
        if !self.v.contains(xi_u, tol) {
            return false;
        }
        let mnorm = linalg::spectral_norm(&self.m);
        let scale = T::one().max(mnorm * mnorm * xi_u.norm() + xi_w.norm());
        let residual = self.v.basis().adjoint() * self.gamma(xi_u, xi_w);
        residual.norm() <= tol * scale
    }

    /// A random element of `E₀`: a test function with traces projected onto `V`.
    pub fn sample_e0(&self, rng: &mut impl Rng) -> TestFunction1D<T> {
        let f = TestFunction1D::random(rng);
        let xi = traces(&f);
        let target = self.v.project(&xi);
        f.shift_traces(target[0] - xi[0], target[1] - xi[1])
    }

    /// `‖K u‖²` for `u` with traces `xi`.
    pub fn k_norm_squared(&self, xi: &CVector<T>) -> T {
        (&self.m * xi).norm_squared()
    }
}

#[derive(Debug, Clone)]
pub struct HypothesisReport<T: Real> {
    pub v_dim: usize,
    pub u_dim: usize,
    /// `sup |ξ_u|² / ‖u‖²_{H¹}` over `H¹`.
    pub trace_constant: T,
    /// Smallest and largest sampled `‖u‖²_{E₀} / ‖u‖²_{H¹}`.
    pub observed: (T, T),
    /// Admissible range `[1, 1 + ‖M‖²·trace_constant]`.
    pub bounds: (T, T),
    pub samples: usize,
    /// `ξ = 0 ∈ V`, so `H¹₀ ⊆ E₀` and `G₀ ⊆ L ⊆ G`.
    pub contains_g0: bool,
    pub valid: bool,
}

/// `sup_{u ∈ H¹} (|u(0)|² + |u(1)|²) / ‖u‖²_{H¹}`, attained on `BD(G)`.
pub fn trace_constant<T: Real>() -> T {
    let n = bd_space::<T>().operator_norm(&interpolation_matrix(), &HilbertSpace::standard(2));
    n * n
}

/// Norm equivalence of `E₀` (graph norm of `(L, K)`) and `H¹` on 64 samples.
pub fn check_hypothesis<T: Real>(ts: &TraceSystem<T>) -> HypothesisReport<T> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
    check_hypothesis_with(ts, &mut rng, 64)
}

pub fn check_hypothesis_with<T: Real>(ts: &TraceSystem<T>, rng: &mut impl Rng, samples: usize) -> HypothesisReport<T> {
    let q = Quadrature01::new();
    let c_tr = trace_constant::<T>();
    let mnorm = linalg::spectral_norm(ts.m());
    let bounds = (T::one(), T::one() + mnorm * mnorm * c_tr);
    let mut lo = T::max_value().expect("bounded type");
    let mut hi = T::zero();
    for _ in 0..samples {
        let u = ts.sample_e0(rng);
        let h1 = u.graph_inner(&u, &q).re;
        if h1 <= T::zero() {
            continue;
        }
        let ratio = (h1 + ts.k_norm_squared(&traces(&u))) / h1;
        lo = lo.min(ratio);
        hi = hi.max(ratio);
    }
    let slack = T::tol(1e-12);
    let contains_g0 = ts.v().contains(&CVector::zeros(2), T::tol(MEMBERSHIP_TOL));
    let valid = contains_g0 && lo >= bounds.0 - slack && hi <= bounds.1 * (T::one() + slack);
    HypothesisReport {
        v_dim: ts.v().dim(),
        u_dim: ts.u_dim(),
        trace_constant: c_tr,
        observed: (lo, hi),
        bounds,
        samples,
        contains_g0,
        valid,
    }
}

/// The relation `h` on `BD(G)` together with its endpoint form.
#[derive(Debug, Clone)]
pub struct BlockOperator<T: Real> {
    pub h: LinearRelation<T>,
    /// Orthonormal rows acting on `(u(0), u(1), w(0), w(1))`.
    pub constraints: CMatrix<T>,
}

/// Map from trace quadruples to `(π u, Ḋ π w)` in `BD(G) ⊕ BD(G)` coordinates.
pub fn trace_to_bd<T: Real>() -> CMatrix<T> {
    let p = projection_matrix::<T>();
    block_diag(&p, &(swap_matrix::<T>() * &p))
}

impl<T: Real> BlockOperator<T> {
    pub fn from_relation(h: LinearRelation<T>) -> Result<Self> {
        if h.src().dim() != 2 || h.dst().dim() != 2 {
            return Err(Error::DimensionMismatch("boundary relation must act on BD(G)".into()));
        }
        let annihilator = linalg::null_space(&h.graph().basis().adjoint()).adjoint();
        let constraints = orthonormal_rows(&(annihilator * trace_to_bd::<T>()));
        Ok(Self { h, constraints })
    }

    /// Residual `‖C q‖` of a trace quadruple.
    pub fn constraint_residual(&self, q: &CVector<T>) -> T {
        (&self.constraints * q).norm()
    }
}

/// `h = {(x, y) : ξ_x ∈ V, γ ∈ V⊥}` with `w = Ġy`.
pub fn forward_h<T: Real>(ts: &TraceSystem<T>) -> Result<BlockOperator<T>> {
    let interp = interpolation_matrix::<T>();
    let on_traces = ts.trace_form_constraints();
    // ξ_x = I x and the traces of Ġy are I J y.
    let rows = on_traces * block_diag(&interp, &(&interp * swap_matrix::<T>()));
    let kernel = linalg::null_space(&rows);
    let bd = bd_space::<T>();
    let h = LinearRelation::from_spanning(&bd, &bd, &kernel)?;
    BlockOperator::from_relation(h)
}

/// Endpoint constraints of `b`.
pub fn boundary_constraints<T: Real>(b: &BlockOperator<T>) -> CMatrix<T> {
    b.constraints.clone()
}

/// Builds `(V, M)` from a selfadjoint maximal monotone `h = S ⊕ ({0} × U⊥)`.
///
/// `M = √S` in the eigenbasis of `S` (descending), with rows of zero
/// eigenvalues dropped, so `u_dim = rank S`.
pub fn reverse_construct<T: Real>(h: &LinearRelation<T>) -> Result<TraceSystem<T>> {
    if h.src().dim() != 2 || h.dst().dim() != 2 {
        return Err(Error::DimensionMismatch("boundary relation must act on BD(G)".into()));
    }
    if !h.is_selfadjoint() {
        return Err(Error::NotSelfadjoint { defect: h.selfadjoint_defect().as_f64() });
    }
    let report = h.maximal_monotonicity()?;
    if !report.maximal {
        let detail = match &report.witness {
            Some((x, y)) => format!(
                "min eigenvalue {:.3e}, witness Re<x|y> = {:.3e}",
                report.min_eigenvalue.as_f64(),
                h.src().inner(x, y).re.as_f64()
            ),
            None => format!("min eigenvalue {:.3e}, 1 + h not surjective", report.min_eigenvalue.as_f64()),
        };
        return Err(Error::NotMaximalMonotone(detail));
    }
    let dec = ArensDecomposition::decompose(h)?;
    let root = dec.sqrt_operator()?;
    let eigenbasis = dec.u_space.basis() * &root.eigenvectors;
    let r = root.eigenvalues.iter().filter(|&&l| l > T::zero()).count();
    let scales = CMatrix::from_diagonal(&CVector::from_iterator(
        r,
        root.eigenvalues[..r].iter().map(|l| Complex::new(l.sqrt(), T::zero())),
    ));
    let m = scales * eigenbasis.columns(0, r).adjoint() * h.src().gram() * projection_matrix::<T>();
    let v_span = interpolation_matrix::<T>() * dec.u_space.basis();
    let v = Subspace::span(&HilbertSpace::standard(2), &v_span)?;
    Ok(TraceSystem { v, m })
}

/// `(i, ii)`: the trace-form and the boundary-relation characterizations of
/// `(u, w) ∈ D(A)`. Without `ts`, (i) uses `reverse_construct(b.h)`.
pub fn domain_membership<T: Real>(
    b: &BlockOperator<T>,
    ts: Option<&TraceSystem<T>>,
    u: &TestFunction1D<T>,
    w: &TestFunction1D<T>,
) -> Result<(bool, bool)> {
    let owned;
    let ts = match ts {
        Some(ts) => ts,
        None => {
            owned = reverse_construct(&b.h)?;
            &owned
        }
    };
    let (xi_u, xi_w) = (traces(u), traces(w));
    let by_traces = ts.satisfies(&xi_u, &xi_w);
    let p = projection_matrix::<T>();
    let x = &p * &xi_u;
    let y = swap_matrix::<T>() * (&p * &xi_w);
    let by_relation = b.h.contains_pair(&x, &y, T::tol(MEMBERSHIP_TOL));
    Ok((by_traces, by_relation))
}

fn random_unit<T: Real>(n: usize, rng: &mut impl Rng) -> CVector<T> {
    loop {
        let v = CVector::from_fn(n, |_, _| T::cx(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let norm = v.norm();
        if norm > T::lit(0.1) {
            return v.unscale(norm);
        }
    }
}

fn apply_trace_shift<T: Real>(
    u: &TestFunction1D<T>,
    w: &TestFunction1D<T>,
    delta: &CVector<T>,
) -> (TestFunction1D<T>, TestFunction1D<T>) {
    (u.shift_traces(delta[0], delta[1]), w.shift_traces(delta[2], delta[3]))
}

/// Random `(u, w) ∈ D(A)`: random test functions whose traces are corrected
/// by the minimal-norm shift onto the constraint kernel.
pub fn sample_member<T: Real>(b: &BlockOperator<T>, rng: &mut impl Rng) -> (TestFunction1D<T>, TestFunction1D<T>) {
    let u = TestFunction1D::random(rng);
    let w = TestFunction1D::random(rng);
    let q = trace_quadruple(&u, &w);
    let c = &b.constraints;
    let delta = -(c.adjoint() * (c * q));
    apply_trace_shift(&u, &w, &delta)
}

/// Random `(u, w) ∉ D(A)` violating the constraints by a unit-size residual.
/// `None` when the constraints are empty.
pub fn sample_nonmember<T: Real>(
    b: &BlockOperator<T>,
    rng: &mut impl Rng,
) -> Option<(TestFunction1D<T>, TestFunction1D<T>)> {
    let c = &b.constraints;
    if c.nrows() == 0 {
        return None;
    }
    let (u, w) = sample_member(b, rng);
    let size = T::lit(rng.random_range(0.5..2.0));
    let delta = c.adjoint() * random_unit::<T>(c.nrows(), rng) * Complex::new(size, T::zero());
    Some(apply_trace_shift(&u, &w, &delta))
}

/// `(K⋄Ku − L⋄w)(v) − ⟨w'|v⟩` by quadrature, for `v ∈ E₀`.
///
/// Integration by parts turns this into `γ†ξ_v`, so it vanishes on `E₀`
/// exactly when `γ ∈ V⊥`; in that case `Dw = w'` represents the functional.
pub fn functional_boundary_residual<T: Real>(
    ts: &TraceSystem<T>,
    u: &TestFunction1D<T>,
    w: &TestFunction1D<T>,
    v: &TestFunction1D<T>,
    q: &Quadrature01<T>,
) -> Cx<T> {
    let ku = ts.m() * traces(u);
    let kv = ts.m() * traces(v);
    ku.dotc(&kv) - w.l2_inner(&v.derivative(), q) - w.derivative().l2_inner(v, q)
}

/// `Re[⟨u|Dw⟩ + ⟨w|Gu⟩]` by quadrature.
pub fn staffans_form<T: Real>(u: &TestFunction1D<T>, w: &TestFunction1D<T>, q: &Quadrature01<T>) -> T {
    (u.l2_inner(&w.derivative(), q) + w.l2_inner(&u.derivative(), q)).re
}

/// Random unit-norm graph element of `h`.
pub fn sample_graph_pair<T: Real>(h: &LinearRelation<T>, rng: &mut impl Rng) -> (CVector<T>, CVector<T>) {
    let basis = h.graph().basis();
    let z = basis * random_unit::<T>(basis.ncols(), rng);
    let n = h.src().dim();
    (z.rows(0, n).into_owned(), z.rows(n, h.dst().dim()).into_owned())
}

/// `max |Re⟨x|y⟩ − |M ξ_x|²|` over random unit graph elements.
pub fn key_identity_defect<T: Real>(
    ts: &TraceSystem<T>,
    h: &LinearRelation<T>,
    samples: usize,
    rng: &mut impl Rng,
) -> T {
    let interp = interpolation_matrix::<T>();
    let mut worst = T::zero();
    if h.dim() == 0 {
        return worst;
    }
    for _ in 0..samples {
        let (x, y) = sample_graph_pair(h, rng);
        let lhs = h.src().inner(&x, &y).re;
        let rhs = ts.k_norm_squared(&(&interp * &x));
        worst = worst.max((lhs - rhs).abs());
    }
    worst
}

/// `max |⟨y|u⟩ − (M ξ_x)†(M ξ_u)|` over random pairs `(x, y), (u, v) ∈ h`.
pub fn symmetric_identity_defect<T: Real>(
    ts: &TraceSystem<T>,
    h: &LinearRelation<T>,
    samples: usize,
    rng: &mut impl Rng,
) -> T {
    let interp = interpolation_matrix::<T>();
    let mut worst = T::zero();
    if h.dim() == 0 {
        return worst;
    }
    for _ in 0..samples {
        let (x, y) = sample_graph_pair(h, rng);
        let (u, _) = sample_graph_pair(h, rng);
        let lhs = h.src().inner(&y, &u);
        let rhs = (ts.m() * (&interp * &x)).dotc(&(ts.m() * (&interp * &u)));
        worst = worst.max((lhs - rhs).norm_sqr().sqrt());
    }
    worst
}

/// `T_full = [[2 coth 1, 1], [−1, 0]]`, the boundary operator of the
/// impedance system.
pub fn full_trace_matrix<T: Real>() -> CMatrix<T> {
    let one = T::one();
    let z = T::zero();
    CMatrix::from_row_slice(
        2,
        2,
        &[
            Complex::new((one + one) / one.tanh(), z),
            Complex::new(one, z),
            Complex::new(-one, z),
            Complex::new(z, z),
        ],
    )
}

/// Graph of the Gram-skew rotation `W⁻¹[[0, 1], [−1, 0]]`: maximal
/// monotone, not selfadjoint.
pub fn skew_relation<T: Real>() -> LinearRelation<T> {
    let bd = bd_space::<T>();
    let (o, z) = (Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::zero()));
    let k = CMatrix::from_row_slice(2, 2, &[z, o, -o, z]);
    let w_inv = bd.gram().clone().try_inverse().expect("Gram is invertible");
    LinearRelation::graph_of(&bd, &bd, &(w_inv * k)).expect("square")
}

/// Random selfadjoint monotone `h`: a positive diagonal `S` in a random
/// Gram-orthonormal basis `(q₁, q₂)`, or with `multivalued` the relation
/// `{(q₁, s q₁)} + {0} × span{q₂}`.
pub fn random_selfadjoint_relation<T: Real>(multivalued: bool, rng: &mut impl Rng) -> LinearRelation<T> {
    let bd = bd_space::<T>();
    let q = loop {
        let raw = CMatrix::from_fn(2, 2, |_, _| T::cx(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let sub = Subspace::span(&bd, &raw).expect("2 rows");
        if sub.dim() == 2 && linalg::singular_values(&raw).last().copied().unwrap_or_else(T::zero) > T::lit(0.05) {
            break sub.basis().clone();
        }
    };
    let d: Vec<T> = (0..2).map(|_| T::lit(rng.random_range(0.1..3.0))).collect();
    let scale = |i: usize| Complex::new(d[i], T::zero());
    let q1 = q.column(0).into_owned();
    let q2 = q.column(1).into_owned();
    let zero = CVector::zeros(2);
    let (firsts, seconds) = if multivalued {
        (CMatrix::from_columns(&[q1.clone(), zero]), CMatrix::from_columns(&[q1 * scale(0), q2]))
    } else {
        (q.clone(), CMatrix::from_columns(&[q1 * scale(0), q2 * scale(1)]))
    };
    LinearRelation::from_pairs(&bd, &bd, &firsts, &seconds).expect("2x2 blocks")
}

/// A named boundary relation, with the trace system it came from if any.
#[derive(Debug, Clone)]
pub struct Scenario<T: Real> {
    pub name: String,
    pub trace_system: Option<TraceSystem<T>>,
    pub block: BlockOperator<T>,
}

impl<T: Real> Scenario<T> {
    pub fn from_trace_system(name: &str, ts: TraceSystem<T>) -> Result<Self> {
        let block = forward_h(&ts)?;
        Ok(Self { name: name.into(), trace_system: Some(ts), block })
    }

    pub fn from_relation(name: &str, h: LinearRelation<T>) -> Result<Self> {
        Ok(Self { name: name.into(), trace_system: None, block: BlockOperator::from_relation(h)? })
    }
}

/// Dirichlet, Neumann, Robin `k ∈ {0.5, 1, 2}`, full trace, and two random
/// selfadjoint relations (the second with a multivalued part).
pub fn scenario_suite<T: Real>(rng: &mut impl Rng) -> Vec<Scenario<T>> {
    let mut out = vec![
        Scenario::from_trace_system("dirichlet", TraceSystem::dirichlet()),
        Scenario::from_trace_system("neumann", TraceSystem::neumann()),
        Scenario::from_trace_system("robin-0.5", TraceSystem::robin(T::lit(0.5))),
        Scenario::from_trace_system("robin-1", TraceSystem::robin(T::one())),
        Scenario::from_trace_system("robin-2", TraceSystem::robin(T::lit(2.0))),
        Scenario::from_trace_system("full-trace", TraceSystem::full_trace()),
    ];
    out.push(Scenario::from_relation("random-diagonal", random_selfadjoint_relation(false, rng)));
    out.push(Scenario::from_relation("random-multivalued", random_selfadjoint_relation(true, rng)));
    out.into_iter().map(|s| s.expect("built-in scenarios are well formed")).collect()
}

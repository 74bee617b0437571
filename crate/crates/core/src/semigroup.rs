//! Implicit Euler for the contraction semigroup generated by `−A`,
//! `A(u, w) = (w', u')`, on a collocated grid over `[0, 1]`.
//!
//! Each step solves `u + τw' = f`, `w + τu' = g` with second-order
//! differences. At each endpoint the equation of the incoming characteristic
//! (`u + w` at `x = 0`, `u − w` at `x = 1`) is replaced by a boundary
//! constraint row; the outgoing combination is kept.

use nalgebra::{Complex, LU};
use rand::Rng;

use crate::bdspace::TestFunction1D;
use crate::error::{Error, Result};
use crate::scalar::{CMatrix, CVector, Cx, Real};
use crate::systemnode::BlockOperator;

/// Smallest admissible grid.
pub const MIN_NODES: usize = 8;
/// Pivot ratio below which the discrete system counts as singular.
pub const SINGULAR_RCOND: f64 = 1e-14;
/// Endpoint constraint residual above which initial data are projected.
pub const INITIAL_DATA_TOL: f64 = 1e-8;

/// Nodal values on `n` uniform nodes of `[0, 1]`, endpoints included.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction<T: Real> {
    values: CVector<T>,
}

impl<T: Real> GridFunction<T> {
    pub fn new(values: CVector<T>) -> Result<Self> {
        if values.len() < MIN_NODES {
            return Err(Error::InvalidArgument(format!("grid needs at least {MIN_NODES} nodes, got {}", values.len())));
        }
        Ok(Self { values })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(CVector::zeros(n))
    }

    pub fn from_fn(n: usize, f: impl Fn(T) -> Cx<T>) -> Result<Self> {
        let dx = spacing::<T>(n);
        Self::new(CVector::from_fn(n, |i, _| f(dx * T::lit(i as f64))))
    }

    pub fn sample(n: usize, f: &TestFunction1D<T>) -> Result<Self> {
        Self::from_fn(n, |x| f.eval(x))
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn dx(&self) -> T {
        spacing(self.n())
    }

    pub fn values(&self) -> &CVector<T> {
        &self.values
    }

    pub fn first(&self) -> Cx<T> {
        self.values[0]
    }

    pub fn last(&self) -> Cx<T> {
        self.values[self.n() - 1]
    }

    /// Trapezoid approximation of `‖·‖²_{L²(0,1)}`.
    pub fn norm_squared(&self) -> T {
        let n = self.n();
        let interior: T = (1..n - 1).fold(T::zero(), |acc, i| acc + self.values[i].norm_sqr());
        let ends = (self.values[0].norm_sqr() + self.values[n - 1].norm_sqr()) * T::lit(0.5);
        (interior + ends) * self.dx()
    }

    pub fn norm(&self) -> T {
        self.norm_squared().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        (&self.values - &other.values).iter().fold(T::zero(), |acc, z| acc.max(z.norm_sqr().sqrt()))
    }
}

fn spacing<T: Real>(n: usize) -> T {
    T::one() / T::lit((n - 1) as f64)
}

/// `½(‖u‖² + ‖w‖²)`.
pub fn energy<T: Real>(u: &GridFunction<T>, w: &GridFunction<T>) -> T {
    (u.norm_squared() + w.norm_squared()) * T::lit(0.5)
}

/// Second-order first-derivative matrix, one-sided at the endpoints.
fn derivative_matrix<T: Real>(n: usize) -> CMatrix<T> {
    let inv = Complex::new(T::one() / (T::lit(2.0) * spacing::<T>(n)), T::zero());
    let c = |x: f64| Complex::new(T::lit(x), T::zero()) * inv;
    let mut d = CMatrix::zeros(n, n);
    d[(0, 0)] = c(-3.0);
    d[(0, 1)] = c(4.0);
    d[(0, 2)] = c(-1.0);
    for i in 1..n - 1 {
        d[(i, i - 1)] = c(-1.0);
        d[(i, i + 1)] = c(1.0);
    }
    d[(n - 1, n - 1)] = c(3.0);
    d[(n - 1, n - 2)] = c(-4.0);
    d[(n - 1, n - 3)] = c(1.0);
    d
}

/// `(1 + τA_Δ)` closed by the constraints of `b`, factored once.
pub struct ResolventSolver<T: Real> {
    n: usize,
    tau: T,
    matrix: CMatrix<T>,
    lu: LU<Cx<T>, nalgebra::Dyn, nalgebra::Dyn>,
    constraints: CMatrix<T>,
    /// Norms of the kept outgoing rows before normalization.
    outgoing_norms: (T, T),
    rcond: T,
}

/// Output of one resolvent solve.
#[derive(Debug, Clone)]
pub struct ResolventSolution<T: Real> {
    pub u: GridFunction<T>,
    pub w: GridFunction<T>,
    /// `‖Az − b‖ / ‖b‖` of the discrete system (zero for `b = 0`).
    pub residual: T,
}

impl<T: Real> ResolventSolver<T> {
    pub fn new(b: &BlockOperator<T>, tau: T, n: usize) -> Result<Self> {
        if !(tau > T::zero()) {
            return Err(Error::InvalidArgument(format!("time step must be positive, got {tau}")));
        }
        if n < MIN_NODES {
            return Err(Error::InvalidArgument(format!("grid needs at least {MIN_NODES} nodes, got {n}")));
        }
        let constraints = b.constraints.clone();
        if constraints.nrows() != 2 {
            return Err(Error::SingularSystem { rcond: 0.0 });
        }
        let one = Complex::new(T::one(), T::zero());
        let t = Complex::new(tau, T::zero());
        let d = derivative_matrix::<T>(n) * t;
        let mut a = CMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            a[(i, i)] = one;
            a[(n + i, n + i)] = one;
        }
        a.view_mut((0, n), (n, n)).copy_from(&d);
        a.view_mut((n, 0), (n, n)).copy_from(&d);
        let (u0, u1, w0, w1) = (0, n - 1, n, 2 * n - 1);
        // Outgoing characteristics: u − w at x = 0, u + w at x = 1.
        let left = a.row(u0) - a.row(w0);
        let right = a.row(u1) + a.row(w1);
        let scale = |row: nalgebra::RowDVector<Cx<T>>| {
            let norm = row.norm();
            row.unscale(norm)
        };
        let outgoing_norms = (left.norm(), right.norm());
        a.set_row(u0, &scale(left));
        a.set_row(u1, &scale(right));
        for (slot, k) in [(w0, 0), (w1, 1)] {
            let mut row = nalgebra::RowDVector::zeros(2 * n);
            for (col, node) in [u0, u1, w0, w1].into_iter().enumerate() {
                row[node] = constraints[(k, col)];
            }
            a.set_row(slot, &scale(row));
        }
        let lu = a.clone().lu();
        let diag = lu.u().diagonal();
        let (lo, hi) = diag.iter().fold((T::max_value().expect("bounded"), T::zero()), |(lo, hi), z| {
            let m = z.norm_sqr().sqrt();
            (lo.min(m), hi.max(m))
        });
        let rcond = if hi > T::zero() { lo / hi } else { T::zero() };
        if !(rcond > T::tol(SINGULAR_RCOND)) {
            return Err(Error::SingularSystem { rcond: rcond.as_f64() });
        }
        Ok(Self { n, tau, matrix: a, lu, constraints, outgoing_norms, rcond })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tau(&self) -> T {
        self.tau
    }

    /// Smallest over largest pivot magnitude of the factorization.
    pub fn rcond(&self) -> T {
        self.rcond
    }

    fn rhs(&self, f: &GridFunction<T>, g: &GridFunction<T>) -> Result<CVector<T>> {
        let n = self.n;
        if f.n() != n || g.n() != n {
            return Err(Error::DimensionMismatch(format!("data on {} and {} nodes, solver on {n}", f.n(), g.n())));
        }
        let mut rhs = CVector::zeros(2 * n);
        rhs.rows_mut(0, n).copy_from(f.values());
        rhs.rows_mut(n, n).copy_from(g.values());
        Ok(rhs)
    }

    /// `(u, w) = (1 + τA_Δ)⁻¹(f, g)` with one step of iterative refinement.
    pub fn solve(&self, f: &GridFunction<T>, g: &GridFunction<T>) -> Result<ResolventSolution<T>> {
        let n = self.n;
        let raw = self.rhs(f, g)?;
        let rhs = self.close_rhs(&raw);
        let mut z = self.lu.solve(&rhs).ok_or(Error::SingularSystem { rcond: self.rcond.as_f64() })?;
        let r = &rhs - &self.matrix * &z;
        if let Some(dz) = self.lu.solve(&r) {
            z += dz;
        }
        let bnorm = rhs.norm();
        let residual = if bnorm > T::zero() { (&rhs - &self.matrix * &z).norm() / bnorm } else { T::zero() };
        Ok(ResolventSolution {
            u: GridFunction::new(z.rows(0, n).into_owned())?,
            w: GridFunction::new(z.rows(n, n).into_owned())?,
            residual,
        })
    }

    /// Applies the boundary row replacements to a stacked `(f, g)`.
    fn close_rhs(&self, raw: &CVector<T>) -> CVector<T> {
        let n = self.n;
        let (u0, u1, w0, w1) = (0, n - 1, n, 2 * n - 1);
        let mut rhs = raw.clone();
        rhs[u0] = (raw[u0] - raw[w0]).unscale(self.outgoing_norms.0);
        rhs[u1] = (raw[u1] + raw[w1]).unscale(self.outgoing_norms.1);
        rhs[w0] = Complex::new(T::zero(), T::zero());
        rhs[w1] = Complex::new(T::zero(), T::zero());
        rhs
    }

    /// `‖C (u(0), u(1), w(0), w(1))‖`.
    pub fn constraint_residual(&self, u: &GridFunction<T>, w: &GridFunction<T>) -> T {
        let q = CVector::from_vec(vec![u.first(), u.last(), w.first(), w.last()]);
        (&self.constraints * q).norm()
    }
}

/// Resolvent solve with a fresh factorization.
pub fn resolvent_solve<T: Real>(
    b: &BlockOperator<T>,
    tau: T,
    f: &GridFunction<T>,
    g: &GridFunction<T>,
) -> Result<ResolventSolution<T>> {
    if f.n() != g.n() {
        return Err(Error::DimensionMismatch("f and g live on different grids".into()));
    }
    ResolventSolver::new(b, tau, f.n())?.solve(f, g)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionConfig<T: Real> {
    pub tau: T,
    pub steps: usize,
    pub n: usize,
}

impl<T: Real> EvolutionConfig<T> {
    pub fn new(tau: T, steps: usize, n: usize) -> Result<Self> {
        if !(tau > T::zero()) {
            return Err(Error::InvalidArgument(format!("time step must be positive, got {tau}")));
        }
        if steps < 1 {
            return Err(Error::InvalidArgument("at least one step is required".into()));
        }
        if n < MIN_NODES {
            return Err(Error::InvalidArgument(format!("grid needs at least {MIN_NODES} nodes, got {n}")));
        }
        Ok(Self { tau, steps, n })
    }
}

#[derive(Debug, Clone)]
pub struct State<T: Real> {
    pub step: usize,
    pub t: T,
    pub u: GridFunction<T>,
    pub w: GridFunction<T>,
    pub energy: T,
}

#[derive(Debug, Clone)]
pub struct Trajectory<T: Real> {
    /// States `0..=steps`, starting with the (possibly projected) initial data.
    pub states: Vec<State<T>>,
    /// True when the initial data violated the constraints and were projected.
    pub projected: bool,
}

impl<T: Real> Trajectory<T> {
    pub fn energies(&self) -> Vec<T> {
        self.states.iter().map(|s| s.energy).collect()
    }

    /// Largest `E_{k+1}/E_k − 1` (zero for an identically zero trajectory).
    pub fn max_relative_increase(&self) -> T {
        self.states.windows(2).fold(T::zero(), |acc, p| {
            if p[0].energy > T::zero() {
                acc.max(p[1].energy / p[0].energy - T::one())
            } else {
                acc.max(p[1].energy)
            }
        })
    }

    /// Every step lowers the energy by more than `rel_tol·E_k`.
    pub fn strictly_decreasing(&self, rel_tol: T) -> bool {
        self.states.windows(2).all(|p| p[1].energy < p[0].energy * (T::one() - rel_tol))
    }
}

/// Implicit Euler `z_{k+1} = (1 + τA)⁻¹ z_k`.
pub fn evolve<T: Real>(
    b: &BlockOperator<T>,
    cfg: &EvolutionConfig<T>,
    u0: &GridFunction<T>,
    w0: &GridFunction<T>,
) -> Result<Trajectory<T>> {
    if u0.n() != cfg.n || w0.n() != cfg.n {
        return Err(Error::DimensionMismatch(format!("initial data must have {} nodes", cfg.n)));
    }
    let solver = ResolventSolver::new(b, cfg.tau, cfg.n)?;
    let (mut u, mut w) = (u0.clone(), w0.clone());
    let projected = solver.constraint_residual(&u, &w) > T::tol(INITIAL_DATA_TOL);
    if projected {
        let c = &b.constraints;
        let q = CVector::from_vec(vec![u.first(), u.last(), w.first(), w.last()]);
        let delta = -(c.adjoint() * (c * q));
        let n = cfg.n;
        u.values[0] += delta[0];
        u.values[n - 1] += delta[1];
        w.values[0] += delta[2];
        w.values[n - 1] += delta[3];
    }
    let mut states = Vec::with_capacity(cfg.steps + 1);
    states.push(State { step: 0, t: T::zero(), energy: energy(&u, &w), u, w });
    for k in 1..=cfg.steps {
        let prev = states.last().expect("nonempty");
        let next = solver.solve(&prev.u, &prev.w)?;
        let e = energy(&next.u, &next.w);
        states.push(State { step: k, t: cfg.tau * T::lit(k as f64), u: next.u, w: next.w, energy: e });
    }
    Ok(Trajectory { states, projected })
}

/// Exact `(u*, w*) ∈ D(A)`: `u* = x²(1 − x)²`, `w* = 1 + x − x³`, with
/// endpoint traces corrected onto the constraints of `b` by boundary-space
/// elements.
pub fn manufactured_solution<T: Real>(b: &BlockOperator<T>) -> (TestFunction1D<T>, TestFunction1D<T>) {
    let u = TestFunction1D::real_polynomial(&[0.0, 0.0, 1.0, -2.0, 1.0]);
    let w = TestFunction1D::real_polynomial(&[1.0, 1.0, 0.0, -1.0]);
    let c = &b.constraints;
    let (u0, u1) = u.traces();
    let (w0, w1) = w.traces();
    let delta = -(c.adjoint() * (c * CVector::from_vec(vec![u0, u1, w0, w1])));
    (u.shift_traces(delta[0], delta[1]), w.shift_traces(delta[2], delta[3]))
}

#[derive(Debug, Clone)]
pub struct ConvergenceStudy<T: Real> {
    pub grids: Vec<usize>,
    /// Max-norm errors of `(u, w)` against the manufactured solution.
    pub errors: Vec<T>,
    /// Least-squares slope of `log error` against `log Δ`.
    pub order: T,
}

/// Observed order of the resolvent solver over `grids`.
pub fn convergence_study<T: Real>(b: &BlockOperator<T>, tau: T, grids: &[usize]) -> Result<ConvergenceStudy<T>> {
    if grids.len() < 3 {
        return Err(Error::InvalidArgument(format!("need at least 3 grids, got {}", grids.len())));
    }
    if grids.windows(2).any(|p| p[1] <= p[0]) {
        return Err(Error::InvalidArgument("grids must be strictly increasing".into()));
    }
    let (us, ws) = manufactured_solution(b);
    let t = Complex::new(tau, T::zero());
    let f = us + ws.derivative() * t;
    let g = ws + us.derivative() * t;
    let mut errors = Vec::with_capacity(grids.len());
    for &n in grids {
        let sol = resolvent_solve(b, tau, &GridFunction::sample(n, &f)?, &GridFunction::sample(n, &g)?)?;
        let eu = sol.u.max_abs_diff(&GridFunction::sample(n, &us)?);
        let ew = sol.w.max_abs_diff(&GridFunction::sample(n, &ws)?);
        errors.push(eu.max(ew));
    }
    let xs: Vec<f64> = grids.iter().map(|&n| (1.0 / (n - 1) as f64).ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.as_f64().ln()).collect();
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(ConvergenceStudy { grids: grids.to_vec(), errors, order: T::lit(sxy / sxx) })
}

/// Random smooth data for contraction checks.
pub fn random_data<T: Real>(n: usize, rng: &mut impl Rng) -> Result<(GridFunction<T>, GridFunction<T>)> {
    Ok((GridFunction::sample(n, &TestFunction1D::random(rng))?, GridFunction::sample(n, &TestFunction1D::random(rng))?))
}

/// Smooth bump `16x²(1 − x)²` with zero traces, admissible for every `h`.
pub fn bump<T: Real>(n: usize) -> Result<GridFunction<T>> {
    GridFunction::sample(n, &TestFunction1D::real_polynomial(&[0.0, 0.0, 16.0, -32.0, 16.0]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systemnode::{forward_h, scenario_suite, Scenario, TraceSystem};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn block(ts: TraceSystem<f64>) -> BlockOperator<f64> {
        forward_h(&ts).unwrap()
    }

    fn suite() -> Vec<Scenario<f64>> {
        scenario_suite(&mut ChaCha8Rng::seed_from_u64(11))
    }

    #[test]
    fn zero_data_gives_zero() {
        for s in suite() {
            let z = GridFunction::<f64>::zeros(32).unwrap();
            let sol = resolvent_solve(&s.block, 0.1, &z, &z).unwrap();
            assert_eq!(sol.u, z);
            assert_eq!(sol.w, z);
        }
    }

    #[test]
    fn manufactured_order() {
        for ts in [TraceSystem::dirichlet(), TraceSystem::full_trace()] {
            let study = convergence_study(&block(ts), 0.1, &[64, 128, 256]).unwrap();
            assert!((study.order - 2.0).abs() < 0.2, "{study:?}");
        }
        let b = block(TraceSystem::dirichlet());
        assert!(convergence_study(&b, 0.1, &[64]).is_err());
        assert!(convergence_study(&b, 0.1, &[64, 64, 128]).is_err());
    }

    #[test]
    fn manufactured_solution_is_admissible() {
        for s in suite() {
            let (u, w) = manufactured_solution(&s.block);
            let q = crate::systemnode::trace_quadruple(&u, &w);
            assert!(s.block.constraint_residual(&q) < 1e-12, "{}", s.name);
        }
    }

    #[test]
    fn contraction_and_constraints() {
        let n = 256;
        let dx = 1.0 / (n - 1) as f64;
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for s in suite() {
            let solver = ResolventSolver::new(&s.block, 0.05, n).unwrap();
            for _ in 0..5 {
                let (f, g) = random_data::<f64>(n, &mut rng).unwrap();
                let sol = solver.solve(&f, &g).unwrap();
                assert!(sol.residual < 1e-10, "{} residual {}", s.name, sol.residual);
                let lhs = (sol.u.norm_squared() + sol.w.norm_squared()).sqrt();
                let rhs = (f.norm_squared() + g.norm_squared()).sqrt();
                assert!(lhs <= rhs * (1.0 + 5.0 * dx * dx), "{}: {lhs} > {rhs}", s.name);
                assert!(solver.constraint_residual(&sol.u, &sol.w) < 1e-9);
            }
        }
    }

    #[test]
    fn energy_behaviour() {
        let n = 256;
        let cfg = EvolutionConfig::new(0.01, 100, n).unwrap();
        let zero = GridFunction::<f64>::zeros(n).unwrap();
        for s in suite() {
            let traj = evolve(&s.block, &cfg, &bump(n).unwrap(), &zero).unwrap();
            assert!(!traj.projected);
            assert_eq!(traj.states.len(), 101);
            assert!(traj.max_relative_increase() <= 1e-3, "{}: {}", s.name, traj.max_relative_increase());
            let still = evolve(&s.block, &cfg, &zero, &zero).unwrap();
            assert!(still.energies().iter().all(|&e| e == 0.0));
        }
        let full = block(TraceSystem::full_trace());
        let traj = evolve(&full, &cfg, &bump(n).unwrap(), &zero).unwrap();
        assert!(traj.strictly_decreasing(1e-12));
    }

    #[test]
    fn projection_of_inadmissible_initial_data() {
        let n = 64;
        let b = block(TraceSystem::dirichlet());
        let one = GridFunction::from_fn(n, |_| Complex::new(1.0, 0.0)).unwrap();
        let cfg = EvolutionConfig::new(0.01, 3, n).unwrap();
        let traj = evolve(&b, &cfg, &one, &one).unwrap();
        assert!(traj.projected);
        assert_eq!(traj.states[0].u.first(), Complex::new(0.0, 0.0));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(EvolutionConfig::<f64>::new(0.0, 1, 16).is_err());
        assert!(EvolutionConfig::<f64>::new(0.1, 0, 16).is_err());
        assert!(GridFunction::<f64>::zeros(4).is_err());
        let bd = crate::systemnode::bd_space::<f64>();
        let degenerate = crate::relation::LinearRelation::from_pairs(
            &bd,
            &bd,
            &CMatrix::identity(2, 1),
            &CMatrix::zeros(2, 1),
        )
        .unwrap();
        let b = BlockOperator::from_relation(degenerate).unwrap();
        assert!(matches!(ResolventSolver::new(&b, 0.1, 16), Err(Error::SingularSystem { .. })));
    }
}

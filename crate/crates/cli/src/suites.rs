//! The verification suites behind each subcommand.

use maxmon::arens::ArensDecomposition;
use maxmon::bdspace::{apply_ddot, apply_gdot, gram_matrices, swap_matrix, BdKind, BdVector, TestFunction1D};
use maxmon::hilbert::{HilbertSpace, Subspace};
use maxmon::quadrature::Quadrature01;
use maxmon::relation::{random_monotone, LinearRelation, RandomKind, EQUAL_TOL, MINTY_LAMBDAS, MONOTONE_TOL};
use maxmon::semigroup::{bump, convergence_study, evolve, random_data, EvolutionConfig, GridFunction, Trajectory};
use maxmon::systemnode::{
    check_hypothesis_with, domain_membership, forward_h, functional_boundary_residual, key_identity_defect,
    reverse_construct, sample_member, sample_nonmember, staffans_form, symmetric_identity_defect, trace_constant,
    traces, BlockOperator, TraceSystem,
};
use maxmon::{CMatrix, Error};
use nalgebra::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::config::{EvolutionBlock, InitialData, Payload};
use crate::report::{Check, RelationRecord, Report};
use crate::CliError;

/// Principal-angle tolerance for the trace system round trip.
pub const ROUND_TRIP_TOL: f64 = 1e-9;
/// Tolerance for identities between quadratic forms.
pub const IDENTITY_TOL: f64 = 1e-10;
/// Largest admitted relative energy increase per step.
pub const ENERGY_TOL: f64 = 1e-12;
/// Largest admitted deviation of the observed order from 2.
pub const ORDER_TOL: f64 = 0.2;
/// Slack on the upper norm equivalence bound of the trace hypothesis.
pub const HYPOTHESIS_TOL: f64 = 1e-12;

const KINDS: [RandomKind; 3] = [RandomKind::Operator, RandomKind::Relation, RandomKind::Selfadjoint];

pub fn kind_name(kind: RandomKind) -> &'static str {
    match kind {
        RandomKind::Operator => "operator",
        RandomKind::Relation => "relation",
        RandomKind::Selfadjoint => "selfadjoint",
    }
}

fn parse_kind(name: &str) -> Option<RandomKind> {
    KINDS.into_iter().find(|&k| kind_name(k) == name)
}

/// Largest principal angle in radians; infinite for unequal dimensions.
fn angle(a: &Subspace<f64>, b: &Subspace<f64>) -> f64 {
    a.largest_angle_sine(b).map_or(f64::INFINITY, |s| s.min(1.0).asin())
}

fn measured(check: &str, value: maxmon::Result<f64>, tolerance: f64) -> Check {
    Check::at_most(check, value.unwrap_or(f64::INFINITY), tolerance)
}

/// Seed of trial `trial` in dimension `dim`.
pub fn relation_seed(seed: u64, dim: usize, trial: usize) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ (((dim as u64) << 32) | trial as u64)
}

/// Adjoint involution, Minty equivalence, resolvent nonexpansiveness and,
/// for selfadjoint relations, the Arens round trip.
pub fn relation_checks(c: &LinearRelation<f64>, selfadjoint: bool, tol_scale: f64) -> Vec<Check> {
    let equal_tol = EQUAL_TOL * tol_scale;
    let adjoint = c.adjoint();
    let mut checks = vec![
        Check::at_most("adjoint involution", angle(adjoint.adjoint().graph(), c.graph()), equal_tol),
        Check::at_most("adjoint complement oracle", angle(adjoint.graph(), c.adjoint_via_complement().graph()), equal_tol),
    ];
    let by_adjoint = c.is_monotone() && adjoint.is_monotone();
    let disagreements = MINTY_LAMBDAS.iter().filter(|&&l| c.minty_surjective(l).unwrap_or(false) != by_adjoint).count();
    checks.push(Check::at_most("minty equivalence", disagreements as f64, 0.0));
    if by_adjoint {
        let worst = MINTY_LAMBDAS
            .iter()
            .map(|&l| c.resolvent_norm(l).unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max);
        checks.push(Check::at_most("resolvent nonexpansive", worst - 1.0, 1e-10 * tol_scale));
    }
    if selfadjoint {
        match ArensDecomposition::decompose(c) {
            Ok(dec) => {
                checks.push(Check::at_most("arens round trip", angle(dec.reconstruct().graph(), c.graph()), equal_tol));
                let lo = dec.eigenvalues().first().copied().unwrap_or(0.0);
                checks.push(Check::at_most("arens operator part monotone", -lo, 1e-12 * tol_scale));
            }
            Err(_) => checks.push(Check::at_most("arens round trip", f64::INFINITY, equal_tol)),
        }
    }
    checks
}

/// One record per check name: the worst value, passing when every instance
/// passed.
fn aggregate(all: impl IntoIterator<Item = Check>) -> Vec<Check> {
    let mut out: Vec<Check> = Vec::new();
    for c in all {
        match out.iter_mut().find(|o| o.check == c.check) {
            Some(o) => {
                o.pass &= c.pass;
                if !(c.value <= o.value) {
                    o.value = c.value;
                }
            }
            None => out.push(c),
        }
    }
    out
}

fn rows(m: &CMatrix<f64>) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

fn matrix(rows: &[Vec<[f64; 2]>], ncols: usize) -> Option<CMatrix<f64>> {
    if rows.iter().any(|r| r.len() != ncols) {
        return None;
    }
    Some(CMatrix::from_fn(rows.len(), ncols, |i, j| Complex::new(rows[i][j][0], rows[i][j][1])))
}

fn record(c: &LinearRelation<f64>, kind: &str, seed: Option<u64>, checks: &[Check]) -> RelationRecord {
    RelationRecord {
        dim: c.src().dim(),
        kind: kind.into(),
        seed,
        gram: rows(c.src().gram()),
        graph_basis: rows(c.graph().basis()),
        failed: checks.iter().filter(|c| !c.pass).map(|c| c.check.clone()).collect(),
    }
}

fn run_corpus(items: Vec<(LinearRelation<f64>, String, Option<u64>)>, tol_scale: f64) -> (Vec<Check>, Vec<RelationRecord>) {
    let mut all = Vec::new();
    let mut failures = Vec::new();
    for (c, kind, seed) in &items {
        let checks = relation_checks(c, kind == kind_name(RandomKind::Selfadjoint), tol_scale);
        if checks.iter().any(|k| !k.pass) {
            failures.push(record(c, kind, *seed, &checks));
        }
        all.extend(checks);
    }
    (aggregate(all), failures)
}

/// Seeded corpora over `dims × trials`, cycling through the generator kinds.
pub fn property_suites(dims: &[usize], trials: usize, seed: u64, tol_scale: f64) -> Report {
    let mut items = Vec::with_capacity(dims.len() * trials);
    for &dim in dims {
        for trial in 0..trials {
            let kind = KINDS[trial % KINDS.len()];
            let s = relation_seed(seed, dim, trial);
            items.push((random_monotone::<f64>(dim, kind, s), kind_name(kind).to_string(), Some(s)));
        }
    }
    let (checks, failures) = run_corpus(items, tol_scale);
    let mut report = Report::new("verify-relations", "property-suites", seed, tol_scale, checks);
    report.failures = failures;
    report
}

/// Any JSON object with a `failures` array, such as a failing report.
#[derive(Debug, Deserialize)]
pub struct ReplayFile {
    #[serde(default)]
    pub failures: Vec<RelationRecord>,
}

fn rebuild(r: &RelationRecord) -> Result<LinearRelation<f64>, String> {
    let kind = parse_kind(&r.kind).ok_or_else(|| format!("unknown relation kind {:?}", r.kind))?;
    if r.dim == 0 {
        return Err("dimension must be positive".into());
    }
    let gram = matrix(&r.gram, r.dim).filter(|g| g.nrows() == r.dim).ok_or("gram is not dim x dim")?;
    let spanning = matrix(&r.graph_basis, r.graph_basis.first().map_or(0, Vec::len))
        .filter(|b| b.nrows() == 2 * r.dim)
        .ok_or("graph basis must have 2 dim rows of equal length")?;
    let space = HilbertSpace::new(gram).map_err(|e| e.to_string())?;
    let stored = LinearRelation::from_spanning(&space, &space, &spanning).map_err(|e| e.to_string())?;
    let Some(seed) = r.seed else {
        return Ok(stored);
    };
    let regenerated = random_monotone::<f64>(r.dim, kind, seed);
    let gram_gap = (regenerated.src().gram() - stored.src().gram()).camax();
    if gram_gap > 1e-12 || angle(regenerated.graph(), stored.graph()) > 1e-8 {
        return Err(format!("record does not match the relation generated from seed {seed}"));
    }
    Ok(regenerated)
}

/// Reruns the relation checks on serialized failures.
pub fn replay(file: &ReplayFile, source: &std::path::Path, seed: u64, tol_scale: f64) -> Result<Report, CliError> {
    let mut items = Vec::with_capacity(file.failures.len());
    for (i, r) in file.failures.iter().enumerate() {
        let c = rebuild(r).map_err(|detail| CliError::Config {
            path: source.to_path_buf(),
            detail: format!("failure {i}: {detail}"),
        })?;
        items.push((c, r.kind.clone(), r.seed));
    }
    let (checks, failures) = run_corpus(items, tol_scale);
    let mut report = Report::new("verify-relations", "replay", seed, tol_scale, checks);
    report.failures = failures;
    Ok(report)
}

/// Gram matrices against quadrature, unitarity and adjointness of the swap
/// `J`, exact `Ḋ Ġ = 1`, and the trace constant against sampling.
pub fn boundary_space_checks(seed: u64, tol_scale: f64) -> Report {
    let one = Complex::new(1.0, 0.0);
    let zero = Complex::new(0.0, 0.0);
    let q = Quadrature01::<f64>::new();
    let basis = [TestFunction1D::hyperbolic(one, zero), TestFunction1D::hyperbolic(zero, one)];
    let (gg, gd) = gram_matrices::<f64>();
    let mut gram_err = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            gram_err = gram_err.max((basis[i].graph_inner(&basis[j], &q) - Complex::new(gg[(i, j)], 0.0)).norm());
        }
    }
    let to_c = |m: &nalgebra::Matrix2<f64>| CMatrix::from_fn(2, 2, |i, j| Complex::new(m[(i, j)], 0.0));
    let (wg, wd) = (to_c(&gg), to_c(&gd));
    let j = swap_matrix::<f64>();
    let unitarity = (j.adjoint() * &wd * &j - &wg).camax();
    let adjoint = wg.clone().try_inverse().map(|inv| (inv * j.adjoint() * &wd - &j).camax());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rand_c = |rng: &mut ChaCha8Rng| Complex::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
    let exact = (0..100).all(|_| {
        let x = BdVector::new(BdKind::G, rand_c(&mut rng), rand_c(&mut rng));
        apply_ddot(&apply_gdot(&x)) == x
    });
    let c_tr = trace_constant::<f64>();
    let mut worst_ratio = 0.0f64;
    for _ in 0..200 {
        let u = TestFunction1D::<f64>::random(&mut rng);
        let h1 = u.graph_inner(&u, &q).re;
        if h1 > 0.0 {
            worst_ratio = worst_ratio.max(traces(&u).norm_squared() / h1);
        }
    }
    let checks = vec![
        Check::at_most("gram matches quadrature", gram_err, 1e-13 * tol_scale),
        Check::at_most("swap unitary", unitarity, 1e-12 * tol_scale),
        Check::at_most("swap adjoint", adjoint.unwrap_or(f64::INFINITY), 1e-12 * tol_scale),
        Check::holds("swap involution exact", &j * &j == CMatrix::identity(2, 2)),
        Check::holds("ddot gdot identity exact", exact),
        Check::at_most("trace constant bounds samples", worst_ratio / c_tr - 1.0, 1e-12 * tol_scale),
    ];
    Report::new("verify-bd", "boundary-space", seed, tol_scale, checks)
}

fn theory_checks(ts: &TraceSystem<f64>, block: &BlockOperator<f64>, rng: &mut ChaCha8Rng, tol_scale: f64) -> Vec<Check> {
    let h = &block.h;
    let hyp = check_hypothesis_with(ts, rng, 64);
    let violation = if hyp.contains_g0 {
        (hyp.bounds.0 - hyp.observed.0).max(hyp.observed.1 - hyp.bounds.1)
    } else {
        f64::INFINITY
    };
    let mut checks = vec![Check::at_most("hypothesis", violation, HYPOTHESIS_TOL * hyp.bounds.1 * tol_scale)];
    checks.push(Check::at_most("h selfadjoint", h.selfadjoint_defect(), EQUAL_TOL * tol_scale));
    let maximal = h.maximal_monotonicity().map(|r| if r.maximal { -r.min_eigenvalue } else { f64::INFINITY });
    checks.push(measured("h maximal monotone", maximal, MONOTONE_TOL * tol_scale));
    checks.push(Check::at_most("key identity", key_identity_defect(ts, h, 50, rng), IDENTITY_TOL * tol_scale));
    checks.push(Check::at_most("symmetric identity", symmetric_identity_defect(ts, h, 50, rng), IDENTITY_TOL * tol_scale));
    let round_trip = reverse_construct(h).and_then(|back| forward_h(&back)).map(|b| angle(b.h.graph(), h.graph()));
    checks.push(measured("round trip", round_trip, ROUND_TRIP_TOL * tol_scale));

    let mut wrong = 0usize;
    for k in 0..100 {
        let candidate = if k % 10 < 3 { sample_nonmember(block, rng).map(|p| (p, false)) } else { None };
        let ((u, w), member) = candidate.unwrap_or_else(|| (sample_member(block, rng), true));
        match domain_membership(block, Some(ts), &u, &w) {
            Ok((i, ii)) if i == ii && i == member => {}
            _ => wrong += 1,
        }
    }
    checks.push(Check::at_most("domain agreement", wrong as f64, 0.0));

    let q = Quadrature01::new();
    let mut residual = 0.0f64;
    let mut staffans = 0.0f64;
    for _ in 0..20 {
        let (u, w) = sample_member(block, rng);
        let v = ts.sample_e0(rng);
        residual = residual.max(functional_boundary_residual(ts, &u, &w, &v, &q).norm());
        staffans = staffans.max((staffans_form(&u, &w, &q) - ts.k_norm_squared(&traces(&u))).abs());
    }
    checks.push(Check::at_most("D extends functional", residual, IDENTITY_TOL * tol_scale));
    checks.push(Check::at_most("staffans form", staffans, IDENTITY_TOL * tol_scale));
    checks
}

fn initial_data(ev: &EvolutionBlock, rng: &mut ChaCha8Rng) -> maxmon::Result<(GridFunction<f64>, GridFunction<f64>)> {
    match ev.initial {
        InitialData::Bump => Ok((bump(ev.n)?, GridFunction::zeros(ev.n)?)),
        InitialData::Zero => Ok((GridFunction::zeros(ev.n)?, GridFunction::zeros(ev.n)?)),
        InitialData::Random => random_data(ev.n, rng),
    }
}

/// Implicit Euler run of `ev` and its energy check.
pub fn evolution(
    block: &BlockOperator<f64>,
    ev: &EvolutionBlock,
    rng: &mut ChaCha8Rng,
    tol_scale: f64,
) -> (Check, Option<Trajectory<f64>>) {
    let run = EvolutionConfig::new(ev.tau, ev.steps, ev.n)
        .and_then(|cfg| initial_data(ev, rng).and_then(|(u0, w0)| evolve(block, &cfg, &u0, &w0)));
    let value = run.as_ref().map(|t| t.max_relative_increase()).unwrap_or(f64::INFINITY);
    (Check::at_most("energy nonincreasing", value, ENERGY_TOL * tol_scale), run.ok())
}

/// Result of the `scenario` command before anything is written.
pub struct ScenarioRun {
    pub checks: Vec<Check>,
    pub trajectory: Option<Trajectory<f64>>,
}

/// All checks for one scenario. A relation marked `expect_reject` passes
/// when the reverse construction refuses it.
pub fn scenario_checks(
    payload: &Payload,
    expect_reject: bool,
    ev: Option<&EvolutionBlock>,
    seed: u64,
    tol_scale: f64,
) -> ScenarioRun {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    let block = payload.block();
    match payload {
        Payload::TraceSystem(ts) => match &block {
            Ok(b) => checks.extend(theory_checks(ts, b, &mut rng, tol_scale)),
            Err(_) => checks.push(Check::holds("forward_h", false)),
        },
        Payload::BoundaryRelation(h) => {
            let reversed = reverse_construct(h);
            if expect_reject {
                let rejected = matches!(reversed, Err(Error::NotSelfadjoint { .. } | Error::NotMaximalMonotone(_)));
                checks.push(Check::holds("reverse_construct rejects", rejected));
            } else {
                match (&reversed, &block) {
                    (Ok(ts), Ok(b)) => {
                        checks.push(Check::holds("reverse_construct", true));
                        checks.extend(theory_checks(ts, b, &mut rng, tol_scale));
                    }
                    _ => checks.push(Check::holds("reverse_construct", false)),
                }
            }
        }
    }
    let mut trajectory = None;
    if let Some(ev) = ev {
        match &block {
            Ok(b) => {
                let (check, traj) = evolution(b, ev, &mut rng, tol_scale);
                checks.push(check);
                trajectory = traj;
            }
            Err(_) => checks.push(Check::holds("energy nonincreasing", false)),
        }
    }
    ScenarioRun { checks, trajectory }
}

/// Observed order over `grids` against the manufactured solution.
pub fn convergence_checks(
    block: &BlockOperator<f64>,
    tau: f64,
    grids: &[usize],
    tol_scale: f64,
) -> Result<(Vec<Check>, Vec<f64>), CliError> {
    match convergence_study(block, tau, grids) {
        Ok(study) => Ok((vec![Check::at_most("convergence order", (study.order - 2.0).abs(), ORDER_TOL * tol_scale)], study.errors)),
        Err(Error::InvalidArgument(detail)) => Err(CliError::Usage(detail)),
        Err(_) => Ok((vec![Check::at_most("convergence order", f64::INFINITY, ORDER_TOL * tol_scale)], Vec::new())),
    }
}

//! Acceptance suite: one PASS/FAIL line per criterion.

use std::process::ExitCode;

use maxmon::arens::ArensDecomposition;
use maxmon::bdspace::{apply_ddot, apply_gdot, gram_matrices, swap_matrix, BdKind, BdVector, TestFunction1D};
use maxmon::quadrature::Quadrature01;
use maxmon::relation::random::{random_monotone, RandomKind};
use maxmon::relation::{LinearRelation, MINTY_LAMBDAS};
use maxmon::semigroup::{bump, convergence_study, evolve, EvolutionConfig, GridFunction};
use maxmon::systemnode::{
    bd_space, domain_membership, forward_h, full_trace_matrix, key_identity_defect, reverse_construct, sample_member,
    sample_nonmember, scenario_suite, skew_relation, Scenario, TraceSystem,
};
use maxmon::{CMatrix, Error};
use nalgebra::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn max_abs(m: &CMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

fn corpus() -> Vec<LinearRelation<f64>> {
    (0..240u64)
        .map(|i| {
            let dim = 1 + (i as usize % 6);
            let kind = if i % 2 == 0 { RandomKind::Operator } else { RandomKind::Relation };
            random_monotone(dim, kind, 1000 + i)
        })
        .collect()
}

fn suite() -> Vec<Scenario<f64>> {
    scenario_suite(&mut ChaCha8Rng::seed_from_u64(2024))
}

fn trace_system_of(s: &Scenario<f64>) -> TraceSystem<f64> {
    match &s.trace_system {
        Some(ts) => ts.clone(),
        None => reverse_construct(&s.block.h).expect("suite relations are selfadjoint maximal monotone"),
    }
}

fn minty_equivalence(corpus: &[LinearRelation<f64>]) -> Outcome {
    let mut disagreements = 0;
    let mut maximal = 0;
    for c in corpus {
        let verdicts: Vec<bool> = MINTY_LAMBDAS.iter().map(|&l| c.minty_surjective(l).unwrap_or(false)).collect();
        let adjoint_test = c.is_monotone() && c.adjoint().is_monotone();
        if verdicts.iter().any(|&v| v != adjoint_test) {
            disagreements += 1;
        }
        if adjoint_test {
            maximal += 1;
        }
    }
    outcome(
        disagreements == 0,
        format!("{} relations ({maximal} maximal), {disagreements} disagreements", corpus.len()),
    )
}

fn resolvent_nonexpansive(corpus: &[LinearRelation<f64>]) -> Outcome {
    let mut worst = 0.0f64;
    let mut checked = 0;
    for c in corpus.iter().filter(|c| c.is_maximal_monotone().unwrap_or(false)) {
        for &l in &MINTY_LAMBDAS {
            match c.resolvent_norm(l) {
                Ok(n) => worst = worst.max(n),
                Err(_) => worst = f64::INFINITY,
            }
        }
        checked += 1;
    }
    outcome(worst <= 1.0 + 1e-10, format!("{checked} maximal relations, max norm {worst:.15} (<= 1 + 1e-10)"))
}

fn arens_round_trip() -> Outcome {
    let mut worst_angle = 0.0f64;
    let mut min_eig = f64::INFINITY;
    let mut failures = 0;
    let count = 120u64;
    for i in 0..count {
        let c = random_monotone::<f64>(1 + (i as usize % 6), RandomKind::Selfadjoint, 5000 + i);
        match ArensDecomposition::decompose(&c) {
            Ok(dec) => {
                let back = dec.reconstruct();
                match back.graph().largest_angle_sine(c.graph()) {
                    Some(s) => worst_angle = worst_angle.max(s.min(1.0).asin()),
                    None => failures += 1,
                }
                if let Some(&lo) = dec.eigenvalues().first() {
                    min_eig = min_eig.min(lo);
                }
            }
            Err(_) => failures += 1,
        }
    }
    let pass = failures == 0 && worst_angle < 1e-10 && min_eig >= -1e-12;
    outcome(
        pass,
        format!("{count} selfadjoint relations, max angle {worst_angle:.2e} (< 1e-10), min eigenvalue of S {min_eig:.2e} (>= -1e-12), {failures} failures"),
    )
}

fn boundary_space() -> Outcome {
    let q = Quadrature01::<f64>::new();
    let basis = [TestFunction1D::hyperbolic(Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)), TestFunction1D::hyperbolic(Complex::new(0.0, 0.0), Complex::new(1.0, 0.0))];
    let (gg, gd) = gram_matrices::<f64>();
    let mut gram_err = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            let quad = basis[i].graph_inner(&basis[j], &q);
            gram_err = gram_err.max((quad - Complex::new(gg[(i, j)], 0.0)).norm());
        }
    }
    let to_c = |m: &nalgebra::Matrix2<f64>| CMatrix::from_fn(2, 2, |i, j| Complex::new(m[(i, j)], 0.0));
    let (wg, wd) = (to_c(&gg), to_c(&gd));
    let j = swap_matrix::<f64>();
    let unitarity = max_abs(&(j.adjoint() * &wd * &j - &wg));
    let adjoint = wg.clone().try_inverse().expect("invertible") * j.adjoint() * &wd;
    let adjoint_err = max_abs(&(adjoint - &j));
    let exact_matrix = &j * &j == CMatrix::identity(2, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let exact_maps = (0..100).all(|_| {
        let x = BdVector::new(
            BdKind::G,
            Complex::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)),
            Complex::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)),
        );
        apply_ddot(&apply_gdot(&x)) == x
    });
    let pass = gram_err <= 1e-13 && unitarity <= 1e-12 && adjoint_err <= 1e-12 && exact_matrix && exact_maps;
    outcome(
        pass,
        format!("Gram vs quadrature {gram_err:.2e} (<= 1e-13), unitarity {unitarity:.2e}, adjoint {adjoint_err:.2e} (<= 1e-12), Ddot Gdot = 1 exact: {}", exact_matrix && exact_maps),
    )
}

fn forward_closed_forms(suite: &[Scenario<f64>]) -> Outcome {
    let bd = bd_space::<f64>();
    let pairs = |a: CMatrix<f64>, b: CMatrix<f64>| LinearRelation::from_pairs(&bd, &bd, &a, &b).expect("2x2");
    let dir = forward_h(&TraceSystem::dirichlet()).expect("valid");
    let neu = forward_h(&TraceSystem::neumann()).expect("valid");
    let full = forward_h(&TraceSystem::full_trace()).expect("valid");
    let angle = |a: &LinearRelation<f64>, b: &LinearRelation<f64>| {
        a.graph().largest_angle_sine(b.graph()).map_or(f64::INFINITY, |s| s.min(1.0).asin())
    };
    let errs = [
        angle(&dir.h, &pairs(CMatrix::zeros(2, 2), CMatrix::identity(2, 2))),
        angle(&neu.h, &pairs(CMatrix::identity(2, 2), CMatrix::zeros(2, 2))),
        angle(&full.h, &LinearRelation::graph_of(&bd, &bd, &full_trace_matrix()).expect("2x2")),
    ];
    let worst = errs.iter().copied().fold(0.0, f64::max);
    let mut bad = Vec::new();
    for s in suite {
        let h = &s.block.h;
        let ok = h.dim() == 2 && h.is_selfadjoint() && h.is_maximal_monotone().unwrap_or(false);
        if !ok {
            bad.push(s.name.clone());
        }
    }
    outcome(
        worst <= 1e-10 && bad.is_empty(),
        format!("closed-form angles {:.2e}/{:.2e}/{:.2e} (<= 1e-10), {} relations maximal monotone and selfadjoint, failing: {bad:?}", errs[0], errs[1], errs[2], suite.len()),
    )
}

fn key_identity(suite: &[Scenario<f64>]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let worst = suite
        .iter()
        .map(|s| key_identity_defect(&trace_system_of(s), &s.block.h, 50, &mut rng))
        .fold(0.0, f64::max);
    outcome(worst <= 1e-10, format!("{} scenarios x 50 samples, max defect {worst:.2e} (<= 1e-10)", suite.len()))
}

fn main_round_trip(suite: &[Scenario<f64>]) -> Outcome {
    let mut worst = 0.0f64;
    let mut errors = Vec::new();
    for s in suite {
        match reverse_construct(&s.block.h).and_then(|ts| forward_h(&ts)) {
            Ok(b) => {
                let a = b.h.graph().largest_angle_sine(s.block.h.graph()).map_or(f64::INFINITY, |x| x.min(1.0).asin());
                worst = worst.max(a);
            }
            Err(e) => errors.push(format!("{}: {e}", s.name)),
        }
    }
    let has_multivalued = suite.iter().any(|s| s.name == "random-multivalued" && s.block.h.multivalued_part().dim() > 0);
    outcome(
        worst <= 1e-9 && errors.is_empty() && has_multivalued,
        format!("{} scenarios, max angle {worst:.2e} (<= 1e-9), errors {errors:?}", suite.len()),
    )
}

fn skew_rejected() -> Outcome {
    let skew = skew_relation::<f64>();
    let maximal = skew.is_maximal_monotone().unwrap_or(false);
    let result = reverse_construct(&skew);
    let rejected = matches!(result, Err(Error::NotSelfadjoint { .. }));
    let detail = match result {
        Err(e) => e.to_string(),
        Ok(_) => "accepted".into(),
    };
    outcome(maximal && rejected, format!("skew h maximal monotone: {maximal}, reverse_construct: {detail}"))
}

fn domain_agreement(suite: &[Scenario<f64>]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut disagreements = 0;
    let mut misclassified = 0;
    let mut nonmembers = 0;
    let mut total = 0;
    for s in suite {
        let ts = trace_system_of(s);
        for k in 0..100 {
            let deliberate = k % 10 < 3;
            let (u, w) = if deliberate {
                nonmembers += 1;
                sample_nonmember(&s.block, &mut rng).expect("constraints are nonempty")
            } else {
                sample_member(&s.block, &mut rng)
            };
            let (i, ii) = domain_membership(&s.block, Some(&ts), &u, &w).expect("trace system given");
            total += 1;
            if i != ii {
                disagreements += 1;
            }
            if i == deliberate {
                misclassified += 1;
            }
        }
    }
    outcome(
        disagreements == 0 && misclassified == 0,
        format!("{total} pairs over {} scenarios ({nonmembers} non-members), {disagreements} disagreements, {misclassified} misclassified", suite.len()),
    )
}

fn semigroup(suite: &[Scenario<f64>]) -> Outcome {
    let mut orders = Vec::new();
    let mut order_ok = true;
    for s in suite {
        match convergence_study(&s.block, 0.1, &[64, 128, 256]) {
            Ok(study) => {
                order_ok &= (study.order - 2.0).abs() <= 0.2;
                orders.push(study.order);
            }
            Err(_) => order_ok = false,
        }
    }
    let n = 256;
    let cfg = EvolutionConfig::new(0.01, 100, n).expect("valid");
    let zero = GridFunction::zeros(n).expect("valid");
    let u0 = bump(n).expect("valid");
    let mut worst_increase = 0.0f64;
    let mut strict = false;
    let mut energy_ok = true;
    for s in suite {
        match evolve(&s.block, &cfg, &u0, &zero) {
            Ok(traj) => {
                worst_increase = worst_increase.max(traj.max_relative_increase());
                if s.name == "full-trace" {
                    strict = traj.strictly_decreasing(1e-12);
                }
            }
            Err(_) => energy_ok = false,
        }
    }
    energy_ok &= worst_increase <= 1e-3;
    let lo = orders.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = orders.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    outcome(
        order_ok && energy_ok && strict,
        format!("orders in [{lo:.3}, {hi:.3}] (2 +- 0.2), max energy increase {worst_increase:.2e} (<= 1e-3), impedance strictly decreasing: {strict}"),
    )
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() -> ExitCode {
    let corpus = corpus();
    let suite = suite();
    let criteria: Vec<Criterion> = vec![
        ("Minty equivalence", Box::new(|| minty_equivalence(&corpus))),
        ("resolvent nonexpansiveness", Box::new(|| resolvent_nonexpansive(&corpus))),
        ("Arens round trip", Box::new(arens_round_trip)),
        ("1D boundary space", Box::new(boundary_space)),
        ("forward_h closed forms", Box::new(|| forward_closed_forms(&suite))),
        ("key identity", Box::new(|| key_identity(&suite))),
        ("trace system round trip", Box::new(|| main_round_trip(&suite))),
        ("skew relation rejected", Box::new(skew_rejected)),
        ("domain agreement", Box::new(|| domain_agreement(&suite))),
        ("semigroup", Box::new(|| semigroup(&suite))),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!("criterion {:>2} {} {name}: {}", k + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

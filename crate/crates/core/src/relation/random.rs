//! Seeded generators of monotone linear relations for property corpora.

use nalgebra::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hilbert::{HilbertSpace, Subspace};
use crate::relation::LinearRelation;
use crate::scalar::{CMatrix, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomKind {
    /// Graph of `W⁻¹(B + N)` with `B ⪰ 0` and `N` skew-Hermitian.
    Operator,
    /// A monotone operator restricted to a random subspace, plus a
    /// multivalued part orthogonal to that subspace.
    Relation,
    /// `S ⊕ ({0} × U⊥)` with `S ⪰ 0` selfadjoint on a random `U`.
    Selfadjoint,
}

fn random_matrix<T: Real>(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix<T> {
    CMatrix::from_fn(rows, cols, |_, _| {
        Complex::new(T::lit(rng.random_range(-1.0..1.0)), T::lit(rng.random_range(-1.0..1.0)))
    })
}

/// Hermitian PSD matrix whose rank is sometimes deficient.
fn random_psd<T: Real>(rng: &mut ChaCha8Rng, n: usize) -> CMatrix<T> {
    let rank = if rng.random_bool(0.3) { rng.random_range(0..=n) } else { n };
    let f = random_matrix::<T>(rng, n, rank);
    &f * f.adjoint()
}

fn random_skew<T: Real>(rng: &mut ChaCha8Rng, n: usize) -> CMatrix<T> {
    let k = random_matrix::<T>(rng, n, n);
    (&k - k.adjoint()) * Complex::new(T::lit(0.5), T::zero())
}

/// Well-conditioned random Gram matrix `I + F F† / n`.
pub fn random_gram<T: Real>(rng: &mut ChaCha8Rng, n: usize) -> CMatrix<T> {
    let f = random_matrix::<T>(rng, n, n);
    CMatrix::identity(n, n) + &f * f.adjoint() * Complex::new(T::lit(1.0 / n.max(1) as f64), T::zero())
}

/// Deterministic monotone relation on a space with a seeded random Gram.
pub fn random_monotone<T: Real>(dim: usize, kind: RandomKind, seed: u64) -> LinearRelation<T> {
    assert!(dim >= 1, "dimension must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let space = HilbertSpace::new(random_gram(&mut rng, dim)).expect("random gram is positive definite");
    random_monotone_on(&space, kind, &mut rng)
}

/// Monotone relation of the requested kind on a given space.
pub fn random_monotone_on<T: Real>(space: &HilbertSpace<T>, kind: RandomKind, rng: &mut ChaCha8Rng) -> LinearRelation<T> {
    let n = space.dim();
    let gram_inv = space.gram().clone().try_inverse().expect("gram invertible");
    match kind {
        RandomKind::Operator => {
            let t = &gram_inv * (random_psd::<T>(rng, n) + random_skew::<T>(rng, n));
            LinearRelation::graph_of(space, space, &t).expect("square operator")
        }
        RandomKind::Relation => {
            let t = &gram_inv * (random_psd::<T>(rng, n) + random_skew::<T>(rng, n));
            let r = rng.random_range(0..=n);
            let domain = Subspace::span(space, &random_matrix(rng, n, r)).expect("domain");
            let perp = domain.complement();
            // Half of the draws are maximal: the multivalued part fills the complement.
            let s = if rng.random_bool(0.5) { perp.dim() } else { rng.random_range(0..=perp.dim()) };
            let mult = perp.basis() * random_matrix::<T>(rng, perp.dim(), s);
            let d = domain.basis();
            let mut firsts = CMatrix::zeros(n, d.ncols() + s);
            firsts.columns_mut(0, d.ncols()).copy_from(d);
            let mut seconds = CMatrix::zeros(n, d.ncols() + s);
            seconds.columns_mut(0, d.ncols()).copy_from(&(&t * d));
            seconds.columns_mut(d.ncols(), s).copy_from(&mult);
            LinearRelation::from_pairs(space, space, &firsts, &seconds).expect("pair blocks")
        }
        RandomKind::Selfadjoint => {
            let r = rng.random_range(0..=n);
            let u = Subspace::span(space, &random_matrix(rng, n, r)).expect("operator subspace");
            let q = u.basis();
            let k = q.ncols();
            let s = random_psd::<T>(rng, k);
            let perp = u.complement();
            let mut firsts = CMatrix::zeros(n, n);
            firsts.columns_mut(0, k).copy_from(q);
            let mut seconds = CMatrix::zeros(n, n);
            seconds.columns_mut(0, k).copy_from(&(q * s));
            seconds.columns_mut(k, perp.dim()).copy_from(perp.basis());
            LinearRelation::from_pairs(space, space, &firsts, &seconds).expect("pair blocks")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_in_seed() {
        let a = random_monotone::<f64>(4, RandomKind::Relation, 9);
        let b = random_monotone::<f64>(4, RandomKind::Relation, 9);
        assert_eq!(a.graph().basis(), b.graph().basis());
        assert_eq!(a.src().gram(), b.src().gram());
    }

    #[test]
    fn selfadjoint_kind_is_selfadjoint() {
        for seed in 0..20 {
            let c = random_monotone::<f64>(1 + (seed as usize % 5), RandomKind::Selfadjoint, seed);
            assert!(c.is_selfadjoint(), "seed {seed}");
            assert!(c.is_monotone());
        }
    }

    #[test]
    fn operators_are_maximal() {
        for seed in 0..100 {
            let c = random_monotone::<f64>(4, RandomKind::Operator, seed);
            assert!(c.is_maximal_monotone().unwrap(), "seed {seed}");
        }
    }
}

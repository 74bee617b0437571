//! Operator part plus pure multivalued part of a selfadjoint relation,
//! `C = S ⊕ ({0} × U⊥)` with `U` the closure of the domain, and square roots
//! of the (monotone) operator part.
//!
//! In finite dimension `D(S) = D(√S) = U`; [`SqrtOperator::domain`] records
//! that collapse explicitly.

use nalgebra::Complex;

use crate::error::{Error, Result};
use crate::hilbert::Subspace;
use crate::linalg;
use crate::relation::{LinearRelation, EQUAL_TOL};
use crate::scalar::{CMatrix, Real};

/// Eigenvalue floor (relative to `max(λ_max, 1)`) for treating `S` as monotone.
pub const PSD_TOL: f64 = 1e-11;

#[derive(Debug, Clone)]
pub struct ArensDecomposition<T: Real> {
    /// `U = [Y]C`, with the Gram-orthonormal basis used for `s_matrix`.
    pub u_space: Subspace<T>,
    /// `S` in the coordinates of `u_space.basis()`; Hermitian.
    pub s_matrix: CMatrix<T>,
    /// `C[{0}] = U⊥`.
    pub mult_part: Subspace<T>,
}

impl<T: Real> ArensDecomposition<T> {
    /// Splits a selfadjoint relation. Non-selfadjoint input is rejected, never
    /// symmetrized.
    pub fn decompose(c: &LinearRelation<T>) -> Result<Self> {
        if !c.src().same_as(c.dst()) {
            return Err(Error::DimensionMismatch("decomposition needs a relation on one space".into()));
        }
        if !c.is_selfadjoint() {
            return Err(Error::NotSelfadjoint { defect: c.selfadjoint_defect().as_f64() });
        }
        let space = c.src();
        let u_space = c.domain();
        let mult_part = c.multivalued_part();
        if !mult_part.equals(&u_space.complement(), T::tol(EQUAL_TOL)) {
            return Err(Error::Inconsistent("multivalued part is not the complement of the domain".into()));
        }
        let q = u_space.basis();
        let k = q.ncols();
        let n = space.dim();
        let mut lifted = CMatrix::zeros(2 * n, 2 * k);
        lifted.view_mut((0, 0), (n, k)).copy_from(q);
        lifted.view_mut((n, k), (n, k)).copy_from(q);
        let operator_part = c.graph().intersection(&Subspace::span(c.graph().space(), &lifted)?);
        if operator_part.dim() != k {
            return Err(Error::Inconsistent(format!(
                "operator part has dimension {} on a {}-dimensional domain",
                operator_part.dim(),
                k
            )));
        }
        let basis = operator_part.basis();
        let coords_a = space.inner_matrix(q, &basis.rows(0, n).into_owned());
        let coords_b = space.inner_matrix(q, &basis.rows(n, n).into_owned());
        let inv = coords_a
            .try_inverse()
            .ok_or_else(|| Error::Inconsistent("operator part is not a mapping".into()))?;
        let raw = coords_b * inv;
        let half = Complex::new(T::lit(0.5), T::zero());
        let s_matrix = (&raw + raw.adjoint()) * half;
        Ok(Self { u_space, s_matrix, mult_part })
    }

    /// `S ⊕ ({0} × U⊥)` as a relation.
    pub fn reconstruct(&self) -> LinearRelation<T> {
        let space = self.u_space.space();
        let n = space.dim();
        let q = self.u_space.basis();
        let k = q.ncols();
        let m = self.mult_part.dim();
        let mut firsts = CMatrix::zeros(n, k + m);
        firsts.columns_mut(0, k).copy_from(q);
        let mut seconds = CMatrix::zeros(n, k + m);
        seconds.columns_mut(0, k).copy_from(&(q * &self.s_matrix));
        seconds.columns_mut(k, m).copy_from(self.mult_part.basis());
        LinearRelation::from_pairs(space, space, &firsts, &seconds).expect("blocks match")
    }

    /// Eigenvalues of `S`, ascending.
    pub fn eigenvalues(&self) -> Vec<T> {
        linalg::hermitian_eigen(&self.s_matrix).0
    }

    pub fn sqrt_operator(&self) -> Result<SqrtOperator<T>> {
        SqrtOperator::new(self)
    }
}

/// `√S` for monotone `S`, stored with its spectral data in descending order.
#[derive(Debug, Clone)]
pub struct SqrtOperator<T: Real> {
    /// `√S` in the coordinates of `domain().basis()`.
    pub matrix: CMatrix<T>,
    /// Eigenvalues of `S`, descending, with roundoff negatives clamped to zero.
    pub eigenvalues: Vec<T>,
    /// Matching eigenvectors (columns) in `U` coordinates.
    pub eigenvectors: CMatrix<T>,
    domain: Subspace<T>,
}

impl<T: Real> SqrtOperator<T> {
    fn new(dec: &ArensDecomposition<T>) -> Result<Self> {
        let (mut values, vectors) = linalg::hermitian_eigen(&dec.s_matrix);
        let k = values.len();
        let floor = T::tol(PSD_TOL) * values.last().copied().unwrap_or_else(T::zero).max(T::one());
        if let Some(&lo) = values.first() {
            if lo < -floor {
                return Err(Error::NotMonotone { min_eigenvalue: lo.as_f64() });
            }
        }
        values.reverse();
        let vectors = CMatrix::from_fn(k, k, |r, c| vectors[(r, k - 1 - c)]);
        // Roundoff-sized eigenvalues of either sign are zeros of S.
        let values: Vec<T> = values.into_iter().map(|v| if v.abs() <= floor { T::zero() } else { v }).collect();
        let roots = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            k,
            values.iter().map(|v| Complex::new(v.sqrt(), T::zero())),
        ));
        let matrix = &vectors * roots * vectors.adjoint();
        Ok(Self { matrix, eigenvalues: values, eigenvectors: vectors, domain: dec.u_space.clone() })
    }

    /// `D(√S)`, which equals `U` in finite dimension.
    pub fn domain(&self) -> &Subspace<T> {
        &self.domain
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::HilbertSpace;

    type R = LinearRelation<f64>;

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    fn mat(n: usize, entries: &[f64]) -> CMatrix<f64> {
        CMatrix::from_row_slice(n, entries.len() / n, &entries.iter().map(|&x| c(x)).collect::<Vec<_>>())
    }

    fn h2() -> HilbertSpace<f64> {
        HilbertSpace::standard(2)
    }

    #[test]
    fn dirichlet_type_relation() {
        let rel = R::multivalued(&h2(), &Subspace::whole(&h2())).unwrap();
        let dec = ArensDecomposition::decompose(&rel).unwrap();
        assert_eq!(dec.u_space.dim(), 0);
        assert_eq!(dec.s_matrix.nrows(), 0);
        assert_eq!(dec.mult_part.dim(), 2);
        let root = dec.sqrt_operator().unwrap();
        assert_eq!(root.matrix.nrows(), 0);
        assert!(dec.reconstruct().equals(&rel, 1e-10));
    }

    #[test]
    fn hermitian_operator() {
        let rel = R::graph_of(&h2(), &h2(), &mat(2, &[3.0, 0.0, 0.0, 5.0])).unwrap();
        let dec = ArensDecomposition::decompose(&rel).unwrap();
        assert_eq!(dec.u_space.dim(), 2);
        assert_eq!(dec.mult_part.dim(), 0);
        let q = dec.u_space.basis();
        // S expressed back in standard coordinates.
        let s_std = q * &dec.s_matrix * q.adjoint();
        assert!((s_std - mat(2, &[3.0, 0.0, 0.0, 5.0])).norm() < 1e-12);
    }

    #[test]
    fn mixed_relation() {
        // span{(e1, 2e1), (0, e2)}
        let rel = R::from_pairs(&h2(), &h2(), &mat(2, &[1.0, 0.0, 0.0, 0.0]), &mat(2, &[2.0, 0.0, 0.0, 1.0])).unwrap();
        assert!(rel.is_selfadjoint());
        assert!(rel.adjoint_via_complement().equals(&rel, 1e-10));
        let dec = ArensDecomposition::decompose(&rel).unwrap();
        assert_eq!(dec.u_space.dim(), 1);
        assert!((dec.s_matrix[(0, 0)] - c(2.0)).norm() < 1e-12);
        let e2 = Subspace::span(&h2(), &mat(2, &[0.0, 1.0])).unwrap();
        assert!(dec.mult_part.equals(&e2, 1e-10));
    }

    #[test]
    fn skew_is_rejected() {
        let rel = R::graph_of(&h2(), &h2(), &mat(2, &[0.0, 1.0, -1.0, 0.0])).unwrap();
        assert!(matches!(ArensDecomposition::decompose(&rel), Err(Error::NotSelfadjoint { .. })));
    }

    #[test]
    fn square_roots() {
        let cases: [(&[f64], &[f64]); 2] = [(&[4.0, 0.0, 0.0, 9.0], &[2.0, 0.0, 0.0, 3.0]), (&[0.0, 0.0, 0.0, 0.0], &[0.0, 0.0, 0.0, 0.0])];
        for (s, expected) in cases {
            let rel = R::graph_of(&h2(), &h2(), &mat(2, s)).unwrap();
            let dec = ArensDecomposition::decompose(&rel).unwrap();
            let root = dec.sqrt_operator().unwrap();
            let q = dec.u_space.basis();
            let got = q * &root.matrix * q.adjoint();
            assert!((&got - mat(2, expected)).norm() < 1e-12, "{got} {:?}", root.eigenvalues);
        }
        // [[2,1],[1,2]] has eigenpairs 1 and 3, so √S has eigenvalues 1 and √3.
        let s = mat(2, &[2.0, 1.0, 1.0, 2.0]);
        let dec = ArensDecomposition::decompose(&R::graph_of(&h2(), &h2(), &s).unwrap()).unwrap();
        let root = dec.sqrt_operator().unwrap();
        assert!((&root.matrix * &root.matrix - &dec.s_matrix).norm() < 1e-11 * 3.0);
        let (vals, _) = linalg::hermitian_eigen(&root.matrix);
        assert!((vals[0] - 1.0).abs() < 1e-12 && (vals[1] - 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(root.eigenvalues.len(), 2);
        assert!(root.eigenvalues[0] > root.eigenvalues[1]);
    }

    #[test]
    fn negative_operator_has_no_root() {
        let rel = R::graph_of(&h2(), &h2(), &mat(2, &[-1.0, 0.0, 0.0, 2.0])).unwrap();
        let dec = ArensDecomposition::decompose(&rel).unwrap();
        assert!(matches!(dec.sqrt_operator(), Err(Error::NotMonotone { .. })));
    }
}

//! Finite-dimensional complex Hilbert spaces with Gram inner products and
//! the subspace calculus built on top of them.
//!
//! The inner product is `⟨x|y⟩ = x† W y`: conjugate linear in the first
//! argument, linear in the second. Every subspace is stored through a basis
//! that is orthonormal for `W`; internally the Cholesky factor `W = R†R`
//! maps the space isometrically onto `ℂⁿ` with the standard inner product.

use std::sync::Arc;

use nalgebra::Complex;

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{CMatrix, CVector, Cx, Real};

#[derive(Debug)]
struct SpaceData<T: Real> {
    gram: CMatrix<T>,
    /// Upper factor `R` with `gram = R† R`.
    factor: CMatrix<T>,
    factor_inv: CMatrix<T>,
}

/// A complex Hilbert space `ℂⁿ` equipped with a Hermitian positive definite
/// Gram matrix. Cheap to clone.
#[derive(Debug, Clone)]
pub struct HilbertSpace<T: Real> {
    data: Arc<SpaceData<T>>,
}

impl<T: Real> HilbertSpace<T> {
    /// Validates `gram` and precomputes its Cholesky factor.
    pub fn new(gram: CMatrix<T>) -> Result<Self> {
        let n = gram.nrows();
        if gram.ncols() != n {
            return Err(Error::InvalidGram(format!("{}x{} is not square", n, gram.ncols())));
        }
        if n == 0 {
            return Ok(Self::from_parts(gram.clone(), gram.clone(), gram));
        }
        let scale = linalg::max_abs(&gram);
        let skew = linalg::max_abs(&(&gram - gram.adjoint()));
        if skew > T::tol(1e-14) * scale {
            return Err(Error::InvalidGram(format!("Hermitian defect {:.3e}", skew.as_f64())));
        }
        let (eigs, _) = linalg::hermitian_eigen(&gram);
        let (lo, hi) = (eigs[0], eigs[n - 1]);
        if !(lo > T::tol(1e-12) * hi) {
            return Err(Error::InvalidGram(format!(
                "eigenvalue range [{:.3e}, {:.3e}] is not positive definite",
                lo.as_f64(),
                hi.as_f64()
            )));
        }
        let half = Complex::new(T::lit(0.5), T::zero());
        let sym = (&gram + gram.adjoint()) * half;
        let chol = sym
            .clone()
            .cholesky()
            .ok_or_else(|| Error::InvalidGram("Cholesky factorization failed".into()))?;
        let factor = chol.l().adjoint();
        let factor_inv = factor
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidGram("singular Cholesky factor".into()))?;
        Ok(Self::from_parts(sym, factor, factor_inv))
    }

    fn from_parts(gram: CMatrix<T>, factor: CMatrix<T>, factor_inv: CMatrix<T>) -> Self {
        Self { data: Arc::new(SpaceData { gram, factor, factor_inv }) }
    }

    /// `ℂⁿ` with the standard inner product.
    pub fn standard(n: usize) -> Self {
        let id = CMatrix::identity(n, n);
        Self::from_parts(id.clone(), id.clone(), id)
    }

    /// Orthogonal direct sum `self ⊕ other` (block diagonal Gram).
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (n, m) = (self.dim(), other.dim());
        let block = |a: &CMatrix<T>, b: &CMatrix<T>| {
            let mut out = CMatrix::zeros(n + m, n + m);
            out.view_mut((0, 0), (n, n)).copy_from(a);
            out.view_mut((n, n), (m, m)).copy_from(b);
            out
        };
        Self::from_parts(
            block(self.gram(), other.gram()),
            block(&self.data.factor, &other.data.factor),
            block(&self.data.factor_inv, &other.data.factor_inv),
        )
    }

    pub fn dim(&self) -> usize {
        self.data.gram.nrows()
    }

    pub fn gram(&self) -> &CMatrix<T> {
        &self.data.gram
    }

    pub fn inner(&self, x: &CVector<T>, y: &CVector<T>) -> Cx<T> {
        (x.adjoint() * self.gram() * y)[(0, 0)]
    }

    pub fn norm(&self, x: &CVector<T>) -> T {
        self.inner(x, x).re.max(T::zero()).sqrt()
    }

    /// Matrix of inner products `⟨a_i|b_j⟩` between the columns of `a` and `b`.
    pub fn inner_matrix(&self, a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
        a.adjoint() * self.gram() * b
    }

    /// Isometric coordinates: `‖R x‖₂ = ‖x‖`.
    pub fn to_isometric(&self, m: &CMatrix<T>) -> CMatrix<T> {
        &self.data.factor * m
    }

    pub fn from_isometric(&self, z: &CMatrix<T>) -> CMatrix<T> {
        &self.data.factor_inv * z
    }

    /// Operator norm of `map: self -> target` measured in the two Gram norms.
    pub fn operator_norm(&self, map: &CMatrix<T>, target: &HilbertSpace<T>) -> T {
        linalg::spectral_norm(&(&target.data.factor * map * &self.data.factor_inv))
    }

    /// True when both spaces carry the same Gram matrix.
    pub fn same_as(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.data, &other.data) {
            return true;
        }
        self.dim() == other.dim()
            && linalg::max_abs(&(self.gram() - other.gram()))
                <= T::tol(1e-14) * linalg::max_abs(self.gram()).max(T::one())
    }
}

/// A subspace stored through a Gram-orthonormal basis of exact rank.
#[derive(Debug, Clone)]
pub struct Subspace<T: Real> {
    space: HilbertSpace<T>,
    basis: CMatrix<T>,
}

impl<T: Real> Subspace<T> {
    /// Gram-orthonormal basis of the column span of `spanning`.
    ///
    /// Rank is decided by singular values of the isometric image relative to
    /// the largest one (threshold `1e-10`).
    pub fn span(space: &HilbertSpace<T>, spanning: &CMatrix<T>) -> Result<Self> {
        if spanning.nrows() != space.dim() {
            return Err(Error::DimensionMismatch(format!(
                "spanning set has {} rows, space has dimension {}",
                spanning.nrows(),
                space.dim()
            )));
        }
        let z = linalg::column_space(&space.to_isometric(spanning));
        Ok(Self::from_isometric(space, &z))
    }

    /// Like [`Self::span`] but with the rank threshold relative to
    /// `max(σ_max, reference)`; used for blocks of orthonormal bases.
    pub fn span_scaled(space: &HilbertSpace<T>, spanning: &CMatrix<T>, reference: T) -> Result<Self> {
        if spanning.nrows() != space.dim() {
            return Err(Error::DimensionMismatch(format!(
                "spanning set has {} rows, space has dimension {}",
                spanning.nrows(),
                space.dim()
            )));
        }
        let z = linalg::column_space_scaled(&space.to_isometric(spanning), reference);
        Ok(Self::from_isometric(space, &z))
    }

    fn from_isometric(space: &HilbertSpace<T>, z: &CMatrix<T>) -> Self {
        Self { space: space.clone(), basis: space.from_isometric(z) }
    }

    pub fn zero(space: &HilbertSpace<T>) -> Self {
        Self { space: space.clone(), basis: CMatrix::zeros(space.dim(), 0) }
    }

    pub fn whole(space: &HilbertSpace<T>) -> Self {
        Self::from_isometric(space, &CMatrix::identity(space.dim(), space.dim()))
    }

    pub fn space(&self) -> &HilbertSpace<T> {
        &self.space
    }

    pub fn basis(&self) -> &CMatrix<T> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn codim(&self) -> usize {
        self.space.dim() - self.dim()
    }

    fn isometric(&self) -> CMatrix<T> {
        self.space.to_isometric(&self.basis)
    }

    /// Gram-orthogonal complement.
    pub fn complement(&self) -> Self {
        let n = self.space.dim();
        if self.dim() == 0 {
            return Self::whole(&self.space);
        }
        if self.dim() == n {
            return Self::zero(&self.space);
        }
        let z = linalg::null_space(&self.isometric().adjoint());
        Self::from_isometric(&self.space, &z)
    }

    /// Gram-orthogonal projection of `x`.
    pub fn project(&self, x: &CVector<T>) -> CVector<T> {
        &self.basis * (self.basis.adjoint() * self.space.gram() * x)
    }

    /// Matrix of the Gram-orthogonal projection.
    pub fn projector(&self) -> CMatrix<T> {
        &self.basis * self.basis.adjoint() * self.space.gram()
    }

    /// Norm of the component of `x` orthogonal to the subspace.
    pub fn distance(&self, x: &CVector<T>) -> T {
        self.space.norm(&(x - self.project(x)))
    }

    /// `‖B†WB − I‖_F` for the stored basis.
    pub fn orthonormality_defect(&self) -> T {
        let k = self.dim();
        (self.space.inner_matrix(&self.basis, &self.basis) - CMatrix::identity(k, k)).norm()
    }

    /// Sine of the largest principal angle to `other`; `None` when the
    /// dimensions differ.
    pub fn largest_angle_sine(&self, other: &Self) -> Option<T> {
        if self.dim() != other.dim() {
            return None;
        }
        if self.dim() == 0 {
            return Some(T::zero());
        }
        let za = self.isometric();
        let zb = other.isometric();
        let residual = &zb - &za * (za.adjoint() * &zb);
        Some(linalg::spectral_norm(&residual))
    }

    /// Equal dimensions and largest principal angle below `tol`.
    pub fn equals(&self, other: &Self, tol: T) -> bool {
        match self.largest_angle_sine(other) {
            Some(s) => s.min(T::one()).asin() < tol,
            None => false,
        }
    }

    pub fn contains(&self, x: &CVector<T>, tol: T) -> bool {
        self.distance(x) <= tol * self.space.norm(x).max(T::one())
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut cols = CMatrix::zeros(self.space.dim(), self.dim() + other.dim());
        cols.columns_mut(0, self.dim()).copy_from(&self.basis);
        cols.columns_mut(self.dim(), other.dim()).copy_from(&other.basis);
        Self::span(&self.space, &cols).expect("same space")
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.complement().sum(&other.complement()).complement()
    }

    /// `map[self]`, a subspace of `target`.
    pub fn image(&self, map: &CMatrix<T>, target: &HilbertSpace<T>) -> Result<Self> {
        if map.ncols() != self.space.dim() || map.nrows() != target.dim() {
            return Err(Error::DimensionMismatch(format!(
                "map is {}x{}, expected {}x{}",
                map.nrows(),
                map.ncols(),
                target.dim(),
                self.space.dim()
            )));
        }
        Subspace::span(target, &(map * &self.basis))
    }

    /// `{x ∈ source : map x ∈ self}`.
    pub fn preimage(&self, map: &CMatrix<T>, source: &HilbertSpace<T>) -> Result<Self> {
        if map.nrows() != self.space.dim() || map.ncols() != source.dim() {
            return Err(Error::DimensionMismatch(format!(
                "map is {}x{}, expected {}x{}",
                map.nrows(),
                map.ncols(),
                self.space.dim(),
                source.dim()
            )));
        }
        let perp = self.complement();
        let conditions = self.space.inner_matrix(perp.basis(), map);
        let kernel = linalg::null_space(&conditions);
        Subspace::span(source, &kernel)
    }
}

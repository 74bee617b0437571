//! Linear relations `C ⊆ X ⊕ Y` and their calculus: inverse, adjoint,
//! pre- and post-sets, composition, `1 + λC`, monotonicity, maximal
//! monotonicity and resolvents.
//!
//! A relation is stored as its graph, a [`Subspace`] of the direct sum
//! `src ⊕ dst`. A graph basis column splits into a domain part (the first
//! `src.dim()` rows) and a value part (the remaining rows).

use nalgebra::Complex;

use crate::error::{Error, Result};
use crate::hilbert::{HilbertSpace, Subspace};
use crate::linalg;
use crate::scalar::{CMatrix, CVector, Real};

pub mod random;

pub use random::{random_monotone, random_monotone_on, RandomKind};

/// Eigenvalue floor for the symmetrized graph form.
pub const MONOTONE_TOL: f64 = 1e-11;
/// Principal-angle tolerance for relation identities such as `C = C*`.
pub const EQUAL_TOL: f64 = 1e-10;
/// Step sizes used to cross-check Minty's surjectivity criterion.
pub const MINTY_LAMBDAS: [f64; 3] = [1.0, 0.1, 10.0];

#[derive(Debug, Clone)]
pub struct LinearRelation<T: Real> {
    src: HilbertSpace<T>,
    dst: HilbertSpace<T>,
    graph: Subspace<T>,
}

#[derive(Debug, Clone)]
pub struct MonotonicityReport<T: Real> {
    pub monotone: bool,
    pub maximal: bool,
    /// Smallest eigenvalue of the Hermitian part of `⟨a_i|b_j⟩`.
    pub min_eigenvalue: T,
    /// A graph element `(x, y)` with `Re⟨x|y⟩ < 0` when not monotone.
    pub witness: Option<(CVector<T>, CVector<T>)>,
    pub minty_lambdas_checked: Vec<T>,
}

fn block_column<T: Real>(top: &CMatrix<T>, bottom: &CMatrix<T>) -> CMatrix<T> {
    debug_assert_eq!(top.ncols(), bottom.ncols());
    let (n, m, k) = (top.nrows(), bottom.nrows(), top.ncols());
    let mut out = CMatrix::zeros(n + m, k);
    out.rows_mut(0, n).copy_from(top);
    out.rows_mut(n, m).copy_from(bottom);
    out
}

fn hstack<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    let mut out = CMatrix::zeros(a.nrows(), a.ncols() + b.ncols());
    out.columns_mut(0, a.ncols()).copy_from(a);
    out.columns_mut(a.ncols(), b.ncols()).copy_from(b);
    out
}

impl<T: Real> LinearRelation<T> {
    /// Relation whose graph is spanned by the columns of `spanning`
    /// (`src.dim() + dst.dim()` rows).
    pub fn from_spanning(src: &HilbertSpace<T>, dst: &HilbertSpace<T>, spanning: &CMatrix<T>) -> Result<Self> {
        let product = src.direct_sum(dst);
        let graph = Subspace::span(&product, spanning)?;
        Ok(Self { src: src.clone(), dst: dst.clone(), graph })
    }

    /// Relation spanned by the pairs `(firsts_i, seconds_i)`.
    pub fn from_pairs(
        src: &HilbertSpace<T>,
        dst: &HilbertSpace<T>,
        firsts: &CMatrix<T>,
        seconds: &CMatrix<T>,
    ) -> Result<Self> {
        if firsts.ncols() != seconds.ncols() || firsts.nrows() != src.dim() || seconds.nrows() != dst.dim() {
            return Err(Error::DimensionMismatch("pair blocks do not match the spaces".into()));
        }
        Self::from_spanning(src, dst, &block_column(firsts, seconds))
    }

    /// Graph of the everywhere defined operator `matrix: src -> dst`.
    pub fn graph_of(src: &HilbertSpace<T>, dst: &HilbertSpace<T>, matrix: &CMatrix<T>) -> Result<Self> {
        let n = src.dim();
        Self::from_pairs(src, dst, &CMatrix::identity(n, n), matrix)
    }

    /// The pure multivalued relation `{0} × values`.
    pub fn multivalued(src: &HilbertSpace<T>, values: &Subspace<T>) -> Result<Self> {
        let k = values.dim();
        Self::from_pairs(src, values.space(), &CMatrix::zeros(src.dim(), k), values.basis())
    }

    pub fn src(&self) -> &HilbertSpace<T> {
        &self.src
    }

    pub fn dst(&self) -> &HilbertSpace<T> {
        &self.dst
    }

    pub fn graph(&self) -> &Subspace<T> {
        &self.graph
    }

    pub fn dim(&self) -> usize {
        self.graph.dim()
    }

    /// Domain components of the graph basis.
    pub fn firsts(&self) -> CMatrix<T> {
        self.graph.basis().rows(0, self.src.dim()).into_owned()
    }

    /// Value components of the graph basis.
    pub fn seconds(&self) -> CMatrix<T> {
        self.graph.basis().rows(self.src.dim(), self.dst.dim()).into_owned()
    }

    fn is_endo(&self) -> Result<()> {
        if self.src.same_as(&self.dst) {
            Ok(())
        } else {
            Err(Error::DimensionMismatch("operation requires a relation on a single space".into()))
        }
    }

    /// Pre-set `[M]C = {x | ∃y ∈ M : (x, y) ∈ C}`.
    pub fn pre_set(&self, values: &Subspace<T>) -> Result<Subspace<T>> {
        let (n, m) = (self.src.dim(), self.dst.dim());
        if values.space().dim() != m {
            return Err(Error::DimensionMismatch("pre-set argument lives in the wrong space".into()));
        }
        let lifted = Subspace::span(
            self.graph.space(),
            &block_column(&hstack(&CMatrix::identity(n, n), &CMatrix::zeros(n, values.dim())), &hstack(&CMatrix::zeros(m, n), values.basis())),
        )?;
        let cut = self.graph.intersection(&lifted);
        Subspace::span_scaled(&self.src, &cut.basis().rows(0, n).into_owned(), T::one())
    }

    /// Post-set `C[N] = {y | ∃x ∈ N : (x, y) ∈ C}`.
    pub fn post_set(&self, args: &Subspace<T>) -> Result<Subspace<T>> {
        let (n, m) = (self.src.dim(), self.dst.dim());
        if args.space().dim() != n {
            return Err(Error::DimensionMismatch("post-set argument lives in the wrong space".into()));
        }
        let lifted = Subspace::span(
            self.graph.space(),
            &block_column(&hstack(args.basis(), &CMatrix::zeros(n, m)), &hstack(&CMatrix::zeros(m, args.dim()), &CMatrix::identity(m, m))),
        )?;
        let cut = self.graph.intersection(&lifted);
        Subspace::span_scaled(&self.dst, &cut.basis().rows(n, m).into_owned(), T::one())
    }

    /// `[Y]C`, the domain.
    pub fn domain(&self) -> Subspace<T> {
        Subspace::span_scaled(&self.src, &self.firsts(), T::one()).expect("domain rows")
    }

    /// `C[X]`, the range.
    pub fn range(&self) -> Subspace<T> {
        Subspace::span_scaled(&self.dst, &self.seconds(), T::one()).expect("value rows")
    }

    /// `C[{0}]`, the multivalued part.
    pub fn multivalued_part(&self) -> Subspace<T> {
        self.post_set(&Subspace::zero(&self.src)).expect("same space")
    }

    /// `[{0}]C`, the kernel.
    pub fn kernel(&self) -> Subspace<T> {
        self.pre_set(&Subspace::zero(&self.dst)).expect("same space")
    }

    /// `C⁻¹ = {(v, u) | (u, v) ∈ C}`.
    pub fn inverse(&self) -> Self {
        Self::from_pairs(&self.dst, &self.src, &self.seconds(), &self.firsts()).expect("swapped blocks")
    }

    /// `1 + λC = {(u, u + λv) | (u, v) ∈ C}`.
    pub fn one_plus(&self, lambda: T) -> Result<Self> {
        self.is_endo()?;
        if !(lambda > T::zero()) {
            return Err(Error::InvalidArgument("λ must be positive".into()));
        }
        let a = self.firsts();
        let shifted = &a + self.seconds() * Complex::new(lambda, T::zero());
        Self::from_pairs(&self.src, &self.dst, &a, &shifted)
    }

    /// `outer ∘ self = {(x, z) | ∃y : (x, y) ∈ self, (y, z) ∈ outer}`.
    pub fn compose(&self, outer: &Self) -> Result<Self> {
        if !self.dst.same_as(&outer.src) {
            return Err(Error::DimensionMismatch("composition spaces do not chain".into()));
        }
        let (n, m, p) = (self.src.dim(), self.dst.dim(), outer.dst.dim());
        let triple = self.src.direct_sum(&self.dst).direct_sum(&outer.dst);
        // self ⊕ Z and X ⊕ outer inside X ⊕ Y ⊕ Z.
        let mut inner_lift = CMatrix::zeros(n + m + p, self.dim() + p);
        inner_lift.view_mut((0, 0), (n + m, self.dim())).copy_from(self.graph.basis());
        inner_lift.view_mut((n + m, self.dim()), (p, p)).copy_from(&CMatrix::identity(p, p));
        let mut outer_lift = CMatrix::zeros(n + m + p, n + outer.dim());
        outer_lift.view_mut((0, 0), (n, n)).copy_from(&CMatrix::identity(n, n));
        outer_lift.view_mut((n, n), (m + p, outer.dim())).copy_from(outer.graph.basis());
        let cut = Subspace::span(&triple, &inner_lift)?.intersection(&Subspace::span(&triple, &outer_lift)?);
        let b = cut.basis();
        let kept = block_column(&b.rows(0, n).into_owned(), &b.rows(n + m, p).into_owned());
        let graph = Subspace::span_scaled(&self.src.direct_sum(&outer.dst), &kept, T::one())?;
        Ok(Self { src: self.src.clone(), dst: outer.dst.clone(), graph })
    }

    /// Adjoint relation `C* ⊆ dst ⊕ src`: all `(x, y)` with
    /// `⟨v|x⟩_dst = ⟨u|y⟩_src` for every `(u, v) ∈ C`, found as a null space.
    pub fn adjoint(&self) -> Self {
        let a = self.firsts();
        let b = self.seconds();
        let conditions = hstack(&self.dst.inner_matrix(&b, &CMatrix::identity(self.dst.dim(), self.dst.dim())), &(-self.src.inner_matrix(&a, &CMatrix::identity(self.src.dim(), self.src.dim()))));
        let kernel = linalg::null_space(&conditions);
        Self::from_spanning(&self.dst, &self.src, &kernel).expect("adjoint blocks")
    }

    /// Adjoint as the orthogonal complement of `{(v, −u) | (u, v) ∈ C}`.
    ///
    /// Independent route used to cross-check [`Self::adjoint`].
    pub fn adjoint_via_complement(&self) -> Self {
        let flipped = block_column(&self.seconds(), &(-self.firsts()));
        let product = self.dst.direct_sum(&self.src);
        let graph = Subspace::span(&product, &flipped).expect("flipped blocks").complement();
        Self { src: self.dst.clone(), dst: self.src.clone(), graph }
    }

    pub fn equals(&self, other: &Self, tol: T) -> bool {
        self.graph.equals(&other.graph, tol)
    }

    /// Sine of the largest principal angle between `C` and `C*`; one when
    /// their dimensions differ.
    pub fn selfadjoint_defect(&self) -> T {
        self.graph.largest_angle_sine(&self.adjoint().graph).unwrap_or_else(T::one)
    }

    /// `C = C*` within principal angle `1e-10`.
    pub fn is_selfadjoint(&self) -> bool {
        self.src.same_as(&self.dst) && self.equals(&self.adjoint(), T::tol(EQUAL_TOL))
    }

    /// Monotonicity certificate from the Hermitian part of `⟨a_i|b_j⟩`.
    pub fn monotonicity(&self) -> Result<MonotonicityReport<T>> {
        self.is_endo()?;
        let a = self.firsts();
        let b = self.seconds();
        let form = self.src.inner_matrix(&a, &b);
        let (values, vectors) = linalg::hermitian_eigen(&form);
        let min_eigenvalue = values.first().copied().unwrap_or_else(T::zero);
        let monotone = min_eigenvalue >= -T::tol(MONOTONE_TOL);
        let witness = (!monotone).then(|| {
            let c = vectors.column(0).into_owned();
            (&a * &c, &b * &c)
        });
        Ok(MonotonicityReport { monotone, maximal: false, min_eigenvalue, witness, minty_lambdas_checked: Vec::new() })
    }

    pub fn is_monotone(&self) -> bool {
        self.monotonicity().map(|r| r.monotone).unwrap_or(false)
    }

    /// Minty's criterion `(1 + λC)[H] = H`.
    pub fn minty_surjective(&self, lambda: T) -> Result<bool> {
        let shifted = self.one_plus(lambda)?;
        Ok(linalg::rank_scaled(&self.src.to_isometric(&shifted.seconds()), T::one()) == self.src.dim())
    }

    /// Maximal monotonicity via Minty for `λ ∈ {1, 0.1, 10}`, cross-checked
    /// against "C and C* are both monotone". Any disagreement is reported
    /// as [`Error::Inconsistent`].
    pub fn maximal_monotonicity(&self) -> Result<MonotonicityReport<T>> {
        let mut report = self.monotonicity()?;
        if !report.monotone {
            return Ok(report);
        }
        let mut verdicts = Vec::with_capacity(MINTY_LAMBDAS.len());
        for &lambda in &MINTY_LAMBDAS {
            let lambda = T::lit(lambda);
            verdicts.push(self.minty_surjective(lambda)?);
            report.minty_lambdas_checked.push(lambda);
        }
        let adjoint_monotone = self.adjoint().monotonicity()?.monotone;
        let minty = verdicts[0];
        if verdicts.iter().any(|&v| v != minty) {
            return Err(Error::Inconsistent(format!("Minty verdicts differ across λ: {verdicts:?}")));
        }
        if adjoint_monotone != minty {
            return Err(Error::Inconsistent(format!(
                "Minty verdict {minty} contradicts adjoint monotonicity {adjoint_monotone}"
            )));
        }
        report.maximal = minty;
        Ok(report)
    }

    pub fn is_maximal_monotone(&self) -> Result<bool> {
        Ok(self.maximal_monotonicity()?.maximal)
    }

    /// Matrix of the resolvent `(1 + λC)⁻¹`.
    ///
    /// Refuses relations that are not maximal monotone instead of returning
    /// a least-squares substitute.
    pub fn resolvent_matrix(&self, lambda: T) -> Result<CMatrix<T>> {
        if !(lambda > T::zero()) {
            return Err(Error::InvalidArgument("λ must be positive".into()));
        }
        let report = self.maximal_monotonicity()?;
        if !report.maximal {
            return Err(Error::NotMaximalMonotone(if report.monotone {
                "range of 1 + λC is a proper subspace".into()
            } else {
                format!("not monotone (eigenvalue {:.3e})", report.min_eigenvalue.as_f64())
            }));
        }
        let a = self.firsts();
        let system = &a + self.seconds() * Complex::new(lambda, T::zero());
        let inv = system
            .try_inverse()
            .ok_or_else(|| Error::NotMaximalMonotone("1 + λC is singular".into()))?;
        Ok(a * inv)
    }

    /// `u = (1 + λC)⁻¹ y`, so that `(u, (y − u)/λ) ∈ C`.
    pub fn resolvent_apply(&self, lambda: T, y: &CVector<T>) -> Result<CVector<T>> {
        if y.len() != self.src.dim() {
            return Err(Error::DimensionMismatch("vector length".into()));
        }
        Ok(self.resolvent_matrix(lambda)? * y)
    }

    /// Gram operator norm of the resolvent.
    pub fn resolvent_norm(&self, lambda: T) -> Result<T> {
        let j = self.resolvent_matrix(lambda)?;
        Ok(self.src.operator_norm(&j, &self.src))
    }

    /// Whether `(x, y)` lies in the graph within relative tolerance `tol`.
    pub fn contains_pair(&self, x: &CVector<T>, y: &CVector<T>, tol: T) -> bool {
        let stacked = CVector::from_iterator(x.len() + y.len(), x.iter().chain(y.iter()).copied());
        self.graph.contains(&stacked, tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DVector;

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

    fn id_graph() -> R {
        R::graph_of(&h2(), &h2(), &CMatrix::identity(2, 2)).unwrap()
    }

    fn skew() -> R {
        R::graph_of(&h2(), &h2(), &mat(2, &[0.0, 1.0, -1.0, 0.0])).unwrap()
    }

    fn pure_multivalued() -> R {
        R::multivalued(&h2(), &Subspace::whole(&h2())).unwrap()
    }

    #[test]
    fn adjoint_examples() {
        assert!(id_graph().adjoint().equals(&id_graph(), 1e-10));
        assert!(pure_multivalued().adjoint().equals(&pure_multivalued(), 1e-10));
        let a = mat(2, &[1.0, 2.0, 0.0, 1.0]);
        let adj = R::graph_of(&h2(), &h2(), &a).unwrap().adjoint();
        assert!(adj.equals(&R::graph_of(&h2(), &h2(), &a.adjoint()).unwrap(), 1e-10));
    }

    #[test]
    fn adjoint_with_gram_matches_brute_force() {
        // ⟨Av|x⟩_W = ⟨v|y⟩_W for all v gives y = W⁻¹A†W x.
        let w = mat(2, &[2.0, 1.0, 1.0, 3.0]);
        let sp = HilbertSpace::new(w.clone()).unwrap();
        let a = mat(2, &[1.0, -2.0, 0.5, 4.0]);
        let expected = w.clone().try_inverse().unwrap() * a.adjoint() * &w;
        let adj = R::graph_of(&sp, &sp, &a).unwrap().adjoint();
        assert!(adj.equals(&R::graph_of(&sp, &sp, &expected).unwrap(), 1e-10));
        assert!(adj.equals(&R::graph_of(&sp, &sp, &a).unwrap().adjoint_via_complement(), 1e-10));
    }

    #[test]
    fn inverse_and_one_plus() {
        let d = R::graph_of(&h2(), &h2(), &mat(2, &[2.0, 0.0, 0.0, 3.0])).unwrap();
        let expected = R::graph_of(&h2(), &h2(), &mat(2, &[0.5, 0.0, 0.0, 1.0 / 3.0])).unwrap();
        assert!(d.inverse().equals(&expected, 1e-10));
        let range = id_graph().one_plus(1.0).unwrap().post_set(&Subspace::whole(&h2())).unwrap();
        assert_eq!(range.dim(), 2);
        assert!(id_graph().one_plus(0.0).is_err());
    }

    #[test]
    fn compose_examples() {
        let s = skew();
        assert!(s.compose(&id_graph()).unwrap().equals(&s, 1e-10));
        let zero = R::graph_of(&h2(), &h2(), &CMatrix::zeros(2, 2)).unwrap();
        let partial = R::from_pairs(&h2(), &h2(), &mat(2, &[1.0, 0.0]), &mat(2, &[5.0, 7.0])).unwrap();
        let composed = partial.compose(&zero).unwrap();
        let expected = R::from_pairs(&h2(), &h2(), &mat(2, &[1.0, 0.0]), &mat(2, &[0.0, 0.0])).unwrap();
        assert!(composed.equals(&expected, 1e-10));
    }

    #[test]
    fn pre_and_post_sets() {
        // C = span{(e1, 2e1), (0, e2)}
        let c = R::from_pairs(&h2(), &h2(), &mat(2, &[1.0, 0.0, 0.0, 0.0]), &mat(2, &[2.0, 0.0, 0.0, 1.0])).unwrap();
        assert_eq!(c.domain().dim(), 1);
        assert_eq!(c.multivalued_part().dim(), 1);
        let e2 = Subspace::span(&h2(), &mat(2, &[0.0, 1.0])).unwrap();
        assert!(c.multivalued_part().equals(&e2, 1e-10));
        assert_eq!(c.kernel().dim(), 0);
        assert_eq!(c.pre_set(&e2).unwrap().dim(), 0);
    }

    #[test]
    fn monotonicity_examples() {
        assert!(id_graph().is_monotone());
        let neg = R::graph_of(&h2(), &h2(), &(-CMatrix::identity(2, 2))).unwrap();
        let rep = neg.monotonicity().unwrap();
        assert!(!rep.monotone);
        let (x, y) = rep.witness.unwrap();
        assert!(h2().inner(&x, &y).re < 0.0);
        let rep = skew().monotonicity().unwrap();
        assert!(rep.monotone && rep.min_eigenvalue.abs() < 1e-14);
    }

    #[test]
    fn maximal_monotone_examples() {
        assert!(id_graph().is_maximal_monotone().unwrap());
        let restricted = R::from_pairs(&h2(), &h2(), &mat(2, &[1.0, 0.0]), &mat(2, &[1.0, 0.0])).unwrap();
        let rep = restricted.maximal_monotonicity().unwrap();
        assert!(rep.monotone && !rep.maximal);
        assert_eq!(rep.minty_lambdas_checked.len(), 3);
        assert!(skew().is_maximal_monotone().unwrap());
        assert!(pure_multivalued().is_maximal_monotone().unwrap());
    }

    #[test]
    fn selfadjoint_examples() {
        assert!(R::graph_of(&h2(), &h2(), &mat(2, &[1.0, 0.0, 0.0, 2.0])).unwrap().is_selfadjoint());
        assert!(!skew().is_selfadjoint());
        assert!(skew().adjoint().equals(&R::graph_of(&h2(), &h2(), &mat(2, &[0.0, -1.0, 1.0, 0.0])).unwrap(), 1e-10));
        assert!(pure_multivalued().is_selfadjoint());
    }

    #[test]
    fn resolvent_examples() {
        let y = DVector::from_vec(vec![Complex::new(1.0, 2.0), Complex::new(-3.0, 0.5)]);
        let u = id_graph().resolvent_apply(1.0, &y).unwrap();
        assert!((u - &y * c(0.5)).norm() < 1e-14);
        let u = pure_multivalued().resolvent_apply(2.0, &y).unwrap();
        assert!(u.norm() < 1e-14);
        let d = R::graph_of(&h2(), &h2(), &mat(2, &[1.0, 0.0, 0.0, 3.0])).unwrap();
        let u = d.resolvent_apply(0.5, &y).unwrap();
        assert!((u[0] - y[0] / 1.5).norm() < 1e-14 && (u[1] - y[1] / 2.5).norm() < 1e-14);
        let restricted = R::from_pairs(&h2(), &h2(), &mat(2, &[1.0, 0.0]), &mat(2, &[1.0, 0.0])).unwrap();
        assert!(matches!(restricted.resolvent_apply(1.0, &y), Err(Error::NotMaximalMonotone(_))));
    }

    #[test]
    fn resolvent_residual() {
        let w = mat(2, &[2.0, 0.5, 0.5, 1.0]);
        let sp = HilbertSpace::new(w.clone()).unwrap();
        // W T = B + N with B ⪰ 0 and N skew keeps T monotone for ⟨·|·⟩_W.
        let t = w.try_inverse().unwrap() * mat(2, &[1.0, 2.0, -2.0, 0.5]);
        let rel = R::graph_of(&sp, &sp, &t).unwrap();
        assert!(rel.is_maximal_monotone().unwrap());
        let y = DVector::from_vec(vec![Complex::new(0.3, -1.0), Complex::new(2.0, 0.1)]);
        let lambda = 0.7;
        let u = rel.resolvent_apply(lambda, &y).unwrap();
        let v = (&y - &u) / c(lambda);
        assert!(rel.contains_pair(&u, &v, 1e-10));
        assert!(rel.resolvent_norm(lambda).unwrap() <= 1.0 + 1e-10);
    }
}

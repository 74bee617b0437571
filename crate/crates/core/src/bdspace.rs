//! Boundary data spaces of `G = D = d/dx` on `Ω = (0, 1)`.
//!
//! Both `BD(G) = [{0}](1 − DG)` and `BD(D)` are the solutions of `z'' = z`,
//! i.e. `span{cosh, sinh}`. Coordinates `(a, b)` stand for `a·cosh + b·sinh`.
//! The inner product is the graph inner product `⟨u|v⟩ + ⟨u'|v'⟩`, and the
//! orthogonal projection from `H¹` only depends on the endpoint traces: the
//! residual of interpolating the traces vanishes at both ends and so lies in
//! `D(G₀) = H¹₀`.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Complex, Matrix2};
use rand::Rng;

use crate::hilbert::HilbertSpace;
use crate::quadrature::Quadrature01;
use crate::scalar::{CMatrix, Cx, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BdKind {
    G,
    D,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Evaluation {
    Value,
    Derivative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Zero,
    One,
}

/// `(sinh(2)/2, sinh²(1))`, the diagonal and off-diagonal Gram entries.
pub fn gram_entries<T: Real>() -> (T, T) {
    let one = T::one();
    let two = one + one;
    (two.sinh() / two, one.sinh() * one.sinh())
}

fn gram<T: Real>() -> Matrix2<T> {
    let (s, c) = gram_entries::<T>();
    Matrix2::new(s, c, c, s)
}

/// `(gram_G, gram_D)`; identical in this instance.
pub fn gram_matrices<T: Real>() -> (Matrix2<T>, Matrix2<T>) {
    (gram(), gram())
}

#[derive(Debug, Clone)]
pub struct BoundarySpace<T: Real> {
    pub kind: BdKind,
    pub gram: Matrix2<T>,
    pub eval0: [T; 2],
    pub eval1: [T; 2],
    pub deval0: [T; 2],
    pub deval1: [T; 2],
}

impl<T: Real> BoundarySpace<T> {
    pub fn new(kind: BdKind) -> Self {
        let (ch, sh) = (T::one().cosh(), T::one().sinh());
        Self {
            kind,
            gram: gram(),
            eval0: [T::one(), T::zero()],
            eval1: [ch, sh],
            deval0: [T::zero(), T::one()],
            deval1: [sh, ch],
        }
    }

    /// The space as a complex Hilbert space for the relation calculus.
    pub fn hilbert(&self) -> HilbertSpace<T> {
        let g = CMatrix::from_fn(2, 2, |i, j| Complex::new(self.gram[(i, j)], T::zero()));
        HilbertSpace::new(g).expect("boundary Gram is positive definite")
    }

    pub fn inner(&self, x: &BdVector<T>, y: &BdVector<T>) -> Cx<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for i in 0..2 {
            for j in 0..2 {
                acc += x.coords[i].conj() * y.coords[j] * Complex::new(self.gram[(i, j)], T::zero());
            }
        }
        acc
    }
}

/// `a·cosh + b·sinh` in `BD(G)` or `BD(D)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BdVector<T: Real> {
    pub kind: BdKind,
    pub coords: [Cx<T>; 2],
}

impl<T: Real> BdVector<T> {
    pub fn new(kind: BdKind, a: Cx<T>, b: Cx<T>) -> Self {
        Self { kind, coords: [a, b] }
    }

    pub fn to_function(&self) -> TestFunction1D<T> {
        TestFunction1D::hyperbolic(self.coords[0], self.coords[1])
    }
}

/// Trace-to-coordinate matrix: `(a, b)ᵀ = P (t₀, t₁)ᵀ`.
pub fn projection_matrix<T: Real>() -> CMatrix<T> {
    let (ch, sh) = (T::one().cosh(), T::one().sinh());
    let z = T::zero();
    CMatrix::from_row_slice(
        2,
        2,
        &[Complex::new(T::one(), z), Complex::new(z, z), Complex::new(-ch / sh, z), Complex::new(T::one() / sh, z)],
    )
}

/// Coordinate-to-trace matrix, the inverse of [`projection_matrix`].
pub fn interpolation_matrix<T: Real>() -> CMatrix<T> {
    let (ch, sh) = (T::one().cosh(), T::one().sinh());
    let z = T::zero();
    CMatrix::from_row_slice(
        2,
        2,
        &[Complex::new(T::one(), z), Complex::new(z, z), Complex::new(ch, z), Complex::new(sh, z)],
    )
}

/// Matrix of `Ġ` and `Ḋ` in coordinates: differentiation swaps cosh and sinh.
pub fn swap_matrix<T: Real>() -> CMatrix<T> {
    let (o, z) = (Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::zero()));
    CMatrix::from_row_slice(2, 2, &[z, o, o, z])
}

/// Orthogonal projection onto the boundary space of any `H¹` function with
/// the given endpoint values.
pub fn project_boundary<T: Real>(kind: BdKind, trace0: Cx<T>, trace1: Cx<T>) -> BdVector<T> {
    let sh = Complex::new(T::one().sinh(), T::zero());
    let ch = Complex::new(T::one().cosh(), T::zero());
    BdVector::new(kind, trace0, (trace1 - trace0 * ch) / sh)
}

/// Projection of a test function, through its traces.
pub fn project_function<T: Real>(kind: BdKind, f: &TestFunction1D<T>) -> BdVector<T> {
    let (t0, t1) = f.traces();
    project_boundary(kind, t0, t1)
}

/// `Ġ: BD(G) → BD(D), x ↦ x'`.
pub fn apply_gdot<T: Real>(x: &BdVector<T>) -> BdVector<T> {
    debug_assert_eq!(x.kind, BdKind::G);
    BdVector::new(BdKind::D, x.coords[1], x.coords[0])
}

/// `Ḋ: BD(D) → BD(G), z ↦ z'`.
pub fn apply_ddot<T: Real>(z: &BdVector<T>) -> BdVector<T> {
    debug_assert_eq!(z.kind, BdKind::D);
    BdVector::new(BdKind::G, z.coords[1], z.coords[0])
}

pub fn boundary_eval<T: Real>(x: &BdVector<T>, what: Evaluation, at: Endpoint) -> Cx<T> {
    let space = BoundarySpace::<T>::new(x.kind);
    let row = match (what, at) {
        (Evaluation::Value, Endpoint::Zero) => space.eval0,
        (Evaluation::Value, Endpoint::One) => space.eval1,
        (Evaluation::Derivative, Endpoint::Zero) => space.deval0,
        (Evaluation::Derivative, Endpoint::One) => space.deval1,
    };
    x.coords[0] * Complex::new(row[0], T::zero()) + x.coords[1] * Complex::new(row[1], T::zero())
}

pub const POLY_TERMS: usize = 7;

/// Closed-form function `p(x) + α·cosh x + β·sinh x` with `deg p ≤ 6`.
///
/// Closed under differentiation, which keeps every derivative and endpoint
/// trace exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestFunction1D<T: Real> {
    /// Monomial coefficients, lowest degree first.
    pub poly: [Cx<T>; POLY_TERMS],
    pub cosh: Cx<T>,
    pub sinh: Cx<T>,
}

impl<T: Real> TestFunction1D<T> {
    pub fn zero() -> Self {
        let z = Complex::new(T::zero(), T::zero());
        Self { poly: [z; POLY_TERMS], cosh: z, sinh: z }
    }

    pub fn polynomial(coeffs: &[Cx<T>]) -> Self {
        assert!(coeffs.len() <= POLY_TERMS, "degree above 6");
        let mut f = Self::zero();
        f.poly[..coeffs.len()].copy_from_slice(coeffs);
        f
    }

    pub fn real_polynomial(coeffs: &[f64]) -> Self {
        Self::polynomial(&coeffs.iter().map(|&c| T::cx(c, 0.0)).collect::<Vec<_>>())
    }

    pub fn hyperbolic(cosh: Cx<T>, sinh: Cx<T>) -> Self {
        Self { cosh, sinh, ..Self::zero() }
    }

    /// Random element with coefficients in the unit square, damped by `1/k!`.
    pub fn random(rng: &mut impl Rng) -> Self {
        let mut f = Self::zero();
        let mut fact = 1.0;
        for (k, c) in f.poly.iter_mut().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            *c = T::cx(rng.random_range(-1.0..1.0) / fact, rng.random_range(-1.0..1.0) / fact);
        }
        f.cosh = T::cx(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        f.sinh = T::cx(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        f
    }

    pub fn eval(&self, x: T) -> Cx<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for c in self.poly.iter().rev() {
            acc = acc * Complex::new(x, T::zero()) + c;
        }
        acc + self.cosh * Complex::new(x.cosh(), T::zero()) + self.sinh * Complex::new(x.sinh(), T::zero())
    }

    pub fn derivative(&self) -> Self {
        let mut d = Self::zero();
        for k in 1..POLY_TERMS {
            d.poly[k - 1] = self.poly[k] * Complex::new(T::lit(k as f64), T::zero());
        }
        d.cosh = self.sinh;
        d.sinh = self.cosh;
        d
    }

    /// `(f(0), f(1))`.
    pub fn traces(&self) -> (Cx<T>, Cx<T>) {
        (self.eval(T::zero()), self.eval(T::one()))
    }

    pub fn scale(&self, s: Cx<T>) -> Self {
        Self { poly: self.poly.map(|c| c * s), cosh: self.cosh * s, sinh: self.sinh * s }
    }

    pub fn is_zero(&self) -> bool {
        let z = Complex::new(T::zero(), T::zero());
        self.poly.iter().all(|&c| c == z) && self.cosh == z && self.sinh == z
    }

    /// Exact test of `f'' − f = 0`, i.e. membership in the boundary space.
    pub fn solves_boundary_ode(&self) -> bool {
        (self.derivative().derivative() - *self).is_zero()
    }

    /// Adds the boundary-space element that shifts the traces by `(d0, d1)`.
    pub fn shift_traces(&self, d0: Cx<T>, d1: Cx<T>) -> Self {
        *self + project_boundary(BdKind::G, d0, d1).to_function()
    }

    /// `⟨f|g⟩_{L²(0,1)}` by quadrature.
    pub fn l2_inner(&self, other: &Self, q: &Quadrature01<T>) -> Cx<T> {
        q.integrate(|x| self.eval(x).conj() * other.eval(x))
    }

    /// Graph inner product `⟨f|g⟩ + ⟨f'|g'⟩` by quadrature.
    pub fn graph_inner(&self, other: &Self, q: &Quadrature01<T>) -> Cx<T> {
        self.l2_inner(other, q) + self.derivative().l2_inner(&other.derivative(), q)
    }
}

impl<T: Real> Add for TestFunction1D<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut poly = self.poly;
        for (p, r) in poly.iter_mut().zip(rhs.poly) {
            *p += r;
        }
        Self { poly, cosh: self.cosh + rhs.cosh, sinh: self.sinh + rhs.sinh }
    }
}

impl<T: Real> Neg for TestFunction1D<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(Complex::new(-T::one(), T::zero()))
    }
}

impl<T: Real> Sub for TestFunction1D<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: Real> Mul<Cx<T>> for TestFunction1D<T> {
    type Output = Self;
    fn mul(self, rhs: Cx<T>) -> Self {
        self.scale(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Cx<f64> {
        Complex::new(re, 0.0)
    }

    #[test]
    fn gram_values() {
        let (g, d) = gram_matrices::<f64>();
        assert_eq!(g, d);
        assert!((g[(0, 0)] - 1.813430203923509).abs() < 1e-14);
        assert!((g[(0, 1)] - 1.381097845541817).abs() < 1e-14);
        assert_eq!(g[(0, 1)], g[(1, 0)]);
    }

    #[test]
    fn projection_examples() {
        let p = project_boundary::<f64>(BdKind::G, c(0.0), c(0.0));
        assert_eq!(p.coords, [c(0.0), c(0.0)]);
        let p = project_boundary::<f64>(BdKind::G, c(1.0), c(0.0));
        assert!((p.coords[0] - c(1.0)).norm() < 1e-15);
        assert!((p.coords[1] - c(-1.0 / 1f64.tanh())).norm() < 1e-14);
        let p = project_boundary::<f64>(BdKind::G, c(0.0), c(1.0));
        assert!((p.coords[1] - c(1.0 / 1f64.sinh())).norm() < 1e-14);
        assert!((projection_matrix::<f64>() * interpolation_matrix::<f64>() - CMatrix::identity(2, 2)).norm() < 1e-14);
    }

    #[test]
    fn projection_residual_is_orthogonal() {
        // u(x) = 1 − x and u(x) = x: u − Pu has zero traces and is graph-orthogonal to BD.
        let q = Quadrature01::<f64>::new();
        for u in [TestFunction1D::<f64>::real_polynomial(&[1.0, -1.0]), TestFunction1D::real_polynomial(&[0.0, 1.0])] {
            let pu = project_function(BdKind::G, &u).to_function();
            let r = u - pu;
            let (r0, r1) = r.traces();
            assert!(r0.norm() < 1e-14 && r1.norm() < 1e-14);
            for z in [TestFunction1D::hyperbolic(c(1.0), c(0.0)), TestFunction1D::hyperbolic(c(0.0), c(1.0))] {
                assert!(r.graph_inner(&z, &q).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn dot_maps() {
        let cosh = BdVector::new(BdKind::G, c(1.0), c(0.0));
        assert_eq!(apply_gdot(&cosh).coords, [c(0.0), c(1.0)]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let x = BdVector::<f64>::new(BdKind::G, Complex::new(rng.random(), rng.random()), Complex::new(rng.random(), rng.random()));
            assert_eq!(apply_ddot(&apply_gdot(&x)), x);
        }
    }

    #[test]
    fn evaluations() {
        let cosh = BdVector::<f64>::new(BdKind::G, c(1.0), c(0.0));
        assert!((boundary_eval(&cosh, Evaluation::Value, Endpoint::One) - c(1f64.cosh())).norm() < 1e-15);
        assert_eq!(boundary_eval(&cosh, Evaluation::Derivative, Endpoint::Zero), c(0.0));
        let y = BdVector::<f64>::new(BdKind::G, c(0.3), c(-1.7));
        // (Ġy)(0) = y'(0) = b
        assert_eq!(boundary_eval(&apply_gdot(&y), Evaluation::Value, Endpoint::Zero), c(-1.7));
        assert_eq!(boundary_eval(&y, Evaluation::Derivative, Endpoint::Zero), c(-1.7));
    }

    #[test]
    fn algebra_is_closed_and_exact() {
        let f = TestFunction1D::<f64>::real_polynomial(&[0.0, 0.0, 1.0, -2.0, 1.0]); // x²(1−x)²
        assert_eq!(f.traces(), (c(0.0), c(0.0)));
        let d = f.derivative();
        assert!((d.eval(0.5) - c(0.0)).norm() < 1e-15);
        assert!(TestFunction1D::<f64>::hyperbolic(c(2.0), c(-1.0)).solves_boundary_ode());
        assert!(!f.solves_boundary_ode());
        let shifted = f.shift_traces(c(1.0), c(-2.0));
        let (t0, t1) = shifted.traces();
        assert!((t0 - c(1.0)).norm() < 1e-14 && (t1 - c(-2.0)).norm() < 1e-14);
    }
}

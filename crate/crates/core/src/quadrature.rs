//! Fixed 64-point Gauss-Legendre rule on `[0, 1]`.

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use nalgebra::Complex;

use crate::scalar::{Cx, Real};

pub const NODES: usize = 64;

#[derive(Debug, Clone)]
pub struct Quadrature01<T: Real> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> Default for Quadrature01<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> Quadrature01<T> {
    pub fn new() -> Self {
        let rule = GaussLegendre::new(NonZeroUsize::new(NODES).expect("nonzero"));
        let (nodes, weights) = rule
            .as_node_weight_pairs()
            .iter()
            .map(|&(x, w)| (T::lit(0.5 * (x + 1.0)), T::lit(0.5 * w)))
            .unzip();
        Self { nodes, weights }
    }

    pub fn integrate(&self, f: impl Fn(T) -> Cx<T>) -> Cx<T> {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (&x, &w)| acc + f(x) * Complex::new(w, T::zero()))
    }

    pub fn integrate_real(&self, f: impl Fn(T) -> T) -> T {
        self.nodes.iter().zip(&self.weights).fold(T::zero(), |acc, (&x, &w)| acc + f(x) * w)
    }
}

//! Scalar abstraction shared by every numerical module.
//!
//! All spaces are complex; the type parameter fixes the underlying real
//! precision. Tolerances are written once as `f64` literals tuned for double
//! precision and loosened by [`Real::TOL_SCALE`] for coarser types.

use std::fmt::{Debug, Display};

use nalgebra::{Complex, DMatrix, DVector, RealField};
use num_traits::{FromPrimitive, ToPrimitive};

/// Complex scalar over the real type `T`.
pub type Cx<T> = Complex<T>;
/// Dense complex matrix.
pub type CMatrix<T> = DMatrix<Complex<T>>;
/// Dense complex column vector.
pub type CVector<T> = DVector<Complex<T>>;

/// Real floating point types the toolkit can run on.
pub trait Real:
    RealField + Copy + FromPrimitive + ToPrimitive + Default + Debug + Display + Send + Sync
{
    /// Factor applied to double-precision tolerances.
    const TOL_SCALE: f64;

    /// Converts a literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }

    /// A double-precision tolerance adapted to this type.
    fn tol(x: f64) -> Self {
        Self::lit(x * Self::TOL_SCALE)
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn cx(re: f64, im: f64) -> Complex<Self> {
        Complex::new(Self::lit(re), Self::lit(im))
    }
}

impl Real for f64 {
    const TOL_SCALE: f64 = 1.0;
}

impl Real for f32 {
    // f32 roundoff is ~5e8 times coarser; 1e6 keeps 1e-10 style checks at 1e-4.
    const TOL_SCALE: f64 = 1.0e6;
}

/// Embeds a real matrix into the complex matrices.
pub fn complexify<T: Real>(m: &DMatrix<T>) -> CMatrix<T> {
    m.map(|x| Complex::new(x, T::zero()))
}

/// Column-stacked complex matrix from rows of `(re, im)` pairs.
pub fn cmatrix_from_rows<T: Real>(rows: &[Vec<(f64, f64)>], ncols: usize) -> CMatrix<T> {
    CMatrix::from_fn(rows.len(), ncols, |i, j| {
        let (re, im) = rows[i][j];
        T::cx(re, im)
    })
}

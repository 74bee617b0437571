//! Dense complex kernels used by the subspace calculus.
//!
//! Everything here works in the standard (identity Gram) inner product;
//! [`crate::hilbert`] maps Gram spaces onto these through a Cholesky factor.

use nalgebra::{Complex, ComplexField};

use crate::scalar::{CMatrix, Real};

/// Relative singular-value threshold below which directions count as zero.
pub const RANK_RTOL: f64 = 1e-10;

/// Rotation sweeps before the Jacobi iteration gives up on further progress.
const MAX_SWEEPS: usize = 80;

/// `m = U diag(s) V†` with `V` unitary, `s` descending (one entry per column
/// of `m`), and `U` holding the normalized columns for nonzero `s`.
struct Svd<T: Real> {
    u: CMatrix<T>,
    s: Vec<T>,
    v: CMatrix<T>,
}

/// One-sided (Hestenes) Jacobi SVD; columns below `ε‖m‖_F` count as zero.
fn jacobi_svd<T: Real>(m: &CMatrix<T>) -> Svd<T> {
    let (rows, n) = m.shape();
    let mut a = m.clone();
    let mut v = CMatrix::identity(n, n);
    let eps = T::default_epsilon();
    let negligible = eps * m.norm();
    let negligible_sq = negligible * negligible;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = a.column(p).norm_squared();
                let beta = a.column(q).norm_squared();
                if alpha <= negligible_sq || beta <= negligible_sq {
                    continue;
                }
                let gamma = a.column(p).dotc(&a.column(q));
                let g = gamma.modulus();
                if g == T::zero() || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = (gamma / Complex::new(g, T::zero())).conj();
                let zeta = (beta - alpha) / (g + g);
                let sign = if zeta < T::zero() { -T::one() } else { T::one() };
                let t = sign / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                let (c, s) = (Complex::new(c, T::zero()), Complex::new(s, T::zero()));
                for mat in [&mut a, &mut v] {
                    for r in 0..mat.nrows() {
                        let xp = mat[(r, p)];
                        let xq = mat[(r, q)] * phase;
                        mat[(r, p)] = c * xp - s * xq;
                        mat[(r, q)] = s * xp + c * xq;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<T> = (0..n).map(|j| a.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap_or(std::cmp::Ordering::Equal));
    let s: Vec<T> = order.iter().map(|&j| norms[j]).collect();
    let u = CMatrix::from_fn(rows, n, |r, c| {
        let j = order[c];
        if norms[j] > T::zero() {
            a[(r, j)].unscale(norms[j])
        } else {
            Complex::new(T::zero(), T::zero())
        }
    });
    let v = CMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Svd { u, s, v }
}

/// Singular values in descending order (empty for an empty matrix).
pub fn singular_values<T: Real>(m: &CMatrix<T>) -> Vec<T> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let k = m.nrows().min(m.ncols());
    let mut s = jacobi_svd(m).s;
    s.truncate(k);
    s
}

/// Largest singular value, zero for empty matrices.
pub fn spectral_norm<T: Real>(m: &CMatrix<T>) -> T {
    singular_values(m).first().copied().unwrap_or_else(T::zero)
}

/// Numerical rank under the relative threshold [`RANK_RTOL`].
pub fn rank<T: Real>(m: &CMatrix<T>) -> usize {
    rank_scaled(m, T::zero())
}

/// Rank with the threshold taken relative to `max(σ_max, reference)`.
///
/// Blocks cut out of an orthonormal basis pass `reference = 1` so that pure
/// roundoff is not promoted to a direction.
pub fn rank_scaled<T: Real>(m: &CMatrix<T>, reference: T) -> usize {
    let sv = singular_values(m);
    match sv.first() {
        None => 0,
        Some(&smax) if smax <= T::zero() => 0,
        Some(&smax) => {
            let cut = smax.max(reference) * T::tol(RANK_RTOL);
            sv.iter().filter(|&&s| s > cut).count()
        }
    }
}

/// Orthonormal basis (standard inner product) of the column space of `m`.
pub fn column_space<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    column_space_scaled(m, T::zero())
}

/// [`column_space`] with the threshold of [`rank_scaled`].
pub fn column_space_scaled<T: Real>(m: &CMatrix<T>, reference: T) -> CMatrix<T> {
    let nrows = m.nrows();
    if nrows == 0 || m.ncols() == 0 {
        return CMatrix::zeros(nrows, 0);
    }
    let svd = jacobi_svd(m);
    let smax = svd.s[0];
    if smax <= T::zero() {
        return CMatrix::zeros(nrows, 0);
    }
    let cut = smax.max(reference) * T::tol(RANK_RTOL);
    let k = svd.s.iter().take(nrows).filter(|&&s| s > cut).count();
    svd.u.columns(0, k).into_owned()
}

/// Orthonormal basis of `{x : m x = 0}`.
pub fn null_space<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    let n = m.ncols();
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return CMatrix::identity(n, n);
    }
    let svd = jacobi_svd(m);
    let smax = svd.s[0];
    let rank = if smax <= T::zero() {
        0
    } else {
        let cut = smax * T::tol(RANK_RTOL);
        svd.s.iter().filter(|&&s| s > cut).count()
    };
    svd.v.columns(rank, n - rank).into_owned()
}

/// Hermitian eigendecomposition with eigenvalues sorted ascending.
///
/// The input is symmetrized first; only its Hermitian part is decomposed.
pub fn hermitian_eigen<T: Real>(m: &CMatrix<T>) -> (Vec<T>, CMatrix<T>) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let half = Complex::new(T::lit(0.5), T::zero());
    let sym = (m + m.adjoint()) * half;
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Largest absolute entry.
pub fn max_abs<T: Real>(m: &CMatrix<T>) -> T {
    m.iter().fold(T::zero(), |acc, z| acc.max(z.modulus()))
}

/// Moore-Penrose pseudo-inverse under the module rank threshold.
pub fn pseudo_inverse<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return CMatrix::zeros(m.ncols(), m.nrows());
    }
    let svd = jacobi_svd(m);
    let smax = svd.s[0];
    let cut = if smax > T::zero() { smax * T::tol(RANK_RTOL) } else { T::one() };
    let mut out = CMatrix::zeros(m.ncols(), m.nrows());
    for (k, &s) in svd.s.iter().enumerate() {
        if s > cut {
            let inv = Complex::new(T::one() / s, T::zero());
            out += svd.v.column(k) * svd.u.column(k).adjoint() * inv;
        }
    }
    out
}

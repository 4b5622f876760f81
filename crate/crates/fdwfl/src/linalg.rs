//! Shared dense linear-algebra helpers.
//!
//! Singular value decompositions here go through a one-sided Jacobi
//! iteration rather than the bidiagonalization in nalgebra, which loses
//! accuracy on some of the wide, repeated-column-scale systems this crate
//! assembles. Jacobi is slower asymptotically but exact to round-off at
//! the small sizes involved, and every rank decision and minimum-norm
//! solve in the crate sits on top of it.

use nalgebra::{DMatrix, DMatrixView};
use num_complex::Complex64;

use crate::tolerances::LSTSQ_TRUNCATION_REL;

/// Economy-size real SVD `a = u * diag(s) * v^T`.
pub(crate) struct RealSvd {
    /// `p x k` with orthonormal columns, `k = min(p, q)`.
    pub u: DMatrix<f64>,
    /// Singular values, descending.
    pub s: Vec<f64>,
    /// `q x k` with orthonormal columns.
    pub v: DMatrix<f64>,
}

impl RealSvd {
    /// Minimum-norm least-squares solution, truncating below `eps`.
    pub fn solve_min_norm(&self, rhs: &DMatrix<f64>, eps: f64) -> DMatrix<f64> {
        let mut coeffs = self.u.transpose() * rhs;
        for (i, &s) in self.s.iter().enumerate() {
            let factor = if s > eps { 1.0 / s } else { 0.0 };
            coeffs.row_mut(i).scale_mut(factor);
        }
        &self.v * coeffs
    }
}

/// One-sided Jacobi SVD of a tall matrix (`p >= q`), exact to round-off.
fn jacobi_svd_tall(mut a: DMatrix<f64>) -> RealSvd {
    let q = a.ncols();
    let mut v = DMatrix::<f64>::identity(q, q);
    let tol = 10.0 * f64::EPSILON;
    for _sweep in 0..64 {
        let mut rotated = false;
        for i in 0..q {
            for j in (i + 1)..q {
                let col_i = a.column(i);
                let col_j = a.column(j);
                let aii = col_i.dot(&col_i);
                let ajj = col_j.dot(&col_j);
                let aij = col_i.dot(&col_j);
                if aij.abs() <= tol * (aii * ajj).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (ajj - aii) / (2.0 * aij);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for row in 0..a.nrows() {
                    let x = a[(row, i)];
                    let y = a[(row, j)];
                    a[(row, i)] = c * x - s * y;
                    a[(row, j)] = s * x + c * y;
                }
                for row in 0..q {
                    let x = v[(row, i)];
                    let y = v[(row, j)];
                    v[(row, i)] = c * x - s * y;
                    v[(row, j)] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    // singular values are the column norms; sort everything descending
    let mut order: Vec<usize> = (0..q).collect();
    let norms: Vec<f64> = (0..q).map(|i| a.column(i).norm()).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());
    let s: Vec<f64> = order.iter().map(|&i| norms[i]).collect();

    let p = a.nrows();
    let mut u = DMatrix::<f64>::zeros(p, q);
    let mut v_sorted = DMatrix::<f64>::zeros(q, q);
    let mut positive = 0;
    for (dst, &src) in order.iter().enumerate() {
        v_sorted.set_column(dst, &v.column(src));
        if s[dst] > 0.0 {
            u.set_column(dst, &(a.column(src) / s[dst]));
            positive = dst + 1;
        }
    }
    if positive < q {
        // null columns of u get an arbitrary orthonormal completion
        let span = u.columns(0, positive).into_owned();
        let full = complete_orthonormal(&span);
        u.view_mut((0, positive), (p, q - positive))
            .copy_from(&full.view((0, positive), (p, q - positive)));
    }
    RealSvd { u, s, v: v_sorted }
}

/// Economy real SVD for any shape.
pub(crate) fn real_svd(a: &DMatrix<f64>) -> RealSvd {
    let (p, q) = a.shape();
    if p == 0 || q == 0 {
        return RealSvd {
            u: DMatrix::identity(p, p.min(q)),
            s: Vec::new(),
            v: DMatrix::identity(q, p.min(q)),
        };
    }
    if p >= q {
        jacobi_svd_tall(a.clone())
    } else {
        let t = jacobi_svd_tall(a.transpose());
        RealSvd {
            u: t.v,
            s: t.s,
            v: t.u,
        }
    }
}

/// Numerical rank under the crate-wide relative rule.
pub(crate) fn numerical_rank(singular_values: &[f64], tol_rel: f64) -> usize {
    match singular_values.first() {
        None => 0,
        Some(&smax) if smax <= 0.0 => 0,
        Some(&smax) => singular_values
            .iter()
            .filter(|&&s| s > tol_rel * smax)
            .count(),
    }
}

pub(crate) fn singular_values_real(a: &DMatrix<f64>) -> Vec<f64> {
    real_svd(a).s
}

/// Singular values of a complex matrix via its real embedding.
///
/// `[Re -Im; Im Re]` carries each singular value twice, so the values at
/// even positions of the embedded spectrum are the complex ones.
pub(crate) fn singular_values_complex(a: &DMatrix<Complex64>) -> Vec<f64> {
    let (p, q) = a.shape();
    if p == 0 || q == 0 {
        return Vec::new();
    }
    let mut embedded = DMatrix::<f64>::zeros(2 * p, 2 * q);
    for i in 0..p {
        for j in 0..q {
            let c = a[(i, j)];
            embedded[(i, j)] = c.re;
            embedded[(i, j + q)] = -c.im;
            embedded[(i + p, j)] = c.im;
            embedded[(i + p, j + q)] = c.re;
        }
    }
    let s = real_svd(&embedded).s;
    (0..p.min(q)).map(|i| s[2 * i]).collect()
}

pub(crate) fn complexify(a: DMatrixView<'_, f64>) -> DMatrix<Complex64> {
    DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| Complex64::new(a[(i, j)], 0.0))
}

/// Extend `partial` (orthonormal columns, n x k) to a full n x n orthogonal matrix.
///
/// QR of `[partial | I]` keeps the leading k columns' span intact, so the
/// trailing Q columns are an orthonormal basis of the complement.
pub(crate) fn complete_orthonormal(partial: &DMatrix<f64>) -> DMatrix<f64> {
    let n = partial.nrows();
    let k = partial.ncols();
    if k >= n {
        return partial.clone();
    }
    let mut aug = DMatrix::<f64>::zeros(n, k + n);
    aug.view_mut((0, 0), (n, k)).copy_from(partial);
    aug.view_mut((0, k), (n, n))
        .copy_from(&DMatrix::identity(n, n));
    let q = aug.qr().q();
    let mut full = DMatrix::<f64>::zeros(n, n);
    full.view_mut((0, 0), (n, k)).copy_from(partial);
    full.view_mut((0, k), (n, n - k))
        .copy_from(&q.view((0, k), (n, n - k)));
    full
}

/// Minimum-norm least squares for (possibly rank-deficient) real systems.
pub(crate) fn min_norm_lstsq(a: &DMatrix<f64>, rhs: &DMatrix<f64>) -> DMatrix<f64> {
    let svd = real_svd(a);
    let eps = svd.s.first().copied().unwrap_or(0.0) * LSTSQ_TRUNCATION_REL;
    svd.solve_min_norm(rhs, eps)
}

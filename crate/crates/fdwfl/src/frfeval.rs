//! Data-driven FRF and transient evaluation at arbitrary complex
//! frequencies, the conjugate-structured SVD, and the noise-robust
//! estimator built on it.
//!
//! The evaluation systems pair a z-dependent window block with the data
//! blocks `Psi_{L0+1}(U)`, `Psi_{L0+1}(Omega)`, `Psi_{L0+1}(Y)`. They are
//! solved in the real-valued formulation: the data blocks enter once as
//! their realified form (their column space has a real basis), while the
//! z-dependent blocks stay complex and are split into real/imaginary row
//! pairs.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    complete_orthonormal, numerical_rank, singular_values_complex, singular_values_real,
};
use crate::lti::IoSpectrumData;
use crate::spectra::{build_psi, check_pe, realify_psi, window_vector, Spectrum};
use crate::tolerances::{DEFAULT_TOL_REL, EVAL_COND_LIMIT, LSTSQ_TRUNCATION_REL};

/// Joint FRF/transient evaluation result at one complex frequency.
#[derive(Debug, Clone, Serialize)]
pub struct EvalResult {
    /// FRF response sample `Y_z = H(z) U_z`.
    #[serde(serialize_with = "crate::wire::complex_dvector")]
    pub yz: DVector<Complex64>,
    /// Transient sample `T_z = T(z)`.
    #[serde(serialize_with = "crate::wire::complex_dvector")]
    pub tz: DVector<Complex64>,
    /// Condition estimate of the solved system.
    pub condition: f64,
    /// Window parameter used.
    pub l0: usize,
}

/// Stacked realified data blocks `[U; Omega; Y]` with window length `l1`.
fn stacked_real_blocks(data: &IoSpectrumData, l1: usize) -> DMatrix<f64> {
    let u = realify_psi(data.input(), l1);
    let w = realify_psi(&data.grid().phasor_spectrum(), l1);
    let y = realify_psi(data.output(), l1);
    let cols = u.ncols();
    let mut out = DMatrix::zeros(u.nrows() + w.nrows() + y.nrows(), cols);
    out.view_mut((0, 0), (u.nrows(), cols)).copy_from(&u);
    out.view_mut((u.nrows(), 0), (w.nrows(), cols))
        .copy_from(&w);
    out.view_mut((u.nrows() + w.nrows(), 0), (y.nrows(), cols))
        .copy_from(&y);
    out
}

/// Stacked complex blocks, used by the rank heuristic and the structured SVD.
fn stacked_complex_blocks(data: &IoSpectrumData, l1: usize) -> DMatrix<Complex64> {
    let u = build_psi(data.input(), l1);
    let w = build_psi(&data.grid().phasor_spectrum(), l1);
    let y = build_psi(data.output(), l1);
    let cols = u.ncols();
    let mut out = DMatrix::zeros(u.nrows() + w.nrows() + y.nrows(), cols);
    out.view_mut((0, 0), (u.nrows(), cols)).copy_from(&u);
    out.view_mut((u.nrows(), 0), (w.nrows(), cols))
        .copy_from(&w);
    out.view_mut((u.nrows() + w.nrows(), 0), (y.nrows(), cols))
        .copy_from(&y);
    out
}

/// Reject data whose augmented input cannot certify the window.
///
/// The exact hypothesis is PE of order `L0 + 1 + n_x`; without a state
/// spectrum `n_x` is unknown and `L0` stands in for it, consistent with the
/// default window choice `L0 = n_x`.
fn require_augmented_pe(data: &IoSpectrumData, l0: usize) -> Result<()> {
    let n_x_bound = data.state().map_or(l0, Spectrum::dim);
    let required = l0 + 1 + n_x_bound;
    let report = check_pe(&data.augmented_input(), required, DEFAULT_TOL_REL);
    if !report.is_pe {
        return Err(Error::PeShortfall {
            required,
            rank: report.rank,
            required_rank: report.required_rank,
        });
    }
    Ok(())
}

/// One assembled evaluation system: `[z-block | data columns]` in the
/// split-real form, with factories for the two right-hand sides.
struct EvalSystem {
    /// Real system matrix, `2 m` rows.
    matrix: DMatrix<f64>,
    /// Complex row count of the underlying system.
    m: usize,
    rows_u: usize,
    n_y: usize,
    l1: usize,
    z: Complex64,
    /// Rank the data columns are known (or required) to carry.
    data_rank: usize,
}

impl EvalSystem {
    fn new(
        data_cols: &DMatrix<f64>,
        data_rank: usize,
        n_u: usize,
        n_y: usize,
        l1: usize,
        z: Complex64,
    ) -> Self {
        let m = data_cols.nrows();
        let rows_u = l1 * n_u;
        debug_assert_eq!(m, rows_u + l1 + l1 * n_y);

        // z block: -W_{l1}(z) (x) I_{ny} on the output rows
        let wz = window_vector(z, l1);
        let mut zblock = DMatrix::<Complex64>::zeros(m, n_y);
        for i in 0..l1 {
            for r in 0..n_y {
                zblock[(rows_u + l1 + i * n_y + r, r)] = -wz[i];
            }
        }

        let q = data_cols.ncols();
        let mut matrix = DMatrix::<f64>::zeros(2 * m, 2 * n_y + 2 * q);
        for i in 0..m {
            for j in 0..n_y {
                let c = zblock[(i, j)];
                matrix[(i, j)] = c.re;
                matrix[(i, n_y + j)] = -c.im;
                matrix[(m + i, j)] = c.im;
                matrix[(m + i, n_y + j)] = c.re;
            }
        }
        matrix.view_mut((0, 2 * n_y), (m, q)).copy_from(data_cols);
        matrix
            .view_mut((m, 2 * n_y + q), (m, q))
            .copy_from(data_cols);

        Self {
            matrix,
            m,
            rows_u,
            n_y,
            l1,
            z,
            data_rank,
        }
    }

    /// Right-hand side of the FRF system: `W(z) (x) U_z` on the input rows.
    fn rhs_frf(&self, uz: &DVector<Complex64>) -> DVector<f64> {
        let wz = window_vector(self.z, self.l1);
        let n_u = self.rows_u / self.l1;
        let mut rhs = DVector::<Complex64>::zeros(self.m);
        for i in 0..self.l1 {
            for r in 0..n_u {
                rhs[i * n_u + r] = wz[i] * uz[r];
            }
        }
        self.split(rhs)
    }

    /// Right-hand side of the transient system: `W(z) (x) z` on the phasor rows.
    fn rhs_transient(&self) -> DVector<f64> {
        let wz = window_vector(self.z, self.l1);
        let mut rhs = DVector::<Complex64>::zeros(self.m);
        for i in 0..self.l1 {
            rhs[self.rows_u + i] = wz[i] * self.z;
        }
        self.split(rhs)
    }

    fn split(&self, rhs: DVector<Complex64>) -> DVector<f64> {
        DVector::from_fn(2 * self.m, |i, _| {
            if i < self.m {
                rhs[i].re
            } else {
                rhs[i - self.m].im
            }
        })
    }

    /// Solve for the leading complex block of each right-hand side.
    ///
    /// Uniqueness of that block requires the z columns to stay independent
    /// of the data columns; the condition estimate is taken at exactly that
    /// rank, so it blows up when `z` approaches an eigenvalue.
    fn solve(&self, rhs: &[DVector<f64>]) -> Result<(Vec<DVector<Complex64>>, f64)> {
        let mut b = DMatrix::zeros(2 * self.m, rhs.len());
        for (j, col) in rhs.iter().enumerate() {
            b.set_column(j, col);
        }
        let svd = crate::linalg::real_svd(&self.matrix);
        let expected = (2 * self.data_rank + 2 * self.n_y)
            .min(2 * self.m)
            .min(svd.s.len());
        let smax = svd.s.first().copied().unwrap_or(0.0);
        let scrit = svd.s[expected - 1];
        let condition = if scrit > 0.0 {
            smax / scrit
        } else {
            f64::INFINITY
        };
        if !condition.is_finite() || condition > EVAL_COND_LIMIT {
            return Err(Error::IllConditioned { condition });
        }
        let x = svd.solve_min_norm(&b, smax * LSTSQ_TRUNCATION_REL);
        let out = (0..rhs.len())
            .map(|j| {
                DVector::from_fn(self.n_y, |r, _| {
                    Complex64::new(x[(r, j)], x[(self.n_y + r, j)])
                })
            })
            .collect();
        Ok((out, condition))
    }
}

fn exact_system(data: &IoSpectrumData, z: Complex64, l0: usize) -> Result<EvalSystem> {
    require_augmented_pe(data, l0)?;
    let l1 = l0 + 1;
    let cols = stacked_real_blocks(data, l1);
    let data_rank = numerical_rank(&singular_values_real(&cols), DEFAULT_TOL_REL);
    Ok(EvalSystem::new(
        &cols,
        data_rank,
        data.n_u(),
        data.n_y(),
        l1,
        z,
    ))
}

/// FRF sample `Y_z = H(z) U_z` straight from the data.
///
/// `l0` must dominate the (unknown) observability index; the default safe
/// choice is the model order.
pub fn evaluate_frf(
    data: &IoSpectrumData,
    z: Complex64,
    uz: &DVector<Complex64>,
    l0: usize,
) -> Result<DVector<Complex64>> {
    if uz.len() != data.n_u() {
        return Err(Error::ShapeMismatch(format!(
            "U_z has {} entries, input dimension is {}",
            uz.len(),
            data.n_u()
        )));
    }
    let system = exact_system(data, z, l0)?;
    let (mut sols, _) = system.solve(&[system.rhs_frf(uz)])?;
    Ok(sols.remove(0))
}

/// Transient sample `T_z = T(z)` straight from the data.
pub fn evaluate_transient(
    data: &IoSpectrumData,
    z: Complex64,
    l0: usize,
) -> Result<DVector<Complex64>> {
    let system = exact_system(data, z, l0)?;
    let (mut sols, _) = system.solve(&[system.rhs_transient()])?;
    Ok(sols.remove(0))
}

/// Solve both evaluation systems at once (two right-hand sides of one
/// assembled matrix) and return a shared condition estimate.
pub fn evaluate_joint(
    data: &IoSpectrumData,
    z: Complex64,
    uz: &DVector<Complex64>,
    l0: usize,
) -> Result<EvalResult> {
    if uz.len() != data.n_u() {
        return Err(Error::ShapeMismatch(format!(
            "U_z has {} entries, input dimension is {}",
            uz.len(),
            data.n_u()
        )));
    }
    let system = exact_system(data, z, l0)?;
    let (mut sols, condition) = system.solve(&[system.rhs_frf(uz), system.rhs_transient()])?;
    let tz = sols.remove(1);
    let yz = sols.remove(0);
    Ok(EvalResult {
        yz,
        tz,
        condition,
        l0,
    })
}

/// SVD of a `[real | complex | conjugate]` block matrix with a real left
/// factor and conjugate-paired right factor.
///
/// `u` is `n x n` orthogonal, `s` holds the `min(n, m)` singular values
/// descending, and the right factor is `V^H = [v0 | v1 | v1^*]` (`m x m`)
/// with `v0` real. Reconstruction is `A = U S V^H`.
#[derive(Debug, Clone)]
pub struct StructuredSvd {
    pub u: DMatrix<f64>,
    pub s: DVector<f64>,
    pub v0: DMatrix<f64>,
    pub v1: DMatrix<Complex64>,
    pub rank: usize,
}

impl StructuredSvd {
    /// The full right factor `V^H = [v0 | v1 | v1^*]`.
    pub fn v_h(&self) -> DMatrix<Complex64> {
        let m = self.v0.nrows();
        let (m0, m1) = (self.v0.ncols(), self.v1.ncols());
        let mut vh = DMatrix::zeros(m, m0 + 2 * m1);
        for i in 0..m {
            for j in 0..m0 {
                vh[(i, j)] = Complex64::new(self.v0[(i, j)], 0.0);
            }
            for j in 0..m1 {
                vh[(i, m0 + j)] = self.v1[(i, j)];
                vh[(i, m0 + m1 + j)] = self.v1[(i, j)].conj();
            }
        }
        vh
    }

    /// Reconstruct `[A0 | A1 | A1^*]`.
    pub fn reconstruct(&self) -> DMatrix<Complex64> {
        let n = self.u.nrows();
        let vh = self.v_h();
        let m = vh.nrows();
        let mut us = DMatrix::<f64>::zeros(n, m);
        for i in 0..self.s.len().min(m) {
            let col = self.u.column(i) * self.s[i];
            us.set_column(i, &col);
        }
        let usc = crate::linalg::complexify(us.as_view());
        usc * vh
    }
}

/// Structured SVD via the real coordinates of the conjugate-paired columns.
///
/// `A A^H` of the block matrix equals `R R^T` for the real matrix
/// `R = [A0 | sqrt2 Re A1 | sqrt2 Im A1]`, so an ordinary real SVD of `R`
/// delivers the real orthogonal left factor and the singular values; its
/// right factor is exactly the structured right factor in those real
/// coordinates. Empty blocks and the zero matrix are fine.
pub fn structured_svd(a0: &DMatrix<f64>, a1: &DMatrix<Complex64>) -> StructuredSvd {
    let n = if a0.ncols() > 0 {
        a0.nrows()
    } else {
        a1.nrows()
    };
    let (m0, m1) = (a0.ncols(), a1.ncols());
    let m = m0 + 2 * m1;
    let sqrt2 = std::f64::consts::SQRT_2;

    let mut r = DMatrix::<f64>::zeros(n, m);
    r.view_mut((0, 0), (n, m0)).copy_from(a0);
    for j in 0..m1 {
        for i in 0..n {
            r[(i, m0 + j)] = sqrt2 * a1[(i, j)].re;
            r[(i, m0 + m1 + j)] = sqrt2 * a1[(i, j)].im;
        }
    }

    if m == 0 {
        return StructuredSvd {
            u: DMatrix::identity(n, n),
            s: DVector::zeros(0),
            v0: DMatrix::zeros(0, 0),
            v1: DMatrix::zeros(0, 0),
            rank: 0,
        };
    }

    let svd = crate::linalg::real_svd(&r);
    let s = DVector::from_vec(svd.s.clone());
    let rank = numerical_rank(s.as_slice(), DEFAULT_TOL_REL);
    let u = complete_orthonormal(&svd.u);
    // complete the right singular vectors to a basis of R^m
    let v_real = complete_orthonormal(&svd.v); // m x m

    // map each real coordinate vector back to a structured row [a | b | b*]
    let mut v0 = DMatrix::<f64>::zeros(m, m0);
    let mut v1 = DMatrix::<Complex64>::zeros(m, m1);
    for i in 0..m {
        for j in 0..m0 {
            v0[(i, j)] = v_real[(j, i)];
        }
        for j in 0..m1 {
            v1[(i, j)] = Complex64::new(v_real[(m0 + j, i)], v_real[(m0 + m1 + j, i)]) / sqrt2;
        }
    }
    StructuredSvd { u, s, v0, v1, rank }
}

/// Reusable state of the noise-robust estimator: the window choice and the
/// truncated real column basis, both independent of the query frequency.
pub struct NoisyEvaluator {
    u1: DMatrix<f64>,
    n_u: usize,
    n_y: usize,
    l0: usize,
}

impl NoisyEvaluator {
    /// Fix `L0 = n_x_guess`, decompose the stacked data matrix with the
    /// structured SVD, and keep the leading `(n_u+1)(L0+1) + n_x_guess`
    /// left singular vectors as the denoised column space.
    pub fn new(data: &IoSpectrumData, n_x_guess: usize) -> Result<Self> {
        if n_x_guess == 0 {
            return Err(Error::InvalidArgument(
                "model order guess must be at least 1".into(),
            ));
        }
        let l0 = n_x_guess;
        require_augmented_pe(data, l0)?;
        let l1 = l0 + 1;
        let stacked = stacked_complex_blocks(data, l1);
        let m = data.grid().len();
        // [A0 | A1 | A1*] split: DC column is real, the rest pair up
        let a0 = DMatrix::from_fn(stacked.nrows(), 1, |i, _| stacked[(i, 0)].re);
        let a1 = stacked.columns(1, m - 1).into_owned();
        let svd = structured_svd(&a0, &a1);

        let target = (data.n_u() + 1) * (l0 + 1) + n_x_guess;
        if svd.rank < target {
            return Err(Error::RankDeficient {
                observed: svd.rank,
                expected: target,
            });
        }
        if target > svd.u.ncols() {
            return Err(Error::InvalidArgument(format!(
                "truncation target {target} exceeds {} rows",
                svd.u.ncols()
            )));
        }
        Ok(Self {
            u1: svd.u.columns(0, target).into_owned(),
            n_u: data.n_u(),
            n_y: data.n_y(),
            l0,
        })
    }

    /// Solve the truncated two-right-hand-side system at `z`.
    pub fn evaluate(&self, z: Complex64, uz: &DVector<Complex64>) -> Result<EvalResult> {
        if uz.len() != self.n_u {
            return Err(Error::ShapeMismatch(format!(
                "U_z has {} entries, input dimension is {}",
                uz.len(),
                self.n_u
            )));
        }
        let system = EvalSystem::new(
            &self.u1,
            self.u1.ncols(),
            self.n_u,
            self.n_y,
            self.l0 + 1,
            z,
        );
        let (mut sols, condition) = system.solve(&[system.rhs_frf(uz), system.rhs_transient()])?;
        let tz = sols.remove(1);
        let yz = sols.remove(0);
        Ok(EvalResult {
            yz,
            tz,
            condition,
            l0: self.l0,
        })
    }
}

/// Noise-robust FRF/transient estimation at one frequency.
pub fn estimate_noisy(
    data: &IoSpectrumData,
    z: Complex64,
    uz: &DVector<Complex64>,
    n_x_guess: usize,
) -> Result<EvalResult> {
    NoisyEvaluator::new(data, n_x_guess)?.evaluate(z, uz)
}

/// Observed vs expected rank of the stacked data matrix.
#[derive(Debug, Clone, Serialize)]
pub struct RankHeuristicReport {
    pub observed: usize,
    /// `(n_u + 1)(L0 + 1) + n_x_guess`.
    pub expected: usize,
    /// `sigma_{expected+1} / sigma_expected`: separation of the noise floor.
    pub gap: f64,
}

/// Check the noise-free rank heuristic on the stacked data matrix.
pub fn rank_heuristic_check(
    data: &IoSpectrumData,
    l0: usize,
    n_x_guess: usize,
) -> RankHeuristicReport {
    let stacked = stacked_complex_blocks(data, l0 + 1);
    let sv = singular_values_complex(&stacked);
    let observed = numerical_rank(&sv, DEFAULT_TOL_REL);
    let expected = (data.n_u() + 1) * (l0 + 1) + n_x_guess;
    let gap = if expected >= 1 && expected < sv.len() && sv[expected - 1] > 0.0 {
        sv[expected] / sv[expected - 1]
    } else {
        0.0
    };
    RankHeuristicReport {
        observed,
        expected,
        gap,
    }
}

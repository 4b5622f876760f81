//! Frequency grids, spectra, and the persistence-of-excitation machinery.
//!
//! The grid carries the `M` equidistant angles `omega_k = pi*k/M`. A
//! [`Spectrum`] stores one complex vector per grid point, the positive-
//! frequency half of a conjugate-symmetric spectrum; the conjugate half is
//! never materialized. On top of these sit the data-matrix constructors
//! (`window_vector`, `build_f`, `build_psi`, `realify_psi`) and the
//! persistence-of-excitation test.

use nalgebra::{DMatrix, DVector, DVectorView};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{numerical_rank, singular_values_complex};

/// The equidistant frequency grid `omega_k = pi*k/M`, `k = 0..M-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    omega: Vec<f64>,
}

impl FrequencyGrid {
    /// Build the grid with `m` points. Rejects `m = 0`.
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument(
                "grid size M must be at least 1".into(),
            ));
        }
        let omega = (0..m)
            .map(|k| std::f64::consts::PI * k as f64 / m as f64)
            .collect();
        Ok(Self { omega })
    }

    /// Number of grid points `M`.
    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees M >= 1
    }

    /// Angle at index `k`.
    pub fn omega(&self, k: usize) -> f64 {
        self.omega[k]
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omega
    }

    /// Unit-circle phasor `exp(j*omega_k)`.
    pub fn phasor(&self, k: usize) -> Complex64 {
        Complex64::from_polar(1.0, self.omega[k])
    }

    /// The phasor sequence as a one-dimensional spectrum.
    pub fn phasor_spectrum(&self) -> Spectrum {
        let m = self.len();
        let values = DMatrix::from_fn(1, m, |_, k| self.phasor(k));
        Spectrum {
            grid: self.clone(),
            values,
        }
    }
}

/// A length-`M` sequence of complex `n_s`-vectors sampled on a [`FrequencyGrid`].
#[derive(Debug, Clone)]
pub struct Spectrum {
    grid: FrequencyGrid,
    /// Column `k` holds the value at grid index `k`; shape `n_s x M`.
    values: DMatrix<Complex64>,
}

impl Spectrum {
    pub fn new(grid: FrequencyGrid, values: DMatrix<Complex64>) -> Result<Self> {
        if values.ncols() != grid.len() {
            return Err(Error::ShapeMismatch(format!(
                "spectrum has {} columns for a grid of {} points",
                values.ncols(),
                grid.len()
            )));
        }
        if values.nrows() == 0 {
            return Err(Error::InvalidArgument(
                "spectrum dimension must be positive".into(),
            ));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    /// Vector dimension `n_s`.
    pub fn dim(&self) -> usize {
        self.values.nrows()
    }

    /// Value at grid index `k`.
    pub fn value(&self, k: usize) -> DVectorView<'_, Complex64> {
        self.values.column(k)
    }

    pub fn values(&self) -> &DMatrix<Complex64> {
        &self.values
    }

    /// Stack two spectra on the same grid into one taller spectrum.
    pub fn stack(top: &Spectrum, bottom: &Spectrum) -> Result<Spectrum> {
        if top.grid != bottom.grid {
            return Err(Error::GridMismatch(top.grid.len(), bottom.grid.len()));
        }
        let m = top.grid.len();
        let n = top.dim() + bottom.dim();
        let mut values = DMatrix::zeros(n, m);
        values
            .view_mut((0, 0), (top.dim(), m))
            .copy_from(&top.values);
        values
            .view_mut((top.dim(), 0), (bottom.dim(), m))
            .copy_from(&bottom.values);
        Ok(Spectrum {
            grid: top.grid.clone(),
            values,
        })
    }
}

/// DFT of a real `2M`-sample sequence, evaluated on the grid.
///
/// `S_k = sum_{n=0}^{2M-1} s_n exp(-j*omega_k*n)`, no normalization. Direct
/// summation; grid sizes here are small and the convention is the contract.
pub fn dft(signal: &[DVector<f64>], grid: &FrequencyGrid) -> Result<Spectrum> {
    let m = grid.len();
    if signal.len() != 2 * m {
        return Err(Error::ShapeMismatch(format!(
            "signal has {} samples, expected 2M = {}",
            signal.len(),
            2 * m
        )));
    }
    let dim = signal[0].len();
    if dim == 0 || signal.iter().any(|s| s.len() != dim) {
        return Err(Error::ShapeMismatch(
            "signal samples must share one positive dimension".into(),
        ));
    }
    let mut values = DMatrix::zeros(dim, m);
    for k in 0..m {
        let w = grid.omega(k);
        let mut acc = DVector::<Complex64>::zeros(dim);
        for (n, sample) in signal.iter().enumerate() {
            let e = Complex64::from_polar(1.0, -w * n as f64);
            for r in 0..dim {
                acc[r] += e * sample[r];
            }
        }
        values.set_column(k, &acc);
    }
    Ok(Spectrum {
        grid: grid.clone(),
        values,
    })
}

/// Convenience wrapper for scalar-valued signals.
pub fn dft_scalar(signal: &[f64], grid: &FrequencyGrid) -> Result<Spectrum> {
    let cols: Vec<DVector<f64>> = signal
        .iter()
        .map(|&s| DVector::from_element(1, s))
        .collect();
    dft(&cols, grid)
}

/// Inverse DFT over the full `2M`-bin circle.
///
/// The conjugate half is imposed from the stored half, the Nyquist bin
/// (`k = M`, absent from the grid) is forced to zero, and the result is
/// scaled by `1/(2M)`, which guarantees a real signal. The DC bin enters
/// through its real part only, as its own conjugate pair.
pub fn idft_period(spectrum: &Spectrum) -> Vec<DVector<f64>> {
    let m = spectrum.grid.len();
    let dim = spectrum.dim();
    let scale = 1.0 / (2 * m) as f64;
    (0..2 * m)
        .map(|n| {
            let mut acc = DVector::<f64>::zeros(dim);
            for r in 0..dim {
                let mut v = spectrum.values[(r, 0)].re; // DC, real by symmetry
                for k in 1..m {
                    let e = Complex64::from_polar(1.0, spectrum.grid.omega(k) * n as f64);
                    v += 2.0 * (spectrum.values[(r, k)] * e).re;
                }
                acc[r] = v * scale;
            }
            acc
        })
        .collect()
}

/// The window vector `W_L(z) = [1, z, ..., z^{L-1}]^T`.
pub fn window_vector(z: Complex64, l: usize) -> DVector<Complex64> {
    assert!(l >= 1, "window length must be at least 1");
    let mut w = DVector::zeros(l);
    let mut p = Complex64::new(1.0, 0.0);
    for i in 0..l {
        w[i] = p;
        p *= z;
    }
    w
}

/// `F_L` over grid indices `lo..=hi`: column `k` is `W_L(exp(j*omega_k)) (x) S_k`.
pub fn build_f(s: &Spectrum, lo: usize, hi: usize, l: usize) -> Result<DMatrix<Complex64>> {
    if lo > hi || hi >= s.grid.len() {
        return Err(Error::InvalidArgument(format!(
            "index range [{lo}, {hi}] invalid for a grid of {} points",
            s.grid.len()
        )));
    }
    assert!(l >= 1, "window length must be at least 1");
    let dim = s.dim();
    let mut f = DMatrix::zeros(dim * l, hi - lo + 1);
    for (col, k) in (lo..=hi).enumerate() {
        let w = window_vector(s.grid.phasor(k), l);
        for i in 0..l {
            for r in 0..dim {
                f[(i * dim + r, col)] = w[i] * s.values[(r, k)];
            }
        }
    }
    Ok(f)
}

/// `Psi_L(S) = [F_L(S_[0,M-1]) | conj(F_L(S_[1,M-1]))]`, `2M-1` columns.
///
/// For `M = 1` the conjugate block is empty and only the DC column remains.
pub fn build_psi(s: &Spectrum, l: usize) -> DMatrix<Complex64> {
    let m = s.grid.len();
    let f0 = build_f(s, 0, m - 1, l).expect("full range is always valid");
    let mut psi = DMatrix::zeros(s.dim() * l, 2 * m - 1);
    psi.view_mut((0, 0), (f0.nrows(), m)).copy_from(&f0);
    if m > 1 {
        let f1 = build_f(s, 1, m - 1, l).expect("range checked");
        psi.view_mut((0, m), (f0.nrows(), m - 1))
            .copy_from(&f1.conjugate());
    }
    psi
}

/// Real-valued form `[Re(F_L(S_[0,M-1])) | Im(F_L(S_[1,M-1]))]`.
///
/// Carries the same numerical rank as [`build_psi`]; the conjugate pairing
/// makes the two forms column-equivalent.
pub fn realify_psi(s: &Spectrum, l: usize) -> DMatrix<f64> {
    let m = s.grid.len();
    let f0 = build_f(s, 0, m - 1, l).expect("full range is always valid");
    let mut out = DMatrix::zeros(f0.nrows(), 2 * m - 1);
    for j in 0..m {
        for i in 0..f0.nrows() {
            out[(i, j)] = f0[(i, j)].re;
        }
    }
    if m > 1 {
        let f1 = build_f(s, 1, m - 1, l).expect("range checked");
        for j in 0..m - 1 {
            for i in 0..f0.nrows() {
                out[(i, m + j)] = f1[(i, j)].im;
            }
        }
    }
    out
}

/// Outcome of a persistence-of-excitation test of order `L`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PeReport {
    /// Order `L` tested.
    pub order: usize,
    /// Numerical rank of `Psi_L`.
    pub rank: usize,
    /// Full row rank `n_s * L`.
    pub required_rank: usize,
    /// Singular values of `Psi_L`, descending.
    pub singular_values: Vec<f64>,
    /// Whether the spectrum is persistently exciting of order `L`.
    pub is_pe: bool,
}

/// Test persistence of excitation of order `l`.
///
/// Orders with `n_s * l > 2M - 1` are allowed and simply come back not PE,
/// matching the counting bound `2M - 1 >= L * n_s`.
pub fn check_pe(s: &Spectrum, l: usize, tol_rel: f64) -> PeReport {
    assert!(l >= 1, "PE order must be at least 1");
    let psi = build_psi(s, l);
    let singular_values = singular_values_complex(&psi);
    let rank = numerical_rank(&singular_values, tol_rel);
    let required_rank = s.dim() * l;
    PeReport {
        order: l,
        rank,
        required_rank,
        singular_values,
        is_pe: rank == required_rank,
    }
}

/// Largest order (up to the counting bound) the spectrum certifies as PE.
///
/// PE is monotone in the order, so a downward scan from the bound is exact.
pub fn max_pe_order(s: &Spectrum, tol_rel: f64) -> usize {
    let cap = (2 * s.grid.len() - 1) / s.dim();
    (1..=cap)
        .rev()
        .find(|&l| check_pe(s, l, tol_rel).is_pe)
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tolerances::DEFAULT_TOL_REL;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_signal(rng: &mut StdRng, len: usize, dim: usize) -> Vec<DVector<f64>> {
        (0..len)
            .map(|_| DVector::from_fn(dim, |_, _| rng.gen_range(-1.0..1.0)))
            .collect()
    }

    fn random_complex_spectrum(rng: &mut StdRng, m: usize, dim: usize) -> Spectrum {
        let grid = FrequencyGrid::new(m).unwrap();
        let values = DMatrix::from_fn(dim, m, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        Spectrum::new(grid, values).unwrap()
    }

    #[test]
    fn grid_angles_match_formula() {
        let g = FrequencyGrid::new(4).unwrap();
        assert_eq!(
            g.omegas(),
            &[
                0.0,
                std::f64::consts::PI / 4.0,
                std::f64::consts::PI / 2.0,
                3.0 * std::f64::consts::PI / 4.0
            ]
        );
        let g1 = FrequencyGrid::new(1).unwrap();
        assert_eq!(g1.omegas(), &[0.0]);
        let g20 = FrequencyGrid::new(20).unwrap();
        assert_relative_eq!(g20.omega(1), 0.15707963267948966, max_relative = 1e-15);
        assert!(FrequencyGrid::new(0).is_err());
    }

    #[test]
    fn grid_phasors_have_unit_modulus() {
        let g = FrequencyGrid::new(17).unwrap();
        for k in 0..17 {
            assert_abs_diff_eq!(g.phasor(k).norm(), 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn dft_of_constant_signal() {
        let grid = FrequencyGrid::new(2).unwrap();
        let c = 0.7;
        let sig: Vec<_> = (0..4).map(|_| DVector::from_element(1, c)).collect();
        let s = dft(&sig, &grid).unwrap();
        assert_abs_diff_eq!(s.value(0)[0].re, 4.0 * c, epsilon = 1e-14);
        assert_abs_diff_eq!(s.value(0)[0].im, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.value(1)[0].norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn dft_of_unit_impulse_is_flat() {
        let grid = FrequencyGrid::new(5).unwrap();
        let mut sig = vec![DVector::from_element(1, 0.0); 10];
        sig[0][0] = 1.0;
        let s = dft(&sig, &grid).unwrap();
        for k in 0..5 {
            assert_abs_diff_eq!(s.value(k)[0].re, 1.0, epsilon = 1e-15);
            assert_abs_diff_eq!(s.value(k)[0].im, 0.0, epsilon = 1e-15);
        }
    }

    /// Independent oracle: the first M bins of a 2M-point FFT use the same
    /// convention as the direct sum.
    #[test]
    fn dft_matches_fft_oracle() {
        use rustfft::FftPlanner;
        let mut rng = StdRng::seed_from_u64(1);
        let grid = FrequencyGrid::new(4).unwrap();
        let sig = random_signal(&mut rng, 8, 1);
        let s = dft(&sig, &grid).unwrap();

        let mut buf: Vec<rustfft::num_complex::Complex<f64>> = sig
            .iter()
            .map(|v| rustfft::num_complex::Complex::new(v[0], 0.0))
            .collect();
        FftPlanner::new().plan_fft_forward(8).process(&mut buf);
        for (k, bin) in buf.iter().take(4).enumerate() {
            assert_abs_diff_eq!(s.value(k)[0].re, bin.re, epsilon = 1e-12);
            assert_abs_diff_eq!(s.value(k)[0].im, bin.im, epsilon = 1e-12);
        }
    }

    #[test]
    fn dft_rejects_wrong_length_and_ragged_dims() {
        let grid = FrequencyGrid::new(3).unwrap();
        let sig = vec![DVector::from_element(1, 1.0); 5];
        assert!(matches!(dft(&sig, &grid), Err(Error::ShapeMismatch(_))));
        let mut ragged = vec![DVector::from_element(2, 1.0); 6];
        ragged[3] = DVector::from_element(1, 1.0);
        assert!(dft(&ragged, &grid).is_err());
    }

    #[test]
    fn idft_round_trips_and_produces_real_signal() {
        let mut rng = StdRng::seed_from_u64(2);
        let grid = FrequencyGrid::new(6).unwrap();
        // conjugate-symmetric content: real DC, arbitrary complex elsewhere
        let mut values = DMatrix::from_fn(2, 6, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        values[(0, 0)] = Complex64::new(values[(0, 0)].re, 0.0);
        values[(1, 0)] = Complex64::new(values[(1, 0)].re, 0.0);
        let s = Spectrum::new(grid.clone(), values.clone()).unwrap();
        let sig = idft_period(&s);
        assert_eq!(sig.len(), 12);
        let back = dft(&sig, &grid).unwrap();
        for k in 0..6 {
            for r in 0..2 {
                assert_abs_diff_eq!(back.value(k)[r].re, values[(r, k)].re, epsilon = 1e-12);
                assert_abs_diff_eq!(back.value(k)[r].im, values[(r, k)].im, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn window_vector_examples() {
        let w = window_vector(Complex64::new(1.0, 0.0), 3);
        assert_eq!(w.as_slice(), &[Complex64::new(1.0, 0.0); 3]);
        let w0 = window_vector(Complex64::new(0.0, 0.0), 3);
        assert_eq!(w0[0], Complex64::new(1.0, 0.0));
        assert_eq!(w0[1], Complex64::new(0.0, 0.0));
        assert_eq!(w0[2], Complex64::new(0.0, 0.0));
        let wq = window_vector(Complex64::new(0.0, 1.0), 4);
        assert_abs_diff_eq!(
            (wq[1] - Complex64::new(0.0, 1.0)).norm(),
            0.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            (wq[2] - Complex64::new(-1.0, 0.0)).norm(),
            0.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            (wq[3] - Complex64::new(0.0, -1.0)).norm(),
            0.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn build_f_with_unit_window_returns_spectrum_columns() {
        let mut rng = StdRng::seed_from_u64(3);
        let s = random_complex_spectrum(&mut rng, 5, 2);
        let f = build_f(&s, 1, 3, 1).unwrap();
        for (col, k) in (1..=3).enumerate() {
            for r in 0..2 {
                assert_eq!(f[(r, col)], s.value(k)[r]);
            }
        }
    }

    #[test]
    fn build_f_entries_match_elementwise_formula() {
        let mut rng = StdRng::seed_from_u64(4);
        let s = random_complex_spectrum(&mut rng, 3, 1);
        let l = 4;
        let f = build_f(&s, 0, 2, l).unwrap();
        for k in 0..3 {
            let z = s.grid().phasor(k);
            for i in 0..l {
                let expect = z.powu(i as u32) * s.value(k)[0];
                assert_abs_diff_eq!((f[(i, k)] - expect).norm(), 0.0, epsilon = 1e-12);
            }
        }
        let zero = Spectrum::new(FrequencyGrid::new(3).unwrap(), DMatrix::zeros(1, 3)).unwrap();
        assert!(build_f(&zero, 0, 2, 2)
            .unwrap()
            .iter()
            .all(|c| c.norm() == 0.0));
        assert!(build_f(&s, 2, 1, 1).is_err());
    }

    #[test]
    fn psi_right_block_is_conjugate_of_f() {
        let mut rng = StdRng::seed_from_u64(5);
        let s = random_complex_spectrum(&mut rng, 3, 1);
        let l = 3;
        let psi = build_psi(&s, l);
        assert_eq!(psi.ncols(), 5);
        let f1 = build_f(&s, 1, 2, l).unwrap();
        for j in 0..2 {
            for i in 0..l {
                assert_eq!(psi[(i, 3 + j)], f1[(i, j)].conj());
            }
        }
    }

    #[test]
    fn psi_degenerate_single_point_grid() {
        let grid = FrequencyGrid::new(1).unwrap();
        let s = Spectrum::new(grid, DMatrix::from_element(2, 1, Complex64::new(1.0, 0.0))).unwrap();
        let psi = build_psi(&s, 2);
        assert_eq!(psi.shape(), (4, 1));
        // only k = 0 exists, phasor is 1: Psi is real
        assert!(psi.iter().all(|c| c.im == 0.0));
    }

    #[test]
    fn realify_matches_rank_of_complex_form() {
        let mut rng = StdRng::seed_from_u64(6);
        for _ in 0..20 {
            let s = random_complex_spectrum(&mut rng, 3, 1);
            for l in 1..=5 {
                let rc =
                    numerical_rank(&singular_values_complex(&build_psi(&s, l)), DEFAULT_TOL_REL);
                let rr = numerical_rank(
                    &crate::linalg::singular_values_real(&realify_psi(&s, l)),
                    DEFAULT_TOL_REL,
                );
                assert_eq!(rc, rr, "rank mismatch at L={l}");
            }
        }
    }

    #[test]
    fn realify_of_zero_spectrum_is_zero() {
        let s = Spectrum::new(FrequencyGrid::new(4).unwrap(), DMatrix::zeros(2, 4)).unwrap();
        assert!(realify_psi(&s, 3).iter().all(|&x| x == 0.0));
    }

    #[test]
    fn pe_fails_on_zero_spectrum() {
        let s = Spectrum::new(FrequencyGrid::new(4).unwrap(), DMatrix::zeros(1, 4)).unwrap();
        for l in 1..=4 {
            let rep = check_pe(&s, l, DEFAULT_TOL_REL);
            assert!(!rep.is_pe);
            assert_eq!(rep.rank, 0);
        }
    }

    #[test]
    fn pe_of_case_study_augmented_input() {
        // odd bins excited at amplitude 1, plus the phasor channel; M = 20
        let grid = FrequencyGrid::new(20).unwrap();
        let u = Spectrum::new(
            grid.clone(),
            DMatrix::from_fn(1, 20, |_, k| {
                if k % 2 == 1 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }),
        )
        .unwrap();
        let v = Spectrum::stack(&u, &grid.phasor_spectrum()).unwrap();
        let rep = check_pe(&v, 9, DEFAULT_TOL_REL);
        assert!(
            rep.is_pe,
            "case-study augmented input must be PE of order 9"
        );
        assert_eq!(rep.rank, 18);
        // realified form certifies the same full row rank at L = 9
        let rr = numerical_rank(
            &crate::linalg::singular_values_real(&realify_psi(&v, 9)),
            DEFAULT_TOL_REL,
        );
        assert_eq!(rr, 18);
    }

    #[test]
    fn pe_generic_square_case() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..10 {
            let s = random_complex_spectrum(&mut rng, 3, 1);
            assert!(check_pe(&s, 5, DEFAULT_TOL_REL).is_pe);
        }
    }

    #[test]
    fn pe_counting_bound() {
        let mut rng = StdRng::seed_from_u64(8);
        let s = random_complex_spectrum(&mut rng, 3, 2);
        // n_s * L = 2L > 2M-1 = 5 for L >= 3
        for l in 3..=6 {
            assert!(!check_pe(&s, l, DEFAULT_TOL_REL).is_pe);
        }
        assert!(max_pe_order(&s, DEFAULT_TOL_REL) <= 2);
    }

    proptest! {
        /// DFT linearity over random real signals.
        #[test]
        fn dft_is_linear(seed in 0u64..500, alpha in -2.0f64..2.0, beta in -2.0f64..2.0) {
            let mut rng = StdRng::seed_from_u64(seed);
            let grid = FrequencyGrid::new(4).unwrap();
            let a = random_signal(&mut rng, 8, 2);
            let b = random_signal(&mut rng, 8, 2);
            let combo: Vec<DVector<f64>> =
                a.iter().zip(&b).map(|(x, y)| x * alpha + y * beta).collect();
            let sa = dft(&a, &grid).unwrap();
            let sb = dft(&b, &grid).unwrap();
            let sc = dft(&combo, &grid).unwrap();
            let scale = sc.values().iter().map(|c| c.norm()).fold(1.0, f64::max);
            for k in 0..4 {
                for r in 0..2 {
                    let want = sa.value(k)[r] * alpha + sb.value(k)[r] * beta;
                    prop_assert!((sc.value(k)[r] - want).norm() <= 1e-12 * scale);
                }
            }
        }

        /// One-step shift of a 2M-periodic signal multiplies bin k by exp(j*omega_k).
        #[test]
        fn dft_shift_property_on_periodic_extension(seed in 0u64..500) {
            let mut rng = StdRng::seed_from_u64(seed);
            let grid = FrequencyGrid::new(5).unwrap();
            let a = random_signal(&mut rng, 10, 1);
            let shifted: Vec<DVector<f64>> = (0..10).map(|n| a[(n + 1) % 10].clone()).collect();
            let sa = dft(&a, &grid).unwrap();
            let ss = dft(&shifted, &grid).unwrap();
            for k in 0..5 {
                let want = grid.phasor(k) * sa.value(k)[0];
                prop_assert!((ss.value(k)[0] - want).norm() <= 1e-11);
            }
        }
    }
}

//! Discrete-time state-space models, simulation, and experiment-to-spectrum
//! conversion.
//!
//! Models are the quadruplet `(A, B, C, D)` of real matrices. Besides the
//! recursion itself, this module evaluates the transfer function
//! `H(z) = C (zI - A)^{-1} B + D` and the transient
//! `T(z) = C (zI - A)^{-1} z (x_0 - x_{2M})` left behind by a finite record,
//! and converts a `2M`-sample experiment into the input/state/output spectra
//! that the trajectory and evaluation machinery consumes.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{complexify, numerical_rank, singular_values_real};
use crate::spectra::{dft, FrequencyGrid, Spectrum};
use crate::tolerances::{DEFAULT_TOL_REL, RESOLVENT_COND_LIMIT};

/// A discrete-time LTI system `x_{k+1} = A x_k + B u_k`, `y_k = C x_k + D u_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpaceModel {
    a: DMatrix<f64>,
    b: DMatrix<f64>,
    c: DMatrix<f64>,
    d: DMatrix<f64>,
}

impl StateSpaceModel {
    pub fn new(a: DMatrix<f64>, b: DMatrix<f64>, c: DMatrix<f64>, d: DMatrix<f64>) -> Result<Self> {
        let (nx, nu, ny) = (a.nrows(), b.ncols(), c.nrows());
        if nx == 0 || nu == 0 || ny == 0 {
            return Err(Error::InvalidArgument(
                "state, input, and output dimensions must be positive".into(),
            ));
        }
        if a.ncols() != nx
            || b.nrows() != nx
            || c.ncols() != nx
            || d.nrows() != ny
            || d.ncols() != nu
        {
            return Err(Error::ShapeMismatch(format!(
                "A {}x{}, B {}x{}, C {}x{}, D {}x{} are inconsistent",
                a.nrows(),
                a.ncols(),
                b.nrows(),
                b.ncols(),
                c.nrows(),
                c.ncols(),
                d.nrows(),
                d.ncols()
            )));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn n_x(&self) -> usize {
        self.a.nrows()
    }

    pub fn n_u(&self) -> usize {
        self.b.ncols()
    }

    pub fn n_y(&self) -> usize {
        self.c.nrows()
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn b(&self) -> &DMatrix<f64> {
        &self.b
    }

    pub fn c(&self) -> &DMatrix<f64> {
        &self.c
    }

    pub fn d(&self) -> &DMatrix<f64> {
        &self.d
    }
}

#[derive(Serialize, Deserialize)]
struct ModelJson {
    #[serde(rename = "A")]
    a: Vec<Vec<f64>>,
    #[serde(rename = "B")]
    b: Vec<Vec<f64>>,
    #[serde(rename = "C")]
    c: Vec<Vec<f64>>,
    #[serde(rename = "D")]
    d: Vec<Vec<f64>>,
}

fn to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

fn from_rows(name: &str, rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let nr = rows.len();
    let nc = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != nc) {
        return Err(Error::ShapeMismatch(format!(
            "{name} rows have uneven lengths"
        )));
    }
    Ok(DMatrix::from_fn(nr, nc, |i, j| rows[i][j]))
}

// JSON wire format: row-major nested arrays under "A", "B", "C", "D".
impl Serialize for StateSpaceModel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ModelJson {
            a: to_rows(&self.a),
            b: to_rows(&self.b),
            c: to_rows(&self.c),
            d: to_rows(&self.d),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for StateSpaceModel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = ModelJson::deserialize(deserializer)?;
        let a = from_rows("A", &raw.a).map_err(D::Error::custom)?;
        let b = from_rows("B", &raw.b).map_err(D::Error::custom)?;
        let c = from_rows("C", &raw.c).map_err(D::Error::custom)?;
        let d = from_rows("D", &raw.d).map_err(D::Error::custom)?;
        StateSpaceModel::new(a, b, c, d).map_err(D::Error::custom)
    }
}

/// A finite input-output trajectory (equal lengths, at least one sample).
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub u: Vec<DVector<f64>>,
    pub y: Vec<DVector<f64>>,
}

impl Trajectory {
    pub fn new(u: Vec<DVector<f64>>, y: Vec<DVector<f64>>) -> Result<Self> {
        if u.is_empty() || u.len() != y.len() {
            return Err(Error::ShapeMismatch(format!(
                "trajectory lengths differ or are empty: u {} vs y {}",
                u.len(),
                y.len()
            )));
        }
        Ok(Self { u, y })
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees at least one sample
    }

    /// Largest absolute entry over both channels.
    pub fn inf_norm(&self) -> f64 {
        self.u
            .iter()
            .chain(self.y.iter())
            .flat_map(|v| v.iter())
            .fold(0.0f64, |acc, &x| acc.max(x.abs()))
    }
}

/// Paired input/output spectra (optionally with the state spectrum) on one grid.
///
/// This is the data side of the trajectory and evaluation machinery. The state
/// spectrum, when present, is only read by rank certificates and tests; the
/// estimation paths treat the boundary states as unknown.
#[derive(Debug, Clone)]
pub struct IoSpectrumData {
    u: Spectrum,
    y: Spectrum,
    x: Option<Spectrum>,
}

impl IoSpectrumData {
    pub fn new(u: Spectrum, y: Spectrum, x: Option<Spectrum>) -> Result<Self> {
        if u.grid() != y.grid() {
            return Err(Error::GridMismatch(u.grid().len(), y.grid().len()));
        }
        if let Some(xs) = &x {
            if xs.grid() != u.grid() {
                return Err(Error::GridMismatch(u.grid().len(), xs.grid().len()));
            }
        }
        Ok(Self { u, y, x })
    }

    pub fn grid(&self) -> &FrequencyGrid {
        self.u.grid()
    }

    pub fn input(&self) -> &Spectrum {
        &self.u
    }

    pub fn output(&self) -> &Spectrum {
        &self.y
    }

    pub fn state(&self) -> Option<&Spectrum> {
        self.x.as_ref()
    }

    pub fn n_u(&self) -> usize {
        self.u.dim()
    }

    pub fn n_y(&self) -> usize {
        self.y.dim()
    }

    /// The augmented input `(U_k, Omega_k)` with the phasor channel appended.
    pub fn augmented_input(&self) -> Spectrum {
        Spectrum::stack(&self.u, &self.grid().phasor_spectrum())
            .expect("phasor spectrum shares the grid")
    }
}

/// Run the state recursion for `u.len()` steps.
///
/// Returns all `N + 1` states (so `x_{2M}` is available when `N = 2M`) and
/// the `N` outputs.
#[allow(clippy::type_complexity)]
pub fn simulate(
    model: &StateSpaceModel,
    u: &[DVector<f64>],
    x0: &DVector<f64>,
) -> Result<(Vec<DVector<f64>>, Vec<DVector<f64>>)> {
    if x0.len() != model.n_x() {
        return Err(Error::ShapeMismatch(format!(
            "x0 has length {}, state dimension is {}",
            x0.len(),
            model.n_x()
        )));
    }
    if u.iter().any(|uk| uk.len() != model.n_u()) {
        return Err(Error::ShapeMismatch(
            "input samples must match the input dimension".into(),
        ));
    }
    let mut states = Vec::with_capacity(u.len() + 1);
    let mut outputs = Vec::with_capacity(u.len());
    let mut x = x0.clone();
    states.push(x.clone());
    for uk in u {
        outputs.push(&model.c * &x + &model.d * uk);
        x = &model.a * &x + &model.b * uk;
        states.push(x.clone());
    }
    Ok((states, outputs))
}

/// Resolvent solve `(zI - A)^{-1} rhs` with a condition check.
///
/// Declared failed when the condition estimate exceeds the crate limit,
/// which is how "z is not an eigenvalue of A" is enforced numerically.
fn resolvent_solve(
    model: &StateSpaceModel,
    z: Complex64,
    rhs: &DMatrix<Complex64>,
) -> Result<DMatrix<Complex64>> {
    let nx = model.n_x();
    let mut m = complexify(model.a.as_view());
    m.neg_mut();
    for i in 0..nx {
        m[(i, i)] += z;
    }
    let sv = crate::linalg::singular_values_complex(&m);
    let smax = sv[0];
    let smin = sv[nx - 1];
    let condition = if smin > 0.0 {
        smax / smin
    } else {
        f64::INFINITY
    };
    if !condition.is_finite() || condition > RESOLVENT_COND_LIMIT {
        return Err(Error::EvaluationAtEigenvalue { condition });
    }
    m.lu()
        .solve(rhs)
        .ok_or(Error::EvaluationAtEigenvalue { condition })
}

/// Transfer function `H(z) = C (zI - A)^{-1} B + D`, one solve per B column.
pub fn transfer_function(model: &StateSpaceModel, z: Complex64) -> Result<DMatrix<Complex64>> {
    let w = resolvent_solve(model, z, &complexify(model.b.as_view()))?;
    Ok(complexify(model.c.as_view()) * w + complexify(model.d.as_view()))
}

/// Transient sample `T(z) = C (zI - A)^{-1} z dx` for `dx = x_0 - x_{2M}`.
pub fn transient(
    model: &StateSpaceModel,
    dx: &DVector<f64>,
    z: Complex64,
) -> Result<DVector<Complex64>> {
    if dx.len() != model.n_x() {
        return Err(Error::ShapeMismatch(format!(
            "dx has length {}, state dimension is {}",
            dx.len(),
            model.n_x()
        )));
    }
    let rhs = DMatrix::from_fn(model.n_x(), 1, |i, _| z * dx[i]);
    let w = resolvent_solve(model, z, &rhs)?;
    Ok((complexify(model.c.as_view()) * w).column(0).into_owned())
}

/// The k-step observability matrix, rows `C, CA, ..., CA^{k-1}`.
pub fn observability_matrix(model: &StateSpaceModel, k: usize) -> DMatrix<f64> {
    assert!(k >= 1, "observability matrix needs at least one block");
    let (ny, nx) = (model.n_y(), model.n_x());
    let mut out = DMatrix::zeros(ny * k, nx);
    let mut block = model.c.clone();
    for i in 0..k {
        out.view_mut((i * ny, 0), (ny, nx)).copy_from(&block);
        if i + 1 < k {
            block = &block * &model.a;
        }
    }
    out
}

/// The observability index: smallest `k` at which `rank O_k` is maximal,
/// searched over `k = 1..n_x`.
pub fn observability_index(model: &StateSpaceModel) -> usize {
    let ranks: Vec<usize> = (1..=model.n_x())
        .map(|k| {
            numerical_rank(
                &singular_values_real(&observability_matrix(model, k)),
                DEFAULT_TOL_REL,
            )
        })
        .collect();
    let max = ranks.iter().copied().max().unwrap_or(0);
    ranks
        .iter()
        .position(|&r| r == max)
        .map(|p| p + 1)
        .unwrap_or(1)
}

/// Controllability of `(A, B)` via the rank of `[B, AB, ..., A^{n_x-1}B]`.
pub fn is_controllable(model: &StateSpaceModel) -> bool {
    let (nx, nu) = (model.n_x(), model.n_u());
    let mut ctrb = DMatrix::zeros(nx, nx * nu);
    let mut block = model.b.clone();
    for i in 0..nx {
        ctrb.view_mut((0, i * nu), (nx, nu)).copy_from(&block);
        if i + 1 < nx {
            block = &model.a * &block;
        }
    }
    numerical_rank(&singular_values_real(&ctrb), DEFAULT_TOL_REL) == nx
}

/// Embed the transient into the input matrix: `(A, [B | dx], C, [D | 0])`.
///
/// Driving the extra channel with the grid phasors turns a non-steady-state
/// record of the original system into steady-state data of this one.
pub fn augment(model: &StateSpaceModel, dx: &DVector<f64>) -> StateSpaceModel {
    let (nx, nu, ny) = (model.n_x(), model.n_u(), model.n_y());
    let mut b = DMatrix::zeros(nx, nu + 1);
    b.view_mut((0, 0), (nx, nu)).copy_from(&model.b);
    b.view_mut((0, nu), (nx, 1)).copy_from(dx);
    let mut d = DMatrix::zeros(ny, nu + 1);
    d.view_mut((0, 0), (ny, nu)).copy_from(&model.d);
    StateSpaceModel {
        a: model.a.clone(),
        b,
        c: model.c.clone(),
        d,
    }
}

/// Run a `2M`-sample experiment and return its spectra plus `dx = x_0 - x_{2M}`.
///
/// The state spectrum covers the first `2M` states only; `x_{2M}` enters
/// solely through `dx`, which is returned for oracle and testing use -- the
/// estimation operations never read it.
pub fn experiment_to_spectrum(
    model: &StateSpaceModel,
    u: &[DVector<f64>],
    x0: &DVector<f64>,
    grid: &FrequencyGrid,
) -> Result<(IoSpectrumData, DVector<f64>)> {
    let m = grid.len();
    if u.len() != 2 * m {
        return Err(Error::ShapeMismatch(format!(
            "experiment needs 2M = {} input samples, got {}",
            2 * m,
            u.len()
        )));
    }
    let (states, outputs) = simulate(model, u, x0)?;
    let u_spec = dft(u, grid)?;
    let x_spec = dft(&states[..2 * m], grid)?;
    let y_spec = dft(&outputs, grid)?;
    let dx = &states[0] - &states[2 * m];
    Ok((IoSpectrumData::new(u_spec, y_spec, Some(x_spec))?, dx))
}

/// Companion-form realization of a rational transfer function.
///
/// `num` and `den` hold coefficients highest power first, with
/// `deg(num) <= deg(den)` after zero padding and `den` monic-normalizable.
pub fn companion_realization(num: &[f64], den: &[f64]) -> Result<StateSpaceModel> {
    if den.is_empty() || den[0] == 0.0 {
        return Err(Error::InvalidArgument(
            "denominator must have a nonzero leading coefficient".into(),
        ));
    }
    if num.len() > den.len() {
        return Err(Error::InvalidArgument(
            "transfer function must be proper".into(),
        ));
    }
    let n = den.len() - 1;
    if n == 0 {
        return Err(Error::InvalidArgument(
            "static gains have no state here".into(),
        ));
    }
    let dlead = den[0];
    let den: Vec<f64> = den.iter().map(|&x| x / dlead).collect();
    let mut padded = vec![0.0; den.len() - num.len()];
    padded.extend(num.iter().map(|&x| x / dlead));
    let d0 = padded[0];
    // strictly proper remainder after peeling off the feedthrough
    let rem: Vec<f64> = (1..=n).map(|i| padded[i] - d0 * den[i]).collect();

    let mut a = DMatrix::zeros(n, n);
    for j in 0..n {
        a[(0, j)] = -den[j + 1];
    }
    for i in 1..n {
        a[(i, i - 1)] = 1.0;
    }
    let mut b = DMatrix::zeros(n, 1);
    b[(0, 0)] = 1.0;
    let c = DMatrix::from_fn(1, n, |_, j| rem[j]);
    let d = DMatrix::from_element(1, 1, d0);
    StateSpaceModel::new(a, b, c, d)
}

/// Largest relative defect of the spectra relations for a produced data set.
///
/// Checks, at every bin, `exp(j w_k) X_k = A X_k + B U_k + exp(j w_k) dx`
/// and `Y_k = C X_k + D U_k`. Diagnostic for data coming out of
/// [`experiment_to_spectrum`]; with `dx = 0` this is the steady-state check.
pub fn spectrum_relation_residual(
    model: &StateSpaceModel,
    data: &IoSpectrumData,
    dx: &DVector<f64>,
) -> Result<f64> {
    let x = data.state().ok_or(Error::MissingStateSpectrum)?;
    let a = complexify(model.a.as_view());
    let b = complexify(model.b.as_view());
    let c = complexify(model.c.as_view());
    let d = complexify(model.d.as_view());
    let dxc = DVector::from_fn(dx.len(), |i, _| Complex64::new(dx[i], 0.0));
    let inf = |v: &DVector<Complex64>| v.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    let mut worst = 0.0f64;
    for k in 0..data.grid().len() {
        let ek = data.grid().phasor(k);
        let xk = x.value(k).into_owned();
        let uk = data.input().value(k).into_owned();
        let lhs = &xk * ek;
        let rhs = &a * &xk + &b * &uk + &dxc * ek;
        worst = worst.max(inf(&(&lhs - &rhs)) / (1.0 + inf(&lhs)));

        let yk = data.output().value(k).into_owned();
        let out = &c * &xk + &d * &uk;
        worst = worst.max(inf(&(&yk - &out)) / (1.0 + inf(&yk)));
    }
    Ok(worst)
}

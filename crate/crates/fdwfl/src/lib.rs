//! Data-driven analysis of discrete-time LTI systems from non-steady-state
//! frequency-domain data.
//!
//! The toolkit characterizes an unknown system's behavior directly from
//! measured input/output spectra, without first fitting a parametric model.
//! It handles records that still contain transients: the boundary term is
//! absorbed into an augmented system driven by the grid phasors, which makes
//! the steady-state trajectory machinery applicable to finite, non-periodic
//! records. On top of that sit exact FRF/transient evaluation at arbitrary
//! complex frequencies and a noise-robust estimator based on a conjugate-
//! structured SVD, plus a benchmark harness and CLI.

pub mod bench;
pub mod error;
pub mod frfeval;
pub mod lti;
pub mod spectra;
pub mod tolerances;
pub mod wfl;

mod linalg;
mod wire;

pub use error::{Error, Result};

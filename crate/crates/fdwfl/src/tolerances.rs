//! Numerical thresholds used across the crate.
//!
//! Rank decisions everywhere follow one rule: a singular value counts while
//! `sigma_i > tol_rel * sigma_max`. The remaining constants bound when a
//! least-squares fit is accepted and when a solve is declared failed.

/// Relative cutoff for numerical rank decisions.
pub const DEFAULT_TOL_REL: f64 = 1e-9;

/// Membership feasibility: residual < coeff * (1 + max |trajectory entry|).
pub const MEMBERSHIP_TOL_COEFF: f64 = 1e-7;

/// A resolvent solve is declared failed beyond this condition estimate.
pub const RESOLVENT_COND_LIMIT: f64 = 1.0 / DEFAULT_TOL_REL;

/// Evaluation systems beyond this condition estimate are rejected.
pub const EVAL_COND_LIMIT: f64 = 1e12;

/// Relative truncation applied inside minimum-norm least-squares solves.
///
/// Kept near machine precision so that directions up to [`EVAL_COND_LIMIT`]
/// stay numerically supported; diagnostics use [`DEFAULT_TOL_REL`] instead.
pub const LSTSQ_TRUNCATION_REL: f64 = 1e-13;

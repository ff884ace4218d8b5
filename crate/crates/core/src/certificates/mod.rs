//! Lyapunov functions and rate bounds evaluated along recorded trajectories.
//!
//! Tolerance model: with `U₀` the initial potential of a certificate,
//! `tol_k = 1e-9·(1 + |U₀|) + k·1e-12·|U₀| + (1 + w_k)·ε_ref`, where `w_k` is
//! the weight the potential puts on `f − f⋆` and `ε_ref` bounds the error of a
//! refined (non-exact) reference. Geometric certificates are only checked
//! while the potential sits above the floating-point floor.

mod bounds;
mod lyapunov;
mod report;

pub use bounds::{
    bound_agm, bound_lc, bound_ogm_primary, bound_ogm_secondary, bound_ogm_secondary_simple,
    bound_sc_agm, bound_sc_ogm, LcBound,
};
pub use lyapunov::{
    gap_term, lyapunov_agm, lyapunov_lc, lyapunov_lc_tilde, lyapunov_ogm, lyapunov_ogm_tilde,
    lyapunov_sc, lyapunov_sc_ogm, lyapunov_sc_ogm_tilde, LcStep,
};
pub use report::{certify, certify_with, check_cocoercivity_chain, CertRow, CertificateReport, Tolerance};

use thiserror::Error;

use crate::methods::Trace;
use crate::numkit::{NumError, Vector};
use crate::problems::Reference;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertError {
    #[error("certificate unavailable: {0}")]
    Unavailable(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error(transparent)]
    Num(#[from] NumError),
}

fn reference<T: Scalar>(trace: &Trace<T>) -> Result<&Reference<T>, CertError> {
    trace
        .oracle
        .reference()
        .ok_or_else(|| CertError::Unavailable(format!("{} has no reference solution", trace.oracle.name())))
}

fn row<T: Scalar>(trace: &Trace<T>, k: usize) -> Result<&crate::methods::Snapshot<T>, CertError> {
    trace
        .rows
        .get(k)
        .ok_or_else(|| CertError::Usage(format!("trace has no row {k} ({} rows)", trace.rows.len())))
}

/// `‖x₀ − x⋆‖²` in the oracle's norm.
pub fn initial_distance_sq<T: Scalar>(trace: &Trace<T>) -> Result<T, CertError> {
    let x0 = &row(trace, 0)?.x;
    Ok(trace.oracle.norm().distance_sq(x0, &reference(trace)?.point)?)
}

/// `f(x) − f⋆`
fn gap<T: Scalar>(trace: &Trace<T>, x: &Vector<T>) -> Result<T, CertError> {
    trace
        .oracle
        .gap(x)?
        .ok_or_else(|| CertError::Unavailable("no reference solution".into()))
}

//! N-width analysis for the shifted-profile manifold of the linear transport
//! equation.
//!
//! The solution of the unit-speed transport problem at final time is
//! `u_mu(x) = g(x - mu)` for a datum `g` on `(-1, 1)` extended 2-periodically.
//! This crate computes how well the family `{u_mu : mu in [0,1]}` can be
//! approximated by N-dimensional linear subspaces, along two routes:
//!
//! * analytically, from the Fourier coefficients of `g` ([`fourier`],
//!   [`widths`]), including exact width formulas for half-wave symmetric data;
//! * empirically, from snapshot matrices and their singular values
//!   ([`snapshots`]).
//!
//! [`experiments`] scripts the benchmark studies (decay rates, steepness,
//! random data, a 2D tensor setup) and [`cli`] exposes everything as the
//! `nwidth` executable.

pub mod cli;
pub mod experiments;
pub mod fourier;
pub mod signals;
pub mod snapshots;
pub mod widths;

use std::fmt;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A precondition on an argument was violated.
    InvalidParameter(String),
    /// Adaptive quadrature did not reach the requested tolerance.
    QuadratureNotConverged {
        what: String,
        achieved: f64,
        requested: f64,
    },
    /// The operation is not defined for this signal kind.
    Unsupported(String),
    /// The SVD backend reported a failure.
    SvdFailed(String),
    /// A named CSV column was not found.
    MissingColumn(String),
    /// File IO failed.
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter(m) => write!(f, "invalid parameter: {m}"),
            Error::QuadratureNotConverged { what, achieved, requested } => write!(
                f,
                "quadrature for {what} did not converge: reached {achieved:.3e}, requested {requested:.3e}"
            ),
            Error::Unsupported(m) => write!(f, "unsupported operation: {m}"),
            Error::SvdFailed(m) => write!(f, "svd failed: {m}"),
            Error::MissingColumn(m) => write!(f, "missing column: {m}"),
            Error::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

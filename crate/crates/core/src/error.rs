use thiserror::Error;

/// Errors produced by the analytical and sampling routines.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The distribution has zero mean where a positive mean is required.
    #[error("degenerate distribution: {0}")]
    Degenerate(String),
    /// A graph-construction parameter is infeasible (e.g. an edge probability above one).
    #[error("parameter error: {0}")]
    Parameter(String),
    /// An iterative solver hit its iteration cap.
    #[error("solver did not converge: {0}")]
    NoConvergence(String),
    /// A subcritical-only quantity was requested in the supercritical regime.
    #[error("supercritical regime (threshold = {0}): mean outbreak size diverges")]
    Supercritical(f64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        domain(format!("{name} = {p} is not a probability in [0, 1]"))
    }
}

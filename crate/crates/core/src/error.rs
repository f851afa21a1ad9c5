use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A single violated parameter invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub field: &'static str,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

/// Pipeline stage an error originated in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    SteadyState,
    Stability,
    Lyapunov,
    Coherence,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::SteadyState => "steady-state",
            Stage::Stability => "stability",
            Stage::Lyapunov => "lyapunov",
            Stage::Coherence => "coherence",
        })
    }
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad input: parameters, config, spec.
    Config,
    /// Physically meaningless point (instability, parametric threshold).
    Physics,
    /// Internal numerical failure.
    Numerical,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{field}: {reason}")]
    Domain { field: &'static str, reason: String },

    #[error("invalid parameters: {}", join(.0))]
    Invalid(Vec<Violation>),

    #[error("squeezing at parametric threshold; no finite steady state (relative denominator {ratio:.3e})")]
    ParametricThreshold { ratio: f64 },

    #[error(
        "self-consistent magnon detuning did not converge in {iterations} steps (last relative change {change:.3e})"
    )]
    NotConverged { iterations: usize, change: f64 },

    #[error("no stationary covariance: drift matrix is not stable (spectral abscissa {abscissa:.6e} rad/s)")]
    NoStationaryCovariance { abscissa: f64 },

    #[error("stability indeterminate: {0}")]
    Indeterminate(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("unphysical state: {0}")]
    Unphysical(String),

    #[error("contrast undefined at this point: {0}")]
    ContrastUndefined(String),

    #[error("{stage} stage: {source}")]
    Stage { stage: Stage, source: Box<Error> },

    #[error("configuration: {0}")]
    Config(String),
}

fn join(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

impl Error {
    pub(crate) fn at(self, stage: Stage) -> Self {
        match self {
            e @ Error::Stage { .. } => e,
            e => Error::Stage { stage, source: Box::new(e) },
        }
    }

    /// The innermost error, with stage wrappers removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            e => e,
        }
    }

    pub fn kind(&self) -> ErrorKind {
        match self.root() {
            Error::Domain { .. } | Error::Invalid(_) | Error::Config(_) => ErrorKind::Config,
            Error::ParametricThreshold { .. }
            | Error::NoStationaryCovariance { .. }
            | Error::Indeterminate(_)
            | Error::ContrastUndefined(_) => ErrorKind::Physics,
            Error::NotConverged { .. } | Error::Numerical(_) | Error::Unphysical(_) => ErrorKind::Numerical,
            Error::Stage { .. } => unreachable!(),
        }
    }

    /// Short machine tag, used in sweep status columns.
    pub fn tag(&self) -> &'static str {
        match self.root() {
            Error::Domain { .. } | Error::Invalid(_) => "validation",
            Error::ParametricThreshold { .. } => "threshold",
            Error::NotConverged { .. } => "not-converged",
            Error::NoStationaryCovariance { .. } => "unstable",
            Error::Indeterminate(_) => "indeterminate",
            Error::Numerical(_) => "numerical",
            Error::Unphysical(_) => "unphysical",
            Error::ContrastUndefined(_) => "contrast-undefined",
            Error::Config(_) => "config",
            Error::Stage { .. } => unreachable!(),
        }
    }
}

use thiserror::Error;

use crate::analysis::AnalysisError;
use crate::params::ParamsError;
use crate::pcf::PcfError;
use crate::phasespace::PhaseSpaceError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Crate-level error, wrapping the per-module error types.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Params(#[from] ParamsError),
    #[error(transparent)]
    Pcf(#[from] PcfError),
    #[error(transparent)]
    PhaseSpace(#[from] PhaseSpaceError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

impl Error {
    /// Module-prefixed error code, e.g. `params/CouplingOutOfRange`.
    pub fn code(&self) -> String {
        match self {
            Error::Params(e) => format!("params/{}", e.name()),
            Error::Pcf(e) => format!("pcf/{}", e.name()),
            Error::PhaseSpace(e) => format!("phasespace/{}", e.name()),
            Error::Analysis(e) => format!("analysis/{}", e.name()),
        }
    }

    /// True for errors caused by invalid input rather than a numerical failure.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Params(_))
            || matches!(self, Error::Pcf(PcfError::InvalidNodeCount(_)))
            || matches!(self, Error::Analysis(AnalysisError::InvalidArgument(_)))
    }
}

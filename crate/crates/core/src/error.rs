use alloc::boxed::Box;
use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("non-finite coefficient at step {step} (t = {time})")]
    BlowUp { step: usize, time: f64 },

    #[error("Picard iteration did not contract after {iterations} iterations (residual {residual:e})")]
    NoContraction { iterations: usize, residual: f64 },

    #[error("degenerate refinement: error {value:e} at position {index} is not positive")]
    Degenerate { index: usize, value: f64 },

    #[error("{param} = {value}: {source}")]
    Sweep {
        param: &'static str,
        value: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True when the failure is numerical blow-up, possibly wrapped by a sweep.
    pub fn is_blow_up(&self) -> bool {
        match self {
            Error::BlowUp { .. } => true,
            Error::Sweep { source, .. } => source.is_blow_up(),
            _ => false,
        }
    }
}

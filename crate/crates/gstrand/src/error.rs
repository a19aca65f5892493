use gstrand_core::Error as CoreError;
use thiserror::Error;

use crate::report::RunReport;

#[derive(Debug, Error)]
pub enum HarnessError {
    /// Bad configuration, detected before any computation.
    #[error("invalid configuration: {0}")]
    Validation(String),
    /// Integration stopped: blow-up, coincident peakons or a singular solve.
    #[error("run failed at t = {time}: {source}")]
    Runtime {
        time: f64,
        #[source]
        source: CoreError,
        report: Box<RunReport>,
    },
    #[error("output error: {0}")]
    Io(#[from] std::io::Error),
}

impl HarnessError {
    /// Process exit code for the command-line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Validation(_) => 2,
            HarnessError::Runtime { .. } | HarnessError::Io(_) => 3,
        }
    }
}

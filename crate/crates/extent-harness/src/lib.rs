//! Randomized stability suite for the extension-type model: instance
//! generation, brute-force oracles, strict-equality verdicts, and the
//! deterministic suite report.

pub mod checks;
pub mod config;
pub mod instance;
pub mod oracle;
pub mod report;
pub mod suite;
pub mod warmup;

pub use checks::{check_stability, FormerMode, InstanceReport, Verdict};
pub use config::{InstanceSpec, SuiteConfig};
pub use instance::{gen_instance, SplitInstance};
pub use report::{SuiteReport, Summary};
pub use suite::{run_suite, run_suite_with};

use extent_core::extension::ExtError;
use extent_core::presheaf::PshError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HarnessError {
    #[error("resampling failed: {0}")]
    Resample(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Psh(#[from] PshError),
    #[error(transparent)]
    Ext(#[from] ExtError),
}

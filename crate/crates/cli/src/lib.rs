//! Experiment driver for almost-complete-revival runs.
//!
//! A run reads a strict JSON [`config::ExperimentConfig`], validates it into an
//! [`config::Experiment`], computes one of the modes in [`modes`] and writes
//! CSV tables plus a flat `summary.json`.

pub mod config;
pub mod error;
pub mod modes;
pub mod output;

pub use config::{Experiment, ExperimentConfig, Mode, Overrides};
pub use error::{HarnessError, Result};
pub use modes::{compute, execute, write_outcome, Outcome};

/// Sizes the global rayon pool. Has no effect without the `parallel` feature
/// or when the pool is already initialized.
pub fn configure_threads(threads: usize) -> bool {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .is_ok()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        false
    }
}

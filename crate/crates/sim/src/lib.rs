//! Monte-Carlo harness for the Kronecker-factorized IRS beamformers: config
//! files, the three experiments, and CSV / plot output.

pub mod config;
pub mod experiment;
pub mod output;

pub use config::{ConfigError, ExperimentConfig, IrsSplit};
pub use experiment::{
    run_complexity_sweep, run_imperfect_csi, run_se_sweep, ComplexityRow, Series, TrialRecord,
};

//! Experiment orchestration: seeded trials, basis-cache handling,
//! machine-readable reports, and the command-line interface.

pub mod cli;
mod experiment;
mod presets;

pub use experiment::{
    derive_a_seed, run_experiment, ExperimentReport, ExperimentSpec, HarnessError, TrialResult,
};
pub use presets::{example_preset, scale_preset, ExamplePreset};

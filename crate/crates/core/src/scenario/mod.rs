//! TOML scenarios: loading, running, oracle comparison and presets.

mod config;
mod presets;
mod run;

pub use config::{
    load_scenario, parse_scenario, CoefficientSection, ConfigError, ConfigIssue, EvolveSection,
    InitialState, OutputSection, ScenarioConfig,
};
pub use presets::{preset_coefficients, preset_scenario, PresetInfo, PRESETS};
pub use run::{
    compare_oracles, resolve_out_dir, run_batch, run_scenario, sweep_verdict, FinalObservables, Fit,
    OracleComparison, RunOptions, RunOutcome, RunReport, RunStatus, ScenarioError, OUT_ENV,
};

//! Loads a scenario file, runs it and prints where the outputs went.
//!
//! ```bash
//! cargo run --release -p qlag --example scenario_run -- crates/core/scenarios/harmonic.toml
//! ```

use std::path::PathBuf;

use qlag::scenario::{load_scenario, run_scenario, RunOptions};

fn main() {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/harmonic.toml").to_string());
    let cfg = match load_scenario(&path) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("{path}: {e}");
            std::process::exit(1);
        }
    };
    let out = std::env::temp_dir().join("qlag-example").join(&cfg.label);
    let opts = RunOptions {
        out: Some(PathBuf::from(&out)),
        ..RunOptions::default()
    };
    let outcome = run_scenario(&cfg, &opts).expect("output directory is writable");
    let r = &outcome.report;
    println!("{} ({}): {:?} after {} steps, norm drift {:.2e}", r.label, r.variant, r.status, r.steps, r.norm_drift);
    for f in &r.outputs {
        println!("  {}", out.join(f).display());
    }
    std::process::exit(outcome.exit_code());
}

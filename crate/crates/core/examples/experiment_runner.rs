//! Run a JSON experiment config and list the files it writes.
//!
//! cargo run --release --example experiment_runner [config.json]

use std::path::PathBuf;

use qsci::harness::{run_experiment, ExperimentConfig};

fn main() -> qsci::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs/scaling.json"));
    let cfg = ExperimentConfig::load(&path)?;
    let out = std::env::temp_dir().join("qsci-example");
    let res = run_experiment(&cfg, Some(&out))?;
    for f in &res.files {
        println!("{}", f.display());
    }
    let csv = res.files.iter().find(|f| f.extension().is_some_and(|e| e == "csv"));
    if let Some(csv) = csv {
        print!("{}", std::fs::read_to_string(csv)?);
    }
    Ok(())
}

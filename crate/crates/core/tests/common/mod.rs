#![allow(dead_code)]

use std::path::PathBuf;

use qsci::{read_fcidump, MolecularIntegrals};
use serde_json::Value;

// also compiled into the acceptance crate, hence the sibling-relative path
pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

pub fn molecule(name: &str) -> MolecularIntegrals {
    read_fcidump(fixture(&format!("{name}.fcidump"))).unwrap()
}

pub fn oracle() -> Value {
    let text = std::fs::read_to_string(fixture("oracle.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

pub fn oracle_energies(name: &str, key: &str) -> Vec<f64> {
    oracle()[name][key]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect()
}

pub fn oracle_scalar(name: &str, key: &str) -> f64 {
    oracle()[name][key].as_f64().unwrap()
}

/// H2O with two frozen core orbitals and five active orbitals (6 electrons).
pub fn h2o_active() -> MolecularIntegrals {
    molecule("h2o_5o6e")
}

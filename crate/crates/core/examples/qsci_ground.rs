//! Ground-state QSCI on water (5o,6e): energy against R, idealized and sampled.
//!
//! cargo run --release --example qsci_ground

use std::path::PathBuf;

use qsci::circuit::{sample, StateVector};
use qsci::sci::{qsci_ground, InputSource};
use qsci::{casci_dense, read_fcidump};

fn main() -> qsci::Result<()> {
    let mol = read_fcidump(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/h2o_5o6e.fcidump"))?;
    let sector = mol.reference_sector();
    let c = casci_dense(&mol, 6, 0)?;
    let s = StateVector::from_ci(&c.determinants, &c.vector(0))?;
    let counts = sample(&s, 10_000, 42)?;
    println!("   R   idealized error   sampled error");
    for r in [1, 2, 4, 8, 16, 32, 64, 100] {
        let ideal = qsci_ground(InputSource::State(&s), r, Some(sector), &mol)?;
        let sampled = qsci_ground(InputSource::Counts(&counts), r, Some(sector), &mol)?;
        println!(
            "{r:>4}   {:>15.3e}   {:>13.3e}",
            ideal.energy() - c.ground_energy(),
            sampled.energy() - c.ground_energy()
        );
    }
    Ok(())
}

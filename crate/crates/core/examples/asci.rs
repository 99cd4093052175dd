//! Adaptive-sampling CI on H4 as a classical selected-CI reference.
//!
//! cargo run --release --example asci

use std::path::PathBuf;

use qsci::asci::{asci_run, AsciConfig};
use qsci::{casci_dense, read_fcidump};

fn main() -> qsci::Result<()> {
    let mol = read_fcidump(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/h4.fcidump"))?;
    let exact = casci_dense(&mol, 4, 0)?.ground_energy();
    for r in [4, 12, 20, 36] {
        let res = asci_run(&mol, mol.reference_sector(), &AsciConfig::new(r, 4.min(r)))?;
        println!(
            "R = {r:>2}: {} iterations, error {:.3e}, converged {}",
            res.iterations(),
            res.solution.energy() - exact,
            res.converged
        );
    }
    let res = asci_run(&mol, mol.reference_sector(), &AsciConfig::new(20, 4))?;
    print!("{}", res.trace_csv());
    Ok(())
}

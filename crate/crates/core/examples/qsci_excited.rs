//! Excited states of water (5o,6e) by one merged diagonalization and by the
//! sequential deflated scheme.
//!
//! cargo run --release --example qsci_excited

use std::path::PathBuf;

use qsci::circuit::StateVector;
use qsci::sci::{qsci_sequential, qsci_single_diag, Betas, InputSource, MergeStrategy};
use qsci::{casci_dense, read_fcidump};

fn main() -> qsci::Result<()> {
    let mol = read_fcidump(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/h2o_5o6e.fcidump"))?;
    let sector = mol.reference_sector();
    let c = casci_dense(&mol, 6, 0)?;
    for r in [16, 20, 30] {
        let sels = (0..3)
            .map(|i| {
                let s = StateVector::from_ci(&c.determinants, &c.vector(i))?;
                InputSource::State(&s).select(r, Some(sector))
            })
            .collect::<qsci::Result<Vec<_>>>()?;
        let single = qsci_single_diag(&sels, r, MergeStrategy::RoundRobin, &mol, 3)?;
        let seq = qsci_sequential(&sels, &mol, &Betas::Explicit(vec![1.0, 1.0]))?;
        println!("R = {r}");
        for i in 0..3 {
            println!(
                "  state {i}: single {:+.2e}  sequential {:+.2e}",
                single.eigenvalues[i] - c.eigenvalues[i],
                seq[i].energy() - c.eigenvalues[i]
            );
        }
    }
    Ok(())
}

//! Exact diagonalization of each fixture in its reference sector.
//!
//! cargo run --example casci

use std::path::PathBuf;

use qsci::{casci_dense, read_fcidump};

fn main() -> qsci::Result<()> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    for name in ["h2", "h4", "h6", "lih", "h2o_5o6e"] {
        let mol = read_fcidump(dir.join(format!("{name}.fcidump")))?;
        let s = mol.reference_sector();
        let c = casci_dense(&mol, s.n_electrons, s.two_sz)?;
        println!(
            "{name:>9}: dimension {:>4}, lowest energies {:?}",
            c.dimension(),
            &c.eigenvalues[..3.min(c.dimension())]
        );
    }
    Ok(())
}

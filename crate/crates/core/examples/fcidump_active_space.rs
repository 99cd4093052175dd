//! Read an FCIDUMP, freeze core orbitals and write the reduced integrals back.
//!
//! cargo run --example fcidump_active_space

use std::path::PathBuf;

use qsci::hamiltonian_io::serialize_fcidump;
use qsci::{freeze_core, read_fcidump};

fn main() -> qsci::Result<()> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/h2o.fcidump");
    let mol = read_fcidump(&path)?;
    println!(
        "water: {} orbitals, {} electrons, core energy {:.6}",
        mol.n_orbitals(),
        mol.n_electrons(),
        mol.core_energy()
    );
    let active = freeze_core(&mol, &[0, 1], &[2, 3, 4, 5, 6])?;
    println!(
        "active space: {} orbitals, {} electrons, core energy {:.6}",
        active.n_orbitals(),
        active.n_electrons(),
        active.core_energy()
    );
    let text = serialize_fcidump(&active);
    println!("{}", text.lines().take(3).collect::<Vec<_>>().join("\n"));
    Ok(())
}

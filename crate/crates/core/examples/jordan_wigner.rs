//! Map the H2 Hamiltonian to Pauli strings and compare its spectrum with CASCI.
//!
//! cargo run --example jordan_wigner

use std::path::PathBuf;

use qsci::linalg::dense_eigh;
use qsci::{casci_dense, jordan_wigner, read_fcidump, symmetry_operators};

fn main() -> qsci::Result<()> {
    let mol = read_fcidump(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/h2.fcidump"))?;
    let h = jordan_wigner(&mol);
    print!("{}", h.to_text());
    let (n, sz) = symmetry_operators(mol.n_orbitals());
    println!("N has {} terms, S_z has {} terms", n.n_terms(), sz.n_terms());
    let fock = dense_eigh(&h.to_dense().map(|z| z.re)).values;
    let sector = casci_dense(&mol, 2, 0)?.eigenvalues;
    println!("lowest Fock-space eigenvalues {:?}", &fock[..3]);
    println!("two-electron S_z = 0 sector    {sector:?}");
    Ok(())
}

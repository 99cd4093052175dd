//! Hamiltonian matrix elements between determinants, by Slater-Condon rules
//! and by Pauli action on the qubit Hamiltonian.
//!
//! cargo run --example slater_condon

use std::path::PathBuf;

use qsci::{jordan_wigner, read_fcidump, slater_condon, Determinant};

fn main() -> qsci::Result<()> {
    let mol = read_fcidump(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/h4.fcidump"))?;
    let h = jordan_wigner(&mol);
    let hf = Determinant::hartree_fock(mol.n_orbitals(), mol.reference_sector())?;
    println!("HF {hf}: <HF|H|HF> = {:.10}", slater_condon(&hf, &hf, &mol)?);
    // singles from HF vanish (Brillouin), doubles carry the correlation
    for d in hf.connected_determinants(true).into_iter().filter(|d| matches!(hf.excitation_degree(d), Ok(2))).take(6) {
        let sc = slater_condon(&hf, &d, &mol)?;
        let pauli = h.matrix_element(hf.bits(), d.bits()).re;
        println!(
            "{d} (excitation {}): {sc:+.10}  pauli {pauli:+.10}",
            hf.excitation_degree(&d)?
        );
    }
    Ok(())
}

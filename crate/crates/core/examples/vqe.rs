//! VQE with the symmetry-preserving ansatz on water (5o,6e) from Hartree-Fock.
//!
//! cargo run --release --example vqe

use std::path::PathBuf;

use qsci::circuit::rsp_ansatz;
use qsci::variational::{vqe, MinimizeSettings, ObjectiveSpec};
use qsci::{casci_dense, jordan_wigner, read_fcidump, Determinant};

fn main() -> qsci::Result<()> {
    let mol = read_fcidump(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/h2o_5o6e.fcidump"))?;
    let sector = mol.reference_sector();
    let exact = casci_dense(&mol, sector.n_electrons, sector.two_sz)?.ground_energy();
    let c = rsp_ansatz(mol.n_qubits(), 10)?;
    let hf = Determinant::hartree_fock(mol.n_orbitals(), sector)?;
    let v = vqe(&ObjectiveSpec::new(jordan_wigner(&mol)), &c, &hf, &MinimizeSettings::default(), 0)?;
    println!("{} parameters, {} iterations", c.n_params(), v.trace.len() - 1);
    println!("VQE {:.10}  exact {exact:.10}  error {:.2e}", v.energy, v.energy - exact);
    Ok(())
}

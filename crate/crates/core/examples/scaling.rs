//! Smallest R reaching a tolerance, with the 1/|c_R|^2 shot estimate, for the
//! hydrogen chains.
//!
//! cargo run --release --example scaling

use std::path::PathBuf;

use qsci::circuit::StateVector;
use qsci::harness::min_r_for_tolerance;
use qsci::{casci_dense, read_fcidump};

fn main() -> qsci::Result<()> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    println!("qubits  epsilon  min_r  shots");
    for name in ["h2", "h4", "h6"] {
        let mol = read_fcidump(dir.join(format!("{name}.fcidump")))?;
        let sector = mol.reference_sector();
        let c = casci_dense(&mol, sector.n_electrons, sector.two_sz)?;
        let s = StateVector::from_ci(&c.determinants, &c.vector(0))?;
        for eps in [1e-2, 1e-3, 1e-4] {
            let rec = min_r_for_tolerance(&s, &mol, sector, eps)?;
            let shots = rec.shot_estimate.map_or("-".to_string(), |v| format!("{v:.3e}"));
            println!("{:>6}  {eps:>7.0e}  {:>5}  {shots}", rec.n_qubits, rec.min_r);
        }
    }
    Ok(())
}

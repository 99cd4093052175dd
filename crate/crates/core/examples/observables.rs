//! Nuclear-derivative operators of H4 evaluated on a truncated QSCI state.
//!
//! cargo run --release --example observables

use std::path::PathBuf;

use qsci::circuit::StateVector;
use qsci::harness::observable_suite;
use qsci::sci::{qsci_ground, InputSource};
use qsci::{casci_dense, read_fcidump};

fn main() -> qsci::Result<()> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mol = read_fcidump(dir.join("h4.fcidump"))?;
    let sector = mol.reference_sector();
    let c = casci_dense(&mol, 4, 0)?;
    let s = StateVector::from_ci(&c.determinants, &c.vector(0))?;
    let sol = qsci_ground(InputSource::State(&s), 12, Some(sector), &mol)?;
    let ops = ["grad_0z", "grad_1z", "hess_0zz", "hess_1zz"]
        .iter()
        .map(|n| Ok((n.to_string(), read_fcidump(dir.join(format!("h4_derivatives/{n}.fcidump")))?)))
        .collect::<qsci::Result<Vec<_>>>()?;
    for o in observable_suite(&sol, &mol, sector, &ops)? {
        println!("{:>9}: {:+.6}  exact {:+.6}  |error| {:.2e}", o.name, o.value, o.exact, o.abs_error);
    }
    Ok(())
}

//! Noisy emulation on H4: VQE with the Ry ansatz, noisy sampling with device
//! error rates, QSCI with and without post-selection.
//!
//! cargo run --release --example noisy_demo

use std::path::PathBuf;

use qsci::circuit::NoiseModel;
use qsci::harness::noisy_demo;
use qsci::read_fcidump;
use qsci::variational::MinimizeSettings;

fn main() -> qsci::Result<()> {
    let mol = read_fcidump(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/h4.fcidump"))?;
    let d = noisy_demo(
        &mol,
        mol.reference_sector(),
        8,
        NoiseModel::device(),
        10_000,
        &[8, 16, 27],
        0,
        1,
        &[1, 2, 3],
        &MinimizeSettings::default(),
    )?;
    println!("VQE error {:.2e}, CISD error {:.2e}", d.vqe_energy - d.exact, d.cisd - d.exact);
    for run in &d.runs {
        println!("seed {} ({} of {} shots discarded)", run.seed, run.discarded, d.n_shots);
        for ((r, u), (_, f)) in run.unfiltered.iter().zip(&run.filtered) {
            println!("  R = {r:>2}: unfiltered {:+.2e}  post-selected {:+.2e}", u - d.exact, f - d.exact);
        }
    }
    Ok(())
}

//! Conventional grouped measurement of <H> on H4: qubit-wise commuting groups,
//! shot allocation and the sampled estimate.
//!
//! cargo run --release --example qwc_measurement

use std::path::PathBuf;

use qsci::circuit::StateVector;
use qsci::measurement::{allocate_single, estimate_sampling, estimate_two_round, exact_sigmas, haar_sigmas, qwc_groups};
use qsci::{casci_dense, jordan_wigner, read_fcidump};

fn main() -> qsci::Result<()> {
    let mol = read_fcidump(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/h4.fcidump"))?;
    let c = casci_dense(&mol, 4, 0)?;
    let s = StateVector::from_ci(&c.determinants, &c.vector(0))?;
    let h = jordan_wigner(&mol);
    let groups = qwc_groups(&h);
    println!("{} Pauli terms in {} groups", h.n_terms(), groups.len());
    for (name, sigmas) in [("haar", haar_sigmas(&h, &groups)), ("exact", exact_sigmas(&s, &h, &groups)?)] {
        let a = allocate_single(&sigmas, 10_000)?;
        let e = estimate_sampling(&s, &h, &groups, &a, 1)?;
        println!(
            "{name:>5} allocation: estimate {:.6} +- {:.6} (error {:+.2e})",
            e.estimate,
            e.standard_error,
            e.estimate - c.ground_energy()
        );
    }
    let e = estimate_two_round(&s, &h, &groups, 10_000, 0.2, 1)?;
    println!("two-round: estimate {:.6} +- {:.6}", e.estimate, e.standard_error);
    Ok(())
}

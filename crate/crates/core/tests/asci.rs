mod common;

use common::{molecule, oracle_scalar};
use qsci::asci::{asci_run, AsciConfig};
use qsci::{casci_dense, Sector};

#[test]
fn full_space_reaches_casci_in_two_iterations() {
    let mol = molecule("h4");
    let exact = casci_dense(&mol, 4, 0).unwrap().ground_energy();
    let run = asci_run(&mol, Sector::new(4, 0), &AsciConfig::new(36, 36)).unwrap();
    assert!(run.converged);
    assert!(run.iterations() <= 2, "{} iterations", run.iterations());
    assert!((run.solution.energy() - exact).abs() < 1e-9);
    // one iteration from Hartree-Fock only reaches singles and doubles
    assert_eq!(run.trace[1].dimension, 27);
}

#[test]
fn small_target_is_bounded_and_monotone() {
    let mol = molecule("h4");
    let exact = casci_dense(&mol, 4, 0).unwrap().ground_energy();
    let run = asci_run(&mol, Sector::new(4, 0), &AsciConfig::new(20, 2)).unwrap();
    let hf = oracle_scalar("h4", "hf_energy");
    assert!((run.trace[0].energy - hf).abs() < 1e-8);
    for w in run.trace.windows(2) {
        assert!(w[1].energy <= w[0].energy + 1e-12);
    }
    for t in &run.trace {
        assert!(t.energy >= exact - 1e-12 && t.dimension <= 20);
    }
    assert!(run.solution.energy() < hf);
    let csv = run.trace_csv();
    assert!(csv.starts_with("iteration,dimension,energy\n0,1,"));
    assert_eq!(csv.lines().count(), run.trace.len() + 1);
}

#[test]
fn bad_configs_rejected() {
    let mol = molecule("h2");
    assert!(asci_run(&mol, Sector::new(2, 0), &AsciConfig::new(1, 2)).is_err());
    let mut c = AsciConfig::new(2, 1);
    c.delta = 0.0;
    assert!(asci_run(&mol, Sector::new(2, 0), &c).is_err());
    assert!(asci_run(&mol, Sector::new(9, 0), &AsciConfig::new(2, 1)).is_err());
}

mod common;

use common::{h2o_active, molecule, oracle_energies};
use qsci::circuit::{ry_ansatz, rsp_ansatz, StateVector};
use qsci::variational::{
    assemble_objective, initial_params, prepare_vqd_chain, vqe, MinimizeSettings, ObjectiveSpec,
};
use qsci::{casci_dense, jordan_wigner, Determinant, Sector};

#[test]
fn vqe_h2_reaches_exact_ground_state() {
    let mol = molecule("h2");
    let h = jordan_wigner(&mol);
    let c = ry_ansatz(4, 2).unwrap();
    let hf = Determinant::hartree_fock(2, Sector::new(2, 0)).unwrap();
    let r = vqe(&ObjectiveSpec::new(h), &c, &hf, &MinimizeSettings::default(), 7).unwrap();
    let exact = oracle_energies("h2", "fci_energies")[0];
    assert!((r.energy - exact).abs() < 1e-6, "{} vs {exact}", r.energy);
    assert!(r.trace.values.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn objective_reductions() {
    let mol = h2o_active();
    let h = jordan_wigner(&mol);
    let c = rsp_ansatz(10, 2).unwrap();
    let hf = Determinant::hartree_fock(5, Sector::new(6, 0)).unwrap();
    let p = initial_params(c.n_params(), 1);

    let bare = assemble_objective(&ObjectiveSpec::new(h.clone()), &c, &hf).unwrap();
    let e = bare.value(&p).unwrap();
    assert!((e - bare.energy(&p).unwrap()).abs() < 1e-12);

    let pen = ObjectiveSpec::new(h.clone()).with_sector_penalties(5, 6, 0, 3.0);
    let pen = assemble_objective(&pen, &c, &hf).unwrap();
    assert!((pen.value(&p).unwrap() - e).abs() < 1e-10);

    let me = bare.state(&p).unwrap();
    let ov = assemble_objective(&ObjectiveSpec::new(h).with_overlap(me, 1.0), &c, &hf).unwrap();
    assert!((ov.value(&p).unwrap() - e - 1.0).abs() < 1e-10);
}

#[test]
fn rsp_states_stay_in_sector() {
    let c = rsp_ansatz(10, 3).unwrap();
    let hf = Determinant::hartree_fock(5, Sector::new(6, 0)).unwrap();
    for seed in 0..20 {
        let p: Vec<f64> = initial_params(c.n_params(), seed).iter().map(|x| x * 30.0).collect();
        let s = qsci::circuit::simulate(&c, &p, &hf).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-12);
        assert!(s.is_real(1e-15));
        for x in s.support() {
            let d = Determinant::new(x, 10).unwrap();
            assert_eq!((d.particle_number(), d.two_sz()), (6, 0));
        }
    }
}

#[test]
fn vqd_chain_water_low_states() {
    let mol = h2o_active();
    let h = jordan_wigner(&mol);
    let c = rsp_ansatz(10, 10).unwrap();
    let hf = Determinant::hartree_fock(5, Sector::new(6, 0)).unwrap();
    let spec = ObjectiveSpec::new(h).with_sector_penalties(5, 6, 0, 3.0);
    let t = std::time::Instant::now();
    let states = prepare_vqd_chain(&spec, &c, &hf, 3, 1.0, &MinimizeSettings::default(), 0).unwrap();
    let exact = casci_dense(&mol, 6, 0).unwrap().eigenvalues;
    for (k, s) in states.iter().enumerate() {
        eprintln!("state {k}: {} vs {} ({} its) {:?}", s.energy, exact[k], s.trace.len(), t.elapsed());
    }
    for (k, s) in states.iter().enumerate() {
        assert!((s.energy - exact[k]).abs() < 5e-3, "state {k}: {} vs {}", s.energy, exact[k]);
        for prev in &states[..k] {
            assert!(prev.state.inner(&s.state).unwrap().norm_sqr() < 0.05);
        }
    }
    let _ = StateVector::basis(&hf);
}

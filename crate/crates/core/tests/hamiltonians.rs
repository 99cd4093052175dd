mod common;

use common::{molecule, oracle_energies, oracle_scalar};
use qsci::determinant::{Determinant, Sector};
use qsci::hamiltonian_io::{parse_fcidump, serialize_fcidump};
use qsci::linalg::dense_eigh;
use qsci::qubit::pauli_matrix_element;
use qsci::{casci_dense, freeze_core, jordan_wigner, slater_condon, symmetry_operators};

#[test]
fn casci_matches_reference_full_ci() {
    for name in ["h2", "h4", "h6", "lih"] {
        let mol = molecule(name);
        let c = casci_dense(&mol, mol.n_electrons(), 0).unwrap();
        let want = oracle_energies(name, "fci_energies");
        for (k, w) in want.iter().enumerate() {
            assert!((c.eigenvalues[k] - w).abs() < 1e-8, "{name} root {k}: {} vs {w}", c.eigenvalues[k]);
        }
    }
}

#[test]
fn hartree_fock_diagonal_matches_reference() {
    for name in ["h2", "h4", "h6", "h8", "lih", "h2o"] {
        let mol = molecule(name);
        let hf = Determinant::hartree_fock(mol.n_orbitals(), mol.reference_sector()).unwrap();
        let e = slater_condon(&hf, &hf, &mol).unwrap();
        assert!((e - oracle_scalar(name, "hf_energy")).abs() < 1e-8, "{name}: {e}");
    }
}

#[test]
fn frozen_core_water_matches_reference_casci() {
    let full = molecule("h2o");
    let act = freeze_core(&full, &[0, 1], &[2, 3, 4, 5, 6]).unwrap();
    let dumped = molecule("h2o_5o6e");
    assert!((act.core_energy() - dumped.core_energy()).abs() < 1e-8);
    let want = oracle_energies("h2o", "casci_5o6e_energies");
    for mol in [&act, &dumped] {
        let c = casci_dense(mol, 6, 0).unwrap();
        assert_eq!(c.dimension(), 100);
        for (k, w) in want.iter().enumerate() {
            assert!((c.eigenvalues[k] - w).abs() < 1e-8);
        }
    }
}

#[test]
fn fcidump_roundtrip_preserves_integrals() {
    let mol = molecule("lih");
    let back = parse_fcidump(&serialize_fcidump(&mol)).unwrap();
    assert_eq!(back, mol);
}

#[test]
fn jordan_wigner_spectrum_matches_casci() {
    for name in ["h2", "h4"] {
        let mol = molecule(name);
        let h = jordan_wigner(&mol);
        assert!(h.is_real(1e-12));
        let sector = Sector::new(mol.n_electrons(), 0);
        let dets = sector.determinants(mol.n_orbitals()).unwrap();
        let m = nalgebra::DMatrix::from_fn(dets.len(), dets.len(), |i, j| {
            h.matrix_element(dets[i].bits(), dets[j].bits()).re
        });
        let jw = dense_eigh(&m).values;
        let c = casci_dense(&mol, mol.n_electrons(), 0).unwrap();
        for (a, b) in jw.iter().zip(&c.eigenvalues) {
            assert!((a - b).abs() < 1e-9, "{name}: {a} vs {b}");
        }
    }
}

#[test]
fn jordan_wigner_equals_fock_space_slater_condon() {
    for name in ["h2", "h4"] {
        let mol = molecule(name);
        let nq = mol.n_qubits();
        let dense = jordan_wigner(&mol).to_dense();
        for x in 0..(1u64 << nq) {
            for y in 0..(1u64 << nq) {
                let dx = Determinant::new(x, nq).unwrap();
                let dy = Determinant::new(y, nq).unwrap();
                let sc = if dx.particle_number() == dy.particle_number() {
                    slater_condon(&dx, &dy, &mol).unwrap()
                } else {
                    0.0
                };
                let v = dense[(x as usize, y as usize)];
                assert!((v.re - sc).abs() < 1e-12 && v.im.abs() < 1e-12, "{name} <{dx}|H|{dy}>");
            }
        }
    }
}

#[test]
fn pauli_action_matches_per_term_sum() {
    let mol = molecule("h4");
    let h = jordan_wigner(&mol);
    let a: Determinant = "00110011".parse().unwrap();
    let b: Determinant = "00111100".parse().unwrap();
    let sum: num_complex::Complex64 = h.terms().iter().map(|(c, p)| c * pauli_matrix_element(p, &a, &b)).sum();
    assert!((sum.re - slater_condon(&a, &b, &mol).unwrap()).abs() < 1e-12);
}

#[test]
fn symmetry_operators_commute_with_hamiltonian() {
    let mol = molecule("h4");
    let h = jordan_wigner(&mol).to_dense();
    let (sz, n) = symmetry_operators(4);
    for op in [sz.to_dense(), n.to_dense()] {
        let comm = &h * &op - &op * &h;
        assert!(comm.iter().all(|v| v.norm() < 1e-12));
    }
}

#[test]
fn core_energy_shift_moves_only_identity() {
    let mut mol = molecule("h2");
    let h0 = jordan_wigner(&mol);
    mol.set_core_energy(mol.core_energy() + 2.5);
    let h1 = jordan_wigner(&mol);
    assert!((h1.identity_coefficient().re - h0.identity_coefficient().re - 2.5).abs() < 1e-12);
    assert_eq!(h0.n_terms(), h1.n_terms());
    for ((c0, p0), (c1, p1)) in h0.terms().iter().zip(h1.terms()).skip(1) {
        assert_eq!(p0, p1);
        assert_eq!(c0, c1);
    }
}

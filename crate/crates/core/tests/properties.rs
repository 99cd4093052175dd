mod common;

use std::sync::OnceLock;

use common::{molecule, oracle_energies};
use proptest::prelude::*;
use qsci::sci::{qsci_from_selection, SelectionResult};
use qsci::{Determinant, MolecularIntegrals};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Fixture {
    mol: MolecularIntegrals,
    dets: Vec<Determinant>,
    exact: f64,
}

fn fixtures() -> &'static [Fixture] {
    static F: OnceLock<Vec<Fixture>> = OnceLock::new();
    F.get_or_init(|| {
        let mut v: Vec<Fixture> = ["h2", "h4", "h6", "h8", "lih", "h2o"]
            .iter()
            .map(|&name| {
                let mol = molecule(name);
                let dets = mol.reference_sector().determinants(mol.n_orbitals()).unwrap();
                Fixture {
                    exact: oracle_energies(name, "fci_energies")[0],
                    mol,
                    dets,
                }
            })
            .collect();
        let mol = molecule("h2o_5o6e");
        v.push(Fixture {
            dets: mol.reference_sector().determinants(mol.n_orbitals()).unwrap(),
            exact: oracle_energies("h2o", "casci_5o6e_energies")[0],
            mol,
        });
        v
    })
}

/// A seeded permutation of the fixture's sector.
fn shuffled(f: &Fixture, seed: u64) -> Vec<Determinant> {
    let mut d = f.dets.clone();
    d.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    d
}

fn energy(f: &Fixture, configs: &[Determinant]) -> f64 {
    let sel = SelectionResult::from_configs(configs.to_vec()).unwrap();
    qsci_from_selection(&sel, &f.mol, 1).unwrap().energy()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn random_selections_are_variational(which in 0usize..7, seed: u64, frac in 0.0f64..1.0) {
        let f = &fixtures()[which];
        let r = 1 + ((f.dets.len().min(120) - 1) as f64 * frac) as usize;
        let e = energy(f, &shuffled(f, seed)[..r]);
        prop_assert!(e >= f.exact - 1e-12, "E_R = {e}, exact {}", f.exact);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn nested_selections_are_monotone(which in 0usize..7, seed: u64, a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let f = &fixtures()[which];
        let cap = f.dets.len().min(120);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let rb = 1 + ((cap - 1) as f64 * lo) as usize;
        let ra = (1 + ((cap - 1) as f64 * hi) as usize).max(rb);
        let order = shuffled(f, seed);
        let (ea, eb) = (energy(f, &order[..ra]), energy(f, &order[..rb]));
        prop_assert!(ea <= eb + 1e-12, "E_{ra} = {ea} > E_{rb} = {eb}");
    }
}

mod common;

use common::molecule;
use qsci::circuit::StateVector;
use qsci::measurement::{
    allocate_multi, allocate_single, estimate_sampling, estimate_two_round, exact_sigmas, group_report, haar_sigmas,
    predicted_variance, qwc_groups,
};
use qsci::{casci_dense, jordan_wigner, Determinant, QubitHamiltonian};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn h2_ground() -> (QubitHamiltonian, StateVector, f64) {
    let mol = molecule("h2");
    let c = casci_dense(&mol, 2, 0).unwrap();
    let s = StateVector::from_ci(&c.determinants, &c.vector(0)).unwrap();
    (jordan_wigner(&mol), s, c.ground_energy())
}

#[test]
fn h2_groups_commute_and_cover_terms() {
    let (h, _, _) = h2_ground();
    let groups = qwc_groups(&h);
    let mut seen: Vec<usize> = groups.iter().flat_map(|g| g.members.clone()).collect();
    seen.sort();
    let expected: Vec<usize> = (0..h.n_terms()).filter(|&j| !h.terms()[j].1.is_identity()).collect();
    assert_eq!(seen, expected);
    for g in &groups {
        for &a in &g.members {
            for &b in &g.members {
                assert!(h.terms()[a].1.qubit_wise_commutes(&h.terms()[b].1));
            }
        }
    }
}

#[test]
fn allocations_are_proportional_and_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..100 {
        let n = rng.random_range(1..12);
        let total = rng.random_range(1000..1_000_000u64);
        let sigmas: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..2.0)).collect();
        let a = allocate_single(&sigmas, total).unwrap();
        assert_eq!(a.shots.iter().sum::<u64>(), total);
        let sum: f64 = sigmas.iter().sum();
        for (s, &m) in sigmas.iter().zip(&a.shots) {
            assert!((m as f64 - total as f64 * s / sum).abs() < 1.0);
        }
        let rows: Vec<Vec<f64>> = (0..3).map(|_| (0..n).map(|_| rng.random_range(0.0..1.0)).collect()).collect();
        let m = allocate_multi(&rows, total).unwrap();
        assert_eq!(m.shots.iter().sum::<u64>(), total);
        let norms: Vec<f64> = (0..n).map(|l| rows.iter().map(|r| r[l] * r[l]).sum::<f64>().sqrt()).collect();
        let nsum: f64 = norms.iter().sum();
        for (s, &m) in norms.iter().zip(&m.shots) {
            assert!((m as f64 - total as f64 * s / nsum).abs() < 1.0);
        }
    }
    let single = allocate_single(&[0.3, 0.7], 1000).unwrap();
    assert_eq!(allocate_multi(&[vec![0.3, 0.7]], 1000).unwrap(), single);
}

#[test]
fn basis_state_of_diagonal_hamiltonian_is_exact() {
    let h = QubitHamiltonian::from_real_terms(3, &[(0.5, "III"), (1.0, "IIZ"), (-0.25, "ZZI"), (0.1, "ZIZ")]).unwrap();
    let d: Determinant = "011".parse().unwrap();
    let s = StateVector::basis(&d).unwrap();
    let groups = qwc_groups(&h);
    let exact = qsci::circuit::expectation(&s, &h).unwrap();
    for shots in [1, 7, 1000] {
        let a = allocate_single(&haar_sigmas(&h, &groups), shots).unwrap();
        let r = estimate_sampling(&s, &h, &groups, &a, 5).unwrap();
        assert!((r.estimate - exact).abs() < 1e-12);
        assert_eq!(r.standard_error, 0.0);
    }
}

#[test]
fn h2_estimates_are_self_consistent() {
    let (h, s, e) = h2_ground();
    let groups = qwc_groups(&h);
    let a = allocate_single(&haar_sigmas(&h, &groups), 100_000).unwrap();
    let inside = (0..100)
        .filter(|&seed| {
            let r = estimate_sampling(&s, &h, &groups, &a, seed).unwrap();
            (r.estimate - e).abs() < 4.0 * r.standard_error
        })
        .count();
    assert!(inside >= 95, "{inside} of 100 within 4 standard errors");
}

#[test]
fn estimator_is_unbiased_and_variance_model_holds() {
    let (h, s, e) = h2_ground();
    let groups = qwc_groups(&h);
    let sigmas = exact_sigmas(&s, &h, &groups).unwrap();
    let a = allocate_single(&sigmas, 2000).unwrap();
    let est: Vec<f64> = (0..200)
        .map(|seed| estimate_sampling(&s, &h, &groups, &a, 1000 + seed).unwrap().estimate)
        .collect();
    let mean = est.iter().sum::<f64>() / 200.0;
    let var = est.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / 199.0;
    let predicted = predicted_variance(&sigmas, &a);
    assert!((mean - e).abs() < 5.0 * predicted.sqrt() / 200f64.sqrt());
    let ratio = var.sqrt() / predicted.sqrt();
    assert!((ratio - 1.0).abs() < 0.2, "measured/predicted stderr {ratio}");
}

#[test]
fn two_round_spends_whole_budget() {
    let (h, s, e) = h2_ground();
    let groups = qwc_groups(&h);
    let r = estimate_two_round(&s, &h, &groups, 50_000, 0.2, 3).unwrap();
    assert_eq!(r.shots.iter().sum::<u64>(), 50_000);
    assert!((r.estimate - e).abs() < 5.0 * r.standard_error + 1e-12);
    let report = group_report(&h, &groups, &haar_sigmas(&h, &groups), &allocate_single(&haar_sigmas(&h, &groups), 100).unwrap());
    let json = serde_json::to_string(&report).unwrap();
    assert!(json.contains("\"basis\""));
}

#[test]
fn zero_shots_on_fluctuating_group_is_an_error() {
    let (h, s, _) = h2_ground();
    let groups = qwc_groups(&h);
    let sigmas = exact_sigmas(&s, &h, &groups).unwrap();
    let mut a = allocate_single(&sigmas, 1000).unwrap();
    let l = sigmas.iter().position(|&v| v > 1e-6).unwrap();
    let moved = a.shots[l];
    a.shots[l] = 0;
    a.shots[(l + 1) % groups.len()] += moved;
    assert!(estimate_sampling(&s, &h, &groups, &a, 1).is_err());
}

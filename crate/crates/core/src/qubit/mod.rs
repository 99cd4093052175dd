//! Pauli algebra, the Jordan-Wigner encoding of molecular Hamiltonians and
//! the particle-number and spin operators used as penalties.

mod operator;
mod pauli;

pub use operator::{CompiledOperator, QubitHamiltonian, DROP_TOLERANCE};
pub use pauli::{pauli_matrix_element, Pauli, PauliString};

use std::collections::HashMap;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::hamiltonian_io::MolecularIntegrals;

type Ladder = [(Complex64, PauliString); 2];

/// `a†_j = ½(X_j − iY_j) Z_{<j}` and `a_j = ½(X_j + iY_j) Z_{<j}`.
fn ladder(j: usize, n: usize, create: bool) -> Ladder {
    let z = (1u64 << j) - 1;
    let bit = 1u64 << j;
    let xs = PauliString::from_masks(bit, z, n).expect("in range");
    let ys = PauliString::from_masks(bit, z | bit, n).expect("in range");
    let s = if create { -0.5 } else { 0.5 };
    [(Complex64::new(0.5, 0.0), xs), (Complex64::new(0.0, s), ys)]
}

fn accumulate(acc: &mut HashMap<PauliString, Complex64>, coef: f64, ops: &[&Ladder]) {
    let n = ops[0][0].1.n_qubits();
    let mut cur: Vec<(Complex64, PauliString)> = vec![(Complex64::new(coef, 0.0), PauliString::identity(n))];
    for op in ops {
        let mut next = Vec::with_capacity(cur.len() * 2);
        for &(c, p) in &cur {
            for &(d, q) in op.iter() {
                let (ph, r) = p.mul(&q);
                next.push((c * d * ph, r));
            }
        }
        cur = next;
    }
    for (c, p) in cur {
        *acc.entry(p).or_default() += c;
    }
}

/// Jordan-Wigner image of
/// `E_core + Σ h_pq a†_pσ a_qσ + ½ Σ (pq|rs) a†_pσ a†_rτ a_sτ a_qσ`
/// with spin orbital `2p` for α and `2p + 1` for β.
pub fn jordan_wigner(mol: &MolecularIntegrals) -> QubitHamiltonian {
    let n = mol.n_orbitals();
    let nq = mol.n_qubits();
    let create: Vec<Ladder> = (0..nq).map(|j| ladder(j, nq, true)).collect();
    let annihilate: Vec<Ladder> = (0..nq).map(|j| ladder(j, nq, false)).collect();
    let so = |p: usize, spin: usize| 2 * p + spin;

    let partial: Vec<HashMap<PauliString, Complex64>> = (0..n)
        .into_par_iter()
        .map(|p| {
            let mut acc = HashMap::new();
            for q in 0..n {
                let h = mol.one_body(p, q);
                if h != 0.0 {
                    for s in 0..2 {
                        accumulate(&mut acc, h, &[&create[so(p, s)], &annihilate[so(q, s)]]);
                    }
                }
                for r in 0..n {
                    for t in 0..n {
                        let v = mol.two_body(p, q, r, t);
                        if v == 0.0 {
                            continue;
                        }
                        for s1 in 0..2 {
                            for s2 in 0..2 {
                                let (i, j) = (so(p, s1), so(r, s2));
                                let (k, l) = (so(t, s2), so(q, s1));
                                if i == j || k == l {
                                    continue;
                                }
                                accumulate(
                                    &mut acc,
                                    0.5 * v,
                                    &[&create[i], &create[j], &annihilate[k], &annihilate[l]],
                                );
                            }
                        }
                    }
                }
            }
            acc
        })
        .collect();

    let mut terms: Vec<(Complex64, PauliString)> = vec![(Complex64::new(mol.core_energy(), 0.0), PauliString::identity(nq))];
    for map in partial {
        terms.extend(map.into_iter().map(|(p, c)| (c, p)));
    }
    QubitHamiltonian::from_terms(nq, terms).expect("all strings share the register width")
}

/// `(Ŝ_z, N̂_e)` on `2·n_orbitals` qubits:
/// `N̂_e = Σ_b (I − Z_b)/2` and `Ŝ_z = ¼ Σ_p (Z_{2p+1} − Z_{2p})`.
pub fn symmetry_operators(n_orbitals: usize) -> (QubitHamiltonian, QubitHamiltonian) {
    let nq = 2 * n_orbitals;
    let z = |b: usize| PauliString::from_masks(0, 1 << b, nq).expect("in range");
    let c = |x: f64| Complex64::new(x, 0.0);
    let mut n_terms = vec![(c(nq as f64 / 2.0), PauliString::identity(nq))];
    let mut sz_terms = Vec::new();
    for b in 0..nq {
        n_terms.push((c(-0.5), z(b)));
        sz_terms.push((c(if b % 2 == 0 { -0.25 } else { 0.25 }), z(b)));
    }
    (
        QubitHamiltonian::from_terms(nq, sz_terms).expect("valid"),
        QubitHamiltonian::from_terms(nq, n_terms).expect("valid"),
    )
}

use super::MolecularIntegrals;
use crate::error::{Error, Result};

/// Restricts `mol` to the `active` orbitals, treating `frozen` orbitals as
/// doubly occupied.
///
/// The frozen shell contributes `Σ_c 2h_cc + Σ_cd [2(cc|dd) − (cd|dc)]` to the
/// core energy and `Σ_c [2(pq|cc) − (pc|cq)]` to each active one-body term.
/// Active orbitals keep the order given.
pub fn freeze_core(
    mol: &MolecularIntegrals,
    frozen: &[usize],
    active: &[usize],
) -> Result<MolecularIntegrals> {
    let n = mol.n_orbitals();
    let mut seen = vec![false; n];
    for &p in frozen.iter().chain(active) {
        if p >= n {
            return Err(Error::invalid(format!("orbital {p} out of range 0..{n}")));
        }
        if seen[p] {
            return Err(Error::invalid(format!(
                "orbital {p} listed twice or both frozen and active"
            )));
        }
        seen[p] = true;
    }
    if active.is_empty() {
        return Err(Error::invalid("no active orbitals left"));
    }
    let n_electrons = mol
        .n_electrons()
        .checked_sub(2 * frozen.len())
        .ok_or_else(|| {
            Error::invalid(format!(
                "freezing {} orbitals removes more than {} electrons",
                frozen.len(),
                mol.n_electrons()
            ))
        })?;

    let mut core = mol.core_energy();
    for &c in frozen {
        core += 2.0 * mol.one_body(c, c);
        for &d in frozen {
            core += 2.0 * mol.two_body(c, c, d, d) - mol.two_body(c, d, d, c);
        }
    }

    let na = active.len();
    let mut one = vec![0.0; na * na];
    for (x, &p) in active.iter().enumerate() {
        for (y, &q) in active.iter().enumerate() {
            let mut v = mol.one_body(p, q);
            for &c in frozen {
                v += 2.0 * mol.two_body(p, q, c, c) - mol.two_body(p, c, c, q);
            }
            one[x * na + y] = v;
        }
    }
    let mut two = vec![0.0; na.pow(4)];
    for (a, &p) in active.iter().enumerate() {
        for (b, &q) in active.iter().enumerate() {
            for (c, &r) in active.iter().enumerate() {
                for (d, &s) in active.iter().enumerate() {
                    two[((a * na + b) * na + c) * na + d] = mol.two_body(p, q, r, s);
                }
            }
        }
    }
    MolecularIntegrals::from_dense(na, n_electrons, mol.ms2(), core, one, two)
}

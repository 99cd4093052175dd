//! Molecular Hamiltonians in second quantization: storage, FCIDUMP I/O,
//! frozen-core reduction and the dense CASCI reference solver.

mod active;
pub(crate) mod casci;
mod fcidump;

pub use active::freeze_core;
pub use casci::{casci_dense, Casci, CASCI_DIMENSION_CAP};
pub use fcidump::{parse_fcidump, read_fcidump, serialize_fcidump};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-12;

/// Real molecular integrals over spatial orbitals.
///
/// `two_body(p, q, r, s)` is `(pq|rs)` in chemists' notation. `ms2` follows
/// `N_α − N_β` for the reference sector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MolecularIntegrals {
    n_orbitals: usize,
    n_electrons: usize,
    ms2: i32,
    core_energy: f64,
    one_body: Vec<f64>,
    two_body: Vec<f64>,
}

impl MolecularIntegrals {
    /// Builds from row-major `n×n` and `n×n×n×n` arrays, checking the
    /// permutational symmetries.
    pub fn from_dense(
        n_orbitals: usize,
        n_electrons: usize,
        ms2: i32,
        core_energy: f64,
        one_body: Vec<f64>,
        two_body: Vec<f64>,
    ) -> Result<Self> {
        let n = n_orbitals;
        if n == 0 {
            return Err(Error::invalid("n_orbitals must be at least 1"));
        }
        if one_body.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: one_body.len(),
            });
        }
        if two_body.len() != n.pow(4) {
            return Err(Error::DimensionMismatch {
                expected: n.pow(4),
                found: two_body.len(),
            });
        }
        let mol = MolecularIntegrals {
            n_orbitals,
            n_electrons,
            ms2,
            core_energy,
            one_body,
            two_body,
        };
        mol.check_symmetry()?;
        Ok(mol)
    }

    /// Zero integrals with the given header data.
    pub fn zeros(n_orbitals: usize, n_electrons: usize, ms2: i32) -> Result<Self> {
        let n = n_orbitals;
        Self::from_dense(n, n_electrons, ms2, 0.0, vec![0.0; n * n], vec![0.0; n.pow(4)])
    }

    fn check_symmetry(&self) -> Result<()> {
        let n = self.n_orbitals;
        for p in 0..n {
            for q in 0..n {
                if (self.one_body(p, q) - self.one_body(q, p)).abs() > SYMMETRY_TOL {
                    return Err(Error::invalid(format!("one-body integrals not symmetric at ({p},{q})")));
                }
                for r in 0..n {
                    for s in 0..n {
                        let v = self.two_body(p, q, r, s);
                        for w in [
                            self.two_body(q, p, r, s),
                            self.two_body(p, q, s, r),
                            self.two_body(r, s, p, q),
                        ] {
                            if (v - w).abs() > SYMMETRY_TOL {
                                return Err(Error::invalid(format!(
                                    "two-body integrals lack 8-fold symmetry at ({p}{q}|{r}{s})"
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n_orbitals(&self) -> usize {
        self.n_orbitals
    }

    pub fn n_qubits(&self) -> usize {
        2 * self.n_orbitals
    }

    pub fn n_electrons(&self) -> usize {
        self.n_electrons
    }

    pub fn ms2(&self) -> i32 {
        self.ms2
    }

    pub fn core_energy(&self) -> f64 {
        self.core_energy
    }

    #[inline]
    pub fn one_body(&self, p: usize, q: usize) -> f64 {
        self.one_body[p * self.n_orbitals + q]
    }

    #[inline]
    pub fn two_body(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        let n = self.n_orbitals;
        self.two_body[((p * n + q) * n + r) * n + s]
    }

    pub fn set_core_energy(&mut self, e: f64) {
        self.core_energy = e;
    }

    pub(crate) fn set_one_body_sym(&mut self, p: usize, q: usize, v: f64) {
        let n = self.n_orbitals;
        self.one_body[p * n + q] = v;
        self.one_body[q * n + p] = v;
    }

    /// Stores `(pq|rs)` and its seven permutation images.
    pub(crate) fn set_two_body_sym(&mut self, p: usize, q: usize, r: usize, s: usize, v: f64) {
        let n = self.n_orbitals;
        let idx = |a: usize, b: usize, c: usize, d: usize| ((a * n + b) * n + c) * n + d;
        for (a, b, c, d) in [
            (p, q, r, s),
            (q, p, r, s),
            (p, q, s, r),
            (q, p, s, r),
            (r, s, p, q),
            (s, r, p, q),
            (r, s, q, p),
            (s, r, q, p),
        ] {
            self.two_body[idx(a, b, c, d)] = v;
        }
    }

    /// Reference sector `(n_electrons, ms2)` from the header.
    pub fn reference_sector(&self) -> crate::determinant::Sector {
        crate::determinant::Sector::new(self.n_electrons, self.ms2)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

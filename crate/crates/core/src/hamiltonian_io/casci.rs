use nalgebra::DMatrix;
use rayon::prelude::*;

use super::MolecularIntegrals;
use crate::determinant::{slater_condon_unchecked, Determinant, Sector};
use crate::error::{Error, Result};
use crate::linalg::{dense_eigh, Eigenpairs};

/// Largest sector handled by the dense reference solver.
pub const CASCI_DIMENSION_CAP: usize = 20_000;

/// Full spectrum of the Hamiltonian restricted to one `(N_e, S_z)` sector.
#[derive(Clone, Debug)]
pub struct Casci {
    pub sector: Sector,
    /// Sector basis in ascending bitstring order; rows of `eigenvectors`.
    pub determinants: Vec<Determinant>,
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl Casci {
    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn vector(&self, i: usize) -> Vec<f64> {
        self.eigenvectors.column(i).iter().copied().collect()
    }

    pub fn dimension(&self) -> usize {
        self.determinants.len()
    }
}

pub(crate) fn dense_hamiltonian(dets: &[Determinant], mol: &MolecularIntegrals) -> DMatrix<f64> {
    let n = dets.len();
    let rows: Vec<Vec<f64>> = dets
        .par_iter()
        .map(|x| {
            dets.iter()
                .map(|y| {
                    if x.particle_number() == y.particle_number() {
                        slater_condon_unchecked(x.bits(), y.bits(), mol)
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();
    DMatrix::from_fn(n, n, |i, j| rows[i][j])
}

/// Exact diagonalization of the `(n_electrons, two_sz / 2)` sector.
pub fn casci_dense(mol: &MolecularIntegrals, n_electrons: usize, two_sz: i32) -> Result<Casci> {
    let sector = Sector::new(n_electrons, two_sz);
    let dim = sector.dimension(mol.n_orbitals());
    if dim == 0 {
        return Err(Error::EmptySector);
    }
    if dim > CASCI_DIMENSION_CAP {
        return Err(Error::DimensionCap {
            dimension: dim,
            cap: CASCI_DIMENSION_CAP,
        });
    }
    let determinants = sector.determinants(mol.n_orbitals())?;
    let h = dense_hamiltonian(&determinants, mol);
    let Eigenpairs { values, vectors } = dense_eigh(&h);
    Ok(Casci {
        sector,
        determinants,
        eigenvalues: values,
        eigenvectors: vectors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_orbital_closed_shell() {
        let mut mol = MolecularIntegrals::zeros(1, 2, 0).unwrap();
        mol.set_core_energy(0.3);
        mol.set_one_body_sym(0, 0, -1.1);
        mol.set_two_body_sym(0, 0, 0, 0, 0.6);
        let c = casci_dense(&mol, 2, 0).unwrap();
        assert_eq!(c.dimension(), 1);
        assert!((c.ground_energy() - (0.3 + 2.0 * -1.1 + 0.6)).abs() < 1e-14);
    }

    #[test]
    fn empty_sector() {
        let mol = MolecularIntegrals::zeros(2, 2, 0).unwrap();
        assert!(matches!(casci_dense(&mol, 5, 0), Err(Error::EmptySector)));
        assert!(matches!(casci_dense(&mol, 2, 1), Err(Error::EmptySector)));
    }
}

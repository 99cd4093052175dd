//! Adaptive-sampling CI: a classical selected-CI baseline that grows its
//! determinant set from Hartree-Fock by perturbative ranking.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::determinant::{slater_condon_unchecked, Determinant, Sector};
use crate::error::{Error, Result};
use crate::hamiltonian_io::MolecularIntegrals;
use crate::sci::{qsci_from_selection, SelectionResult, SubspaceSolution};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsciConfig {
    /// Target determinant count.
    pub r: usize,
    /// Core determinants whose connections are searched.
    pub r_core: usize,
    /// Floor on the perturbative denominator, Hartree.
    pub delta: f64,
    pub max_iterations: usize,
    /// Stop once an iteration lowers the energy by less than this, Hartree.
    pub tolerance: f64,
}

impl AsciConfig {
    pub fn new(r: usize, r_core: usize) -> Self {
        AsciConfig {
            r,
            r_core,
            delta: 1e-3,
            max_iterations: 20,
            tolerance: 1e-9,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.r_core < 1 || self.r < self.r_core {
            return Err(Error::invalid(format!(
                "need r ≥ r_core ≥ 1, got r = {}, r_core = {}",
                self.r, self.r_core
            )));
        }
        if !(self.delta > 0.0) {
            return Err(Error::invalid("delta must be positive"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsciStep {
    pub iteration: usize,
    pub dimension: usize,
    pub energy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsciResult {
    pub solution: SubspaceSolution,
    /// Step 0 is the Hartree-Fock determinant alone.
    pub trace: Vec<AsciStep>,
    pub converged: bool,
}

impl AsciResult {
    pub fn iterations(&self) -> usize {
        self.trace.len() - 1
    }

    pub fn trace_csv(&self) -> String {
        let mut s = String::from("iteration,dimension,energy\n");
        for t in &self.trace {
            s.push_str(&format!("{},{},{:.12}\n", t.iteration, t.dimension, t.energy));
        }
        s
    }
}

/// `(det, weight)` sorted by descending weight, ties by ascending bits.
fn ranked(mut v: Vec<(Determinant, f64)>) -> Vec<(Determinant, f64)> {
    v.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    v
}

fn diagonalize(configs: Vec<Determinant>, mol: &MolecularIntegrals) -> Result<SubspaceSolution> {
    qsci_from_selection(&SelectionResult::from_configs(configs)?, mol, 1)
}

/// Starting from Hartree-Fock, each iteration takes the `r_core` largest
/// coefficients as the core, scores every connected determinant by
/// `|Σ_core H_ki c_i| / max(|H_kk − E|, δ)`, ranks those against the current
/// members (scored by `|c_i|`) and re-diagonalizes the best `r`.
///
/// An iteration that would raise the energy is discarded and ends the run,
/// so the trace never goes up.
pub fn asci_run(mol: &MolecularIntegrals, sector: Sector, cfg: &AsciConfig) -> Result<AsciResult> {
    cfg.validate()?;
    let dim = sector.dimension(mol.n_orbitals());
    if dim == 0 {
        return Err(Error::EmptySector);
    }
    let hf = Determinant::hartree_fock(mol.n_orbitals(), sector)?;
    let mut sol = diagonalize(vec![hf], mol)?;
    let mut trace = vec![AsciStep {
        iteration: 0,
        dimension: 1,
        energy: sol.energy(),
    }];
    let mut converged = sol.dimension() == dim;
    for iteration in 1..=cfg.max_iterations {
        if converged {
            break;
        }
        let e = sol.energy();
        let members = ranked(
            sol.configs
                .iter()
                .zip(&sol.vectors[0])
                .map(|(d, c)| (*d, c.abs()))
                .collect(),
        );
        let core: Vec<(u64, f64)> = members
            .iter()
            .take(cfg.r_core)
            .map(|(d, _)| {
                let i = sol.configs.iter().position(|x| x == d).expect("member");
                (d.bits(), sol.vectors[0][i])
            })
            .collect();
        let known: HashSet<Determinant> = sol.configs.iter().copied().collect();
        let mut seen = HashSet::new();
        let candidates: Vec<Determinant> = members
            .iter()
            .take(cfg.r_core)
            .flat_map(|(d, _)| d.connected_determinants(true))
            .filter(|k| sector.contains(k) && !known.contains(k) && seen.insert(*k))
            .collect();
        let scored: Vec<(Determinant, f64)> = candidates
            .par_iter()
            .map(|k| {
                let num: f64 = core
                    .iter()
                    .map(|&(i, c)| slater_condon_unchecked(k.bits(), i, mol) * c)
                    .sum();
                let hkk = slater_condon_unchecked(k.bits(), k.bits(), mol);
                (*k, num.abs() / (hkk - e).abs().max(cfg.delta))
            })
            .collect();
        let mut pool = members.clone();
        pool.extend(scored);
        let next: Vec<Determinant> = ranked(pool).into_iter().take(cfg.r).map(|(d, _)| d).collect();
        let mut same = next.clone();
        same.sort_unstable();
        let mut prev = sol.configs.clone();
        prev.sort_unstable();
        if same == prev {
            converged = true;
            break;
        }
        let trial = diagonalize(next, mol)?;
        if trial.energy() > e {
            converged = true;
            break;
        }
        let gain = e - trial.energy();
        sol = trial;
        trace.push(AsciStep {
            iteration,
            dimension: sol.dimension(),
            energy: sol.energy(),
        });
        converged = gain < cfg.tolerance || sol.dimension() == dim;
    }
    Ok(AsciResult {
        solution: sol,
        trace,
        converged,
    })
}

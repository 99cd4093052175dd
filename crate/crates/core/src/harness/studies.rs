//! Numerical studies built from the library pieces. Each returns plain data;
//! writing files is left to the runner.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{noisy_sample, ry_ansatz, sample, Circuit, NoiseModel, StateVector};
use crate::determinant::{Determinant, Sector};
use crate::error::{Error, Result};
use crate::hamiltonian_io::{casci_dense, MolecularIntegrals};
use crate::measurement::{allocate_single, estimate_sampling, exact_sigmas, haar_sigmas, qwc_groups};
use crate::qubit::{jordan_wigner, QubitHamiltonian};
use crate::sci::{
    idealized_top_r, qsci_from_selection, select_all, select_top_r, expectation_on_output, Observable,
    SelectionResult, SubspaceSolution,
};
use crate::variational::{assemble_objective, vqe_multistart, MinimizeSettings, ObjectiveSpec, OptimizationTrace};

/// Smallest `R` reaching a tolerance, with the shot estimate `1/|c_R|²`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingRecord {
    pub n_qubits: usize,
    pub epsilon: f64,
    pub min_r: usize,
    pub error: f64,
    /// `None` when the `R`-th coefficient is exactly zero.
    pub shot_estimate: Option<f64>,
}

/// Binary search for the smallest `R` with `E_R − E_exact ≤ ε` under
/// idealized selection. `E_exact` is the full-sector value.
pub fn min_r_for_tolerance(
    state: &StateVector,
    mol: &MolecularIntegrals,
    sector: Sector,
    epsilon: f64,
) -> Result<ScalingRecord> {
    if !(epsilon > 0.0) {
        return Err(Error::invalid("epsilon must be positive"));
    }
    let dim = sector.dimension(mol.n_orbitals());
    if dim == 0 {
        return Err(Error::EmptySector);
    }
    let full = idealized_top_r(state, dim, Some(sector))?;
    let mut cache: HashMap<usize, f64> = HashMap::new();
    let mut energy = |r: usize| -> Result<f64> {
        if let Some(&e) = cache.get(&r) {
            return Ok(e);
        }
        let e = qsci_from_selection(&full.truncated(r), mol, 1)?.energy();
        cache.insert(r, e);
        Ok(e)
    };
    let exact = energy(dim)?;
    let (mut lo, mut hi) = (1, dim);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if energy(mid)? - exact <= epsilon {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let error = energy(lo)? - exact;
    assert!(error <= epsilon, "full sector misses its own energy");
    if lo > 1 && energy(lo - 1)? - exact <= epsilon {
        return Err(Error::invalid("energy is not monotone in R"));
    }
    let c2 = full.frequencies[lo - 1];
    Ok(ScalingRecord {
        n_qubits: mol.n_qubits(),
        epsilon,
        min_r: lo,
        error,
        shot_estimate: (c2 > 0.0).then(|| 1.0 / c2),
    })
}

/// Per-trial energies of a repeated stochastic estimate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub exact: f64,
    pub energies: Vec<f64>,
    pub mean_abs_error: f64,
    /// Sample standard deviation of the energies.
    pub std_dev: f64,
}

impl TrialSummary {
    pub fn new(exact: f64, energies: Vec<f64>) -> Self {
        let n = energies.len() as f64;
        let mean = energies.iter().sum::<f64>() / n;
        let var = energies.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
        TrialSummary {
            exact,
            mean_abs_error: energies.iter().map(|e| (e - exact).abs()).sum::<f64>() / n,
            std_dev: var.sqrt(),
            energies,
        }
    }
}

fn trial_seed(base: u64, t: usize) -> u64 {
    base.wrapping_add(t as u64)
}

/// Samples `n_shots` from `state` per trial, keeps every observed
/// configuration (inside `sector` when `post_select`) and diagonalizes.
pub fn sampling_trials(
    state: &StateVector,
    mol: &MolecularIntegrals,
    sector: Sector,
    n_shots: u64,
    n_trials: usize,
    base_seed: u64,
    post_select: bool,
) -> Result<TrialSummary> {
    if n_trials < 2 {
        return Err(Error::invalid("need at least two trials"));
    }
    let exact = casci_dense(mol, sector.n_electrons, sector.two_sz)?.ground_energy();
    let filter = post_select.then_some(sector);
    let energies = (0..n_trials)
        .into_par_iter()
        .map(|t| {
            let counts = sample(state, n_shots, trial_seed(base_seed, t))?;
            Ok(qsci_from_selection(&select_all(&counts, filter), mol, 1)?.energy())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(TrialSummary::new(exact, energies))
}

/// Variance model used to split shots between measurement groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AllocationModel {
    Haar,
    Exact,
}

/// Conventional grouped estimation of `⟨H⟩` with the same total budget, for
/// comparison with [`sampling_trials`].
pub fn qwc_trials(
    state: &StateVector,
    h: &QubitHamiltonian,
    exact: f64,
    n_shots: u64,
    n_trials: usize,
    base_seed: u64,
    model: AllocationModel,
) -> Result<TrialSummary> {
    if n_trials < 2 {
        return Err(Error::invalid("need at least two trials"));
    }
    let groups = qwc_groups(h);
    let sigmas = match model {
        AllocationModel::Haar => haar_sigmas(h, &groups),
        AllocationModel::Exact => exact_sigmas(state, h, &groups)?,
    };
    let alloc = allocate_single(&sigmas, n_shots)?;
    let energies = (0..n_trials)
        .into_par_iter()
        .map(|t| Ok(estimate_sampling(state, h, &groups, &alloc, trial_seed(base_seed, t))?.estimate))
        .collect::<Result<Vec<f64>>>()?;
    Ok(TrialSummary::new(exact, energies))
}

/// Hartree-Fock plus all single and double excitations within the sector,
/// diagonalized together.
pub fn cisd(mol: &MolecularIntegrals, sector: Sector) -> Result<SubspaceSolution> {
    let hf = Determinant::hartree_fock(mol.n_orbitals(), sector)?;
    let mut configs = vec![hf];
    configs.extend(hf.connected_determinants(true));
    qsci_from_selection(&SelectionResult::from_configs(configs)?, mol, 1)
}

/// Energies of one noisy sampling run, with and without post-selection.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoisyRun {
    pub seed: u64,
    pub discarded: u64,
    /// `(r, energy)` pairs.
    pub unfiltered: Vec<(usize, f64)>,
    pub filtered: Vec<(usize, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoisyDemo {
    pub exact: f64,
    pub cisd: f64,
    pub vqe_energy: f64,
    pub noise: NoiseModel,
    pub n_shots: u64,
    pub runs: Vec<NoisyRun>,
}

/// Noiseless Ry-ansatz VQE from Hartree-Fock (best of `restarts` starts from
/// `vqe_seed` on), then noisy sampling of the optimized circuit. For each seed QSCI is run on the top `r` outcomes
/// for every `r` in `r_values`, once unfiltered and once post-selected to
/// the sector.
#[allow(clippy::too_many_arguments)]
pub fn noisy_demo(
    mol: &MolecularIntegrals,
    sector: Sector,
    depth: usize,
    noise: NoiseModel,
    n_shots: u64,
    r_values: &[usize],
    vqe_seed: u64,
    restarts: usize,
    seeds: &[u64],
    settings: &MinimizeSettings,
) -> Result<NoisyDemo> {
    noise.validate()?;
    let h = jordan_wigner(mol);
    let circuit = ry_ansatz(mol.n_qubits(), depth)?;
    let hf = Determinant::hartree_fock(mol.n_orbitals(), sector)?;
    let prep = vqe_multistart(&ObjectiveSpec::new(h), &circuit, &hf, settings, vqe_seed, restarts)?;
    let exact = casci_dense(mol, sector.n_electrons, sector.two_sz)?.ground_energy();
    let runs = seeds
        .iter()
        .map(|&seed| {
            let counts = noisy_sample(&circuit, &prep.params, &hf, &noise, n_shots, seed)?;
            let mut run = NoisyRun {
                seed,
                discarded: 0,
                unfiltered: Vec::new(),
                filtered: Vec::new(),
            };
            for &r in r_values {
                let u = select_top_r(&counts, r, None)?;
                run.unfiltered.push((r, qsci_from_selection(&u, mol, 1)?.energy()));
                let f = select_top_r(&counts, r, Some(sector))?;
                run.discarded = f.discarded_by_postselect;
                run.filtered.push((r, qsci_from_selection(&f, mol, 1)?.energy()));
            }
            Ok(run)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NoisyDemo {
        exact,
        cisd: cisd(mol, sector)?.energy(),
        vqe_energy: prep.energy,
        noise,
        n_shots,
        runs,
    })
}

/// QSCI energies along a VQE optimization history.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VqeHistory {
    pub r_values: Vec<usize>,
    /// One row per accepted iterate: the VQE energy and one QSCI energy per `r`.
    pub rows: Vec<(f64, Vec<f64>)>,
}

impl VqeHistory {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("iteration,vqe_energy");
        for r in &self.r_values {
            s.push_str(&format!(",qsci_r{r}"));
        }
        s.push('\n');
        for (k, (e, q)) in self.rows.iter().enumerate() {
            s.push_str(&format!("{k},{e:.12}"));
            for v in q {
                s.push_str(&format!(",{v:.12}"));
            }
            s.push('\n');
        }
        s
    }
}

/// Re-simulates every iterate of `trace` and runs QSCI on it, idealized
/// when `shots` is `None` and sampled (seed `seed + iteration`) otherwise.
#[allow(clippy::too_many_arguments)]
pub fn vqe_history(
    spec: &ObjectiveSpec,
    circuit: &Circuit,
    initial: &Determinant,
    trace: &OptimizationTrace,
    mol: &MolecularIntegrals,
    sector: Sector,
    r_values: &[usize],
    shots: Option<u64>,
    seed: u64,
) -> Result<VqeHistory> {
    let obj = assemble_objective(spec, circuit, initial)?;
    let rows = trace
        .params
        .par_iter()
        .enumerate()
        .map(|(k, p)| {
            let s = obj.state(p)?;
            let counts = match shots {
                Some(n) => Some(sample(&s, n, seed.wrapping_add(k as u64))?),
                None => None,
            };
            let q = r_values
                .iter()
                .map(|&r| {
                    let sel = match &counts {
                        Some(c) => select_top_r(c, r, Some(sector))?,
                        None => idealized_top_r(&s, r, Some(sector))?,
                    };
                    Ok(qsci_from_selection(&sel, mol, 1)?.energy())
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok((obj.energy_of_state(&s)?, q))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VqeHistory {
        r_values: r_values.to_vec(),
        rows,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObservableRecord {
    pub name: String,
    pub value: f64,
    pub exact: f64,
    pub abs_error: f64,
}

/// Expectation of each operator on output state 0 of `sol`, against the
/// exact ground state of the sector.
pub fn observable_suite(
    sol: &SubspaceSolution,
    mol: &MolecularIntegrals,
    sector: Sector,
    operators: &[(String, MolecularIntegrals)],
) -> Result<Vec<ObservableRecord>> {
    let c = casci_dense(mol, sector.n_electrons, sector.two_sz)?;
    let exact_sol = SubspaceSolution {
        configs: c.determinants.clone(),
        eigenvalues: vec![c.ground_energy()],
        vectors: vec![c.vector(0)],
        discarded_by_postselect: 0,
        shortfall: 0,
    };
    operators
        .par_iter()
        .map(|(name, op)| {
            if op.n_orbitals() != mol.n_orbitals() {
                return Err(Error::DimensionMismatch {
                    expected: mol.n_orbitals(),
                    found: op.n_orbitals(),
                });
            }
            let value = expectation_on_output(sol, 0, Observable::Fermionic(op))?;
            let exact = expectation_on_output(&exact_sol, 0, Observable::Fermionic(op))?;
            Ok(ObservableRecord {
                name: name.clone(),
                value,
                exact,
                abs_error: (value - exact).abs(),
            })
        })
        .collect()
}

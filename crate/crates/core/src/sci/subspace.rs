use std::collections::HashMap;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::selection::{idealized_top_r, merge_subspaces, select_top_r, MergeStrategy, SelectionResult};
use crate::circuit::{expectation, SampleCounts, StateVector};
use crate::determinant::{slater_condon_unchecked, Determinant, Sector};
use crate::error::{Error, Result};
use crate::hamiltonian_io::{casci::dense_hamiltonian, MolecularIntegrals};
use crate::linalg::{lowest_eigenpairs, CsrMatrix, Eigenpairs, LinearOperator, Solver, DENSE_SOLVER_THRESHOLD};
use crate::qubit::QubitHamiltonian;

/// `H_R` stored dense up to the solver threshold and sparse above it.
#[derive(Clone, Debug)]
pub enum SubspaceMatrix {
    Dense(DMatrix<f64>),
    Sparse(CsrMatrix),
}

impl SubspaceMatrix {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        match self {
            SubspaceMatrix::Dense(m) => m[(i, j)],
            SubspaceMatrix::Sparse(m) => m.get(i, j),
        }
    }
}

impl LinearOperator for SubspaceMatrix {
    fn dim(&self) -> usize {
        match self {
            SubspaceMatrix::Dense(m) => m.nrows(),
            SubspaceMatrix::Sparse(m) => m.dim(),
        }
    }

    fn diagonal(&self) -> Vec<f64> {
        match self {
            SubspaceMatrix::Dense(m) => LinearOperator::diagonal(m),
            SubspaceMatrix::Sparse(m) => m.diagonal(),
        }
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        match self {
            SubspaceMatrix::Dense(m) => m.apply(x, y),
            SubspaceMatrix::Sparse(m) => m.apply(x, y),
        }
    }

    fn to_dense(&self) -> DMatrix<f64> {
        match self {
            SubspaceMatrix::Dense(m) => m.clone(),
            SubspaceMatrix::Sparse(m) => m.to_dense(),
        }
    }
}

fn check_register(configs: &[Determinant], mol: &MolecularIntegrals) -> Result<()> {
    if let Some(d) = configs.iter().find(|d| d.n_qubits() != mol.n_qubits()) {
        return Err(Error::DimensionMismatch {
            expected: mol.n_qubits(),
            found: d.n_qubits(),
        });
    }
    Ok(())
}

/// `(H_R)_xy = ⟨x|H|y⟩` over configurations sharing one particle number.
pub fn build_subspace_hamiltonian(configs: &[Determinant], mol: &MolecularIntegrals) -> Result<SubspaceMatrix> {
    if let Some(first) = configs.first() {
        if let Some(d) = configs.iter().find(|d| d.particle_number() != first.particle_number()) {
            return Err(Error::ParticleNumberMismatch {
                left: first.particle_number(),
                right: d.particle_number(),
            });
        }
    }
    build_block_hamiltonian(configs, mol)
}

/// As [`build_subspace_hamiltonian`] but allowing several particle numbers;
/// the result is block diagonal since `H` conserves `N_e`.
pub fn build_block_hamiltonian(configs: &[Determinant], mol: &MolecularIntegrals) -> Result<SubspaceMatrix> {
    check_register(configs, mol)?;
    if configs.len() <= DENSE_SOLVER_THRESHOLD {
        return Ok(SubspaceMatrix::Dense(dense_hamiltonian(configs, mol)));
    }
    let index: HashMap<u64, usize> = configs.iter().enumerate().map(|(i, d)| (d.bits(), i)).collect();
    let rows: Vec<Vec<(usize, f64)>> = configs
        .par_iter()
        .enumerate()
        .map(|(i, d)| {
            let mut row = vec![(i, slater_condon_unchecked(d.bits(), d.bits(), mol))];
            for e in d.connected_determinants(true) {
                if let Some(&j) = index.get(&e.bits()) {
                    let v = slater_condon_unchecked(d.bits(), e.bits(), mol);
                    if v != 0.0 {
                        row.push((j, v));
                    }
                }
            }
            row
        })
        .collect();
    Ok(SubspaceMatrix::Sparse(CsrMatrix::from_rows(configs.len(), rows)))
}

/// The `k` lowest eigenpairs: dense at or below the threshold, Davidson above.
pub fn diagonalize_lowest(m: &dyn LinearOperator, k: usize) -> Result<Eigenpairs> {
    lowest_eigenpairs(m, k, Solver::Auto)
}

/// Eigenpairs of a subspace Hamiltonian together with its basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubspaceSolution {
    pub configs: Vec<Determinant>,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// One coefficient vector per eigenvalue, indexed like `configs`.
    pub vectors: Vec<Vec<f64>>,
    pub discarded_by_postselect: u64,
    /// Configurations missing relative to the requested `r`.
    pub shortfall: usize,
}

impl SubspaceSolution {
    pub fn dimension(&self) -> usize {
        self.configs.len()
    }

    pub fn energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// `|ψ_out^(i)⟩` as a full register state.
    pub fn output_state(&self, i: usize) -> Result<StateVector> {
        StateVector::from_ci(&self.configs, &self.vectors[i])
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn solution(sel: &SelectionResult, pairs: Eigenpairs) -> SubspaceSolution {
    let k = pairs.values.len();
    SubspaceSolution {
        configs: sel.configs.clone(),
        vectors: (0..k).map(|i| pairs.vector(i)).collect(),
        eigenvalues: pairs.values,
        discarded_by_postselect: sel.discarded_by_postselect,
        shortfall: sel.shortfall(),
    }
}

/// Diagonalizes `H` in the span of `sel` and keeps the `k` lowest pairs.
pub fn qsci_from_selection(sel: &SelectionResult, mol: &MolecularIntegrals, k: usize) -> Result<SubspaceSolution> {
    if sel.is_empty() {
        return Err(Error::EmptySelection {
            discarded: sel.discarded_by_postselect,
        });
    }
    let m = build_block_hamiltonian(&sel.configs, mol)?;
    Ok(solution(sel, diagonalize_lowest(&m, k)?))
}

/// What the selection step reads from.
#[derive(Clone, Copy, Debug)]
pub enum InputSource<'a> {
    /// Measured outcomes; the `r` most frequent are used.
    Counts(&'a SampleCounts),
    /// Idealized sampling: the `r` largest amplitudes.
    State(&'a StateVector),
}

impl InputSource<'_> {
    pub fn select(&self, r: usize, filter: Option<Sector>) -> Result<SelectionResult> {
        match self {
            InputSource::Counts(c) => select_top_r(c, r, filter),
            InputSource::State(s) => idealized_top_r(s, r, filter),
        }
    }
}

/// Select, build and diagonalize for the lowest eigenpair.
pub fn qsci_ground(
    input: InputSource<'_>,
    r: usize,
    filter: Option<Sector>,
    mol: &MolecularIntegrals,
) -> Result<SubspaceSolution> {
    qsci_from_selection(&input.select(r, filter)?, mol, 1)
}

/// One diagonalization in the merged subspace, keeping `n_states` pairs.
pub fn qsci_single_diag(
    selections: &[SelectionResult],
    r: usize,
    strategy: MergeStrategy,
    mol: &MolecularIntegrals,
    n_states: usize,
) -> Result<SubspaceSolution> {
    if n_states == 0 || r < n_states {
        return Err(Error::invalid(format!("r = {r} cannot hold {n_states} states")));
    }
    let merged = merge_subspaces(selections, r, strategy)?;
    if merged.len() < n_states {
        return Err(Error::invalid(format!(
            "merged subspace has {} configurations, fewer than {n_states} states",
            merged.len()
        )));
    }
    qsci_from_selection(&merged, mol, n_states)
}

/// An earlier output state: coefficients over its own configurations.
#[derive(Clone, Debug, PartialEq)]
pub struct PriorState {
    pub configs: Vec<Determinant>,
    pub coefficients: Vec<f64>,
}

impl PriorState {
    pub fn from_solution(sol: &SubspaceSolution, i: usize) -> Self {
        PriorState {
            configs: sol.configs.clone(),
            coefficients: sol.vectors[i].clone(),
        }
    }

    /// Coefficients on `configs`, zero where the prior has no support.
    fn projected(&self, configs: &[Determinant]) -> Vec<f64> {
        let own: HashMap<u64, f64> = self
            .configs
            .iter()
            .zip(&self.coefficients)
            .map(|(d, &c)| (d.bits(), c))
            .collect();
        configs.iter().map(|d| own.get(&d.bits()).copied().unwrap_or(0.0)).collect()
    }
}

/// `H_R + Σ_i β_i c^(i) c^(i)ᵀ` as an operator.
#[derive(Clone, Debug)]
pub struct DeflatedMatrix {
    base: SubspaceMatrix,
    updates: Vec<(f64, Vec<f64>)>,
}

impl LinearOperator for DeflatedMatrix {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn diagonal(&self) -> Vec<f64> {
        let mut d = self.base.diagonal();
        for (beta, v) in &self.updates {
            for (di, vi) in d.iter_mut().zip(v) {
                *di += beta * vi * vi;
            }
        }
        d
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.base.apply(x, y);
        for (beta, v) in &self.updates {
            let s = beta * v.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
            for (yi, vi) in y.iter_mut().zip(v) {
                *yi += s * vi;
            }
        }
    }

    fn to_dense(&self) -> DMatrix<f64> {
        let mut m = self.base.to_dense();
        for (beta, v) in &self.updates {
            let n = v.len();
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] += beta * v[i] * v[j];
                }
            }
        }
        m
    }
}

pub fn deflated_subspace_matrix(
    configs: &[Determinant],
    mol: &MolecularIntegrals,
    priors: &[PriorState],
    betas: &[f64],
) -> Result<DeflatedMatrix> {
    if priors.len() != betas.len() {
        return Err(Error::DimensionMismatch {
            expected: priors.len(),
            found: betas.len(),
        });
    }
    if let Some(b) = betas.iter().find(|b| !(**b >= 0.0)) {
        return Err(Error::invalid(format!("beta {b} must be non-negative")));
    }
    Ok(DeflatedMatrix {
        base: build_block_hamiltonian(configs, mol)?,
        updates: priors.iter().zip(betas).map(|(p, &b)| (b, p.projected(configs))).collect(),
    })
}

/// `2 × 1.01 × Σ_j |c_j|` over the non-identity Pauli terms.
pub fn default_beta(h: &QubitHamiltonian) -> f64 {
    2.0 * h.one_norm_without_identity() * 1.01
}

/// Deflation weights for the sequential scheme.
#[derive(Clone, Debug)]
pub enum Betas {
    /// `β_i` applied to prior state `i`; needs one entry per prior.
    Explicit(Vec<f64>),
    /// [`default_beta`] of this Hamiltonian for every prior.
    Auto(QubitHamiltonian),
}

/// State `k` takes the lowest eigenpair of `H_R` over its own selection,
/// deflated by the output states `0..k`.
pub fn qsci_sequential(selections: &[SelectionResult], mol: &MolecularIntegrals, betas: &Betas) -> Result<Vec<SubspaceSolution>> {
    let n = selections.len();
    let betas: Vec<f64> = match betas {
        Betas::Explicit(b) => {
            if b.len() + 1 < n {
                return Err(Error::DimensionMismatch {
                    expected: n.saturating_sub(1),
                    found: b.len(),
                });
            }
            b.clone()
        }
        Betas::Auto(h) => vec![default_beta(h); n.saturating_sub(1)],
    };
    let mut out: Vec<SubspaceSolution> = Vec::with_capacity(n);
    let mut priors: Vec<PriorState> = Vec::new();
    for (k, sel) in selections.iter().enumerate() {
        if sel.is_empty() {
            return Err(Error::EmptySelection {
                discarded: sel.discarded_by_postselect,
            });
        }
        let m = deflated_subspace_matrix(&sel.configs, mol, &priors, &betas[..k])?;
        let sol = solution(sel, diagonalize_lowest(&m, 1)?);
        priors.push(PriorState::from_solution(&sol, 0));
        out.push(sol);
    }
    Ok(out)
}

/// Operator whose expectation is taken on an output state.
#[derive(Clone, Copy, Debug)]
pub enum Observable<'a> {
    /// Evaluated with Slater-Condon rules.
    Fermionic(&'a MolecularIntegrals),
    /// Evaluated by Pauli action on the embedded state.
    Qubit(&'a QubitHamiltonian),
}

/// `Σ_{x,y} c_x ⟨x|O|y⟩ c_y` for output state `i`.
pub fn expectation_on_output(sol: &SubspaceSolution, i: usize, observable: Observable<'_>) -> Result<f64> {
    let c = sol
        .vectors
        .get(i)
        .ok_or_else(|| Error::invalid(format!("solution has no state {i}")))?;
    match observable {
        Observable::Fermionic(op) => {
            check_register(&sol.configs, op)?;
            let m = build_block_hamiltonian(&sol.configs, op)?;
            let mut y = vec![0.0; c.len()];
            m.apply(c, &mut y);
            Ok(y.iter().zip(c).map(|(a, b)| a * b).sum())
        }
        Observable::Qubit(op) => {
            if let Some(d) = sol.configs.iter().find(|d| d.n_qubits() != op.n_qubits()) {
                return Err(Error::DimensionMismatch {
                    expected: op.n_qubits(),
                    found: d.n_qubits(),
                });
            }
            expectation(&sol.output_state(i)?, op)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_beta_arithmetic() {
        let h = QubitHamiltonian::from_real_terms(1, &[(0.5, "Z")]).unwrap();
        assert!((default_beta(&h) - 1.01).abs() < 1e-15);
        let h = QubitHamiltonian::from_real_terms(2, &[(1.2, "ZI"), (-2.0, "XX"), (7.0, "II")]).unwrap();
        assert!((default_beta(&h) - 6.464).abs() < 1e-12);
    }
}

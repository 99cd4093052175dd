//! Variational input-state preparation: penalized and deflated objectives,
//! a finite-difference BFGS minimizer, VQE and VQD.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{expectation_compiled, simulate, Circuit, StateVector};
use crate::determinant::Determinant;
use crate::error::{Error, Result};
use crate::qubit::{symmetry_operators, CompiledOperator, QubitHamiltonian};

/// `weight · (operator − target)²`.
#[derive(Clone, Debug)]
pub struct Penalty {
    pub operator: QubitHamiltonian,
    pub target: f64,
    pub weight: f64,
}

/// `weight · |⟨state|ψ⟩|²`.
#[derive(Clone, Debug)]
pub struct Overlap {
    pub state: StateVector,
    pub weight: f64,
}

#[derive(Clone, Debug)]
pub struct ObjectiveSpec {
    pub hamiltonian: QubitHamiltonian,
    pub penalties: Vec<Penalty>,
    pub overlaps: Vec<Overlap>,
}

impl ObjectiveSpec {
    pub fn new(hamiltonian: QubitHamiltonian) -> Self {
        ObjectiveSpec {
            hamiltonian,
            penalties: Vec::new(),
            overlaps: Vec::new(),
        }
    }

    pub fn with_penalty(mut self, operator: QubitHamiltonian, target: f64, weight: f64) -> Self {
        self.penalties.push(Penalty { operator, target, weight });
        self
    }

    pub fn with_overlap(mut self, state: StateVector, weight: f64) -> Self {
        self.overlaps.push(Overlap { state, weight });
        self
    }

    /// `w·Ŝ_z² + w·(N̂_e − n_electrons)²` on `2·n_orbitals` qubits.
    pub fn with_sector_penalties(self, n_orbitals: usize, n_electrons: usize, two_sz: i32, weight: f64) -> Self {
        let (sz, n) = symmetry_operators(n_orbitals);
        self.with_penalty(sz, two_sz as f64 / 2.0, weight)
            .with_penalty(n, n_electrons as f64, weight)
    }
}

/// Objective over circuit parameters for a fixed ansatz and initial state.
pub struct Objective<'a> {
    circuit: &'a Circuit,
    initial: Determinant,
    energy: CompiledOperator,
    total: CompiledOperator,
    overlaps: Vec<Overlap>,
}

/// Combines `H` and the penalties into one operator and keeps the overlap
/// states for exact evaluation.
pub fn assemble_objective<'a>(
    spec: &ObjectiveSpec,
    circuit: &'a Circuit,
    initial: &Determinant,
) -> Result<Objective<'a>> {
    let nq = spec.hamiltonian.n_qubits();
    let mismatch = |found| Error::DimensionMismatch { expected: nq, found };
    if circuit.n_qubits() != nq {
        return Err(mismatch(circuit.n_qubits()));
    }
    if initial.n_qubits() != nq {
        return Err(mismatch(initial.n_qubits()));
    }
    let mut total = spec.hamiltonian.clone();
    for p in &spec.penalties {
        if p.operator.n_qubits() != nq {
            return Err(mismatch(p.operator.n_qubits()));
        }
        if p.weight < 0.0 {
            return Err(Error::invalid(format!("negative penalty weight {}", p.weight)));
        }
        let shifted = p.operator.shift(-p.target);
        total = total.add(&shifted.mul(&shifted)?.scale(p.weight))?;
    }
    for o in &spec.overlaps {
        if o.state.n_qubits() != nq {
            return Err(mismatch(o.state.n_qubits()));
        }
        if o.weight < 0.0 {
            return Err(Error::invalid(format!("negative overlap weight {}", o.weight)));
        }
    }
    Ok(Objective {
        circuit,
        initial: *initial,
        energy: spec.hamiltonian.compile(),
        total: total.compile(),
        overlaps: spec.overlaps.clone(),
    })
}

impl Objective<'_> {
    pub fn n_params(&self) -> usize {
        self.circuit.n_params()
    }

    pub fn state(&self, params: &[f64]) -> Result<StateVector> {
        simulate(self.circuit, params, &self.initial)
    }

    pub fn value(&self, params: &[f64]) -> Result<f64> {
        let s = self.state(params)?;
        self.value_of_state(&s)
    }

    pub fn value_of_state(&self, s: &StateVector) -> Result<f64> {
        let mut v = expectation_compiled(s, &self.total)?;
        for o in &self.overlaps {
            v += o.weight * o.state.inner(s)?.norm_sqr();
        }
        Ok(v)
    }

    /// `⟨H⟩` alone, without penalties or overlaps.
    pub fn energy(&self, params: &[f64]) -> Result<f64> {
        expectation_compiled(&self.state(params)?, &self.energy)
    }

    /// `⟨H⟩` of an already simulated state.
    pub fn energy_of_state(&self, s: &StateVector) -> Result<f64> {
        expectation_compiled(s, &self.energy)
    }

    /// Objective as a plain function; evaluation errors surface as NaN.
    pub fn as_fn(&self) -> impl Fn(&[f64]) -> f64 + Sync + '_ {
        move |p: &[f64]| self.value(p).unwrap_or(f64::NAN)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinimizeSettings {
    pub max_iterations: usize,
    /// Stop once the largest gradient component falls below this.
    pub gradient_tolerance: f64,
    /// Central-difference step.
    pub fd_step: f64,
}

impl Default for MinimizeSettings {
    fn default() -> Self {
        MinimizeSettings {
            max_iterations: 1000,
            gradient_tolerance: 1e-7,
            fd_step: 1e-6,
        }
    }
}

/// Accepted iterates, starting with the initial point.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OptimizationTrace {
    pub params: Vec<Vec<f64>>,
    pub values: Vec<f64>,
    pub converged: bool,
}

impl OptimizationTrace {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn final_params(&self) -> &[f64] {
        self.params.last().map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn final_value(&self) -> f64 {
        self.values.last().copied().unwrap_or(f64::NAN)
    }

    /// `iteration,energy,params` rows; parameters joined with `;`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("iteration,energy,params\n");
        for (k, (v, p)) in self.values.iter().zip(&self.params).enumerate() {
            let blob: Vec<String> = p.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(out, "{k},{v},{}", blob.join(";"));
        }
        out
    }
}

fn gradient(f: &(dyn Fn(&[f64]) -> f64 + Sync), x: &[f64], h: f64) -> Vec<f64> {
    (0..x.len())
        .into_par_iter()
        .map(|i| {
            let mut xp = x.to_vec();
            xp[i] += h;
            let fp = f(&xp);
            xp[i] -= 2.0 * h;
            let fm = f(&xp);
            (fp - fm) / (2.0 * h)
        })
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// BFGS with central finite-difference gradients and Armijo backtracking.
pub fn minimize(
    f: &(dyn Fn(&[f64]) -> f64 + Sync),
    x0: &[f64],
    settings: &MinimizeSettings,
) -> Result<OptimizationTrace> {
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("initial parameters must be finite"));
    }
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut fx = f(&x);
    if !fx.is_finite() {
        return Err(Error::NonFinite { iteration: 0 });
    }
    let mut trace = OptimizationTrace {
        params: vec![x.clone()],
        values: vec![fx],
        converged: false,
    };
    if n == 0 {
        trace.converged = true;
        return Ok(trace);
    }
    let mut g = gradient(f, &x, settings.fd_step);
    // inverse Hessian approximation, row-major
    let mut hinv = identity(n);
    for it in 1..=settings.max_iterations {
        if g.iter().fold(0.0f64, |m, v| m.max(v.abs())) < settings.gradient_tolerance {
            trace.converged = true;
            break;
        }
        let mut d: Vec<f64> = (0..n).map(|i| -dot(&hinv[i * n..(i + 1) * n], &g)).collect();
        let mut slope = dot(&g, &d);
        if slope >= 0.0 {
            hinv = identity(n);
            d = g.iter().map(|v| -v).collect();
            slope = dot(&g, &d);
        }
        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let xn: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + alpha * b).collect();
            let fxn = f(&xn);
            if !fxn.is_finite() {
                return Err(Error::NonFinite { iteration: it });
            }
            if fxn <= fx + 1e-4 * alpha * slope {
                accepted = Some((xn, fxn));
                break;
            }
            alpha *= 0.5;
        }
        let Some((xn, fxn)) = accepted else {
            // no descent possible at gradient resolution
            trace.converged = true;
            break;
        };
        let gn = gradient(f, &xn, settings.fd_step);
        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-14 {
            let rho = 1.0 / sy;
            let hy: Vec<f64> = (0..n).map(|i| dot(&hinv[i * n..(i + 1) * n], &y)).collect();
            let yhy = dot(&y, &hy);
            for i in 0..n {
                for j in 0..n {
                    hinv[i * n + j] += -rho * (hy[i] * s[j] + s[i] * hy[j]) + (rho * rho * yhy + rho) * s[i] * s[j];
                }
            }
        }
        let stalled = fx - fxn <= 1e-15 * fx.abs().max(1.0);
        x = xn;
        fx = fxn;
        g = gn;
        trace.params.push(x.clone());
        trace.values.push(fx);
        if stalled {
            trace.converged = true;
            break;
        }
    }
    Ok(trace)
}

fn identity(n: usize) -> Vec<f64> {
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        m[i * n + i] = 1.0;
    }
    m
}

/// Uniform draws in `[−0.1, 0.1]`; zero parameters keep the initial
/// determinant for the built-in ansatzes.
pub fn initial_params(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random_range(-0.1..=0.1)).collect()
}

/// A converged variational state.
#[derive(Clone, Debug)]
pub struct VariationalState {
    pub params: Vec<f64>,
    pub state: StateVector,
    /// `⟨H⟩` without penalties or overlaps.
    pub energy: f64,
    pub trace: OptimizationTrace,
}

pub fn vqe(
    spec: &ObjectiveSpec,
    circuit: &Circuit,
    initial: &Determinant,
    settings: &MinimizeSettings,
    seed: u64,
) -> Result<VariationalState> {
    let obj = assemble_objective(spec, circuit, initial)?;
    let x0 = initial_params(circuit.n_params(), seed);
    let trace = minimize(&obj.as_fn(), &x0, settings)?;
    let params = trace.final_params().to_vec();
    Ok(VariationalState {
        state: obj.state(&params)?,
        energy: obj.energy(&params)?,
        params,
        trace,
    })
}

/// Best of `restarts` independent [`vqe`] runs seeded `seed`, `seed + 1`, ...
/// by final objective value; ties go to the earliest seed.
pub fn vqe_multistart(
    spec: &ObjectiveSpec,
    circuit: &Circuit,
    initial: &Determinant,
    settings: &MinimizeSettings,
    seed: u64,
    restarts: usize,
) -> Result<VariationalState> {
    if restarts == 0 {
        return Err(Error::invalid("restarts must be at least 1"));
    }
    let runs = (0..restarts)
        .into_par_iter()
        .map(|k| vqe(spec, circuit, initial, settings, seed.wrapping_add(k as u64)))
        .collect::<Result<Vec<_>>>()?;
    Ok(runs
        .into_iter()
        .min_by(|a, b| a.trace.final_value().total_cmp(&b.trace.final_value()))
        .expect("at least one run"))
}

/// VQE for state 0, then state `k` with overlap terms of `overlap_weight`
/// against every converged state `j < k`. State `k` starts from seed `seed + k`.
pub fn prepare_vqd_chain(
    spec: &ObjectiveSpec,
    circuit: &Circuit,
    initial: &Determinant,
    n_states: usize,
    overlap_weight: f64,
    settings: &MinimizeSettings,
    seed: u64,
) -> Result<Vec<VariationalState>> {
    if n_states == 0 {
        return Err(Error::invalid("n_states must be at least 1"));
    }
    let mut out: Vec<VariationalState> = Vec::with_capacity(n_states);
    for k in 0..n_states {
        let mut s = spec.clone();
        for prev in &out {
            s = s.with_overlap(prev.state.clone(), overlap_weight);
        }
        out.push(vqe(&s, circuit, initial, settings, seed.wrapping_add(k as u64))?);
    }
    Ok(out)
}

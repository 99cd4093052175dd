//! Dense state-vector simulation, computational-basis sampling and a
//! Pauli-trajectory noise model.

mod sampling;
mod state;

pub use sampling::{noisy_sample, sample, NoiseModel, SampleCounts};
pub use state::{expectation, expectation_compiled, simulate, StateVector};
pub(crate) use sampling::{rotated, sample_outcomes};

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::determinant::Determinant;
use crate::error::{Error, Result};

/// Largest register the simulator will allocate.
pub const MAX_SIMULATION_QUBITS: usize = 24;

/// One gate; parametrized gates name a slot in the parameter vector.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    X(usize),
    H(usize),
    Sdg(usize),
    /// `exp(−iθY/2)`.
    Ry { qubit: usize, param: usize },
    /// `exp(−iθZ/2)`.
    Rz { qubit: usize, param: usize },
    Cnot { control: usize, target: usize },
    Cz(usize, usize),
    /// Real rotation by `θ` inside `span{|1_a 0_b⟩, |0_a 1_b⟩}`; conserves the
    /// number of set bits.
    Givens { a: usize, b: usize, param: usize },
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::X(q) | Gate::H(q) | Gate::Sdg(q) => vec![q],
            Gate::Ry { qubit, .. } | Gate::Rz { qubit, .. } => vec![qubit],
            Gate::Cnot { control, target } => vec![control, target],
            Gate::Cz(a, b) | Gate::Givens { a, b, .. } => vec![a, b],
        }
    }

    pub fn param(&self) -> Option<usize> {
        match *self {
            Gate::Ry { param, .. } | Gate::Rz { param, .. } | Gate::Givens { param, .. } => Some(param),
            _ => None,
        }
    }
}

/// Gate sequence on a fixed register with contiguous parameter slots.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Circuit {
    n_qubits: usize,
    n_params: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit {
            n_qubits,
            n_params: 0,
            gates: Vec::new(),
        }
    }

    /// Builds and validates: qubit indices in range, distinct operands, and
    /// parameter slots exactly `0..max+1`.
    pub fn from_gates(n_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Circuit::new(n_qubits);
        for g in gates {
            c.push_unchecked_slot(g)?;
        }
        let mut used = vec![false; c.n_params];
        for g in &c.gates {
            if let Some(p) = g.param() {
                used[p] = true;
            }
        }
        if let Some(gap) = used.iter().position(|u| !u) {
            return Err(Error::invalid(format!("parameter slot {gap} is never used")));
        }
        Ok(c)
    }

    fn push_unchecked_slot(&mut self, g: Gate) -> Result<()> {
        let qs = g.qubits();
        if let Some(&q) = qs.iter().find(|&&q| q >= self.n_qubits) {
            return Err(Error::invalid(format!("qubit {q} out of range for {} qubits", self.n_qubits)));
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(Error::invalid(format!("two-qubit gate on repeated qubit {}", qs[0])));
        }
        if let Some(p) = g.param() {
            self.n_params = self.n_params.max(p + 1);
        }
        self.gates.push(g);
        Ok(())
    }

    /// Appends a fixed gate (no parameter).
    pub fn push(&mut self, g: Gate) -> Result<()> {
        if g.param().is_some() {
            return Err(Error::invalid("use push_parametrized for parametrized gates"));
        }
        self.push_unchecked_slot(g)
    }

    /// Appends a parametrized gate bound to a fresh slot, returning it.
    pub fn push_parametrized(&mut self, make: impl FnOnce(usize) -> Gate) -> Result<usize> {
        let slot = self.n_params;
        let g = make(slot);
        if g.param() != Some(slot) {
            return Err(Error::invalid("gate must bind the provided slot"));
        }
        self.push_unchecked_slot(g)?;
        Ok(slot)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub(crate) fn check_binding(&self, params: &[f64], initial: &Determinant) -> Result<()> {
        if params.len() != self.n_params {
            return Err(Error::DimensionMismatch {
                expected: self.n_params,
                found: params.len(),
            });
        }
        if initial.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: initial.n_qubits(),
            });
        }
        if self.n_qubits > MAX_SIMULATION_QUBITS {
            return Err(Error::DimensionCap {
                dimension: self.n_qubits,
                cap: MAX_SIMULATION_QUBITS,
            });
        }
        Ok(())
    }

    /// `qubits N` and `params M` header lines, then one gate per line:
    /// `x q`, `h q`, `sdg q`, `ry q pK`, `rz q pK`, `cnot c t`, `cz a b`,
    /// `givens a b pK`.
    pub fn to_text(&self) -> String {
        let mut out = format!("qubits {}\nparams {}\n", self.n_qubits, self.n_params);
        for g in &self.gates {
            let _ = match *g {
                Gate::X(q) => writeln!(out, "x {q}"),
                Gate::H(q) => writeln!(out, "h {q}"),
                Gate::Sdg(q) => writeln!(out, "sdg {q}"),
                Gate::Ry { qubit, param } => writeln!(out, "ry {qubit} p{param}"),
                Gate::Rz { qubit, param } => writeln!(out, "rz {qubit} p{param}"),
                Gate::Cnot { control, target } => writeln!(out, "cnot {control} {target}"),
                Gate::Cz(a, b) => writeln!(out, "cz {a} {b}"),
                Gate::Givens { a, b, param } => writeln!(out, "givens {a} {b} p{param}"),
            };
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut n_qubits = None;
        let mut n_params = None;
        let mut gates = Vec::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |m: &str| Error::Parse {
                line: k + 1,
                message: format!("{m}: {line:?}"),
            };
            let toks: Vec<&str> = line.split_whitespace().collect();
            let num = |i: usize| -> Result<usize> {
                toks.get(i).and_then(|t| t.parse().ok()).ok_or_else(|| err("expected an integer"))
            };
            let slot = |i: usize| -> Result<usize> {
                toks.get(i)
                    .and_then(|t| t.strip_prefix('p'))
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| err("expected a parameter slot pK"))
            };
            let arity = match toks[0] {
                "qubits" | "params" | "x" | "h" | "sdg" => 2,
                "ry" | "rz" | "cnot" | "cz" => 3,
                "givens" => 4,
                _ => return Err(err("unknown gate")),
            };
            if toks.len() != arity {
                return Err(err("wrong number of fields"));
            }
            match toks[0] {
                "qubits" => n_qubits = Some(num(1)?),
                "params" => n_params = Some(num(1)?),
                "x" => gates.push(Gate::X(num(1)?)),
                "h" => gates.push(Gate::H(num(1)?)),
                "sdg" => gates.push(Gate::Sdg(num(1)?)),
                "ry" => gates.push(Gate::Ry { qubit: num(1)?, param: slot(2)? }),
                "rz" => gates.push(Gate::Rz { qubit: num(1)?, param: slot(2)? }),
                "cnot" => gates.push(Gate::Cnot { control: num(1)?, target: num(2)? }),
                "cz" => gates.push(Gate::Cz(num(1)?, num(2)?)),
                _ => gates.push(Gate::Givens { a: num(1)?, b: num(2)?, param: slot(3)? }),
            }
        }
        let n = n_qubits.ok_or_else(|| Error::invalid("circuit text lacks a `qubits` line"))?;
        let c = Circuit::from_gates(n, gates)?;
        if let Some(m) = n_params {
            if m != c.n_params {
                return Err(Error::invalid(format!("header declares {m} params, gates use {}", c.n_params)));
            }
        }
        Ok(c)
    }
}

/// Initial RY layer, then `depth` repetitions of a CNOT ladder
/// (`q → q + 1`) followed by another RY layer: `n_qubits·(depth + 1)`
/// parameters.
///
/// A CZ ladder looks equivalent but its optimum on the H4 chain sits 4e-2 Ha
/// above the exact energy from every start tried; the CNOT ladder gets within
/// 1e-4.
pub fn ry_ansatz(n_qubits: usize, depth: usize) -> Result<Circuit> {
    if n_qubits < 2 || depth < 1 {
        return Err(Error::invalid(format!("ry_ansatz needs n_qubits ≥ 2 and depth ≥ 1, got {n_qubits}, {depth}")));
    }
    let mut c = Circuit::new(n_qubits);
    let ry_layer = |c: &mut Circuit| -> Result<()> {
        for q in 0..n_qubits {
            c.push_parametrized(|param| Gate::Ry { qubit: q, param })?;
        }
        Ok(())
    };
    ry_layer(&mut c)?;
    for _ in 0..depth {
        for q in 0..n_qubits - 1 {
            c.push(Gate::Cnot {
                control: q,
                target: q + 1,
            })?;
        }
        ry_layer(&mut c)?;
    }
    Ok(c)
}

/// Real, particle-number and `S_z` conserving ansatz on the interleaved
/// spin-orbital register (`2p` α, `2p + 1` β).
///
/// Each layer applies [`Gate::Givens`] between same-spin neighbouring spatial
/// orbitals, first on even then on odd orbital pairs (brick pattern), for α
/// and β separately, then a CZ between `α_p` and `β_p` of every orbital.
/// Layers carry `2·(n_orbitals − 1)` parameters.
pub fn rsp_ansatz(n_qubits: usize, depth: usize) -> Result<Circuit> {
    if n_qubits < 4 || !n_qubits.is_multiple_of(2) || depth < 1 {
        return Err(Error::invalid(format!(
            "rsp_ansatz needs an even n_qubits ≥ 4 and depth ≥ 1, got {n_qubits}, {depth}"
        )));
    }
    let n_orb = n_qubits / 2;
    let mut c = Circuit::new(n_qubits);
    for _ in 0..depth {
        for start in [0, 1] {
            for p in (start..n_orb - 1).step_by(2) {
                for spin in 0..2 {
                    let (a, b) = (2 * p + spin, 2 * p + 2 + spin);
                    c.push_parametrized(|param| Gate::Givens { a, b, param })?;
                }
            }
        }
        for p in 0..n_orb {
            c.push(Gate::Cz(2 * p, 2 * p + 1))?;
        }
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn empty_circuit_keeps_basis_state() {
        let c = Circuit::new(4);
        let d = Determinant::vacuum(4).unwrap();
        let s = simulate(&c, &[], &d).unwrap();
        assert_eq!(s.amplitude(0), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn ry_pi_flips() {
        let c = Circuit::from_gates(1, vec![Gate::Ry { qubit: 0, param: 0 }]).unwrap();
        let s = simulate(&c, &[std::f64::consts::PI], &Determinant::vacuum(1).unwrap()).unwrap();
        assert!((s.amplitude(1).norm() - 1.0).abs() < 1e-15);
        assert!(s.amplitude(0).norm() < 1e-15);
    }

    #[test]
    fn parameter_counts() {
        assert_eq!(ry_ansatz(8, 8).unwrap().n_params(), 72);
        assert_eq!(rsp_ansatz(10, 10).unwrap().n_params(), 80);
        assert!(ry_ansatz(8, 0).is_err());
        assert!(rsp_ansatz(10, 0).is_err());
        assert!(rsp_ansatz(5, 1).is_err());
    }

    #[test]
    fn text_roundtrip() {
        let mut c = rsp_ansatz(6, 2).unwrap();
        c.push(Gate::H(0)).unwrap();
        c.push(Gate::Sdg(1)).unwrap();
        c.push(Gate::Cnot { control: 1, target: 2 }).unwrap();
        assert_eq!(Circuit::from_text(&c.to_text()).unwrap(), c);
        let r = ry_ansatz(3, 1).unwrap();
        assert_eq!(Circuit::from_text(&r.to_text()).unwrap(), r);
    }

    #[test]
    fn validation() {
        assert!(Circuit::from_gates(2, vec![Gate::X(2)]).is_err());
        assert!(Circuit::from_gates(2, vec![Gate::Cz(1, 1)]).is_err());
        assert!(Circuit::from_gates(2, vec![Gate::Ry { qubit: 0, param: 1 }]).is_err());
        let c = ry_ansatz(2, 1).unwrap();
        assert!(simulate(&c, &[0.0; 3], &Determinant::vacuum(2).unwrap()).is_err());
    }

    #[test]
    fn cnot_and_pauli_y() {
        let c = Circuit::from_gates(2, vec![Gate::X(0), Gate::Cnot { control: 0, target: 1 }]).unwrap();
        let s = simulate(&c, &[], &Determinant::vacuum(2).unwrap()).unwrap();
        assert_eq!(s.amplitude(3), Complex64::new(1.0, 0.0));
        let mut t = StateVector::basis(&Determinant::vacuum(1).unwrap()).unwrap();
        t.apply_pauli(0, 2);
        assert_eq!(t.amplitude(1), Complex64::new(0.0, 1.0));
    }
}

use num_complex::Complex64;

use super::{Circuit, Gate, MAX_SIMULATION_QUBITS};
use crate::determinant::Determinant;
use crate::error::{Error, Result};
use crate::qubit::{CompiledOperator, QubitHamiltonian};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Amplitudes `α_x` indexed by the computational basis bitstring `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn basis(d: &Determinant) -> Result<Self> {
        let n = d.n_qubits();
        if n > MAX_SIMULATION_QUBITS {
            return Err(Error::DimensionCap {
                dimension: n,
                cap: MAX_SIMULATION_QUBITS,
            });
        }
        let mut amps = vec![ZERO; 1 << n];
        amps[d.bits() as usize] = ONE;
        Ok(StateVector { n_qubits: n, amps })
    }

    /// Checks the length is a power of two and the norm is one to 1e-10.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::invalid(format!("amplitude vector length {len} is not 2^n with n ≥ 1")));
        }
        let n = len.trailing_zeros() as usize;
        if n > MAX_SIMULATION_QUBITS {
            return Err(Error::DimensionCap {
                dimension: n,
                cap: MAX_SIMULATION_QUBITS,
            });
        }
        let s = StateVector { n_qubits: n, amps };
        let norm = s.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::invalid(format!("state norm {norm} differs from 1")));
        }
        Ok(s)
    }

    /// Embeds real CI coefficients over `dets` into the full register.
    pub fn from_ci(dets: &[Determinant], coeffs: &[f64]) -> Result<Self> {
        let first = dets.first().ok_or_else(|| Error::invalid("empty determinant list"))?;
        if dets.len() != coeffs.len() {
            return Err(Error::DimensionMismatch {
                expected: dets.len(),
                found: coeffs.len(),
            });
        }
        let mut amps = vec![ZERO; 1usize << first.n_qubits()];
        for (d, &c) in dets.iter().zip(coeffs) {
            amps[d.bits() as usize] = Complex64::new(c, 0.0);
        }
        StateVector::from_amplitudes(amps)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, bits: u64) -> Complex64 {
        self.amps[bits as usize]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: other.n_qubits,
            });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// Whether every imaginary part is below `tol`.
    pub fn is_real(&self, tol: f64) -> bool {
        self.amps.iter().all(|a| a.im.abs() < tol)
    }

    /// Basis states with non-zero amplitude.
    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.re != 0.0 || a.im != 0.0)
            .map(|(x, _)| x as u64)
    }

    pub(crate) fn apply_gate(&mut self, gate: &Gate, params: &[f64]) {
        match *gate {
            Gate::X(q) => self.single(q, |a, b| (b, a)),
            Gate::H(q) => {
                let r = std::f64::consts::FRAC_1_SQRT_2;
                self.single(q, |a, b| ((a + b) * r, (a - b) * r))
            }
            Gate::Sdg(q) => self.single(q, |a, b| (a, Complex64::new(b.im, -b.re))),
            Gate::Ry { qubit, param } => {
                let (s, c) = (params[param] / 2.0).sin_cos();
                self.single(qubit, |a, b| (a * c - b * s, a * s + b * c))
            }
            Gate::Rz { qubit, param } => {
                let (s, c) = (params[param] / 2.0).sin_cos();
                let lo = Complex64::new(c, -s);
                let hi = Complex64::new(c, s);
                self.single(qubit, |a, b| (a * lo, b * hi))
            }
            Gate::Cnot { control, target } => {
                let (mc, mt) = (1usize << control, 1usize << target);
                for k in 0..self.amps.len() >> 2 {
                    let i = pair_base(k, control, target) | mc;
                    self.amps.swap(i, i | mt);
                }
            }
            Gate::Cz(a, b) => {
                let m = (1usize << a) | (1usize << b);
                for k in 0..self.amps.len() >> 2 {
                    let i = pair_base(k, a, b) | m;
                    self.amps[i] = -self.amps[i];
                }
            }
            Gate::Givens { a, b, param } => {
                let (s, c) = params[param].sin_cos();
                let (ma, mb) = (1usize << a, 1usize << b);
                for k in 0..self.amps.len() >> 2 {
                    let i = pair_base(k, a, b);
                    let (i10, i01) = (i | ma, i | mb);
                    let (v10, v01) = (self.amps[i10], self.amps[i01]);
                    if v10 == ZERO && v01 == ZERO {
                        continue;
                    }
                    self.amps[i10] = v10 * c - v01 * s;
                    self.amps[i01] = v10 * s + v01 * c;
                }
            }
        }
    }

    /// Applies Pauli `X` (1), `Y` (2) or `Z` (3) to qubit `q`.
    pub(crate) fn apply_pauli(&mut self, q: usize, which: u8) {
        match which {
            1 => self.single(q, |a, b| (b, a)),
            2 => self.single(q, |a, b| (Complex64::new(b.im, -b.re), Complex64::new(-a.im, a.re))),
            3 => self.single(q, |a, b| (a, -b)),
            _ => {}
        }
    }

    fn single(&mut self, q: usize, f: impl Fn(Complex64, Complex64) -> (Complex64, Complex64)) {
        let bit = 1usize << q;
        for chunk in self.amps.chunks_mut(2 * bit) {
            let (lo, hi) = chunk.split_at_mut(bit);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (na, nb) = f(*a, *b);
                *a = na;
                *b = nb;
            }
        }
    }
}

/// The `k`-th index with bits `a` and `b` clear.
#[inline]
fn pair_base(k: usize, a: usize, b: usize) -> usize {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let i = ((k >> lo) << (lo + 1)) | (k & ((1 << lo) - 1));
    ((i >> hi) << (hi + 1)) | (i & ((1 << hi) - 1))
}

/// Runs `c` on the basis state `initial`.
pub fn simulate(c: &Circuit, params: &[f64], initial: &Determinant) -> Result<StateVector> {
    c.check_binding(params, initial)?;
    let mut s = StateVector::basis(initial)?;
    for g in c.gates() {
        s.apply_gate(g, params);
    }
    Ok(s)
}

/// `⟨s|H|s⟩`, rejecting imaginary residues above 1e-8.
pub fn expectation(s: &StateVector, h: &QubitHamiltonian) -> Result<f64> {
    if s.n_qubits() != h.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: h.n_qubits(),
            found: s.n_qubits(),
        });
    }
    expectation_compiled(s, &h.compile())
}

/// As [`expectation`] with a pre-compiled operator.
pub fn expectation_compiled(s: &StateVector, h: &CompiledOperator) -> Result<f64> {
    if s.n_qubits() != h.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: h.n_qubits(),
            found: s.n_qubits(),
        });
    }
    let v = h.expectation(s.amplitudes());
    if v.im.abs() > 1e-8 {
        return Err(Error::NonHermitian { residue: v.im.abs() });
    }
    Ok(v.re)
}

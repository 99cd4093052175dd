use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::determinant::Determinant;
use crate::error::{Error, Result};

/// Single-qubit Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }
}

/// `i^k` for `k mod 4`.
pub(crate) fn i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Tensor product of Pauli letters on `n_qubits` qubits.
///
/// Stored as X and Z masks; a qubit with both bits set carries `Y`. Printed
/// with qubit 0 as the rightmost letter, matching determinant bitstrings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    x: u64,
    z: u64,
    n_qubits: u32,
}

impl PauliString {
    pub fn identity(n_qubits: usize) -> Self {
        PauliString {
            x: 0,
            z: 0,
            n_qubits: n_qubits as u32,
        }
    }

    pub fn from_masks(x: u64, z: u64, n_qubits: usize) -> Result<Self> {
        let mask = if n_qubits >= 64 { u64::MAX } else { (1u64 << n_qubits) - 1 };
        if n_qubits == 0 || n_qubits > 64 || (x | z) & !mask != 0 {
            return Err(Error::invalid(format!("Pauli masks do not fit {n_qubits} qubits")));
        }
        Ok(PauliString {
            x,
            z,
            n_qubits: n_qubits as u32,
        })
    }

    /// Builds from `(qubit, letter)` pairs; unlisted qubits carry `I`.
    pub fn from_letters(n_qubits: usize, letters: &[(usize, Pauli)]) -> Result<Self> {
        let mut p = PauliString::identity(n_qubits);
        for &(q, l) in letters {
            if q >= n_qubits {
                return Err(Error::invalid(format!("qubit {q} out of range for {n_qubits} qubits")));
            }
            let (xb, zb) = l.bits();
            p.x = (p.x & !(1 << q)) | (u64::from(xb) << q);
            p.z = (p.z & !(1 << q)) | (u64::from(zb) << q);
        }
        Ok(p)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits as usize
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    /// Qubits carrying a non-identity letter.
    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn letter(&self, q: usize) -> Pauli {
        match (self.x >> q & 1, self.z >> q & 1) {
            (0, 0) => Pauli::I,
            (1, 0) => Pauli::X,
            (1, 1) => Pauli::Y,
            _ => Pauli::Z,
        }
    }

    #[inline]
    pub(crate) fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    /// `self · other = phase · result`.
    pub fn mul(&self, other: &PauliString) -> (Complex64, PauliString) {
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        let prod = PauliString {
            x,
            z,
            n_qubits: self.n_qubits,
        };
        let k = self.y_count() + other.y_count() + 2 * (self.z & other.x).count_ones() + 4
            - prod.y_count() % 4;
        (i_pow(k), prod)
    }

    /// Whether the two strings commute as operators.
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()).is_multiple_of(2)
    }

    /// Letters agree or one is identity on every qubit.
    pub fn qubit_wise_commutes(&self, other: &PauliString) -> bool {
        let both = self.support() & other.support();
        (self.x ^ other.x) & both == 0 && (self.z ^ other.z) & both == 0
    }

    /// `P|y⟩ = phase · |y ⊕ x_mask⟩`.
    #[inline]
    pub fn apply_to_basis(&self, y: u64) -> (Complex64, u64) {
        let sign = if (self.z & y).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
        (i_pow(self.y_count()) * sign, y ^ self.x)
    }
}

/// `⟨x|P|y⟩`, computed letter by letter.
pub fn pauli_matrix_element(p: &PauliString, x: &Determinant, y: &Determinant) -> Complex64 {
    if p.n_qubits() != x.n_qubits() || x.n_qubits() != y.n_qubits() {
        return Complex64::new(0.0, 0.0);
    }
    let (phase, out) = p.apply_to_basis(y.bits());
    if out == x.bits() {
        phase
    } else {
        Complex64::new(0.0, 0.0)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in (0..self.n_qubits()).rev() {
            write!(f, "{}", self.letter(q).as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let n = s.len();
        let mut letters = Vec::new();
        for (k, ch) in s.chars().enumerate() {
            let l = match ch {
                'I' => Pauli::I,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                _ => return Err(Error::invalid(format!("bad Pauli letter {ch:?} in {s:?}"))),
            };
            letters.push((n - 1 - k, l));
        }
        PauliString::from_letters(n, &letters)
    }
}

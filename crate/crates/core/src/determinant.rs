//! Slater determinants as occupation bitstrings.
//!
//! Spin orbitals are interleaved: qubit `2p` holds the α spin orbital of
//! spatial orbital `p` and qubit `2p + 1` holds β. When printed, qubit 0 is
//! the rightmost character, so `"0011"` is the closed-shell determinant with
//! spatial orbital 0 doubly occupied.
//!
//! The reference sign of a determinant is that of the creation operators
//! applied in ascending spin-orbital order to the vacuum,
//! `a†_{i1} a†_{i2} ... |0⟩` with `i1 < i2 < ...`. This coincides with the
//! Jordan-Wigner phase convention used in [`crate::qubit`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hamiltonian_io::MolecularIntegrals;

pub const MAX_QUBITS: usize = 64;

const ALPHA_MASK: u64 = 0x5555_5555_5555_5555;
const BETA_MASK: u64 = 0xAAAA_AAAA_AAAA_AAAA;

/// Particle-number and spin symmetry sector, `(N_e, 2·S_z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sector {
    pub n_electrons: usize,
    pub two_sz: i32,
}

impl Sector {
    pub fn new(n_electrons: usize, two_sz: i32) -> Self {
        Sector {
            n_electrons,
            two_sz,
        }
    }

    pub fn sz(&self) -> f64 {
        f64::from(self.two_sz) / 2.0
    }

    /// `(N_α, N_β)`, or `None` when the parity of `N_e` and `2S_z` disagree
    /// or a count would be negative.
    pub fn spin_counts(&self) -> Option<(usize, usize)> {
        let n = self.n_electrons as i64;
        let s = i64::from(self.two_sz);
        if (n + s) % 2 != 0 || s.abs() > n {
            return None;
        }
        Some((((n + s) / 2) as usize, ((n - s) / 2) as usize))
    }

    pub fn contains(&self, d: &Determinant) -> bool {
        d.particle_number() == self.n_electrons && d.two_sz() == self.two_sz
    }

    /// All determinants of the sector on `n_orbitals` spatial orbitals, in
    /// ascending bitstring order.
    pub fn determinants(&self, n_orbitals: usize) -> Result<Vec<Determinant>> {
        let (na, nb) = self.spin_counts().ok_or(Error::EmptySector)?;
        if na > n_orbitals || nb > n_orbitals {
            return Err(Error::EmptySector);
        }
        let n_qubits = 2 * n_orbitals;
        if n_qubits > MAX_QUBITS {
            return Err(Error::invalid(format!("{n_qubits} qubits exceeds {MAX_QUBITS}")));
        }
        let alphas = combinations(n_orbitals, na);
        let betas = combinations(n_orbitals, nb);
        let mut out = Vec::with_capacity(alphas.len() * betas.len());
        for &a in &alphas {
            for &b in &betas {
                out.push(Determinant {
                    bits: spread(a) | (spread(b) << 1),
                    n_qubits: n_qubits as u32,
                });
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    pub fn dimension(&self, n_orbitals: usize) -> usize {
        match self.spin_counts() {
            Some((na, nb)) if na <= n_orbitals && nb <= n_orbitals => {
                binomial(n_orbitals, na) * binomial(n_orbitals, nb)
            }
            _ => 0,
        }
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(N_e={}, S_z={})", self.n_electrons, self.sz())
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Bit patterns over `n` positions with `k` bits set, ascending.
fn combinations(n: usize, k: usize) -> Vec<u64> {
    if k > n {
        return Vec::new();
    }
    if k == 0 {
        return vec![0];
    }
    let mut out = Vec::with_capacity(binomial(n, k));
    let mut v: u64 = (1u64 << k) - 1;
    let limit = 1u64 << n;
    while v < limit {
        out.push(v);
        // Gosper's hack
        let t = v | (v - 1);
        let w = (t + 1) | (((!t & (t + 1)) - 1) >> (v.trailing_zeros() + 1));
        if w <= v {
            break;
        }
        v = w;
    }
    out
}

/// Places bit `p` of `x` at position `2p`.
fn spread(x: u64) -> u64 {
    let mut out = 0;
    let mut rest = x;
    while rest != 0 {
        let p = rest.trailing_zeros();
        out |= 1 << (2 * p);
        rest &= rest - 1;
    }
    out
}

/// Occupation bitstring over `n_qubits` spin orbitals.
///
/// Ordering is numeric on the bit pattern, which for equal lengths is the
/// lexicographic order of the printed strings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Determinant {
    bits: u64,
    n_qubits: u32,
}

impl Determinant {
    pub fn new(bits: u64, n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::invalid(format!(
                "determinant length {n_qubits} outside 1..={MAX_QUBITS}"
            )));
        }
        if n_qubits < 64 && bits >> n_qubits != 0 {
            return Err(Error::invalid(format!(
                "bits {bits:#x} do not fit in {n_qubits} qubits"
            )));
        }
        Ok(Determinant {
            bits,
            n_qubits: n_qubits as u32,
        })
    }

    pub fn vacuum(n_qubits: usize) -> Result<Self> {
        Self::new(0, n_qubits)
    }

    pub fn from_occupied(occupied: &[usize], n_qubits: usize) -> Result<Self> {
        let mut bits = 0u64;
        for &b in occupied {
            if b >= n_qubits {
                return Err(Error::invalid(format!(
                    "spin orbital {b} out of range for {n_qubits} qubits"
                )));
            }
            bits |= 1 << b;
        }
        Self::new(bits, n_qubits)
    }

    /// Aufbau determinant of the sector: the lowest `N_α` α and lowest `N_β`
    /// β spin orbitals occupied.
    pub fn hartree_fock(n_orbitals: usize, sector: Sector) -> Result<Self> {
        let (na, nb) = sector.spin_counts().ok_or(Error::EmptySector)?;
        if na > n_orbitals || nb > n_orbitals {
            return Err(Error::EmptySector);
        }
        let bits = spread((1u64 << na) - 1) | (spread((1u64 << nb) - 1) << 1);
        Self::new(bits, 2 * n_orbitals)
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits as usize
    }

    #[inline]
    pub fn is_occupied(&self, b: usize) -> bool {
        b < 64 && self.bits >> b & 1 == 1
    }

    pub fn occupied(&self) -> impl Iterator<Item = usize> + '_ {
        BitIter(self.bits)
    }

    pub fn unoccupied(&self) -> impl Iterator<Item = usize> + '_ {
        BitIter(!self.bits & self.mask())
    }

    fn mask(&self) -> u64 {
        if self.n_qubits == 64 {
            u64::MAX
        } else {
            (1u64 << self.n_qubits) - 1
        }
    }

    #[inline]
    pub fn particle_number(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn n_alpha(&self) -> usize {
        (self.bits & ALPHA_MASK).count_ones() as usize
    }

    pub fn n_beta(&self) -> usize {
        (self.bits & BETA_MASK).count_ones() as usize
    }

    /// `2·S_z = N_α − N_β`.
    pub fn two_sz(&self) -> i32 {
        self.n_alpha() as i32 - self.n_beta() as i32
    }

    pub fn sz(&self) -> f64 {
        f64::from(self.two_sz()) / 2.0
    }

    pub fn sector(&self) -> Sector {
        Sector::new(self.particle_number(), self.two_sz())
    }

    /// Half the number of differing spin orbitals. Only meaningful as an
    /// excitation level when both determinants hold the same particle number.
    pub fn excitation_degree(&self, other: &Determinant) -> Result<usize> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits(),
                found: other.n_qubits(),
            });
        }
        Ok(((self.bits ^ other.bits).count_ones() / 2) as usize)
    }

    pub(crate) fn with_bits(&self, bits: u64) -> Determinant {
        Determinant {
            bits,
            n_qubits: self.n_qubits,
        }
    }

    /// All distinct single and double excitations preserving the particle
    /// number (and `S_z` when `preserve_sz`). Singles come first, ordered by
    /// ascending (hole, particle); doubles follow, ordered by ascending hole
    /// pair then particle pair.
    pub fn connected_determinants(&self, preserve_sz: bool) -> Vec<Determinant> {
        let occ: Vec<usize> = self.occupied().collect();
        let virt: Vec<usize> = self.unoccupied().collect();
        let mut out = Vec::new();
        for &i in &occ {
            for &a in &virt {
                if preserve_sz && (i ^ a) & 1 == 1 {
                    continue;
                }
                out.push(self.with_bits(self.bits ^ (1 << i) ^ (1 << a)));
            }
        }
        for (x, &i) in occ.iter().enumerate() {
            for &j in &occ[x + 1..] {
                for (y, &a) in virt.iter().enumerate() {
                    for &b in &virt[y + 1..] {
                        if preserve_sz && (i & 1) + (j & 1) != (a & 1) + (b & 1) {
                            continue;
                        }
                        out.push(self.with_bits(
                            self.bits ^ (1 << i) ^ (1 << j) ^ (1 << a) ^ (1 << b),
                        ));
                    }
                }
            }
        }
        out
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(b)
    }
}

impl fmt::Display for Determinant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in (0..self.n_qubits()).rev() {
            f.write_str(if self.is_occupied(b) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Determinant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let n = s.len();
        let mut bits = 0u64;
        for (k, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => bits |= 1 << (n - 1 - k),
                _ => return Err(Error::invalid(format!("bad character {ch:?} in bitstring {s:?}"))),
            }
        }
        Determinant::new(bits, n)
    }
}

impl Serialize for Determinant {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Determinant {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Slater-Condon rules

#[inline]
fn below(bits: u64, b: usize) -> u32 {
    (bits & ((1u64 << b) - 1)).count_ones()
}

/// Sign of `a†_a a_i` acting on `bits` (i occupied, a empty).
#[inline]
fn single_phase(bits: u64, i: usize, a: usize) -> f64 {
    let mid = bits ^ (1 << i);
    if (below(bits, i) + below(mid, a)).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Sign of `a†_a a†_b a_j a_i` acting on `bits`.
#[inline]
fn double_phase(bits: u64, i: usize, j: usize, a: usize, b: usize) -> f64 {
    let mut n = below(bits, i);
    let s1 = bits ^ (1 << i);
    n += below(s1, j);
    let s2 = s1 ^ (1 << j);
    n += below(s2, b);
    let s3 = s2 ^ (1 << b);
    n += below(s3, a);
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Spin-orbital integral tables derived from spatial integrals.
struct SpinIntegrals<'a>(&'a MolecularIntegrals);

impl SpinIntegrals<'_> {
    #[inline]
    fn h(&self, p: usize, q: usize) -> f64 {
        if (p ^ q) & 1 == 0 {
            self.0.one_body(p >> 1, q >> 1)
        } else {
            0.0
        }
    }

    /// Physicists' `⟨pq|rs⟩ = (pr|qs)`.
    #[inline]
    fn phys(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        if (p ^ r) & 1 == 0 && (q ^ s) & 1 == 0 {
            self.0.two_body(p >> 1, r >> 1, q >> 1, s >> 1)
        } else {
            0.0
        }
    }

    #[inline]
    fn anti(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        self.phys(p, q, r, s) - self.phys(p, q, s, r)
    }
}

/// `⟨x|Ĥ|y⟩` for the Hamiltonian held by `mol`.
///
/// Determinants must hold the same number of electrons and span
/// `2 · n_orbitals` qubits. The core energy enters only the diagonal.
pub fn slater_condon(x: &Determinant, y: &Determinant, mol: &MolecularIntegrals) -> Result<f64> {
    let nq = 2 * mol.n_orbitals();
    if x.n_qubits() != nq || y.n_qubits() != nq {
        return Err(Error::DimensionMismatch {
            expected: nq,
            found: if x.n_qubits() != nq {
                x.n_qubits()
            } else {
                y.n_qubits()
            },
        });
    }
    if x.particle_number() != y.particle_number() {
        return Err(Error::ParticleNumberMismatch {
            left: x.particle_number(),
            right: y.particle_number(),
        });
    }
    Ok(slater_condon_unchecked(x.bits, y.bits, mol))
}

pub(crate) fn slater_condon_unchecked(x: u64, y: u64, mol: &MolecularIntegrals) -> f64 {
    let diff = x ^ y;
    let ints = SpinIntegrals(mol);
    match diff.count_ones() {
        0 => {
            let occ: Vec<usize> = BitIter(y).collect();
            let mut e = mol.core_energy();
            for (n, &i) in occ.iter().enumerate() {
                e += ints.h(i, i);
                for &j in &occ[n + 1..] {
                    e += ints.anti(i, j, i, j);
                }
            }
            e
        }
        2 => {
            let i = (diff & y).trailing_zeros() as usize;
            let a = (diff & x).trailing_zeros() as usize;
            let mut v = ints.h(a, i);
            for k in BitIter(y & !(1 << i)) {
                v += ints.anti(a, k, i, k);
            }
            single_phase(y, i, a) * v
        }
        4 => {
            let mut holes = BitIter(diff & y);
            let (i, j) = (holes.next().unwrap(), holes.next().unwrap());
            let mut parts = BitIter(diff & x);
            let (a, b) = (parts.next().unwrap(), parts.next().unwrap());
            double_phase(y, i, j, a, b) * ints.anti(a, b, i, j)
        }
        _ => 0.0,
    }
}

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::pauli::PauliString;
use crate::error::{Error, Result};

/// Terms below this magnitude are dropped on normalization.
pub const DROP_TOLERANCE: f64 = 1e-14;

/// `Σ_j c_j P_j` over `n_qubits` qubits.
///
/// Terms are kept sorted by their masks with duplicates merged, so the identity
/// string (when present) is always first.
#[derive(Clone, Debug, PartialEq)]
pub struct QubitHamiltonian {
    n_qubits: usize,
    terms: Vec<(Complex64, PauliString)>,
}

impl QubitHamiltonian {
    pub fn zero(n_qubits: usize) -> Self {
        QubitHamiltonian {
            n_qubits,
            terms: Vec::new(),
        }
    }

    pub fn identity(n_qubits: usize, c: f64) -> Self {
        QubitHamiltonian::from_terms(n_qubits, vec![(Complex64::new(c, 0.0), PauliString::identity(n_qubits))])
            .expect("identity term always fits")
    }

    pub fn from_terms(n_qubits: usize, terms: Vec<(Complex64, PauliString)>) -> Result<Self> {
        for (_, p) in &terms {
            if p.n_qubits() != n_qubits {
                return Err(Error::DimensionMismatch {
                    expected: n_qubits,
                    found: p.n_qubits(),
                });
            }
        }
        Ok(QubitHamiltonian {
            n_qubits,
            terms: normalize(terms),
        })
    }

    pub fn from_real_terms(n_qubits: usize, terms: &[(f64, &str)]) -> Result<Self> {
        let parsed = terms
            .iter()
            .map(|&(c, s)| Ok((Complex64::new(c, 0.0), s.parse::<PauliString>()?)))
            .collect::<Result<Vec<_>>>()?;
        QubitHamiltonian::from_terms(n_qubits, parsed)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[(Complex64, PauliString)] {
        &self.terms
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of the identity string (zero if absent).
    pub fn identity_coefficient(&self) -> Complex64 {
        self.coefficient(&PauliString::identity(self.n_qubits))
    }

    pub fn coefficient(&self, p: &PauliString) -> Complex64 {
        self.terms
            .binary_search_by(|(_, q)| q.cmp(p))
            .map(|k| self.terms[k].0)
            .unwrap_or_default()
    }

    /// `Σ_j |c_j|`.
    pub fn one_norm(&self) -> f64 {
        self.terms.iter().map(|(c, _)| c.norm()).sum()
    }

    /// `Σ_j |c_j|` over non-identity strings.
    pub fn one_norm_without_identity(&self) -> f64 {
        self.terms
            .iter()
            .filter(|(_, p)| !p.is_identity())
            .map(|(c, _)| c.norm())
            .sum()
    }

    /// Every coefficient has imaginary part below `tol`.
    pub fn is_real(&self, tol: f64) -> bool {
        self.terms.iter().all(|(c, _)| c.im.abs() < tol)
    }

    /// Every string is built from `I` and `Z` only.
    pub fn is_diagonal(&self) -> bool {
        self.terms.iter().all(|(_, p)| p.x_mask() == 0)
    }

    pub fn add(&self, other: &QubitHamiltonian) -> Result<QubitHamiltonian> {
        self.check_same(other)?;
        let mut all = self.terms.clone();
        all.extend_from_slice(&other.terms);
        Ok(QubitHamiltonian {
            n_qubits: self.n_qubits,
            terms: normalize(all),
        })
    }

    pub fn scale(&self, s: f64) -> QubitHamiltonian {
        QubitHamiltonian {
            n_qubits: self.n_qubits,
            terms: normalize(self.terms.iter().map(|&(c, p)| (c * s, p)).collect()),
        }
    }

    /// Adds `c·I`.
    pub fn shift(&self, c: f64) -> QubitHamiltonian {
        self.add(&QubitHamiltonian::identity(self.n_qubits, c))
            .expect("same width")
    }

    /// Operator product `self · other`.
    pub fn mul(&self, other: &QubitHamiltonian) -> Result<QubitHamiltonian> {
        self.check_same(other)?;
        let mut all = Vec::with_capacity(self.terms.len() * other.terms.len());
        for &(a, p) in &self.terms {
            for &(b, q) in &other.terms {
                let (ph, r) = p.mul(&q);
                all.push((a * b * ph, r));
            }
        }
        Ok(QubitHamiltonian {
            n_qubits: self.n_qubits,
            terms: normalize(all),
        })
    }

    fn check_same(&self, other: &QubitHamiltonian) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: other.n_qubits,
            });
        }
        Ok(())
    }

    /// Dense `2^n × 2^n` matrix; intended for small systems.
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let dim = 1usize << self.n_qubits;
        let mut m = DMatrix::zeros(dim, dim);
        for &(c, p) in &self.terms {
            for y in 0..dim as u64 {
                let (ph, x) = p.apply_to_basis(y);
                m[(x as usize, y as usize)] += c * ph;
            }
        }
        m
    }

    /// `⟨x|H|y⟩` for computational basis states.
    pub fn matrix_element(&self, x: u64, y: u64) -> Complex64 {
        let flip = x ^ y;
        self.terms
            .iter()
            .filter(|(_, p)| p.x_mask() == flip)
            .map(|&(c, p)| c * p.apply_to_basis(y).0)
            .sum()
    }

    /// Groups the terms by X mask for repeated application to state vectors.
    pub fn compile(&self) -> CompiledOperator {
        CompiledOperator::new(self)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (c, p) in &self.terms {
            if c.im == 0.0 {
                let _ = writeln!(out, "{} {}", c.re, p);
            } else {
                let _ = writeln!(out, "({},{}) {}", c.re, c.im, p);
            }
        }
        out
    }

    /// Parses `coefficient string` lines; blank lines and `#` comments are
    /// skipped. Complex coefficients are written `(re,im)`.
    pub fn from_text(text: &str) -> Result<QubitHamiltonian> {
        let mut terms = Vec::new();
        let mut width = None;
        for (k, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::Parse { line: k + 1, message };
            let mut toks = line.split_whitespace();
            let (Some(c), Some(s), None) = (toks.next(), toks.next(), toks.next()) else {
                return Err(err("expected `coefficient string`".into()));
            };
            let coef = parse_coefficient(c).ok_or_else(|| err(format!("bad coefficient {c:?}")))?;
            let p: PauliString = s.parse().map_err(|e| err(format!("{e}")))?;
            if *width.get_or_insert(p.n_qubits()) != p.n_qubits() {
                return Err(err("Pauli strings of different lengths".into()));
            }
            terms.push((coef, p));
        }
        let n = width.ok_or_else(|| Error::invalid("no Pauli terms found"))?;
        QubitHamiltonian::from_terms(n, terms)
    }

    pub fn write_text(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_text()).map_err(|source| Error::File {
            path: path.to_path_buf(),
            source,
        })
    }
}

fn parse_coefficient(s: &str) -> Option<Complex64> {
    if let Some(inner) = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
        let (re, im) = inner.split_once(',')?;
        return Some(Complex64::new(re.trim().parse().ok()?, im.trim().parse().ok()?));
    }
    Some(Complex64::new(s.parse().ok()?, 0.0))
}

fn normalize(terms: Vec<(Complex64, PauliString)>) -> Vec<(Complex64, PauliString)> {
    let mut acc: BTreeMap<PauliString, Complex64> = BTreeMap::new();
    for (c, p) in terms {
        *acc.entry(p).or_default() += c;
    }
    acc.into_iter()
        .filter(|(_, c)| c.norm() >= DROP_TOLERANCE)
        .map(|(p, c)| (c, p))
        .collect()
}

/// Above this many stored entries, [`CompiledOperator`] applies term by term.
const TABLE_ENTRY_LIMIT: usize = 1 << 25;

/// Terms grouped by X mask; each group acts as `|y⟩ ↦ d(y)|y ⊕ x⟩`.
#[derive(Clone, Debug)]
pub struct CompiledOperator {
    n_qubits: usize,
    groups: Vec<Group>,
}

#[derive(Clone, Debug)]
struct Group {
    x: u64,
    terms: Vec<(Complex64, u64)>,
    table: Option<Vec<Complex64>>,
}

impl Group {
    #[inline]
    fn factor(&self, y: u64) -> Complex64 {
        match &self.table {
            Some(t) => t[y as usize],
            None => self
                .terms
                .iter()
                .map(|&(c, z)| if (z & y).count_ones().is_multiple_of(2) { c } else { -c })
                .sum(),
        }
    }
}

impl CompiledOperator {
    fn new(h: &QubitHamiltonian) -> Self {
        let mut by_x: BTreeMap<u64, Vec<(Complex64, u64)>> = BTreeMap::new();
        for &(c, p) in h.terms() {
            // fold i^{#Y} into the coefficient so only the Z sign depends on y
            let (ph, _) = p.apply_to_basis(0);
            by_x.entry(p.x_mask()).or_default().push((c * ph, p.z_mask()));
        }
        let dim = 1usize << h.n_qubits();
        let tabulate = by_x.len().saturating_mul(dim) <= TABLE_ENTRY_LIMIT;
        let groups = by_x
            .into_iter()
            .map(|(x, terms)| {
                let table = tabulate.then(|| {
                    (0..dim as u64)
                        .into_par_iter()
                        .map(|y| {
                            terms
                                .iter()
                                .map(|&(c, z)| if (z & y).count_ones() % 2 == 0 { c } else { -c })
                                .sum()
                        })
                        .collect()
                });
                Group { x, terms, table }
            })
            .collect();
        CompiledOperator {
            n_qubits: h.n_qubits(),
            groups,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// `out = H ψ`.
    pub fn apply(&self, psi: &[Complex64], out: &mut [Complex64]) {
        out.par_iter_mut().enumerate().for_each(|(xo, o)| {
            let xo = xo as u64;
            let mut acc = Complex64::new(0.0, 0.0);
            for g in &self.groups {
                let y = xo ^ g.x;
                let a = psi[y as usize];
                if a.re != 0.0 || a.im != 0.0 {
                    acc += g.factor(y) * a;
                }
            }
            *o = acc;
        });
    }

    /// `⟨ψ|H|ψ⟩` without normalization.
    pub fn expectation(&self, psi: &[Complex64]) -> Complex64 {
        psi.par_iter()
            .enumerate()
            .map(|(xo, &b)| {
                if b.re == 0.0 && b.im == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                let xo = xo as u64;
                let mut acc = Complex64::new(0.0, 0.0);
                for g in &self.groups {
                    let y = xo ^ g.x;
                    let a = psi[y as usize];
                    if a.re != 0.0 || a.im != 0.0 {
                        acc += g.factor(y) * a;
                    }
                }
                b.conj() * acc
            })
            .sum()
    }
}

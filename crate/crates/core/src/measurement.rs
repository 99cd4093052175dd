//! Conventional expectation-value estimation: qubit-wise commuting groups,
//! variance models and optimal shot allocation.

use rayon::prelude::*;
use serde::Serialize;

use crate::circuit::{rotated, sample_outcomes, Gate, StateVector};
use crate::error::{Error, Result};
use crate::qubit::{Pauli, PauliString, QubitHamiltonian};

/// Terms of a Hamiltonian measurable in one shared product basis.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementGroup {
    /// Indices into [`QubitHamiltonian::terms`].
    pub members: Vec<usize>,
    /// Union of the member letters; identity marks a free qubit.
    pub basis: PauliString,
}

impl MeasurementGroup {
    /// Single-qubit rotations taking the shared basis to Z.
    pub fn rotation(&self) -> Vec<Gate> {
        let mut gates = Vec::new();
        for q in 0..self.basis.n_qubits() {
            match self.basis.letter(q) {
                Pauli::X => gates.push(Gate::H(q)),
                Pauli::Y => {
                    gates.push(Gate::Sdg(q));
                    gates.push(Gate::H(q));
                }
                _ => {}
            }
        }
        gates
    }

    /// Value of the group operator on a measured (rotated) bitstring.
    fn eigenvalue(&self, h: &QubitHamiltonian, y: u64) -> f64 {
        let terms = h.terms();
        self.members
            .iter()
            .map(|&j| {
                let (c, p) = &terms[j];
                if (p.support() & y).count_ones().is_multiple_of(2) {
                    c.re
                } else {
                    -c.re
                }
            })
            .sum()
    }
}

/// Sorted insertion: terms by descending |c| go into the first group they
/// qubit-wise commute with. The identity term is left out.
pub fn qwc_groups(h: &QubitHamiltonian) -> Vec<MeasurementGroup> {
    let terms = h.terms();
    let mut order: Vec<usize> = (0..terms.len()).filter(|&j| !terms[j].1.is_identity()).collect();
    order.sort_by(|&a, &b| terms[b].0.norm().total_cmp(&terms[a].0.norm()));
    let mut groups: Vec<MeasurementGroup> = Vec::new();
    for j in order {
        let p = terms[j].1;
        match groups.iter_mut().find(|g| g.basis.qubit_wise_commutes(&p)) {
            Some(g) => {
                g.members.push(j);
                g.basis = PauliString::from_masks(
                    g.basis.x_mask() | p.x_mask(),
                    g.basis.z_mask() | p.z_mask(),
                    p.n_qubits(),
                )
                .expect("masks stay in range");
            }
            None => groups.push(MeasurementGroup {
                members: vec![j],
                basis: p,
            }),
        }
    }
    groups
}

/// Per-group shot counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShotAllocation {
    pub shots: Vec<u64>,
    pub total: u64,
}

/// `M_l ∝ σ_l`, rounded by largest remainder so the counts sum to `total`.
///
/// A group with positive variance never ends up with zero shots: if rounding
/// leaves one empty it takes a shot from the most over-served group.
pub fn allocate_single(sigmas: &[f64], total: u64) -> Result<ShotAllocation> {
    if sigmas.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
        return Err(Error::invalid("standard deviations must be finite and non-negative"));
    }
    let sum: f64 = sigmas.iter().sum();
    if sum <= 0.0 {
        return Err(Error::invalid("every group has zero variance"));
    }
    let positive = sigmas.iter().filter(|&&s| s > 0.0).count() as u64;
    if total < positive {
        return Err(Error::invalid(format!(
            "{total} shots cannot cover {positive} groups with non-zero variance"
        )));
    }
    let quota: Vec<f64> = sigmas.iter().map(|s| total as f64 * s / sum).collect();
    let mut shots: Vec<u64> = quota.iter().map(|q| q.floor() as u64).collect();
    let assigned: u64 = shots.iter().sum();
    let mut order: Vec<usize> = (0..sigmas.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = quota[a] - quota[a].floor();
        let rb = quota[b] - quota[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    for &l in order.iter().take(total.saturating_sub(assigned) as usize) {
        shots[l] += 1;
    }
    for l in 0..shots.len() {
        if sigmas[l] > 0.0 && shots[l] == 0 {
            let donor = (0..shots.len())
                .filter(|&k| shots[k] > 1)
                .max_by(|&a, &b| (shots[a] as f64 - quota[a]).total_cmp(&(shots[b] as f64 - quota[b])))
                .expect("total covers every positive group");
            shots[donor] -= 1;
            shots[l] = 1;
        }
    }
    Ok(ShotAllocation { shots, total })
}

/// Several observables measured with one set of groups: `M_l ∝ √Σ_i σ_l^(i)²`.
/// `sigmas[i][l]` is observable `i` on group `l`.
pub fn allocate_multi(sigmas: &[Vec<f64>], total: u64) -> Result<ShotAllocation> {
    let n = sigmas.first().map_or(0, Vec::len);
    if sigmas.iter().any(|row| row.len() != n) {
        return Err(Error::invalid("variance rows have different lengths"));
    }
    let norms: Vec<f64> = (0..n)
        .map(|l| sigmas.iter().map(|row| row[l] * row[l]).sum::<f64>().sqrt())
        .collect();
    allocate_single(&norms, total)
}

/// Haar-average proxy: `σ_l = √Σ_j c_j²` over the members of each group.
pub fn haar_sigmas(h: &QubitHamiltonian, groups: &[MeasurementGroup]) -> Vec<f64> {
    let terms = h.terms();
    groups
        .iter()
        .map(|g| g.members.iter().map(|&j| terms[j].0.norm_sqr()).sum::<f64>().sqrt())
        .collect()
}

/// Exact standard deviation of each group operator in `state`.
pub fn exact_sigmas(state: &StateVector, h: &QubitHamiltonian, groups: &[MeasurementGroup]) -> Result<Vec<f64>> {
    check_dims(state, h)?;
    Ok(groups
        .par_iter()
        .map(|g| exact_moments(state, h, g).1.sqrt())
        .collect())
}

/// `Σ_l σ_l² / M_l`, the variance of the grouped estimator.
pub fn predicted_variance(sigmas: &[f64], allocation: &ShotAllocation) -> f64 {
    sigmas
        .iter()
        .zip(&allocation.shots)
        .filter(|(s, _)| **s > 0.0)
        .map(|(s, &m)| if m == 0 { f64::INFINITY } else { s * s / m as f64 })
        .sum()
}

fn check_dims(state: &StateVector, h: &QubitHamiltonian) -> Result<()> {
    if state.n_qubits() != h.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: h.n_qubits(),
            found: state.n_qubits(),
        });
    }
    Ok(())
}

fn exact_moments(state: &StateVector, h: &QubitHamiltonian, g: &MeasurementGroup) -> (f64, f64) {
    let r = rotated(state, &g.rotation());
    let (mut m1, mut m2) = (0.0, 0.0);
    for (y, a) in r.amplitudes().iter().enumerate() {
        let p = a.norm_sqr();
        if p > 0.0 {
            let f = g.eigenvalue(h, y as u64);
            m1 += p * f;
            m2 += p * f * f;
        }
    }
    (m1, (m2 - m1 * m1).max(0.0))
}

/// Seed of the sample stream for group `l`.
fn group_seed(seed: u64, l: usize) -> u64 {
    // splitmix64 finaliser
    let mut z = seed ^ (l as u64).wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Running mean and squared deviation (Welford), exact for constant data.
#[derive(Clone, Copy, Debug, Default)]
struct Tally {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Tally {
    fn push(mut self, x: f64) -> Tally {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
        self
    }

    fn merge(self, o: Tally) -> Tally {
        if self.n == 0 {
            return o;
        }
        if o.n == 0 {
            return self;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        Tally {
            n,
            mean: self.mean + d * o.n as f64 / n as f64,
            m2: self.m2 + o.m2 + d * d * (self.n as f64 * o.n as f64 / n as f64),
        }
    }

    fn sample_variance(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        self.m2.max(0.0) / (self.n - 1) as f64
    }
}

fn sample_group(state: &StateVector, h: &QubitHamiltonian, g: &MeasurementGroup, shots: u64, seed: u64) -> Tally {
    let r = rotated(state, &g.rotation());
    sample_outcomes(&r, shots, seed)
        .into_iter()
        .fold(Tally::default(), |t, y| t.push(g.eigenvalue(h, y)))
}

/// Estimate with its standard error and the per-group shot counts used.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SamplingEstimate {
    pub estimate: f64,
    pub standard_error: f64,
    pub shots: Vec<u64>,
}

fn combine(
    state: &StateVector,
    h: &QubitHamiltonian,
    groups: &[MeasurementGroup],
    tallies: &[Tally],
) -> Result<SamplingEstimate> {
    let mut estimate = h.identity_coefficient().re;
    let mut var = 0.0;
    for (g, t) in groups.iter().zip(tallies) {
        if t.n == 0 {
            // without shots only a group the state is an eigenstate of has a value
            let (mean, v) = exact_moments(state, h, g);
            if v > 1e-12 {
                return Err(Error::invalid(format!(
                    "group with basis {} has non-zero variance but no shots",
                    g.basis
                )));
            }
            estimate += mean;
        } else {
            estimate += t.mean;
            var += t.sample_variance() / t.n as f64;
        }
    }
    Ok(SamplingEstimate {
        estimate,
        standard_error: var.sqrt(),
        shots: tallies.iter().map(|t| t.n).collect(),
    })
}

/// Samples every group in its rotated basis and sums the group means plus
/// the identity coefficient.
pub fn estimate_sampling(
    state: &StateVector,
    h: &QubitHamiltonian,
    groups: &[MeasurementGroup],
    allocation: &ShotAllocation,
    seed: u64,
) -> Result<SamplingEstimate> {
    check_dims(state, h)?;
    if allocation.shots.len() != groups.len() {
        return Err(Error::DimensionMismatch {
            expected: groups.len(),
            found: allocation.shots.len(),
        });
    }
    let tallies: Vec<Tally> = groups
        .par_iter()
        .zip(&allocation.shots)
        .enumerate()
        .map(|(l, (g, &m))| sample_group(state, h, g, m, group_seed(seed, l)))
        .collect();
    combine(state, h, groups, &tallies)
}

/// Spends `first_fraction` of the budget on a Haar-proxy allocation, then
/// reallocates the rest from the sampled group variances. Shots from both
/// rounds are pooled.
pub fn estimate_two_round(
    state: &StateVector,
    h: &QubitHamiltonian,
    groups: &[MeasurementGroup],
    total: u64,
    first_fraction: f64,
    seed: u64,
) -> Result<SamplingEstimate> {
    check_dims(state, h)?;
    if !(first_fraction > 0.0 && first_fraction < 1.0) {
        return Err(Error::invalid("first-round fraction must lie in (0, 1)"));
    }
    if groups.is_empty() {
        return combine(state, h, groups, &[]);
    }
    let first = ((total as f64 * first_fraction).round() as u64).max(1);
    let a1 = allocate_single(&haar_sigmas(h, groups), first)?;
    let t1: Vec<Tally> = groups
        .par_iter()
        .zip(&a1.shots)
        .enumerate()
        .map(|(l, (g, &m))| sample_group(state, h, g, m, group_seed(seed, l)))
        .collect();
    let sigmas: Vec<f64> = t1.iter().map(|t| t.sample_variance().sqrt()).collect();
    let rest = total.saturating_sub(first);
    let a2 = if rest == 0 || sigmas.iter().all(|&s| s == 0.0) {
        ShotAllocation {
            shots: vec![0; groups.len()],
            total: 0,
        }
    } else {
        allocate_single(&sigmas, rest)?
    };
    let second_seed = group_seed(seed, usize::MAX);
    let tallies: Vec<Tally> = groups
        .par_iter()
        .zip(&a2.shots)
        .enumerate()
        .map(|(l, (g, &m))| t1[l].merge(sample_group(state, h, g, m, group_seed(second_seed, l))))
        .collect();
    combine(state, h, groups, &tallies)
}

/// One row of a grouping report.
#[derive(Clone, Debug, Serialize)]
pub struct GroupReport {
    pub basis: String,
    pub terms: Vec<String>,
    pub sigma: f64,
    pub shots: u64,
}

/// Groups with their terms, standard deviations and shot counts, for JSON output.
pub fn group_report(
    h: &QubitHamiltonian,
    groups: &[MeasurementGroup],
    sigmas: &[f64],
    allocation: &ShotAllocation,
) -> Vec<GroupReport> {
    groups
        .iter()
        .zip(sigmas)
        .zip(&allocation.shots)
        .map(|((g, &sigma), &shots)| GroupReport {
            basis: g.basis.to_string(),
            terms: g.members.iter().map(|&j| h.terms()[j].1.to_string()).collect(),
            sigma,
            shots,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grouping_examples() {
        let h = QubitHamiltonian::from_real_terms(2, &[(1.0, "IZ"), (0.5, "ZZ")]).unwrap();
        assert_eq!(qwc_groups(&h).len(), 1);
        let h = QubitHamiltonian::from_real_terms(1, &[(1.0, "X"), (0.5, "Z")]).unwrap();
        assert_eq!(qwc_groups(&h).len(), 2);
    }

    #[test]
    fn allocation_examples() {
        assert_eq!(allocate_single(&[1.0, 1.0], 100).unwrap().shots, vec![50, 50]);
        assert_eq!(allocate_single(&[3.0, 1.0], 100).unwrap().shots, vec![75, 25]);
        assert_eq!(allocate_single(&[1.0, 0.0], 10).unwrap().shots, vec![10, 0]);
        assert!(allocate_single(&[0.0, 0.0], 10).is_err());
        let m = allocate_multi(&[vec![3.0, 0.0], vec![4.0, 0.0]], 10).unwrap();
        assert_eq!(m.shots, vec![10, 0]);
    }

    #[test]
    fn identity_only_is_exact() {
        let h = QubitHamiltonian::identity(2, -1.25);
        let s = StateVector::from_amplitudes(vec![
            num_complex::Complex64::new(0.5, 0.0);
            4
        ])
        .unwrap();
        let r = estimate_sampling(&s, &h, &qwc_groups(&h), &ShotAllocation { shots: vec![], total: 0 }, 1).unwrap();
        assert_eq!(r.estimate, -1.25);
        assert_eq!(r.standard_error, 0.0);
    }

    #[test]
    fn y_rotation_measures_y() {
        // (|0⟩ + i|1⟩)/√2 is the +1 eigenstate of Y
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let s = StateVector::from_amplitudes(vec![
            num_complex::Complex64::new(r, 0.0),
            num_complex::Complex64::new(0.0, r),
        ])
        .unwrap();
        let h = QubitHamiltonian::from_real_terms(1, &[(2.0, "Y")]).unwrap();
        let g = qwc_groups(&h);
        let est = estimate_sampling(&s, &h, &g, &allocate_single(&[1.0], 50).unwrap(), 3).unwrap();
        assert!((est.estimate - 2.0).abs() < 1e-12);
    }
}

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::state::StateVector;
use super::{Circuit, Gate};
use crate::determinant::Determinant;
use crate::error::{Error, Result};

/// Generator for shot `shot` of a run seeded with `seed`. Every shot owns a
/// ChaCha stream, so results do not depend on how shots are scheduled.
pub(crate) fn shot_rng(seed: u64, shot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot);
    rng
}

/// Per-gate depolarizing and readout bit-flip rates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    /// Depolarizing rate after each single-qubit gate.
    pub p1: f64,
    /// Two-qubit gate infidelity; each operand depolarizes with `1 − √(1 − p2)`.
    pub p2: f64,
    /// Readout bit-flip probability per qubit.
    pub p_ro: f64,
}

impl NoiseModel {
    pub fn noiseless() -> Self {
        NoiseModel {
            p1: 0.0,
            p2: 0.0,
            p_ro: 0.0,
        }
    }

    /// Trapped-ion device fidelities 99.61% (1q), 96.868% (2q), 99.824% (readout).
    pub fn device() -> Self {
        NoiseModel {
            p1: 1.0 - 0.9961,
            p2: 1.0 - 0.96868,
            p_ro: 1.0 - 0.99824,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [("p1", self.p1), ("p2", self.p2), ("p_ro", self.p_ro)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::invalid(format!("noise rate {name} = {p} outside [0, 1]")));
            }
        }
        Ok(())
    }

    pub fn two_qubit_rate(&self) -> f64 {
        1.0 - (1.0 - self.p2).sqrt()
    }

    pub fn is_noiseless(&self) -> bool {
        self.p1 == 0.0 && self.p2 == 0.0 && self.p_ro == 0.0
    }
}

/// Occurrence counts of measured bitstrings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleCounts {
    n_qubits: usize,
    counts: BTreeMap<u64, u64>,
}

impl SampleCounts {
    pub fn new(n_qubits: usize) -> Self {
        SampleCounts {
            n_qubits,
            counts: BTreeMap::new(),
        }
    }

    pub fn from_pairs(n_qubits: usize, pairs: &[(&str, u64)]) -> Result<Self> {
        let mut c = SampleCounts::new(n_qubits);
        for &(s, k) in pairs {
            let d: Determinant = s.parse()?;
            if d.n_qubits() != n_qubits {
                return Err(Error::DimensionMismatch {
                    expected: n_qubits,
                    found: d.n_qubits(),
                });
            }
            c.add(d.bits(), k);
        }
        Ok(c)
    }

    pub fn add(&mut self, bits: u64, k: u64) {
        if k > 0 {
            *self.counts.entry(bits).or_default() += k;
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn total_shots(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn count(&self, bits: u64) -> u64 {
        self.counts.get(&bits).copied().unwrap_or(0)
    }

    pub fn n_distinct(&self) -> usize {
        self.counts.len()
    }

    /// `(determinant, count)` in ascending bitstring order.
    pub fn iter(&self) -> impl Iterator<Item = (Determinant, u64)> + '_ {
        let n = self.n_qubits;
        self.counts
            .iter()
            .map(move |(&b, &k)| (Determinant::new(b, n).expect("stored bits fit"), k))
    }

    /// `{bitstring: count}`.
    pub fn to_json(&self) -> String {
        let map: serde_json::Map<String, serde_json::Value> = self
            .iter()
            .map(|(d, k)| (d.to_string(), serde_json::Value::from(k)))
            .collect();
        serde_json::to_string_pretty(&map).expect("plain map serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let map: BTreeMap<String, u64> = serde_json::from_str(text)?;
        let n = map
            .keys()
            .next()
            .map(|k| k.len())
            .ok_or_else(|| Error::invalid("empty counts"))?;
        let pairs: Vec<(&str, u64)> = map.iter().map(|(k, &v)| (k.as_str(), v)).collect();
        SampleCounts::from_pairs(n, &pairs)
    }
}

fn cumulative(s: &StateVector) -> Vec<f64> {
    let mut acc = 0.0;
    s.amplitudes()
        .iter()
        .map(|a| {
            acc += a.norm_sqr();
            acc
        })
        .collect()
}

fn draw(cdf: &[f64], u: f64) -> u64 {
    let target = u * cdf[cdf.len() - 1];
    let k = cdf.partition_point(|&c| c <= target);
    // never return a zero-probability tail entry
    let mut k = k.min(cdf.len() - 1);
    while k > 0 && cdf[k] == cdf[k - 1] {
        k -= 1;
    }
    k as u64
}

/// `n_shots` i.i.d. draws from `|α_x|²`; shot `i` uses stream `i` of `seed`.
pub fn sample(s: &StateVector, n_shots: u64, seed: u64) -> Result<SampleCounts> {
    if n_shots == 0 {
        return Err(Error::invalid("n_shots must be at least 1"));
    }
    let cdf = cumulative(s);
    let outcomes: Vec<u64> = (0..n_shots)
        .into_par_iter()
        .map(|shot| {
            let mut rng = shot_rng(seed, shot);
            draw(&cdf, rng.random::<f64>())
        })
        .collect();
    Ok(tally(s.n_qubits(), outcomes))
}

fn tally(n_qubits: usize, outcomes: Vec<u64>) -> SampleCounts {
    let mut c = SampleCounts::new(n_qubits);
    for o in outcomes {
        c.add(o, 1);
    }
    c
}

/// Returns `1..=3` (X, Y, Z) with probability `p`, else `0`. Draws nothing
/// when `p = 0`.
fn depolarize(rng: &mut ChaCha8Rng, p: f64) -> u8 {
    if p > 0.0 && rng.random::<f64>() < p {
        1 + rng.random_range(0..3u8)
    } else {
        0
    }
}

/// Noisy sampling by Pauli trajectories.
///
/// The initial basis state is prepared exactly. After every gate each operand
/// suffers a uniformly chosen X, Y or Z with rate `p1` (single-qubit gates)
/// or `1 − √(1 − p2)` (two-qubit gates). The final state is measured once and
/// each bit flipped with probability `p_ro`. With all rates zero the draws
/// coincide with [`sample`] on the simulated state.
pub fn noisy_sample(
    c: &Circuit,
    params: &[f64],
    initial: &Determinant,
    noise: &NoiseModel,
    n_shots: u64,
    seed: u64,
) -> Result<SampleCounts> {
    noise.validate()?;
    if n_shots == 0 {
        return Err(Error::invalid("n_shots must be at least 1"));
    }
    c.check_binding(params, initial)?;
    let n = c.n_qubits();

    // noiseless states after each gate, reused up to a trajectory's first error
    let mut prefix = Vec::with_capacity(c.gates().len() + 1);
    let mut s = StateVector::basis(initial)?;
    prefix.push(s.clone());
    let cache = (c.gates().len() + 1) << n <= 1 << 24;
    for g in c.gates() {
        s.apply_gate(g, params);
        if cache {
            prefix.push(s.clone());
        }
    }
    let clean_cdf = cumulative(&s);
    let p2q = noise.two_qubit_rate();

    let outcomes: Vec<u64> = (0..n_shots)
        .into_par_iter()
        .map(|shot| {
            let mut rng = shot_rng(seed, shot);
            let mut events: Vec<(usize, usize, u8)> = Vec::new();
            for (k, g) in c.gates().iter().enumerate() {
                let qs = g.qubits();
                let p = if qs.len() == 1 { noise.p1 } else { p2q };
                for q in qs {
                    let e = depolarize(&mut rng, p);
                    if e != 0 {
                        events.push((k, q, e));
                    }
                }
            }
            let u = rng.random::<f64>();
            let mut x = if events.is_empty() {
                draw(&clean_cdf, u)
            } else {
                let first = events[0].0;
                let mut st = if cache {
                    prefix[first + 1].clone()
                } else {
                    let mut st = prefix[0].clone();
                    for g in &c.gates()[..=first] {
                        st.apply_gate(g, params);
                    }
                    st
                };
                let mut next = 0;
                for k in first..c.gates().len() {
                    if k > first {
                        st.apply_gate(&c.gates()[k], params);
                    }
                    while next < events.len() && events[next].0 == k {
                        st.apply_pauli(events[next].1, events[next].2);
                        next += 1;
                    }
                }
                draw(&cumulative(&st), u)
            };
            if noise.p_ro > 0.0 {
                for q in 0..n {
                    if rng.random::<f64>() < noise.p_ro {
                        x ^= 1 << q;
                    }
                }
            }
            x
        })
        .collect();
    Ok(tally(n, outcomes))
}

/// Applies `gates` to a copy of `s` (used for measurement-basis rotations).
pub(crate) fn rotated(s: &StateVector, gates: &[Gate]) -> StateVector {
    let mut t = s.clone();
    for g in gates {
        t.apply_gate(g, &[]);
    }
    t
}

/// Draws `n_shots` outcomes of `s` on the streams of `seed`.
pub(crate) fn sample_outcomes(s: &StateVector, n_shots: u64, seed: u64) -> Vec<u64> {
    let cdf = cumulative(s);
    (0..n_shots)
        .into_par_iter()
        .map(|shot| draw(&cdf, shot_rng(seed, shot).random::<f64>()))
        .collect()
}

use serde::{Deserialize, Serialize};

use crate::circuit::{SampleCounts, StateVector};
use crate::determinant::{Determinant, Sector};
use crate::error::{Error, Result};

/// Ranked configurations with the frequencies they were ranked by.
///
/// Sampled selections carry raw counts with `total` the number of shots
/// before post-selection; idealized selections carry probabilities with a
/// nominal total of 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelectionResult {
    pub configs: Vec<Determinant>,
    pub frequencies: Vec<f64>,
    pub total: f64,
    pub discarded_by_postselect: u64,
    /// Size asked for, when the selection was rank-limited.
    pub requested: Option<usize>,
}

impl SelectionResult {
    /// Wraps an explicit configuration list (all frequencies 1).
    pub fn from_configs(configs: Vec<Determinant>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        if let Some(d) = configs.iter().find(|d| !seen.insert(d.bits())) {
            return Err(Error::invalid(format!("configuration {d} listed twice")));
        }
        let n = configs.len();
        Ok(SelectionResult {
            configs,
            frequencies: vec![1.0; n],
            total: n as f64,
            discarded_by_postselect: 0,
            requested: None,
        })
    }

    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    /// `requested − len` when fewer configurations than asked were available.
    pub fn shortfall(&self) -> usize {
        self.requested.map_or(0, |r| r.saturating_sub(self.len()))
    }

    /// The first `r` configurations.
    pub fn truncated(&self, r: usize) -> SelectionResult {
        let k = r.min(self.len());
        SelectionResult {
            configs: self.configs[..k].to_vec(),
            frequencies: self.frequencies[..k].to_vec(),
            total: self.total,
            discarded_by_postselect: self.discarded_by_postselect,
            requested: Some(r),
        }
    }
}

/// Descending frequency, ascending bitstring on ties.
fn rank(mut items: Vec<(Determinant, f64)>) -> Vec<(Determinant, f64)> {
    items.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    items
}

fn post_select(counts: &SampleCounts, filter: Option<Sector>) -> (Vec<(Determinant, f64)>, u64) {
    let mut kept = Vec::new();
    let mut discarded = 0;
    for (d, k) in counts.iter() {
        if filter.is_none_or(|s| s.contains(&d)) {
            kept.push((d, k as f64));
        } else {
            discarded += k;
        }
    }
    (kept, discarded)
}

fn build(ranked: Vec<(Determinant, f64)>, total: f64, discarded: u64, requested: Option<usize>) -> SelectionResult {
    let (configs, frequencies) = ranked.into_iter().unzip();
    SelectionResult {
        configs,
        frequencies,
        total,
        discarded_by_postselect: discarded,
        requested,
    }
}

/// The `r` most frequent outcomes surviving `filter`.
pub fn select_top_r(counts: &SampleCounts, r: usize, filter: Option<Sector>) -> Result<SelectionResult> {
    if r < 1 {
        return Err(Error::invalid("r must be at least 1"));
    }
    let (kept, discarded) = post_select(counts, filter);
    let mut ranked = rank(kept);
    ranked.truncate(r);
    Ok(build(ranked, counts.total_shots() as f64, discarded, Some(r)))
}

/// Outcomes with rate `count / total_shots ≥ epsilon`; the rate uses the
/// shot total before post-selection.
pub fn select_by_threshold(counts: &SampleCounts, epsilon: f64, filter: Option<Sector>) -> Result<SelectionResult> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::invalid(format!("epsilon {epsilon} outside (0, 1]")));
    }
    let total = counts.total_shots() as f64;
    let (kept, discarded) = post_select(counts, filter);
    let ranked = rank(kept.into_iter().filter(|&(_, k)| k / total >= epsilon).collect());
    Ok(build(ranked, total, discarded, None))
}

/// Every observed outcome surviving `filter`.
pub fn select_all(counts: &SampleCounts, filter: Option<Sector>) -> SelectionResult {
    let (kept, discarded) = post_select(counts, filter);
    build(rank(kept), counts.total_shots() as f64, discarded, None)
}

/// The `r` basis states of largest `|α_x|` among those passing `filter`,
/// including zero-amplitude ones so that `r` can cover a whole sector.
pub fn idealized_top_r(state: &StateVector, r: usize, filter: Option<Sector>) -> Result<SelectionResult> {
    if r < 1 {
        return Err(Error::invalid("r must be at least 1"));
    }
    let n = state.n_qubits();
    let items: Vec<(Determinant, f64)> = state
        .amplitudes()
        .iter()
        .enumerate()
        .filter_map(|(x, a)| {
            let d = Determinant::new(x as u64, n).expect("index fits register");
            filter.is_none_or(|s| s.contains(&d)).then(|| (d, a.norm_sqr()))
        })
        .collect();
    let mut ranked = rank(items);
    ranked.truncate(r);
    Ok(build(ranked, 1.0, 0, Some(r)))
}

/// How per-state selections are combined into one subspace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MergeStrategy {
    /// State 0's list in rank order, then new configurations of state 1, and
    /// so on.
    ConcatenateByRank,
    /// Cycle `c` offers each state's `c`-th configuration in state order; a
    /// state whose offer is already present loses its turn.
    RoundRobin,
}

/// Union of `selections` truncated to `r` distinct configurations.
pub fn merge_subspaces(selections: &[SelectionResult], r: usize, strategy: MergeStrategy) -> Result<SelectionResult> {
    if r < 1 {
        return Err(Error::invalid("r must be at least 1"));
    }
    let mut seen = std::collections::HashSet::new();
    let mut out: Vec<(Determinant, f64)> = Vec::new();
    let mut offer = |d: Determinant, f: f64, out: &mut Vec<(Determinant, f64)>| {
        if out.len() < r && seen.insert(d.bits()) {
            out.push((d, f));
        }
    };
    // rates so that frequencies stay comparable across differently sampled inputs
    let rate = |s: &SelectionResult, k: usize| s.frequencies[k] / s.total.max(f64::MIN_POSITIVE);
    match strategy {
        MergeStrategy::ConcatenateByRank => {
            for s in selections {
                for k in 0..s.len() {
                    offer(s.configs[k], rate(s, k), &mut out);
                }
            }
        }
        MergeStrategy::RoundRobin => {
            let longest = selections.iter().map(SelectionResult::len).max().unwrap_or(0);
            for c in 0..longest {
                for s in selections {
                    if c < s.len() {
                        offer(s.configs[c], rate(s, c), &mut out);
                    }
                }
            }
        }
    }
    if out.is_empty() {
        return Err(Error::EmptySelection {
            discarded: selections.iter().map(|s| s.discarded_by_postselect).sum(),
        });
    }
    let discarded = selections.iter().map(|s| s.discarded_by_postselect).sum();
    Ok(build(out, 1.0, discarded, Some(r)))
}

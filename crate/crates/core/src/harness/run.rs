//! Runs one config end to end and writes its result files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::config::{AnsatzKind, AnsatzSpec, ExperimentConfig, InputKind, Kind, Scheme};
use super::studies::{
    min_r_for_tolerance, noisy_demo, observable_suite, qwc_trials, sampling_trials, vqe_history, AllocationModel,
};
use crate::asci::asci_run;
use crate::circuit::{rsp_ansatz, ry_ansatz, sample, Circuit, NoiseModel, SampleCounts, StateVector};
use crate::determinant::{slater_condon, Determinant, Sector};
use crate::error::{Error, Result};
use crate::hamiltonian_io::{casci_dense, freeze_core, read_fcidump, Casci, MolecularIntegrals};
use crate::measurement::{allocate_single, exact_sigmas, group_report, haar_sigmas, qwc_groups};
use crate::qubit::jordan_wigner;
use crate::sci::{
    qsci_from_selection, qsci_sequential, qsci_single_diag, Betas, InputSource, MergeStrategy, SelectionResult,
};
use crate::variational::{prepare_vqd_chain, vqe_multistart, MinimizeSettings, ObjectiveSpec, VariationalState};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Slack for the write-time variational check, Hartree.
pub const BOUND_TOLERANCE: f64 = 1e-10;

/// An energy that must not lie below `bound`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundCheck {
    pub label: String,
    pub energy: f64,
    pub bound: f64,
}

/// Everything a run produces, before it touches the disk.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub kind: Kind,
    pub result: Value,
    /// `(file name, body)`, header line not yet added.
    pub tables: Vec<(String, String)>,
    pub checks: Vec<BoundCheck>,
}

impl Report {
    fn new(kind: Kind, result: impl Serialize) -> Result<Self> {
        Ok(Report {
            kind,
            result: serde_json::to_value(result)?,
            tables: Vec::new(),
            checks: Vec::new(),
        })
    }

    fn table(mut self, name: &str, body: String) -> Self {
        self.tables.push((name.to_string(), body));
        self
    }

    fn check(&mut self, label: impl Into<String>, energy: f64, bound: f64) {
        self.checks.push(BoundCheck {
            label: label.into(),
            energy,
            bound,
        });
    }

    /// First energy below its bound, as an error.
    pub fn verify(&self) -> Result<()> {
        match self.checks.iter().find(|c| c.energy < c.bound - BOUND_TOLERANCE) {
            Some(c) => Err(Error::VariationalViolation {
                energy: c.energy,
                bound: c.bound,
            }),
            None => Ok(()),
        }
    }
}

/// Files written by [`run_experiment`].
#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput {
    pub directory: PathBuf,
    pub files: Vec<PathBuf>,
}

/// Validates, evaluates, checks every emitted energy against its exact
/// bound and writes `<kind>.json` plus any CSV tables into `out_dir` (or the
/// config's `output_dir`). Nothing is written when a check fails.
pub fn run_experiment(cfg: &ExperimentConfig, out_dir: Option<&Path>) -> Result<RunOutput> {
    cfg.validate()?;
    let directory = match (out_dir, &cfg.output_dir) {
        (Some(d), _) => d.to_path_buf(),
        (None, Some(d)) => cfg.resolve(d),
        (None, None) => return Err(Error::config("output_dir", "missing and no --out given")),
    };
    let report = evaluate(cfg)?;
    report.verify()?;

    let hash = cfg.hash();
    let seed = cfg.seed.map_or_else(|| "none".to_string(), |s| s.to_string());
    std::fs::create_dir_all(&directory).map_err(|source| Error::File {
        path: directory.clone(),
        source,
    })?;
    let mut files = Vec::new();
    let doc = json!({
        "meta": {
            "config_hash": hash,
            "seed": cfg.seed,
            "version": VERSION,
            "kind": report.kind,
        },
        "result": report.result,
    });
    let mut body = serde_json::to_string_pretty(&doc)?;
    body.push('\n');
    files.push(write(&directory, &format!("{}.json", report.kind), &body)?);
    for (name, table) in &report.tables {
        let body = format!("# config_hash={hash} seed={seed} version={VERSION}\n{table}");
        files.push(write(&directory, name, &body)?);
    }
    Ok(RunOutput { directory, files })
}

fn write(dir: &Path, name: &str, body: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    std::fs::write(&path, body).map_err(|source| Error::File {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

/// Runs the computation a config describes without writing anything.
pub fn evaluate(cfg: &ExperimentConfig) -> Result<Report> {
    let kind = cfg.kind()?;
    let mol = cfg.load_molecule()?;
    let sector = cfg.sector_for(&mol);
    match kind {
        Kind::ParseCheck => parse_check(&mol, sector),
        Kind::Casci => run_casci(cfg, &mol, sector),
        Kind::QsciGround => run_qsci_ground(cfg, &mol, sector),
        Kind::QsciExcited => run_qsci_excited(cfg, &mol, sector),
        Kind::Vqe => run_vqe(cfg, &mol, sector),
        Kind::Vqd => run_vqd(cfg, &mol, sector),
        Kind::Scaling => run_scaling(cfg, &mol, sector),
        Kind::SamplingTrials => run_sampling_trials(cfg, &mol, sector),
        Kind::NoisyDemo => run_noisy_demo(cfg, &mol, sector),
        Kind::QwcEstimate => run_qwc(cfg, &mol, sector),
        Kind::Asci => run_asci(cfg, &mol, sector),
        Kind::Observables => run_observables(cfg, &mol, sector),
    }
}

fn seed(cfg: &ExperimentConfig) -> u64 {
    // validate() has already insisted on a seed where one is needed
    cfg.seed.unwrap_or(0)
}

fn need<T: Copy>(v: Option<T>, field: &str) -> Result<T> {
    v.ok_or_else(|| Error::config(field, "required for this kind"))
}

fn r_list(cfg: &ExperimentConfig) -> Result<Vec<usize>> {
    match (&cfg.r_values, cfg.r) {
        (Some(rs), _) => Ok(rs.clone()),
        (None, Some(r)) => Ok(vec![r]),
        (None, None) => Err(Error::config("r", "required for this kind (or give r_values)")),
    }
}

fn exact(mol: &MolecularIntegrals, sector: Sector) -> Result<Casci> {
    casci_dense(mol, sector.n_electrons, sector.two_sz)
}

/// Lowest energy over every `(N_e, S_z)` sector: the bound for outputs that
/// were not post-selected.
fn fock_minimum(mol: &MolecularIntegrals) -> Result<f64> {
    let n = mol.n_orbitals();
    let sectors: Vec<Sector> = (0..=n)
        .flat_map(|na| (0..=n).map(move |nb| Sector::new(na + nb, na as i32 - nb as i32)))
        .collect();
    let lows = sectors
        .par_iter()
        .map(|s| Ok(exact(mol, *s)?.ground_energy()))
        .collect::<Result<Vec<f64>>>()?;
    Ok(lows.into_iter().fold(f64::INFINITY, f64::min))
}

fn post_select(cfg: &ExperimentConfig) -> bool {
    cfg.post_select.unwrap_or(true)
}

fn ground_bound(cfg: &ExperimentConfig, mol: &MolecularIntegrals, sector_exact: f64) -> Result<f64> {
    if post_select(cfg) {
        Ok(sector_exact)
    } else {
        fock_minimum(mol)
    }
}

fn settings(cfg: &ExperimentConfig) -> MinimizeSettings {
    MinimizeSettings {
        max_iterations: cfg.max_iterations.unwrap_or(MinimizeSettings::default().max_iterations),
        ..MinimizeSettings::default()
    }
}

const DEFAULT_ANSATZ: AnsatzSpec = AnsatzSpec {
    kind: AnsatzKind::Rsp,
    depth: 10,
};

fn circuit(spec: AnsatzSpec, mol: &MolecularIntegrals) -> Result<Circuit> {
    match spec.kind {
        AnsatzKind::Rsp => rsp_ansatz(mol.n_qubits(), spec.depth),
        AnsatzKind::Ry => ry_ansatz(mol.n_qubits(), spec.depth),
    }
    .map_err(|e| Error::config("ansatz", e.to_string()))
}

fn objective(cfg: &ExperimentConfig, mol: &MolecularIntegrals, sector: Sector) -> ObjectiveSpec {
    let spec = ObjectiveSpec::new(jordan_wigner(mol));
    match cfg.penalty_weight {
        Some(w) if w > 0.0 => spec.with_sector_penalties(mol.n_orbitals(), sector.n_electrons, sector.two_sz, w),
        _ => spec,
    }
}

/// VQE (one state) or a VQD chain, from Hartree-Fock.
fn variational_states(
    cfg: &ExperimentConfig,
    mol: &MolecularIntegrals,
    sector: Sector,
    n_states: usize,
) -> Result<(AnsatzSpec, Vec<VariationalState>)> {
    let spec = cfg.ansatz.unwrap_or(DEFAULT_ANSATZ);
    let c = circuit(spec, mol)?;
    let hf = Determinant::hartree_fock(mol.n_orbitals(), sector)?;
    let obj = objective(cfg, mol, sector);
    let out = prepare_vqd_chain(
        &obj,
        &c,
        &hf,
        n_states,
        cfg.overlap_weight.unwrap_or(1.0),
        &settings(cfg),
        seed(cfg),
    )?;
    Ok((spec, out))
}

/// QSCI input states: exact eigenvectors or variational states.
fn input_states(
    cfg: &ExperimentConfig,
    mol: &MolecularIntegrals,
    sector: Sector,
    casci: &Casci,
    n_states: usize,
) -> Result<Vec<StateVector>> {
    match cfg.input.unwrap_or_default() {
        InputKind::Casci => {
            if n_states > casci.dimension() {
                return Err(Error::config(
                    "n_states",
                    format!("sector has only {} states", casci.dimension()),
                ));
            }
            (0..n_states)
                .map(|i| StateVector::from_ci(&casci.determinants, &casci.vector(i)))
                .collect()
        }
        InputKind::Variational => Ok(variational_states(cfg, mol, sector, n_states)?
            .1
            .into_iter()
            .map(|v| v.state)
            .collect()),
    }
}

/// Measured counts when `shots` is set, the state itself otherwise.
enum Source {
    State(StateVector),
    Counts(SampleCounts),
}

impl Source {
    fn new(cfg: &ExperimentConfig, s: StateVector, seed: u64) -> Result<Self> {
        Ok(match cfg.shots {
            Some(n) => Source::Counts(sample(&s, n, seed)?),
            None => Source::State(s),
        })
    }

    fn select(&self, r: usize, filter: Option<Sector>) -> Result<SelectionResult> {
        match self {
            Source::State(s) => InputSource::State(s),
            Source::Counts(c) => InputSource::Counts(c),
        }
        .select(r, filter)
    }
}

fn header(cols: &str) -> String {
    format!("{cols}\n")
}

fn parse_check(mol: &MolecularIntegrals, sector: Sector) -> Result<Report> {
    let h = jordan_wigner(mol);
    let hf = Determinant::hartree_fock(mol.n_orbitals(), sector)?;
    Report::new(
        Kind::ParseCheck,
        json!({
            "n_orbitals": mol.n_orbitals(),
            "n_qubits": mol.n_qubits(),
            "n_electrons": mol.n_electrons(),
            "ms2": mol.ms2(),
            "core_energy": mol.core_energy(),
            "sector": sector,
            "sector_dimension": sector.dimension(mol.n_orbitals()),
            "pauli_terms": h.n_terms(),
            "one_norm": h.one_norm(),
            "hartree_fock": hf,
            "hartree_fock_energy": slater_condon(&hf, &hf, mol)?,
        }),
    )
}

fn run_casci(cfg: &ExperimentConfig, mol: &MolecularIntegrals, sector: Sector) -> Result<Report> {
    let c = exact(mol, sector)?;
    let n = cfg.n_states.unwrap_or(1).min(c.dimension());
    let energies = &c.eigenvalues[..n];
    let mut csv = header("state,energy");
    for (i, e) in energies.iter().enumerate() {
        let _ = writeln!(csv, "{i},{e:.12}");
    }
    Ok(Report::new(
        Kind::Casci,
        json!({"sector": sector, "dimension": c.dimension(), "eigenvalues": energies}),
    )?
    .table("casci_energies.csv", csv))
}

#[derive(Serialize)]
struct QsciRecord {
    r: usize,
    dimension: usize,
    shortfall: usize,
    discarded: u64,
    energy: f64,
    error: f64,
}

fn run_qsci_ground(cfg: &ExperimentConfig, mol: &MolecularIntegrals, sector: Sector) -> Result<Report> {
    let rs = r_list(cfg)?;
    let c = exact(mol, sector)?;
    let e0 = c.ground_energy();
    let state = input_states(cfg, mol, sector, &c, 1)?.remove(0);
    let src = Source::new(cfg, state, seed(cfg))?;
    let filter = post_select(cfg).then_some(sector);
    let sols = rs
        .par_iter()
        .map(|&r| qsci_from_selection(&src.select(r, filter)?, mol, 1))
        .collect::<Result<Vec<_>>>()?;
    let records: Vec<QsciRecord> = rs
        .iter()
        .zip(&sols)
        .map(|(&r, s)| QsciRecord {
            r,
            dimension: s.dimension(),
            shortfall: s.shortfall,
            discarded: s.discarded_by_postselect,
            energy: s.energy(),
            error: s.energy() - e0,
        })
        .collect();
    let mut csv = header("r,dimension,energy,error");
    for q in &records {
        let _ = writeln!(csv, "{},{},{:.12},{:.6e}", q.r, q.dimension, q.energy, q.error);
    }
    let bound = ground_bound(cfg, mol, e0)?;
    let mut rep = Report::new(
        Kind::QsciGround,
        json!({"exact": e0, "records": records, "solution": sols.last()}),
    )?
    .table("qsci_ground.csv", csv);
    for q in &records {
        rep.check(format!("r={}", q.r), q.energy, bound);
    }
    Ok(rep)
}

fn run_qsci_excited(cfg: &ExperimentConfig, mol: &MolecularIntegrals, sector: Sector) -> Result<Report> {
    let r = need(cfg.r, "r")?;
    let n = cfg.n_states.unwrap_or(3);
    let scheme = cfg.scheme.unwrap_or(Scheme::Sequential);
    let c = exact(mol, sector)?;
    let states = input_states(cfg, mol, sector, &c, n)?;
    let filter = post_select(cfg).then_some(sector);
    let selections = states
        .into_iter()
        .enumerate()
        .map(|(i, s)| Source::new(cfg, s, seed(cfg).wrapping_add(i as u64))?.select(r, filter))
        .collect::<Result<Vec<_>>>()?;
    let (energies, solutions) = match scheme {
        Scheme::Single => {
            let merge = cfg.merge.unwrap_or(MergeStrategy::RoundRobin);
            let sol = qsci_single_diag(&selections, r, merge, mol, n)?;
            (sol.eigenvalues.clone(), vec![sol])
        }
        Scheme::Sequential => {
            let betas = match &cfg.betas {
                Some(b) => Betas::Explicit(b.clone()),
                None => Betas::Auto(jordan_wigner(mol)),
            };
            let sols = qsci_sequential(&selections, mol, &betas)?;
            (sols.iter().map(|s| s.energy()).collect(), sols)
        }
    };
    let exact_e = &c.eigenvalues[..n];
    let mut csv = header("state,energy,exact,error");
    for (i, (e, x)) in energies.iter().zip(exact_e).enumerate() {
        let _ = writeln!(csv, "{i},{e:.12},{x:.12},{:.6e}", e - x);
    }
    let floor = ground_bound(cfg, mol, exact_e[0])?;
    let mut rep = Report::new(
        Kind::QsciExcited,
        json!({
            "scheme": scheme,
            "r": r,
            "energies": energies,
            "exact": exact_e,
            "solutions": solutions,
        }),
    )?
    .table("qsci_excited.csv", csv);
    for (i, e) in energies.iter().enumerate() {
        // interlacing gives the per-state bound for one post-selected diagonalization
        let bound = if scheme == Scheme::Single && post_select(cfg) {
            exact_e[i]
        } else {
            floor
        };
        rep.check(format!("state {i}"), *e, bound);
    }
    Ok(rep)
}

/// Sector-conserving ansatzes are bounded by the sector, others by the whole
/// Fock space.
fn ansatz_bound(spec: AnsatzSpec, mol: &MolecularIntegrals, sector_exact: f64) -> Result<f64> {
    match spec.kind {
        AnsatzKind::Rsp => Ok(sector_exact),
        AnsatzKind::Ry => fock_minimum(mol),
    }
}

fn run_vqe(cfg: &ExperimentConfig, mol: &MolecularIntegrals, sector: Sector) -> Result<Report> {
    let e0 = exact(mol, sector)?.ground_energy();
    let spec = cfg.ansatz.unwrap_or(DEFAULT_ANSATZ);
    let c = circuit(spec, mol)?;
    let hf = Determinant::hartree_fock(mol.n_orbitals(), sector)?;
    let obj = objective(cfg, mol, sector);
    let v = vqe_multistart(&obj, &c, &hf, &settings(cfg), seed(cfg), cfg.restarts.unwrap_or(1))?;
    let bound = ansatz_bound(spec, mol, e0)?;
    let mut result = json!({
        "ansatz": spec,
        "energy": v.energy,
        "exact": e0,
        "error": v.energy - e0,
        "iterations": v.trace.len() - 1,
        "converged": v.trace.converged,
        "params": v.params,
    });
    let mut tables = vec![("vqe_trace.csv".to_string(), v.trace.to_csv())];
    let mut checks = vec![("vqe".to_string(), v.energy, bound)];
    if let Some(rs) = &cfg.r_values {
        let hist = vqe_history(&obj, &c, &hf, &v.trace, mol, sector, rs, cfg.shots, seed(cfg))?;
        for (k, (e, q)) in hist.rows.iter().enumerate() {
            checks.push((format!("iteration {k} vqe"), *e, bound));
            for (r, x) in rs.iter().zip(q) {
                checks.push((format!("iteration {k} r={r}"), *x, e0));
            }
        }
        result["history"] = serde_json::to_value(&hist)?;
        tables.push(("vqe_history.csv".to_string(), hist.to_csv()));
    }
    let mut rep = Report::new(Kind::Vqe, result)?;
    rep.tables = tables;
    for (l, e, b) in checks {
        rep.check(l, e, b);
    }
    Ok(rep)
}

fn run_vqd(cfg: &ExperimentConfig, mol: &MolecularIntegrals, sector: Sector) -> Result<Report> {
    let n = cfg.n_states.unwrap_or(2);
    let c = exact(mol, sector)?;
    let (spec, states) = variational_states(cfg, mol, sector, n)?;
    let exact_e: Vec<f64> = c.eigenvalues.iter().take(n).copied().collect();
    let bound = ansatz_bound(spec, mol, exact_e[0])?;
    let mut csv = header("state,energy,exact,iterations");
    for (i, s) in states.iter().enumerate() {
        let x = exact_e.get(i).copied().unwrap_or(f64::NAN);
        let _ = writeln!(csv, "{i},{:.12},{x:.12},{}", s.energy, s.trace.len() - 1);
    }
    let energies: Vec<f64> = states.iter().map(|s| s.energy).collect();
    let mut rep = Report::new(
        Kind::Vqd,
        json!({
            "ansatz": spec,
            "energies": energies,
            "exact": exact_e,
            "params": states.iter().map(|s| &s.params).collect::<Vec<_>>(),
        }),
    )?
    .table("vqd_energies.csv", csv);
    for (i, e) in energies.iter().enumerate() {
        rep.check(format!("state {i}"), *e, bound);
    }
    Ok(rep)
}

fn run_scaling(cfg: &ExperimentConfig, mol: &MolecularIntegrals, sector: Sector) -> Result<Report> {
    let eps = cfg.epsilons.clone().unwrap_or_else(|| vec![0.1, 0.01, 0.001]);
    let c = exact(mol, sector)?;
    let state = StateVector::from_ci(&c.determinants, &c.vector(0))?;
    let records = eps
        .par_iter()
        .map(|&e| min_r_for_tolerance(&state, mol, sector, e))
        .collect::<Result<Vec<_>>>()?;
    let mut csv = header("n_qubits,epsilon,min_r,error,shot_estimate");
    for s in &records {
        let shots = s.shot_estimate.map_or_else(String::new, |v| format!("{v:.6e}"));
        let _ = writeln!(csv, "{},{:e},{},{:.6e},{shots}", s.n_qubits, s.epsilon, s.min_r, s.error);
    }
    let mut rep = Report::new(Kind::Scaling, json!({"exact": c.ground_energy(), "records": records}))?
        .table("scaling.csv", csv);
    for s in &records {
        rep.check(format!("epsilon={}", s.epsilon), c.ground_energy() + s.error, c.ground_energy());
    }
    Ok(rep)
}

fn run_sampling_trials(cfg: &ExperimentConfig, mol: &MolecularIntegrals, sector: Sector) -> Result<Report> {
    let shots = need(cfg.shots, "shots")?;
    let c = exact(mol, sector)?;
    let state = input_states(cfg, mol, sector, &c, 1)?.remove(0);
    let t = sampling_trials(
        &state,
        mol,
        sector,
        shots,
        cfg.n_trials.unwrap_or(10),
        seed(cfg),
        post_select(cfg),
    )?;
    let mut csv = header("trial,seed,energy,error");
    for (k, e) in t.energies.iter().enumerate() {
        let _ = writeln!(csv, "{k},{},{e:.12},{:.6e}", seed(cfg).wrapping_add(k as u64), e - t.exact);
    }
    let bound = ground_bound(cfg, mol, t.exact)?;
    let mut rep = Report::new(Kind::SamplingTrials, &t)?.table("sampling_trials.csv", csv);
    for (k, e) in t.energies.iter().enumerate() {
        rep.check(format!("trial {k}"), *e, bound);
    }
    Ok(rep)
}

fn run_noisy_demo(cfg: &ExperimentConfig, mol: &MolecularIntegrals, sector: Sector) -> Result<Report> {
    let spec = cfg.ansatz.unwrap_or(AnsatzSpec {
        kind: AnsatzKind::Ry,
        depth: 8,
    });
    if spec.kind != AnsatzKind::Ry {
        return Err(Error::config("ansatz.kind", "the noisy demo uses the ry ansatz"));
    }
    let rs = r_list(cfg)?;
    let seeds = cfg.seeds.clone().unwrap_or_else(|| vec![seed(cfg)]);
    let d = noisy_demo(
        mol,
        sector,
        spec.depth,
        cfg.noise.unwrap_or_else(NoiseModel::device),
        cfg.shots.unwrap_or(10_000),
        &rs,
        seed(cfg),
        cfg.restarts.unwrap_or(1),
        &seeds,
        &settings(cfg),
    )?;
    let mut csv = header("seed,r,discarded,unfiltered,filtered");
    for run in &d.runs {
        for ((r, u), (_, f)) in run.unfiltered.iter().zip(&run.filtered) {
            let _ = writeln!(csv, "{},{r},{},{u:.12},{f:.12}", run.seed, run.discarded);
        }
    }
    let floor = fock_minimum(mol)?;
    let mut rep = Report::new(Kind::NoisyDemo, &d)?.table("noisy_demo.csv", csv);
    rep.check("vqe", d.vqe_energy, floor);
    rep.check("cisd", d.cisd, d.exact);
    for run in &d.runs {
        for ((r, u), (_, f)) in run.unfiltered.iter().zip(&run.filtered) {
            rep.check(format!("seed {} r={r} unfiltered", run.seed), *u, floor);
            rep.check(format!("seed {} r={r} filtered", run.seed), *f, d.exact);
        }
    }
    Ok(rep)
}

fn run_qwc(cfg: &ExperimentConfig, mol: &MolecularIntegrals, sector: Sector) -> Result<Report> {
    let shots = need(cfg.shots, "shots")?;
    let trials = cfg.n_trials.unwrap_or(10);
    let model = cfg.allocation.unwrap_or(AllocationModel::Haar);
    let c = exact(mol, sector)?;
    let state = input_states(cfg, mol, sector, &c, 1)?.remove(0);
    let h = jordan_wigner(mol);
    let qwc = qwc_trials(&state, &h, c.ground_energy(), shots, trials, seed(cfg), model)?;
    let qsci = sampling_trials(&state, mol, sector, shots, trials, seed(cfg), post_select(cfg))?;
    let groups = qwc_groups(&h);
    let sigmas = match model {
        AllocationModel::Haar => haar_sigmas(&h, &groups),
        AllocationModel::Exact => exact_sigmas(&state, &h, &groups)?,
    };
    let groups_report = group_report(&h, &groups, &sigmas, &allocate_single(&sigmas, shots)?);
    let mut csv = header("trial,qsci,qwc");
    for (k, (a, b)) in qsci.energies.iter().zip(&qwc.energies).enumerate() {
        let _ = writeln!(csv, "{k},{a:.12},{b:.12}");
    }
    let bound = ground_bound(cfg, mol, c.ground_energy())?;
    let mut rep = Report::new(
        Kind::QwcEstimate,
        json!({"exact": c.ground_energy(), "qsci": qsci, "qwc": qwc, "groups": groups_report}),
    )?
    .table("qwc_estimate.csv", csv);
    // grouped estimates are unbiased averages, not variational, so only QSCI is checked
    for (k, e) in qsci.energies.iter().enumerate() {
        rep.check(format!("qsci trial {k}"), *e, bound);
    }
    Ok(rep)
}

fn run_asci(cfg: &ExperimentConfig, mol: &MolecularIntegrals, sector: Sector) -> Result<Report> {
    let a = need(cfg.asci.as_ref(), "asci")?;
    let res = asci_run(mol, sector, a)?;
    let e0 = exact(mol, sector)?.ground_energy();
    let mut rep = Report::new(
        Kind::Asci,
        json!({"exact": e0, "converged": res.converged, "trace": res.trace, "solution": res.solution}),
    )?
    .table("asci_trace.csv", res.trace_csv());
    for t in &res.trace {
        rep.check(format!("iteration {}", t.iteration), t.energy, e0);
    }
    Ok(rep)
}

fn load_operator(cfg: &ExperimentConfig, p: &Path) -> Result<(String, MolecularIntegrals)> {
    let op = read_fcidump(cfg.resolve(p))?;
    let op = match &cfg.active_space {
        Some(a) => freeze_core(&op, &a.frozen, &a.active)?,
        None => op,
    };
    let name = p.file_stem().map_or_else(|| p.display().to_string(), |s| s.to_string_lossy().into_owned());
    Ok((name, op))
}

fn run_observables(cfg: &ExperimentConfig, mol: &MolecularIntegrals, sector: Sector) -> Result<Report> {
    let r = need(cfg.r, "r")?;
    let c = exact(mol, sector)?;
    let state = input_states(cfg, mol, sector, &c, 1)?.remove(0);
    let sel = Source::new(cfg, state, seed(cfg))?.select(r, post_select(cfg).then_some(sector))?;
    let sol = qsci_from_selection(&sel, mol, 1)?;
    let ops = cfg
        .observables
        .iter()
        .flatten()
        .map(|p| load_operator(cfg, p))
        .collect::<Result<Vec<_>>>()?;
    let records = observable_suite(&sol, mol, sector, &ops)?;
    let mut csv = header("name,value,exact,abs_error");
    for o in &records {
        let _ = writeln!(csv, "{},{:.12},{:.12},{:.6e}", o.name, o.value, o.exact, o.abs_error);
    }
    let bound = ground_bound(cfg, mol, c.ground_energy())?;
    let mut rep = Report::new(
        Kind::Observables,
        json!({"r": r, "energy": sol.energy(), "exact": c.ground_energy(), "records": records}),
    )?
    .table("observables.csv", csv);
    rep.check("qsci", sol.energy(), bound);
    Ok(rep)
}

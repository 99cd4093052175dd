//! Versioned JSON experiment configs.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::studies::AllocationModel;
use crate::asci::AsciConfig;
use crate::circuit::NoiseModel;
use crate::determinant::Sector;
use crate::error::{Error, Result};
use crate::hamiltonian_io::{freeze_core, read_fcidump, MolecularIntegrals};
use crate::sci::MergeStrategy;

pub const SCHEMA_VERSION: u32 = 1;

/// One per command-line subcommand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    ParseCheck,
    Casci,
    QsciGround,
    QsciExcited,
    Vqe,
    Vqd,
    Scaling,
    SamplingTrials,
    NoisyDemo,
    QwcEstimate,
    Asci,
    Observables,
}

impl Kind {
    pub const ALL: [Kind; 12] = [
        Kind::ParseCheck,
        Kind::Casci,
        Kind::QsciGround,
        Kind::QsciExcited,
        Kind::Vqe,
        Kind::Vqd,
        Kind::Scaling,
        Kind::SamplingTrials,
        Kind::NoisyDemo,
        Kind::QwcEstimate,
        Kind::Asci,
        Kind::Observables,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::ParseCheck => "parse-check",
            Kind::Casci => "casci",
            Kind::QsciGround => "qsci-ground",
            Kind::QsciExcited => "qsci-excited",
            Kind::Vqe => "vqe",
            Kind::Vqd => "vqd",
            Kind::Scaling => "scaling",
            Kind::SamplingTrials => "sampling-trials",
            Kind::NoisyDemo => "noisy-demo",
            Kind::QwcEstimate => "qwc-estimate",
            Kind::Asci => "asci",
            Kind::Observables => "observables",
        }
    }

    /// Whether the run draws random numbers and so needs a seed.
    pub fn is_stochastic(self) -> bool {
        matches!(
            self,
            Kind::Vqe | Kind::Vqd | Kind::SamplingTrials | Kind::NoisyDemo | Kind::QwcEstimate
        )
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Kind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::config("kind", format!("unknown kind `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActiveSpace {
    pub frozen: Vec<usize>,
    pub active: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectorSpec {
    pub n_electrons: usize,
    /// `2·S_z`.
    pub two_sz: i32,
}

/// Where QSCI input states come from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputKind {
    /// Exact eigenvectors of the sector.
    #[default]
    Casci,
    /// Variationally prepared states (VQE, or a VQD chain for excited states).
    Variational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnsatzKind {
    Rsp,
    Ry,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnsatzSpec {
    pub kind: AnsatzKind,
    pub depth: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Single,
    Sequential,
}

/// A run description. Everything except `schema_version` and `molecule` is
/// optional; each kind reads the fields it needs and falls back to defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub kind: Option<Kind>,
    /// FCIDUMP file, relative to the config file.
    pub molecule: PathBuf,
    pub active_space: Option<ActiveSpace>,
    /// Defaults to the reference sector of the FCIDUMP header.
    pub sector: Option<SectorSpec>,
    pub seed: Option<u64>,
    pub input: Option<InputKind>,
    pub r: Option<usize>,
    pub r_values: Option<Vec<usize>>,
    pub n_states: Option<usize>,
    pub scheme: Option<Scheme>,
    pub merge: Option<MergeStrategy>,
    /// Sequential-scheme shifts; the 1-norm default when absent.
    pub betas: Option<Vec<f64>>,
    pub shots: Option<u64>,
    pub n_trials: Option<usize>,
    /// Sampling seeds of the noisy demo.
    pub seeds: Option<Vec<u64>>,
    pub noise: Option<NoiseModel>,
    pub post_select: Option<bool>,
    pub epsilons: Option<Vec<f64>>,
    pub ansatz: Option<AnsatzSpec>,
    pub penalty_weight: Option<f64>,
    pub overlap_weight: Option<f64>,
    pub max_iterations: Option<usize>,
    /// Independent VQE starts; the lowest result is kept.
    pub restarts: Option<usize>,
    pub allocation: Option<AllocationModel>,
    pub asci: Option<AsciConfig>,
    /// Operator FCIDUMP files, relative to the config file.
    pub observables: Option<Vec<PathBuf>>,
    /// Relative to the config file; the command line may override it.
    pub output_dir: Option<PathBuf>,
    /// Directory the relative paths above resolve against; not serialized.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl ExperimentConfig {
    /// A config for `kind` on one FCIDUMP with every option at its default.
    pub fn new(kind: Kind, molecule: impl Into<PathBuf>) -> Self {
        ExperimentConfig {
            schema_version: SCHEMA_VERSION,
            kind: Some(kind),
            molecule: molecule.into(),
            active_space: None,
            sector: None,
            seed: None,
            input: None,
            r: None,
            r_values: None,
            n_states: None,
            scheme: None,
            merge: None,
            betas: None,
            shots: None,
            n_trials: None,
            seeds: None,
            noise: None,
            post_select: None,
            epsilons: None,
            ansatz: None,
            penalty_weight: None,
            overlap_weight: None,
            max_iterations: None,
            restarts: None,
            allocation: None,
            asci: None,
            observables: None,
            output_dir: None,
            base_dir: PathBuf::new(),
        }
    }

    /// Parses JSON text; errors name the offending field.
    pub fn from_json(text: &str, base_dir: impl Into<PathBuf>) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let mut cfg: ExperimentConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let field = if path == "." { "(root)".to_string() } else { path };
            Error::config(field, e.inner().to_string())
        })?;
        cfg.base_dir = base_dir.into();
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::File {
            path: path.to_path_buf(),
            source,
        })?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_json(&text, base)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn kind(&self) -> Result<Kind> {
        self.kind.ok_or_else(|| Error::config("kind", "missing"))
    }

    /// Stochastic kinds always; QSCI kinds once they sample or start from a
    /// variational state.
    pub fn needs_seed(&self) -> Result<bool> {
        let kind = self.kind()?;
        Ok(kind.is_stochastic()
            || (matches!(kind, Kind::QsciGround | Kind::QsciExcited | Kind::Observables)
                && (self.shots.is_some() || self.input == Some(InputKind::Variational))))
    }

    /// sha256 of the config with the output directory blanked, so where
    /// results go does not change their identity.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.output_dir = None;
        let digest = Sha256::digest(serde_json::to_vec(&c).expect("config serializes"));
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Structural checks that need no numerics. File existence is checked
    /// here too.
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::config(
                "schema_version",
                format!("unsupported version {} (expected {SCHEMA_VERSION})", self.schema_version),
            ));
        }
        let kind = self.kind()?;
        if !self.resolve(&self.molecule).is_file() {
            return Err(Error::config(
                "molecule",
                format!("{} does not exist", self.resolve(&self.molecule).display()),
            ));
        }
        if self.needs_seed()? && self.seed.is_none() {
            return Err(Error::config("seed", format!("this `{kind}` run is stochastic and needs a seed")));
        }
        if self.r == Some(0) {
            return Err(Error::config("r", "must be at least 1"));
        }
        if let Some(rs) = &self.r_values {
            if rs.is_empty() || rs.contains(&0) {
                return Err(Error::config("r_values", "must be a non-empty list of positive integers"));
            }
        }
        if self.restarts == Some(0) {
            return Err(Error::config("restarts", "must be at least 1"));
        }
        if self.n_states == Some(0) {
            return Err(Error::config("n_states", "must be at least 1"));
        }
        if self.shots == Some(0) {
            return Err(Error::config("shots", "must be at least 1"));
        }
        if matches!(self.n_trials, Some(n) if n < 2) {
            return Err(Error::config("n_trials", "must be at least 2"));
        }
        if let Some(b) = &self.betas {
            if b.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
                return Err(Error::config("betas", "must be finite and non-negative"));
            }
        }
        if let Some(eps) = &self.epsilons {
            if eps.is_empty() || eps.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
                return Err(Error::config("epsilons", "must be a non-empty list of positive numbers"));
            }
        }
        if let Some(n) = &self.noise {
            n.validate().map_err(|e| Error::config("noise", e.to_string()))?;
        }
        if let Some(a) = &self.ansatz {
            if a.depth == 0 {
                return Err(Error::config("ansatz.depth", "must be at least 1"));
            }
        }
        for (name, w) in [("penalty_weight", self.penalty_weight), ("overlap_weight", self.overlap_weight)] {
            if matches!(w, Some(v) if !(v.is_finite() && v >= 0.0)) {
                return Err(Error::config(name, "must be finite and non-negative"));
            }
        }
        if let Some(a) = &self.asci {
            a.validate().map_err(|e| Error::config("asci", e.to_string()))?;
        }
        if let Some(ops) = &self.observables {
            for (i, p) in ops.iter().enumerate() {
                if !self.resolve(p).is_file() {
                    return Err(Error::config(
                        format!("observables[{i}]"),
                        format!("{} does not exist", self.resolve(p).display()),
                    ));
                }
            }
        }
        match kind {
            Kind::Observables if self.observables.as_ref().is_none_or(Vec::is_empty) => {
                Err(Error::config("observables", "`observables` runs need at least one operator file"))
            }
            Kind::Asci if self.asci.is_none() => Err(Error::config("asci", "`asci` runs need an asci block")),
            Kind::QsciExcited if self.n_states.is_some_and(|n| n < 2) => {
                Err(Error::config("n_states", "excited-state runs need at least 2 states"))
            }
            _ => Ok(()),
        }
    }

    /// The molecule with the active space applied.
    pub fn load_molecule(&self) -> Result<MolecularIntegrals> {
        let mol = read_fcidump(self.resolve(&self.molecule))?;
        match &self.active_space {
            Some(a) => freeze_core(&mol, &a.frozen, &a.active).map_err(|e| Error::config("active_space", e.to_string())),
            None => Ok(mol),
        }
    }

    pub fn sector_for(&self, mol: &MolecularIntegrals) -> Sector {
        match self.sector {
            Some(s) => Sector::new(s.n_electrons, s.two_sz),
            None => mol.reference_sector(),
        }
    }
}

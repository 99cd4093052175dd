mod common;

use std::path::Path;
use std::process::Command;

use common::{fixture, molecule, oracle_scalar};
use qsci::circuit::StateVector;
use qsci::harness::{
    cisd, evaluate, min_r_for_tolerance, observable_suite, run_experiment, ExperimentConfig, Kind, Report,
};
use qsci::sci::{idealized_top_r, qsci_from_selection};
use qsci::{casci_dense, read_fcidump, Error};

fn config(kind: Kind, mol: &str) -> ExperimentConfig {
    let mut c = ExperimentConfig::new(kind, fixture(&format!("{mol}.fcidump")));
    c.base_dir = fixture("");
    c
}

fn field_of(e: Error) -> String {
    match e {
        Error::Config { field, .. } => field,
        other => panic!("expected a config error, got {other}"),
    }
}

fn read_dir_sorted(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap())
        })
        .collect();
    v.sort();
    v
}

#[test]
fn same_config_gives_identical_files() {
    let mut c = config(Kind::SamplingTrials, "h4");
    c.seed = Some(9);
    c.shots = Some(2000);
    c.n_trials = Some(4);
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_experiment(&c, Some(a.path())).unwrap();
    run_experiment(&c, Some(b.path())).unwrap();
    let (fa, fb) = (read_dir_sorted(a.path()), read_dir_sorted(b.path()));
    assert_eq!(fa.len(), 2);
    assert_eq!(fa, fb);

    let json: serde_json::Value = serde_json::from_slice(&fa[0].1).unwrap();
    assert_eq!(json["meta"]["seed"], 9);
    assert_eq!(json["meta"]["config_hash"], c.hash());
    assert_eq!(json["meta"]["version"], env!("CARGO_PKG_VERSION"));
    let csv = String::from_utf8(fa[1].1.clone()).unwrap();
    assert!(csv.starts_with(&format!("# config_hash={} seed=9 version=", c.hash())));

    let mut other = c.clone();
    other.seed = Some(10);
    assert_ne!(other.hash(), c.hash());
    let mut moved = c.clone();
    moved.output_dir = Some("elsewhere".into());
    assert_eq!(moved.hash(), c.hash());
}

#[test]
fn config_errors_name_the_field() {
    let base = fixture("");
    let parse = |text: &str| field_of(ExperimentConfig::from_json(text, &base).unwrap_err());
    assert_eq!(parse(r#"{"schema_version": 1, "molecule": "h4.fcidump", "shotz": 3}"#), "shotz");
    assert_eq!(parse(r#"{"schema_version": 1, "molecule": "h4.fcidump", "shots": "many"}"#), "shots");
    assert_eq!(
        parse(r#"{"schema_version": 1, "molecule": "h4.fcidump", "ansatz": {"kind": "rsp", "depht": 2}}"#),
        "ansatz.depht"
    );
    assert_eq!(parse(r#"{"schema_version": 1, "molecule": "h4.fcidump", "kind": "qsci"}"#), "kind");

    let check = |c: &ExperimentConfig| field_of(c.validate().unwrap_err());
    let ok = config(Kind::SamplingTrials, "h4");
    assert_eq!(check(&ok), "seed");
    let mut c = ok.clone();
    c.seed = Some(1);
    c.validate().unwrap();
    c.schema_version = 2;
    assert_eq!(check(&c), "schema_version");
    let mut c = config(Kind::Casci, "missing");
    assert_eq!(check(&c), "molecule");
    c = config(Kind::QsciGround, "h4");
    c.r = Some(0);
    assert_eq!(check(&c), "r");
    c.r = Some(4);
    c.shots = Some(100);
    assert_eq!(check(&c), "seed");
    c = config(Kind::Observables, "h4");
    assert_eq!(check(&c), "observables");
    c.observables = Some(vec!["h4_derivatives/grad_0x.fcidump".into(), "nope.fcidump".into()]);
    assert_eq!(check(&c), "observables[1]");
    c = config(Kind::Asci, "h4");
    assert_eq!(check(&c), "asci");
    c = config(Kind::Casci, "h4");
    c.epsilons = Some(vec![0.1, -1.0]);
    assert_eq!(check(&c), "epsilons");

    c = config(Kind::QsciGround, "h4");
    assert_eq!(field_of(run_experiment(&c, None).unwrap_err()), "output_dir");
    assert_eq!(field_of(evaluate(&c).unwrap_err()), "r");
}

#[test]
fn write_time_check_rejects_sub_exact_energies() {
    let c = config(Kind::Casci, "h2");
    let mut rep: Report = evaluate(&c).unwrap();
    rep.verify().unwrap();
    let e = rep.result["eigenvalues"][0].as_f64().unwrap();
    rep.checks.push(qsci::harness::BoundCheck {
        label: "fake".into(),
        energy: e - 1e-6,
        bound: e,
    });
    let err = rep.verify().unwrap_err();
    assert!(matches!(err, Error::VariationalViolation { .. }));
    assert_eq!(err.exit_code(), 3);
}

#[test]
fn min_r_is_monotone_in_epsilon() {
    let mol = molecule("h4");
    let sector = mol.reference_sector();
    let c = casci_dense(&mol, 4, 0).unwrap();
    let s = StateVector::from_ci(&c.determinants, &c.vector(0)).unwrap();
    let eps = [0.5, 0.1, 0.03, 0.01, 0.003, 0.001, 1e-4, 1e-6, 1e-10];
    let rs: Vec<usize> = eps
        .iter()
        .map(|&e| min_r_for_tolerance(&s, &mol, sector, e).unwrap())
        .map(|rec| {
            assert!(rec.error >= -1e-12);
            rec.min_r
        })
        .collect();
    assert_eq!(rs[0], 1);
    assert!(rs.windows(2).all(|w| w[0] <= w[1]), "{rs:?}");
    assert!(*rs.last().unwrap() <= 36);
    let r1 = min_r_for_tolerance(&s, &mol, sector, 0.01).unwrap();
    assert!(r1.error <= 0.01);
    let below = qsci_from_selection(&idealized_top_r(&s, r1.min_r - 1, Some(sector)).unwrap(), &mol, 1).unwrap();
    assert!(below.energy() - c.ground_energy() > 0.01);
    assert!(min_r_for_tolerance(&s, &mol, sector, 0.0).is_err());
}

fn h4_operators() -> Vec<(String, qsci::MolecularIntegrals)> {
    let dir = fixture("h4_derivatives");
    let mut names: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    names.sort();
    names
        .into_iter()
        .map(|p| (p.file_stem().unwrap().to_string_lossy().into_owned(), read_fcidump(&p).unwrap()))
        .collect()
}

#[test]
fn observables_track_energy_accuracy() {
    let mol = molecule("h4");
    let sector = mol.reference_sector();
    let c = casci_dense(&mol, 4, 0).unwrap();
    let s = StateVector::from_ci(&c.determinants, &c.vector(0)).unwrap();
    let ops = h4_operators();
    assert_eq!(ops.len(), 24);

    let full = qsci_from_selection(&idealized_top_r(&s, 36, Some(sector)).unwrap(), &mol, 1).unwrap();
    for rec in observable_suite(&full, &mol, sector, &ops).unwrap() {
        assert!(rec.abs_error < 1e-8, "{} off by {}", rec.name, rec.abs_error);
    }

    let eps = 0.01;
    let r = min_r_for_tolerance(&s, &mol, sector, eps).unwrap().min_r;
    let sol = qsci_from_selection(&idealized_top_r(&s, r, Some(sector)).unwrap(), &mol, 1).unwrap();
    let recs = observable_suite(&sol, &mol, sector, &ops).unwrap();
    let within = recs.iter().filter(|o| o.abs_error <= 10.0 * eps).count();
    assert!(2 * within >= recs.len(), "{within} of {} within 10ε", recs.len());

    let own = observable_suite(&sol, &mol, sector, &[("h".to_string(), mol.clone())]).unwrap();
    assert!((own[0].value - sol.energy()).abs() < 1e-10);
}

#[test]
fn cisd_matches_oracle() {
    let mol = molecule("h4");
    let s = cisd(&mol, mol.reference_sector()).unwrap();
    assert_eq!(s.dimension(), 27);
    assert!((s.energy() - oracle_scalar("h4", "cisd_energy")).abs() < 1e-9);
}

#[test]
fn vqe_history_has_one_row_per_iteration() {
    let mut c = config(Kind::Vqe, "h2");
    c.seed = Some(3);
    c.ansatz = Some(qsci::harness::AnsatzSpec {
        kind: qsci::harness::AnsatzKind::Rsp,
        depth: 2,
    });
    c.r_values = Some(vec![1, 2, 4]);
    let dir = tempfile::tempdir().unwrap();
    let out = run_experiment(&c, Some(dir.path())).unwrap();
    let hist = out.files.iter().find(|p| p.ends_with("vqe_history.csv")).unwrap();
    let trace = out.files.iter().find(|p| p.ends_with("vqe_trace.csv")).unwrap();
    let n_iter = std::fs::read_to_string(trace).unwrap().lines().count() - 2;
    let text = std::fs::read_to_string(hist).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[1], "iteration,vqe_energy,qsci_r1,qsci_r2,qsci_r4");
    assert_eq!(lines.len() - 2, n_iter);
    let exact = casci_dense(&molecule("h2"), 2, 0).unwrap().ground_energy();
    for l in &lines[2..] {
        let v: Vec<f64> = l.split(',').skip(1).map(|x| x.parse().unwrap()).collect();
        assert_eq!(v.len(), 4);
        assert!(v.iter().all(|e| *e >= exact - 1e-10));
        assert!((v[3] - exact).abs() < 1e-9);
    }
}

#[test]
fn every_kind_evaluates_on_small_inputs() {
    let dir = tempfile::tempdir().unwrap();
    for kind in Kind::ALL {
        let mut c = config(kind, "h2");
        c.seed = Some(1);
        c.r = Some(2);
        c.shots = match kind {
            Kind::SamplingTrials | Kind::QwcEstimate | Kind::NoisyDemo => Some(500),
            _ => None,
        };
        c.n_trials = Some(3);
        c.n_states = Some(2);
        c.max_iterations = Some(30);
        match kind {
            Kind::Asci => c.asci = Some(qsci::asci::AsciConfig::new(3, 2)),
            Kind::Observables => c.observables = Some(vec!["h2.fcidump".into()]),
            Kind::NoisyDemo => {
                c.ansatz = Some(qsci::harness::AnsatzSpec {
                    kind: qsci::harness::AnsatzKind::Ry,
                    depth: 1,
                })
            }
            _ => {}
        }
        let out = run_experiment(&c, Some(&dir.path().join(kind.name())))
            .unwrap_or_else(|e| panic!("{kind}: {e}"));
        assert!(out.files[0].ends_with(format!("{kind}.json")));
    }
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qsci")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stderr).into_owned())
}

#[test]
fn command_line_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.to_string_lossy().into_owned()
    };
    let mol = fixture("h4.fcidump");
    let good = write(
        "good.json",
        &format!(r#"{{"schema_version": 1, "molecule": "{}", "r": 36}}"#, mol.display()),
    );
    let out = dir.path().join("out");
    let out_s = out.to_string_lossy().into_owned();
    let (code, err) = cli(&["qsci-ground", "--config", &good, "--out", &out_s, "--threads", "1"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.join("qsci-ground.json").is_file());

    let (code, err) = cli(&["sampling-trials", "--config", &good, "--out", &out_s]);
    assert_eq!(code, 2);
    assert!(err.contains("`seed`"), "{err}");
    let (code, _) = cli(&["sampling-trials", "--config", &good, "--out", &out_s, "--seed", "4"]);
    assert_eq!(code, 2, "shots still missing");

    let bad = write("bad.json", r#"{"schema_version": 1, "molecule": "x", "rr": 1}"#);
    let (code, err) = cli(&["casci", "--config", &bad, "--out", &out_s]);
    assert_eq!(code, 2);
    assert!(err.contains("`rr`"), "{err}");
    assert_eq!(cli(&["casci"]).0, 2);
    assert_eq!(cli(&["qsci-excited", "--config", &good]).0, 2);
}

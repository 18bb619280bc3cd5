use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use spinring::analysis::Periodicity;
use spinring::cli::{
    cmd_clusters, cmd_primitives, cmd_recursion, cmd_simulate, ExperimentSpec, Overrides, Selection,
};

const GOLDEN_STEPS: usize = 400;
const GOLDEN: [&str; 6] = [
    "sign_tape_pp",
    "periodic_subset_m3",
    "aperiodic_subset_m3",
    "ground_m3",
    "ground_m10",
    "mixed_pair",
];

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn experiment(name: &str, steps: usize) -> ExperimentSpec {
    let mut spec = ExperimentSpec::load(&root().join(format!("experiments/{name}.json"))).unwrap();
    spec.apply(&Overrides {
        alpha: None,
        steps: Some(steps),
    });
    spec
}

fn parse_csv(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

#[test]
fn golden_trajectories() {
    for name in GOLDEN {
        let dir = tempfile::tempdir().unwrap();
        let files = cmd_simulate(&experiment(name, GOLDEN_STEPS), dir.path(), false).unwrap();
        for f in files.iter().filter(|f| f.extension().unwrap() == "csv") {
            let golden_path = Path::new(env!("CARGO_MANIFEST_DIR"))
                .join("tests/golden")
                .join(f.file_name().unwrap());
            let golden = fs::read_to_string(&golden_path).unwrap();
            let fresh = fs::read_to_string(f).unwrap();
            assert_eq!(golden.lines().next(), fresh.lines().next());
            let (g, n) = (parse_csv(&golden), parse_csv(&fresh));
            assert_eq!(g.len(), n.len(), "{}", f.display());
            for (a, b) in g.iter().zip(&n) {
                for (x, y) in a.iter().zip(b) {
                    assert!((x - y).abs() < 1e-12, "{}: {x} vs {y}", f.display());
                }
            }
        }
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    for name in GOLDEN {
        let spec = experiment(name, GOLDEN_STEPS);
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        let fa = cmd_simulate(&spec, a.path(), true).unwrap();
        let fb = cmd_simulate(&spec, b.path(), true).unwrap();
        assert_eq!(fa.len(), fb.len());
        for (x, y) in fa.iter().zip(&fb) {
            assert_eq!(
                fs::read(x).unwrap(),
                fs::read(y).unwrap(),
                "{}",
                x.display()
            );
        }
    }
}

#[test]
fn zero_steps_writes_initial_row_only() {
    let dir = tempfile::tempdir().unwrap();
    let files = cmd_simulate(&experiment("ground_m3", 0), dir.path(), false).unwrap();
    let text = fs::read_to_string(&files[0]).unwrap();
    assert_eq!(
        text,
        "m,lambda1,lambda2,lambda3\n0,0.0000000000000000e0,0.0000000000000000e0,-1.0000000000000000e0\n"
    );
}

#[test]
fn sampling_keeps_every_nth_step() {
    let mut spec = experiment("ground_m3", 10);
    spec.sample_every = 4;
    let dir = tempfile::tempdir().unwrap();
    let files = cmd_simulate(&spec, dir.path(), false).unwrap();
    let steps: Vec<f64> = parse_csv(&fs::read_to_string(&files[0]).unwrap())
        .iter()
        .map(|r| r[0])
        .collect();
    assert_eq!(steps, [0.0, 4.0, 8.0]);
}

#[test]
fn primitive_classification_two_sites() {
    let dir = tempfile::tempdir().unwrap();
    let spec = experiment("sign_tape_pp", 200);
    let out = cmd_primitives(&spec, spec.phi0(), &Selection::All, 64, dir.path(), true).unwrap();
    let periodic: Vec<(&str, bool)> = out
        .records
        .iter()
        .map(|r| (r.pattern.as_str(), r.report.is_periodic()))
        .collect();
    assert_eq!(
        periodic,
        [("++", false), ("+-", true), ("-+", true), ("--", true)]
    );
    assert!(out
        .files
        .iter()
        .any(|f| f.ends_with("sign_tape_pp_primitives.svg")));
    assert!(out
        .files
        .iter()
        .any(|f| f.ends_with("sign_tape_pp_periodicity.json")));
}

#[test]
fn periodic_subset_of_three_sites() {
    let dir = tempfile::tempdir().unwrap();
    let spec = experiment("periodic_subset_m3", 300);
    let out = cmd_primitives(&spec, 0.0, &Selection::Periodic, 64, dir.path(), false).unwrap();
    let selected: Vec<&str> = out
        .records
        .iter()
        .filter(|r| r.selected)
        .map(|r| r.pattern.as_str())
        .collect();
    assert_eq!(selected, ["++-", "+-+", "-++", "---"]);
    // The equal-weight reconstruction is the simulated trajectory of the same tape.
    let recon = dir.path().join("periodic_subset_m3_reconstruction.csv");
    let sim_dir = tempfile::tempdir().unwrap();
    let sim = cmd_simulate(&spec, sim_dir.path(), false).unwrap();
    let (a, b) = (
        parse_csv(&fs::read_to_string(recon).unwrap()),
        parse_csv(&fs::read_to_string(&sim[0]).unwrap()),
    );
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        for (u, v) in x.iter().zip(y) {
            assert!((u - v).abs() < 1e-10);
        }
    }
}

#[test]
fn single_site_minus_pattern_has_period_two() {
    let dir = tempfile::tempdir().unwrap();
    let spec =
        ExperimentSpec::from_json_str(r#"{"name": "one", "M": 1, "steps": 20}"#, "x").unwrap();
    let sel: Selection = "-".parse().unwrap();
    let out = cmd_primitives(&spec, 0.4, &sel, 64, dir.path(), false).unwrap();
    let minus = out.records.iter().find(|r| r.pattern == "-").unwrap();
    assert!(minus.selected);
    assert_eq!(
        minus.report.classification,
        Periodicity::Periodic { period: 2 }
    );
    let bad: Selection = "+-".parse().unwrap();
    assert!(cmd_primitives(&spec, 0.4, &bad, 64, dir.path(), false).is_err());
}

#[test]
fn recursion_examples() {
    let dir = tempfile::tempdir().unwrap();
    let alpha = std::f64::consts::PI / 3f64.sqrt();
    let (summary, files) = cmd_recursion("r1", 1, alpha, 2, dir.path()).unwrap();
    let rows = parse_csv(&fs::read_to_string(&files[0]).unwrap());
    assert_eq!(rows.len(), 2);
    assert_eq!(&rows[0][..5], &[1.0, 1.0, 1.0, alpha.sin(), -alpha.cos()]);
    assert_eq!(rows[1][0], 2.0);
    assert_eq!(rows[1][3], 0.0);
    assert!((rows[1][4] + alpha.cos()).abs() < 1e-15);
    assert!(summary.max_defect.unwrap() < 1e-12);

    let (_, files) = cmd_recursion("seed", 4, alpha, 1, dir.path()).unwrap();
    assert_eq!(fs::read_to_string(&files[0]).unwrap().lines().count(), 2);

    let (summary, _) = cmd_recursion("m10", 10, alpha, 3000, dir.path()).unwrap();
    assert!(summary.max_defect.unwrap() < 1e-9);

    let (summary, files) = cmd_recursion("m12", 12, alpha, 50, dir.path()).unwrap();
    assert!(summary.max_defect.is_none());
    assert!(fs::read_to_string(&files[0])
        .unwrap()
        .starts_with("m,n,p,Y,Z\n"));

    assert!(cmd_recursion("bad", 3, alpha, 0, dir.path()).is_err());
}

#[test]
fn cluster_report_of_mixed_pair() {
    let dir = tempfile::tempdir().unwrap();
    let (report, path) = cmd_clusters(&experiment("mixed_pair", 50), dir.path()).unwrap();
    assert_eq!(report.n_qubits, 4);
    assert_eq!(report.clusters.len(), 15);
    assert!(report.sum_rule.unwrap().defect < 1e-9);
    assert_eq!(report.pairs.len(), 6);
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    assert!(json["clusters"][0]["Y"].is_number());
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spinring"))
}

#[test]
fn binary_verify_quick_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let status = binary()
        .args(["verify", "--level", "quick", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(
        status.status.success(),
        "{}",
        String::from_utf8_lossy(&status.stderr)
    );
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("verify_report.json")).unwrap())
            .unwrap();
    assert_eq!(report["passed"], true);
}

#[test]
fn binary_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    fs::write(&cfg, r#"{"M": 0}"#).unwrap();
    let out = binary()
        .args(["simulate", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = binary()
        .args(["verify", "--level", "slow"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn binary_simulate_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let out = binary()
        .args([
            "simulate", "--steps", "7", "--alpha", "0.5", "--format", "svg", "--config",
        ])
        .arg(root().join("experiments/ground_m3.json"))
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let csv = fs::read_to_string(dir.path().join("ground_m3_S1.csv")).unwrap();
    assert_eq!(csv.lines().count(), 9);
    assert!(dir.path().join("ground_m3_S1.svg").exists());
}

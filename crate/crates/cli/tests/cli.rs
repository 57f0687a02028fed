use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use dynperc::sim::{Environment, EventLog};
use dynperc_cli::read_curve;

fn dynperc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dynperc")).args(args).env_remove("DYNPERC_OUT_DIR").output().unwrap()
}

fn run_to(dir: &Path, name: &str, args: &[&str]) -> Vec<u8> {
    let out = dir.join(name);
    let mut full: Vec<&str> = args.to_vec();
    let out_str = out.to_str().unwrap().to_string();
    full.extend(["--out", &out_str]);
    let res = dynperc(&full);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    fs::read(out).unwrap()
}

const MIX: [&str; 13] =
    ["mix", "--n", "60", "--lambda", "2", "--mu", "1", "--times", "1,2,3,4,5", "--replicas", "1000", "--seed", "7"];

#[test]
fn mix_is_byte_deterministic_and_parses_back() {
    let dir = tempfile::tempdir().unwrap();
    let a = run_to(dir.path(), "a.csv", &MIX);
    let b = run_to(dir.path(), "b.csv", &MIX);
    assert_eq!(a, b);
    let text = String::from_utf8(a.clone()).unwrap();
    assert!(text.starts_with("# dynperc"));
    assert!(text.contains("# master_seed: 7"));
    let curve = read_curve(&a[..]).unwrap();
    assert_eq!(curve.len(), 5);
    assert_eq!(curve[4].time, 5.0);
    assert!(curve.iter().all(|p| (0.0..=1.0).contains(&p.estimate.value) && p.estimate.replicas == 1000));
}

#[test]
fn config_file_values_yield_to_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# mixing run\nn = 60\nlambda=2\nmu=1\ntimes=1,2,3,4,5\nreplicas=1000\nseed=99\n").unwrap();
    let via_config = run_to(dir.path(), "c.csv", &["mix", "--config", cfg.to_str().unwrap(), "--seed", "7"]);
    let via_flags = run_to(dir.path(), "f.csv", &MIX);
    assert_eq!(via_config, via_flags);

    fs::write(&cfg, "n=60\nwarp=9\n").unwrap();
    let res = dynperc(&["mix", "--config", cfg.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn couple_curve_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["couple", "--n", "6", "--lambda", "2", "--mu", "0.5", "--times", "0.5,1,4", "--replicas", "60", "--seed", "3"];
    let bytes = run_to(dir.path(), "tail.csv", &args);
    let curve = read_curve(&bytes[..]).unwrap();
    assert_eq!(curve.len(), 3);
    assert!(curve.windows(2).all(|w| w[0].estimate.value >= w[1].estimate.value));
}

#[test]
fn simulate_log_replays() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["simulate", "--n", "12", "--lambda", "2", "--mu", "0.5", "--t-max", "20", "--walkers", "2", "--seed", "5"];
    let bytes = run_to(dir.path(), "log.csv", &args);
    let text = String::from_utf8(bytes.clone()).unwrap();
    let header = |key: &str| {
        text.lines().find_map(|l| l.strip_prefix(&format!("# {key}: ")).map(str::to_string)).unwrap()
    };
    let walkers: Vec<usize> = header("initial_walkers").split(' ').map(|s| s.parse().unwrap()).collect();
    let edges: Vec<(usize, usize)> = header("initial_open_edges")
        .split_whitespace()
        .map(|e| {
            let (u, v) = e.split_once('-').unwrap();
            (u.parse().unwrap(), v.parse().unwrap())
        })
        .collect();
    let log = EventLog::read_csv(&bytes[..]).unwrap();
    assert!(!log.is_empty() && log.times_increasing());
    let initial = Environment::from_edges(12, &edges).unwrap();
    let (env, pos) = log.replay(&initial, &walkers).unwrap();
    assert!(env.check_invariants());
    assert_eq!(pos.len(), 2);
    assert_eq!(bytes, run_to(dir.path(), "again.csv", &args));
}

#[test]
fn structure_matches_committed_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let bytes = run_to(dir.path(), "s.json", &["structure", "--n", "2000", "--lambda", "2", "--seed", "1"]);
    let fixture = fs::read(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/structure_n2000_l2_s1.json")).unwrap();
    assert_eq!(bytes, fixture);
    let doc: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
    let good = &doc["result"]["good"];
    for clause in ["unique_large_component", "max_degree", "giant_edges", "deg1_in_giant", "removal_counts", "far_profile"] {
        assert!(good[clause].is_boolean(), "clause {clause} missing");
    }
    assert_eq!(doc["meta"]["master_seed"], 1);
}

#[test]
fn oracle_prints_tiny_residual() {
    let res = dynperc(&["oracle", "--n", "4", "--lambda", "2", "--mu", "0.2"]);
    assert!(res.status.success());
    let text = String::from_utf8(res.stdout).unwrap();
    let residual: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("stationarity_residual,,"))
        .unwrap()
        .parse()
        .unwrap();
    assert!(residual < 1e-10);
}

#[test]
fn anatomy_writes_report_and_per_replica_rows() {
    let dir = tempfile::tempdir().unwrap();
    let json = run_to(dir.path(), "anatomy.json", &["anatomy", "--n", "200", "--lambda", "2", "--replicas", "30", "--seed", "2"]);
    let doc: serde_json::Value = serde_json::from_slice(&json).unwrap();
    assert_eq!(doc["result"]["gaps"].as_array().unwrap().len(), 5);
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(fs::File::open(dir.path().join("anatomy.csv")).unwrap());
    assert_eq!(r.records().count(), 60);
    assert_eq!(dynperc(&["anatomy", "--n", "200", "--lambda", "1", "--replicas", "30"]).status.code(), Some(1));
}

#[test]
fn failures_leave_no_output_behind() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bad.csv");
    let res = dynperc(&["mix", "--n", "60", "--lambda=-1", "--mu", "1", "--times", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(1));
    let res = dynperc(&[
        "mix", "--target", "full-system", "--n", "6", "--lambda", "2", "--mu", "1", "--times", "1", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&res.stderr).contains("coalescence"));
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
    assert_eq!(dynperc(&["mix", "--n", "6", "--wobble"]).status.code(), Some(2));
    assert_eq!(dynperc(&["teleport"]).status.code(), Some(2));
}

#[test]
fn relative_out_uses_output_directory_variable() {
    let dir = tempfile::tempdir().unwrap();
    let res = Command::new(env!("CARGO_BIN_EXE_dynperc"))
        .args(["oracle", "--n", "3", "--lambda", "1", "--mu", "1", "--out", "o.csv"])
        .env("DYNPERC_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(res.status.success());
    assert!(dir.path().join("o.csv").exists());
}

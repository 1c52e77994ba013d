use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::Arc;

use belief_core::io::{read_bba, to_json, write_bba};
use belief_core::random::{explosion_sources, random_bba};
use belief_core::reduce::linear::reduce_betp_pl;
use belief_core::{Error, Frame, MassFunction, SubsetMask};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

fn belief(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_belief"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const EXAMPLE: &str = r#"{"frame": ["a", "b", "c"], "masses": [
  {"set": ["a"], "mass": 0.5},
  {"set": ["a", "b"], "mass": 0.3},
  {"set": ["a", "b", "c"], "mass": 0.2}
]}"#;

const KMEANS_EXAMPLE: &str = r#"{"frame": ["a", "b", "c"], "masses": [
  {"set": ["a"], "mass": 0.4},
  {"set": ["a", "b"], "mass": 0.35},
  {"set": ["c"], "mass": 0.25}
]}"#;

/// `key: value` from an aligned report.
fn report_value<'a>(report: &'a str, key: &str) -> &'a str {
    report
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}:")))
        .unwrap_or_else(|| panic!("no `{key}` in {report}"))
        .trim()
}

#[test]
fn validate_reports_size_conflict_and_sum() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "m.json", EXAMPLE);
    let o = belief(&["validate", s(&path)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "ok: |m|=3, m(∅)=0, sum=1.000000000\n");
}

#[test]
fn validate_rejects_bad_sum_and_unknown_labels() {
    let dir = TempDir::new().unwrap();
    let short = write(
        &dir,
        "short.json",
        r#"{"frame": ["a", "b"], "masses": [{"set": ["a"], "mass": 0.5}, {"set": ["b"], "mass": 0.4}]}"#,
    );
    let o = belief(&["validate", s(&short)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("MassSumInvalid"), "{}", stderr(&o));

    let unknown = write(
        &dir,
        "unknown.json",
        r#"{"frame": ["a", "b"], "masses": [{"set": ["z"], "mass": 1.0}]}"#,
    );
    let o = belief(&["validate", s(&unknown)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("UnknownLabel"), "{}", stderr(&o));

    let o = belief(&["validate", s(&dir.path().join("missing.json"))]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn canonical_rewrite_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let messy = write(
        &dir,
        "messy.json",
        r#"{"masses": [{"set": ["c", "a", "b"], "mass": 0.2}, {"set": ["b", "a"], "mass": 0.1},
            {"set": ["a"], "mass": 0.5}, {"set": ["a", "b"], "mass": 0.2}], "frame": ["a", "b", "c"]}"#,
    );
    let once = dir.path().join("once.json");
    let twice = dir.path().join("twice.json");
    assert_eq!(
        belief(&["validate", s(&messy), "--write", s(&once)])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        belief(&["validate", s(&once), "--write", s(&twice)])
            .status
            .code(),
        Some(0)
    );
    let (a, b) = (
        std::fs::read(&once).unwrap(),
        std::fs::read(&twice).unwrap(),
    );
    assert_eq!(a, b);
    let m = read_bba(&once).unwrap();
    assert_eq!(m.len(), 3);
    assert!((m.mass(SubsetMask(0b011)) - 0.3).abs() < 1e-15);
}

#[test]
fn eval_examples() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "m.json", EXAMPLE);
    let eval = |flag: &str, set: &str| {
        let o = belief(&["eval", s(&path), flag, set]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        stdout(&o)
    };
    assert_eq!(eval("--betp", "a"), "0.716666666667\n");
    assert_eq!(eval("--pl", "X"), "1.000000000000\n");
    assert_eq!(eval("--bel", ""), "0.000000000000\n");
    assert_eq!(eval("--bel", "{a,b}"), "0.800000000000\n");
    assert_eq!(eval("--q", "a, b"), "0.500000000000\n");

    let o = belief(&["eval", s(&path), "--pl", "d"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("UnknownLabel"));
}

#[test]
fn eval_betp_on_total_conflict_fails() {
    let dir = TempDir::new().unwrap();
    let path = write(
        &dir,
        "conflict.json",
        r#"{"frame": ["a"], "masses": [{"set": [], "mass": 1.0}]}"#,
    );
    let o = belief(&["eval", s(&path), "--betp", "a"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("TotalConflict"));
}

fn write_explosion(dir: &TempDir, n: usize) -> Vec<PathBuf> {
    let frame = Arc::new(Frame::numbered(n).unwrap());
    explosion_sources(&frame)
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let path = dir.path().join(format!("e{i}.json"));
            write_bba(&path, m).unwrap();
            path
        })
        .collect()
}

#[test]
fn combine_explosion_sources() {
    let dir = TempDir::new().unwrap();
    let paths = write_explosion(&dir, 12);
    let out = dir.path().join("out.json");
    let mut args = vec!["combine"];
    args.extend(paths.iter().map(|p| s(p)));
    args.extend(["--out", s(&out)]);
    let o = belief(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("|m|=4096, m(∅)="), "{}", stdout(&o));
    let m = read_bba(&out).unwrap();
    assert!((0..4096).all(|a| (m.mass(SubsetMask(a)) - 2f64.powi(-12)).abs() <= 1e-12));
}

#[test]
fn combine_pair_reports_conflict_and_agrees_via_q() {
    let dir = TempDir::new().unwrap();
    let paths = write_explosion(&dir, 2);
    let focal = dir.path().join("focal.json");
    let via_q = dir.path().join("q.json");
    let o = belief(&["combine", s(&paths[0]), s(&paths[1]), "--out", s(&focal)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "|m|=4, m(∅)=0.25\n");
    let o = belief(&[
        "combine",
        s(&paths[0]),
        s(&paths[1]),
        "--via",
        "q",
        "--out",
        s(&via_q),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let (a, b) = (read_bba(&focal).unwrap(), read_bba(&via_q).unwrap());
    assert!(a.max_abs_diff(&b) <= 1e-12);

    // Without --out the bba goes to stdout and the summary to stderr.
    let o = belief(&["combine", s(&paths[0]), s(&paths[1])]);
    assert_eq!(stdout(&o), to_json(&a));
    assert_eq!(stderr(&o), "|m|=4, m(∅)=0.25\n");
}

#[test]
fn combine_rejects_mismatched_frames() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", EXAMPLE);
    let b = write(
        &dir,
        "b.json",
        r#"{"frame": ["a", "b"], "masses": [{"set": ["a"], "mass": 1.0}]}"#,
    );
    let o = belief(&["combine", s(&a), s(&b)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("FrameMismatch"));
}

#[test]
fn reduce_isopignistic_contract() {
    let dir = TempDir::new().unwrap();
    let frame = Arc::new(Frame::numbered(6).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let m = random_bba(&mut rng, &frame, 30, false);
    let path = dir.path().join("m.json");
    write_bba(&path, &m).unwrap();
    let out = dir.path().join("r.json");
    let o = belief(&[
        "reduce",
        s(&path),
        "--method",
        "isopignistic",
        "--out",
        s(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report = stdout(&o);
    let r = read_bba(&out).unwrap();
    assert!(r.len() <= 6);
    assert_eq!(report_value(&report, "output_size"), r.len().to_string());
    let dev: f64 = report_value(&report, "betp_deviation").parse().unwrap();
    assert!(dev <= 1e-12);
}

/// Random n = 5 bbas for which the betP + pl reduction does or does not
/// have a nonnegative solution.
fn linear_pl_case(negative: bool) -> MassFunction {
    let frame = Arc::new(Frame::numbered(5).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    loop {
        let m = random_bba(&mut rng, &frame, 6, false);
        match reduce_betp_pl(&m) {
            Ok(_) if !negative => return m,
            Err(Error::NegativeMassSolution { .. }) if negative => return m,
            _ => {}
        }
    }
}

#[test]
fn reduce_linear_pl_bounds_focal_set() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("m.json");
    write_bba(&path, &linear_pl_case(false)).unwrap();
    let out = dir.path().join("r.json");
    let o = belief(&[
        "reduce",
        s(&path),
        "--method",
        "linear-pl",
        "--out",
        s(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(read_bba(&out).unwrap().len() <= 9);
    let dev: f64 = report_value(&stdout(&o), "secondary_deviation")
        .parse()
        .unwrap();
    assert!(dev <= 1e-9);
}

#[test]
fn reduce_negative_solution_exits_2_with_signed_vector() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("m.json");
    write_bba(&path, &linear_pl_case(true)).unwrap();
    let out = dir.path().join("r.json");
    let o = belief(&[
        "reduce",
        s(&path),
        "--method",
        "linear-pl",
        "--out",
        s(&out),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("NegativeMassSolution"), "{err}");
    let values: Vec<f64> = err
        .lines()
        .filter_map(|l| l.trim().rsplit_once(": ").and_then(|(_, v)| v.parse().ok()))
        .collect();
    assert_eq!(values.len(), 9, "{err}");
    assert!(values.iter().any(|&v| v < 0.0));
    assert!(!out.exists());
}

#[test]
fn reduce_kmeans_worked_example() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "m.json", KMEANS_EXAMPLE);
    let out = dir.path().join("r.json");
    let o = belief(&[
        "reduce",
        s(&path),
        "--method",
        "kmeans",
        "--k",
        "2",
        "--out",
        s(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let expected = MassFunction::new(
        Arc::new(Frame::new(["a", "b", "c"]).unwrap()),
        [(SubsetMask(0b001), 0.4 + 0.25), (SubsetMask(0b011), 0.35)],
    )
    .unwrap();
    assert_eq!(std::fs::read_to_string(&out).unwrap(), to_json(&expected));
    let report = stdout(&o);
    assert_eq!(report_value(&report, "termination"), "FixedPoint");
    assert_eq!(report_value(&report, "iterations"), "2");
}

#[test]
fn reduce_kmeans_flags() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "m.json", KMEANS_EXAMPLE);
    let o = belief(&["reduce", s(&path), "--method", "kmeans"]);
    assert_eq!(o.status.code(), Some(1));
    let o = belief(&[
        "reduce",
        s(&path),
        "--method",
        "kmeans",
        "--k",
        "2",
        "--restarts",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--seed"));
    let o = belief(&["reduce", s(&path), "--method", "kmeans", "--k", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("InvalidK"));
    let seeded = [
        "reduce",
        s(&path),
        "--method",
        "kmeans",
        "--k",
        "2",
        "--restarts",
        "3",
        "--seed",
        "9",
    ];
    let (a, b) = (belief(&seeded), belief(&seeded));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_agrees_with_oracles() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", EXAMPLE);
    let b = write(&dir, "b.json", KMEANS_EXAMPLE);
    let o = belief(&["verify", s(&a), s(&b)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 7);
    assert!(text.lines().all(|l| l.ends_with(" ok")), "{text}");
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("step,size_before,size_after,wall_ms,betp_dev,secondary_dev")
    );
    lines
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

#[test]
fn bench_explosion_unreduced() {
    let dir = TempDir::new().unwrap();
    let bba = dir.path().join("final.json");
    let o = belief(&[
        "bench",
        "--scenario",
        "explosion",
        "--n",
        "12",
        "--bba-out",
        s(&bba),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 11);
    assert_eq!(rows.last().unwrap()[2], "4096");
    let m = read_bba(&bba).unwrap();
    assert!(m.iter().all(|(_, w)| (w - 2f64.powi(-12)).abs() <= 1e-12));

    let o = belief(&[
        "bench",
        "--scenario",
        "explosion",
        "--n",
        "2",
        "--bba-out",
        s(&bba),
    ]);
    assert_eq!(csv_rows(&stdout(&o))[0][2], "4");
    let m = read_bba(&bba).unwrap();
    assert!(m.len() == 4 && m.iter().all(|(_, w)| w == 0.25));
}

#[test]
fn bench_explosion_with_kmeans_stays_bounded() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("bench.csv");
    let args = [
        "bench",
        "--scenario",
        "explosion",
        "--n",
        "12",
        "--reduce-every",
        "1",
        "--method",
        "kmeans",
        "--k",
        "23",
        "--out",
        s(&csv),
    ];
    let o = belief(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = csv_rows(&std::fs::read_to_string(&csv).unwrap());
    assert_eq!(rows.len(), 11);
    for row in &rows {
        let after: usize = row[2].parse().unwrap();
        assert!(after <= 23, "{row:?}");
        let ms: f64 = row[3].parse().unwrap();
        assert!(ms >= 0.0);
    }
    assert!(rows.iter().any(|r| !r[4].is_empty()));
}

#[test]
fn bench_refuses_large_unreduced_frames() {
    let o = belief(&["bench", "--scenario", "explosion", "--n", "21"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("FrameTooLarge"));
    let o = belief(&[
        "bench",
        "--scenario",
        "explosion",
        "--n",
        "30",
        "--reduce-every",
        "1",
        "--method",
        "kmeans",
        "--k",
        "16",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

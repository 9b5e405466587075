use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn chfis(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chfis"))
        .args(args)
        .env_remove("CHFIS_MAX_DEPTH")
        .env("RUST_LOG", "off")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn value(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(' ')))
        .unwrap_or_else(|| panic!("no `{key}` in {text}"))
        .parse()
        .unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn bounds_for_published_cases() {
    let base = data("table1.chfis");
    let cases = [
        ("case_ia.chfis", "bound_xy", 0.0217),
        ("case_ib.chfis", "bound_xy", 2.1667),
        ("case_iia.chfis", "bound_z", 0.0227),
        ("case_iib.chfis", "bound_z", 2.2667),
        ("case_iiia.chfis", "bound_t", 0.0213),
        ("case_iiib.chfis", "bound_t", 2.1333),
        ("combined_a.chfis", "metric_d", 0.0657),
        ("combined_b.chfis", "metric_d", 6.5667),
    ];
    for (file, key, want) in cases {
        let out = chfis(&["bounds", "--base", p(&base), "--perturbed", p(&data(file))]);
        assert_eq!(out.status.code(), Some(0), "{file}: {}", stderr(&out));
        let got = value(&stdout(&out), key);
        assert!((got - want).abs() <= 5e-5, "{file} {key}: {got}");
    }
    let out = chfis(&["bounds", "--base", p(&base), "--perturbed", p(&data("case_iiib.chfis"))]);
    assert!(stdout(&out).contains("bound_t 2.1333"));
}

#[test]
fn calibration_flags_scale_the_xy_term() {
    let args = |mbar: &str| {
        let o = chfis(&[
            "bounds", "--base", p(&data("table1.chfis")), "--perturbed", p(&data("case_ib.chfis")), "--mbar", mbar,
        ]);
        value(&stdout(&o), "bound_xy")
    };
    assert!((args("2.6") - 2.0 * args("1.3")).abs() < 1e-12);
}

#[test]
fn solve_writes_depth_zero_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.csv");
    let o = chfis(&["solve", "--data", p(&data("table1.chfis")), "--depth", "0", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 10);
    assert!(csv.contains("\n1,1,0.40000000000000002,0.80000000000000004\n"));
}

#[test]
fn solve_then_export_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for k in 0..2 {
        let csv = dir.path().join(format!("g{k}.csv"));
        let pgm = dir.path().join(format!("g{k}.pgm"));
        let o = chfis(&["solve", "--data", p(&data("table1.chfis")), "--depth", "4", "--out", p(&csv)]);
        assert_eq!(o.status.code(), Some(0));
        let o = chfis(&["export", "--grid", p(&csv), "--format", "pgm", "--out", p(&pgm)]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        outputs.push((std::fs::read(&csv).unwrap(), std::fs::read(&pgm).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
    assert!(outputs[0].1.starts_with(b"P2\n33 33\n255\n"));
}

#[test]
fn flags_override_file_parameters() {
    let file = data("table1.chfis");
    let from_file = chfis(&["eval", "--data", p(&file), "--x", "0.5", "--y", "0.5"]);
    let same = chfis(&["eval", "--data", p(&file), "--x", "0.5", "--y", "0.5", "--alpha", "0.7"]);
    let other = chfis(&["eval", "--data", p(&file), "--x", "0.5", "--y", "0.5", "--alpha", "-0.2"]);
    assert_eq!(stdout(&from_file), stdout(&same));
    assert_ne!(value(&stdout(&from_file), "f1"), value(&stdout(&other), "f1"));
    assert_eq!(value(&stdout(&from_file), "f2"), value(&stdout(&other), "f2"));
}

#[test]
fn eval_reports_nodes_exactly() {
    let o = chfis(&["eval", "--data", p(&data("table1.chfis")), "--x", "1", "--y", "2"]);
    let s = stdout(&o);
    assert_eq!(value(&s, "f1"), 0.6);
    assert_eq!(value(&s, "f2"), 0.5);
    assert!(s.contains("exact true"));
}

#[test]
fn coeffs_and_check() {
    let o = chfis(&["coeffs", "--data", p(&data("table1.chfis")), "--cell", "1,1"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("cell (1,1)\n"));
    assert!(value(&s, "joinup_residual") <= 1e-12);
    let o = chfis(&["coeffs", "--data", p(&data("table1.chfis")), "--cell", "3,1"]);
    assert_eq!(o.status.code(), Some(1));
    let o = chfis(&["check", "--data", p(&data("combined_b.chfis"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("ok 2x2 cells"));
}

#[test]
fn verify_exit_codes() {
    let base = data("table1.chfis");
    let o = chfis(&["verify", "--base", p(&base), "--perturbed", p(&data("case_iiib.chfis")), "--depth", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("status ok"));
    // Moving the axes crosses the interior jumps; see the README.
    let o = chfis(&["verify", "--base", p(&base), "--perturbed", p(&data("case_ia.chfis")), "--depth", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("status violation"));
}

#[test]
fn report_records_results_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.jsonl");
    let o = chfis(&[
        "--report", p(&report), "bounds", "--base", p(&data("table1.chfis")), "--perturbed",
        p(&data("combined_a.chfis")),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rec: serde_json::Value = serde_json::from_str(std::fs::read_to_string(&report).unwrap().trim()).unwrap();
    assert_eq!(rec["command"], "bounds");
    assert_eq!(rec["exit_code"], 0);
    assert!((rec["metric_d"].as_f64().unwrap() - 0.0657).abs() < 5e-5);

    let o = chfis(&["check", "--data", p(&data("table1.chfis")), "--gamma", "1.5", "--report", p(&report)]);
    assert_eq!(o.status.code(), Some(1));
    let rec: serde_json::Value = serde_json::from_str(std::fs::read_to_string(&report).unwrap().trim()).unwrap();
    assert_eq!(rec["exit_code"], 1);
    assert!(rec["error"].as_str().unwrap().contains("cell (1,1)"));
}

#[test]
fn diagnostics_name_the_problem() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.chfis");
    std::fs::write(&bad, "chfis-v1\nnx 2\nny 2\nx 0 1 2\ny 0 1 2\nz 1 2 3 4 5 6 7 8\nt 1 2 3 4 5 6 7 8 9\n").unwrap();
    let o = chfis(&["check", "--data", p(&bad), "--alpha", "0.1", "--beta", "0", "--gamma", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("section `z`"), "{}", stderr(&o));

    let bare = dir.path().join("bare.chfis");
    std::fs::write(&bare, "chfis-v1\nnx 1\nny 1\nx 0 1\ny 0 1\nz 1 2 3 4\nt 1 2 3 4\nalpha_matrix 0.5\n").unwrap();
    let o = chfis(&["check", "--data", p(&bare), "--beta", "0", "--gamma", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("all be scalars"), "{}", stderr(&o));
    let o = chfis(&["check", "--data", p(&bare), "--beta", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("no gamma given"));
    let o = chfis(&["check", "--data", p(&bare), "--alpha", "0.2", "--beta", "0", "--gamma", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("alpha_matrix"));

    let o = chfis(&["check", "--data", p(&dir.path().join("missing.chfis"))]);
    assert_eq!(o.status.code(), Some(1));
    let o = chfis(&["solve"]);
    assert_eq!(o.status.code(), Some(1));
    let o = chfis(&["solve", "--data", p(&data("table1.chfis")), "--out", p(&dir.path().join("no/such/dir.csv"))]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn depth_cap_comes_from_the_environment() {
    let file = data("table1.chfis");
    let args = ["solve", "--data", p(&file), "--depth", "3"];
    let o = Command::new(env!("CARGO_BIN_EXE_chfis")).args(args).env("CHFIS_MAX_DEPTH", "2").output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("exceeds the cap 2"));
    let o = Command::new(env!("CARGO_BIN_EXE_chfis")).args(args).env("CHFIS_MAX_DEPTH", "3").output().unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn perturb_output_reloads() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.chfis");
    let base = data("table1.chfis");
    for kind in ["x", "y", "z", "t", "all"] {
        let o = chfis(&[
            "perturb", "--data", p(&base), "--kind", kind, "--magnitude", "0.05", "--rng-seed", "11", "--out", p(&out),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let o = chfis(&["bounds", "--base", p(&base), "--perturbed", p(&out)]);
        assert_eq!(o.status.code(), Some(0), "{kind}: {}", stderr(&o));
        assert!(value(&stdout(&o), "metric_d") > 0.0);
    }
    let o = chfis(&["perturb", "--data", p(&base), "--kind", "x", "--magnitude", "5", "--rng-seed", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

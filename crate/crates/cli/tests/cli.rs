use std::path::PathBuf;
use std::process::{Command, Output};

use kni_cli::Report;

fn kni(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kni"))
        .args(args)
        .output()
        .expect("spawn kni")
}

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "data", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn run_is_deterministic_and_validates() {
    let dir = tempfile::tempdir().unwrap();
    let a = kni(&["run", "--no-timings"]);
    let b = kni(&["run", "--no-timings"]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(stdout(&a), stdout(&b));
    let report: Report = stdout(&a).parse().unwrap();
    assert_eq!(
        report.get("verdict/verdict"),
        Some("non-integrability criteria satisfied")
    );

    let path = dir.path().join("report.txt");
    let o = kni(&["run", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("\ntimings:\n"));
    let v = kni(&["validate", "--report", path.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0), "{}", stderr(&v));
    assert!(stdout(&v).contains("non-integrability criteria satisfied"));

    // timings aside, a report with timings matches one without
    let with: Report = text.parse().unwrap();
    assert_eq!(with.to_text_without_timings(), stdout(&a));
}

#[test]
fn control_and_fixture_sources() {
    let o = kni(&["run", "--no-timings", "--set", "source=control"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("verdict: no obstruction found"));

    let o = kni(&["run", "--no-timings", "--set", "source=fixture"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r: Report = stdout(&o).parse().unwrap();
    assert!(r.get("stages/mechanics").unwrap().starts_with("skipped"));
    assert_eq!(r.get("classify/kimura factor/tag"), Some("SL2"));
}

#[test]
fn disabled_monodromy_degrades_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("kni.conf");
    std::fs::write(&cfg, "# no numerics\nmonodromy.enabled = false\n").unwrap();
    let o = kni(&["run", "--no-timings", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r: Report = stdout(&o).parse().unwrap();
    assert!(r.get("stages/monodromy").unwrap().starts_with("skipped"));
    assert_eq!(r.get("verdict/flag 1"), Some("numeric corroboration absent"));
}

#[test]
fn bad_config_is_located_and_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("kni.conf");
    std::fs::write(&cfg, "source = derived\nmonodromy.tolerance = 1e-8\n").unwrap();
    let o = kni(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let e = stderr(&o);
    assert!(e.contains(":2:1:") && e.contains("unknown key"), "{e}");

    let o = kni(&["run", "--set", "series.order=zero"]);
    assert_eq!(o.status.code(), Some(3));
    let o = kni(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(3));
    let o = kni(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn malformed_operator_reports_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let op = dir.path().join("bad.diffop");
    std::fs::write(&op, "diffop v1\nchart: x1\norder: 1\na0: [1/1,0/1\na1: [1/1] ÷ [1/1]\n").unwrap();
    let o = kni(&["classify", "--op", op.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let e = stderr(&o);
    assert!(e.starts_with("error: ") && e.contains("bad.diffop:4:"), "{e}");
}

#[test]
fn cyclic_on_the_branch_fixture_gives_the_variant() {
    let o = kni(&["cyclic", "--input", &data("a3_branch.varsys"), "--coord", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let variant = std::fs::read_to_string(data("hyp_variant.diffop")).unwrap();
    let got: kni_core::opalgebra::DiffOp = stdout(&o).parse().unwrap();
    let want: kni_core::opalgebra::DiffOp = variant.parse().unwrap();
    assert_eq!(got, want);
    let e = stderr(&o);
    assert!(e.contains("differs from typo variant in: (none)"), "{e}");
    assert!(e.contains("annihilates y0: true"), "{e}");

    let o = kni(&["cyclic", "--input", &data("a3_branch.varsys"), "--coord", "9"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn classify_parameters_and_operators() {
    let o = kni(&[
        "classify",
        "--a",
        "5/2 - i*sqrt3/2",
        "--b",
        "1/2 + i*sqrt3/2",
        "--c",
        "1 + i*sqrt3",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("tag: SL2"));

    let o = kni(&["classify", "--a", "-2", "--b", "1/2", "--c", "1"]);
    assert!(stdout(&o).contains("tag: reducible"), "{}", stdout(&o));

    let o = kni(&["classify", "--op", &data("hyp_variant.diffop")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let s = stdout(&o);
    assert!(s.contains("fuchsian: true"), "{s}");
}

#[test]
fn monodromy_of_the_control_operator() {
    let o = kni(&["monodromy", "--op", &data("control_hg.diffop")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let s = stdout(&o);
    assert!(s.contains("abelian: true"), "{s}");
    // from −1 the path to 1 runs through the singular point 0
    let o = kni(&["monodromy", "--op", &data("control_hg.diffop"), "--base", "-1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("clearance"));
}

#[test]
fn branches_and_nve() {
    let o = kni(&["branches"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("branch 1:"));
    let o = kni(&["nve"]);
    assert_eq!(o.status.code(), Some(0));
    let sys: kni_core::variational::VarSystem = stdout(&o).parse().unwrap();
    assert_eq!(sys.n, 4);
}

#[test]
fn extremal_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("orbit.csv");
    let o = kni(&[
        "extremal",
        "--state",
        "1 0 0 1 0 0 0 1",
        "--tf",
        "1",
        "--no-thrust",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with('t'));
    assert_eq!(lines.count(), 11);
    assert!(stderr(&o).contains("max energy drift"));

    let o = kni(&["extremal", "--state", "1 0 0", "--tf", "1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("needs 8 values"));
}

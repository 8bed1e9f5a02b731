use std::path::{Path, PathBuf};
use std::process::Command;

use pvtopo::io::{parse_complex, parse_program, program_to_json};
use serde_json::Value;

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

/// Runs the binary and returns (exit code, stdout, stderr).
fn pvtopo(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_pvtopo"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

fn write(dir: &tempfile::TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn analyze_finds_the_deadlock() {
    let (code, out, _) = pvtopo(&["analyze", &data("swiss.json")]);
    assert_eq!(code, 0);
    let r = json(&out);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["deadlocks"], json("[[1,1]]"));
    assert_eq!(r["oracle"]["classes"], 2);
    assert_eq!(r["oracle"]["agrees"], true);
    assert_eq!(r["homology"]["betti"], json("[2]"));

    let (code, out, _) = pvtopo(&["analyze", &data("nested.json"), "--no-oracle"]);
    assert_eq!(code, 0);
    let r = json(&out);
    assert_eq!(r["deadlocks"], json("[]"));
    assert_eq!(r["oracle"], Value::Null);
    // both processes hold `a` on (0,3): one square hole, passed on either side
    assert_eq!(r["model"]["components"], 2);
}

#[test]
fn reports_are_byte_identical() {
    let a = pvtopo(&["analyze", &data("swiss.json")]);
    let b = pvtopo(&["analyze", &data("swiss.json")]);
    assert_eq!(a, b);
    let a = pvtopo(&["realize", &data("rp2.json")]);
    let b = pvtopo(&["realize", &data("rp2.json")]);
    assert_eq!(a, b);
}

#[test]
fn realize_reports_the_program_size() {
    let dir = tempfile::tempdir().unwrap();
    let program = dir.path().join("q.json");
    let (code, out, _) = pvtopo(&[
        "realize",
        &data("rp2.json"),
        "--program-out",
        program.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let r = json(&out);
    assert_eq!(r["program"]["processes"], 6);
    assert_eq!(r["program"]["resources"], 40);
    assert_eq!(r["program"]["max_capacity"], 5);
    assert!(r["program"]["capacities"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["capacity"] == 5));
    assert_eq!(r["valid"], true);
    assert_eq!(r["predicted"]["components"][1]["space"], "S^4");
    assert_eq!(
        r["predicted"]["homology"]["table"],
        "H0 = Z^2, H1 = Z/2, H4 = Z"
    );
    let q = parse_program(&std::fs::read_to_string(&program).unwrap()).unwrap();
    assert_eq!(q.dim(), 6);
}

#[test]
fn equivalence_of_programs() {
    let (code, out, _) = pvtopo(&["equiv", &data("swiss.json"), &data("nested.json")]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["equivalent"], true);

    let dir = tempfile::tempdir().unwrap();
    let p = parse_program(&std::fs::read_to_string(data("swiss.json")).unwrap()).unwrap();
    let elementary = p
        .with_processes(
            p.processes()
                .iter()
                .map(|q| pvtopo::elementarize(q).0)
                .collect(),
        )
        .unwrap();
    let path = write(&dir, "e.json", &program_to_json(&elementary).to_string());
    let (code, out, _) = pvtopo(&[
        "equiv",
        &data("swiss.json"),
        path.to_str().unwrap(),
        "--format",
        "text",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out, "true\n");

    let (code, out, _) = pvtopo(&["reduce", &data("swiss.json")]);
    assert_eq!(code, 0);
    let reduced = parse_program(&out).unwrap();
    assert!(reduced.processes().iter().all(|q| q.len() == 2));
}

#[test]
fn statespace_compile_statespace_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let (code, k1, _) = pvtopo(&["statespace", &data("swiss.json")]);
    assert_eq!(code, 0);
    let k1_path = write(&dir, "k1.json", &k1);
    let (code, p1, _) = pvtopo(&["compile", k1_path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let p1_path = write(&dir, "p1.json", &p1);
    let (_, k2, _) = pvtopo(&["statespace", p1_path.to_str().unwrap()]);
    let k2_path = write(&dir, "k2.json", &k2);
    let (_, p2, _) = pvtopo(&["compile", k2_path.to_str().unwrap()]);
    let p2_path = write(&dir, "p2.json", &p2);
    let (_, k3, _) = pvtopo(&["statespace", p2_path.to_str().unwrap()]);
    assert_eq!(k2, k3);
    assert_eq!(p1, p2);

    // the first and second complexes agree where their windows overlap
    let a = parse_complex(&k1).unwrap().complex;
    let b = parse_complex(&k2).unwrap().complex;
    let lo: Vec<i64> = a
        .window()
        .lo
        .iter()
        .zip(&b.window().lo)
        .map(|(x, y)| *x.max(y))
        .collect();
    let hi: Vec<i64> = a
        .window()
        .hi
        .iter()
        .zip(&b.window().hi)
        .map(|(x, y)| *x.min(y))
        .collect();
    let common = pvtopo::IntBox::new(lo, hi).unwrap();
    assert_eq!(
        a.restrict(&common)
            .unwrap()
            .first_difference(&b.restrict(&common).unwrap()),
        None
    );
}

#[test]
fn oracle_and_plot() {
    let (code, out, _) = pvtopo(&["oracle", &data("corner_holes.json"), "--cap", "1000"]);
    assert_eq!(code, 0);
    let r = json(&out);
    // two unit holes meeting at a corner: pass below, between or above
    assert_eq!(r["classes"], 3);
    // open unit holes remove no edges, so all C(8,4) paths remain
    assert_eq!(r["paths"], 70);

    let (code, out, _) = pvtopo(&["oracle", &data("corner_holes.json"), "--cap", "1"]);
    assert_eq!(code, 3);
    assert_eq!(json(&out)["classes"], Value::Null);

    let (code, out, _) = pvtopo(&[
        "oracle",
        &data("corner_holes.json"),
        "--box",
        "0..2",
        "--format",
        "text",
    ]);
    assert_eq!(code, 0);
    assert!(out.starts_with("paths: "));

    let (code, out, _) = pvtopo(&["plot", &data("corner_holes.json")]);
    assert_eq!(code, 0);
    assert!(out.starts_with("<svg"));
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        &dir,
        "bad.json",
        "{\n  \"resources\": [\n    {\"name\": \"a\",, }\n]}",
    );
    let (code, _, err) = pvtopo(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 3 column"), "{err}");

    let (code, _, err) = pvtopo(&["analyze", "/nonexistent/p.json"]);
    assert_eq!(code, 2);
    assert!(err.contains("/nonexistent/p.json"));

    let cube = write(
        &dir,
        "cube.json",
        r#"{"n": 3, "box": [[0,0,0],[2,2,2]], "holes": []}"#,
    );
    assert_eq!(pvtopo(&["plot", cube.to_str().unwrap()]).0, 2);
    assert_eq!(
        pvtopo(&["analyze", &data("swiss.json"), "--box", "1..2"]).0,
        2
    );
    assert_eq!(pvtopo(&["frobnicate"]).0, 2);
    assert_eq!(pvtopo(&["--help"]).0, 0);
}

#[test]
fn out_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.txt");
    let code = pvtopo_cli::run(
        [
            "pvtopo",
            "analyze",
            &data("swiss.json"),
            "--format",
            "text",
            "--out",
            path.to_str().unwrap(),
        ]
        .map(String::from)
        .to_vec(),
    );
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(path).unwrap();
    assert!(text.contains("deadlocks: [[1,1]]"), "{text}");
    assert!(text.contains("homology: H0 = Z^2"), "{text}");
}

#[test]
fn unknown_model_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let (code, program, _) = pvtopo(&["compile", &data("unresolved.json")]);
    assert_eq!(code, 0);
    let path = write(&dir, "p.json", &program);
    let report = dir.path().join("r.json");
    let (code, _, err) = pvtopo(&[
        "analyze",
        path.to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code, 3);
    assert!(err.contains("incomplete"));
    let r = json(&std::fs::read_to_string(report).unwrap());
    assert_eq!(r["complete"], false);
    assert_eq!(r["model"]["tree"]["kind"], "unknown");
    assert_eq!(r["homology"], Value::Null);
    assert_eq!(r["deadlocks"], json("[]"));
    assert_eq!(r["oracle"]["classes"], 1);
}

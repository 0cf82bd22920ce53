use std::path::Path;
use std::process::{Command, Output};

fn prodtri(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prodtri"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn error_json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stderr).expect("stderr is one JSON object")
}

fn write_staircase(dir: &Path, n: usize) -> String {
    let path = dir.join(format!("staircase{n}.json"));
    let p = path.to_str().unwrap().to_string();
    let o = prodtri(&["staircase", "--n", &n.to_string(), "-o", &p]);
    assert!(o.status.success());
    p
}

#[test]
fn validate_staircase() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_staircase(dir.path(), 3);
    let o = prodtri(&["validate", &p]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("valid: 10 maximal simplices"));
}

#[test]
fn invalid_file_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(
        &p,
        r#"{"m":2,"n":2,"maximal_simplices":[[[1,1],[1,2],[2,1]]]}"#,
    )
    .unwrap();
    let o = prodtri(&["validate", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("invalid"));
    assert_eq!(error_json(&o)["error"], "invalid_triangulation");
}

#[test]
fn malformed_json_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("broken.json");
    std::fs::write(&p, "{\"m\": 2,\n \"n\": }").unwrap();
    let o = prodtri(&["flips", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let e = error_json(&o);
    assert_eq!(e["error"], "parse");
    assert_eq!(e["detail"]["line"], 2);
}

#[test]
fn flips_and_apply() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_staircase(dir.path(), 2);
    let o = prodtri(&["flips", &p]);
    let text = stdout(&o);
    assert!(text.ends_with("3 flips\n"));
    let first = text.lines().next().unwrap().to_string();
    let out = dir.path().join("flipped.json");
    let o = prodtri(&[
        "apply",
        &p,
        "--circuit",
        &first,
        "-o",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(prodtri(&["validate", out.to_str().unwrap()])
        .status
        .success());

    let o = prodtri(&["apply", &p, "--circuit", "e1f1,e2f2|e1f2,e2f1"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_json(&o)["error"], "unsupported_flip");
}

#[test]
fn connect_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_staircase(dir.path(), 3);
    // move away from the staircase with two flips
    let mut cur = p.clone();
    for k in 0..2 {
        let first = stdout(&prodtri(&["flips", &cur]))
            .lines()
            .next()
            .unwrap()
            .to_string();
        let next = dir
            .path()
            .join(format!("step{k}.json"))
            .to_str()
            .unwrap()
            .to_string();
        assert!(prodtri(&["apply", &cur, "--circuit", &first, "-o", &next])
            .status
            .success());
        cur = next;
    }
    let seq = dir.path().join("seq.json");
    let o = prodtri(&[
        "connect",
        &cur,
        "--emit-sequence",
        seq.to_str().unwrap(),
        "--trace",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("phase I: "));
    assert!(text.contains("phase III: "));
    let end = dir.path().join("end.json");
    let o = prodtri(&[
        "apply",
        &cur,
        "--sequence",
        seq.to_str().unwrap(),
        "-o",
        end.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(std::fs::read(&end).unwrap(), std::fs::read(&p).unwrap());
}

#[test]
fn connect_rejects_other_row_counts() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("two.json");
    std::fs::write(
        &p,
        r#"{"m":2,"n":2,"maximal_simplices":[[[1,1],[1,2],[2,1]],[[1,2],[2,1],[2,2]]]}"#,
    )
    .unwrap();
    let o = prodtri(&["connect", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_json(&o)["error"], "wrong_dims");
}

#[test]
fn enumerate_and_flip_graph() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let o = prodtri(&["enumerate", "--m", "2", "--n", "3", "--cache", cache]);
    assert_eq!(stdout(&o), "6\n");
    assert!(dir.path().join("corpus_m2_n3.json").exists());
    let o = prodtri(&["flip-graph", "--m", "2", "--n", "2", "--cache", cache]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "2 nodes, 1 edges, connected\n");
}

#[test]
fn orders_of_the_staircase() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_staircase(dir.path(), 3);
    assert_eq!(stdout(&prodtri(&["orders", &p])), "f1 < f2 < f3\n");
    assert_eq!(
        stdout(&prodtri(&["orders", &p, "--rows", "4", "3"])),
        "f3 < f2 < f1\n"
    );
    let o = prodtri(&["orders", &p, "--rows", "1", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn export_mixed_with_svg() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("seg.json");
    std::fs::write(
        &p,
        r#"{"m":2,"n":2,"maximal_simplices":[[[1,1],[1,2],[2,1]],[[1,2],[2,1],[2,2]]]}"#,
    )
    .unwrap();
    let svg = dir.path().join("cells.svg");
    let o = prodtri(&[
        "export-mixed",
        p.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["cells"].as_array().unwrap().len(), 2);
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));

    let p4 = write_staircase(dir.path(), 2);
    let o = prodtri(&["export-mixed", &p4, "--svg", svg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_json(&o)["error"], "svg");
}

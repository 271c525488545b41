//! End-to-end checks of the dockit binary: payloads on stdout, exit codes
//! for domain failures versus usage errors, and the two serve modes.

use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpStream;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

fn dockit() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dockit"))
}

fn run(args: &[&str]) -> Output {
    dockit().args(args).output().expect("binary runs")
}

fn stdout_json(output: &Output) -> serde_json::Value {
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

const CLEAN: &str = "<!DOCTYPE html>\n<html>\n<head>\n<style>\n\
    body { display: flex; flex-direction: column; width: 330px; \
    height: 200px; padding: 10px; gap: 8px; }\n\
    p { margin: 0; font-size: 14px; }\n\
    </style>\n</head>\n<body>\n\
    <p>Harvest meridian atlas.</p>\n\
    <p>Juniper lattice ember cove.</p>\n\
    </body>\n</html>\n";

const OVERTALL: &str = "<!DOCTYPE html>\n<html>\n<head>\n<style>\n\
    body { display: flex; flex-direction: column; width: 330px; \
    height: 200px; }\n\
    p { margin: 0; height: 260px; flex-shrink: 0; }\n\
    </style>\n</head>\n<body>\n<p>Too tall.</p>\n</body>\n</html>\n";

fn write_doc(dir: &Path, name: &str, html: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, html).unwrap();
    path
}

#[test]
fn reward_single_file_prints_one_report() {
    let dir = tempfile::tempdir().unwrap();
    let doc = write_doc(dir.path(), "gt.html", CLEAN);
    let out = run(&["reward", "--height", "200", doc.to_str().unwrap()]);
    let report = stdout_json(&out);
    assert_eq!(report["rho"], 1.0);
    assert_eq!(report["reward"], 1.0);
    assert_eq!(report["branch"], "in-band");
    assert_eq!(report["gamma"], 0.05);
    assert_eq!(report["alpha"], 2.0);
}

#[test]
fn reward_many_files_prints_reports_and_advantages() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_doc(dir.path(), "a.html", CLEAN);
    let b = write_doc(dir.path(), "b.html", OVERTALL);
    let out = run(&[
        "reward",
        "--height",
        "200",
        a.to_str().unwrap(),
        b.to_str().unwrap(),
    ]);
    let batch = stdout_json(&out);
    assert_eq!(batch["reports"].as_array().unwrap().len(), 2);
    assert_eq!(batch["advantages"].as_array().unwrap().len(), 2);
    assert_eq!(batch["reports"][0]["branch"], "in-band");
    assert_eq!(batch["reports"][1]["branch"], "overflow");
}

#[test]
fn reward_on_a_nonpositive_target_fails_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let doc = write_doc(dir.path(), "gt.html", CLEAN);
    let out = run(&["reward", "--height", "0", doc.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn validate_separates_keep_from_exclude_by_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let clean = write_doc(dir.path(), "clean.html", CLEAN);
    let overtall = write_doc(dir.path(), "overtall.html", OVERTALL);

    let ok = run(&["validate", clean.to_str().unwrap()]);
    let report = stdout_json(&ok);
    assert_eq!(report["verdict"], "keep");

    let bad = dockit()
        .args(["validate", overtall.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&bad.stdout).unwrap();
    assert_eq!(report["verdict"], "exclude");
    assert_eq!(report["violations"][0]["code"], "R4");
}

#[test]
fn validate_reports_unparseable_source_as_d0() {
    let dir = tempfile::tempdir().unwrap();
    let doc = write_doc(dir.path(), "broken.html", "<html><body { nope");
    let out = dockit()
        .args(["validate", doc.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["violations"][0]["code"], "D0");
}

#[test]
fn validate_many_files_prints_an_array() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_doc(dir.path(), "a.html", CLEAN);
    let b = write_doc(dir.path(), "b.html", CLEAN);
    let out = run(&["validate", a.to_str().unwrap(), b.to_str().unwrap()]);
    let reports = stdout_json(&out);
    assert_eq!(reports.as_array().unwrap().len(), 2);
    assert!(reports[0]["file"].as_str().unwrap().ends_with("a.html"));
}

#[test]
fn advantage_checks_the_group_size() {
    let out = run(&["advantage", "1", "1", "0.6", "0.55", "0"]);
    let advantages = stdout_json(&out);
    let values: Vec<f64> = advantages
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert_eq!(values.len(), 5);
    assert!(values.iter().sum::<f64>().abs() < 1e-6);

    let wrong = run(&["advantage", "1", "0"]);
    assert_eq!(wrong.status.code(), Some(1));

    let free = run(&["advantage", "--free-size", "1", "0"]);
    assert!(free.status.success());
}

#[test]
fn layout_prints_the_box_tree() {
    let dir = tempfile::tempdir().unwrap();
    let doc = write_doc(dir.path(), "doc.html", CLEAN);
    let out = run(&["layout", doc.to_str().unwrap()]);
    let tree = stdout_json(&out);
    assert_eq!(tree["boxes"][0]["tag"], "body");
    assert_eq!(tree["viewport"], serde_json::json!([330.0, 200.0]));
}

#[test]
fn render_svg_writes_a_file_or_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let doc = write_doc(dir.path(), "doc.html", CLEAN);
    let out_path = dir.path().join("doc.svg");
    let out = run(&[
        "render-svg",
        doc.to_str().unwrap(),
        "--output",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let svg = std::fs::read_to_string(&out_path).unwrap();
    assert!(svg.starts_with("<svg"));

    let stdout = run(&["render-svg", doc.to_str().unwrap()]);
    assert!(String::from_utf8(stdout.stdout).unwrap().starts_with("<svg"));
}

#[test]
fn metrics_emits_json_or_csv() {
    let dir = tempfile::tempdir().unwrap();
    let doc = write_doc(dir.path(), "doc.html", CLEAN);
    let out = run(&["metrics", doc.to_str().unwrap()]);
    let payload = stdout_json(&out);
    assert_eq!(payload["per_document"][0]["n_elements"], 2);
    assert_eq!(payload["aggregate"]["overlap"], 0.0);

    let csv = run(&["metrics", "--csv", doc.to_str().unwrap()]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("file,overlap,alignment,height,n_elements\n"));
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn derender_eval_scores_a_document_against_itself_perfectly() {
    let dir = tempfile::tempdir().unwrap();
    let doc = write_doc(dir.path(), "doc.html", CLEAN);
    let out = run(&[
        "derender-eval",
        doc.to_str().unwrap(),
        "--reference",
        doc.to_str().unwrap(),
    ]);
    let scores = stdout_json(&out);
    assert_eq!(scores["block"], 1.0);
    assert_eq!(scores["text"], 1.0);
    assert_eq!(scores["position"], 1.0);
    assert_eq!(scores["color"], 1.0);
}

#[test]
fn extract_elements_lists_texts_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let doc = write_doc(dir.path(), "doc.html", CLEAN);
    let out = run(&["extract-elements", doc.to_str().unwrap()]);
    let set = stdout_json(&out);
    assert_eq!(
        set["texts"],
        serde_json::json!(["Harvest meridian atlas.", "Juniper lattice ember cove."])
    );
    assert_eq!(set["images"], serde_json::json!([]));
}

#[test]
fn to_flat_positions_leaf_elements() {
    let dir = tempfile::tempdir().unwrap();
    let doc = write_doc(dir.path(), "doc.html", CLEAN);
    let out = run(&["to-flat", doc.to_str().unwrap()]);
    let flat = stdout_json(&out);
    assert_eq!(flat["canvas"], serde_json::json!([330.0, 200.0]));
    assert_eq!(flat["elements"][0]["type"], "text");
    assert_eq!(flat["elements"][0]["left"], 10.0);
}

#[test]
fn build_dataset_is_deterministic_and_feeds_tasks_and_splits() {
    let dir = tempfile::tempdir().unwrap();
    let ds_a = dir.path().join("a");
    let ds_b = dir.path().join("b");
    for ds in [&ds_a, &ds_b] {
        let out = run(&[
            "build-dataset",
            "--synthetic",
            "14",
            "--seed",
            "4",
            "--dataset-dir",
            ds.to_str().unwrap(),
            "--jobs",
            "2",
        ]);
        let summary = stdout_json(&out);
        assert_eq!(summary["processed"], 14);
        assert_eq!(summary["io_failures"], 0);
    }
    let index_a = std::fs::read(ds_a.join("manifest.jsonl")).unwrap();
    let index_b = std::fs::read(ds_b.join("manifest.jsonl")).unwrap();
    assert_eq!(index_a, index_b);

    let tasks = run(&[
        "make-tasks",
        "--dataset",
        ds_a.to_str().unwrap(),
        "--kind",
        "i2d",
        "--seed",
        "4",
    ]);
    let text = String::from_utf8(tasks.stdout).unwrap();
    assert!(!text.is_empty());
    for line in text.lines() {
        let pair: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(pair["kind"], "I2D");
        assert!(pair["input"]["intention"].is_string());
    }

    let split = run(&["split", "--dataset", ds_a.to_str().unwrap(), "--seed", "4"]);
    let splits = stdout_json(&split);
    let total = splits["train"].as_array().unwrap().len()
        + splits["val"].as_array().unwrap().len()
        + splits["test"].as_array().unwrap().len();
    let kept: usize = std::fs::read_to_string(ds_a.join("manifest.jsonl"))
        .unwrap()
        .lines()
        .filter(|l| l.contains("\"kept\""))
        .count();
    assert_eq!(total, kept);
}

#[test]
fn make_tasks_accepts_a_single_record_directory() {
    let dir = tempfile::tempdir().unwrap();
    let ds = dir.path().join("ds");
    run(&[
        "build-dataset",
        "--synthetic",
        "14",
        "--seed",
        "4",
        "--dataset-dir",
        ds.to_str().unwrap(),
    ]);
    let kept_dir = std::fs::read_dir(&ds)
        .unwrap()
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.is_dir())
        .find(|p| {
            std::fs::read_to_string(p.join("record.json"))
                .map(|t| t.contains("\"kept\""))
                .unwrap_or(false)
        })
        .expect("a kept record exists");
    let out = run(&[
        "make-tasks",
        "--dataset",
        kept_dir.to_str().unwrap(),
        "--kind",
        "dd",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let pair: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(pair["kind"], "DD");
    assert_eq!(pair["input"]["screenshot"], "<image>");
    let shot = pair["screenshot_path"].as_str().unwrap();
    assert!(ds.join(shot).is_file(), "{shot} resolves from the root");
}

#[test]
fn split_partitions_explicit_ids() {
    let out = run(&[
        "split", "--seed", "7", "a", "b", "c", "d", "e", "f", "g", "h", "i", "j",
    ]);
    let splits = stdout_json(&out);
    assert_eq!(splits["val"].as_array().unwrap().len(), 1);
    assert_eq!(splits["test"].as_array().unwrap().len(), 1);
    assert_eq!(splits["train"].as_array().unwrap().len(), 8);
}

#[test]
fn usage_errors_exit_with_two() {
    let out = dockit().args(["build-dataset"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let missing = dockit()
        .args(["layout", "/nonexistent/doc.html"])
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(2));

    let unknown = dockit().args(["frobnicate"]).output().unwrap();
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn serve_stdio_answers_line_requests() {
    let mut child = dockit()
        .arg("serve")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let mut stdin = child.stdin.take().unwrap();
    let request = format!(
        "{}\n",
        serde_json::json!({
            "target": {"width": 330.0, "height": 200.0},
            "candidates": [CLEAN, OVERTALL],
        })
    );
    stdin.write_all(request.as_bytes()).unwrap();
    stdin.write_all(b"not json\n").unwrap();
    drop(stdin);

    let reader = BufReader::new(child.stdout.take().unwrap());
    let lines: Vec<String> = reader.lines().map(|l| l.unwrap()).collect();
    assert_eq!(lines.len(), 2);
    let response: serde_json::Value = serde_json::from_str(&lines[0]).unwrap();
    assert_eq!(response["reports"][0]["branch"], "in-band");
    assert_eq!(response["reports"][1]["branch"], "overflow");
    assert_eq!(response["advantages"].as_array().unwrap().len(), 2);
    let error: serde_json::Value = serde_json::from_str(&lines[1]).unwrap();
    assert!(error["error"].is_string());
    assert!(child.wait().unwrap().success());
}

#[test]
fn serve_http_answers_reward_posts() {
    let mut child = dockit()
        .args(["serve", "--http", "127.0.0.1:0"])
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut stderr = BufReader::new(child.stderr.take().unwrap());
    let mut banner = String::new();
    stderr.read_line(&mut banner).unwrap();
    let addr = banner
        .trim()
        .rsplit(' ')
        .next()
        .expect("banner ends with the address")
        .to_string();

    let body = serde_json::json!({
        "target": {"width": 330.0, "height": 200.0},
        "candidates": [CLEAN],
    })
    .to_string();
    let mut stream = TcpStream::connect(&addr).unwrap();
    write!(
        stream,
        "POST /reward HTTP/1.1\r\nhost: {addr}\r\ncontent-type: application/json\r\n\
         content-length: {}\r\nconnection: close\r\n\r\n{body}",
        body.len()
    )
    .unwrap();
    let mut raw = String::new();
    stream.read_to_string(&mut raw).unwrap();
    child.kill().unwrap();
    child.wait().unwrap();

    assert!(raw.starts_with("HTTP/1.1 200"), "{raw}");
    let json_start = raw.find("\r\n\r\n").unwrap() + 4;
    let response: serde_json::Value = serde_json::from_str(raw[json_start..].trim()).unwrap();
    assert_eq!(response["reports"][0]["reward"], 1.0);
    assert_eq!(response["advantages"], serde_json::json!([0.0]));
}

mod common;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use webxr_spl::configurator::serialize_config;
use webxr_spl::interface::cli::{run, EXIT_INVALID, EXIT_IO, EXIT_OK, EXIT_USAGE};
use webxr_spl::interface::{EnumerateReport, PropagateReport};
use webxr_spl::model::{builtin_webxr_model, serialize_model};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cli(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("webxr-spl").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_worked_example_is_silent_success() {
    let o = cli(&["config", "validate", "--config", path(&fixture("worked_example.cfg"))]);
    assert_eq!(o.code, EXIT_OK);
    assert_eq!(o.stdout, "");
    assert_eq!(o.stderr, "");
}

#[test]
fn validate_bad_prints_one_requires_line() {
    let o = cli(&["config", "validate", "--config", path(&fixture("bad.cfg"))]);
    assert_eq!(o.code, EXIT_INVALID);
    let lines: Vec<_> = o.stdout.lines().collect();
    assert_eq!(lines.len(), 1);
    assert!(lines[0].starts_with("RequiresViolated [tactile, wearable]"), "{}", lines[0]);
}

#[test]
fn generate_writes_document_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("app.html");
    let manifest = dir.path().join("app.manifest.json");
    let o = cli(&[
        "generate", "--config", path(&fixture("worked_example.cfg")), "--out", path(&out), "--manifest", path(&manifest),
    ]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let doc = fs::read_to_string(&out).unwrap();
    assert!(doc.contains("hand-controls"));
    assert!(fs::read_to_string(&manifest).unwrap().contains("\"caused_by\""));
}

#[test]
fn generate_options() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("app.html");
    let o = cli(&[
        "generate", "--config", path(&fixture("worked_example.cfg")), "--out", path(&out), "--title", "Museum", "--author",
        "Lab", "--no-demo", "--runtime-url", "https://cdn.test/aframe.js",
    ]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let doc = fs::read_to_string(&out).unwrap();
    assert!(doc.contains("<title>Museum</title>"));
    assert!(doc.contains("content=\"Lab\""));
    assert!(doc.contains("https://cdn.test/aframe.js"));
    assert!(!doc.contains("a-box") && !doc.contains("a-sky"));
}

#[test]
fn generate_rejects_invalid_configuration() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("app.html");
    let o = cli(&["generate", "--config", path(&fixture("bad.cfg")), "--out", path(&out)]);
    assert_eq!(o.code, EXIT_INVALID);
    assert!(o.stderr.contains("RequiresViolated"));
    assert!(!out.exists());
    let o = cli(&["generate", "--config", path(&fixture("worked_example.cfg")), "--out", path(&out), "--title", ""]);
    assert_eq!(o.code, EXIT_USAGE);
}

#[test]
fn model_show_prints_canonical_document() {
    let o = cli(&["model", "show"]);
    assert_eq!(o.code, EXIT_OK);
    assert_eq!(o.stdout, serialize_model(&builtin_webxr_model()));
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("model.json");
    fs::write(&file, &o.stdout).unwrap();
    let again = cli(&["model", "show", "--file", path(&file)]);
    assert_eq!(again.stdout, o.stdout);
    fs::write(&file, "{\"root\": ").unwrap();
    let broken = cli(&["model", "show", "--file", path(&file)]);
    assert_eq!(broken.code, EXIT_IO);
    assert!(broken.stderr.contains("line"), "{}", broken.stderr);
}

#[test]
fn propagate_reports_forced_and_conflicts() {
    let dir = tempfile::tempdir().unwrap();
    let m = builtin_webxr_model();
    let cfg = dir.path().join("tactile.cfg");
    fs::write(&cfg, serialize_config(&webxr_spl::configurator::Configuration::new(&m).select("tactile"), &m)).unwrap();
    let o = cli(&["config", "propagate", "--config", path(&cfg)]);
    assert_eq!(o.code, EXIT_OK);
    let report: PropagateReport = serde_json::from_str(&o.stdout).unwrap();
    assert!(report.conflict.is_none());
    assert!(report.forced.iter().any(|f| f.feature.as_str() == "wearable"));

    let o = cli(&["config", "propagate", "--config", path(&fixture("bad.cfg"))]);
    assert_eq!(o.code, EXIT_INVALID);
    let report: PropagateReport = serde_json::from_str(&o.stdout).unwrap();
    assert!(report.conflict.is_some());
}

#[test]
fn enumerate_counts_and_lists() {
    let o = cli(&["config", "enumerate", "--config", path(&fixture("worked_example.cfg"))]);
    assert_eq!(o.code, EXIT_OK);
    let r: EnumerateReport = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!((r.count, r.truncated), (1, false));
    let o = cli(&["config", "enumerate", "--limit", "3", "--list"]);
    let r: EnumerateReport = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!((r.count, r.truncated), (3, true));
    assert_eq!(r.configurations.unwrap().len(), 3);
}

#[test]
fn usage_and_io_errors() {
    assert_eq!(cli(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(cli(&["config", "validate"]).code, EXIT_USAGE);
    assert_eq!(cli(&["config", "enumerate", "--limit", "many"]).code, EXIT_USAGE);
    let help = cli(&["--help"]);
    assert_eq!(help.code, EXIT_OK);
    assert!(help.stdout.contains("generate"));
    let missing = cli(&["config", "validate", "--config", "/nonexistent/x.cfg"]);
    assert_eq!(missing.code, EXIT_IO);
    assert!(missing.stderr.starts_with("error: cannot read"));
    assert!(!missing.stderr.contains("panicked"));
    assert_eq!(cli(&["--model", "/nonexistent/model.json", "model", "show"]).code, EXIT_IO);
}

#[test]
fn config_for_another_model_is_a_validation_failure() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("other.cfg");
    fs::write(&cfg, r#"{"model": "other-app", "decisions": []}"#).unwrap();
    assert_eq!(cli(&["config", "validate", "--config", path(&cfg)]).code, EXIT_INVALID);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_webxr-spl");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let ok = status(&["config", "validate", "--config", path(&fixture("worked_example.cfg"))]);
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    assert!(ok.stdout.is_empty());
    let bad = status(&["config", "validate", "--config", path(&fixture("bad.cfg"))]);
    assert_eq!(bad.status.code(), Some(EXIT_INVALID));
    assert_eq!(String::from_utf8_lossy(&bad.stdout).lines().count(), 1);
    assert_eq!(status(&["nope"]).status.code(), Some(EXIT_USAGE));
    let serve = status(&["serve", "--config-file", "/nonexistent/service.json"]);
    assert_eq!(serve.status.code(), Some(EXIT_IO));
}

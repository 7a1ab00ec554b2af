use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn chu(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chu")).args(args).current_dir(cwd).output().expect("binary runs")
}

fn script(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("s.chu");
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn golden_report_matches_across_thread_counts() {
    let want = std::fs::read(golden("sample.json")).unwrap();
    let sample = golden("sample.chu");
    for threads in ["1", "4"] {
        let dir = tempfile::tempdir().unwrap();
        let out = chu(&[sample.to_str().unwrap(), "--seed", "0", "--threads", threads], dir.path());
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let got = std::fs::read(dir.path().join("sample.out.json")).unwrap();
        assert!(got == want, "report differs from golden with {threads} threads");
        assert!(String::from_utf8_lossy(&out.stdout).contains("PASS"));
    }
}

#[test]
fn induced_failure_replays() {
    let dir = tempfile::tempdir().unwrap();
    let out = chu(&[golden("induced_failure.chu").to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let failed = report["results"].as_array().unwrap().iter().find(|r| r["status"] == "fail").unwrap();
    assert!(failed["counterexample"].is_array());
    let replay = failed["replay"].as_str().unwrap();
    let s = script(dir.path(), &format!("field 3\n{replay}\n"));
    let again = chu(&[s.to_str().unwrap()], dir.path());
    assert_eq!(again.status.code(), Some(1));
    let r2: serde_json::Value = serde_json::from_slice(&again.stdout).unwrap();
    assert_eq!(r2["results"][0]["details"]["reason"], failed["details"]["reason"]);
    assert_eq!(r2["results"][0]["counterexample"], failed["counterexample"]);
}

#[test]
fn malformed_script_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = chu(&[golden("malformed.chu").to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("3:18: unbound name `B`"));
    assert!(out.stdout.is_empty());
}

#[test]
fn unwritable_path_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let s = script(dir.path(), "check twoadj identity\nreport json no/such/dir/r.json\n");
    assert_eq!(chu(&[s.to_str().unwrap()], dir.path()).status.code(), Some(2));
}

#[test]
fn missing_script_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(chu(&["nope.chu"], dir.path()).status.code(), Some(2));
}

#[test]
fn seed_changes_samples_but_not_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let s = script(dir.path(), "field 2\nlaws L5 --samples 5 --corrupt\n");
    let a = chu(&[s.to_str().unwrap(), "--seed", "1"], dir.path());
    let b = chu(&[s.to_str().unwrap(), "--seed", "2"], dir.path());
    assert_eq!((a.status.code(), b.status.code()), (Some(1), Some(1)));
    assert_ne!(a.stdout, b.stdout);
    assert_eq!(a.stdout, chu(&[s.to_str().unwrap(), "--seed", "1"], dir.path()).stdout);
}

#[test]
fn flags_set_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let s = script(dir.path(), "field 5\nlaws L2\n");
    let out = chu(&[s.to_str().unwrap(), "--samples", "7", "--dims", "2", "--format", "text"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"trials\":7") && text.contains("\"max_dim\":2"), "{text}");
}

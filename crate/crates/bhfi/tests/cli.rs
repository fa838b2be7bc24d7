use std::path::Path;
use std::process::{Command, Output};

fn bhfi(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bhfi")).args(args).current_dir(cwd).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn hfihat_builtin_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = bhfi(&["hfihat", "--builtin", "cfd0", "--builtin", "cfd0", "--json"], dir.path());
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with(r#"{"hf_dim":2,"iota":[[1,0],[0,1]],"ker":2,"hfi_dim":4,"Q":"#), "{text}");
    // Byte-identical across runs.
    let again = bhfi(&["hfihat", "--builtin", "cfd0", "--builtin", "cfd0", "--json"], dir.path());
    assert_eq!(o.stdout, again.stdout);
}

#[test]
fn dump_then_verify_and_pair_files() {
    let dir = tempfile::tempdir().unwrap();
    assert!(bhfi(&["dump-standard", "--out", "fx"], dir.path()).status.success());
    let o = bhfi(&["verify", "fx/cfda_az_genus1.json", "--json"], dir.path());
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["results"][0]["generators"], 8);
    assert_eq!(v["pass"], true);
    let o = bhfi(&["hfhat", "fx/cfa0_genus1.json", "fx/cfd0.json", "--json"], dir.path());
    assert_eq!(stdout(&o).trim(), r#"{"hf_dim":2}"#);
    let o = bhfi(&["hfhat", "fx/cfd0.json", "fx/cfd0.json", "--json", "--out", "r.json"], dir.path());
    assert!(o.status.success());
    assert_eq!(std::fs::read_to_string(dir.path().join("r.json")).unwrap().trim(), r#"{"hf_dim":2}"#);
}

#[test]
fn triangle_command_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = bhfi(&["triangle", "--builtin", "cfa0_k1", "--json"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pass"], true);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), "{").unwrap();
    assert_eq!(bhfi(&["verify", "bad.json"], dir.path()).status.code(), Some(2));
    // Idempotents are consistent but delta squared contains rho_1_3 a.
    let broken = r#"{"kind":"D","circle":{"k":1,"matching":[[1,3],[2,4]]},
        "generators":[{"label":"a","idem":[1]},{"label":"b","idem":[2]}],
        "ops":[{"src":"a","out":[{"left_idem":[1],"moving":[[1,2]],"horizontal":[]}],"dst":"b"},
               {"src":"b","out":[{"left_idem":[2],"moving":[[2,3]],"horizontal":[]}],"dst":"a"}]}"#;
    std::fs::write(dir.path().join("broken.json"), broken).unwrap();
    let o = bhfi(&["verify", "broken.json", "--json"], dir.path());
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
    assert_eq!(bhfi(&["hfhat", "broken.json", "broken.json"], dir.path()).status.code(), Some(3));
    assert_eq!(bhfi(&["hfihat", "--builtin", "cfd0"], dir.path()).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_bhfi"))
        .args(["hfhat", "--builtin", "cfd0_k2", "--builtin", "cfd0_k2"])
        .env("BHFI_MAX_GENERATORS", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(5));
}

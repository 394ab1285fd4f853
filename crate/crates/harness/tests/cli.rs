use std::fs;
use std::process::Command;

fn sfmis() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sfmis"))
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"n": 400, "beta": [3.0, 4.0], "trials": 5, "seed": 7}"#).unwrap();
    let out = dir.path().join("out");
    let status = sfmis()
        .args(["degeneracy", "--trials", "2", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let csv = fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.extension().is_some_and(|x| x == "csv"))
        .expect("csv written");
    let mut rows = csv::Reader::from_path(csv).unwrap();
    // two betas, two trials each
    assert_eq!(rows.records().count(), 4);
}

#[test]
fn rejects_invalid_configuration() {
    let dir = tempfile::tempdir().unwrap();
    let out = sfmis().args(["mis", "--n", "100", "--beta", "1.5", "--out"]).arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));

    let cfg = dir.path().join("bad.json");
    fs::write(&cfg, r#"{"bogus": 1}"#).unwrap();
    let out = sfmis().args(["mis", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn strict_mode_fails_on_error_rows() {
    let dir = tempfile::tempdir().unwrap();
    let run = |strict: bool| {
        let mut c = sfmis();
        c.args(["mis", "--n", "300", "--beta", "3.5", "--trials", "1", "--strategy", "luby", "--round-limit", "1", "--out"])
            .arg(dir.path());
        if strict {
            c.arg("--strict");
        }
        c.status().unwrap()
    };
    assert!(run(false).success());
    assert!(!run(true).success());
}

#[test]
fn traces_are_written_on_request() {
    let dir = tempfile::tempdir().unwrap();
    let status = sfmis()
        .args(["mis", "--n", "200", "--beta", "2.5", "--trials", "1", "--strategy", "alg3", "--trace", "--out"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    let traces: Vec<_> = fs::read_dir(dir.path().join("traces")).unwrap().collect();
    assert_eq!(traces.len(), 1);
    let text = fs::read_to_string(traces[0].as_ref().unwrap().path()).unwrap();
    for line in text.lines() {
        serde_json::from_str::<serde_json::Value>(line).unwrap();
    }
}

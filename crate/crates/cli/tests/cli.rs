use std::process::{Command, Output};

fn gamble(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gamble"))
        .args(args)
        .env_remove("GAMBLE_SEED")
        .env_remove("GAMBLE_OUT_DIR")
        .output()
        .expect("run gamble")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

#[test]
fn header_carries_run_metadata() {
    let o = gamble(&["kelly", "--seed", "5", "--reps", "1000", "--delta", "0.05", "--sigma", "0.02"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let first = text.lines().next().unwrap();
    assert!(first.starts_with("# seed=5 reps=1000 version="), "{first}");
    assert!(first.contains("params={"));
    assert!(first.contains(r#""command":"kelly""#));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).next().unwrap(), "delta,sigma,growth,growth_mc,growth_mc_se");
}

#[test]
fn same_seed_same_bytes_different_seed_different_bytes() {
    let args = ["bet", "--reps", "50000", "--sigma-a", "0.05", "--sigma-b", "0.1"];
    let a = gamble(&[&args[..], &["--seed", "3"]].concat());
    let b = gamble(&[&args[..], &["--seed", "3"]].concat());
    let c = gamble(&[&args[..], &["--seed", "4"]].concat());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn seed_from_environment() {
    let run = |env_seed: Option<&str>, extra: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_gamble"));
        cmd.args(["kelly", "--reps", "2000", "--delta", "0.05", "--sigma", "0.05"]).args(extra);
        cmd.env_remove("GAMBLE_OUT_DIR");
        match env_seed {
            Some(s) => cmd.env("GAMBLE_SEED", s),
            None => cmd.env_remove("GAMBLE_SEED"),
        };
        cmd.output().unwrap().stdout
    };
    assert_eq!(run(Some("9"), &[]), run(None, &["--seed", "9"]));
    assert_eq!(run(Some("8"), &["--seed", "9"]), run(None, &["--seed", "9"]));
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_gamble"))
        .args(["fig2-left", "--sigma-over-l", "0,0.1"])
        .env("GAMBLE_OUT_DIR", dir.path())
        .env_remove("GAMBLE_SEED")
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(dir.path().join("fig2-left.csv")).unwrap();
    assert!(text.contains("sigma_over_l,u,h"));
}

#[test]
fn svg_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.svg");
    let o = gamble(&["fig4", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("<path").count(), 4);
    assert!(svg.contains("seed=1"));
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    let out = dir.path().join("out.csv");
    std::fs::write(
        &cfg,
        format!(
            r#"{{"subcommand":"kelly","parameters":{{"delta":[0.05],"sigma":"0.05"}},"seed":11,"reps":3000,"output_path":{:?}}}"#,
            out.to_str().unwrap()
        ),
    )
    .unwrap();
    let o = gamble(&["--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let via_config = std::fs::read_to_string(&out).unwrap();
    let direct = stdout(&gamble(&["kelly", "--seed", "11", "--reps", "3000", "--delta", "0.05", "--sigma", "0.05"]));
    assert_eq!(via_config, direct);

    // Command-line flags win over the file.
    let out2 = dir.path().join("out2.csv");
    let o = gamble(&["kelly", "--config", cfg.to_str().unwrap(), "--sigma", "0.1", "--out", out2.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out2).unwrap();
    assert!(text.contains(r#""sigma":"0.1""#), "{text}");
    assert_eq!(data_rows(&text)[0][1], 0.1);
    let o = gamble(&["--config", cfg.to_str().unwrap(), "--seed", "12"]);
    assert!(o.status.success());
    assert!(std::fs::read_to_string(&out).unwrap().starts_with("# seed=12 "));
}

#[test]
fn config_conflicts_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"subcommand":"fig3"}"#).unwrap();
    assert_eq!(gamble(&["kelly", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&cfg, r#"{"subcommand":"fig3","bogus":1}"#).unwrap();
    assert_eq!(gamble(&["--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(gamble(&["--config", "/nonexistent/run.json"]).status.code(), Some(1));
}

#[test]
fn exit_statuses() {
    assert_eq!(gamble(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(gamble(&[]).status.code(), Some(2));
    assert_eq!(gamble(&["kelly", "--sigma", "abc"]).status.code(), Some(2));
    assert_eq!(gamble(&["kelly", "--reps", "0"]).status.code(), Some(2));
    let domain = gamble(&["kelly", "--delta", "0.4", "--reps", "10"]);
    assert_eq!(domain.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&domain.stderr).contains("domain error"));
    assert_eq!(gamble(&["duel", "--rho-a", "0.5"]).status.code(), Some(3));
    let conv = gamble(&["fig3", "--tol", "1e-300", "--sigma-a", "0.5", "--sigma-b", "1"]);
    assert_eq!(conv.status.code(), Some(4), "{}", String::from_utf8_lossy(&conv.stderr));
    assert_eq!(gamble(&["--help"]).status.code(), Some(0));
}

#[test]
fn tournament_scores_a_record_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("r.csv");
    std::fs::write(&f, "q,outcome\n0.6,1\n0.5,0\n").unwrap();
    let o = gamble(&["tournament", "score", "--file", f.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = data_rows(&stdout(&o));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][0], 2.0);
    assert!((rows[0][1] - 0.41).abs() < 1e-9);

    std::fs::write(&f, "0.6,1\n0.5,7\n").unwrap();
    let bad = gamble(&["tournament", "score", "--file", f.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("line 2"));
}

#[test]
fn every_subcommand_runs() {
    for cmd in [
        &["fig2-left", "--mc", "--reps", "1000"][..],
        &["fig2-right", "--r", "-0.5,0,0.5"],
        &["fig3", "--sigma-b", "0,1"],
        &["fig4", "--mc", "--reps", "1000", "--delta", "-0.05,0.05"],
        &["fig5", "--reps", "500", "--sigma", "0,0.5"],
        &["fig6", "--reps", "500", "--sigma", "0,0.5"],
        &["bet", "--reps", "1000", "--rho", "0.5"],
        &["bookie", "--reps", "1000", "--r", "0", "--optimize"],
        &["skill", "--reps", "1000", "--mc", "--zip"],
        &["kelly", "--reps", "1000"],
        &["duel", "--mc", "--reps", "1000"],
        &["evt", "--reps", "500"],
        &["tournament", "--reps", "200"],
        &["nature", "--reps", "1000", "--p-true", "0.45"],
    ] {
        let o = gamble(cmd);
        assert!(o.status.success(), "{cmd:?}: {}", String::from_utf8_lossy(&o.stderr));
        let rows = data_rows(&stdout(&o));
        assert!(!rows.is_empty(), "{cmd:?}");
        assert!(rows.iter().flatten().all(|v| v.is_finite()), "{cmd:?}");
    }
}

#[test]
fn fig2_left_values() {
    let o = gamble(&["fig2-left"]);
    let rows = data_rows(&stdout(&o));
    assert_eq!(rows.len(), 101);
    assert!((rows[0][2] - 2.0 / 27.0).abs() < 1e-9);
    assert!((rows[100][2] - 1.0 / 27.0).abs() < 1e-9);
    assert!(rows.windows(2).all(|w| w[1][2] < w[0][2]));
}

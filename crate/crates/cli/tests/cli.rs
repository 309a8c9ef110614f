use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_realwitness")).args(args).env_remove("REALWITNESS_SEED").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)))
}

const HYPERSURF_ARGS: [&str; 12] =
    ["--full-variety", "--dim", "2", "--z", "1", "--gamma", "2+3i", "--y", "3/8,5/9,1/3", "--alpha", "1/2-1/5i,6/7+2/3i", "--timings"];

#[test]
fn real_on_hypersurface() {
    let sys = fixture("hypersurf.sys");
    let mut args = vec!["real", sys.as_str()];
    args.extend(&HYPERSURF_ARGS);
    let out = cli(&args);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verified"], true);
    assert_eq!(v["counts"]["S"], 4);
    assert_eq!(v["counts"]["R"], 1);
    let r = v["R_real"][0].as_array().unwrap();
    let want = [1.0 / 48.0, 0.0, -1.0 / 48.0];
    for (a, b) in r.iter().zip(want) {
        assert!((a.as_f64().unwrap() - b).abs() < 1e-8);
    }
    assert_eq!(v["R"][0][0][1], 0.0);
    assert!(v["timings"]["total"].as_f64().unwrap() >= 0.0);
}

#[test]
fn output_does_not_depend_on_jobs() {
    let sys = fixture("two_circles.sys");
    let run = |jobs: &str| cli(&["--jobs", jobs, "real", &sys, "--full-variety", "--dim", "1", "--seed", "3"]).stdout;
    let one = run("1");
    assert!(!one.is_empty());
    assert_eq!(one, run("8"));
    let h = fixture("hypersurf.sys");
    let track = |jobs: &str| cli(&["--jobs", jobs, "track", &h, "--dim", "2", "--seed", "5"]).stdout;
    assert_eq!(track("1"), track("8"));
}

#[test]
fn seed_from_environment() {
    let sys = fixture("circle.sys");
    let with_env = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_realwitness"))
            .args(["real", &sys, "--full-variety", "--dim", "1"])
            .env("REALWITNESS_SEED", seed)
            .output()
            .unwrap()
    };
    let v = json(&with_env("17"));
    assert_eq!(v["config"]["seed"], 17);
    let flag = json(&cli(&["real", &sys, "--full-variety", "--dim", "1", "--seed", "17"]));
    assert_eq!(v, flag);
}

#[test]
fn missing_dim_is_a_configuration_error() {
    let sys = fixture("hypersurf.sys");
    let out = cli(&["real", &sys, "--full-variety"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
    assert_eq!(cli(&["real", &sys, "--dim", "2"]).status.code(), Some(1));
    assert_eq!(cli(&["real", &sys, "--full-variety", "--dim", "2", "--gamma", "2+3j"]).status.code(), Some(1));
    assert_eq!(cli(&["real", &sys, "--full-variety", "--dim", "2", "--y", "1,0,-1"]).status.code(), Some(1));
    assert_eq!(cli(&["real", "/nonexistent.sys", "--full-variety", "--dim", "2"]).status.code(), Some(1));
}

#[test]
fn counts() {
    for (name, paths, k) in [("hypersurf.sys", 6, Some(6)), ("f633.sys", 1792, None), ("cubicurve.sys", 300, None), ("quartic.sys", 432, Some(432))] {
        let v = json(&cli(&["count", &fixture(name)]));
        assert_eq!(v["paths"], paths, "{name}");
        assert_eq!(v["K"].as_u64(), k, "{name}");
    }
}

#[test]
fn membership_verdicts() {
    let w = fixture("cubic_witness.json");
    let near = json(&cli(&["member", "--witness", &w, "--point", "0.168,0.028,0.005", "--tol-member", "1e-3"]));
    assert_eq!(near["verdict"], "true");
    let off = cli(&["member", "--witness", &w, "--point", "1/4,1/6,-3/2"]);
    assert_eq!(off.status.code(), Some(0));
    assert_eq!(json(&off)["verdict"], "false");
    let ws: Value = serde_json::from_str(&std::fs::read_to_string(&w).unwrap()).unwrap();
    for p in ws["points"].as_array().unwrap() {
        let lit: Vec<String> = p
            .as_array()
            .unwrap()
            .iter()
            .map(|z| format!("{:e}{:+e}i", z[0].as_f64().unwrap(), z[1].as_f64().unwrap()))
            .collect();
        let v = json(&cli(&["member", "--witness", &w, "--point", &lit.join(",")]));
        assert_eq!(v["verdict"], "true", "{lit:?}");
    }
    assert_eq!(cli(&["member", "--witness", &w, "--point", "1,2"]).status.code(), Some(1));
}

#[test]
fn json_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("realwitness-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("count.json");
    let o = cli(&["--json", out.to_str().unwrap(), "count", &fixture("circle.sys")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["paths"], 4);
    std::fs::remove_dir_all(&dir).unwrap();
}

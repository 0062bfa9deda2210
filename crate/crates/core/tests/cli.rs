use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_newton-strata"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn golden_outputs() {
    assert_eq!(
        stdout(&["gnp", "--d", "4", "--p", "19"]),
        "(0,0),(1,5/18),(2,7/9),(3,3/2)\n"
    );
    assert_eq!(
        stdout(&["hasse", "--d", "3", "--p", "11", "--which", "H"]),
        "4*X1\n"
    );
    assert_eq!(
        stdout(&["hasse", "--d", "3", "--p", "11", "--which", "G"]),
        "6*X2^2+4*X1\n"
    );
    assert_eq!(stdout(&["hodge", "--d", "3"]), "(0,0),(1,1/3),(2,1)\n");
    assert_eq!(
        stdout(&["hodge", "--d", "3", "--tsv"]),
        "0\t0/1\n1\t1/3\n2\t1/1\n"
    );
    assert_eq!(
        stdout(&["np", "--d", "3", "--p", "11", "--coeffs", "0,3,0,1"]),
        "(0,0),(1,2/5),(2,1)\n"
    );
    assert_eq!(
        stdout(&["np", "--d", "3", "--p", "11", "--coeffs", "0,0,0,1"]),
        "(0,0),(2,1)\n"
    );
}

#[test]
fn lfunction_json() {
    let text = stdout(&[
        "lfunction",
        "--d",
        "3",
        "--p",
        "11",
        "--m",
        "2",
        "--coeffs",
        "0,1:2,0,1",
    ]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["coefficients"].as_array().unwrap().len(), 3);
    assert_eq!(v["q_valuations"][0], "0");
    assert_eq!(v["np"].as_array().unwrap().last().unwrap()[1], "1");
}

#[test]
fn exit_codes() {
    // clap usage error
    assert_eq!(run(&["gnp", "--d", "3"]).status.code(), Some(2));
    // below the tier
    assert_eq!(run(&["gnp", "--d", "3", "--p", "7"]).status.code(), Some(2));
    assert_eq!(
        run(&["hasse", "--d", "3", "--p", "12"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["np", "--d", "3", "--p", "11", "--coeffs", "0,x,1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["census", "--d", "4", "--p", "13", "--exhaustive-cap", "10"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn census_outputs_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
    let config = path("caps.toml");
    std::fs::write(&config, "exhaustive = 1000\n").unwrap();
    let args = [
        "census",
        "--d",
        "3",
        "--p",
        "11",
        "--congruence",
        "--json",
        &path("a.json"),
        "--tsv",
        &path("a.tsv"),
        "--svg",
        &path("a.svg"),
        "--config",
        &config,
    ];
    let out = Command::new(env!("CARGO_BIN_EXE_newton-strata"))
        .args(args)
        .env("NEWTON_STRATA_CACHE", path("cache"))
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(path("a.json")).unwrap()).unwrap();
    assert_eq!(json["summary"]["non_generic"], 1);
    assert_eq!(json["summary"]["congruence_failures"], 0);
    assert_eq!(
        std::fs::read_to_string(path("a.tsv"))
            .unwrap()
            .lines()
            .count(),
        12
    );
    assert!(std::fs::read_to_string(path("a.svg"))
        .unwrap()
        .starts_with("<svg"));
    assert!(dir.path().join("cache/fields-p11-m1-d3.json").exists());

    let again = run(&["census", "--d", "3", "--p", "11", "--json", &path("b.json")]);
    assert!(again.status.success());
    let a: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(path("a.json")).unwrap()).unwrap();
    let b: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(path("b.json")).unwrap()).unwrap();
    assert_eq!(a["gnp"], b["gnp"]);

    std::fs::write(&config, "typo = 3\n").unwrap();
    assert_eq!(
        run(&["census", "--d", "3", "--p", "11", "--config", &config])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn congruence_subcommand() {
    let text = stdout(&[
        "congruence",
        "--d",
        "4",
        "--p",
        "19",
        "--random",
        "3",
        "--seed",
        "4",
    ]);
    assert_eq!(text.lines().count(), 3);
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["report"]["pass"], true);
    }
    let scan = stdout(&[
        "congruence",
        "--d",
        "3",
        "--p",
        "11",
        "--coeffs",
        "0,1,0,1",
        "--scan-branches",
    ]);
    assert_eq!(scan.lines().count(), 10);
}

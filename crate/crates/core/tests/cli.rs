use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hyperslender"))
}

fn run(args: &str) -> (i32, String, String) {
    let out = bin().args(args.split_whitespace()).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn solve_b_linear_writes_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.csv");
    let (code, stdout, _) = run(&format!(
        "solve --problem B --profile linear:a=1 --K 1 --gamma 1.4 --grid 0:5:101 --out {}",
        out.display()
    ));
    assert_eq!(code, 0);
    assert!(stdout.starts_with('{'));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# config: {"));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header[0], "x");
    let wp = header.iter().position(|h| *h == "w_p").unwrap();
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 101);
    let expected = 1.0 / 1.4 + 1.0;
    for r in &rows {
        assert_eq!(r.len(), header.len());
        assert!((r[wp] - expected).abs() < 1e-12);
    }
}

#[test]
fn eigen_example() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("e.json");
    let (code, _, _) = run(&format!(
        "eigen --rho 1 --u 0 --v 0.3 --E 5.09 --gamma 1.4 --out {}",
        out.display()
    ));
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    let ev: Vec<f64> = v["report"]["eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    for (a, b) in ev.iter().zip([-0.7, 0.3, 0.3, 1.3]) {
        assert!((a - b).abs() < 1e-12);
    }
    assert!(v.get("config").is_some());
}

#[test]
fn verify_passes_and_repeats_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v.json");
    let cmd = format!(
        "verify --problem A --profile log:a=1 --K 1 --gamma 1.4 --tau 0.1 --bumps 15 --out {}",
        out.display()
    );
    let (c1, s1, _) = run(&cmd);
    let first = std::fs::read(&out).unwrap();
    let (c2, s2, _) = run(&cmd);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(s1, s2);
    assert_eq!(first, std::fs::read(&out).unwrap());
}

#[test]
fn converge_writes_rates_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.csv");
    let (code, _, _) = run(&format!("converge --problem A3 --profile linear:a=1 --K 1 --out {}", out.display()));
    assert_eq!(code, 0);
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 2 + 4);
    let side: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.with_extension("json")).unwrap()).unwrap();
    let rate = side["fitted_rates"]["sup_err_u"].as_f64().unwrap();
    assert!((rate - 2.0).abs() < 0.05);
    assert!(side["fitted_rates"]["sup_err_E"].is_null());
}

#[test]
fn exit_codes() {
    assert_eq!(run("").0, 1);
    assert_eq!(run("solve --problem A --profile linear:a=1").0, 1);
    let (code, _, err) = run("solve --problem B --profile linear:a=1 --tau 0.1");
    assert_eq!(code, 1);
    assert!(err.contains("--tau"));
    assert_eq!(run("solve --problem Q --profile linear:a=1").0, 1);
    assert_eq!(run("solve --problem B --profile log:a=1 --domain-end 20 --K 10").0, 2);
}

#[test]
fn admissible_reports_verdict() {
    let (code, stdout, _) = run("admissible --problem B3 --profile power:a=1,p=2 --K 1");
    assert_eq!(code, 0);
    assert!(stdout.contains("\"admissible\":true"));
}

use std::path::Path;
use std::process::{Command, Output};

fn sscs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sscs")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn column(csv: &str, k: usize) -> Vec<f64> {
    csv.lines().skip(1).map(|l| l.split(',').nth(k).unwrap().parse().unwrap()).collect()
}

#[test]
fn measures_csv() {
    let o = sscs(&["measures", "--g", "0.3", "--as-mag", "0.09", "--ai-mag", "0.18", "--location", "extra"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let mut lines = out.lines();
    assert!(lines.next().unwrap().starts_with("location,pi_a,pi_l,pi_raw,pi_n"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "extra");
    let (pi_a, pi_l): (f64, f64) = (row[1].parse().unwrap(), row[2].parse().unwrap());
    assert!(pi_a < pi_l && pi_l < 1.0);
}

#[test]
fn validation_errors_exit_1() {
    assert_eq!(sscs(&["measures", "--g", "1.0"]).status.code(), Some(1));
    assert_eq!(sscs(&["measures", "--g", "abc"]).status.code(), Some(1));
    assert_eq!(sscs(&["figure", "fig9"]).status.code(), Some(1));
    let o = sscs(&["sweep", "--axis", "phi", "--lo", "1", "--hi", "0", "--quantities", "pi_a"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("lo < hi"));
    assert_eq!(sscs(&["--version"]).status.code(), Some(0));
}

#[test]
fn sweep_is_deterministic_and_monotone() {
    let args = [
        "sweep", "--axis", "phi", "--lo", "-2pi", "--hi", "2pi", "--n", "101", "--quantities", "pi_a,pi_l,components",
        "--g", "0.3", "--as-mag", "0.09", "--ai-mag", "0.18",
    ];
    let a = sscs(&args);
    let mut seq = args.to_vec();
    seq.push("--sequential");
    let b = sscs(&seq);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let out = stdout(&a);
    assert_eq!(
        out.lines().next().unwrap(),
        "phi,pi_a,pi_l,inj,fc,spdc,stpdc,n_inj,n_fc,n_spdc,n_stpdc"
    );
    let phi = column(&out, 0);
    assert_eq!(phi.len(), 101);
    assert!(phi.windows(2).all(|w| w[1] > w[0]));
    assert!(!out.contains("NaN") && !out.contains("inf"));
}

#[test]
fn transition_with_pi_literal() {
    let o = sscs(&[
        "transition", "--criterion", "pi-n-crosses0", "--axis", "ai_mag", "--lo", "0.01", "--hi", "0.5", "--g", "0.3",
        "--phi", "pi",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = column(&stdout(&o), 0)[0];
    assert!((v - 0.251_149_42).abs() < 1e-7);

    let o = sscs(&[
        "transition", "--criterion", "pi-l-crosses1", "--axis", "phi", "--lo", "-0.1", "--hi", "0.1", "--g", "0.3",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no sign change"));
}

#[test]
fn optimal_theta_json() {
    let o = sscs(&[
        "optimal-theta", "--g", "0.7071067811865476", "--ai-mag", "0.1", "--phi", "pi", "--format", "json",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let t = v["theta_over_pi"].as_f64().unwrap();
    assert!((0.39..=0.42).contains(&t));
    assert_eq!(v["unimodal"], true);
}

#[test]
fn config_file_is_read() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("config.json");
    let g1 = 0.002 / 1.002;
    std::fs::write(
        &path,
        format!(
            r#"{{"gamma1": {g1}, "gamma2": {}, "squeeze_mag": 0.3, "pump_phase": 0.0,
                "seed_s_mag": 0.09, "seed_s_phase": 0.0, "seed_i_mag": 0.18, "seed_i_phase": 0.0, "eta": 1.0}}"#,
            1.0 - g1
        ),
    )
    .unwrap();
    let cfg = path.to_str().unwrap();
    let a = sscs(&["measures", "--config", cfg]);
    let b = sscs(&["measures", "--g", "0.3", "--as-mag", "0.09", "--ai-mag", "0.18"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    std::fs::write(&path, r#"{"gamma1": 0.5}"#).unwrap();
    assert_eq!(sscs(&["measures", "--config", cfg]).status.code(), Some(1));
}

#[test]
fn figure_writes_curves_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = sscs(&["figure", "fig4b", "--out", out]);
    assert!(o.status.success());
    let listed = stdout(&o);
    assert_eq!(listed.lines().count(), 4);
    for line in listed.lines() {
        assert!(Path::new(line).exists());
    }
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("fig4b.json")).unwrap()).unwrap();
    assert_eq!(json["curves"].as_array().unwrap().len(), 3);
}

#[test]
fn wigner_layouts() {
    let long = stdout(&sscs(&["wigner", "--g", "0.3", "--n", "4"]));
    assert_eq!(long.lines().next().unwrap(), "x,p,w");
    assert_eq!(long.lines().count(), 17);
    let dense = stdout(&sscs(&["wigner", "--g", "0.3", "--n", "4", "--matrix", "--mode", "2"]));
    assert!(dense.starts_with("x\\p,"));
    assert_eq!(dense.lines().count(), 5);
    assert_eq!(sscs(&["wigner", "--mode", "3"]).status.code(), Some(1));
}

#[test]
fn spectrum_columns() {
    let out = stdout(&sscs(&["spectrum", "--g", "0.8", "--lo", "0", "--hi", "2", "--n", "5"]));
    assert_eq!(out.lines().next().unwrap(), "omega,S,V,V_anti");
    let v = column(&out, 2);
    assert!(v.iter().all(|v| *v < 0.5));
}

#[test]
fn verify_report_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p1 = dir.path().join("a.json");
    let p2 = dir.path().join("b.json");
    for p in [&p1, &p2] {
        let o = sscs(&[
            "verify", "--n-points", "4", "--fock-points", "2", "--seed", "11", "--format", "json", "--out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    let (a, b) = (std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["term_counts"], serde_json::json!([15, 15, 17]));
    assert_eq!(v["pass"], true);

    let o = sscs(&[
        "verify", "--n-points", "2", "--fock-points", "0", "--quad-tol", "1e-12", "--max-intervals", "8",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("quadrature did not converge"));
}

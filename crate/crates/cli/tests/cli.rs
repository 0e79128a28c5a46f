use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};
use std::io::Write;
use std::process::{Command, Output};

use qclone_core::distspec::DistSpec;
use serde_json::Value;

fn qclone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qclone")).args(args).output().expect("spawn qclone")
}

fn json(args: &[&str]) -> Value {
    let out = qclone(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn num(v: &Value, key: &str) -> f64 {
    v[key].as_f64().unwrap_or_else(|| panic!("no number at {key} in {v}"))
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines().skip(1).map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect()
}

#[test]
fn params_examples() {
    let v = json(&["params", "--dist", "uniform"]);
    assert!((num(&v, "F_avg") - 5.0 / 6.0).abs() < 1e-12);
    assert_eq!(v["regime"], "Interior");
    let v = json(&["params", "--dist", "vmf:kappa=1"]);
    assert_eq!(v["regime"], "PccUpper");
    let v = json(&["params", "--dist", "deltapair:theta=1.5708"]);
    assert!((num(&v, "alpha_plus") - FRAC_PI_4).abs() < 1e-9);
    assert!((num(&v, "alpha_minus") - FRAC_PI_4).abs() < 1e-9);
    for key in ["a1", "a2", "Gamma", "Omega", "alpha_plus", "alpha_minus", "regime", "F_avg"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn numbers_carry_17_digits() {
    let out = qclone(&["params", "--dist", "uniform"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let line = text.lines().find(|l| l.contains("F_avg")).unwrap();
    let tok = line.split(':').nth(1).unwrap().trim();
    let mantissa = tok.split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 17, "{tok}");
    let v: f64 = tok.parse().unwrap();
    assert_eq!(format!("{v:.16e}"), tok);
    assert!((v - 5.0 / 6.0).abs() < 1e-15);
}

#[test]
fn params_csv() {
    let out = qclone(&["params", "--dist", "hg:h=0.3", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("distribution,a1,a2,Gamma,Omega,alpha_plus,alpha_minus,regime,F_avg\n"));
    assert!(text.lines().nth(1).unwrap().starts_with("hg:h=0.3,0.3,"));
}

#[test]
fn simulate_examples() {
    let v = json(&["simulate", "--dist", "uniform", "--theta", "0.7", "--phi", "2.1"]);
    assert!((num(&v, "F_clone1") - 5.0 / 6.0).abs() < 1e-12);
    assert!((num(&v, "F_clone2") - 5.0 / 6.0).abs() < 1e-12);
    assert_eq!(v["amplitudes"].as_array().unwrap().len(), 8);

    let eq = format!("delta:theta={FRAC_PI_2:?}");
    let th = format!("{FRAC_PI_2:?}");
    let v = json(&["simulate", "--dist", &eq, "--theta", &th, "--phi", "0"]);
    assert!((num(&v, "F_clone1") - (4.0 + 2.0 * SQRT_2) / 8.0).abs() < 1e-12);
    let v = json(&["simulate", "--dist", "delta:theta=1.5708", "--theta", &th, "--phi", "0"]);
    assert!((num(&v, "F_clone1") - (4.0 + 2.0 * SQRT_2) / 8.0).abs() < 1e-8);
}

#[test]
fn simulate_matches_closed_form_in_rotated_frame() {
    for (dist, theta, phi) in [
        ("vmf:kappa=0.2,axis_theta=0.9,axis_phi=2", "1.3", "-0.4"),
        ("brosseau:P=0.8,mu=0.5,axis_theta=2.5", "0.2", "3"),
        ("hg:h=-0.4", "2.9", "1"),
    ] {
        let v = json(&["simulate", "--dist", dist, "--theta", theta, "--phi", phi]);
        assert!((num(&v, "F_clone1") - num(&v, "F_closed_form")).abs() < 1e-12, "{dist}");
        assert!((num(&v, "F_clone1") - num(&v, "F_clone2")).abs() < 1e-12, "{dist}");
    }
}

#[test]
fn verify_examples() {
    for dist in ["uniform", "vmf:kappa=0.2", "deltapair:theta=1.0472"] {
        let out = qclone(&["verify", "--dist", dist, "--samples", "10000", "--seed", "42"]);
        assert_eq!(out.status.code(), Some(0), "{dist}: {}", String::from_utf8_lossy(&out.stderr));
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert!(num(&v, "max_sampled_F") <= num(&v, "F_opt") + 1e-9);
        assert!(num(&v, "max_structured_F") <= num(&v, "F_opt") + 1e-7);
        assert_eq!(v["n_samples"], 30000);
        if dist == "uniform" {
            assert!(num(&v, "max_sampled_F") <= 5.0 / 6.0 + 1e-9);
        }
    }
    assert_eq!(qclone(&["verify", "--dist", "uniform", "--samples", "0"]).status.code(), Some(1));
}

fn gates(dist: &str) -> Vec<Value> {
    json(&["circuit", "--dist", dist])["gates"].as_array().unwrap().clone()
}

fn gate_param(gs: &[Value], kind: &str) -> f64 {
    gs.iter().find(|g| g["kind"] == kind).unwrap()["params"][0].as_f64().unwrap()
}

#[test]
fn circuit_examples() {
    let gs = gates("uniform");
    assert!((gate_param(&gs, "Ry") - 2.0 * 0.6154797).abs() < 1e-6);
    assert_eq!(gs[0]["control"], 1);
    assert_eq!(gs[0]["target"], 3);
    let gs = gates("deltapair:theta=1.0472");
    assert!(gate_param(&gs, "CRy").abs() < 1e-12);
    let gs = gates("vmf:kappa=1");
    assert_eq!(gate_param(&gs, "Ry"), 0.0);
    assert!((gate_param(&gs, "CRy") - PI).abs() < 1e-12);
    let v = json(&["circuit", "--dist", "vmf:kappa=1"]);
    assert_eq!(v["params"]["regime"], "PccUpper");
}

#[test]
fn vmf_sweep_shape() {
    let out = qclone(&["sweep", "--dist", "vmf:kappa=0", "--sweep", "kappa=0:3:301"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("param,a1,a2,Gamma,alpha_plus,alpha_minus,F_opt,F_UC,F_PCC_branch\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 301);
    assert!((rows[0][6] - 5.0 / 6.0).abs() < 1e-12);
    for w in rows.windows(2) {
        assert!(w[1][0] > w[0][0]);
        assert!(w[1][6] >= w[0][6] - 1e-12);
    }
    assert!(out.stderr.is_empty());
}

#[test]
fn brosseau_sweeps_ordered() {
    let tied = qclone(&["sweep", "--dist", "brosseau:P=0,mu=0", "--sweep", "P+mu=0:0.95:20"]);
    let fixed = qclone(&["sweep", "--dist", "brosseau:P=0.9999,mu=0", "--sweep", "mu=0:0.95:20"]);
    let tied = csv_rows(&String::from_utf8(tied.stdout).unwrap());
    let fixed = csv_rows(&String::from_utf8(fixed.stdout).unwrap());
    assert!((tied[0][6] - 5.0 / 6.0).abs() < 1e-9);
    for (a, b) in tied.iter().zip(&fixed) {
        assert_eq!(a[0], b[0]);
        assert!(b[6] >= a[6] - 1e-12, "μ={}: {} < {}", a[0], b[6], a[6]);
    }
}

#[test]
fn nan_rows_are_announced() {
    let out = qclone(&["sweep", "--dist", "brosseau:P=0.5,mu=0", "--sweep", "mu=-0.8:0.8:5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let nan_rows = text.lines().filter(|l| l.contains("NaN")).count();
    let warnings = String::from_utf8(out.stderr).unwrap().lines().filter(|l| l.starts_with("warning:")).count();
    assert_eq!(nan_rows, 2);
    assert_eq!(warnings, nan_rows);
}

#[test]
fn sweep_json_and_bad_key() {
    let out = qclone(&["sweep", "--dist", "hg:h=0", "--sweep", "h=-0.5:0.5:3", "--format", "json"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
    assert_eq!(qclone(&["sweep", "--dist", "hg:h=0", "--sweep", "kappa=0:1:3"]).status.code(), Some(1));
}

#[test]
fn deterministic_output() {
    let a = qclone(&["verify", "--dist", "vmf:kappa=1", "--samples", "500", "--seed", "7"]);
    let b = qclone(&["verify", "--dist", "vmf:kappa=1", "--samples", "500", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    let a = qclone(&["sweep", "--dist", "vmf:kappa=0", "--sweep", "kappa=-1:1:41"]);
    let b = qclone(&["sweep", "--dist", "vmf:kappa=0", "--sweep", "kappa=-1:1:41"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn printed_spec_round_trips() {
    for s in ["uniform", "vmf:kappa=-0.25", "brosseau:P=0.8,mu=0.5", "belt:theta1=0.5,theta2=1.2,axis_phi=0.1"] {
        let v = json(&["params", "--dist", s]);
        let printed = v["distribution"].as_str().unwrap();
        let a = DistSpec::parse(s).unwrap().to_distribution().unwrap();
        let b = DistSpec::parse(printed).unwrap().to_distribution().unwrap();
        assert_eq!(a, b, "{s} -> {printed}");
    }
}

#[test]
fn tabulated_density_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.csv");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "x,g").unwrap();
    for i in 0..=200 {
        let x = -1.0 + i as f64 / 100.0;
        writeln!(f, "{x},0.5").unwrap();
    }
    drop(f);
    let spec = format!("table:{}", path.display());
    let v = json(&["params", "--dist", &spec]);
    assert!((num(&v, "F_avg") - 5.0 / 6.0).abs() < 1e-9);
    assert_eq!(qclone(&["params", "--dist", "table:/no/such/file.csv"]).status.code(), Some(1));
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    let out = qclone(&["circuit", "--dist", "uniform", "--out", path.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["gates"].as_array().unwrap().len(), 7);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| qclone(args).status.code();
    assert_eq!(code(&["params", "--dist", "vmf:kappa=abc"]), Some(1));
    assert_eq!(code(&["params", "--dist", "vmf:kapa=1"]), Some(1));
    assert_eq!(code(&["params", "--dist", "brosseau:P=0.3,mu=0.5"]), Some(1));
    assert_eq!(code(&["params"]), Some(1));
    assert_eq!(code(&["frobnicate"]), Some(1));
    assert_eq!(code(&["simulate", "--dist", "uniform", "--theta", "1", "--format", "csv"]), Some(1));
    assert_eq!(code(&["params", "--dist", "brosseau:P=0.99999999,mu=0.99999999"]), Some(2));
    assert_eq!(code(&["--help"]), Some(0));
}

#[test]
fn parse_error_reports_position() {
    let out = qclone(&["params", "--dist", "brosseau:P=0.8,nu=0.5"]);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("position 15"), "{err}");
}

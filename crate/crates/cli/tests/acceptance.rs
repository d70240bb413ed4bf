//! End-to-end acceptance: one line per criterion, then the CLI exit-code contract.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use ssw::report::{run_checks, Check, Record, Status};
use ssw::suites::{self, ComplexOptions, Data, RepOptions};

fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn data(case: &str, name: &str) -> Data {
    let p = data_path(name);
    Data::parse(case, &p.to_string_lossy(), &std::fs::read(&p).unwrap()).unwrap()
}

fn run(checks: Vec<Check>) -> Vec<Record> {
    run_checks(&checks, false)
}

fn all_pass(records: &[Record]) -> bool {
    !records.is_empty() && records.iter().all(|r| r.status == Status::Pass)
}

fn has_pass(records: &[Record], needle: &str) -> bool {
    records.iter().any(|r| r.name.contains(needle) && r.status == Status::Pass)
}

fn count(records: &[Record], needle: &str) -> usize {
    records.iter().filter(|r| r.name.contains(needle)).count()
}

fn show_failures(records: &[Record]) -> String {
    records
        .iter()
        .filter(|r| r.status != Status::Pass)
        .take(5)
        .map(|r| format!("{} ({:?}): {}", r.name, r.status, r.residual.clone().unwrap_or_default()))
        .collect::<Vec<_>>()
        .join("; ")
}

fn rep(n: usize, d: usize, suites: &[&str], weight_bound: Option<u32>) -> Vec<Record> {
    let opts = RepOptions { n, d, suites: suites.iter().map(|s| s.to_string()).collect(), weight_bound };
    run(suites::repscheme(opts).unwrap())
}

fn cases() -> [(&'static str, &'static str); 4] {
    [("even", "even.json"), ("general", "general_ix.json"), ("general", "general_two_var.json"), ("weighted", "weighted.json")]
}

/// Builders: Darboux outputs, the pipeline algebras (C, D, D′, M, tensors) and A_d, B_d.
fn criterion_1() -> Result<(), String> {
    for (case, file) in cases() {
        let r = run(suites::darboux(data(case, file)));
        let r2 = run(suites::lagint(data(case, file)));
        if !all_pass(&r) || !all_pass(&r2) {
            return Err(format!("{file}: {} {}", show_failures(&r), show_failures(&r2)));
        }
        if count(&r2, "tensor") == 0 {
            return Err(format!("{file}: no tensor d^2 entries"));
        }
    }
    for n in 1..=4 {
        for d in 1..=2 {
            let start = Instant::now();
            let r = run(vec![Check::new(format!("A_d n={n} d={d}"), move || {
                repscheme::cobar(n, repscheme::Leibniz::Left)
                    .and_then(|g| repscheme::matrixify(&g, d))
                    .map(|a| a.presentation.check_d_squared())
            })]);
            if !all_pass(&r) {
                return Err(show_failures(&r));
            }
            if n == 4 && start.elapsed() > Duration::from_secs(120) {
                return Err(format!("A_4 at d={d} took {:?}", start.elapsed()));
            }
        }
    }
    for d in 1..=2 {
        let r = rep(4, d, &["primitive"], None);
        if !has_pass(&r, "B_d ") || !all_pass(&r) {
            return Err(format!("B_d d={d}: {}", show_failures(&r)));
        }
    }
    Ok(())
}

fn cme_holds(case: &str, json: &str) -> bool {
    let d = Data::parse(case, "inline", json.as_bytes()).unwrap();
    all_pass(&run(suites::darboux(d)))
}

fn criterion_2() -> Result<(), String> {
    let accept = [
        ("even", r#"{"field":"Q","vars":["x1","x2"],"f":["x1","x2"],"g":["x2","-x1"]}"#),
        ("general", r#"{"field":"Q(i)","vars":["x"],"f":["x","i*x"]}"#),
        ("weighted", r#"{"field":"Q","vars":["x"],"f":["x","x"],"q":["1","-1"]}"#),
    ];
    // one sign flipped in each
    let reject = [
        ("even", r#"{"field":"Q","vars":["x1","x2"],"f":["x1","x2"],"g":["x2","x1"]}"#),
        ("general", r#"{"field":"Q(i)","vars":["x"],"f":["x","x"]}"#),
        ("weighted", r#"{"field":"Q","vars":["x"],"f":["x","x"],"q":["1","1"]}"#),
    ];
    for (case, json) in accept {
        if !cme_holds(case, json) {
            return Err(format!("rejected {json}"));
        }
    }
    for (case, json) in reject {
        if cme_holds(case, json) {
            return Err(format!("accepted {json}"));
        }
    }
    for d in 1..=3 {
        let residual = repscheme::bd::cme_bd_residual(d).map_err(|e| e.to_string())?;
        if !residual.is_zero() {
            return Err(format!("cme_Bd({d}) = {residual}"));
        }
    }
    Ok(())
}

fn criterion_3() -> Result<(), String> {
    let r = run(suites::seeded_lagint(0, 5));
    if !all_pass(&r) {
        return Err(show_failures(&r));
    }
    for i in 0..5 {
        let set = format!("even data set {i:03}: ");
        for part in ["residue is 2 omega", "kappa", "nu ", "mu "] {
            if !has_pass(&r, &format!("{set}{part}")) {
                return Err(format!("{set}has no passing `{part}` entry"));
            }
        }
    }
    Ok(())
}

fn general_pipeline(case: &str, file: &str) -> Result<(), String> {
    let r = run(suites::lagint(data(case, file)));
    if !all_pass(&r) || !has_pass(&r, "residue is 1 omega") || !has_pass(&r, "nu ") {
        return Err(format!("{file}: {}", show_failures(&r)));
    }
    Ok(())
}

fn criterion_4() -> Result<(), String> {
    general_pipeline("general", "general_ix.json")?;
    general_pipeline("general", "general_two_var.json")
}

fn criterion_5() -> Result<(), String> {
    general_pipeline("weighted", "weighted.json")
}

fn criterion_6() -> Result<(), String> {
    for file in ["general_ix.json", "general_two_var.json"] {
        let opts = ComplexOptions { lo: -6, suites: ["phi", "psi", "probe"].map(String::from).to_vec(), seed: 0, points: 5 };
        let r = run(suites::complexes(data("general", file), opts).unwrap());
        if !all_pass(&r) {
            return Err(format!("{file}: {}", show_failures(&r)));
        }
        for needle in ["T_q: ", "T'_q: ", "phi then back = id", "back then phi = id", "psi: contraction", "psi: psi bijective"] {
            if !has_pass(&r, needle) {
                return Err(format!("{file}: no passing `{needle}`"));
            }
        }
        if count(&r, "homology agrees") != 5 {
            return Err(format!("{file}: expected 5 probe points"));
        }
    }
    Ok(())
}

fn criterion_7() -> Result<(), String> {
    for n in 1..=4 {
        let r = rep(n, 1, &["cobar"], Some(5));
        if !all_pass(&r) {
            return Err(format!("n={n}: {}", show_failures(&r)));
        }
        if count(&r, "H^0 weight") != 6 || count(&r, "H^-1 weight") != 6 {
            return Err(format!("n={n}: Hilbert entries missing"));
        }
        if n == 4 && count(&r, "printed d") != 15 {
            return Err("n=4: the printed example does not cover all 15 letters".into());
        }
    }
    Ok(())
}

fn criterion_8() -> Result<(), String> {
    for d in 1..=2 {
        let r = rep(4, d, &["primitive"], None);
        if !all_pass(&r) {
            return Err(format!("d={d}: {}", show_failures(&r)));
        }
        let identities = r.iter().filter(|e| e.name.contains("dPhi/d") && !e.name.ends_with("= 0")).count();
        if identities != 10 || !has_pass(&r, "d phi = -ddr Phi") || !has_pass(&r, "ddr phi = -2 omega0") {
            return Err(format!("d={d}: found {identities} dPhi identities"));
        }
    }
    Ok(())
}

fn criterion_9() -> Result<(), String> {
    for d in 1..=2 {
        let r = rep(4, d, &["maindim4"], None);
        if !all_pass(&r) || !has_pass(&r, "lambda = 2") || !has_pass(&r, "to B_d ") {
            return Err(format!("d={d}: {}", show_failures(&r)));
        }
    }
    Ok(())
}

fn criterion_10() -> Result<(), String> {
    for n in 1..=4 {
        let r = rep(n, 1, &["koszul"], Some(4));
        if !all_pass(&r) || count(&r, "weight 4: ") != n + 1 {
            return Err(format!("koszul n={n}: {}", show_failures(&r)));
        }
    }
    for d in 1..=2 {
        let r = rep(4, d, &["gamma", "serre"], None);
        if !all_pass(&r) {
            return Err(format!("d={d}: {}", show_failures(&r)));
        }
        for needle in ["beta d=", "gamma chain map", "gamma bijective", "Serre pairing = omega0"] {
            if !has_pass(&r, needle) {
                return Err(format!("d={d}: no passing `{needle}`"));
            }
        }
    }
    Ok(())
}

type Criterion = fn() -> Result<(), String>;

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, Criterion); 10] = [
        ("d^2 = 0 for every builder, A_d and B_d for n <= 4, d <= 2", criterion_1),
        ("master equation checks accept and reject; cme_Bd = 0 for d <= 3", criterion_2),
        ("five seeded even data sets: kappa, nu, mu, lambda = 2", criterion_3),
        ("general case f = (x, ix) and a two-variable set: lambda = 1", criterion_4),
        ("weighted case f = (x, x), q = (1, -1)", criterion_5),
        ("T_q, T'_q, phi, psi certificate and probes on [-6, 2]", criterion_6),
        ("cobar Hilbert series n <= 4, w <= 5 and the printed n = 4 example", criterion_7),
        ("the ten dPhi identities and the primitive for d <= 2", criterion_8),
        ("B_d as a derived critical locus with lambda = 2 for d <= 2", criterion_9),
        ("Koszul exactness, beta^2 = 0, gamma chain map, Serre pairing", criterion_10),
    ];
    let mut failed = Vec::new();
    for (i, (what, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = f();
        let ms = start.elapsed().as_millis();
        match &out {
            Ok(()) => println!("criterion {:>2}: PASS  {what} [{ms} ms]", i + 1),
            Err(e) => {
                println!("criterion {:>2}: FAIL  {what} [{ms} ms]: {e}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

fn ssw(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ssw")).args(args).env("SSW_THREADS", "2").output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn cli_exit_codes() {
    let (code, out, _) = ssw(&["repscheme", "--n", "4", "--d", "1", "--suite", "cme"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("PASS  cme d=1"));

    let broken = data_path("broken.json");
    let (code, out, _) = ssw(&["check", broken.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("FAIL  presentation: d^2 w") && out.contains("x^3"), "{out}");

    let malformed = data_path("malformed.json");
    let (code, _, err) = ssw(&["check", malformed.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("malformed.json:5:5"), "{err}");

    assert_eq!(ssw(&["repscheme", "--bogus"]).0, 2);
    assert_eq!(ssw(&["frobnicate"]).0, 2);
    assert_eq!(ssw(&["repscheme", "--d", "4"]).0, 2);
    assert_eq!(ssw(&["repscheme", "--n", "3", "--suite", "serre"]).0, 2);
    assert_eq!(ssw(&["lagint", "--data", "/nonexistent.json", "--case", "even"]).0, 2);
    assert_eq!(ssw(&["--help"]).0, 0);

    let even = data_path("even_bad_cme.json");
    let (code, out, _) = ssw(&["darboux", "--data", even.to_str().unwrap(), "--case", "even"]);
    assert_eq!(code, 1);
    assert!(out.contains("ERROR builder") && out.contains("FAIL  cme"), "{out}");
}

#[test]
fn seeded_runs_are_reproducible() {
    let (code, a, _) = ssw(&["lagint", "--seed", "0", "--count", "5", "--report", "json"]);
    assert_eq!(code, 0);
    let (_, b, _) = ssw(&["lagint", "--seed", "0", "--count", "5", "--report", "json"]);
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    let checks = v["checks"].as_array().unwrap();
    let residues: Vec<_> = checks.iter().filter(|c| c["name"].as_str().unwrap().ends_with("residue is 2 omega")).collect();
    assert_eq!(residues.len(), 5);
    assert!(residues.iter().all(|c| c["status"] == "pass"));
    let names: Vec<&str> = checks.iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.windows(2).all(|w| w[0] <= w[1]));
    assert!(v["input-digest"].as_str().unwrap().starts_with("sha256:"));

    let (_, other, _) = ssw(&["lagint", "--seed", "1", "--count", "5", "--report", "json"]);
    assert_ne!(a, other);

    let (code, empty, _) = ssw(&["lagint", "--seed", "0", "--count", "0", "--report", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&empty).unwrap();
    assert!(v["checks"].as_array().unwrap().is_empty());
}

#[test]
fn report_written_to_path() {
    let dir = std::env::temp_dir().join(format!("ssw-report-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.json");
    let data = data_path("general_ix.json");
    let (code, text, _) =
        ssw(&["complexes", "--data", data.to_str().unwrap(), "--case", "general", "--window", "-4:2", "--report", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{text}");
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["tool"], "ssw");
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["wall-time-ms"].is_u64()));
    assert!(text.contains("passed, 0 failed, 0 errors"));
    std::fs::remove_dir_all(&dir).unwrap();
}

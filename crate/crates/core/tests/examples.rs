//! Runs every example binary that `cargo test` builds alongside the tests.

use std::path::PathBuf;
use std::process::Command;

fn example(name: &str) -> PathBuf {
    let deps = std::env::current_exe().unwrap().parent().unwrap().to_path_buf();
    deps.parent().unwrap().join("examples").join(format!("{name}{}", std::env::consts::EXE_SUFFIX))
}

fn run(name: &str) -> String {
    let out = Command::new(example(name)).output().unwrap_or_else(|e| panic!("{name}: {e}"));
    assert!(out.status.success(), "{name} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn packet_construction() {
    assert!(run("packet_construction").contains("quantum: nu = 3, entropy 1.386294"));
}

#[test]
fn weyl_algebra() {
    assert!(run("weyl_algebra").contains("q^6 coefficient = -125/4 mu^4 V3^5"));
}

#[test]
fn taylor_evolution() {
    assert_eq!(run("taylor_evolution").lines().count(), 14);
}

#[test]
fn oracles() {
    assert!(run("oracles").contains("taylor vs matrix"));
}

#[test]
fn classical_limit() {
    let out = run("classical_limit");
    let exponent: f64 = out.lines().last().unwrap().rsplit(' ').next().unwrap().parse().unwrap();
    assert!((exponent + 2.0).abs() < 0.2);
}

#[test]
fn chain_thermodynamics() {
    assert!(run("chain_thermodynamics").contains("L_mean = 6.400000e1"));
}

#[test]
fn run_config() {
    assert!(run("run_config").starts_with("t,Qbar,Pbar,dQbar,dPbar,method"));
}

//! Each verification suite passes with the default seed and with a second
//! seed.

use orbita::verify::{run_suite, VerifyConfig, DEFAULT_SEED};

fn check(name: &str) {
    for seed in [DEFAULT_SEED, 7] {
        let r = run_suite(name, &VerifyConfig { seed }).expect("suite runs");
        for c in &r.checks {
            assert!(c.passed, "{name}/{} seed {seed}: {:e} > {:e}", c.name, c.max_residual, c.tolerance);
        }
    }
}

#[test]
fn brackets() {
    check("brackets");
}

#[test]
fn canonicity() {
    check("canonicity");
}

#[test]
fn eigen() {
    check("eigen");
}

#[test]
fn volume() {
    check("volume");
}

#[test]
fn branching() {
    check("branching");
}

#[test]
fn dynamics() {
    check("dynamics");
}

#[test]
fn cartan() {
    check("cartan");
}

#[test]
fn elliptic() {
    check("elliptic");
}

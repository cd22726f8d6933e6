//! Shared oracles and helpers for the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

/// so(3) multiplicities d_L, L = 0..λ+μ, of the u(3) irrep with highest
/// weight (λ+μ, μ, 0), by enumerating Gelfand–Tsetlin patterns.
///
/// Under the real SO(3) ⊂ U(3) the L3 generator is conjugate to
/// diag(1, 0, −1), so a pattern with weight (w1, w2, w3) has M = w1 − w3.
/// With n(M) the number of patterns of that M, d_L = n(L) − n(L + 1).
pub fn gt_branching(lam: u32, mu: u32) -> Vec<u32> {
    let (m13, m23, m33) = (i64::from(lam + mu), i64::from(mu), 0i64);
    let top = (lam + mu) as usize;
    let mut n = vec![0i64; top + 2];
    for m12 in m23..=m13 {
        for m22 in m33..=m23 {
            for m11 in m22..=m12 {
                let w1 = m11;
                let w3 = m13 + m23 + m33 - m12 - m22;
                let m = w1 - w3;
                if m >= 0 {
                    n[m as usize] += 1;
                }
            }
        }
    }
    (0..=top).map(|l| (n[l] - n[l + 1]) as u32).collect()
}

/// dim of the su(3) irrep (λ, μ).
pub fn su3_dim(lam: u32, mu: u32) -> u64 {
    u64::from((lam + 1) * (mu + 1) * (lam + mu + 2) / 2)
}

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_orbita")
}

pub fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

pub fn run_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(bin()).args(args).env(key, value).output().expect("binary runs")
}

/// Fresh scratch directory for one test.
pub fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("orbita-it-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).expect("scratch dir");
    dir
}

/// Parsed CSV: header and records.
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn parse(text: &str) -> Table {
        let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
        let header = r.headers().expect("header").iter().map(str::to_string).collect();
        let rows = r.records().map(|x| x.expect("record").iter().map(str::to_string).collect()).collect();
        Table { header, rows }
    }

    pub fn col(&self, name: &str) -> usize {
        self.header.iter().position(|h| h == name).unwrap_or_else(|| panic!("column {name}"))
    }

    pub fn f64s(&self, name: &str) -> Vec<f64> {
        let c = self.col(name);
        self.rows.iter().map(|r| r[c].parse().expect("number")).collect()
    }

    pub fn u32s(&self, name: &str) -> Vec<u32> {
        let c = self.col(name);
        self.rows.iter().map(|r| r[c].parse().expect("integer")).collect()
    }
}

//! Command-line outputs re-parse and re-satisfy the invariants of the
//! modules that produced them.

mod common;

use common::{gt_branching, run, run_env, scratch, Table};
use orbita::orbit::q_range;
use orbita::WeightVector;

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).expect("utf-8")
}

#[test]
fn spectrum_csv_reads_back() {
    for s in ["1", "-1"] {
        let text = stdout(&["spectrum", "--p", "14,6,0", "--s", s]);
        assert!(!text.contains('\r'));
        let t = Table::parse(&text);
        let (ls, ks, qs) = (t.u32s("L"), t.u32s("k"), t.f64s("Q"));
        let d = gt_branching(8, 6);
        assert_eq!(ls.len() as u32, d.iter().sum::<u32>());
        let keys: Vec<(u32, u32)> = ls.iter().copied().zip(ks.iter().copied()).collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]), "sorted by (L, k)");
        let wv = WeightVector::new(14.0, 6.0, 0.0).unwrap();
        for ((&l, &k), &q) in ls.iter().zip(&ks).zip(&qs) {
            assert!(k >= 1 && k <= d[l as usize]);
            if l > 0 {
                let (lo, hi) = q_range(&wv, f64::from(l)).unwrap();
                assert!(q >= lo - 1e-9 && q <= hi + 1e-9, "L={l} Q={q}");
            }
        }
    }
}

#[test]
fn numbers_have_seventeen_significant_digits() {
    let text = stdout(&["spectrum", "--p", "6,2,0"]);
    let t = Table::parse(&text);
    let c = t.col("Q");
    for r in &t.rows {
        let mantissa = r[c].split('e').next().unwrap().trim_start_matches('-').replace('.', "");
        assert_eq!(mantissa.len(), 17, "{}", r[c]);
    }
}

#[test]
fn bands_csv_reads_back() {
    let text = stdout(&["bands", "--lam", "50", "--mu", "15", "--p3", "100", "--l-steps", "40"]);
    let t = Table::parse(&text);
    assert_eq!(
        t.header,
        ["band", "L", "p", "Q", "P1", "P2", "P3", "beta", "Gamma", "x", "y", "E_factor", "stability"]
    );
    let (p1, p2, p3) = (t.f64s("P1"), t.f64s("P2"), t.f64s("P3"));
    let ls = t.f64s("L");
    assert!(ls.windows(2).all(|w| w[0] <= w[1]));
    for i in 0..t.rows.len() {
        assert!(p1[i] >= p2[i] - 1e-9 && p2[i] >= p3[i] - 1e-9, "row {i}");
        assert!((p1[i] + p2[i] + p3[i] - 380.0).abs() < 1e-9);
    }
}

#[test]
fn maximal_state_sits_on_the_expected_gamma() {
    for (lam, mu, expected) in [("50", "15", 60.0), ("15", "50", 0.0)] {
        let t = Table::parse(&stdout(&["bands", "--lam", lam, "--mu", mu, "--p3", "100", "--l-steps", "5"]));
        let (ls, gs) = (t.f64s("L"), t.f64s("Gamma"));
        let top = ls.iter().copied().fold(0.0, f64::max);
        for (l, g) in ls.iter().zip(&gs) {
            if *l == top {
                assert!((g.to_degrees() - expected).abs() < 1e-6, "({lam},{mu}): {}", g.to_degrees());
            }
        }
    }
}

#[test]
fn trajectory_closes_and_conserves_energy() {
    let t = Table::parse(&stdout(&["trajectory", "--p", "60,20,0", "--samples", "64", "--oracle"]));
    let (p, g, h) = (t.f64s("p"), t.f64s("gamma"), t.f64s("H"));
    let n = p.len() - 1;
    assert!((p[0] - p[n]).abs() < 1e-7 && (g[0] - g[n]).abs() < 1e-7);
    assert!(h.iter().all(|x| (x - h[0]).abs() < 1e-12));
    let pr = t.f64s("p_rk4");
    assert!(p.iter().zip(&pr).all(|(a, b)| (a - b).abs() < 1e-6));
}

#[test]
fn outputs_are_deterministic() {
    let dir = scratch("determinism");
    for (i, fmt) in ["csv", "json", "svg"].iter().enumerate() {
        let a = dir.join(format!("a{i}"));
        let b = dir.join(format!("b{i}"));
        for f in [&a, &b] {
            stdout(&["spectrum", "--p", "10,4,0", "--format", fmt, "--out", f.to_str().unwrap()]);
        }
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap(), "{fmt}");
    }
}

#[test]
fn json_has_meta_and_rows() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&["spectrum", "--p", "8,2,0", "--format", "json"])).unwrap();
    for key in ["orbit", "params", "version", "tolerances"] {
        assert!(!v["meta"][key].is_null(), "meta.{key}");
    }
    assert!(v["rows"].as_array().is_some_and(|r| !r.is_empty()));
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&["verify", "--suite", "cartan", "--format", "json"])).unwrap();
    assert_eq!(v["rows"][0]["suite"], "cartan");
}

#[test]
fn svg_outputs_are_well_formed() {
    for args in [
        vec!["spectrum", "--p", "60,20,0", "--s", "-1", "--format", "svg"],
        vec!["bands", "--lam", "15", "--mu", "50", "--p3", "100", "--format", "svg"],
        vec!["trajectory", "--p", "60,20,0", "--format", "svg", "--oracle"],
    ] {
        let text = stdout(&args);
        assert!(text.starts_with("<svg") && text.trim_end().ends_with("</svg>"));
        assert_eq!(text.matches("<svg").count(), 1);
        assert!(text.contains("<polyline"));
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["verify", "--suite", "brackets"]).status.code(), Some(0));
    assert_eq!(run(&["verify", "--suite", "bogus"]).status.code(), Some(1));
    assert_eq!(run_env(&["verify", "--suite", "cartan"], "ORBITA_QUAD_TOL", "-1e-3").status.code(), Some(1));
    assert_eq!(run(&["spectrum", "--p", "60,20.5,0"]).status.code(), Some(2));
    assert_eq!(run(&["bands", "--p", "1,2,3"]).status.code(), Some(2));
    assert_eq!(run(&["trajectory", "--p", "60,20,0", "--L", "90"]).status.code(), Some(2));
    assert_eq!(run(&["trajectory", "--p", "60,20,0", "--samples", "1"]).status.code(), Some(1));
    assert_eq!(run(&["spectrum", "--p", "9,4,0"]).status.code(), Some(3));
    assert_eq!(run(&["verify", "--format", "svg", "--suite", "cartan"]).status.code(), Some(1));
}

#[test]
fn quad_tol_override_is_honoured() {
    let out = run_env(&["spectrum", "--p", "6,2,0", "--format", "json"], "ORBITA_QUAD_TOL", "1e-9");
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["meta"]["tolerances"]["quad_tol"], 1e-9);
}

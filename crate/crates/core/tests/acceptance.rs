//! Acceptance criteria 1–10, one PASS/FAIL line each. Exits non-zero when
//! any criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::{run, scratch, Table};
use orbita::figure::spectrum_figure;
use orbita::orbit::band_catalog;
use orbita::quantize::{elliott_multiplicity, pi_sequence, total_volume};
use orbita::verify::{run_suite, SuiteReport, VerifyConfig, DEFAULT_SEED};
use orbita::{BandKind, WeightVector};

struct Outcome {
    passed: bool,
    detail: String,
    info: Vec<String>,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome { passed, detail: detail.into(), info: Vec::new() }
    }
}

fn suite(name: &str) -> SuiteReport {
    run_suite(name, &VerifyConfig { seed: DEFAULT_SEED }).unwrap_or_else(|e| panic!("suite {name}: {e}"))
}

/// Named checks of a suite, all required to pass, with minimum sample counts.
fn checks(report: &SuiteReport, wanted: &[(&str, usize)]) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for &(name, min_n) in wanted {
        match report.check(name) {
            Some(c) => {
                ok &= c.passed && c.count >= min_n;
                parts.push(format!("{name} {:.2e}/{:.0e} n={}", c.max_residual, c.tolerance, c.count));
            }
            None => {
                ok = false;
                parts.push(format!("{name} missing"));
            }
        }
    }
    (ok, parts.join(", "))
}

fn timed_suite(name: &str, wanted: &[(&str, usize)], budget: Option<Duration>) -> Outcome {
    let t = Instant::now();
    let r = suite(name);
    let elapsed = t.elapsed();
    let (mut ok, mut detail) = checks(&r, wanted);
    if let Some(b) = budget {
        ok &= elapsed < b;
        detail.push_str(&format!(", budget {:.0}s", b.as_secs_f64()));
    }
    Outcome::new(ok, detail)
}

fn criterion_6() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (lam, mu) in [(40.0, 20.0), (12.0, 12.0), (7.0, 3.0)] {
        let wv = WeightVector::from_gaps(lam, mu, 0.0).unwrap();
        let tv = total_volume(&wv).unwrap();
        let e = tv.relative_error();
        ok &= e < 1e-4;
        parts.push(format!("({lam},{mu}) rel {e:.2e}"));
    }
    Outcome::new(ok, parts.join(", "))
}

fn criterion_7() -> Outcome {
    let wv = WeightVector::new(60.0, 20.0, 0.0).unwrap();
    let mut ok = true;
    let mut info = Vec::new();
    for s in [1.0, -1.0] {
        let pi = pi_sequence(&wv, s).unwrap();
        let q = pi.q_bar_rule.expect("lambda != mu");
        ok &= (q - 23.85).abs() <= 0.01;
        let qs: Vec<f64> = pi.members.iter().map(|m| m.1).collect();
        let spread = qs.iter().copied().fold(f64::NEG_INFINITY, f64::max) - qs.iter().copied().fold(f64::INFINITY, f64::min);
        ok &= spread < 1e-8;
        info.push(format!(
            "s={s:+}: Qbar_sign(lam-mu)(min) = {q}, small-L limit = {:.6}, closed form swapped = {:.6}, unswapped = {:.6}",
            pi.q_pi, pi.closed_form, pi.closed_form_unswapped
        ));
        info.push(format!("s={s:+}: members {:?}, spread {spread:.3e}", pi.members));
    }
    let mut out = Outcome::new(ok, "Qbar within 23.85 +- 0.01 and member spread < 1e-8");
    out.info = info;
    out
}

fn criterion_8() -> Outcome {
    let wv = WeightVector::new(60.0, 20.0, 0.0).unwrap();
    let expected: u32 = (0..=60).map(|l| elliott_multiplicity(40, 20, l)).sum();
    let dir = scratch("acceptance-fig2");
    let cat = band_catalog(&wv, 1.0, 0.0).unwrap();
    let mut ok = true;
    let mut parts = Vec::new();
    for s in [1.0, -1.0] {
        let path = dir.join(format!("spectrum_{s}.csv"));
        let out = run(&["spectrum", "--p", "60,20,0", "--s", &s.to_string(), "--out", path.to_str().unwrap()]);
        if !out.status.success() {
            return Outcome::new(false, format!("spectrum s={s} exited {:?}", out.status.code()));
        }
        let t = Table::parse(&std::fs::read_to_string(&path).unwrap());
        ok &= t.rows.len() as u32 == expected;
        parts.push(format!("s={s:+} rows {}/{expected}", t.rows.len()));

        let fig = spectrum_figure(&wv, s, 64).unwrap();
        let pm: Vec<_> = fig.levels_of(BandKind::PMinus).filter(|p| p.on_curve).collect();
        let split = if s < 0.0 {
            pm.len() == 1 && pm[0].parity.is_none() && pm[0].delta_l == 1
        } else {
            pm.len() == 1 && pm[0].parity.is_some() && pm[0].delta_l == 2
        };
        ok &= split;
        parts.push(format!("P- dL {:?}", pm.iter().map(|p| p.delta_l).collect::<Vec<_>>()));
    }
    let fig = spectrum_figure(&wv, 1.0, 64).unwrap();
    let tol = 1e-9 * wv.scale();
    let mut matched = 0;
    for x in &cat.intersections {
        let hit = [x.bands.0, x.bands.1].iter().filter_map(|&b| fig.curve(b)).all(|c| {
            let ends = [c.points.first(), c.points.last()];
            ends.iter().flatten().any(|&&(l, q)| l == x.l && (q - x.q).abs() <= tol)
        });
        matched += usize::from(hit);
    }
    let labels: String = cat.intersections.iter().map(|x| x.label).collect();
    ok &= labels == "ABCD" && matched == 4;
    parts.push(format!("intersections {labels} matched {matched}/4"));
    Outcome::new(ok, parts.join(", "))
}

fn main() {
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        (
            "bracket fidelity",
            Box::new(|| {
                timed_suite(
                    "brackets",
                    &[("table-vs-oracle", 500), ("jacobi", 1), ("casimir-centrality", 1)],
                    Some(Duration::from_secs(10)),
                )
            }),
        ),
        (
            "canonicity",
            Box::new(|| {
                timed_suite("canonicity", &[("chart-jacobian", 200), ("kappa-jacobian", 200)], Some(Duration::from_secs(30)))
            }),
        ),
        (
            "eigenvalue formula",
            Box::new(|| timed_suite("eigen", &[("trig-vs-companion", 3 * 200 * 200), ("ordering-rules", 3 * 200 * 200)], None)),
        ),
        (
            "integer volume theorem",
            Box::new(|| timed_suite("volume", &[("integer-volume", 1)], Some(Duration::from_secs(300)))),
        ),
        (
            "branching consistency",
            Box::new(|| timed_suite("branching", &[("elliott-vs-volume", 1), ("d(60,20,0;L=0)=1", 1)], None)),
        ),
        ("total volume", Box::new(criterion_6)),
        ("Q_Pi and the Pi sequence", Box::new(criterion_7)),
        ("(L,Q) spectrum figure", Box::new(criterion_8)),
        (
            "dynamics",
            Box::new(|| {
                timed_suite(
                    "dynamics",
                    &[("rk4-sup-norm", 20), ("period-closure", 1), ("s2-saddle-frequency", 1)],
                    None,
                )
            }),
        ),
        (
            "Cartan identities",
            Box::new(|| {
                let names: Vec<String> = (1..=7).map(|i| format!("property-{i}")).collect();
                let mut wanted: Vec<(&str, usize)> = names.iter().map(|n| (n.as_str(), 1000)).collect();
                wanted.push(("d[ai]-finite-difference", 1000));
                timed_suite("cartan", &wanted, Some(Duration::from_secs(5)))
            }),
        ),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = f();
        let tag = if out.passed { "PASS" } else { "FAIL" };
        failed += usize::from(!out.passed);
        println!("criterion {:>2} {tag} {name} ({:.2}s): {}", i + 1, t.elapsed().as_secs_f64(), out.detail);
        for line in &out.info {
            println!("    {line}");
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

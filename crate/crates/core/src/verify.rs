//! Self-verification suites. Each suite draws deterministic random inputs,
//! compares a computed quantity against an independent oracle and reports the
//! worst residual per check.

use std::f64::consts::PI;
use std::time::Instant;

use nalgebra::{Matrix3, Vector3};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::action_angle::{
    evolve, kappa_forward, kappa_inverse, rk4_chart, wobbling_frequency, wobbling_frequency_at, wobbling_period,
    Hamiltonian, OmegaModel,
};
use crate::cartan::{amf_reduce, frame_derivative_coeffs, cartan_matrix, cartan_matrix_scaled, r3, star};
use crate::elliptic::{ellip_f, ellip_k, ellip_pi, jacobi_sn_am, QuarticRootData};
use crate::error::{OrbitaError, Result};
use crate::orbit::{band_catalog, chart_forward, check_domain, eigenvalues, kernels, q_range, BandKind, ChartPoint};
use crate::poisson::{
    casimir_gradients, poisson_tensor_oracle, poisson_tensor_table, u3_from_particles, PoissonTensor, ReducedState,
    WeightVector,
};
use crate::quantize::{branching_d, total_volume, volume_closed, volume_q};

/// Names accepted by [`run_suite`].
pub const SUITES: [&str; 8] = ["brackets", "canonicity", "eigen", "volume", "branching", "dynamics", "cartan", "elliptic"];

pub const DEFAULT_SEED: u64 = 0x5eed_0u64 + 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub count: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
    pub elapsed_s: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.max_residual).fold(0.0, f64::max)
    }
}

/// Running maximum of a residual against a tolerance. NaN counts as failure.
#[derive(Debug, Clone)]
pub struct Tally {
    name: String,
    tol: f64,
    count: usize,
    max: f64,
}

impl Tally {
    pub fn new(name: &str, tol: f64) -> Self {
        Self { name: name.to_string(), tol, count: 0, max: 0.0 }
    }

    pub fn push(&mut self, r: f64) {
        self.count += 1;
        if r.is_nan() {
            self.max = f64::INFINITY;
        } else if r > self.max {
            self.max = r;
        }
    }

    pub fn finish(self) -> Check {
        Check {
            passed: self.count > 0 && self.max <= self.tol,
            name: self.name,
            count: self.count,
            max_residual: self.max,
            tolerance: self.tol,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED }
    }
}

fn rng_for(cfg: &VerifyConfig, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Random strictly ordered orbit with gaps in [1, 60] and p3 in [−50, 50].
pub fn random_orbit(rng: &mut ChaCha8Rng) -> WeightVector {
    let lam = rng.random_range(1.0..60.0);
    let mu = rng.random_range(1.0..60.0);
    let p3 = rng.random_range(-50.0..50.0);
    WeightVector::from_gaps(lam, mu, p3).expect("positive gaps")
}

/// Uniform rejection sample of an interior point of M⁺ with L in
/// [0.02, 0.98]·L_max.
pub fn random_chart_point(rng: &mut ChaCha8Rng, wv: &WeightVector) -> ChartPoint {
    let [p1, _, p3] = wv.p();
    let lmax = wv.l_max();
    loop {
        let l = rng.random_range(0.02..0.98) * lmax;
        let p = rng.random_range(p3..p1);
        let gamma = rng.random_range(-1.45..1.45);
        let phi = rng.random_range(-PI..PI);
        if check_domain(wv, l, p, gamma).is_ok() {
            return ChartPoint::new(wv, l, p, phi, gamma);
        }
    }
}

pub fn random_state(rng: &mut ChaCha8Rng, wv: &WeightVector) -> ReducedState {
    let c = random_chart_point(rng, wv);
    chart_forward(&c, wv).expect("sampled inside the domain")
}

fn max_abs(t: &PoissonTensor) -> f64 {
    t.iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// Central-difference derivative of the oracle tensor along generator `k`.
fn oracle_derivative(s: &ReducedState, k: usize) -> Result<PoissonTensor> {
    let x = s.to_array();
    let h = 1e-6 * x.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    let mut a = x;
    let mut b = x;
    a[k] += h;
    b[k] -= h;
    let ta = poisson_tensor_oracle(&ReducedState::from_array(a))?;
    let tb = poisson_tensor_oracle(&ReducedState::from_array(b))?;
    let mut d = [[0.0; 7]; 7];
    for i in 0..7 {
        for j in 0..7 {
            d[i][j] = (ta[i][j] - tb[i][j]) / (2.0 * h);
        }
    }
    Ok(d)
}

/// Largest Jacobi residual Σ_l (π_il ∂_l π_jk + cyclic), divided by the
/// largest sum of absolute term values over all triples.
pub fn jacobi_residual(s: &ReducedState) -> Result<f64> {
    let pi = poisson_tensor_oracle(s)?;
    let dpi: Vec<PoissonTensor> = (0..7).map(|k| oracle_derivative(s, k)).collect::<Result<_>>()?;
    let (mut worst, mut mag_max) = (0.0_f64, 0.0_f64);
    for i in 0..7 {
        for j in 0..7 {
            for k in 0..7 {
                let (mut sum, mut mag) = (0.0, 0.0);
                for l in 0..7 {
                    for v in [pi[i][l] * dpi[l][j][k], pi[j][l] * dpi[l][k][i], pi[k][l] * dpi[l][i][j]] {
                        sum += v;
                        mag += v.abs();
                    }
                }
                worst = worst.max(sum.abs());
                mag_max = mag_max.max(mag);
            }
        }
    }
    if mag_max > 0.0 {
        worst /= mag_max;
    }
    Ok(worst)
}

/// Bracket fidelity: derived table vs general formula, Jacobi identity and
/// Casimir centrality.
pub fn suite_brackets(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut rng = rng_for(cfg, 1);
    let mut agree = Tally::new("table-vs-oracle", 1e-9);
    let mut jacobi = Tally::new("jacobi", 1e-7);
    let mut central = Tally::new("casimir-centrality", 1e-9);
    let mut antisym = Tally::new("antisymmetry", 1e-12);
    for _ in 0..500 {
        let wv = random_orbit(&mut rng);
        let s = random_state(&mut rng, &wv);
        let oracle = poisson_tensor_oracle(&s)?;
        let table = poisson_tensor_table(&s, 1.0)?;
        let scale = max_abs(&oracle).max(1.0);
        let mut worst = 0.0_f64;
        for i in 0..7 {
            for j in 0..7 {
                worst = worst.max((oracle[i][j] - table[i][j]).abs() / scale);
                antisym.push((oracle[i][j] + oracle[j][i]).abs() / scale);
            }
        }
        agree.push(worst);
        let grads = casimir_gradients(&s);
        for g in &grads {
            let gnorm = g.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-300);
            for t in [&oracle, &table] {
                for row in t.iter() {
                    let v: f64 = row.iter().zip(g).map(|(a, b)| a * b).sum();
                    central.push(v.abs() / (scale * gnorm));
                }
            }
        }
        jacobi.push(jacobi_residual(&s)?);
    }
    Ok(SuiteReport {
        suite: "brackets".into(),
        checks: vec![agree.finish(), jacobi.finish(), central.finish(), antisym.finish()],
        elapsed_s: start.elapsed().as_secs_f64(),
    })
}

/// Ridders' extrapolated central difference of a vector function of one
/// variable at 0, starting from step `h0`. Each component keeps the tableau
/// entry with the smallest error estimate.
fn ridders<const N: usize>(f: impl Fn(f64) -> Result<[f64; N]>, h0: f64) -> Result<[f64; N]> {
    const CON: f64 = 1.4;
    const NTAB: usize = 10;
    let central = |h: f64| -> Result<[f64; N]> {
        let (fa, fb) = (f(h)?, f(-h)?);
        Ok(std::array::from_fn(|i| (fa[i] - fb[i]) / (2.0 * h)))
    };
    let mut tab = vec![[[0.0; N]; NTAB]; NTAB];
    let mut err = [f64::INFINITY; N];
    let mut live = [true; N];
    let mut hh = h0;
    tab[0][0] = central(hh)?;
    let mut best = tab[0][0];
    for i in 1..NTAB {
        hh /= CON;
        tab[0][i] = central(hh)?;
        let mut fac = CON * CON;
        for j in 1..=i {
            for c in 0..N {
                tab[j][i][c] = (tab[j - 1][i][c] * fac - tab[j - 1][i - 1][c]) / (fac - 1.0);
                let e = (tab[j][i][c] - tab[j - 1][i][c])
                    .abs()
                    .max((tab[j][i][c] - tab[j - 1][i - 1][c]).abs());
                if live[c] && e <= err[c] {
                    err[c] = e;
                    best[c] = tab[j][i][c];
                }
            }
            fac *= CON * CON;
        }
        for c in 0..N {
            if (tab[i][i][c] - tab[i - 1][i - 1][c]).abs() >= 2.0 * err[c] {
                live[c] = false;
            }
        }
        if !live.iter().any(|&l| l) {
            break;
        }
    }
    Ok(best)
}

/// Initial Ridders step for coordinate `j`, halved until both probes at
/// ±h0 satisfy `ok`.
fn initial_step(x: [f64; 4], j: usize, ok: impl Fn([f64; 4]) -> bool) -> Result<f64> {
    let mut h0 = 1e-3 * x[j].abs().max(1.0);
    loop {
        let (mut a, mut b) = (x, x);
        a[j] += h0;
        b[j] -= h0;
        if ok(a) && ok(b) {
            return Ok(h0);
        }
        h0 *= 0.5;
        if h0 < 1e-9 {
            return Err(OrbitaError::OutOfDomain("sample point on the domain boundary".into()));
        }
    }
}

/// ∂(generators)/∂(L, p, φ, γ) by Ridders extrapolation.
pub fn chart_jacobian(wv: &WeightVector, x: [f64; 4]) -> Result<[[f64; 4]; 7]> {
    let eval = |y: [f64; 4]| chart_forward(&ChartPoint::new(wv, y[0], y[1], y[2], y[3]), wv);
    let mut m = [[0.0; 4]; 7];
    for j in 0..4 {
        let h0 = initial_step(x, j, |y| check_domain(wv, y[0], y[1], y[3]).is_ok())?;
        let col = ridders(
            |d| {
                let mut y = x;
                y[j] += d;
                Ok(eval(y)?.to_array())
            },
            h0,
        )?;
        for i in 0..7 {
            m[i][j] = col[i];
        }
    }
    Ok(m)
}

/// Minimum of |ĥ_ij| over the three kernels, relative to L² + 4 L_max².
pub fn wall_distance(wv: &WeightVector, c: &ChartPoint) -> f64 {
    let k = kernels(wv);
    let s = c.l * c.l + 4.0 * wv.l_max().powi(2);
    [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(i, j)| (k.h_hat(i, j, c.l, c.p, c.gamma) / s).abs())
        .fold(f64::INFINITY, f64::min)
}

/// Chart point at least `margin` (relative) away from every ĥ = 0 wall.
/// Finite differences lose all accuracy at the walls, where the generators
/// behave like the square root of the distance.
pub fn random_interior_chart_point(rng: &mut ChaCha8Rng, wv: &WeightVector, margin: f64) -> ChartPoint {
    loop {
        let c = random_chart_point(rng, wv);
        if wall_distance(wv, &c) >= margin {
            return c;
        }
    }
}

/// Canonical Poisson matrix of Ω = dx0∧dx2 + dx1∧dx3 in bracket form:
/// {x2, x0} = {x3, x1} = 1.
pub fn canonical_poisson() -> [[f64; 4]; 4] {
    let mut j = [[0.0; 4]; 4];
    j[0][2] = -1.0;
    j[2][0] = 1.0;
    j[1][3] = -1.0;
    j[3][1] = 1.0;
    j
}

/// Matrix of Ω = dx0∧dx2 + dx1∧dx3.
pub fn canonical_form() -> [[f64; 4]; 4] {
    let mut w = [[0.0; 4]; 4];
    w[0][2] = 1.0;
    w[2][0] = -1.0;
    w[1][3] = 1.0;
    w[3][1] = -1.0;
    w
}

/// Relative mismatch between M J Mᵀ and the oracle bracket at a chart point.
pub fn chart_canonicity_residual(wv: &WeightVector, c: &ChartPoint) -> Result<f64> {
    let m = chart_jacobian(wv, [c.l, c.p, c.phi, c.gamma])?;
    let pi = poisson_tensor_oracle(&chart_forward(c, wv)?)?;
    let j = canonical_poisson();
    let scale = max_abs(&pi).max(1.0);
    let mut worst = 0.0_f64;
    for a in 0..7 {
        for b in 0..7 {
            let mut v = 0.0;
            for i in 0..4 {
                for k in 0..4 {
                    v += m[a][i] * j[i][k] * m[b][k];
                }
            }
            worst = worst.max((v - pi[a][b]).abs() / scale);
        }
    }
    Ok(worst)
}

fn wrap(x: f64, period: f64) -> f64 {
    x - period * (x / period).round()
}

/// Jacobian of κ in (L, p, φ, γ) → (L, Q, ψ, ϑ), with angle differences
/// unwrapped at the base point.
pub fn kappa_jacobian(wv: &WeightVector, c: &ChartPoint) -> Result<[[f64; 4]; 4]> {
    let base = kappa_forward(c, wv)?;
    let x = [c.l, c.p, c.phi, c.gamma];
    let eval = |y: [f64; 4]| kappa_forward(&ChartPoint::new(wv, y[0], y[1], y[2], y[3]), wv);
    let offset = |y: [f64; 4]| -> Result<[f64; 4]> {
        let f = eval(y)?;
        Ok([
            f.l - base.l,
            f.q - base.q,
            wrap(f.psi - base.psi, 2.0 * PI),
            wrap(f.theta - base.theta, 2.0 * base.delta),
        ])
    };
    let mut n = [[0.0; 4]; 4];
    for j in 0..4 {
        let h0 = initial_step(x, j, |y| {
            y[3].signum() == c.gamma.signum() && check_domain(wv, y[0], y[1], y[3]).is_ok() && eval(y).is_ok()
        })?;
        let col = ridders(
            |d| {
                let mut y = x;
                y[j] += d;
                offset(y)
            },
            h0,
        )?;
        for i in 0..4 {
            n[i][j] = col[i];
        }
    }
    Ok(n)
}

/// max |Nᵀ Ω N − Ω| for κ at a chart point.
pub fn kappa_canonicity_residual(wv: &WeightVector, c: &ChartPoint) -> Result<f64> {
    let n = kappa_jacobian(wv, c)?;
    let w = canonical_form();
    let mut worst = 0.0_f64;
    for a in 0..4 {
        for b in 0..4 {
            let mut v = 0.0;
            for i in 0..4 {
                for k in 0..4 {
                    v += n[i][a] * w[i][k] * n[k][b];
                }
            }
            worst = worst.max((v - w[a][b]).abs());
        }
    }
    Ok(worst)
}

/// Interior sample for κ tests: away from γ = 0, Q = p2 and the ϑ = ±Δ seam.
pub fn random_kappa_point(rng: &mut ChaCha8Rng, wv: &WeightVector) -> ChartPoint {
    loop {
        let c = random_interior_chart_point(rng, wv, 1e-3);
        if c.gamma.abs() < 0.02 || c.gamma.cos() < 0.05 {
            continue;
        }
        let Ok(a) = kappa_forward(&c, wv) else { continue };
        let (qmin, qmax) = q_range(wv, c.l).expect("L within range");
        let width = qmax - qmin;
        if (a.q - wv.p()[1]).abs() < 0.01 * wv.scale()
            || a.q - qmin < 0.01 * width
            || qmax - a.q < 0.01 * width
            || a.theta.abs() > 0.9 * a.delta
        {
            continue;
        }
        if [1.0, -1.0].iter().any(|s| {
            let h = 1e-6 * c.l.max(1.0) * s;
            check_domain(wv, c.l + h, c.p + h, c.gamma + h).is_err()
        }) {
            continue;
        }
        return c;
    }
}

pub fn suite_canonicity(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut rng = rng_for(cfg, 2);
    let mut chart = Tally::new("chart-jacobian", 1e-6);
    let mut kappa = Tally::new("kappa-jacobian", 1e-6);
    let mut round = Tally::new("kappa-round-trip", 1e-9);
    for _ in 0..200 {
        let wv = random_orbit(&mut rng);
        let c = random_interior_chart_point(&mut rng, &wv, 1e-3);
        chart.push(chart_canonicity_residual(&wv, &c)?);
        let k = random_kappa_point(&mut rng, &wv);
        kappa.push(kappa_canonicity_residual(&wv, &k)?);
        let back = kappa_inverse(&kappa_forward(&k, &wv)?, &wv)?;
        round.push(
            [(back.p - k.p) / wv.scale(), wrap(back.phi - k.phi, 2.0 * PI), back.gamma - k.gamma]
                .iter()
                .fold(0.0_f64, |m, v| m.max(v.abs())),
        );
    }
    Ok(SuiteReport {
        suite: "canonicity".into(),
        checks: vec![chart.finish(), kappa.finish(), round.finish()],
        elapsed_s: start.elapsed().as_secs_f64(),
    })
}

/// Roots of P³ − S1 P² + (S11 + L²/4)P − (S111 + QL²/4) from the companion
/// matrix, real parts sorted descending, each refined by Newton steps on the
/// same cubic.
pub fn companion_roots(wv: &WeightVector, l: f64, q: f64) -> [f64; 3] {
    let c2 = -wv.s(1);
    let c1 = wv.s11() + 0.25 * l * l;
    let c0 = -(wv.s111() + 0.25 * q * l * l);
    let m = Matrix3::new(0.0, 0.0, -c0, 1.0, 0.0, -c1, 0.0, 1.0, -c2);
    let ev = m.complex_eigenvalues();
    let mut r = [ev[0].re, ev[1].re, ev[2].re];
    r.sort_by(|a, b| b.partial_cmp(a).expect("finite roots"));
    let f = |x: f64| ((x + c2) * x + c1) * x + c0;
    let df = |x: f64| (3.0 * x + 2.0 * c2) * x + c1;
    for x in r.iter_mut() {
        for _ in 0..2 {
            let d = df(*x);
            if d.abs() > 1e-8 * wv.scale() * wv.scale() {
                let step = f(*x) / d;
                if step.abs() < 1e-3 * wv.scale() {
                    *x -= step;
                }
            }
        }
    }
    r
}

/// Ordering rules with slack `tol`: p3 ≤ P3 ≤ Q ≤ p2 ≤ P2 ≤ P1 ≤ p1 below
/// p2 and its mirror image p3 ≤ P3 ≤ P2 ≤ p2 ≤ Q ≤ P1 ≤ p1 above.
pub fn ordering_ok(wv: &WeightVector, p: [f64; 3], q: f64, tol: f64) -> bool {
    let [p1, p2, p3] = wv.p();
    let chain = |v: &[f64]| v.windows(2).all(|w| w[0] <= w[1] + tol);
    if q < p2 {
        chain(&[p3, p[2], q, p2, p[1], p[0], p1])
    } else {
        chain(&[p3, p[2], p[1], p2, q, p[0], p1])
    }
}

/// Orbits used by the grid comparison: (60,20,0) and the two (λ,μ,p3)
/// shape-projection examples.
pub fn eigen_orbits() -> [WeightVector; 3] {
    [
        WeightVector::new(60.0, 20.0, 0.0).expect("ordered"),
        WeightVector::from_gaps(50.0, 15.0, 100.0).expect("ordered"),
        WeightVector::from_gaps(15.0, 50.0, 100.0).expect("ordered"),
    ]
}

pub fn suite_eigen(_cfg: &VerifyConfig) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut roots = Tally::new("trig-vs-companion", 1e-10);
    let mut order = Tally::new("ordering-rules", 0.0);
    let mut residual = Tally::new("cubic-residual", 1e-9);
    let n = 200;
    for wv in eigen_orbits() {
        let scale = wv.scale();
        let lmax = wv.l_max();
        for i in 0..n {
            let l = lmax * (i as f64 + 0.5) / n as f64;
            let (qmin, qmax) = q_range(&wv, l)?;
            for j in 0..n {
                let q = qmin + (qmax - qmin) * (j as f64 + 0.5) / n as f64;
                let e = eigenvalues(&wv, l, q)?;
                let c = companion_roots(&wv, l, q);
                roots.push((0..3).map(|k| (e.p[k] - c[k]).abs()).fold(0.0, f64::max) / scale);
                order.push(if ordering_ok(&wv, e.p, q, 1e-9 * scale) { 0.0 } else { 1.0 });
                let k = kernels(&wv);
                residual.push(e.p.iter().map(|&x| k.v(l, q, x).abs()).fold(0.0, f64::max) / scale.powi(3));
            }
        }
    }
    Ok(SuiteReport {
        suite: "eigen".into(),
        checks: vec![roots.finish(), order.finish(), residual.finish()],
        elapsed_s: start.elapsed().as_secs_f64(),
    })
}

/// Integer volume sweep over λ, μ ∈ 1..=12 plus the total-volume check.
pub fn suite_volume(_cfg: &VerifyConfig) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut sweep = Tally::new("integer-volume", 1e-6);
    let mut monotone = Tally::new("monotonicity", 1e-12);
    for lam in 1..=12u32 {
        for mu in 1..=12u32 {
            let wv = WeightVector::from_gaps(f64::from(lam), f64::from(mu), 0.0)?;
            for l in 0..=lam + mu {
                let lf = f64::from(l);
                let (qmin, qmax) = q_range(&wv, lf)?;
                let v = volume_q(&wv, lf, qmax)?;
                sweep.push((v - volume_closed(lam, mu, l) as f64).abs());
                if l > 0 && l < lam + mu && (lam + mu + l) % 5 == 0 {
                    let mut prev = 0.0;
                    for k in 1..=20 {
                        let q = qmin + (qmax - qmin) * f64::from(k) / 20.0;
                        let v = volume_q(&wv, lf, q)?;
                        monotone.push((prev - v).max(0.0));
                        prev = v;
                    }
                }
            }
        }
    }
    let mut total = Tally::new("total-volume", 1e-4);
    for (lam, mu) in [(40.0, 20.0), (12.0, 12.0), (7.0, 3.0)] {
        let t = total_volume(&WeightVector::from_gaps(lam, mu, 0.0)?)?;
        total.push(t.relative_error());
    }
    Ok(SuiteReport {
        suite: "volume".into(),
        checks: vec![sweep.finish(), monotone.finish(), total.finish()],
        elapsed_s: start.elapsed().as_secs_f64(),
    })
}

pub fn suite_branching(_cfg: &VerifyConfig) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut consistency = Tally::new("elliott-vs-volume", 0.0);
    let mut inner = Tally::new("inner-delta-bit", 0.0);
    for lam in 0..=12u32 {
        for mu in 0..=12u32 {
            for l in 0..=lam + mu {
                let r = branching_d(lam, mu, l);
                inner.push(if r.delta_inner <= 1 { 0.0 } else { 1.0 });
                if r.d >= 1 {
                    consistency.push((r.predicted_d() - i64::from(r.d)).abs() as f64);
                }
            }
        }
    }
    let mut singlet = Tally::new("d(60,20,0;L=0)=1", 0.0);
    singlet.push((f64::from(branching_d(40, 20, 0).d) - 1.0).abs());
    Ok(SuiteReport {
        suite: "branching".into(),
        checks: vec![consistency.finish(), inner.finish(), singlet.finish()],
        elapsed_s: start.elapsed().as_secs_f64(),
    })
}

/// One closed-form vs RK4 comparison over a full period. Returns
/// (sup |Δp|, sup |Δγ|, closure error, |2π/T − Ω_ϑ|/Ω_ϑ).
pub fn dynamics_draw(wv: &WeightVector, start: &ChartPoint, omega: f64) -> Result<[f64; 4]> {
    let h = Hamiltonian::new(0.0, 1.0, 0.0, OmegaModel::Constant(omega))?;
    let a0 = kappa_forward(start, wv)?;
    let period = wobbling_period(&a0, &h);
    let steps = 100_000;
    let every = 100;
    let c0 = kappa_inverse(&a0, wv)?;
    let path = rk4_chart(wv, start.l, omega, (c0.p, c0.gamma), period / steps as f64, steps, every);
    let (mut dp, mut dg) = (0.0_f64, 0.0_f64);
    for &(t, p, g) in &path {
        let c = kappa_inverse(&evolve(&a0, &h, t), wv)?;
        dp = dp.max((c.p - p).abs());
        dg = dg.max(wrap(c.gamma - g, 2.0 * PI).abs());
    }
    let end = kappa_inverse(&evolve(&a0, &h, period), wv)?;
    let closure = (end.p - c0.p).abs().max(wrap(end.gamma - c0.gamma, 2.0 * PI).abs());
    let freq = wobbling_frequency_at(wv, start.l, a0.q, &h)?;
    let rel = (2.0 * PI / period - freq).abs() / freq;
    Ok([dp, dg, closure, rel])
}

pub fn suite_dynamics(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut rng = rng_for(cfg, 9);
    let mut sup = Tally::new("rk4-sup-norm", 1e-6);
    let mut closure = Tally::new("period-closure", 1e-7);
    let mut freq = Tally::new("frequency-consistency", 1e-8);
    for _ in 0..20 {
        let wv = random_orbit(&mut rng);
        let l = rng.random_range(0.05..0.95) * wv.l_max();
        let (qmin, qmax) = q_range(&wv, l)?;
        let p2 = wv.p()[1];
        let q = loop {
            let q = qmin + (qmax - qmin) * rng.random_range(0.03..0.97);
            if (q - p2).abs() > 0.02 * (qmax - qmin) {
                break q;
            }
        };
        let rd = crate::action_angle::root_data(&wv, l, q)?;
        let delta = 0.5 * l / rd.c_coef.sqrt() * rd.k().value;
        let a = crate::action_angle::ActionAnglePoint {
            l,
            q,
            psi: rng.random_range(-PI..PI),
            theta: rng.random_range(-0.8..0.8) * delta,
            eps_theta: 0,
            delta,
        };
        let c = kappa_inverse(&a, &wv)?;
        let c = ChartPoint::new(&wv, c.l, c.p, c.phi, c.gamma);
        if check_domain(&wv, c.l, c.p, c.gamma).is_err() {
            continue;
        }
        let [dp, dg, cl, fr] = dynamics_draw(&wv, &c, 1.0)?;
        sup.push(dp.max(dg));
        closure.push(cl);
        freq.push(fr);
    }
    let mut saddle = Tally::new("s2-saddle-frequency", 0.0);
    for (lam, mu) in [(40.0, 20.0), (15.0, 50.0), (50.0, 15.0)] {
        let wv = WeightVector::from_gaps(lam, mu, 0.0)?;
        let cat = band_catalog(&wv, 1.0, 0.0)?;
        let h = Hamiltonian::new(0.0, 1.0, 0.0, OmegaModel::Constant(1.0))?;
        let band = cat.band(BandKind::S2);
        let l = 0.5 * (2.0 * (lam * mu).sqrt() + lam + mu);
        let w = wobbling_frequency(band, &wv, l, &h)?.value().unwrap_or(f64::NAN);
        // Approach the saddle from the interior of the Q range.
        let p2 = wv.p()[1];
        let (qmin, qmax) = q_range(&wv, l)?;
        let other = if (qmax - p2).abs() < (p2 - qmin).abs() { qmin } else { qmax };
        let near = wobbling_frequency_at(&wv, l, p2 + 1e-6 * (other - p2), &h)?;
        let far = wobbling_frequency_at(&wv, l, p2 + 0.5 * (other - p2), &h)?;
        saddle.push(if near < far { 0.0 } else { 1.0 });
        saddle.push(w.abs());
        saddle.push(wobbling_frequency_at(&wv, l, wv.p()[1], &h)?.abs());
    }
    Ok(SuiteReport {
        suite: "dynamics".into(),
        checks: vec![sup.finish(), closure.finish(), freq.finish(), saddle.finish()],
        elapsed_s: start.elapsed().as_secs_f64(),
    })
}

fn mat_err(a: &Matrix3<f64>, b: &Matrix3<f64>) -> f64 {
    (a - b).abs().max()
}

fn random_vector(rng: &mut ChaCha8Rng) -> Vector3<f64> {
    loop {
        let v = Vector3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let r = v.norm();
        if r > 0.05 && r <= 1.0 && r + v[2] > 0.05 * r {
            return v * 10f64.powf(rng.random_range(-2.0..2.0));
        }
    }
}

/// Cartan properties (1)–(7), orthogonality, the d[a i] finite-difference
/// identity, the Γ closed forms and the frame reduction.
pub fn suite_cartan(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut rng = rng_for(cfg, 10);
    let mut props: Vec<Tally> = (1..=7).map(|k| Tally::new(&format!("property-{k}"), 1e-12)).collect();
    let mut ortho = Tally::new("orthogonality", 1e-12);
    let mut deriv = Tally::new("d[ai]-finite-difference", 1e-6);
    let mut frame = Tally::new("d[ai]-frame-form", 1e-6);
    let mut closed = Tally::new("gamma-closed-forms", 1e-10);
    let e3 = Vector3::new(0.0, 0.0, 1.0);
    for _ in 0..1000 {
        let x = random_vector(&mut rng);
        let r = x.norm();
        let c = cartan_matrix(&x)?;
        let m = c.m;
        ortho.push(mat_err(&(m.transpose() * m), &Matrix3::identity()).max((m.determinant() - 1.0).abs()));
        let alpha = rng.random_range(-3.0..3.0_f64);
        if alpha != 0.0 {
            if let Ok(direct) = cartan_matrix(&(x * alpha)) {
                props[0].push(mat_err(&cartan_matrix_scaled(alpha, &x)?.m, &direct.m));
            }
        }
        props[1].push((m * e3 - x / r).abs().max());
        props[2].push((m * star(&x) - e3 * r).abs().max() / r);
        props[3].push(mat_err(&cartan_matrix(&star(&x))?.m, &m.transpose()));
        // [y] carries a 1/(|y| + y3) factor; redraw a while a or [x]a sits
        // near the −e3 pole.
        let near_pole = |y: &Vector3<f64>| y.z + y.norm() < 0.05 * y.norm();
        for _ in 0..100 {
            let a = x * rng.random_range(-2.0..2.0) + e3 * rng.random_range(0.5..2.0) * r;
            let ma = m * a;
            if near_pole(&ma) || near_pole(&a) {
                continue;
            }
            props[4].push(mat_err(&cartan_matrix(&ma)?.m, &(m * cartan_matrix(&a)?.m)));
            break;
        }
        let w = x.cross(&e3);
        props[5].push((m * w - w).abs().max() / r);
        let w3 = e3.cross(&x);
        if w3.norm() > 1e-3 * r {
            let ang = crate::cartan::factorisation_angle(&x);
            let rhs = cartan_matrix(&w3)?.m * r3(ang) * cartan_matrix(&star(&w3))?.m;
            props[6].push(mat_err(&m, &rhs));
        }
        let co = frame_derivative_coeffs(&x, r)?;
        let h = 1e-6 * r.max(1.0);
        let mut fd_scale = 0.0_f64;
        let mut fd = [Matrix3::zeros(); 3];
        for (k, slot) in fd.iter_mut().enumerate() {
            let mut xp = x;
            let mut xm = x;
            xp[k] += h;
            xm[k] -= h;
            *slot = (cartan_matrix(&xp)?.m - cartan_matrix(&xm)?.m) / (2.0 * h);
            fd_scale = fd_scale.max(slot.abs().max());
        }
        let fd_scale = fd_scale.max(1.0 / r);
        for (k, f) in fd.iter().enumerate() {
            deriv.push(mat_err(&co.d_cartan(k), f) / fd_scale);
            let via_frame = (0..3).fold(Matrix3::zeros(), |acc, j| acc + co.d_cartan_frame(j) * m[(k, j)]);
            frame.push(mat_err(&via_frame, f) / fd_scale);
        }
        let (g1, g1c) = (co.gamma1, co.gamma1_closed_form());
        let (g2, g2c) = (co.gamma2, co.gamma2_closed_form());
        let s1 = g1.iter().flatten().flatten().flatten().fold(0.0_f64, |m, v| m.max(v.abs())).max(1e-300);
        let s2 = g2.iter().flatten().flatten().flatten().fold(0.0_f64, |m, v| m.max(v.abs())).max(1e-300);
        let mut worst = 0.0_f64;
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    for d in 0..3 {
                        worst = worst.max((g1[a][b][c][d] - g1c[a][b][c][d]).abs() / s1);
                        worst = worst.max((g2[a][b][c][d] - g2c[a][b][c][d]).abs() / s2);
                    }
                }
            }
        }
        closed.push(worst);
    }
    let mut amf = Tally::new("amf-reduction", 1e-12);
    for _ in 0..100 {
        let pos: Vec<Vector3<f64>> = (0..5).map(|_| random_vector(&mut rng)).collect();
        let mom: Vec<Vector3<f64>> = (0..5).map(|_| random_vector(&mut rng)).collect();
        let masses: Vec<f64> = (0..5).map(|_| rng.random_range(0.5..2.0)).collect();
        let a = u3_from_particles(&pos, &mom, &masses, rng.random_range(0.5..2.0))?;
        let lv = a.l_vec();
        let ca = a.casimirs();
        for eps in [1i8, -1] {
            let b = match amf_reduce(&a, eps) {
                Ok(b) => b,
                Err(OrbitaError::AntipodalAngularMomentum(_)) => continue,
                Err(e) => return Err(e),
            };
            let lb = b.l_vec();
            let ln = lv.norm().max(1e-300);
            let cb = b.casimirs();
            let cas = (0..3).map(|k| (ca[k] - cb[k]).abs() / ca[k].abs().max(1e-300)).fold(0.0, f64::max);
            amf.push(
                (lb[0].abs() / ln)
                    .max(lb[1].abs() / ln)
                    .max((lb[2] - f64::from(eps) * ln).abs() / ln)
                    .max(cas * 1e-2),
            );
        }
    }
    let mut checks: Vec<Check> = props.into_iter().map(Tally::finish).collect();
    checks.extend([ortho.finish(), deriv.finish(), frame.finish(), closed.finish(), amf.finish()]);
    Ok(SuiteReport { suite: "cartan".into(), checks, elapsed_s: start.elapsed().as_secs_f64() })
}

/// Composite Gauss–Legendre quadrature on [a, b], used as an oracle for the
/// Carlson-based integrals.
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    const X: [f64; 5] = [0.0, 0.538_469_310_105_683_1, -0.538_469_310_105_683_1, 0.906_179_845_938_664, -0.906_179_845_938_664];
    const W: [f64; 5] = [
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
        0.236_926_885_056_189_1,
    ];
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|k| {
            let mid = a + (k as f64 + 0.5) * h;
            X.iter().zip(W).map(|(x, w)| w * f(mid + 0.5 * h * x)).sum::<f64>() * 0.5 * h
        })
        .sum()
}

/// Arithmetic–geometric-mean value of K(m).
pub fn agm_k(m: f64) -> f64 {
    let (mut a, mut b) = (1.0, (1.0 - m).sqrt());
    for _ in 0..64 {
        if (a - b).abs() <= 4.0 * f64::EPSILON * a {
            break;
        }
        let next = (0.5 * (a + b), (a * b).sqrt());
        a = next.0;
        b = next.1;
    }
    PI / (2.0 * a)
}

pub fn suite_elliptic(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut rng = rng_for(cfg, 11);
    let mut legendre = Tally::new("carlson-vs-quadrature", 1e-10);
    let mut kagm = Tally::new("k-vs-agm", 1e-13);
    let mut inverse = Tally::new("am-inverts-f", 1e-12);
    let mut period = Tally::new("sn-period", 1e-10);
    for k in 0..50 {
        let m = 0.95 * k as f64 / 50.0;
        let phi = 0.05 + 1.5 * ((k * 7) % 50) as f64 / 50.0;
        let n = -0.9 + 1.7 * ((k * 13) % 50) as f64 / 50.0;
        let f_q = gauss_legendre(|t| 1.0 / (1.0 - m * t.sin().powi(2)).sqrt(), 0.0, phi, 64);
        let pi_q = gauss_legendre(
            |t| {
                let s2 = t.sin().powi(2);
                1.0 / ((1.0 - n * s2) * (1.0 - m * s2).sqrt())
            },
            0.0,
            phi,
            64,
        );
        let f_c = ellip_f(phi, m)?;
        legendre.push((f_c - f_q).abs() / f_q.abs());
        if n * phi.sin().powi(2) < 1.0 {
            let pi_c = ellip_pi(n, phi, m)?;
            legendre.push((pi_c - pi_q).abs() / pi_q.abs());
        }
        let k_c = ellip_k(m)?;
        kagm.push((k_c - agm_k(m)).abs() / k_c);
        let (_, am) = jacobi_sn_am(f_c, m)?;
        inverse.push((am - phi).abs());
        let u = rng.random_range(-3.0..3.0);
        let (s0, _) = jacobi_sn_am(u, m)?;
        let (s1, _) = jacobi_sn_am(u + 4.0 * k_c, m)?;
        period.push((s0 - s1).abs());
    }
    let mut deriv = Tally::new("di-dx-finite-difference", 1e-6);
    let mut roundtrip = Tally::new("i-inverse-round-trip", 1e-10);
    let mut sym = Tally::new("mirror-symmetry", 1e-10);
    for _ in 0..100 {
        let mut r = [rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)];
        r.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
        if r[0] - r[1] < 0.1 || r[1] - r[2] < 0.1 {
            continue;
        }
        let (sigma, q) = if rng.random_bool(0.5) {
            (-1i8, rng.random_range(r[2]..r[1]))
        } else {
            (1i8, rng.random_range(r[1]..r[0]))
        };
        let rd = QuarticRootData::new(r, q, sigma)?;
        let (lo, hi) = rd.interval();
        let x = lo + (hi - lo) * rng.random_range(0.1..0.9);
        let h = 1e-6 * (hi - lo);
        let fd = (rd.action_i(x + h)? - rd.action_i(x - h)?) / (2.0 * h);
        let exact = rd.d_action_i(x);
        deriv.push((fd - exact).abs() / exact.abs());
        let y = rd.action_i(x)?;
        roundtrip.push((rd.action_i_inverse(y)? - x).abs() / (hi - lo));
        let mirrored = QuarticRootData::new([-r[2], -r[1], -r[0]], -q, -sigma)?;
        let di = (mirrored.action_i(-x)? - y).abs() / y.abs().max(1e-12);
        sym.push((mirrored.b_param - rd.b_param).abs().max((mirrored.c_coef - rd.c_coef).abs() / rd.c_coef).max(di));
    }
    Ok(SuiteReport {
        suite: "elliptic".into(),
        checks: vec![
            legendre.finish(),
            kagm.finish(),
            inverse.finish(),
            period.finish(),
            deriv.finish(),
            roundtrip.finish(),
            sym.finish(),
        ],
        elapsed_s: start.elapsed().as_secs_f64(),
    })
}

pub fn run_suite(name: &str, cfg: &VerifyConfig) -> Result<SuiteReport> {
    match name {
        "brackets" => suite_brackets(cfg),
        "canonicity" => suite_canonicity(cfg),
        "eigen" => suite_eigen(cfg),
        "volume" => suite_volume(cfg),
        "branching" => suite_branching(cfg),
        "dynamics" => suite_dynamics(cfg),
        "cartan" => suite_cartan(cfg),
        "elliptic" => suite_elliptic(cfg),
        other => Err(OrbitaError::InvalidArgument(format!(
            "unknown suite '{other}' (expected one of {})",
            SUITES.join(", ")
        ))),
    }
}

pub fn run_all(cfg: &VerifyConfig) -> Result<Vec<SuiteReport>> {
    SUITES.iter().map(|s| run_suite(s, cfg)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tally_treats_nan_as_failure() {
        let mut t = Tally::new("x", 1.0);
        t.push(0.5);
        t.push(f64::NAN);
        assert!(!t.finish().passed);
        assert!(!Tally::new("empty", 1.0).finish().passed);
    }

    #[test]
    fn ridders_differentiates_smooth_functions() {
        let d = ridders(|h| Ok([(1.0 + h).sin(), (1.0 + h).exp()]), 0.1).unwrap();
        assert!((d[0] - 1.0f64.cos()).abs() < 1e-12);
        assert!((d[1] - 1.0f64.exp()).abs() < 1e-12);
    }

    #[test]
    fn unknown_suite_is_an_argument_error() {
        let e = run_suite("nope", &VerifyConfig::default()).unwrap_err();
        assert_eq!(e.class(), crate::ErrorClass::Argument);
    }

    #[test]
    fn sampled_orbits_are_ordered() {
        let mut rng = rng_for(&VerifyConfig::default(), 1);
        for _ in 0..100 {
            let wv = random_orbit(&mut rng);
            let p = wv.p();
            assert!(p[0] > p[1] && p[1] > p[2]);
        }
    }

    #[test]
    fn volume_suite_passes() {
        assert!(suite_volume(&VerifyConfig::default()).unwrap().passed());
    }
}

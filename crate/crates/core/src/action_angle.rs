//! Wobbling action-angle coordinates (L, Q, ψ, ϑ), their closed-form flow
//! under H = E0 + ¼ω(L)Q, wobbling frequencies and body-frame momenta.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::elliptic::QuarticRootData;
use crate::error::{OrbitaError, Result};
use crate::orbit::{check_domain, chart_forward_closure, eigenvalues, kernels, Band, BandKind, ChartPoint, Stability};
use crate::poisson::WeightVector;

/// ħω_A ≈ 40·A^{-1/3} MeV.
pub fn nuclear_omega(mass_number: f64) -> f64 {
    40.0 * mass_number.powf(-1.0 / 3.0)
}

/// Action-angle point; ϑ is kept in (−Δ, Δ].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActionAnglePoint {
    pub l: f64,
    pub q: f64,
    pub psi: f64,
    pub theta: f64,
    /// sign sin(πϑ/Δ); zero at the turning points ϑ ∈ {0, Δ}.
    pub eps_theta: i8,
    /// Half period Δ = ½ L C^{-1/2} K(B).
    pub delta: f64,
}

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Rotational frequency model ω(L).
#[derive(Clone)]
pub enum OmegaModel {
    Constant(f64),
    /// ω(L) = c·L².
    Quadratic(f64),
    /// User-supplied ω with optional analytic derivative (central
    /// differences otherwise).
    Custom { omega: ScalarFn, derivative: Option<ScalarFn> },
}

impl fmt::Debug for OmegaModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OmegaModel::Constant(w) => write!(f, "Constant({w})"),
            OmegaModel::Quadratic(c) => write!(f, "Quadratic({c})"),
            OmegaModel::Custom { .. } => write!(f, "Custom"),
        }
    }
}

impl OmegaModel {
    pub fn omega(&self, l: f64) -> f64 {
        match self {
            OmegaModel::Constant(w) => *w,
            OmegaModel::Quadratic(c) => c * l * l,
            OmegaModel::Custom { omega, .. } => omega(l),
        }
    }

    pub fn derivative(&self, l: f64) -> f64 {
        match self {
            OmegaModel::Constant(_) => 0.0,
            OmegaModel::Quadratic(c) => 2.0 * c * l,
            OmegaModel::Custom { omega, derivative } => match derivative {
                Some(d) => d(l),
                None => {
                    let h = 1e-6 * l.abs().max(1.0);
                    (omega(l + h) - omega(l - h)) / (2.0 * h)
                }
            },
        }
    }
}

/// H = E0 + ¼ω(L)Q with family parameters (r, s), r ≤ 2, s ≥ 0.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    pub e0: f64,
    /// dE0/dL; nonzero values add a drift to ψ.
    pub de0_dl: f64,
    pub r: f64,
    pub s: f64,
    pub model: OmegaModel,
}

impl Hamiltonian {
    pub fn new(e0: f64, r: f64, s: f64, model: OmegaModel) -> Result<Self> {
        if !(r <= 2.0) || !(s >= 0.0) {
            return Err(OrbitaError::InvalidArgument(format!("need r <= 2 and s >= 0 (r={r}, s={s})")));
        }
        Ok(Self { e0, de0_dl: 0.0, r, s, model })
    }

    /// ω(L) = ⟨p⟩_g^{-2} ω_r L². The arithmetic mean stands in for the
    /// geometric one when some weight is nonpositive.
    pub fn default_for(wv: &WeightVector, omega_r: f64, e0: f64) -> Self {
        let pbar = wv.geometric_mean().unwrap_or_else(|| wv.mean());
        Self { e0, de0_dl: 0.0, r: 1.0, s: 0.0, model: OmegaModel::Quadratic(omega_r / (pbar * pbar)) }
    }

    pub fn omega(&self, l: f64) -> f64 {
        self.model.omega(l)
    }

    pub fn energy(&self, l: f64, q: f64) -> f64 {
        self.e0 + 0.25 * self.omega(l) * q
    }

    /// (ϑ̇, ψ̇).
    pub fn angular_velocities(&self, l: f64, q: f64) -> (f64, f64) {
        (0.25 * self.omega(l), 0.25 * q * self.model.derivative(l) + self.de0_dl)
    }
}

/// Root data of the quartic at (L, Q) with σ = sign(Q − p2).
pub fn root_data(wv: &WeightVector, l: f64, q: f64) -> Result<QuarticRootData> {
    let e = eigenvalues(wv, l, q)?;
    let sigma = if q < wv.p()[1] { -1 } else { 1 };
    QuarticRootData::new(e.p, q, sigma)
}

/// Δ = ½ L C^{-1/2} K(B), and whether K came from its large-period asymptote.
pub fn half_period(wv: &WeightVector, l: f64, q: f64) -> Result<(f64, bool)> {
    let rd = root_data(wv, l, q)?;
    let k = rd.k();
    Ok((0.5 * l / rd.c_coef.sqrt() * k.value, k.large_period))
}

fn wrap_angle(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    if y == -PI {
        PI
    } else {
        y
    }
}

/// Map into (−Δ, Δ].
pub fn normalize_theta(theta: f64, delta: f64) -> f64 {
    let y = (theta + delta).rem_euclid(2.0 * delta) - delta;
    if y <= -delta {
        y + 2.0 * delta
    } else {
        y
    }
}

fn eps_of(theta: f64, delta: f64) -> i8 {
    let s = (PI * theta / delta).sin();
    if theta == 0.0 || theta == delta || s == 0.0 {
        0
    } else if s > 0.0 {
        1
    } else {
        -1
    }
}

/// κ: (L, p, φ, γ) ↦ (L, Q, ψ, ϑ) with ϑ = ¼ε_γ L I(p), ψ = φ + ½ε_γ J(p).
pub fn kappa_forward(c: &ChartPoint, wv: &WeightVector) -> Result<ActionAnglePoint> {
    check_domain(wv, c.l, c.p, c.gamma)?;
    let l = c.l;
    let q = kernels(wv).q_of(l, c.p, c.gamma);
    let rd = root_data(wv, l, q)?;
    if rd.is_degenerate() {
        return Err(OrbitaError::BoundaryState);
    }
    let eg = if c.gamma >= 0.0 { 1.0 } else { -1.0 };
    let (i, j) = rd.action_i_j(c.p)?;
    let delta = 0.5 * l / rd.c_coef.sqrt() * rd.k().value;
    let theta = normalize_theta(0.25 * eg * l * i, delta);
    Ok(ActionAnglePoint {
        l,
        q,
        psi: wrap_angle(c.phi + 0.5 * eg * j),
        theta,
        eps_theta: eps_of(theta, delta),
        delta,
    })
}

/// p_{L,Q}(ϑ) = Â(sn²(2C^{1/2}ϑ/L | B)), periodic with period 2Δ.
pub fn p_of_theta(rd: &QuarticRootData, l: f64, theta: f64) -> Result<f64> {
    let (lo, hi) = rd.interval();
    Ok(rd.action_i_inverse(4.0 * theta / l)?.clamp(lo, hi))
}

/// κ⁻¹: γ = −ε_ϑ arccos(½L√((Q−p)/G(p))), φ = ψ + ½ε_ϑ J(p).
pub fn kappa_inverse(a: &ActionAnglePoint, wv: &WeightVector) -> Result<ChartPoint> {
    let rd = root_data(wv, a.l, a.q)?;
    let delta = 0.5 * a.l / rd.c_coef.sqrt() * rd.k().value;
    let theta = normalize_theta(a.theta, delta);
    let p = p_of_theta(&rd, a.l, theta)?;
    let eps_t = f64::from(eps_of(theta, delta));
    let gamma = kernels(wv).gamma_of(a.l, a.q, p, -eps_t);
    let j = rd.action_j(p)?;
    Ok(ChartPoint::new(wv, a.l, p, wrap_angle(a.psi + 0.5 * eps_t * j), gamma))
}

/// Closed-form flow: ϑ advances at ¼ω(L), ψ at ¼Qω′(L) (+ dE0/dL).
pub fn evolve(a0: &ActionAnglePoint, h: &Hamiltonian, t: f64) -> ActionAnglePoint {
    if t == 0.0 {
        return *a0;
    }
    let (dtheta, dpsi) = h.angular_velocities(a0.l, a0.q);
    let theta = normalize_theta(a0.theta + dtheta * t, a0.delta);
    ActionAnglePoint {
        theta,
        psi: wrap_angle(a0.psi + dpsi * t),
        eps_theta: eps_of(theta, a0.delta),
        ..*a0
    }
}

/// Period T = 2Δ/ϑ̇ of the (p, γ) motion.
pub fn wobbling_period(a: &ActionAnglePoint, h: &Hamiltonian) -> f64 {
    2.0 * a.delta / h.angular_velocities(a.l, a.q).0
}

/// One row of a sampled trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub l: f64,
    pub q: f64,
    pub psi: f64,
    pub theta: f64,
    pub p: f64,
    pub gamma: f64,
    pub phi: f64,
    pub h: f64,
    pub casimirs: [f64; 3],
}

/// Sample the closed-form flow at `samples` uniform times on [0, t_end].
pub fn trajectory(
    start: &ChartPoint,
    wv: &WeightVector,
    h: &Hamiltonian,
    t_end: f64,
    samples: usize,
) -> Result<Vec<TrajectorySample>> {
    let a0 = kappa_forward(start, wv)?;
    let n = samples.max(2);
    (0..n)
        .map(|k| {
            let t = t_end * k as f64 / (n - 1) as f64;
            let a = evolve(&a0, h, t);
            let c = kappa_inverse(&a, wv)?;
            let state = chart_forward_closure(&c, wv)?;
            Ok(TrajectorySample {
                t,
                l: a.l,
                q: a.q,
                psi: a.psi,
                theta: a.theta,
                p: c.p,
                gamma: c.gamma,
                phi: c.phi,
                h: h.energy(a.l, a.q),
                casimirs: state.casimirs(),
            })
        })
        .collect()
}

/// Right-hand side of the (p, γ) equations at fixed L:
/// ṗ = 2L⁻²G(p)ω cos γ sin γ, γ̇ = ¼ω(1 + 4L⁻²G′(p)cos²γ).
pub fn chart_velocity(wv: &WeightVector, l: f64, omega: f64, p: f64, gamma: f64) -> (f64, f64) {
    let (s, c) = gamma.sin_cos();
    let l2 = l * l;
    (
        2.0 * wv.g(p) * omega * c * s / l2,
        0.25 * omega * (1.0 + 4.0 * wv.g_prime(p) * c * c / l2),
    )
}

/// Classical RK4 integration of [`chart_velocity`]; returns (t, p, γ) after
/// every `record_every` steps, including the start.
pub fn rk4_chart(
    wv: &WeightVector,
    l: f64,
    omega: f64,
    start: (f64, f64),
    dt: f64,
    steps: usize,
    record_every: usize,
) -> Vec<(f64, f64, f64)> {
    let f = |p: f64, g: f64| chart_velocity(wv, l, omega, p, g);
    let (mut p, mut g) = start;
    let mut out = vec![(0.0, p, g)];
    let every = record_every.max(1);
    for k in 1..=steps {
        let (k1p, k1g) = f(p, g);
        let (k2p, k2g) = f(p + 0.5 * dt * k1p, g + 0.5 * dt * k1g);
        let (k3p, k3g) = f(p + 0.5 * dt * k2p, g + 0.5 * dt * k2g);
        let (k4p, k4g) = f(p + dt * k3p, g + dt * k3g);
        p += dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        g += dt / 6.0 * (k1g + 2.0 * k2g + 2.0 * k3g + k4g);
        if k % every == 0 || k == steps {
            out.push((k as f64 * dt, p, g));
        }
    }
    out
}

/// Wobbling frequency on a band state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum WobblingFrequency {
    Stable(f64),
    /// Infinite period on the S2 separatrix: Ω_ϑ = 0.
    Saddle,
    /// Negative frequency constant C.
    Unstable { c: f64 },
}

impl WobblingFrequency {
    pub fn value(&self) -> Option<f64> {
        match self {
            WobblingFrequency::Stable(w) => Some(*w),
            WobblingFrequency::Saddle => Some(0.0),
            WobblingFrequency::Unstable { .. } => None,
        }
    }
}

/// Frequency constant C at a band state: (p_{i+1}−p_i)(p_{i+2}−p_i) + ¼L²
/// on S_i, ±4S_L G(p_±)/L² on P_±.
pub fn band_frequency_constant(kind: BandKind, wv: &WeightVector, l: f64) -> f64 {
    let p = wv.p();
    let s_i = |i: usize| (p[(i + 1) % 3] - p[i]) * (p[(i + 2) % 3] - p[i]) + 0.25 * l * l;
    match kind {
        BandKind::S1 => s_i(0),
        BandKind::S2 => s_i(1),
        BandKind::S3 => s_i(2),
        BandKind::PPlus => 4.0 * wv.s_l(l) * wv.g(crate::orbit::p_sigma(wv, l, 1)) / (l * l),
        BandKind::PMinus => -4.0 * wv.s_l(l) * wv.g(crate::orbit::p_sigma(wv, l, -1)) / (l * l),
    }
}

/// Ω_ϑ on a band: L⁻¹C^{1/2}ω(L) (B = 0 there), zero on the S2 saddle.
pub fn wobbling_frequency(band: &Band, wv: &WeightVector, l: f64, h: &Hamiltonian) -> Result<WobblingFrequency> {
    let seg = band
        .segment_at(l)
        .ok_or_else(|| OrbitaError::InvalidArgument(format!("L = {l} outside band {}", band.kind.name())))?;
    if seg.stability == Stability::Saddle {
        return Ok(WobblingFrequency::Saddle);
    }
    let c = band_frequency_constant(band.kind, wv, l);
    if c < 0.0 || seg.stability == Stability::VibrationallyUnstable {
        return Ok(WobblingFrequency::Unstable { c });
    }
    Ok(WobblingFrequency::Stable(c.sqrt() * h.omega(l) / l))
}

/// Ω_ϑ = (π/2)C^{1/2}ω(L)/(L K(B)) at a generic (L, Q); zero at the S2
/// saddle Q = p2, L ≥ 2√(λμ).
pub fn wobbling_frequency_at(wv: &WeightVector, l: f64, q: f64, h: &Hamiltonian) -> Result<f64> {
    if (q - wv.p()[1]).abs() <= 1e-12 * wv.scale() && l >= 2.0 * (wv.lam() * wv.mu()).sqrt() {
        return Ok(0.0);
    }
    let rd = root_data(wv, l, q)?;
    let k = rd.k();
    if k.large_period && rd.b_comp == 0.0 {
        return Ok(0.0);
    }
    Ok(FRAC_PI_2 * rd.c_coef.sqrt() * h.omega(l) / (l * k.value))
}

/// Body-frame angular momentum at p = p_{L,Q}(ϑ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BodyFrameMomenta {
    /// Squared components *ℒ_α², α = 1, 2, 3.
    pub sq: [f64; 3],
    pub p: f64,
    pub eig: [f64; 3],
    pub l: f64,
}

impl BodyFrameMomenta {
    /// Nonnegative components |*ℒ_α|.
    pub fn components(&self) -> [f64; 3] {
        self.sq.map(|v| v.max(0.0).sqrt())
    }

    /// Residual of the cubic ℱ_r(P3) relation (r = 1 or 2), relative to its
    /// natural scale.
    pub fn cubic_residual(&self, wv: &WeightVector, r: i32) -> f64 {
        let p3 = self.eig[2];
        let s1 = wv.s(1);
        let sl = wv.s_l(self.l);
        let cp = ((4.0 * sl * sl - (3.0 * p3 - s1).powi(2)).max(0.0) / 3.0).sqrt();
        let a = 8.0 * wv.g(p3) + (self.sq[0] + self.sq[1]) * (3.0 * p3 - s1);
        let b = (self.sq[0] - self.sq[1]) * cp;
        let scale = (8.0 * wv.g(p3).abs() + self.l * self.l * (3.0 * p3 - s1).abs()).max(1.0).powi(r);
        (a.powi(r) - b.powi(r)).abs() / scale
    }
}

/// *ℒ_α² = ¾ (p − P_α)/(p − Q) · G(Q)/G(P_α) · L⁴/((3P_α − S1)² − S_L²).
pub fn bodyframe_momenta(wv: &WeightVector, l: f64, q: f64, theta: f64) -> Result<BodyFrameMomenta> {
    let rd = root_data(wv, l, q)?;
    let p = p_of_theta(&rd, l, theta)?;
    let e = eigenvalues(wv, l, q)?;
    let s1 = wv.s(1);
    let sl = wv.s_l(l);
    let tol = 1e-12 * wv.scale();
    let mut sq = [0.0; 3];
    for (k, &pa) in e.p.iter().enumerate() {
        if (p - pa).abs() <= tol {
            continue;
        }
        sq[k] = 0.75 * (p - pa) / (p - q) * wv.g(q) / wv.g(pa) * l.powi(4)
            / ((3.0 * pa - s1).powi(2) - sl * sl);
    }
    for (index, &value) in sq.iter().enumerate() {
        if value < -1e-10 * l * l {
            return Err(OrbitaError::NegativeSquare { index, value });
        }
    }
    Ok(BodyFrameMomenta { sq, p, eig: e.p, l })
}

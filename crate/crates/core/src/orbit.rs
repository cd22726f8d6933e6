//! Canonical chart (L, p, φ, γ) on the orbits [p1, p2, p3], the eigenvalue
//! trigonometry of the quadrupole tensor, and the S/P band catalog.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{OrbitaError, Result};
use crate::poisson::{ReducedState, WeightVector};

/// Kernel polynomials attached to an orbit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kernels {
    pub wv: WeightVector,
}

pub fn kernels(wv: &WeightVector) -> Kernels {
    Kernels { wv: *wv }
}

impl Kernels {
    /// G(x) = ∏(x − p_i).
    pub fn g(&self, x: f64) -> f64 {
        self.wv.g(x)
    }

    pub fn g_prime(&self, x: f64) -> f64 {
        self.wv.g_prime(x)
    }

    /// H(b, c) = ∏_{i<j} ((b − p_i)(b − p_j) + c).
    pub fn h_poly(&self, b: f64, c: f64) -> f64 {
        let p = self.wv.p();
        [(0, 1), (0, 2), (1, 2)].iter().map(|&(i, j)| (b - p[i]) * (b - p[j]) + c).product()
    }

    /// ĥ_ij = L² + 4(p_i − p)(p_j − p)cos²γ, 0-based indices.
    pub fn h_hat(&self, i: usize, j: usize, l: f64, p: f64, gamma: f64) -> f64 {
        let w = self.wv.p();
        l * l + 4.0 * (w[i] - p) * (w[j] - p) * gamma.cos().powi(2)
    }

    /// F = ĥ12 ĥ13 ĥ23.
    pub fn f_kernel(&self, l: f64, p: f64, gamma: f64) -> f64 {
        self.h_hat(0, 1, l, p, gamma) * self.h_hat(0, 2, l, p, gamma) * self.h_hat(1, 2, l, p, gamma)
    }

    /// V(L, Q, p) = −G(p) − ¼(p − Q)L², whose roots in p are the eigenvalues.
    pub fn v(&self, l: f64, q: f64, p: f64) -> f64 {
        -self.g(p) - 0.25 * (p - q) * l * l
    }

    /// Q(L, p, γ) = p + 4L⁻²G(p)cos²γ.
    pub fn q_of(&self, l: f64, p: f64, gamma: f64) -> f64 {
        p + 4.0 * self.g(p) * gamma.cos().powi(2) / (l * l)
    }

    /// V_L = (q1² − q2²)q3 + 2q1q2Q₋, odd in γ along the chart.
    pub fn v_l(&self, s: &ReducedState) -> f64 {
        let [q1, q2, q3] = s.small_q;
        let qm = 0.5 * (s.big_q[0] - s.big_q[1]);
        (q1 * q1 - q2 * q2) * q3 + 2.0 * q1 * q2 * qm
    }

    /// γ with sign `eps` solving Q(L, p, γ) = Q: cos γ = ½L √((Q − p)/G(p)).
    pub fn gamma_of(&self, l: f64, q: f64, p: f64, eps: f64) -> f64 {
        let c = 0.5 * l * ((q - p) / self.g(p)).max(0.0).sqrt();
        eps * c.min(1.0).acos()
    }
}

/// Canonical chart coordinates on M⁺, with region tag and branch σ_Q.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint {
    pub l: f64,
    pub p: f64,
    pub phi: f64,
    pub gamma: f64,
    pub region: u8,
    pub sigma_q: i8,
}

impl ChartPoint {
    /// Build a point, filling in the region tag and σ_Q = sign(Q − p2).
    pub fn new(wv: &WeightVector, l: f64, p: f64, phi: f64, gamma: f64) -> Self {
        let k = kernels(wv);
        let q = if l > 0.0 { k.q_of(l, p, gamma) } else { p };
        Self {
            l,
            p,
            phi,
            gamma,
            region: region_of(wv, l, p, gamma).unwrap_or(0),
            sigma_q: if q < wv.p()[1] { -1 } else { 1 },
        }
    }
}

fn boundary_tol(wv: &WeightVector, l: f64) -> f64 {
    1e-12 * (l * l + 4.0 * wv.l_max().powi(2))
}

/// Region index i whose complementary ĥ is the negative one: 2 when ĥ13 < 0,
/// 3 when ĥ12 < 0, 1 when ĥ23 < 0.
pub fn region_of(wv: &WeightVector, l: f64, p: f64, gamma: f64) -> Option<u8> {
    let k = kernels(wv);
    let h12 = k.h_hat(0, 1, l, p, gamma);
    let h13 = k.h_hat(0, 2, l, p, gamma);
    let h23 = k.h_hat(1, 2, l, p, gamma);
    match (h12 < 0.0, h13 < 0.0, h23 < 0.0) {
        (false, true, false) => Some(2),
        (true, false, false) => Some(3),
        (false, false, true) => Some(1),
        _ => None,
    }
}

/// Check membership of M⁺ (region 2, cos γ > 0, L > 0), naming the first
/// violated inequality.
pub fn check_domain(wv: &WeightVector, l: f64, p: f64, gamma: f64) -> Result<()> {
    let tol = boundary_tol(wv, l);
    let k = kernels(wv);
    if !(l > 0.0) {
        return Err(OrbitaError::OutOfDomain("L > 0".into()));
    }
    if !(gamma.cos() > 1e-12) {
        return Err(OrbitaError::OutOfDomain("cos(gamma) > 0".into()));
    }
    if !(k.h_hat(0, 2, l, p, gamma) < -tol) {
        return Err(OrbitaError::OutOfDomain("h13 < 0".into()));
    }
    if !(k.h_hat(0, 1, l, p, gamma) > tol) {
        return Err(OrbitaError::OutOfDomain("h12 > 0".into()));
    }
    if !(k.h_hat(1, 2, l, p, gamma) > tol) {
        return Err(OrbitaError::OutOfDomain("h23 > 0".into()));
    }
    Ok(())
}

fn forward_raw(wv: &WeightVector, l: f64, p: f64, phi: f64, gamma: f64) -> ReducedState {
    let k = kernels(wv);
    let (c, s1) = (gamma.cos(), wv.s(1));
    let q = k.q_of(l, p, gamma);
    let q_plus = 0.5 * (s1 - q);
    let amp = (-k.f_kernel(l, p, gamma)).max(0.0).sqrt() / (2.0 * l * l * c);
    let (sp, cp) = phi.sin_cos();
    let (q1, q2) = (amp * cp, -amp * sp);
    let re = 1.5 * (p - wv.mean()) + 2.0 * k.g(p) * c * c / (l * l);
    let im = -0.5 * l * gamma.tan();
    let (s2, c2) = (2.0 * phi).sin_cos();
    let q_minus = re * c2 - im * s2;
    let q3 = re * s2 + im * c2;
    ReducedState { l3: l, big_q: [q_plus + q_minus, q_plus - q_minus, q], small_q: [q1, q2, q3] }
}

/// Map a chart point of M⁺ to the seven reduced generators.
pub fn chart_forward(c: &ChartPoint, wv: &WeightVector) -> Result<ReducedState> {
    check_domain(wv, c.l, c.p, c.gamma)?;
    Ok(forward_raw(wv, c.l, c.p, c.phi, c.gamma))
}

/// As [`chart_forward`] but accepting the closure of M⁺ (boundary states such
/// as S-ellipsoids), clamping −F at zero.
pub fn chart_forward_closure(c: &ChartPoint, wv: &WeightVector) -> Result<ReducedState> {
    let tol = 1e3 * boundary_tol(wv, c.l);
    let k = kernels(wv);
    if !(c.l > 0.0) || !(c.gamma.cos() > 0.0) {
        return Err(OrbitaError::OutOfDomain("L > 0 and cos(gamma) > 0".into()));
    }
    if k.h_hat(0, 2, c.l, c.p, c.gamma) > tol
        || k.h_hat(0, 1, c.l, c.p, c.gamma) < -tol
        || k.h_hat(1, 2, c.l, c.p, c.gamma) < -tol
    {
        return Err(OrbitaError::OutOfDomain("closure of region 2".into()));
    }
    Ok(forward_raw(wv, c.l, c.p, c.phi, c.gamma))
}

/// Largest relative Casimir mismatch C_k − S_k.
pub fn casimir_residual(s: &ReducedState, wv: &WeightVector) -> f64 {
    let c = s.casimirs();
    let p = wv.p();
    (0..3)
        .map(|k| {
            let kk = (k + 1) as i32;
            let scale: f64 = p.iter().map(|v| v.abs().powi(kk)).sum::<f64>().max(1.0);
            (c[k] - wv.s(kk)).abs() / scale
        })
        .fold(0.0, f64::max)
}

/// Recover (L, p, φ, γ) from a reduced state on the orbit.
pub fn chart_inverse(s: &ReducedState, wv: &WeightVector) -> Result<ChartPoint> {
    if !(s.l3 > 0.0) {
        return Err(OrbitaError::OutOfDomain("L3 > 0".into()));
    }
    let residual = casimir_residual(s, wv);
    if !(residual < 1e-8) {
        return Err(OrbitaError::OffOrbit { residual });
    }
    let k = kernels(wv);
    let l = s.l3;
    let q = s.big_q[2];
    let r2 = s.r2();
    if r2.sqrt() < 1e-12 * wv.scale() {
        return Err(OrbitaError::ZeroR);
    }
    let p = q + k.g(q) / r2;
    let h = k.h_poly(q, r2);
    let root = (-h).max(0.0).sqrt();
    if root == 0.0 {
        return Err(OrbitaError::OutOfDomain("H < 0".into()));
    }
    let gamma = (-k.v_l(s) / root).atan2(l * r2 / (2.0 * root));
    let phi = -s.small_q[1].atan2(s.small_q[0]);
    Ok(ChartPoint::new(wv, l, p, phi, gamma))
}

/// Roots P1 ≥ P2 ≥ P3 of V(L, Q, ·) with shape parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenTriple {
    pub p: [f64; 3],
    /// β = S_L/S1.
    pub beta: f64,
    /// Γ ∈ [0, π/3].
    pub gamma: f64,
    pub s_l: f64,
}

/// h(x, y) = x + y if x ≥ y, else 2√(xy).
pub fn h(x: f64, y: f64) -> f64 {
    if x >= y {
        x + y
    } else {
        2.0 * (x * y).sqrt()
    }
}

/// p_σ(L) = (S1 − σS_L)/3, the γ = 0 stationary point of Q.
pub fn p_sigma(wv: &WeightVector, l: f64, sigma: i8) -> f64 {
    (wv.s(1) - f64::from(sigma) * wv.s_l(l)) / 3.0
}

/// Q̄_σ(L) = Q(L, p_σ(L), 0).
pub fn q_bar(wv: &WeightVector, l: f64, sigma: i8) -> f64 {
    let x = p_sigma(wv, l, sigma);
    x + 4.0 * wv.g(x) / (l * l)
}

/// Admissible (Q_min, Q_max) at angular momentum L.
pub fn q_range(wv: &WeightVector, l: f64) -> Result<(f64, f64)> {
    let (lam, mu) = (wv.lam(), wv.mu());
    let lmax = lam + mu;
    if !(l >= 0.0 && l <= lmax * (1.0 + 1e-12)) {
        return Err(OrbitaError::LOutOfRange { l, lmax });
    }
    let p = wv.p();
    let qmin = if l <= lam {
        p[2]
    } else if l < h(lam, mu) {
        q_bar(wv, l, -1)
    } else {
        p[1]
    };
    let qmax = if l <= mu {
        p[0]
    } else if l < h(mu, lam) {
        q_bar(wv, l, 1)
    } else {
        p[1]
    };
    Ok((qmin, qmax))
}

/// Eigenvalues of the quadrupole tensor at (L, Q) by the trigonometric formula.
pub fn eigenvalues(wv: &WeightVector, l: f64, q: f64) -> Result<EigenTriple> {
    let (qmin, qmax) = q_range(wv, l).map_err(|_| OrbitaError::OutsideProjection { l, q })?;
    let tol = 1e-9 * wv.scale();
    if q < qmin - tol || q > qmax + tol {
        return Err(OrbitaError::OutsideProjection { l, q });
    }
    Ok(eigenvalues_unchecked(wv, l, q))
}

/// Trigonometric roots without the projection check; the arccos argument is
/// clamped to [−1, 1].
pub fn eigenvalues_unchecked(wv: &WeightVector, l: f64, q: f64) -> EigenTriple {
    let s1 = wv.s(1);
    let sl = wv.s_l(l);
    let gamma = if sl == 0.0 {
        0.0
    } else {
        let arg = -(4.0 * wv.s_a() + 9.0 * l * l * (s1 - 3.0 * q)) / (8.0 * sl.powi(3));
        arg.clamp(-1.0, 1.0).acos() / 3.0
    };
    let p = [0.0, 1.0, 2.0].map(|a| s1 / 3.0 + 2.0 / 3.0 * sl * (gamma - 2.0 * PI * a / 3.0).cos());
    EigenTriple { p, beta: sl / s1, gamma, s_l: sl }
}

/// (β cos Γ, β sin Γ).
pub fn shape_projection(e: &EigenTriple) -> (f64, f64) {
    (e.beta * e.gamma.cos(), e.beta * e.gamma.sin())
}

/// Energy factor Ē = det 𝖰 = S111 + ¼QL² at a band state.
pub fn energy_factor(wv: &WeightVector, l: f64, q: f64) -> f64 {
    wv.s111() + 0.25 * q * l * l
}

/// Edges p^±_i(l) = ½(p_j + p_k) ± ½√((p_j − p_k)² − l²) of the S_i boundary
/// (0-based i); `None` when l exceeds |p_j − p_k|.
pub fn s_edges(wv: &WeightVector, i: usize, l: f64) -> Option<(f64, f64)> {
    let p = wv.p();
    let (j, k) = match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let gap = (p[j] - p[k]).abs();
    (l <= gap).then(|| {
        let mid = 0.5 * (p[j] + p[k]);
        let r = 0.5 * (gap * gap - l * l).sqrt();
        (mid - r, mid + r)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BandKind {
    S1,
    S2,
    S3,
    PPlus,
    PMinus,
}

impl BandKind {
    pub fn name(self) -> &'static str {
        match self {
            BandKind::S1 => "S1",
            BandKind::S2 => "S2",
            BandKind::S3 => "S3",
            BandKind::PPlus => "P+",
            BandKind::PMinus => "P-",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stability {
    Minimum,
    Maximum,
    /// Extremal in Q but a hyperbolic point of the (p, γ) flow.
    Saddle,
    /// Negative frequency constant: not a physical equilibrium.
    VibrationallyUnstable,
}

impl Stability {
    pub fn name(self) -> &'static str {
        match self {
            Stability::Minimum => "min",
            Stability::Maximum => "max",
            Stability::Saddle => "saddle",
            Stability::VibrationallyUnstable => "unstable",
        }
    }
}

/// Q-extremum carried by a band segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Extremum {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandSegment {
    pub l_lo: f64,
    pub l_hi: f64,
    pub stability: Stability,
    pub extremum: Option<Extremum>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub kind: BandKind,
    pub segments: Vec<BandSegment>,
}

/// Point on a band curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandPoint {
    pub kind: BandKind,
    pub l: f64,
    pub p: f64,
    pub q: f64,
    pub eig: EigenTriple,
    pub e_factor: f64,
    pub stability: Stability,
}

impl Band {
    pub fn l_range(&self) -> (f64, f64) {
        let lo = self.segments.iter().map(|s| s.l_lo).fold(f64::INFINITY, f64::min);
        let hi = self.segments.iter().map(|s| s.l_hi).fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }

    pub fn segment_at(&self, l: f64) -> Option<&BandSegment> {
        self.segments.iter().find(|s| l >= s.l_lo - 1e-12 && l <= s.l_hi + 1e-12)
    }

    /// (chart p, Q) of the band state at L.
    pub fn curve(&self, wv: &WeightVector, l: f64) -> (f64, f64) {
        let p = wv.p();
        let mid = |j: usize, k: usize| 0.5 * (p[j] + p[k]);
        match self.kind {
            BandKind::S1 => (mid(1, 2), p[0]),
            BandKind::S2 => (mid(0, 2), p[1]),
            BandKind::S3 => (mid(0, 1), p[2]),
            BandKind::PPlus => (p_sigma(wv, l, 1), q_bar(wv, l, 1)),
            BandKind::PMinus => (p_sigma(wv, l, -1), q_bar(wv, l, -1)),
        }
    }

    pub fn point(&self, wv: &WeightVector, l: f64) -> Option<BandPoint> {
        let seg = self.segment_at(l)?;
        let (p, q) = self.curve(wv, l);
        Some(BandPoint {
            kind: self.kind,
            l,
            p,
            q,
            eig: eigenvalues_unchecked(wv, l, q),
            e_factor: energy_factor(wv, l, q),
            stability: seg.stability,
        })
    }
}

/// Intersection of two band curves in the (L, Q) plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Intersection {
    pub label: char,
    pub bands: (BandKind, BandKind),
    pub l: f64,
    pub q: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandCatalog {
    pub orbit: WeightVector,
    pub r: f64,
    pub s: f64,
    pub bands: Vec<Band>,
    pub intersections: Vec<Intersection>,
}

impl BandCatalog {
    pub fn band(&self, kind: BandKind) -> &Band {
        self.bands.iter().find(|b| b.kind == kind).expect("catalog holds all five bands")
    }

    /// Sample every band on `steps` uniformly spaced L values of its range.
    pub fn sample(&self, steps: usize) -> Vec<BandPoint> {
        let steps = steps.max(2);
        let mut out = Vec::new();
        for band in &self.bands {
            for seg in &band.segments {
                for k in 0..steps {
                    let l = seg.l_lo + (seg.l_hi - seg.l_lo) * k as f64 / (steps - 1) as f64;
                    if l <= 0.0 {
                        continue;
                    }
                    if let Some(pt) = band.point(&self.orbit, l) {
                        out.push(BandPoint { stability: seg.stability, ..pt });
                    }
                }
            }
        }
        out
    }
}

/// The five S/P bands of an orbit with their L-ranges, stability and
/// pairwise intersections. `(r, s)` are the Hamiltonian family parameters,
/// restricted to r ≤ 2, s ≥ 0.
pub fn band_catalog(wv: &WeightVector, r: f64, s: f64) -> Result<BandCatalog> {
    if !(r <= 2.0) || !(s >= 0.0) {
        return Err(OrbitaError::InvalidArgument(format!("need r <= 2 and s >= 0 (r={r}, s={s})")));
    }
    let (lam, mu) = (wv.lam(), wv.mu());
    let top = lam + mu;
    let mid = 2.0 * (lam * mu).sqrt();
    let p = wv.p();
    let seg = |l_lo, l_hi, stability, extremum| BandSegment { l_lo, l_hi, stability, extremum };
    use Extremum::*;
    use Stability::*;
    let wide = mu < lam;
    let bands = vec![
        Band { kind: BandKind::S3, segments: vec![seg(0.0, lam, Minimum, Some(Min))] },
        Band {
            kind: BandKind::PMinus,
            segments: vec![seg(lam, if wide { top } else { mid }, Minimum, Some(Min))],
        },
        Band { kind: BandKind::S1, segments: vec![seg(0.0, mu, Maximum, Some(Max))] },
        Band {
            kind: BandKind::PPlus,
            segments: vec![seg(mu, if wide { mid } else { top }, Maximum, Some(Max))],
        },
        Band {
            kind: BandKind::S2,
            segments: vec![
                seg(0.0, mid, VibrationallyUnstable, None),
                seg(mid, top, Saddle, Some(if wide { Max } else { Min })),
            ],
        },
    ];
    let (c_l, d_l) = if wide { (top, mid) } else { (mid, top) };
    let intersections = vec![
        Intersection { label: 'A', bands: (BandKind::PMinus, BandKind::S3), l: lam, q: p[2] },
        Intersection { label: 'B', bands: (BandKind::PPlus, BandKind::S1), l: mu, q: p[0] },
        Intersection { label: 'C', bands: (BandKind::PMinus, BandKind::S2), l: c_l, q: p[1] },
        Intersection { label: 'D', bands: (BandKind::PPlus, BandKind::S2), l: d_l, q: p[1] },
    ];
    Ok(BandCatalog { orbit: *wv, r, s, bands, intersections })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn orbit() -> WeightVector {
        WeightVector::new(60.0, 20.0, 0.0).unwrap()
    }

    #[test]
    fn h_switches_at_equal_arguments() {
        assert_eq!(h(3.0, 2.0), 5.0);
        assert_eq!(h(2.0, 8.0), 8.0);
    }

    #[test]
    fn q_range_edges() {
        let wv = orbit();
        assert_eq!(q_range(&wv, 10.0).unwrap(), (0.0, 60.0));
        let (lo, hi) = q_range(&wv, 59.0).unwrap();
        assert!(lo > 0.0 && lo < 20.0 && hi == 20.0);
        assert!(q_range(&wv, 61.0).is_err());
    }

    #[test]
    fn p_curves_meet_s_curves() {
        let wv = orbit();
        assert!((q_bar(&wv, wv.lam(), -1) - wv.p()[2]).abs() < 1e-9);
        assert!((q_bar(&wv, wv.mu(), 1) - wv.p()[0]).abs() < 1e-9);
    }

    #[test]
    fn catalog_labels_and_ranges() {
        let wv = orbit();
        let cat = band_catalog(&wv, 1.0, 0.0).unwrap();
        let labels: String = cat.intersections.iter().map(|x| x.label).collect();
        assert_eq!(labels, "ABCD");
        assert_eq!(cat.band(BandKind::PMinus).l_range(), (40.0, 60.0));
        assert!(band_catalog(&wv, 3.0, 0.0).is_err());
    }

    #[test]
    fn chart_round_trip() {
        let wv = orbit();
        let c = ChartPoint::new(&wv, 30.0, 25.0, 0.4, 0.3);
        let s = chart_forward(&c, &wv).unwrap();
        assert!(casimir_residual(&s, &wv) < 1e-12);
        let back = chart_inverse(&s, &wv).unwrap();
        assert!((back.p - c.p).abs() < 1e-9 && (back.phi - c.phi).abs() < 1e-9 && (back.gamma - c.gamma).abs() < 1e-9);
    }

    #[test]
    fn domain_violations_are_reported() {
        let wv = orbit();
        assert!(check_domain(&wv, 0.0, 25.0, 0.3).is_err());
        assert!(check_domain(&wv, 30.0, 25.0, 1.6).is_err());
        assert!(chart_forward(&ChartPoint::new(&wv, 30.0, 70.0, 0.0, 0.0), &wv).is_err());
    }

    proptest! {
        #[test]
        fn eigenvalues_are_ordered_with_fixed_trace(lt in 0.01..0.99f64, qt in 0.0..1.0f64) {
            let wv = orbit();
            let l = lt * wv.l_max();
            let (lo, hi) = q_range(&wv, l).unwrap();
            let e = eigenvalues(&wv, l, lo + qt * (hi - lo)).unwrap();
            prop_assert!(e.p[0] >= e.p[1] && e.p[1] >= e.p[2]);
            prop_assert!((e.p.iter().sum::<f64>() - wv.s(1)).abs() < 1e-10);
            prop_assert!(e.gamma >= 0.0 && e.gamma <= PI / 3.0 + 1e-12);
        }

        #[test]
        fn roots_solve_the_cubic(lt in 0.01..0.99f64, qt in 0.0..1.0f64) {
            let wv = orbit();
            let k = kernels(&wv);
            let l = lt * wv.l_max();
            let (lo, hi) = q_range(&wv, l).unwrap();
            let q = lo + qt * (hi - lo);
            for p in eigenvalues(&wv, l, q).unwrap().p {
                prop_assert!(k.v(l, q, p).abs() < 1e-8 * wv.scale().powi(3));
            }
        }
    }
}

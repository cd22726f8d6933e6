//! Orbit volumes, u(3) → so(3) branching multiplicities, and the
//! Bohr–Sommerfeld spectrum of the wobbling momentum Q.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::elliptic::QuarticRootData;
use crate::error::{OrbitaError, Result};
use crate::orbit::{eigenvalues_unchecked, h, q_bar, q_range, BandKind};
use crate::poisson::WeightVector;

/// Default absolute tolerance per quadrature panel.
pub const DEFAULT_QUAD_TOL: f64 = 1e-10;

/// Panel tolerance, overridable through `ORBITA_QUAD_TOL`.
pub fn quad_tol() -> f64 {
    static TOL: OnceLock<f64> = OnceLock::new();
    *TOL.get_or_init(|| {
        std::env::var("ORBITA_QUAD_TOL")
            .ok()
            .and_then(|v| v.parse::<f64>().ok())
            .filter(|v| *v > 0.0 && v.is_finite())
            .unwrap_or(DEFAULT_QUAD_TOL)
    })
}

/// Half period Δ(L, t); zero where the root data degenerate.
pub fn delta_integrand(wv: &WeightVector, l: f64, t: f64) -> f64 {
    let e = eigenvalues_unchecked(wv, l, t);
    let sigma = if t < wv.p()[1] { -1 } else { 1 };
    match QuarticRootData::new(e.p, t, sigma) {
        Ok(rd) => 0.5 * l / rd.c_coef.sqrt() * rd.k().value,
        Err(_) => 0.0,
    }
}

fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> Result<f64> {
    if b <= a {
        return Ok(0.0);
    }
    let tol = quad_tol();
    let out = quadrature::double_exponential::integrate(f, a, b, tol);
    if !out.integral.is_finite() || out.error_estimate > 1e3 * tol.max(1e-12 * out.integral.abs()) {
        return Err(OrbitaError::QuadratureFailure { error_estimate: out.error_estimate });
    }
    Ok(out.integral)
}

/// ∫_a^b f with a panel break at `split` when it lies inside.
fn integrate_split<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64, split: f64) -> Result<f64> {
    if a < split && split < b {
        Ok(integrate(f, a, split)? + integrate(f, split, b)?)
    } else {
        integrate(f, a, b)
    }
}

/// (2/π)∫_{a}^{b} Δ(L, t) dt.
fn volume_between(wv: &WeightVector, l: f64, a: f64, b: f64) -> Result<f64> {
    let f = |t: f64| delta_integrand(wv, l, t);
    Ok(2.0 / PI * integrate_split(f, a, b, wv.p()[1])?)
}

/// 𝒱_L(Q) = (2/π)∫_{Q_min}^{Q} Δ(L, t) dt.
pub fn volume_q(wv: &WeightVector, l: f64, q: f64) -> Result<f64> {
    let (qmin, qmax) = q_range(wv, l)?;
    let tol = 1e-9 * wv.scale();
    if q < qmin - tol || q > qmax + tol {
        return Err(OrbitaError::OutsideProjection { l, q });
    }
    if l == 0.0 {
        return Ok(0.0);
    }
    volume_between(wv, l, qmin, q.clamp(qmin, qmax))
}

/// 𝒱_L = L on [0, min], min on [min, max], λ + μ − L beyond.
pub fn volume_closed(lam: u32, mu: u32, l: u32) -> i64 {
    let (a, b) = (lam.min(mu) as i64, lam.max(mu) as i64);
    let l = l as i64;
    if l <= a {
        l
    } else if l <= b {
        a
    } else {
        a + b - l
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TotalVolume {
    /// ½λμ(λ + μ).
    pub closed: f64,
    /// ∫ L·𝒱_L dL by nested quadrature.
    pub quadrature: f64,
}

impl TotalVolume {
    pub fn relative_error(&self) -> f64 {
        (self.quadrature - self.closed).abs() / self.closed.abs()
    }
}

pub fn total_volume(wv: &WeightVector) -> Result<TotalVolume> {
    let (lam, mu) = (wv.lam(), wv.mu());
    let closed = 0.5 * lam * mu * (lam + mu);
    let v_top = |l: f64| -> f64 {
        match q_range(wv, l) {
            Ok((qmin, qmax)) if l > 0.0 => volume_between(wv, l, qmin, qmax).unwrap_or(f64::NAN),
            _ => 0.0,
        }
    };
    let f = |l: f64| l * v_top(l);
    let knots = [0.0, lam.min(mu), lam.max(mu), lam + mu];
    let mut quadrature = 0.0;
    for w in knots.windows(2) {
        if w[1] > w[0] {
            let out = quadrature::double_exponential::integrate(f, w[0], w[1], 1e-8 * closed.max(1.0));
            if !out.integral.is_finite() {
                return Err(OrbitaError::QuadratureFailure { error_estimate: out.error_estimate });
            }
            quadrature += out.integral;
        }
    }
    Ok(TotalVolume { closed, quadrature })
}

/// Multiplicity of the so(3) irrep L in the u(3) irrep with gaps (λ, μ):
/// K = min, min−2, …; K > 0 covers L ∈ [K, K + max]; K = 0 covers
/// L = max, max−2, ….
pub fn elliott_multiplicity(lam: u32, mu: u32, l: u32) -> u32 {
    let (a, b) = (lam.min(mu) as i64, lam.max(mu) as i64);
    let l = l as i64;
    let mut d = 0;
    let mut k = a;
    while k >= 0 {
        if k > 0 {
            if k <= l && l <= k + b {
                d += 1;
            }
        } else if l <= b && (b - l) % 2 == 0 {
            d += 1;
        }
        k -= 2;
    }
    d
}

/// Branching data at (λ, μ, L) with the parity bits of the δ correction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchingRecord {
    pub lam: u32,
    pub mu: u32,
    pub l: u32,
    pub d: u32,
    /// Inner correction δ ∈ {0, 1}.
    pub delta_inner: u8,
    /// δ_{p,L} = δ + M1 t1 + M2 t2 ∈ {0, …, 3}.
    pub delta: u8,
    pub m1: u8,
    pub m2: u8,
    pub ml: u8,
    pub big_m1: u8,
    pub big_m2: u8,
    pub t1: u8,
    pub t2: u8,
    pub volume: i64,
}

/// u_s(δ): 0, (1+s)/4, (3+s)/4, (3+s)/4 for δ = 0, 1, 2, 3.
pub fn u_s(delta: u8, s: f64) -> f64 {
    match delta {
        0 => 0.0,
        1 => 0.25 * (1.0 + s),
        _ => 0.25 * (3.0 + s),
    }
}

impl BranchingRecord {
    /// (𝒱 − δ)/2 + 1, the volume prediction for d.
    pub fn predicted_d(&self) -> i64 {
        (self.volume - i64::from(self.delta)) / 2 + 1
    }

    /// Parity correction Δ_s, defined for s = ±1.
    pub fn delta_s(&self, s: i8) -> f64 {
        let (m1, m2, ml) = (f64::from(self.m1), f64::from(self.m2), f64::from(self.ml));
        let (bm1, bm2) = (f64::from(self.big_m1), f64::from(self.big_m2));
        if s > 0 {
            bm2 * (m1 * ml + m2 * (1.0 - ml - m1 * ml))
        } else {
            -m2 * bm1 * (m1 - bm2 * (1.0 - ml) + ml - 2.0 * m1 * ml)
        }
    }

    /// ū_s = u_s(δ_{p,L}) − ½Δ_s. Vanishes when λ or μ is zero. For odd
    /// gaps only s = ±1 is defined.
    pub fn u_bar(&self, s: f64) -> Result<f64> {
        if !(-1.0..=1.0).contains(&s) {
            return Err(OrbitaError::InvalidArgument(format!("s must lie in [-1, 1], got {s}")));
        }
        if self.lam == 0 || self.mu == 0 {
            return Ok(0.0);
        }
        let base = u_s(self.delta, s);
        if self.m1 == 0 && self.m2 == 0 {
            return Ok(base);
        }
        if s == 1.0 || s == -1.0 {
            return Ok(base - 0.5 * self.delta_s(s as i8));
        }
        Err(OrbitaError::InvalidArgument(format!(
            "odd gaps (lambda={}, mu={}) need s = +-1, got {s}",
            self.lam, self.mu
        )))
    }
}

pub fn branching_d(lam: u32, mu: u32, l: u32) -> BranchingRecord {
    let (m1, m2, ml) = ((lam % 2) as u8, (mu % 2) as u8, (l % 2) as u8);
    let t1 = u8::from(l <= lam);
    let t2 = u8::from(l <= mu);
    let big_m1 = m1 + ml - 2 * m1 * ml;
    let big_m2 = m2 + ml - 2 * m2 * ml;
    let big_ml = ml;
    let inner = i32::from(m1) + i32::from(m2) + i32::from(ml)
        - 2 * ((i32::from(m1) + i32::from(m2)) * i32::from(big_ml) + i32::from(m1) * i32::from(m2))
        + 4 * i32::from(m1) * i32::from(m2) * i32::from(ml);
    let delta = inner + i32::from(big_m1 * t1) + i32::from(big_m2 * t2);
    BranchingRecord {
        lam,
        mu,
        l,
        d: elliott_multiplicity(lam, mu, l),
        delta_inner: inner as u8,
        delta: delta as u8,
        m1,
        m2,
        ml,
        big_m1,
        big_m2,
        t1,
        t2,
        volume: volume_closed(lam, mu, l),
    }
}

/// Integer gaps of an orbit, or `NonIntegerWeights`.
pub fn integer_gaps(wv: &WeightVector) -> Result<(u32, u32)> {
    let (lam, mu) = (wv.lam(), wv.mu());
    let ok = |x: f64| (x - x.round()).abs() < 1e-9 && x.round() >= 0.0 && x < u32::MAX as f64;
    if !ok(lam) || !ok(mu) {
        return Err(OrbitaError::NonIntegerWeights(lam, mu));
    }
    Ok((lam.round() as u32, mu.round() as u32))
}

/// One quantized level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub l: u32,
    pub k: u32,
    /// k_u = k + u.
    pub k_u: f64,
    pub q: f64,
    /// Band whose curve passes through the level, if any.
    pub band: Option<BandKind>,
}

/// Band carrying Q_min (`upper = false`) or Q_max at L.
pub fn edge_band(wv: &WeightVector, l: f64, upper: bool) -> BandKind {
    let (lam, mu) = (wv.lam(), wv.mu());
    if upper {
        if l <= mu {
            BandKind::S1
        } else if l < h(mu, lam) {
            BandKind::PPlus
        } else {
            BandKind::S2
        }
    } else if l <= lam {
        BandKind::S3
    } else if l < h(lam, mu) {
        BandKind::PMinus
    } else {
        BandKind::S2
    }
}

const LEVEL_TOL: f64 = 1e-10;

/// Solve 𝒱_L(Q) = target on [lo.0, hi.0] given 𝒱 at both ends.
fn solve_level(wv: &WeightVector, l: f64, target: f64, lo: (f64, f64), hi: (f64, f64)) -> Result<(f64, f64)> {
    let (mut lo, mut hi) = (lo, hi);
    // Endpoint volumes carry the accumulated quadrature error.
    let snap = LEVEL_TOL.max(100.0 * quad_tol());
    if (target - lo.1).abs() < snap {
        return Ok(lo);
    }
    if (target - hi.1).abs() < snap {
        return Ok(hi);
    }
    if target < lo.1 || target > hi.1 {
        return Err(OrbitaError::RootBracketFailure(format!(
            "target {target} outside [{}, {}] at L = {l}",
            lo.1, hi.1
        )));
    }
    let mut q = lo.0 + (target - lo.1) / (hi.1 - lo.1) * (hi.0 - lo.0);
    for _ in 0..200 {
        let v = lo.1 + volume_between(wv, l, lo.0, q)?;
        if (v - target).abs() < LEVEL_TOL {
            return Ok((q, v));
        }
        if v < target {
            lo = (q, v);
        } else {
            hi = (q, v);
        }
        let slope = 2.0 / PI * delta_integrand(wv, l, q);
        let newton = q - (v - target) / slope;
        let width = hi.0 - lo.0;
        q = if slope.is_finite() && slope > 0.0 && newton > lo.0 + 1e-3 * width && newton < hi.0 - 1e-3 * width {
            newton
        } else {
            0.5 * (lo.0 + hi.0)
        };
        if width < 1e-15 * wv.scale() {
            return Ok((q, v));
        }
    }
    Err(OrbitaError::RootBracketFailure(format!("no convergence for target {target} at L = {l}")))
}

/// Levels Q_{L,k}, k = 1..d, solving 𝒱_L(Q) = 2(k + u − 1) with u = ū_s.
/// The L = 0 singlet is assigned Q_Π.
pub fn bs_spectrum(wv: &WeightVector, l: u32, s: f64) -> Result<Vec<SpectrumRow>> {
    let (lam, mu) = integer_gaps(wv)?;
    if l > lam + mu {
        return Err(OrbitaError::LOutOfRange { l: f64::from(l), lmax: f64::from(lam + mu) });
    }
    let rec = branching_d(lam, mu, l);
    if rec.d == 0 {
        return Err(OrbitaError::NoStates(l));
    }
    let u = rec.u_bar(s)?;
    if l == 0 {
        if rec.d != 1 {
            return Err(OrbitaError::InvalidArgument(format!("L = 0 carries {} states", rec.d)));
        }
        return Ok(vec![SpectrumRow { l, k: 1, k_u: 1.0 + u, q: pi_limit(wv)?, band: None }]);
    }
    let lf = f64::from(l);
    let (qmin, qmax) = q_range(wv, lf)?;
    let vmax = volume_between(wv, lf, qmin, qmax)?;
    let mut lo = (qmin, 0.0);
    let tol = 1e-9 * wv.scale();
    let mut rows = Vec::with_capacity(rec.d as usize);
    for k in 1..=rec.d {
        let target = 2.0 * (f64::from(k) + u - 1.0);
        let (q, v) = solve_level(wv, lf, target, lo, (qmax, vmax))?;
        lo = (q, v);
        let band = if (q - qmin).abs() <= tol {
            Some(edge_band(wv, lf, false))
        } else if (q - qmax).abs() <= tol {
            Some(edge_band(wv, lf, true))
        } else {
            None
        };
        rows.push(SpectrumRow { l, k, k_u: f64::from(k) + u, q, band });
    }
    Ok(rows)
}

/// Complete spectrum table over L = 0..λ+μ (rows with d = 0 are absent).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumTable {
    pub orbit: WeightVector,
    pub s: f64,
    pub rows: Vec<SpectrumRow>,
    /// Present for s = ±1, where the sequence is defined.
    pub pi: Option<PiSequence>,
}

pub fn spectrum_table(wv: &WeightVector, s: f64) -> Result<SpectrumTable> {
    let (lam, mu) = integer_gaps(wv)?;
    let mut rows = Vec::new();
    for l in 0..=lam + mu {
        match bs_spectrum(wv, l, s) {
            Ok(r) => rows.extend(r),
            Err(OrbitaError::NoStates(_)) => {}
            Err(OrbitaError::InvalidArgument(msg)) if l == 0 && msg.contains("L = 0") => {}
            Err(e) => return Err(e),
        }
    }
    let pi = if s == 1.0 || s == -1.0 { Some(pi_sequence(wv, s)?) } else { None };
    Ok(SpectrumTable { orbit: *wv, s, rows, pi })
}

/// Rational closed form in the weights, as displayed for λ ≤ μ.
pub fn pi_rational(p1: f64, p2: f64, p3: f64) -> f64 {
    (2.0 * (p1 + p2).powi(3) + 3.0 * (p1 - 5.0 * p2) * (5.0 * p1 - p2) * p3 + 24.0 * (p1 + p2) * p3 * p3
        - 16.0 * p3.powi(3))
        / (27.0 * (p1 - p2).powi(2))
}

/// [`pi_rational`] with the swap (p1, p2, p3) → (p3, p2, p1) applied when
/// λ > μ.
pub fn pi_closed_form(wv: &WeightVector) -> f64 {
    let [a, b, c] = wv.p();
    if wv.lam() <= wv.mu() {
        pi_rational(a, b, c)
    } else {
        pi_rational(c, b, a)
    }
}

/// Zero-L density ρ(t) = (1/π)C^{-1/2}K(B) with roots (p1, p2, p3, t); the
/// small-L limit of 𝒱_L(Q)/L has derivative ρ.
pub fn zero_l_density(wv: &WeightVector, t: f64) -> f64 {
    let sigma = if t < wv.p()[1] { -1 } else { 1 };
    match QuarticRootData::new(wv.p(), t, sigma) {
        Ok(rd) => rd.k().value / (PI * rd.c_coef.sqrt()),
        Err(_) => 0.0,
    }
}

/// Median of the zero-L density: the common small-L limit of the
/// Π-sequence levels.
pub fn pi_limit(wv: &WeightVector) -> Result<f64> {
    let [p1, p2, p3] = wv.p();
    let f = |t: f64| zero_l_density(wv, t);
    let total = integrate_split(f, p3, p1, p2)?;
    let half = 0.5 * total;
    let (mut lo, mut hi) = ((p3, 0.0), (p1, total));
    let mut q = p2;
    for _ in 0..200 {
        let v = lo.1 + integrate_split(f, lo.0, q, p2)?;
        if (v - half).abs() < 1e-13 * total.max(1.0) {
            return Ok(q);
        }
        if v < half {
            lo = (q, v);
        } else {
            hi = (q, v);
        }
        let slope = f(q);
        let newton = q - (v - half) / slope;
        let width = hi.0 - lo.0;
        q = if slope.is_finite() && slope > 0.0 && newton > lo.0 + 1e-3 * width && newton < hi.0 - 1e-3 * width {
            newton
        } else {
            0.5 * (lo.0 + hi.0)
        };
        if width < 1e-14 * wv.scale() {
            return Ok(q);
        }
    }
    Err(OrbitaError::RootBracketFailure("median of the zero-L density".into()))
}

/// Π-sequence data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiSequence {
    pub s: f64,
    /// Small-L limit of the member levels, also used for the L = 0 singlet.
    pub q_pi: f64,
    /// Q̄_{sign(λ−μ)}(min(λ, μ)); absent when λ = μ.
    pub q_bar_rule: Option<f64>,
    /// Rational closed form with the swap rule.
    pub closed_form: f64,
    /// Rational closed form evaluated on (p1, p2, p3) without the swap.
    pub closed_form_unswapped: f64,
    /// (L, Q) of each member.
    pub members: Vec<(u32, f64)>,
}

/// Members (4k, Q_{4k,k+1}) for s = 1 or (4k−1, Q_{4k−1,k}) for s = −1,
/// with L ≤ min(λ, μ).
pub fn pi_sequence(wv: &WeightVector, s: f64) -> Result<PiSequence> {
    let (lam, mu) = integer_gaps(wv)?;
    if s != 1.0 && s != -1.0 {
        return Err(OrbitaError::InvalidArgument(format!("the sequence is defined for s = +-1, got {s}")));
    }
    let lmin = lam.min(mu);
    let mut members = Vec::new();
    let mut k = 1u32;
    loop {
        let (l, idx) = if s > 0.0 { (4 * k, k + 1) } else { (4 * k - 1, k) };
        if l > lmin {
            break;
        }
        let rows = bs_spectrum(wv, l, s)?;
        let row = rows
            .get(idx as usize - 1)
            .ok_or_else(|| OrbitaError::RootBracketFailure(format!("level {idx} missing at L = {l}")))?;
        members.push((l, row.q));
        k += 1;
    }
    let q_bar_rule = (lam != mu).then(|| {
        let sigma = if lam > mu { 1 } else { -1 };
        q_bar(wv, f64::from(lmin), sigma)
    });
    let p = wv.p();
    Ok(PiSequence {
        s,
        q_pi: pi_limit(wv)?,
        q_bar_rule,
        closed_form: pi_closed_form(wv),
        closed_form_unswapped: pi_rational(p[0], p[1], p[2]),
        members,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn singlet_at_zero_angular_momentum() {
        assert_eq!(elliott_multiplicity(40, 20, 0), 1);
        assert_eq!(elliott_multiplicity(1, 0, 0), 0);
        assert_eq!(elliott_multiplicity(0, 0, 0), 1);
    }

    #[test]
    fn u_s_table() {
        assert_eq!(u_s(0, 0.3), 0.0);
        assert_eq!(u_s(1, 1.0), 0.5);
        assert_eq!(u_s(2, -1.0), 0.5);
        assert_eq!(u_s(3, 1.0), 1.0);
    }

    #[test]
    fn quadrature_matches_closed_volume() {
        for (lam, mu, l) in [(4u32, 3u32, 2u32), (7, 3, 5), (6, 6, 1)] {
            let wv = WeightVector::from_gaps(f64::from(lam), f64::from(mu), 0.0).unwrap();
            let (lo, hi) = q_range(&wv, f64::from(l)).unwrap();
            let v = volume_q(&wv, f64::from(l), hi).unwrap() - volume_q(&wv, f64::from(l), lo).unwrap();
            assert!((v - volume_closed(lam, mu, l) as f64).abs() < 1e-6, "{lam} {mu} {l}: {v}");
        }
    }

    #[test]
    fn non_integer_gaps_are_rejected() {
        let wv = WeightVector::new(3.5, 1.0, 0.0).unwrap();
        assert!(matches!(integer_gaps(&wv), Err(OrbitaError::NonIntegerWeights(..))));
        assert!(bs_spectrum(&wv, 1, 1.0).is_err());
    }

    #[test]
    fn odd_gaps_need_unit_branch() {
        assert!(branching_d(3, 2, 2).u_bar(0.5).is_err());
        assert!(branching_d(4, 2, 2).u_bar(0.5).is_ok());
    }

    #[test]
    fn zero_l_median_near_quoted_value() {
        let wv = WeightVector::new(60.0, 20.0, 0.0).unwrap();
        assert!((pi_limit(&wv).unwrap() - 23.85).abs() < 0.01);
    }

    proptest! {
        /// Σ (2L + 1) d_L equals the su(3) dimension (λ+1)(μ+1)(λ+μ+2)/2.
        #[test]
        fn multiplicities_fill_the_irrep(lam in 0u32..15, mu in 0u32..15) {
            let total: u64 = (0..=lam + mu).map(|l| u64::from(2 * l + 1) * u64::from(elliott_multiplicity(lam, mu, l))).sum();
            prop_assert_eq!(total, u64::from((lam + 1) * (mu + 1) * (lam + mu + 2) / 2));
        }

        #[test]
        fn multiplicity_is_symmetric(lam in 0u32..15, mu in 0u32..15, l in 0u32..30) {
            prop_assert_eq!(elliott_multiplicity(lam, mu, l), elliott_multiplicity(mu, lam, l));
        }

        #[test]
        fn levels_are_increasing(lam in 1u32..8, mu in 1u32..8) {
            let wv = WeightVector::from_gaps(f64::from(lam), f64::from(mu), 0.0).unwrap();
            for l in 1..=lam + mu {
                if let Ok(rows) = bs_spectrum(&wv, l, 1.0) {
                    prop_assert_eq!(rows.len() as u32, elliott_multiplicity(lam, mu, l));
                    prop_assert!(rows.windows(2).all(|w| w[0].q < w[1].q));
                }
            }
        }
    }
}

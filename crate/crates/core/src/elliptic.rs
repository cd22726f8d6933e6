//! Legendre elliptic integrals in parameter convention (m = k²), built on
//! Carlson's symmetric forms, the Jacobi amplitude by the AGM, and the action
//! integrals of the wobbling quartic.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{OrbitaError, Result};

const DUP_TOL: f64 = 1e-4;

/// Below this complementary parameter K(m) switches to its logarithmic asymptote.
pub const LARGE_PERIOD_THRESHOLD: f64 = 1e-12;

/// Carlson's R_F(x, y, z); arguments nonnegative, at most one zero.
pub fn carlson_rf(x: f64, y: f64, z: f64) -> f64 {
    let (mut x, mut y, mut z) = (x, y, z);
    for _ in 0..200 {
        let a = (x + y + z) / 3.0;
        let (dx, dy, dz) = (1.0 - x / a, 1.0 - y / a, 1.0 - z / a);
        if dx.abs().max(dy.abs()).max(dz.abs()) < DUP_TOL {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0)
                / a.sqrt();
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * sy + sx * sz + sy * sz;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
    }
    f64::NAN
}

/// Carlson's degenerate R_C(x, y) for y > 0.
pub fn carlson_rc(x: f64, y: f64) -> f64 {
    let t = (y - x) / y;
    if t.abs() < 1e-6 {
        return (1.0 + t / 6.0 + 3.0 * t * t / 40.0) / y.sqrt();
    }
    if x < y {
        (x / y).sqrt().acos() / (y - x).sqrt()
    } else {
        (x / y).sqrt().acosh() / (x - y).sqrt()
    }
}

/// Carlson's R_J(x, y, z, p) for p > 0.
pub fn carlson_rj(x: f64, y: f64, z: f64, p: f64) -> f64 {
    const C1: f64 = 3.0 / 14.0;
    const C2: f64 = 1.0 / 3.0;
    const C3: f64 = 3.0 / 22.0;
    const C4: f64 = 3.0 / 26.0;
    let (c5, c6, c7, c8) = (0.75 * C3, 1.5 * C4, 0.5 * C2, 2.0 * C3);
    let (mut x, mut y, mut z, mut p) = (x, y, z, p);
    let mut sum = 0.0;
    let mut fac = 1.0;
    for _ in 0..200 {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * (sy + sz) + sy * sz;
        let alpha = (p * (sx + sy + sz) + sx * sy * sz).powi(2);
        let beta = p * (p + lam).powi(2);
        sum += fac * carlson_rc(alpha, beta);
        fac *= 0.25;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        p = 0.25 * (p + lam);
        let ave = 0.2 * (x + y + z + 2.0 * p);
        let (dx, dy, dz, dp) = (
            (ave - x) / ave,
            (ave - y) / ave,
            (ave - z) / ave,
            (ave - p) / ave,
        );
        if dx.abs().max(dy.abs()).max(dz.abs()).max(dp.abs()) < DUP_TOL {
            let ea = dx * (dy + dz) + dy * dz;
            let eb = dx * dy * dz;
            let ec = dp * dp;
            let ed = ea - 3.0 * ec;
            let ee = eb + 2.0 * dp * (ea - ec);
            let series = 1.0
                + ed * (-C1 + c5 * ed - c6 * ee)
                + eb * (c7 + dp * (-c8 + dp * C4))
                + dp * ea * (C2 - dp * C3)
                - C2 * dp * ec;
            return 3.0 * sum + fac * series / (ave * ave.sqrt());
        }
    }
    f64::NAN
}

/// An elliptic-integral value tagged with its parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticValue {
    pub value: f64,
    pub m: f64,
    /// Set when K was taken from the logarithmic asymptote near m = 1.
    pub large_period: bool,
}

/// Argument bundle for [`legendre`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Legendre {
    F { phi: f64, m: f64 },
    K { m: f64 },
    Pi { n: f64, phi: f64, m: f64 },
}

pub fn legendre(kind: Legendre) -> Result<EllipticValue> {
    match kind {
        Legendre::F { phi, m } => Ok(EllipticValue { value: ellip_f(phi, m)?, m, large_period: false }),
        Legendre::K { m } => {
            if !(m < 1.0) {
                return Err(OrbitaError::ParameterOutOfRange(format!("K needs m < 1, got {m}")));
            }
            Ok(ellip_k_comp(1.0 - m))
        }
        Legendre::Pi { n, phi, m } => Ok(EllipticValue { value: ellip_pi(n, phi, m)?, m, large_period: false }),
    }
}

/// K(m) for m < 1.
pub fn ellip_k(m: f64) -> Result<f64> {
    legendre(Legendre::K { m }).map(|v| v.value)
}

/// K evaluated from the complementary parameter m1 = 1 − m, which keeps
/// full relative accuracy when m is close to one.
pub fn ellip_k_comp(m1: f64) -> EllipticValue {
    let m = 1.0 - m1;
    if m1 < LARGE_PERIOD_THRESHOLD {
        let l = (4.0 / m1.max(f64::MIN_POSITIVE).sqrt()).ln();
        EllipticValue { value: l + 0.25 * m1 * (l - 1.0), m, large_period: true }
    } else {
        EllipticValue { value: carlson_rf(0.0, m1, 1.0), m, large_period: false }
    }
}

/// Incomplete integral of the first kind F(φ|m), any real φ, m ≤ 1.
pub fn ellip_f(phi: f64, m: f64) -> Result<f64> {
    if m > 1.0 {
        return Err(OrbitaError::ParameterOutOfRange(format!("F needs m <= 1, got {m}")));
    }
    let j = (phi / PI).round();
    let r = phi - j * PI;
    let base = {
        let (s, c) = r.sin_cos();
        s * carlson_rf(c * c, 1.0 - m * s * s, 1.0)
    };
    if j == 0.0 {
        return Ok(base);
    }
    if m == 1.0 {
        return Err(OrbitaError::ParameterOutOfRange("F(phi|1) diverges for |phi| >= pi/2".into()));
    }
    Ok(2.0 * j * carlson_rf(0.0, 1.0 - m, 1.0) + base)
}

/// Incomplete integral of the third kind Π(n; φ|m) for |φ| ≤ π/2.
pub fn ellip_pi(n: f64, phi: f64, m: f64) -> Result<f64> {
    if phi.abs() > FRAC_PI_2 + 1e-15 || m > 1.0 {
        return Err(OrbitaError::ParameterOutOfRange(format!("Pi needs |phi| <= pi/2, m <= 1 (phi={phi}, m={m})")));
    }
    let (s, c) = phi.sin_cos();
    let s2 = s * s;
    if n * s2 >= 1.0 {
        return Err(OrbitaError::CharacteristicPole(n * s2));
    }
    let c2 = c * c;
    let y = 1.0 - m * s2;
    Ok(s * carlson_rf(c2, y, 1.0) + n / 3.0 * s * s2 * carlson_rj(c2, y, 1.0, 1.0 - n * s2))
}

/// Jacobi amplitude and sn for m ∈ [0, 1], by the arithmetic-geometric mean.
pub fn jacobi_sn_am(u: f64, m: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&m) {
        return Err(OrbitaError::ParameterOutOfRange(format!("am needs m in [0,1], got {m}")));
    }
    let am = if m == 0.0 {
        u
    } else if m == 1.0 {
        u.sinh().atan()
    } else {
        let mut a = vec![1.0];
        let mut c = vec![m.sqrt()];
        let mut b = (1.0 - m).sqrt();
        while c.last().unwrap().abs() > 1e-16 * a.last().unwrap() && a.len() < 64 {
            let an = *a.last().unwrap();
            a.push(0.5 * (an + b));
            c.push(0.5 * (an - b));
            b = (an * b).sqrt();
        }
        let nlev = a.len() - 1;
        let mut phi = (1u64 << nlev) as f64 * a[nlev] * u;
        for k in (1..=nlev).rev() {
            phi = 0.5 * (phi + (c[k] / a[k] * phi.sin()).asin());
        }
        phi
    };
    Ok((am.sin(), am))
}

/// Four roots of the wobbling quartic, `[P1, P2, P3, Q]`, together with the
/// branch σ = sign(Q − p2) and the derived Möbius data A, B, C, D.
///
/// The σ = +1 branch is the σ = −1 construction applied to the reindexed
/// roots `[P3, P2, P1, Q]`; the fields `a, b, c` hold the reindexed values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarticRootData {
    pub roots: [f64; 4],
    pub sigma: i8,
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    /// Elliptic parameter B.
    pub b_param: f64,
    /// 1 − B, evaluated without cancellation.
    pub b_comp: f64,
    /// Scale factor C (positive in the classical region).
    pub c_coef: f64,
    /// Characteristic D of the third-kind integral.
    pub d_coef: f64,
    degenerate: bool,
}

impl QuarticRootData {
    /// `eig` is `[P1, P2, P3]` with P1 ≥ P2 ≥ P3; `sigma` must be ±1.
    pub fn new(eig: [f64; 3], q: f64, sigma: i8) -> Result<Self> {
        let (a, b, c) = match sigma {
            -1 => (eig[0], eig[1], eig[2]),
            1 => (eig[2], eig[1], eig[0]),
            _ => return Err(OrbitaError::InvalidArgument(format!("sigma must be +-1, got {sigma}"))),
        };
        let d = q;
        let scale = eig.iter().chain(std::iter::once(&q)).fold(1.0_f64, |s, v| s.max(v.abs()));
        let c_coef = (a - d) * (b - c);
        if !(c_coef > 0.0) || !c_coef.is_finite() {
            return Err(OrbitaError::OutsideClassicalRegion);
        }
        let denom = (b - c) * (a - d);
        let b_param = ((a - b) * (d - c) / denom).max(0.0);
        let b_comp = ((a - c) * (b - d) / denom).clamp(0.0, 1.0);
        let degenerate = (a - b).abs() <= 1e-14 * scale;
        Ok(Self {
            roots: [eig[0], eig[1], eig[2], q],
            sigma,
            a,
            b,
            c,
            d,
            b_param,
            b_comp,
            c_coef,
            d_coef: (a - b) / (a - d),
            degenerate,
        })
    }

    fn scale(&self) -> f64 {
        self.roots.iter().fold(1.0_f64, |s, v| s.max(v.abs()))
    }

    /// Central root P2, where I and J vanish.
    pub fn center(&self) -> f64 {
        self.b
    }

    /// Far end of the oscillation interval, P1 for σ = −1 and P3 for σ = +1.
    pub fn far_endpoint(&self) -> f64 {
        self.a
    }

    /// Oscillation interval as (lower, upper).
    pub fn interval(&self) -> (f64, f64) {
        (self.a.min(self.b), self.a.max(self.b))
    }

    /// True when the interval has collapsed to a point (band states).
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// Möbius map A(x), sending P2 to 0 and the far endpoint to 1.
    pub fn a_map(&self, x: f64) -> f64 {
        if self.degenerate {
            return 0.0;
        }
        (self.a - self.d) * (x - self.b) / ((self.a - self.b) * (x - self.d))
    }

    /// Inverse of [`Self::a_map`].
    pub fn a_inverse(&self, t: f64) -> f64 {
        let (a, b, d) = (self.a, self.b, self.d);
        (b * (a - d) - d * (a - b) * t) / ((a - d) - (a - b) * t)
    }

    /// K(B) with the large-period flag.
    pub fn k(&self) -> EllipticValue {
        ellip_k_comp(self.b_comp)
    }

    /// Half period 2C^{-1/2}K(B) of the action variable I.
    pub fn period_integral(&self) -> f64 {
        2.0 / self.c_coef.sqrt() * self.k().value
    }

    fn amplitude(&self, x: f64) -> Result<f64> {
        let (lo, hi) = self.interval();
        let tol = 1e-12 * self.scale();
        if x < lo - tol || x > hi + tol {
            return Err(OrbitaError::OutsideClassicalRegion);
        }
        Ok(self.a_map(x.clamp(lo, hi)).clamp(0.0, 1.0).sqrt().asin())
    }

    /// I(x) = −2C^{-1/2} F(arcsin √A(x) | B).
    pub fn action_i(&self, x: f64) -> Result<f64> {
        let phi = self.amplitude(x)?;
        Ok(-2.0 / self.c_coef.sqrt() * ellip_f(phi, self.b_param)?)
    }

    /// J(x) = (P2 − Q)·2C^{-1/2} Π(D; arcsin √A(x) | B).
    pub fn action_j(&self, x: f64) -> Result<f64> {
        let phi = self.amplitude(x)?;
        let pi = ellip_pi(self.d_coef, phi, self.b_param)?;
        Ok((self.b - self.d) * 2.0 / self.c_coef.sqrt() * pi)
    }

    /// Both action integrals at once.
    pub fn action_i_j(&self, x: f64) -> Result<(f64, f64)> {
        Ok((self.action_i(x)?, self.action_j(x)?))
    }

    fn weight(&self, x: f64) -> f64 {
        let [p1, p2, p3, q] = self.roots;
        1.0 / ((q - x) * (x - p1) * (x - p2) * (x - p3)).sqrt()
    }

    /// dI/dx = σ [(Q−x)∏(x−P_i)]^{-1/2}.
    pub fn d_action_i(&self, x: f64) -> f64 {
        f64::from(self.sigma) * self.weight(x)
    }

    /// dJ/dx = |Q−x| [(Q−x)∏(x−P_i)]^{-1/2}.
    pub fn d_action_j(&self, x: f64) -> f64 {
        (self.d - x).abs() * self.weight(x)
    }

    /// Î(y) = Â(sn²(½C^{1/2} y | B)), the inverse of I on the interval.
    pub fn action_i_inverse(&self, y: f64) -> Result<f64> {
        if self.degenerate {
            return Ok(self.b);
        }
        let (sn, _) = jacobi_sn_am(0.5 * self.c_coef.sqrt() * y, self.b_param.min(1.0))?;
        Ok(self.a_inverse(sn * sn))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn complete_first_kind_values() {
        assert!((ellip_k(0.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!((ellip_k(0.5).unwrap() - 1.854_074_677_301_372).abs() < 1e-14);
        assert!((ellip_k(0.9).unwrap() - 2.578_092_113_348_173).abs() < 1e-13);
        assert!(ellip_k(1.0).is_err());
    }

    #[test]
    fn large_period_asymptote_is_flagged() {
        let v = ellip_k_comp(1e-14);
        assert!(v.large_period);
        assert!((v.value - (4.0 / 1e-7f64).ln()).abs() < 1e-10);
    }

    #[test]
    fn third_kind_reduces_to_first_kind_at_n_zero() {
        for &(phi, m) in &[(0.3, 0.2), (1.2, 0.7), (-0.8, 0.95)] {
            assert!((ellip_pi(0.0, phi, m).unwrap() - ellip_f(phi, m).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn characteristic_pole_is_reported() {
        assert!(matches!(ellip_pi(2.0, 1.2, 0.3), Err(OrbitaError::CharacteristicPole(_))));
    }

    #[test]
    fn sn_limits() {
        let (sn, _) = jacobi_sn_am(0.7, 0.0).unwrap();
        assert!((sn - 0.7f64.sin()).abs() < 1e-15);
        let (sn, _) = jacobi_sn_am(0.7, 1.0).unwrap();
        assert!((sn - 0.7f64.tanh()).abs() < 1e-15);
        let k = ellip_k(0.6).unwrap();
        assert!((jacobi_sn_am(k, 0.6).unwrap().0 - 1.0).abs() < 1e-13);
    }

    #[test]
    fn root_data_rejects_bad_sigma() {
        assert!(QuarticRootData::new([3.0, 2.0, 1.0], 1.5, 0).is_err());
    }

    proptest! {
        #[test]
        fn amplitude_inverts_f(phi in -1.5..1.5f64, m in 0.0..0.99f64) {
            let u = ellip_f(phi, m).unwrap();
            let (_, am) = jacobi_sn_am(u, m).unwrap();
            prop_assert!((am - phi).abs() < 1e-12);
        }

        #[test]
        fn rf_is_symmetric(x in 0.01..10.0f64, y in 0.01..10.0f64, z in 0.01..10.0f64) {
            let a = carlson_rf(x, y, z);
            prop_assert!((a - carlson_rf(z, x, y)).abs() < 1e-14 * a);
            prop_assert!((a - carlson_rf(y, z, x)).abs() < 1e-14 * a);
        }

        #[test]
        fn f_is_quasi_periodic(phi in -1.5..1.5f64, m in 0.0..0.9f64) {
            let k = ellip_k(m).unwrap();
            prop_assert!((ellip_f(phi + PI, m).unwrap() - ellip_f(phi, m).unwrap() - 2.0 * k).abs() < 1e-12);
        }
    }
}

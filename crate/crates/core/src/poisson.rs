//! The u*(3) algebra on particle phase space, its seven-generator SO(3)
//! reduction, and the Casimir functions.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{OrbitaError, Result};

pub type CMatrix3 = Matrix3<Complex64>;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Levi-Civita symbol on 0-based indices.
pub fn levi_civita(a: usize, b: usize, c: usize) -> f64 {
    match (a, b, c) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

fn delta(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

/// Orbit label p⃗ = (p1, p2, p3), strictly decreasing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightVector {
    p: [f64; 3],
}

impl WeightVector {
    pub fn new(p1: f64, p2: f64, p3: f64) -> Result<Self> {
        let p = [p1, p2, p3];
        if !p.iter().all(|v| v.is_finite()) || !(p1 > p2 && p2 > p3) {
            return Err(OrbitaError::DegenerateOrbit(p));
        }
        Ok(Self { p })
    }

    /// Build from the gaps λ = p1 − p2, μ = p2 − p3 and the lowest weight.
    pub fn from_gaps(lam: f64, mu: f64, p3: f64) -> Result<Self> {
        Self::new(p3 + mu + lam, p3 + mu, p3)
    }

    pub fn p(&self) -> [f64; 3] {
        self.p
    }
    pub fn lam(&self) -> f64 {
        self.p[0] - self.p[1]
    }
    pub fn mu(&self) -> f64 {
        self.p[1] - self.p[2]
    }
    pub fn l_max(&self) -> f64 {
        self.p[0] - self.p[2]
    }
    /// Power sum S_k = Σ p_i^k.
    pub fn s(&self, k: i32) -> f64 {
        self.p.iter().map(|v| v.powi(k)).sum()
    }
    pub fn s11(&self) -> f64 {
        let [a, b, c] = self.p;
        a * b + b * c + a * c
    }
    pub fn s111(&self) -> f64 {
        self.p.iter().product()
    }
    /// S^A = (p1+p2−2p3)(p2+p3−2p1)(p1+p3−2p2).
    pub fn s_a(&self) -> f64 {
        let [a, b, c] = self.p;
        (a + b - 2.0 * c) * (b + c - 2.0 * a) * (a + c - 2.0 * b)
    }
    /// S^B = (p1−p2)(p2−p3)(p1−p3). Exposed for completeness.
    pub fn s_b(&self) -> f64 {
        let [a, b, c] = self.p;
        (a - b) * (b - c) * (a - c)
    }
    pub fn mean(&self) -> f64 {
        self.s(1) / 3.0
    }
    /// Geometric mean (p1p2p3)^{1/3}; `None` unless all weights are positive.
    pub fn geometric_mean(&self) -> Option<f64> {
        (self.p[2] > 0.0).then(|| self.s111().cbrt())
    }
    /// S_L = ½(−3L² + 4(S2 − S11))^{1/2}.
    pub fn s_l(&self, l: f64) -> f64 {
        0.5 * (4.0 * (self.s(2) - self.s11()) - 3.0 * l * l).max(0.0).sqrt()
    }
    /// L̄² = (4/3)(S2 − S11).
    pub fn lbar2(&self) -> f64 {
        4.0 / 3.0 * (self.s(2) - self.s11())
    }
    /// Largest absolute weight, used as a tolerance scale.
    pub fn scale(&self) -> f64 {
        self.p.iter().fold(1.0_f64, |s, v| s.max(v.abs()))
    }
    /// G_p(x) = ∏(x − p_i).
    pub fn g(&self, x: f64) -> f64 {
        self.p.iter().map(|pi| x - pi).product()
    }
    pub fn g_prime(&self, x: f64) -> f64 {
        3.0 * x * x - 2.0 * self.s(1) * x + self.s11()
    }
}

/// A Hermitian 3×3 matrix representing a point of u*(3).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct U3Element {
    pub a: CMatrix3,
}

impl U3Element {
    pub fn new(a: CMatrix3) -> Self {
        Self { a }
    }

    /// ‖A − A†‖_max.
    pub fn hermiticity_error(&self) -> f64 {
        (self.a - self.a.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// L_a = −i Σ ε_abc A_bc.
    pub fn l_vec(&self) -> Vector3<f64> {
        Vector3::from_fn(|a, _| {
            let mut s = Complex64::new(0.0, 0.0);
            for b in 0..3 {
                for c in 0..3 {
                    s += self.a[(b, c)] * levi_civita(a, b, c);
                }
            }
            (-I * s).re
        })
    }

    /// Q_ab = ½(A_ab + A_ba).
    pub fn q_tensor(&self) -> Matrix3<f64> {
        Matrix3::from_fn(|a, b| 0.5 * (self.a[(a, b)] + self.a[(b, a)]).re)
    }

    pub fn casimirs(&self) -> [f64; 3] {
        casimirs_of(&self.a)
    }
}

/// C_k = Re tr(A^k), k = 1, 2, 3.
pub fn casimirs_of(a: &CMatrix3) -> [f64; 3] {
    let a2 = a * a;
    let a3 = a2 * a;
    [a.trace().re, a2.trace().re, a3.trace().re]
}

/// A from a particle configuration, with the centre-of-mass oscillator removed.
///
/// Each particle contributes z ⊗ z̄ with z = (p + iκx)/√(2κ), κ = ωm; the
/// centre of mass contributes −Z ⊗ Z̄ with total mass and momentum.
pub fn u3_from_particles(
    positions: &[Vector3<f64>],
    momenta: &[Vector3<f64>],
    masses: &[f64],
    omega: f64,
) -> Result<U3Element> {
    let n = positions.len();
    if n == 0 || momenta.len() != n || masses.len() != n {
        return Err(OrbitaError::InvalidArgument("need matching, nonempty particle arrays".into()));
    }
    if !(omega > 0.0) || masses.iter().any(|m| !(*m > 0.0)) {
        return Err(OrbitaError::InvalidArgument("masses and omega must be positive".into()));
    }
    let osc = |x: &Vector3<f64>, p: &Vector3<f64>, kappa: f64| -> Vector3<Complex64> {
        let s = (2.0 * kappa).sqrt();
        Vector3::from_fn(|a, _| Complex64::new(p[a], kappa * x[a]) / s)
    };
    let mut a = CMatrix3::zeros();
    let mut total_mass = 0.0;
    let mut mx = Vector3::zeros();
    let mut ptot = Vector3::zeros();
    for ((x, p), m) in positions.iter().zip(momenta).zip(masses) {
        let z = osc(x, p, omega * m);
        a += z * z.adjoint();
        total_mass += m;
        mx += x * *m;
        ptot += p;
    }
    let zc = osc(&(mx / total_mass), &ptot, omega * total_mass);
    a -= zc * zc.adjoint();
    Ok(U3Element { a })
}

fn unit(a: usize, b: usize) -> CMatrix3 {
    let mut m = CMatrix3::zeros();
    m[(a, b)] = Complex64::new(1.0, 0.0);
    m
}

/// Real basis (L1, L2, L3, Q11, Q22, Q33, Q23, Q13, Q12) with
/// L_a = −i Σ ε_abc E_bc and Q_ab = ½(E_ab + E_ba).
pub fn real_basis() -> [CMatrix3; 9] {
    let l = |a: usize| {
        let mut m = CMatrix3::zeros();
        for b in 0..3 {
            for c in 0..3 {
                m += unit(b, c) * Complex64::new(0.0, -levi_civita(a, b, c));
            }
        }
        m
    };
    let q = |a: usize, b: usize| (unit(a, b) + unit(b, a)) * Complex64::new(0.5, 0.0);
    [l(0), l(1), l(2), q(0, 0), q(1, 1), q(2, 2), q(1, 2), q(0, 2), q(0, 1)]
}

/// Complex basis E_ab, row-major.
pub fn complex_basis() -> [CMatrix3; 9] {
    std::array::from_fn(|k| unit(k / 3, k % 3))
}

/// Component function Z(A) = tr(A Zᵀ).
pub fn component(a: &U3Element, z: &CMatrix3) -> Complex64 {
    (a.a * z.transpose()).trace()
}

/// {Z_μ, Z_ν}(A) = −i tr(A ᵗ[Z_μ, Z_ν]).
pub fn full_bracket(a: &U3Element, zm: &CMatrix3, zn: &CMatrix3) -> Complex64 {
    let comm = zm * zn - zn * zm;
    -I * (a.a * comm.transpose()).trace()
}

/// Bracket of two real-basis elements with the Q–Q block scaled by G
/// (G = 1 is u*(3), G = 0 the semidirect limit).
pub fn full_bracket_g(a: &U3Element, mu: usize, nu: usize, g: f64) -> f64 {
    let basis = real_basis();
    let v = full_bracket(a, &basis[mu], &basis[nu]).re;
    if mu >= 3 && nu >= 3 {
        g * v
    } else {
        v
    }
}

/// The seven generators of the reduced algebra. `Q23`, `Q13`, `Q12` are the
/// off-diagonal quadrupole components usually written q1, q2, q3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    L3,
    Q1,
    Q2,
    Q3,
    Q23,
    Q13,
    Q12,
}

impl Generator {
    pub const ALL: [Generator; 7] = [
        Generator::L3,
        Generator::Q1,
        Generator::Q2,
        Generator::Q3,
        Generator::Q23,
        Generator::Q13,
        Generator::Q12,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        ["L3", "Q1", "Q2", "Q3", "q1", "q2", "q3"][self.index()]
    }

    /// Coefficients c with generator = Σ c_ij B_ij.
    pub fn b_coefficients(self) -> CMatrix3 {
        let h = Complex64::new(0.5, 0.0);
        match self {
            Generator::L3 => unit(0, 1) * (-I) + unit(1, 0) * I,
            Generator::Q1 => unit(0, 0),
            Generator::Q2 => unit(1, 1),
            Generator::Q3 => unit(2, 2),
            Generator::Q23 => (unit(1, 2) + unit(2, 1)) * h,
            Generator::Q13 => (unit(0, 2) + unit(2, 0)) * h,
            Generator::Q12 => (unit(0, 1) + unit(1, 0)) * h,
        }
    }

    /// ∂B/∂x for this coordinate.
    pub fn b_derivative(self) -> CMatrix3 {
        let h = Complex64::new(0.0, 0.5);
        match self {
            Generator::L3 => unit(0, 1) * h - unit(1, 0) * h,
            Generator::Q1 => unit(0, 0),
            Generator::Q2 => unit(1, 1),
            Generator::Q3 => unit(2, 2),
            Generator::Q23 => unit(1, 2) + unit(2, 1),
            Generator::Q13 => unit(0, 2) + unit(2, 0),
            Generator::Q12 => unit(0, 1) + unit(1, 0),
        }
    }
}

/// A point of u*_SO(3): L1 = L2 = 0 in the angular-momentum frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedState {
    pub l3: f64,
    /// Diagonal quadrupole components (Q1, Q2, Q3).
    pub big_q: [f64; 3],
    /// Off-diagonal components (q1, q2, q3) = (Q23, Q13, Q12).
    pub small_q: [f64; 3],
}

impl ReducedState {
    pub fn from_array(x: [f64; 7]) -> Self {
        Self { l3: x[0], big_q: [x[1], x[2], x[3]], small_q: [x[4], x[5], x[6]] }
    }

    pub fn to_array(&self) -> [f64; 7] {
        let [a, b, c] = self.big_q;
        let [d, e, f] = self.small_q;
        [self.l3, a, b, c, d, e, f]
    }

    pub fn get(&self, g: Generator) -> f64 {
        self.to_array()[g.index()]
    }

    /// B = [[Q1, q3 + iL3/2, q2], [q3 − iL3/2, Q2, q1], [q2, q1, Q3]].
    pub fn b_matrix(&self) -> CMatrix3 {
        let [q1b, q2b, q3b] = self.big_q;
        let [q1, q2, q3] = self.small_q;
        let r = |v: f64| Complex64::new(v, 0.0);
        CMatrix3::new(
            r(q1b),
            Complex64::new(q3, 0.5 * self.l3),
            r(q2),
            Complex64::new(q3, -0.5 * self.l3),
            r(q2b),
            r(q1),
            r(q2),
            r(q1),
            r(q3b),
        )
    }

    /// Read the generators off a Hermitian B with L1(B) = L2(B) = 0.
    pub fn from_b_matrix(b: &CMatrix3) -> Self {
        Self {
            l3: 2.0 * b[(0, 1)].im,
            big_q: [b[(0, 0)].re, b[(1, 1)].re, b[(2, 2)].re],
            small_q: [
                0.5 * (b[(1, 2)] + b[(2, 1)]).re,
                0.5 * (b[(0, 2)] + b[(2, 0)]).re,
                0.5 * (b[(0, 1)] + b[(1, 0)]).re,
            ],
        }
    }

    pub fn casimirs(&self) -> [f64; 3] {
        casimirs_of(&self.b_matrix())
    }

    /// R² = q1² + q2².
    pub fn r2(&self) -> f64 {
        self.small_q[0].powi(2) + self.small_q[1].powi(2)
    }
}

pub type PoissonTensor = [[f64; 7]; 7];

/// Structure function γ^{kl}_{ij} of the B-matrix bracket (0-based indices,
/// index 2 is the 3-axis).
pub fn gamma_kl_ij(k: usize, l: usize, i: usize, j: usize) -> f64 {
    let e3 = |a: usize, b: usize| levi_civita(a, b, 2);
    delta(k, 2) * (delta(j, 2) * e3(i, l) - delta(l, 2) * e3(i, j))
        - delta(i, 2) * (delta(l, 2) * e3(j, k) + delta(j, 2) * e3(k, l))
}

/// {B_{i1 i2}, B_{j1 j2}} from the general B-matrix formula.
pub fn b_entry_bracket(b: &CMatrix3, l3: f64, i: (usize, usize), j: (usize, usize)) -> Complex64 {
    let (i1, i2) = i;
    let (j1, j2) = j;
    let mut v = -I * (b[(i1, j2)] * delta(i2, j1) - b[(j1, i2)] * delta(i1, j2));
    let mut s = Complex64::new(0.0, 0.0);
    for k in 0..3 {
        for l in 0..3 {
            s += b[(k, i2)] * b[(l, j2)] * gamma_kl_ij(k, l, i1, j1)
                + b[(i1, k)] * b[(l, j2)] * gamma_kl_ij(k, l, i2, j1)
                + b[(k, i2)] * b[(j1, l)] * gamma_kl_ij(k, l, i1, j2)
                + b[(i1, k)] * b[(j1, l)] * gamma_kl_ij(k, l, i2, j2);
        }
    }
    v += s / l3;
    v
}

/// Full 7×7 reduced Poisson tensor from the B-matrix formula. This is the
/// authoritative bracket.
pub fn poisson_tensor_oracle(s: &ReducedState) -> Result<PoissonTensor> {
    if s.l3 == 0.0 {
        return Err(OrbitaError::ZeroAngularMomentum);
    }
    let b = s.b_matrix();
    let mut r = [[[[Complex64::new(0.0, 0.0); 3]; 3]; 3]; 3];
    for i1 in 0..3 {
        for i2 in 0..3 {
            for j1 in 0..3 {
                for j2 in 0..3 {
                    r[i1][i2][j1][j2] = b_entry_bracket(&b, s.l3, (i1, i2), (j1, j2));
                }
            }
        }
    }
    let coeffs: Vec<CMatrix3> = Generator::ALL.iter().map(|g| g.b_coefficients()).collect();
    let mut t = [[0.0; 7]; 7];
    for x in 0..7 {
        for y in 0..7 {
            let mut acc = Complex64::new(0.0, 0.0);
            for i1 in 0..3 {
                for i2 in 0..3 {
                    let cx = coeffs[x][(i1, i2)];
                    if cx == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    for j1 in 0..3 {
                        for j2 in 0..3 {
                            acc += cx * coeffs[y][(j1, j2)] * r[i1][i2][j1][j2];
                        }
                    }
                }
            }
            t[x][y] = acc.re;
        }
    }
    Ok(t)
}

/// Single oracle bracket {f, g}.
pub fn reduced_bracket_oracle(s: &ReducedState, f: Generator, g: Generator) -> Result<f64> {
    Ok(poisson_tensor_oracle(s)?[f.index()][g.index()])
}

/// Closed-form reduced bracket table with structure parameter G.
pub fn poisson_tensor_table(s: &ReducedState, g: f64) -> Result<PoissonTensor> {
    let [l, q1b, q2b, q3b, q1, q2, q3] = s.to_array();
    if l == 0.0 {
        return Err(OrbitaError::ZeroAngularMomentum);
    }
    let gl = g * l * l / 4.0;
    let mut t = [[0.0; 7]; 7];
    let mut put = |i: usize, j: usize, v: f64| {
        t[i][j] = v;
        t[j][i] = -v;
    };
    put(0, 1, 2.0 * q3);
    put(0, 2, -2.0 * q3);
    put(0, 3, 0.0);
    put(0, 4, -q2);
    put(0, 5, q1);
    put(0, 6, q2b - q1b);
    put(1, 2, -4.0 * q1 * q2 / l);
    put(1, 3, 4.0 * q1 * q2 / l);
    put(1, 4, 2.0 * q2 * (q2b - q3b) / l);
    put(1, 5, 2.0 * q2 * q3 / l);
    put(1, 6, 2.0 * (gl - q2 * q2) / l);
    put(2, 3, -4.0 * q1 * q2 / l);
    put(2, 4, -2.0 * q1 * q3 / l);
    put(2, 5, 2.0 * q1 * (q3b - q1b) / l);
    put(2, 6, 2.0 * (q1 * q1 - gl) / l);
    put(3, 4, 2.0 * (q1 * q3 + q2 * (q3b - q2b)) / l);
    put(3, 5, 2.0 * (q1 * (q1b - q3b) - q2 * q3) / l);
    put(3, 6, -2.0 * (q1 * q1 - q2 * q2) / l);
    put(4, 5, ((q1b - q3b) * (q2b - q3b) - q3 * q3 - gl) / l);
    put(4, 6, (q2 * q3 + q1 * (q3b - q2b)) / l);
    put(5, 6, -(q1 * q3 + q2 * (q3b - q1b)) / l);
    Ok(t)
}

pub fn reduced_bracket_table(s: &ReducedState, g: f64, f: Generator, h: Generator) -> Result<f64> {
    Ok(poisson_tensor_table(s, g)?[f.index()][h.index()])
}

/// {f, g} = Σ ∂_a f π_ab ∂_b g for gradients in generator coordinates.
pub fn bracket_of_gradients(pi: &PoissonTensor, df: &[f64; 7], dg: &[f64; 7]) -> f64 {
    let mut s = 0.0;
    for a in 0..7 {
        for b in 0..7 {
            s += df[a] * pi[a][b] * dg[b];
        }
    }
    s
}

/// Gradients of C1, C2, C3 in generator coordinates:
/// ∂C_k/∂x = k Re tr(B^{k−1} ∂B/∂x).
pub fn casimir_gradients(s: &ReducedState) -> [[f64; 7]; 3] {
    let b = s.b_matrix();
    let b2 = b * b;
    let mut out = [[0.0; 7]; 3];
    for g in Generator::ALL {
        let db = g.b_derivative();
        out[0][g.index()] = db.trace().re;
        out[1][g.index()] = 2.0 * (b * db).trace().re;
        out[2][g.index()] = 3.0 * (b2 * db).trace().re;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbit::{chart_forward, ChartPoint};
    use proptest::prelude::*;

    #[test]
    fn weight_vector_requires_strict_order() {
        assert!(WeightVector::new(3.0, 2.0, 1.0).is_ok());
        assert!(WeightVector::new(3.0, 3.0, 1.0).is_err());
        assert!(WeightVector::new(1.0, 2.0, 3.0).is_err());
        assert!(WeightVector::new(f64::NAN, 2.0, 1.0).is_err());
    }

    #[test]
    fn gaps_round_trip() {
        let wv = WeightVector::from_gaps(50.0, 15.0, 100.0).unwrap();
        assert_eq!(wv.p(), [165.0, 115.0, 100.0]);
        assert_eq!((wv.lam(), wv.mu()), (50.0, 15.0));
        assert_eq!(wv.s(1), 380.0);
        assert_eq!(wv.s(2), 165.0f64.powi(2) + 115.0f64.powi(2) + 100.0f64.powi(2));
    }

    #[test]
    fn levi_civita_signs() {
        assert_eq!(levi_civita(0, 1, 2), 1.0);
        assert_eq!(levi_civita(1, 0, 2), -1.0);
        assert_eq!(levi_civita(0, 0, 2), 0.0);
    }

    #[test]
    fn casimirs_of_diagonal() {
        let a = CMatrix3::from_diagonal(&nalgebra::Vector3::new(
            Complex64::new(3.0, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(-1.0, 0.0),
        ));
        assert_eq!(casimirs_of(&a), [4.0, 14.0, 34.0]);
    }

    #[test]
    fn table_matches_oracle_on_the_orbit() {
        let wv = WeightVector::new(60.0, 20.0, 0.0).unwrap();
        let c = ChartPoint::new(&wv, 30.0, 25.0, 0.4, 0.3);
        let s = chart_forward(&c, &wv).unwrap();
        let a = poisson_tensor_table(&s, 1.0).unwrap();
        let b = poisson_tensor_oracle(&s).unwrap();
        for i in 0..7 {
            for j in 0..7 {
                assert!((a[i][j] - b[i][j]).abs() < 1e-9 * (1.0 + b[i][j].abs()), "({i},{j})");
            }
        }
    }

    #[test]
    fn zero_l3_has_no_bracket() {
        let s = ReducedState::from_array([0.0, 1.0, 2.0, 3.0, 0.1, 0.2, 0.3]);
        assert_eq!(poisson_tensor_oracle(&s), Err(OrbitaError::ZeroAngularMomentum));
    }

    proptest! {
        #[test]
        fn b_matrix_round_trip(x in prop::array::uniform7(-10.0..10.0f64)) {
            let s = ReducedState::from_array(x);
            let back = ReducedState::from_b_matrix(&s.b_matrix()).to_array();
            for k in 0..7 {
                prop_assert!((back[k] - x[k]).abs() < 1e-13);
            }
        }

        #[test]
        fn oracle_is_antisymmetric(x in prop::array::uniform7(-10.0..10.0f64), l in 0.5..10.0f64) {
            let mut x = x;
            x[0] = l;
            let pi = poisson_tensor_oracle(&ReducedState::from_array(x)).unwrap();
            for i in 0..7 {
                for j in 0..7 {
                    prop_assert!((pi[i][j] + pi[j][i]).abs() < 1e-12 * (1.0 + pi[i][j].abs()));
                }
            }
        }

        #[test]
        fn full_bracket_is_antisymmetric(mu in 0usize..9, nu in 0usize..9) {
            let basis = real_basis();
            let a = U3Element::new(basis[3] * Complex64::new(2.0, 0.0) + basis[8] + basis[2] * Complex64::new(0.5, 0.0));
            let x = full_bracket(&a, &basis[mu], &basis[nu]);
            let y = full_bracket(&a, &basis[nu], &basis[mu]);
            prop_assert!((x + y).norm() < 1e-14);
        }
    }
}

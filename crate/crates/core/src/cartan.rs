//! Cartan model of SO(3)/SO(2), the angular-momentum-frame reduction, and the
//! coefficient tables describing how the frame moves with L⃗.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use crate::error::{OrbitaError, Result};
use crate::poisson::{levi_civita, U3Element};

/// Relative threshold on (|x| + z)/|x| below which the direction counts as −e3.
pub const ANTIPODE_TOL: f64 = 1e-10;

/// A rotation [x⃗] mapping e3 to x⃗/|x⃗|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartanMatrix {
    pub m: Matrix3<f64>,
    pub source: Vector3<f64>,
    pub eps: i8,
}

/// x⃗_* = (−x, −y, z).
pub fn star(x: &Vector3<f64>) -> Vector3<f64> {
    Vector3::new(-x[0], -x[1], x[2])
}

/// Rotation by `angle` about e3.
pub fn r3(angle: f64) -> Matrix3<f64> {
    let (s, c) = angle.sin_cos();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

/// [x⃗] = [[1−a², −ab, x̄], [−ab, 1−b², ȳ], [−x̄, −ȳ, z̄]] with
/// (a, b) = (x, y)/√(r(r+z)) and (x̄, ȳ, z̄) = x⃗/r.
pub fn cartan_matrix(x: &Vector3<f64>) -> Result<CartanMatrix> {
    let r = x.norm();
    if r == 0.0 {
        return Err(OrbitaError::ZeroVector);
    }
    let d = r + x[2];
    if d < ANTIPODE_TOL * r {
        return Err(OrbitaError::DegenerateDirection(d / r));
    }
    let s = (r * d).sqrt();
    let (a, b) = (x[0] / s, x[1] / s);
    let u = x / r;
    let m = Matrix3::new(
        1.0 - a * a,
        -a * b,
        u[0],
        -a * b,
        1.0 - b * b,
        u[1],
        -u[0],
        -u[1],
        u[2],
    );
    Ok(CartanMatrix { m, source: *x, eps: 1 })
}

/// [αx⃗] = [sign(α) x⃗]; α = 0 is rejected.
pub fn cartan_matrix_scaled(alpha: f64, x: &Vector3<f64>) -> Result<CartanMatrix> {
    if alpha == 0.0 {
        return Err(OrbitaError::ZeroVector);
    }
    let eps: i8 = if alpha > 0.0 { 1 } else { -1 };
    let mut c = cartan_matrix(&(x * f64::from(eps)))?;
    c.source = *x;
    c.eps = eps;
    Ok(c)
}

/// Angle of the e3-rotation in the factorisation [x⃗] = [w⃗] R3(α) [w⃗_*],
/// w⃗ = e3 × x⃗: the polar angle, (cos α, sin α) = (x3, √(x1² + x2²))/|x⃗|.
pub fn factorisation_angle(x: &Vector3<f64>) -> f64 {
    x[0].hypot(x[1]).atan2(x[2])
}

/// Rotate A into the frame where L⃗ = (0, 0, ε|L⃗|): B = Mᵀ A M, M = [εL⃗(A)].
pub fn amf_reduce(a: &U3Element, eps: i8) -> Result<U3Element> {
    if eps != 1 && eps != -1 {
        return Err(OrbitaError::InvalidArgument(format!("chart sign must be +-1, got {eps}")));
    }
    let l = a.l_vec();
    if l.norm() == 0.0 {
        return Err(OrbitaError::ZeroAngularMomentum);
    }
    let m = cartan_matrix(&(l * f64::from(eps)))
        .map_err(|_| OrbitaError::AntipodalAngularMomentum(eps))?
        .m
        .map(|v| Complex64::new(v, 0.0));
    Ok(U3Element::new(m.transpose() * a.a * m))
}

/// ψ⃗(x⃗, y) = sign(y)(x⃗ + e3 y)/(x3 + y).
pub fn psi_vector(x: &Vector3<f64>, y: f64) -> Result<Vector3<f64>> {
    let den = x[2] + y;
    if den == 0.0 {
        return Err(OrbitaError::DivergentKernel("x3 + y = 0 in psi"));
    }
    Ok((x + Vector3::new(0.0, 0.0, y)) * (y.signum() / den))
}

type T3 = [[[f64; 3]; 3]; 3];
type T4 = [[[[f64; 3]; 3]; 3]; 3];

/// Coefficient tables for the motion of [L⃗] and the bracket corrections.
///
/// With u the third AMF component and f_k = u^{-k}/(u + x3):
/// - `gamma_bar[c][i]` = δ_c3 f1 Σ_a ε_{ia3} x_a + ε_{ci3}/u
/// - `gamma[i][j]` = −δ_i3 f1 Σ_a ε_{ja3} x_a + ε_{ij3}/u
/// - `gamma_abc[a][b][c]` = Σ_{d,i} ε_abd γ̄_di [ci], so ∂[ai]/∂L_c = Σ_b γ_abc [bi]
/// - `gamma1[a][b][c][d]` = Σ_e ε_aeb γ_cde
/// - `gamma2[a][b][c][d]` = Σ γ_abe γ_cdf ε_efg x_g
/// - `p_ef[e][f]` = Σ_g ε_efg (u + δ_e3 x_e)(x_g + δ_g3 u)
#[derive(Debug, Clone, PartialEq)]
pub struct FrameDerivativeCoeffs {
    pub x: Vector3<f64>,
    pub u: f64,
    pub f: [f64; 3],
    pub cartan: Matrix3<f64>,
    pub gamma_bar: [[f64; 3]; 3],
    pub gamma: [[f64; 3]; 3],
    pub gamma_abc: T3,
    pub gamma1: T4,
    pub gamma2: T4,
    pub p_ef: [[f64; 3]; 3],
    pub psi: Vector3<f64>,
}

pub fn frame_derivative_coeffs(l: &Vector3<f64>, u: f64) -> Result<FrameDerivativeCoeffs> {
    if u == 0.0 {
        return Err(OrbitaError::DivergentKernel("u = 0"));
    }
    if u + l[2] == 0.0 {
        return Err(OrbitaError::DivergentKernel("u + x3 = 0"));
    }
    let x = *l;
    let f = [0, 1, 2].map(|k| u.powi(-k) / (u + x[2]));
    let cartan = cartan_matrix(&x)?.m;
    let e = levi_civita;
    let rot = |j: usize| -> f64 { (0..3).map(|a| e(j, a, 2) * x[a]).sum() };
    let mut gamma_bar = [[0.0; 3]; 3];
    let mut gamma = [[0.0; 3]; 3];
    for c in 0..3 {
        for i in 0..3 {
            let d3 = if c == 2 { 1.0 } else { 0.0 };
            gamma_bar[c][i] = d3 * f[1] * rot(i) + e(c, i, 2) / u;
            gamma[c][i] = -d3 * f[1] * rot(i) + e(c, i, 2) / u;
        }
    }
    let mut gamma_abc = [[[0.0; 3]; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                let mut s = 0.0;
                for d in 0..3 {
                    for i in 0..3 {
                        s += e(a, b, d) * gamma_bar[d][i] * cartan[(c, i)];
                    }
                }
                gamma_abc[a][b][c] = s;
            }
        }
    }
    let mut gamma1 = [[[[0.0; 3]; 3]; 3]; 3];
    let mut gamma2 = [[[[0.0; 3]; 3]; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                for d in 0..3 {
                    gamma1[a][b][c][d] = (0..3).map(|k| e(a, k, b) * gamma_abc[c][d][k]).sum();
                    let mut s = 0.0;
                    for ee in 0..3 {
                        for ff in 0..3 {
                            for g in 0..3 {
                                s += gamma_abc[a][b][ee] * gamma_abc[c][d][ff] * e(ee, ff, g) * x[g];
                            }
                        }
                    }
                    gamma2[a][b][c][d] = s;
                }
            }
        }
    }
    let mut p_ef = [[0.0; 3]; 3];
    for ee in 0..3 {
        for ff in 0..3 {
            let lead = u + if ee == 2 { x[ee] } else { 0.0 };
            p_ef[ee][ff] = (0..3)
                .map(|g| e(ee, ff, g) * lead * (x[g] + if g == 2 { u } else { 0.0 }))
                .sum();
        }
    }
    Ok(FrameDerivativeCoeffs {
        x,
        u,
        f,
        cartan,
        gamma_bar,
        gamma,
        gamma_abc,
        gamma1,
        gamma2,
        p_ef,
        psi: psi_vector(&x, u)?,
    })
}

impl FrameDerivativeCoeffs {
    /// ∂[x⃗]/∂x_c = Σ_b γ_abc [bi].
    pub fn d_cartan(&self, c: usize) -> Matrix3<f64> {
        Matrix3::from_fn(|a, i| (0..3).map(|b| self.gamma_abc[a][b][c] * self.cartan[(b, i)]).sum())
    }

    /// Σ_{b,c} ε_abc [bi] γ̄_cj: derivative of [x⃗] along the j-th
    /// angular-momentum-frame component, i.e. ∂/∂x_c = Σ_j [cj] (this).
    pub fn d_cartan_frame(&self, j: usize) -> Matrix3<f64> {
        Matrix3::from_fn(|a, i| {
            let mut s = 0.0;
            for b in 0..3 {
                for c in 0..3 {
                    s += levi_civita(a, b, c) * self.cartan[(b, i)] * self.gamma_bar[c][j];
                }
            }
            s
        })
    }

    /// Γ¹ from its closed form f2 Σ ε_abe ε_cdf (ε_f (1−δ_e3) x_e x̃_f + P_ef),
    /// ε_x = 1, ε_y = −1, ε_z = 0, x̃ = (y, x, 0).
    pub fn gamma1_closed_form(&self) -> T4 {
        let x = self.x;
        let sgn = [1.0, -1.0, 0.0];
        let swapped = [x[1], x[0], 0.0];
        let mut inner = [[0.0; 3]; 3];
        for ee in 0..3 {
            for ff in 0..3 {
                let lead = if ee != 2 { sgn[ff] * x[ee] * swapped[ff] } else { 0.0 };
                inner[ee][ff] = lead + self.p_ef[ee][ff];
            }
        }
        contract_eps_eps(&inner, self.f[2])
    }

    /// Γ² from its closed form f1 Σ ε_abe ε_cdf ε_efg (x_g + δ_g3 u).
    pub fn gamma2_closed_form(&self) -> T4 {
        let y = Vector3::new(self.x[0], self.x[1], self.x[2] + self.u);
        let mut inner = [[0.0; 3]; 3];
        for ee in 0..3 {
            for ff in 0..3 {
                inner[ee][ff] = (0..3).map(|g| levi_civita(ee, ff, g) * y[g]).sum();
            }
        }
        contract_eps_eps(&inner, self.f[1])
    }
}

fn contract_eps_eps(inner: &[[f64; 3]; 3], scale: f64) -> T4 {
    let mut out = [[[[0.0; 3]; 3]; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                for d in 0..3 {
                    let mut s = 0.0;
                    for ee in 0..3 {
                        for ff in 0..3 {
                            s += levi_civita(a, b, ee) * levi_civita(c, d, ff) * inner[ee][ff];
                        }
                    }
                    out[a][b][c][d] = scale * s;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn vec3() -> impl Strategy<Value = Vector3<f64>> {
        (-5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64)
            .prop_map(|(a, b, c)| Vector3::new(a, b, c))
            .prop_filter("away from -e3 and 0", |x| x.norm() > 1e-3 && x[2] + x.norm() > 1e-2 * x.norm())
    }

    proptest! {
        #[test]
        fn maps_e3_to_direction(x in vec3()) {
            let m = cartan_matrix(&x).unwrap().m;
            let e3 = Vector3::new(0.0, 0.0, 1.0);
            prop_assert!((m * e3 - x / x.norm()).norm() < 1e-12);
        }

        #[test]
        fn is_a_rotation(x in vec3()) {
            let m = cartan_matrix(&x).unwrap().m;
            prop_assert!((m.transpose() * m - Matrix3::identity()).abs().max() < 1e-12);
            prop_assert!((m.determinant() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn factorises_through_e3_rotation(x in vec3()) {
            let w = Vector3::new(-x[1], x[0], 0.0);
            prop_assume!(w.norm() > 1e-3 * x.norm());
            let lhs = cartan_matrix(&x).unwrap().m;
            let rhs = cartan_matrix(&w).unwrap().m * r3(factorisation_angle(&x)) * cartan_matrix(&star(&w)).unwrap().m;
            prop_assert!((lhs - rhs).abs().max() < 1e-12);
        }
    }

    #[test]
    fn identity_on_e3() {
        let m = cartan_matrix(&Vector3::new(0.0, 0.0, 2.0)).unwrap().m;
        assert!((m - Matrix3::identity()).abs().max() < 1e-15);
    }

    #[test]
    fn rejects_zero_and_antipode() {
        assert_eq!(cartan_matrix(&Vector3::zeros()), Err(OrbitaError::ZeroVector));
        assert!(matches!(cartan_matrix(&Vector3::new(0.0, 0.0, -1.0)), Err(OrbitaError::DegenerateDirection(_))));
        assert!(cartan_matrix_scaled(0.0, &Vector3::new(1.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn scaled_uses_sign_only() {
        let x = Vector3::new(0.3, -0.2, 0.9);
        let a = cartan_matrix_scaled(3.5, &x).unwrap();
        assert_eq!(a.m, cartan_matrix(&x).unwrap().m);
        let b = cartan_matrix_scaled(-0.1, &(-x)).unwrap();
        assert_eq!(b.eps, -1);
        assert_eq!(b.m, cartan_matrix(&x).unwrap().m);
    }

    #[test]
    fn star_is_an_involution() {
        let x = Vector3::new(1.0, 2.0, 3.0);
        assert_eq!(star(&star(&x)), x);
    }
}

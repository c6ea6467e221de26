//! Closed-form 2x2 matrix functions in complex arithmetic: principal
//! fractional power and matrix exponential, as needed for the deformation
//! tensor `M = exp(t G^(1/alpha))`.

use num_complex::Complex64;

pub type Mat2 = [[Complex64; 2]; 2];

pub fn mat2_real(g: [[f64; 2]; 2]) -> Mat2 {
    [
        [Complex64::new(g[0][0], 0.0), Complex64::new(g[0][1], 0.0)],
        [Complex64::new(g[1][0], 0.0), Complex64::new(g[1][1], 0.0)],
    ]
}

pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn mat2_mul_transpose(a: &Mat2) -> Mat2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * a[j][0] + a[i][1] * a[j][1];
        }
    }
    out
}

fn identity() -> Mat2 {
    [
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
    ]
}

fn frobenius(g: [[f64; 2]; 2]) -> f64 {
    (g[0][0] * g[0][0] + g[0][1] * g[0][1] + g[1][0] * g[1][0] + g[1][1] * g[1][1]).sqrt()
}

/// Result of the fractional power, with a flag marking the defective
/// (non-diagonalizable) fallback path.
pub struct FracPower {
    pub m: Mat2,
    pub defective: bool,
}

/// Principal fractional power `G^p` of a real 2x2 matrix.
///
/// Diagonalizable `G`: spectral formula with principal complex powers of
/// the eigenvalues. Defective `G` with a nonzero double eigenvalue: the
/// two-term Jordan series `f(l) I + f'(l) (G - l I)` (exact for 2x2).
/// Defective with vanishing eigenvalues (the simple-shear case): the
/// scaled-direction power `|G|^(p-1) G`, which applies the scalar power to
/// the shear magnitude and keeps the shear direction.
pub fn fractional_power(g: [[f64; 2]; 2], p: f64) -> FracPower {
    let scale = frobenius(g);
    if scale == 0.0 {
        return FracPower {
            m: [[Complex64::new(0.0, 0.0); 2]; 2],
            defective: false,
        };
    }
    let tr = g[0][0] + g[1][1];
    let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    let half_tr = 0.5 * tr;
    let disc = half_tr * half_tr - det;

    // eigenvalue splitting |l1 - l2|^2 = 4 |disc| against the matrix scale
    if 4.0 * disc.abs() > 1e-12 * scale * scale {
        let s = Complex64::new(disc, 0.0).sqrt();
        let l1 = Complex64::new(half_tr, 0.0) + s;
        let l2 = Complex64::new(half_tr, 0.0) - s;
        let f1 = l1.powf(p);
        let f2 = l2.powf(p);
        let gc = mat2_real(g);
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        let denom = l1 - l2;
        for i in 0..2 {
            for j in 0..2 {
                let id = if i == j {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                out[i][j] = (f1 * (gc[i][j] - l2 * id) - f2 * (gc[i][j] - l1 * id)) / denom;
            }
        }
        FracPower {
            m: out,
            defective: false,
        }
    } else if half_tr.abs() > 1e-8 * scale {
        // defective with nonzero eigenvalue: exact two-term Jordan series
        let l = Complex64::new(half_tr, 0.0);
        let fl = l.powf(p);
        let dfl = p * l.powf(p - 1.0);
        let gc = mat2_real(g);
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let id = if i == j {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                out[i][j] = fl * id + dfl * (gc[i][j] - l * id);
            }
        }
        FracPower {
            m: out,
            defective: true,
        }
    } else {
        // nilpotent (simple shear): scale-and-direction power
        let factor = scale.powf(p - 1.0);
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = Complex64::new(factor * g[i][j], 0.0);
            }
        }
        FracPower {
            m: out,
            defective: true,
        }
    }
}

/// Closed-form 2x2 matrix exponential:
/// `e^A = e^(tr/2) [cosh(s) I + sinh(s)/s (A - (tr/2) I)]`,
/// `s = sqrt((tr/2)^2 - det)`.
pub fn expm(a: &Mat2) -> Mat2 {
    let tr = a[0][0] + a[1][1];
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let half = 0.5 * tr;
    let s2 = half * half - det;
    let s = s2.sqrt();
    let (cosh_s, sinc_s) = if s.norm() < 1e-6 {
        // series in s^2 to avoid 0/0
        let c = Complex64::new(1.0, 0.0) + s2 / 2.0 + s2 * s2 / 24.0;
        let sh = Complex64::new(1.0, 0.0) + s2 / 6.0 + s2 * s2 / 120.0;
        (c, sh)
    } else {
        (s.cosh(), s.sinh() / s)
    };
    let pref = half.exp();
    let mut out = identity();
    for i in 0..2 {
        for j in 0..2 {
            let id = if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            out[i][j] = pref * (cosh_s * id + sinc_s * (a[i][j] - half * id));
        }
    }
    out
}

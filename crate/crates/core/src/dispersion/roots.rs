//! All-roots polynomial solver (Aberth-Ehrlich simultaneous iteration) for
//! complex-coefficient polynomials.
//!
//! The contract is all `n` roots with residual
//! `|p(root)| <= 1e-8 * max|coefficient|`; the iteration targets three
//! orders tighter and fails loudly with the coefficient vector attached if
//! it cannot get there.

use num_complex::Complex64;

use crate::{Error, Result};

const MAX_ITERS: usize = 400;

/// Roots of `sum_k coeffs[k] z^k`, any order. Exact-zero low-order
/// coefficients are deflated to roots at the origin first.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    polynomial_roots_seeded(coeffs, None)
}

/// Same, but seeds the iteration with a previous root set of matching
/// degree (continuation-friendly warm start).
pub fn polynomial_roots_seeded(
    coeffs: &[Complex64],
    seed: Option<&[Complex64]>,
) -> Result<Vec<Complex64>> {
    let mut top = coeffs.len();
    while top > 0 && coeffs[top - 1].norm() == 0.0 {
        top -= 1;
    }
    if top == 0 {
        return Err(Error::Domain("zero polynomial has no defined roots".into()));
    }
    let mut low = 0usize;
    while low < top - 1 && coeffs[low].norm() == 0.0 {
        low += 1;
    }
    let mut roots = vec![Complex64::new(0.0, 0.0); low];
    let reduced = &coeffs[low..top];
    let degree = reduced.len() - 1;
    if degree == 0 {
        return Ok(roots);
    }

    // monic normalization
    let lead = reduced[degree];
    let monic: Vec<Complex64> = reduced.iter().map(|c| c / lead).collect();
    let deriv: Vec<Complex64> = (1..=degree)
        .map(|k| monic[k] * k as f64)
        .collect();

    let coeff_scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm()));
    let target = 1e-11 * coeff_scale.max(f64::MIN_POSITIVE);

    let mut z: Vec<Complex64> = match seed {
        Some(s) if s.len() == degree => s.to_vec(),
        _ => {
            // Cauchy-style bound on the root magnitudes
            let bound = 1.0 + monic[..degree].iter().fold(0.0f64, |m, c| m.max(c.norm()));
            (0..degree)
                .map(|k| {
                    let angle = 2.0 * std::f64::consts::PI * k as f64 / degree as f64 + 0.4;
                    Complex64::from_polar(bound.min(2.0), angle)
                })
                .collect()
        }
    };

    let eval = |c: &[Complex64], x: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in (0..c.len()).rev() {
            acc = acc * x + c[k];
        }
        acc
    };

    let mut residual = f64::INFINITY;
    for _iter in 0..MAX_ITERS {
        let mut moved = 0.0f64;
        for i in 0..degree {
            let p = eval(&monic, z[i]);
            let dp = eval(&deriv, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let newton = if dp.norm() > 0.0 {
                p / dp
            } else {
                // nudge off a critical point
                Complex64::new(1e-12, 1e-12)
            };
            let mut repulse = Complex64::new(0.0, 0.0);
            for j in 0..degree {
                if j != i {
                    let d = z[i] - z[j];
                    if d.norm() > 0.0 {
                        repulse += d.inv();
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulse;
            let w = if denom.norm() > 1e-300 {
                newton / denom
            } else {
                newton
            };
            z[i] -= w;
            moved = moved.max(w.norm());
        }
        // residual measured against the original (unnormalized) polynomial
        residual = z
            .iter()
            .fold(0.0f64, |m, &x| m.max((eval(reduced, x)).norm()));
        if residual <= target || moved < 1e-16 {
            break;
        }
    }

    if residual > 1e-8 * coeff_scale {
        return Err(Error::RootFinding {
            iterations: MAX_ITERS,
            residual,
            coefficients: coeffs.to_vec(),
        });
    }
    roots.extend(z);
    Ok(roots)
}

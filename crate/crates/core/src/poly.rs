//! Dense univariate polynomials in ascending coefficient order and an
//! Aberth-Ehrlich root finder.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

pub fn eval_real(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

pub fn eval_complex(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

pub fn eval_cc(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

pub fn derivative(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| k as f64 * c)
        .collect()
}

/// Drop leading coefficients that are at most `rel` times the largest one.
pub fn trim(coeffs: &[f64], rel: f64) -> Vec<f64> {
    let big = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut end = coeffs.len();
    while end > 1 && coeffs[end - 1].abs() <= rel * big {
        end -= 1;
    }
    coeffs[..end].to_vec()
}

pub fn degree(coeffs: &[f64]) -> Option<usize> {
    coeffs.iter().rposition(|&c| c != 0.0)
}

/// `scale · Π (z - r)` as complex coefficients.
pub fn from_roots(roots: &[Complex64], scale: Complex64) -> Vec<Complex64> {
    let mut c = vec![scale];
    for &r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (k, &ck) in c.iter().enumerate() {
            next[k + 1] += ck;
            next[k] -= ck * r;
        }
        c = next;
    }
    c
}

/// Quotient of `p(z) / (z - t)` by synthetic division; the remainder is
/// returned second.
pub fn deflate(coeffs: &[Complex64], t: Complex64) -> (Vec<Complex64>, Complex64) {
    let n = coeffs.len();
    if n < 2 {
        return (Vec::new(), coeffs.first().copied().unwrap_or_default());
    }
    let mut q = vec![Complex64::new(0.0, 0.0); n - 1];
    let mut acc = coeffs[n - 1];
    for k in (0..n - 1).rev() {
        q[k] = acc;
        acc = coeffs[k] + acc * t;
    }
    (q, acc)
}

/// `(x - c) / s` substitution: coefficients of `q(u) = p(c + s u)`.
pub fn shift_scale(coeffs: &[f64], c: f64, s: f64) -> Vec<f64> {
    // Taylor shift by repeated synthetic division, then scale.
    let mut a = coeffs.to_vec();
    let n = a.len();
    for i in 0..n {
        for k in (i..n - 1).rev() {
            a[k] += c * a[k + 1];
        }
    }
    let mut pow = 1.0;
    for v in a.iter_mut() {
        *v *= pow;
        pow *= s;
    }
    a
}

/// All complex roots of a real polynomial by Aberth-Ehrlich iteration,
/// polished with Newton steps on the original coefficients.
pub fn roots(coeffs: &[f64]) -> Vec<Complex64> {
    let c = trim(coeffs, 0.0);
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    // roots at zero
    let lead_zero = c.iter().take_while(|&&v| v == 0.0).count();
    let c = &c[lead_zero..];
    let n_nz = c.len() - 1;
    let mut out: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); lead_zero];
    if n_nz == 0 {
        return out;
    }
    let lead = c[n_nz];
    let monic: Vec<f64> = c.iter().map(|v| v / lead).collect();
    let dmonic = derivative(&monic);
    // Fujiwara bound
    let mut bound = 0.0f64;
    for k in 0..n_nz {
        let v = libm::pow(monic[k].abs(), 1.0 / (n_nz - k) as f64);
        bound = bound.max(v);
    }
    let radius = (bound * 2.0).max(1e-300) * 0.5;
    let mut z: Vec<Complex64> = (0..n_nz)
        .map(|k| {
            Complex64::from_polar(
                radius,
                2.0 * core::f64::consts::PI * k as f64 / n_nz as f64 + 0.4,
            )
        })
        .collect();
    for _ in 0..500 {
        let mut max_step = 0.0f64;
        for k in 0..n_nz {
            let p = eval_complex(&monic, z[k]);
            let dp = eval_complex(&dmonic, z[k]);
            if p == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = p / dp;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n_nz {
                if j != k {
                    s += (z[k] - z[j]).inv();
                }
            }
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if step.is_finite() {
                z[k] -= step;
                max_step = max_step.max(step.norm() / z[k].norm().max(1e-300));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    for zk in z.iter_mut() {
        for _ in 0..3 {
            let p = eval_complex(&monic, *zk);
            let dp = eval_complex(&dmonic, *zk);
            let step = p / dp;
            if step.is_finite() && step.norm() < 1e-6 * (1.0 + zk.norm()) {
                *zk -= step;
            }
        }
    }
    out.extend(z);
    out
}

//! Structural checks on computed extremals: real simple zeros, the
//! zero-pair orthogonality relation, zero separation and mean type.

use super::{ExtremalProblem, ExtremalSolution, OrthogonalityEntry};
use crate::entire::EntireFunction;
use crate::hb::HbSpec;
use crate::numerics::{integrate_with_breaks, ln_beta, QuadratureScheme};
use crate::{poly, Error, Result, Side};
use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

/// `g = (e^{-iσ/2} f + e^{iσ/2} f#) / 2` for a polynomial with complex
/// coefficients; `g` is real entire.
pub fn symmetrize_real(coeffs: &[Complex64], sigma: f64) -> Vec<f64> {
    let r = Complex64::from_polar(1.0, -0.5 * sigma);
    coeffs.iter().map(|&a| (r * a).re).collect()
}

/// Roots of the polynomial form in `u = (x - ξ)/L`, mapped back to `x`.
fn all_roots(pr: &ExtremalProblem, coeffs: &[f64]) -> Option<Vec<Complex64>> {
    let u = pr.u_coefficients(coeffs)?;
    let u = poly::trim(&u, 1e-13);
    let l = pr.unit();
    Some(poly::roots(&u).into_iter().map(|r| r * l + pr.xi).collect())
}

fn is_real(z: Complex64, unit: f64) -> bool {
    z.im.abs() <= 1e-8 * unit.max(z.re.abs())
}

/// Sorted real zeros of `f`: polynomial roots for polynomial-type specs,
/// sign changes on the integration window otherwise.
pub(crate) fn real_zeros(pr: &ExtremalProblem, coeffs: &[f64]) -> Vec<f64> {
    if let Some(roots) = all_roots(pr, coeffs) {
        let mut out: Vec<f64> = roots
            .into_iter()
            .filter(|&z| is_real(z, pr.unit()))
            .map(|z| z.re)
            .collect();
        out.sort_by(f64::total_cmp);
        return out;
    }
    let (lo, hi) = match pr.domain() {
        crate::numerics::Domain::Interval(a, b) => (a, b),
        crate::numerics::Domain::Line => return Vec::new(),
    };
    let density = pr.spec.phase_sup() * 16.0 / PI;
    let n = ((hi - lo) * density).clamp(4096.0, 200_000.0) as usize;
    let f = |x: f64| pr.evaluate_real(coeffs, x);
    let mut out = Vec::new();
    let mut x0 = lo;
    let mut f0 = f(lo);
    for i in 1..=n {
        let x1 = lo + (hi - lo) * i as f64 / n as f64;
        let f1 = f(x1);
        if f0 == 0.0 {
            out.push(x0);
        } else if f0 * f1 < 0.0 {
            let (mut a, mut b, mut fa) = (x0, x1, f0);
            for _ in 0..80 {
                let mid = 0.5 * (a + b);
                let fm = f(mid);
                if fm == 0.0 || mid <= a || mid >= b {
                    a = mid;
                    b = mid;
                    break;
                }
                if (fm > 0.0) == (fa > 0.0) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            out.push(0.5 * (a + b));
        }
        x0 = x1;
        f0 = f1;
    }
    out
}

/// Zeros of a computed extremal with reality and simplicity checks.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ZeroReport {
    pub zeros: Vec<f64>,
    /// Roots off the real axis, as `[re, im]`.
    pub complex: Vec<[f64; 2]>,
    pub max_imag: f64,
    pub all_real: bool,
    /// Distinct zeros with nonvanishing derivative.
    pub simple: bool,
    pub min_gap: Option<f64>,
    /// `min |f'(λ)| L / |E(λ)|` over the zeros.
    pub min_scaled_derivative: Option<f64>,
    /// False when only sign changes on a window could be inspected.
    pub complex_checked: bool,
}

pub fn extract_zeros(pr: &ExtremalProblem, coeffs: &[f64]) -> ZeroReport {
    let unit = pr.unit();
    let (zeros, complex, max_imag, checked) = match all_roots(pr, coeffs) {
        Some(roots) => {
            let mut real = Vec::new();
            let mut complex = Vec::new();
            let mut max_imag = 0.0f64;
            for z in roots {
                if is_real(z, unit) {
                    real.push(z.re);
                    max_imag = max_imag.max(z.im.abs());
                } else {
                    complex.push([z.re, z.im]);
                }
            }
            real.sort_by(f64::total_cmp);
            (real, complex, max_imag, true)
        }
        None => (real_zeros(pr, coeffs), Vec::new(), 0.0, false),
    };
    let min_gap = zeros.windows(2).map(|w| w[1] - w[0]).reduce(f64::min);
    let eta = 1e-7 * unit;
    let min_scaled_derivative = zeros
        .iter()
        .map(|&l| {
            let d = if checked {
                pr.evaluate(coeffs, Complex64::new(l, eta)).im / eta
            } else {
                crate::numerics::d1_five_point(|x| pr.evaluate_real(coeffs, x), l, 1e-5 * unit)
            };
            d.abs() * unit / pr.spec.abs_at(l)
        })
        .reduce(f64::min);
    let simple =
        min_gap.map_or(true, |g| g > 0.0) && min_scaled_derivative.map_or(true, |d| d > 1e-10);
    ZeroReport {
        all_real: complex.is_empty(),
        zeros,
        complex,
        max_imag,
        simple,
        min_gap,
        min_scaled_derivative,
        complex_checked: checked,
    }
}

/// `∫ (x-ξ)² |f|^p / ((x-λ_a)(x-λ_b)|E|^p)` divided by the integral of its
/// absolute value. Vanishes at an exact optimum when `λ_a ≠ λ_b` are zeros
/// of `f`; strictly positive when `λ_a = λ_b`.
pub fn orthogonality_residual(
    pr: &ExtremalProblem,
    coeffs: &[f64],
    pair: (f64, f64),
) -> Result<f64> {
    let (la, lb) = pair;
    let p = pr.p;
    let xi = pr.xi;
    let f = |x: f64| {
        let v = pr.evaluate_real(coeffs, x);
        let r = (x - xi) * (x - xi) / ((x - la) * (x - lb));
        let q = libm::pow((v / pr.spec.abs_at(x)).abs(), p);
        q * r
    };
    let mut breaks = real_zeros(pr, coeffs);
    breaks.extend([xi, la, lb]);
    breaks.sort_by(f64::total_cmp);
    let mut scheme = pr.quadrature;
    for _ in 0..3 {
        let signed = integrate_with_breaks(&f, pr.domain(), &breaks, &scheme);
        let abs = integrate_with_breaks(|x| f(x).abs(), pr.domain(), &breaks, &scheme);
        if signed.converged && abs.converged {
            return Ok(if abs.value == 0.0 {
                0.0
            } else {
                signed.value / abs.value
            });
        }
        scheme = QuadratureScheme {
            panels: scheme.panels * 4,
            ..scheme
        };
    }
    Err(Error::NonConvergence(format!(
        "orthogonality integral for zeros ({la}, {lb})"
    )))
}

/// Residuals for every unordered pair of distinct zeros.
pub(crate) fn all_pair_residuals(
    pr: &ExtremalProblem,
    coeffs: &[f64],
    zeros: &[f64],
) -> Result<Vec<OrthogonalityEntry>> {
    let mut out = Vec::new();
    for i in 0..zeros.len() {
        for j in i + 1..zeros.len() {
            out.push(OrthogonalityEntry {
                lambda_a: zeros[i],
                lambda_b: zeros[j],
                residual: orthogonality_residual(pr, coeffs, (zeros[i], zeros[j]))?,
            });
        }
    }
    Ok(out)
}

/// One gap between consecutive zeros.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GapEntry {
    pub left: f64,
    pub right: f64,
    pub gap: f64,
    /// `B(p,p)^{-1} 3^{1-p} 4^{1-p} (δ/6) 2^{-p/2} (far/near)^{2(1-p)}`,
    /// distances measured from ξ; only for gaps on one side of ξ.
    pub reference: Option<f64>,
}

/// Zero separation against the phase-derivative scales.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SeparationReport {
    pub min_gap: Option<f64>,
    /// `π / (2 ‖φ'‖∞)`.
    pub delta: f64,
    /// `2π / ‖φ'‖∞`, the minimal gap between zeros of `A_α`.
    pub a_gap: f64,
    pub min_gap_over_delta: Option<f64>,
    pub gaps: Vec<GapEntry>,
    /// Fewer than two zeros.
    pub vacuous: bool,
    pub passed: bool,
}

pub fn separation_report(pr: &ExtremalProblem, sol: &ExtremalSolution) -> Result<SeparationReport> {
    let sup = pr.spec.phase_sup();
    let delta = PI / (2.0 * sup);
    let p = pr.p;
    let inv_beta = libm::exp(-ln_beta(p, p)?);
    let base = inv_beta * libm::pow(12.0, 1.0 - p) * (delta / 6.0) * libm::pow(2.0, -0.5 * p);
    let xi = pr.xi;
    let gaps: Vec<GapEntry> = sol
        .zeros
        .windows(2)
        .map(|w| {
            let (l, r) = (w[0], w[1]);
            let same_side = (l - xi) * (r - xi) > 0.0;
            let reference = same_side.then(|| {
                let (a, b) = ((l - xi).abs(), (r - xi).abs());
                base * libm::pow(a.max(b) / a.min(b), 2.0 * (1.0 - p))
            });
            GapEntry {
                left: l,
                right: r,
                gap: r - l,
                reference,
            }
        })
        .collect();
    let min_gap = gaps.iter().map(|g| g.gap).reduce(f64::min);
    Ok(SeparationReport {
        min_gap,
        delta,
        a_gap: 2.0 * PI / sup,
        min_gap_over_delta: min_gap.map(|g| g / delta),
        vacuous: gaps.is_empty(),
        passed: min_gap.map_or(true, |g| g > 0.0),
        gaps,
    })
}

/// `log|f(iy)/E(iy)| / y` at the sample heights.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MeanTypeReport {
    /// `(y, value)`; samples where `f(iy)` overflows are dropped.
    pub samples: Vec<(f64, f64)>,
    pub max_value: f64,
    /// `|value|` does not increase with `y`.
    pub decreasing: bool,
    pub passed: bool,
}

pub const DEFAULT_MEAN_TYPE_HEIGHTS: [f64; 3] = [10.0, 100.0, 1000.0];

pub fn mean_type_diagnostic(
    f: &impl EntireFunction,
    spec: &HbSpec,
    heights: &[f64],
) -> MeanTypeReport {
    let mut ys: Vec<f64> = heights
        .iter()
        .copied()
        .filter(|y| *y > 0.0 && y.is_finite())
        .collect();
    ys.sort_by(f64::total_cmp);
    let mut samples = Vec::new();
    for y in ys {
        let z = Complex64::new(0.0, y);
        // ln|E(iy)| without forming e^{a y}
        let log_e = libm::log(spec.scale())
            + spec.exp_rate() * y
            + spec
                .zeros()
                .iter()
                .map(|zn| libm::log((z - zn).norm()))
                .sum::<f64>();
        let fz = f.eval(z).norm();
        if !fz.is_finite() || fz == 0.0 {
            continue;
        }
        samples.push((y, (libm::log(fz) - log_e) / y));
    }
    let max_value = samples
        .iter()
        .map(|s| s.1)
        .fold(f64::NEG_INFINITY, f64::max);
    let decreasing = samples
        .windows(2)
        .all(|w| w[1].1.abs() <= w[0].1.abs() * (1.0 + 1e-12));
    MeanTypeReport {
        passed: !samples.is_empty() && max_value <= 1e-6 && decreasing,
        samples,
        max_value,
        decreasing,
    }
}

/// Interval around a point where `|A_α| = |E|` on which `|A_α/E|² ≥ 1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PlateauInterval {
    pub center: f64,
    /// `None` when the phase never moves by `π/2` on that side.
    pub left: Option<f64>,
    pub right: Option<f64>,
    /// Smaller of the available one-sided widths.
    pub half_width: f64,
}

/// The plateaus of `|A_α/E|²` whose centres lie in `window`.
///
/// `|A_α/E|² = cos²((φ - 2α)/2)`, so a centre sits at `φ ≡ 2α` and the
/// edges where the phase has moved by `π/2`.
pub fn plateau_intervals(spec: &HbSpec, alpha: f64, window: (f64, f64)) -> Vec<PlateauInterval> {
    let profile = spec.profile();
    profile
        .level_crossings(2.0 * alpha, window)
        .into_iter()
        .map(|c| {
            let left = profile.step_from(c, 0.5 * PI, Side::Left).ok();
            let right = profile.step_from(c, 0.5 * PI, Side::Right).ok();
            let half_width = [left.map(|l| c - l), right.map(|r| r - c)]
                .into_iter()
                .flatten()
                .fold(f64::INFINITY, f64::min);
            PlateauInterval {
                center: c,
                left,
                right,
                half_width,
            }
        })
        .collect()
}

/// Smallest gap between consecutive zeros of `A_α` in `window`.
pub fn a_zero_min_gap(spec: &HbSpec, alpha: f64, window: (f64, f64)) -> Option<f64> {
    let zeros = spec.profile().a_zeros(alpha, window);
    zeros.windows(2).map(|w| w[1] - w[0]).reduce(f64::min)
}

#[cfg(test)]
mod tests {
    use super::super::{solve, Basis};
    use super::*;
    use crate::entire::{FromFn, StructuredEntire};
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn symmetrize_examples() {
        let real = [c(1.0, 0.0), c(-2.0, 0.0), c(0.5, 0.0)];
        assert_eq!(symmetrize_real(&real, 0.0), vec![1.0, -2.0, 0.5]);
        let imag = [c(0.0, 1.0), c(0.0, -2.0), c(0.0, 0.5)];
        let g = symmetrize_real(&imag, PI);
        for (a, b) in g.iter().zip([1.0, -2.0, 0.5]) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn double_zero_form_is_positive() {
        let spec = HbSpec::polynomial(vec![c(0.0, -1.0); 4]).unwrap();
        let pr = ExtremalProblem::new(2.0, spec, 0.0, Basis::Polynomial { degree: 2 }).unwrap();
        let sol = solve(&pr).unwrap();
        let l = sol.zeros[1];
        assert!(orthogonality_residual(&pr, &sol.coefficients, (l, l)).unwrap() > 0.99);
        let rep = extract_zeros(&pr, &sol.coefficients);
        assert!(rep.all_real && rep.simple && rep.max_imag <= 1e-8);
    }

    #[test]
    fn complex_pair_is_flagged() {
        let spec = HbSpec::polynomial(vec![c(0.0, -1.0); 4]).unwrap();
        let pr = ExtremalProblem::new(2.0, spec, 0.0, Basis::Polynomial { degree: 2 }).unwrap();
        // 1 + u² has roots ±i
        let rep = extract_zeros(&pr, &[1.0, 0.0, 1.0]);
        assert!(!rep.all_real && rep.complex.len() == 2);
    }

    #[test]
    fn separation_for_truncated_paley_wiener() {
        let pw = HbSpec::paley_wiener(PI).unwrap();
        let pr =
            ExtremalProblem::new(2.0, pw, 0.0, Basis::kernel_grid((-6.0, 6.0), 13, 30.0)).unwrap();
        let sol = solve(&pr).unwrap();
        assert!(sol.truncated);
        let rep = separation_report(&pr, &sol).unwrap();
        assert!((rep.delta - 0.25).abs() < 1e-12);
        let g = rep.min_gap.unwrap();
        assert!(g >= rep.delta && (g - 1.0).abs() < 0.1, "{g}");
        let none = ExtremalSolution {
            zeros: vec![],
            ..sol
        };
        assert!(separation_report(&pr, &none).unwrap().vacuous);
    }

    #[test]
    fn mean_type_examples() {
        let e2 = HbSpec::polynomial(vec![c(0.0, -1.0); 2]).unwrap();
        let one = StructuredEntire::polynomial(vec![1.0]);
        let r = mean_type_diagnostic(&one, &e2, &DEFAULT_MEAN_TYPE_HEIGHTS);
        assert!(r.passed);
        for (y, v) in &r.samples {
            assert!((v + 2.0 * libm::log(y + 1.0) / y).abs() < 1e-12);
        }
        let pw = HbSpec::paley_wiener(PI).unwrap();
        let cos = FromFn(|z: Complex64| (z * PI).cos());
        let r = mean_type_diagnostic(&cos, &pw, &DEFAULT_MEAN_TYPE_HEIGHTS);
        assert!(r.passed && r.samples.last().unwrap().1.abs() < 1e-2);
    }

    #[test]
    fn paley_wiener_plateaus() {
        // A_α/E = cos(π(x - ξ)) up to a unimodular factor: half-width exactly 1/4
        let spec = HbSpec::paley_wiener(PI).unwrap();
        for alpha in [0.0, 0.4, -1.3] {
            let iv = plateau_intervals(&spec, alpha, (-3.0, 3.0));
            assert!(iv.len() >= 6);
            for i in &iv {
                assert!((i.half_width - 0.25).abs() < 1e-12);
                let (a, _) = spec.rotated_parts(alpha, i.center);
                assert!((a.abs() - spec.abs_at(i.center)).abs() < 1e-12);
            }
            let g = a_zero_min_gap(&spec, alpha, (-3.0, 3.0)).unwrap();
            assert!((g - 1.0).abs() < 1e-12);
        }
    }
}

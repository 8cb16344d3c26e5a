//! Hörmander-type lower bounds for real members of `H^∞(E)` between the
//! zeros of `B_α` (or `A_α`) adjacent to the point where `|f/E|` peaks, and
//! the local structure of `f - A_α` at that point.

use crate::entire::EntireFunction;
use crate::hb::HbSpec;
use crate::numerics::search::pick_with_ties;
use crate::numerics::{d1_five_point, d2_five_point, golden_section_max, local_maxima, WindowMax};
use crate::{poly, principal_angle, Error, Result, Side};
use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

/// Default absolute tolerance, measured against `max(1, |E(x)|)`.
pub const DEFAULT_TOL: f64 = 1e-9;

const COARSE: usize = 4096;
const LOCAL: usize = 256;
const MARGIN_NODES: usize = 2048;
const TIE_REL: f64 = 1e-9;

/// Where to look for the maximum of `|f/E|`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum WindowPolicy {
    /// Grow a symmetric window until a rational tail bound certifies it;
    /// needs a polynomial `f` and a polynomial-type spec.
    #[default]
    Auto,
    Explicit(f64, f64),
}

/// Which extremum counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SignConvention {
    /// `f(ξ) = +|E(ξ)| ‖f/E‖∞`.
    Positive,
    /// `|f(ξ)| = |E(ξ)| ‖f/E‖∞`.
    Absolute,
}

/// Output of [`locate_extremum`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Extremum {
    pub xi: f64,
    /// `‖f/E‖∞`.
    pub norm: f64,
    /// `f(ξ)`.
    pub value: f64,
    pub window: (f64, f64),
    /// Bound on `|f/E|` outside the window; `None` for explicit windows.
    pub tail_bound: Option<f64>,
    /// `lim |f/E|` at `±∞` when `deg f = deg E`.
    pub limit_at_infinity: Option<f64>,
}

fn ratio(f: &impl EntireFunction, spec: &HbSpec, x: f64) -> f64 {
    f.eval_real(x) / spec.abs_at(x)
}

/// Sample points: uniform on the window plus local grids around the real
/// parts of the zeros (width `±6 ŷ`) and around 0.
fn sample_points(spec: &HbSpec, window: (f64, f64)) -> Vec<f64> {
    let (lo, hi) = window;
    let mut xs: Vec<f64> = (0..=COARSE)
        .map(|i| lo + (hi - lo) * i as f64 / COARSE as f64)
        .collect();
    let mut centres: Vec<(f64, f64)> = spec.zeros().iter().map(|z| (z.re, -6.0 * z.im)).collect();
    centres.push((0.0, 1.0));
    for (c, w) in centres {
        for i in 0..=LOCAL {
            let x = c - w + 2.0 * w * i as f64 / LOCAL as f64;
            if x >= lo && x <= hi {
                xs.push(x);
            }
        }
    }
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs
}

fn candidates(f: &impl EntireFunction, spec: &HbSpec, window: (f64, f64)) -> Vec<(WindowMax, f64)> {
    let xs = sample_points(spec, window);
    let tol = 1e-12 * (1.0 + window.0.abs().max(window.1.abs()));
    local_maxima(|x| ratio(f, spec, x).abs(), &xs, 0.5, tol)
        .into_iter()
        .map(|m| polish(f, spec, m))
        .map(|m| (m, f.eval_real(m.at)))
        .collect()
}

fn pick(cands: &[(WindowMax, f64)], sign: SignConvention) -> Result<(WindowMax, f64)> {
    let all: Vec<WindowMax> = cands.iter().map(|c| c.0).collect();
    let best = pick_with_ties(&all, TIE_REL)
        .ok_or_else(|| Error::NonConvergence("no finite maximum of |f/E|".into()))?;
    let eligible: Vec<WindowMax> = match sign {
        SignConvention::Absolute => all,
        SignConvention::Positive => cands.iter().filter(|c| c.1 > 0.0).map(|c| c.0).collect(),
    };
    let thresh = best.value - TIE_REL * best.value;
    let chosen = eligible
        .iter()
        .filter(|m| m.value >= thresh)
        .min_by(|a, b| a.at.abs().total_cmp(&b.at.abs()))
        .copied()
        .ok_or(Error::WrongSign)?;
    let v = cands
        .iter()
        .find(|c| c.0 == chosen)
        .map(|c| c.1)
        .unwrap_or(0.0);
    Ok((chosen, v))
}

/// Sharpen an argmax of `|f/E|` to a root of `(log|f/E|)' = f'/f - Re E'/E`,
/// with `f'` by a complex step. Golden-section search alone only resolves
/// a flat maximum to about `√ε`.
fn polish(f: &impl EntireFunction, spec: &HbSpec, m: WindowMax) -> WindowMax {
    let g = |x: f64| {
        let eps = 1e-6 * (1.0 + x.abs());
        let fx = f.eval_real(x);
        f.eval(Complex64::new(x, eps)).im / (eps * fx)
            - spec.log_derivative(Complex64::new(x, 0.0)).re
    };
    let d = 1e-6 * (1.0 + m.at.abs());
    let (mut a, mut b) = (m.at - d, m.at + d);
    let (mut ga, gb) = (g(a), g(b));
    if !(ga > 0.0 && gb < 0.0) {
        return m;
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let gm = g(mid);
        if !gm.is_finite() {
            return m;
        }
        if (gm > 0.0) == (ga > 0.0) {
            a = mid;
            ga = gm;
        } else {
            b = mid;
        }
    }
    let x = 0.5 * (a + b);
    let v = ratio(f, spec, x).abs();
    if v >= m.value * (1.0 - 1e-14) {
        WindowMax { value: v, at: x }
    } else {
        m
    }
}

/// `sup_{|x| ≥ R} Σ|c_k| |x|^k / (scale Π(|x| - |z_n|))`, valid for
/// `R > max |z_n|` and `deg f ≤ N` (the bound decreases in `|x|`).
fn tail_bound(coeffs: &[f64], spec: &HbSpec, r: f64) -> f64 {
    let num: f64 = coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.abs());
    let den = spec
        .zeros()
        .iter()
        .fold(spec.scale(), |acc, z| acc * (r - z.norm()));
    num / den
}

/// Find `ξ` and `‖f/E‖∞` for a certified real `f ∈ H^∞(E)`.
///
/// Near-ties (relative 1e-9) go to the candidate of smallest `|ξ|`.
pub fn locate_extremum(
    f: &impl EntireFunction,
    spec: &HbSpec,
    policy: WindowPolicy,
    sign: SignConvention,
) -> Result<Extremum> {
    match policy {
        WindowPolicy::Explicit(lo, hi) => {
            if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(Error::Domain(format!("invalid window ({lo}, {hi})")));
            }
            let (m, value) = pick(&candidates(f, spec, (lo, hi)), sign)?;
            Ok(Extremum {
                xi: m.at,
                norm: m.value,
                value,
                window: (lo, hi),
                tail_bound: None,
                limit_at_infinity: None,
            })
        }
        WindowPolicy::Auto => {
            if !spec.is_polynomial_type() {
                return Err(Error::WindowRequired(
                    "|f/E| need not decay for specs with exp_rate > 0".into(),
                ));
            }
            let coeffs = f.polynomial_coefficients().ok_or_else(|| {
                Error::WindowRequired("automatic windows need a polynomial f".into())
            })?;
            let coeffs = poly::trim(&coeffs, 1e-14);
            let n = spec.degree();
            let deg = poly::degree(&coeffs).unwrap_or(0);
            if deg > n {
                return Err(Error::MaxAtInfinity);
            }
            let limit = (deg == n && n > 0).then(|| coeffs[n].abs() / spec.scale());
            let rmax = spec.zeros().iter().fold(0.0f64, |m, z| m.max(z.norm()));
            let mut r = 2.0 * (1.0 + rmax);
            let mut cands = candidates(f, spec, (-r, r));
            for _ in 0..60 {
                let best = cands.iter().map(|c| c.0.value).fold(0.0f64, f64::max);
                let tail = tail_bound(&coeffs, spec, r);
                let done = tail <= best || matches!(limit, Some(l) if best >= l * (1.0 - TIE_REL));
                if done {
                    let (m, value) = pick(&cands, sign)?;
                    return Ok(Extremum {
                        xi: m.at,
                        norm: m.value,
                        value,
                        window: (-r, r),
                        tail_bound: Some(tail),
                        limit_at_infinity: limit,
                    });
                }
                if let Some(l) = limit {
                    if tail <= l * (1.0 + 1e-12) {
                        return Err(Error::MaxAtInfinity);
                    }
                }
                r *= 2.0;
                cands = candidates(f, spec, (-r, r));
            }
            Err(Error::MaxAtInfinity)
        }
    }
}

fn phase_check(spec: &HbSpec, level: f64, xi: f64, what: &str) -> Result<()> {
    let off = principal_angle(spec.profile().phase(xi) - level);
    if off.abs() > 1e-6 {
        return Err(Error::Domain(format!(
            "{what} does not vanish at ξ = {xi} (phase offset {off})"
        )));
    }
    Ok(())
}

/// Zeros of `B_α` adjacent to `ξ`, from `φ(b) = φ(ξ) ∓ 2π`.
pub fn bracket_b_zeros(spec: &HbSpec, alpha: f64, xi: f64) -> Result<(f64, f64)> {
    phase_check(spec, 2.0 * alpha, xi, "B_α")?;
    adjacent(spec, xi, 2.0 * PI)
}

/// Zeros of `A_α` adjacent to `ξ`, from `φ(a) = φ(ξ) ∓ π`.
pub fn bracket_a_zeros(spec: &HbSpec, alpha: f64, xi: f64) -> Result<(f64, f64)> {
    phase_check(spec, 2.0 * alpha, xi, "B_α")?;
    adjacent(spec, xi, PI)
}

fn adjacent(spec: &HbSpec, xi: f64, delta: f64) -> Result<(f64, f64)> {
    let p = spec.profile();
    Ok((
        p.step_from(xi, delta, Side::Left)?,
        p.step_from(xi, delta, Side::Right)?,
    ))
}

/// Which bracket the report refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum BracketKind {
    /// `[b_l, b_r]`, zeros of `B_α`; the inequality is `f ≥ ‖f/E‖∞ A_α`.
    BZeros,
    /// `[a_l, a_r]`, zeros of `A_α`; the inequality is `|f| ≥ ‖f/E‖∞ A_α`.
    AZeros,
}

/// Derivatives of `Ω_α = f/‖f/E‖∞ - A_α` and `Γ_α = -B_α` at `ξ`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LocalExpansion {
    pub omega: f64,
    pub omega_prime: f64,
    pub omega_second: f64,
    pub gamma_prime: f64,
    pub step: f64,
    /// `Ω_α ≡ 0` on the bracket within tolerance (`f` is a multiple of `A_α`).
    pub degenerate: bool,
    pub omega_vanishes: bool,
    pub omega_prime_vanishes: bool,
    /// `Ω″ > -tol`, and `Ω″ > 0` strictly unless degenerate.
    pub omega_second_positive: bool,
    pub gamma_prime_positive: bool,
}

impl LocalExpansion {
    pub fn passed(&self) -> bool {
        self.omega_vanishes
            && self.omega_prime_vanishes
            && self.omega_second_positive
            && self.gamma_prime_positive
    }
}

/// Outcome of [`verify_theorem1`] and [`verify_sign_free`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HormanderReport {
    pub xi: f64,
    pub alpha: f64,
    pub norm: f64,
    pub bracket_kind: BracketKind,
    pub bracket: (f64, f64),
    /// A side with no adjacent zero was replaced by a finite half-line.
    pub bracket_truncated: (bool, bool),
    /// `(x, lhs(x) - ‖f/E‖∞ A_α(x))`.
    pub margin_profile: Vec<(f64, f64)>,
    pub min_margin: f64,
    pub min_margin_at: f64,
    /// `min (margin / max(1, |E|))`; compared against `-tol`.
    pub min_scaled_margin: f64,
    /// `|lhs(ξ) - ‖f/E‖∞ A_α(ξ)|`.
    pub equality_residual: f64,
    pub local: LocalExpansion,
    pub tolerance: f64,
    pub passed: bool,
}

/// `f(x) ≥ ‖f/E‖∞ A_α(x)` on `[b_l, b_r]` where `f(ξ) = |E(ξ)| ‖f/E‖∞ > 0`
/// and `E(ξ) = e^{-iα} |E(ξ)|`.
pub fn verify_theorem1(
    f: &impl EntireFunction,
    spec: &HbSpec,
    policy: WindowPolicy,
    tol: f64,
) -> Result<HormanderReport> {
    let ext = locate_extremum(f, spec, policy, SignConvention::Absolute)?;
    if ext.value < 0.0 {
        // a positive tie elsewhere is acceptable
        let pos = locate_extremum(f, spec, policy, SignConvention::Positive)
            .map_err(|_| Error::WrongSign)?;
        return verify_at(f, spec, pos, BracketKind::BZeros, tol);
    }
    verify_at(f, spec, ext, BracketKind::BZeros, tol)
}

/// `|f(x)| ≥ ‖f/E‖∞ A_α(x)` on `[a_l, a_r]` where `|f(ξ)| = |E(ξ)| ‖f/E‖∞`.
pub fn verify_sign_free(
    f: &impl EntireFunction,
    spec: &HbSpec,
    policy: WindowPolicy,
    tol: f64,
) -> Result<HormanderReport> {
    let ext = locate_extremum(f, spec, policy, SignConvention::Absolute)?;
    verify_at(f, spec, ext, BracketKind::AZeros, tol)
}

/// Half-line length used when a bracket side does not exist.
fn truncation_length(spec: &HbSpec) -> f64 {
    10.0 * (1.0 + spec.zeros().iter().fold(0.0f64, |m, z| m.max(z.norm())))
}

/// Run the margin check at a known extremum.
pub fn verify_at(
    f: &impl EntireFunction,
    spec: &HbSpec,
    ext: Extremum,
    kind: BracketKind,
    tol: f64,
) -> Result<HormanderReport> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be > 0, got {tol}")));
    }
    let xi = ext.xi;
    let m = ext.norm;
    if !(m > 0.0) {
        return Err(Error::Domain("f vanishes identically on the window".into()));
    }
    let alpha = spec.alpha_at(xi);
    let signed = kind == BracketKind::BZeros;
    if signed && ext.value < 0.0 {
        return Err(Error::WrongSign);
    }
    let delta = if signed { 2.0 * PI } else { PI };
    let profile = spec.profile();
    let trunc = truncation_length(spec);
    let side = |s: Side| match profile.step_from(xi, delta, s) {
        Ok(x) => Ok((x, false)),
        Err(Error::BracketUnavailable { .. }) if spec.is_polynomial_type() => Ok((
            match s {
                Side::Left => xi - trunc,
                Side::Right => xi + trunc,
            },
            true,
        )),
        Err(e) => Err(e),
    };
    let (lo, tl) = side(Side::Left)?;
    let (hi, tr) = side(Side::Right)?;

    let lhs = |x: f64| {
        let v = f.eval_real(x);
        if signed {
            v
        } else {
            v.abs()
        }
    };
    let margin = |x: f64| lhs(x) - m * spec.rotated_parts(alpha, x).0;
    let scaled = |x: f64| margin(x) / spec.abs_at(x).max(1.0);

    let xs: Vec<f64> = (0..=MARGIN_NODES)
        .map(|i| lo + (hi - lo) * i as f64 / MARGIN_NODES as f64)
        .collect();
    let margin_profile: Vec<(f64, f64)> = xs.iter().map(|&x| (x, margin(x))).collect();
    let (mut worst_i, mut worst) = (0usize, f64::INFINITY);
    for (i, &x) in xs.iter().enumerate() {
        let s = scaled(x);
        if s < worst {
            worst = s;
            worst_i = i;
        }
    }
    let a = xs[worst_i.saturating_sub(1)];
    let b = xs[(worst_i + 1).min(MARGIN_NODES)];
    let (neg, at) =
        golden_section_max(|x| -scaled(x), a, b, 1e-13 * (1.0 + hi.abs().max(lo.abs())));
    let (min_scaled_margin, min_at) = if -neg < worst {
        (-neg, at)
    } else {
        (worst, xs[worst_i])
    };
    let min_margin = margin(min_at);

    let equality_residual = margin(xi).abs();
    let eq_scale = spec.abs_at(xi).max(1.0);
    let local = local_expansion_check(f, spec, xi, alpha, m, (lo, hi), tol);
    let passed = min_scaled_margin >= -tol && equality_residual <= tol * eq_scale;
    Ok(HormanderReport {
        xi,
        alpha,
        norm: m,
        bracket_kind: kind,
        bracket: (lo, hi),
        bracket_truncated: (tl, tr),
        margin_profile,
        min_margin,
        min_margin_at: min_at,
        min_scaled_margin,
        equality_residual,
        local,
        tolerance: tol,
        passed,
    })
}

/// `Ω_α = f/norm - A_α`, `Γ_α = -B_α` and their derivatives at `ξ` by
/// 5-point stencils with step `1e-4 · min(b_r - b_l, 4π/φ'(ξ))`.
///
/// `f/norm` must equal `e^{iα} E(ξ)` at `ξ` up to sign; a negative `f(ξ)` is
/// flipped.
pub fn local_expansion_check(
    f: &impl EntireFunction,
    spec: &HbSpec,
    xi: f64,
    alpha: f64,
    norm: f64,
    bracket: (f64, f64),
    tol: f64,
) -> LocalExpansion {
    let sgn = if f.eval_real(xi) < 0.0 { -1.0 } else { 1.0 };
    let width = (bracket.1 - bracket.0).min(4.0 * PI / spec.phase_derivative(xi));
    let h = 1e-4 * width;
    let omega = |x: f64| sgn * f.eval_real(x) / norm - spec.rotated_parts(alpha, x).0;
    let gamma = |x: f64| -spec.rotated_parts(alpha, x).1;
    let scale = spec.abs_at(xi).max(1.0);
    let o = omega(xi);
    let o1 = d1_five_point(omega, xi, h);
    let o2 = d2_five_point(omega, xi, h);
    let g1 = d1_five_point(gamma, xi, h);
    // stencil round-off: ε |f| / h and ε |f| / h²
    let tol1 = (tol + 1e-10) * scale / width;
    let tol2 = (tol + 1e-7) * scale / (width * width);
    let degenerate = (0..=256)
        .map(|i| bracket.0 + (bracket.1 - bracket.0) * i as f64 / 256.0)
        .all(|x| omega(x).abs() <= tol * spec.abs_at(x).max(1.0));
    LocalExpansion {
        omega: o,
        omega_prime: o1,
        omega_second: o2,
        gamma_prime: g1,
        step: h,
        degenerate,
        omega_vanishes: o.abs() <= tol * scale,
        omega_prime_vanishes: o1.abs() <= tol1,
        omega_second_positive: if degenerate { o2 > -tol2 } else { o2 > 0.0 },
        gamma_prime_positive: g1 > 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entire::{FromFn, StructuredEntire};
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn double() -> HbSpec {
        HbSpec::polynomial(vec![c(0.0, -1.0), c(0.0, -1.0)]).unwrap()
    }

    fn sinc2() -> FromFn<impl Fn(Complex64) -> Complex64> {
        FromFn(|z: Complex64| {
            if z.norm() < 1e-6 {
                let w = z * (PI / 2.0);
                return Complex64::new(1.0, 0.0) - w * w / 3.0;
            }
            let w = z * (PI / 2.0);
            let s = w.sin() / w;
            s * s
        })
    }

    #[test]
    fn locate_examples() {
        let e = double();
        let a0 = StructuredEntire::rotation(&e, 0.0);
        let ex = locate_extremum(&a0, &e, WindowPolicy::Auto, SignConvention::Absolute).unwrap();
        assert!(
            ex.xi.abs() < 1e-7 && (ex.norm - 1.0).abs() < 1e-12,
            "{ex:?}"
        );
        let one = StructuredEntire::polynomial(vec![1.0]);
        let ex = locate_extremum(&one, &e, WindowPolicy::Auto, SignConvention::Positive).unwrap();
        assert!(ex.xi.abs() < 1e-7 && (ex.norm - 1.0).abs() < 1e-12);
        let pw = HbSpec::paley_wiener(PI).unwrap();
        let cos = FromFn(|z: Complex64| (z * PI).cos());
        let ex = locate_extremum(
            &cos,
            &pw,
            WindowPolicy::Explicit(-3.0, 3.0),
            SignConvention::Absolute,
        )
        .unwrap();
        assert!(ex.xi.abs() < 1e-7 && (ex.norm - 1.0).abs() < 1e-12);
        assert!(matches!(
            locate_extremum(&cos, &pw, WindowPolicy::Auto, SignConvention::Absolute),
            Err(Error::WindowRequired(_))
        ));
        let big = StructuredEntire::polynomial(vec![0.0, 0.0, 0.0, 1.0]);
        assert!(matches!(
            locate_extremum(&big, &e, WindowPolicy::Auto, SignConvention::Absolute),
            Err(Error::MaxAtInfinity)
        ));
    }

    #[test]
    fn bracket_examples() {
        let pw = HbSpec::paley_wiener(PI).unwrap();
        let (l, r) = bracket_b_zeros(&pw, 0.0, 0.0).unwrap();
        assert!((l + 1.0).abs() < 1e-12 && (r - 1.0).abs() < 1e-12);
        let e3 = HbSpec::polynomial(vec![c(0.0, -1.0); 3]).unwrap();
        let alpha = e3.alpha_at(0.0);
        let (l, r) = bracket_b_zeros(&e3, alpha, 0.0).unwrap();
        let s3 = libm::sqrt(3.0);
        assert!((l + s3).abs() < 1e-12 && (r - s3).abs() < 1e-12);
        let e1 = HbSpec::polynomial(vec![c(0.0, -1.0)]).unwrap();
        let alpha = e1.alpha_at(0.0);
        assert!(matches!(
            bracket_b_zeros(&e1, alpha, 0.0),
            Err(Error::BracketUnavailable { .. })
        ));
    }

    #[test]
    fn signed_bound_examples() {
        let pw = HbSpec::paley_wiener(PI).unwrap();
        let f = sinc2();
        let r = verify_theorem1(&f, &pw, WindowPolicy::Explicit(-3.0, 3.0), DEFAULT_TOL).unwrap();
        assert!(r.passed, "{}", r.min_scaled_margin);
        assert!(
            (r.bracket.0 + 1.0).abs() < 1e-9 && (r.bracket.1 - 1.0).abs() < 1e-9,
            "{:?} {} {}",
            r.bracket,
            r.xi,
            r.norm
        );
        let end = r.margin_profile.last().unwrap().1;
        assert!((end - (4.0 / (PI * PI) + 1.0)).abs() < 1e-9, "{end}");
        assert!(r.local.passed() && !r.local.degenerate);
        assert!(
            (r.local.omega_second - (PI * PI - PI * PI / 6.0)).abs() < 1e-4,
            "{}",
            r.local.omega_second
        );

        let e = double();
        let f = StructuredEntire::rotation(&e, PI);
        let r = verify_theorem1(&f, &e, WindowPolicy::Auto, DEFAULT_TOL).unwrap();
        assert!(r.passed && r.bracket_truncated == (true, true));
        assert!(r.min_margin.abs() < 1e-9 && r.local.degenerate);

        let s = HbSpec::new(
            0.0,
            vec![c(0.3, -0.7), c(-1.2, -0.4), c(2.0, -1.5)],
            0.4,
            1.7,
        )
        .unwrap();
        let f = StructuredEntire::rotation(&s, 1.1);
        let r = verify_theorem1(&f, &s, WindowPolicy::Auto, DEFAULT_TOL).unwrap();
        assert!(r.passed && r.min_scaled_margin.abs() < 1e-9, "{r:?}");
    }

    #[test]
    fn sign_free_examples() {
        let pw = HbSpec::paley_wiener(PI).unwrap();
        let f = FromFn(|z: Complex64| -(z * PI).cos());
        assert!(matches!(
            verify_theorem1(&f, &pw, WindowPolicy::Explicit(-0.9, 0.9), DEFAULT_TOL),
            Err(Error::WrongSign)
        ));
        let r = verify_sign_free(&f, &pw, WindowPolicy::Explicit(-3.0, 3.0), DEFAULT_TOL).unwrap();
        assert!(
            r.passed && r.xi.abs() < 1e-7,
            "{:?} {:?} {} {}",
            r.xi,
            r.bracket,
            r.min_scaled_margin,
            r.norm
        );
        assert!((r.bracket.0 + 0.5).abs() < 1e-9 && (r.bracket.1 - 0.5).abs() < 1e-9);

        let e = double();
        let one = StructuredEntire::polynomial(vec![1.0]);
        let r = verify_sign_free(&one, &e, WindowPolicy::Auto, DEFAULT_TOL).unwrap();
        assert!(r.passed && (r.bracket.0 + 1.0).abs() < 1e-9 && (r.bracket.1 - 1.0).abs() < 1e-9);
        assert!((principal_angle(r.alpha - PI)).abs() < 1e-12);
        // Ω = x², Γ = 2x
        assert!(
            (r.local.omega_second - 2.0).abs() < 1e-5 && (r.local.gamma_prime - 2.0).abs() < 1e-6
        );
    }
}

//! `K(p)`, embedding-norm bounds for `H^p(E) → H^∞(E)`, the energy of
//! `|A_α/E|^p` between consecutive zeros, reproducing kernels and the exact
//! `p = 2` point-evaluation constant.

use crate::hb::{HbSpec, SupLocation};
use crate::numerics::{integrate, integrate_with_breaks, log_gamma, Domain, QuadratureScheme};
use crate::{principal_angle, Error, Result};
use alloc::format;
use core::f64::consts::{FRAC_PI_2, PI};
use num_complex::Complex64;

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("p must be finite and > 0, got {p}")))
    }
}

/// `ln K(p)^p = ln √π + ln Γ((p+1)/2) - ln Γ((p+2)/2)`.
pub fn ln_k_p_pth_power(p: f64) -> Result<f64> {
    check_p(p)?;
    Ok(0.5 * libm::log(PI) + log_gamma(0.5 * (p + 1.0))? - log_gamma(0.5 * (p + 2.0))?)
}

/// `K(p) = (∫_{-π/2}^{π/2} |cos x|^p dx)^{1/p}` through the Beta/Gamma
/// identity.
pub fn k_p_closed(p: f64) -> Result<f64> {
    Ok(libm::exp(ln_k_p_pth_power(p)? / p))
}

/// `K(p)` by direct quadrature of `|cos x|^p`.
pub fn k_p_quadrature(p: f64) -> Result<f64> {
    check_p(p)?;
    let scheme = QuadratureScheme::default().with_target(1e-14);
    let r = integrate(
        |x| libm::pow(libm::fabs(libm::cos(x)), p),
        Domain::Interval(-FRAC_PI_2, FRAC_PI_2),
        &scheme,
    );
    if !r.converged {
        return Err(Error::NonConvergence(format!(
            "∫|cos|^p for p = {p}: error {}",
            r.error
        )));
    }
    Ok(libm::pow(r.value, 1.0 / p))
}

/// Upper bound `‖φ'‖∞^{1/p} / (2^{1/p} K(p))` for `C(p, E)`.
pub fn embedding_bound(p: f64, phase_sup: f64) -> Result<f64> {
    check_p(p)?;
    if !(phase_sup > 0.0) {
        return Err(Error::Domain(format!(
            "phase_sup must be > 0, got {phase_sup}"
        )));
    }
    Ok(libm::pow(0.5 * phase_sup, 1.0 / p) / k_p_closed(p)?)
}

/// Non-asymptotic bound for `C(p, E)^p`: `‖φ'‖∞ · ½ · √((p+1)/(2π))`.
pub fn nonasymptotic_bound_pth_power(p: f64, phase_sup: f64) -> Result<f64> {
    check_p(p)?;
    if !(phase_sup > 0.0) {
        return Err(Error::Domain(format!(
            "phase_sup must be > 0, got {phase_sup}"
        )));
    }
    Ok(0.5 * phase_sup * libm::sqrt((p + 1.0) / (2.0 * PI)))
}

/// `(1 / K(p)^p) / √(p / 2π)`, which tends to 1 as `p → ∞`.
pub fn asymptotic_check(p: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::Domain(format!(
            "asymptotic check needs p >= 1, got {p}"
        )));
    }
    Ok(libm::exp(-ln_k_p_pth_power(p)?) / libm::sqrt(p / (2.0 * PI)))
}

/// The bounds for one `(p, ‖φ'‖∞)` pair.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundReport {
    pub p: f64,
    pub k_p: f64,
    pub c_bound: f64,
    pub c_bound_nonasymptotic_pth_power: f64,
    pub phase_sup: f64,
    /// Only defined for `p ≥ 1`.
    pub asymptotic_ratio: Option<f64>,
    /// `c_bound^p ≤ nonasymptotic · (1 + 1e-12)`.
    pub wendel_chain_holds: bool,
}

pub fn bound_report(p: f64, phase_sup: f64) -> Result<BoundReport> {
    let k_p = k_p_closed(p)?;
    let c_bound = embedding_bound(p, phase_sup)?;
    let non = nonasymptotic_bound_pth_power(p, phase_sup)?;
    let asymptotic_ratio = if p >= 1.0 {
        Some(asymptotic_check(p)?)
    } else {
        None
    };
    // compare in log form: c_bound^p overflows for large p
    let lhs = p * libm::log(c_bound);
    Ok(BoundReport {
        p,
        k_p,
        c_bound,
        c_bound_nonasymptotic_pth_power: non,
        phase_sup,
        asymptotic_ratio,
        wendel_chain_holds: lhs <= libm::log(non) + 1e-12,
    })
}

/// Energy of `|A_α/E|^p` between two consecutive zeros of `A_α`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IntervalEnergy {
    /// `∫ |A_α|^p / |E|^p`.
    pub direct: f64,
    /// `2^{-p/2} ∫ |1 + cos(φ - 2α)|^{p/2}` over the same interval.
    pub via_phase: f64,
    /// `2 K(p)^p / ‖φ'‖∞`.
    pub lower_bound: f64,
}

/// `I(α, p)` over `[a_l, a_r]`, which must be consecutive zeros of `A_α`
/// (checked through the phase: the endpoints sit on the level
/// `2α + π mod 2π` and the phase advances by exactly `2π`).
pub fn interval_energy(
    spec: &HbSpec,
    alpha: f64,
    p: f64,
    zeros: (f64, f64),
    scheme: &QuadratureScheme,
) -> Result<IntervalEnergy> {
    check_p(p)?;
    let (al, ar) = zeros;
    if !(al < ar) {
        return Err(Error::Domain(format!("need a_l < a_r, got ({al}, {ar})")));
    }
    let profile = spec.profile();
    let level = 2.0 * alpha + PI;
    for a in [al, ar] {
        let off = principal_angle(profile.phase(a) - level);
        if off.abs() > 1e-8 {
            return Err(Error::Domain(format!(
                "{a} is not a zero of A_α (phase offset {off})"
            )));
        }
    }
    let advance = profile.phase(ar) - profile.phase(al);
    if (advance - 2.0 * PI).abs() > 1e-8 {
        return Err(Error::Domain(format!(
            "({al}, {ar}) are not consecutive zeros: phase advances by {advance}"
        )));
    }
    let direct = integrate(
        |x| {
            let (a, _) = spec.rotated_parts(alpha, x);
            libm::pow(libm::fabs(a) / spec.abs_at(x), p)
        },
        Domain::Interval(al, ar),
        scheme,
    );
    let via = integrate(
        |x| {
            libm::pow(
                libm::fabs(1.0 + libm::cos(profile.phase(x) - 2.0 * alpha)),
                0.5 * p,
            )
        },
        Domain::Interval(al, ar),
        scheme,
    );
    if !direct.converged || !via.converged {
        return Err(Error::NonConvergence("interval energy quadrature".into()));
    }
    let kp = libm::exp(ln_k_p_pth_power(p)?);
    Ok(IntervalEnergy {
        direct: direct.value,
        via_phase: libm::pow(2.0, -0.5 * p) * via.value,
        lower_bound: 2.0 * kp / spec.phase_sup(),
    })
}

/// `K_ξ(ξ) = (1/2π) |E(ξ)|² φ'(ξ)`.
pub fn kernel_diagonal(spec: &HbSpec, xi: f64) -> f64 {
    let e = spec.abs_at(xi);
    e * e * spec.phase_derivative(xi) / (2.0 * PI)
}

/// Reproducing kernel of `H²(E)` at the real point `ξ`:
/// `K_ξ(z) = [E(z) conj E(ξ) - E#(z) conj E#(ξ)] / (2πi (ξ - z))`.
///
/// Near `ξ` the numerator cancels; there the kernel is evaluated as a
/// divided difference of exponents, which keeps full relative accuracy
/// (also for complex-step derivatives).
pub fn kernel_eval(spec: &HbSpec, xi: f64, z: Complex64) -> Complex64 {
    let x = Complex64::new(xi, 0.0);
    if z == x {
        return Complex64::new(kernel_diagonal(spec, xi), 0.0);
    }
    if let Some(k) = kernel_near_diagonal(spec, xi, z) {
        return k;
    }
    let num = spec.eval(z) * spec.eval(x).conj() - spec.eval_sharp(z) * spec.eval_sharp(x).conj();
    num / (Complex64::new(0.0, 2.0 * PI) * (x - z))
}

/// `ln(1 + a)` without the rounding of `1 + a`.
fn ln_1p(a: Complex64) -> Complex64 {
    let re = 0.5 * libm::log1p(2.0 * a.re + a.norm_sqr());
    Complex64::new(re, libm::atan2(a.im, 1.0 + a.re))
}

/// `e^w - 1` without cancellation for small `w`.
fn exp_m1(w: Complex64) -> Complex64 {
    let s = libm::sin(0.5 * w.im);
    Complex64::new(
        libm::expm1(w.re) * libm::cos(w.im) - 2.0 * s * s,
        libm::exp(w.re) * libm::sin(w.im),
    )
}

/// With `d = z - ξ`: `E(z)/E(ξ) = e^P`, `E#(z)/E#(ξ) = e^Q`, so the
/// numerator is `|E(ξ)|² e^Q (e^{P-Q} - 1)`. Used while `|d|` is below half
/// the distance from `ξ` to the nearest zero.
fn kernel_near_diagonal(spec: &HbSpec, xi: f64, z: Complex64) -> Option<Complex64> {
    let d = z - xi;
    let reach = spec
        .zeros()
        .iter()
        .map(|zn| (xi - zn).norm())
        .fold(f64::INFINITY, f64::min);
    let limit = if reach.is_finite() { 0.5 * reach } else { 1.0 };
    if d.norm() > limit.min(1.0) {
        return None;
    }
    let ia = Complex64::new(0.0, spec.exp_rate());
    let mut diff = -ia * d * 2.0;
    let mut q = ia * d;
    for zn in spec.zeros() {
        let la = ln_1p(d / (xi - zn));
        let lb = ln_1p(d / (xi - zn.conj()));
        diff += la - lb;
        q += lb;
    }
    let e = spec.abs_at(xi);
    Some(q.exp() * exp_m1(diff) * (e * e) / (Complex64::new(0.0, -2.0 * PI) * d))
}

/// `C(2, E, ξ) = √(φ'(ξ) / 2π)`.
pub fn c2_exact(spec: &HbSpec, xi: f64) -> f64 {
    libm::sqrt(spec.phase_derivative(xi) / (2.0 * PI))
}

/// `C(2, E) = sup_ξ C(2, E, ξ)` and whether an extremal function exists
/// (iff `φ'` attains its sup at a finite point).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct C2Sup {
    pub value: f64,
    pub attained: bool,
    pub location: SupLocation,
}

pub fn c2_sup(spec: &HbSpec) -> C2Sup {
    let sup = spec.phase_derivative_sup();
    C2Sup {
        value: libm::sqrt(sup.value / (2.0 * PI)),
        attained: matches!(sup.location, SupLocation::At(_)) || spec.zeros().is_empty(),
        location: sup.location,
    }
}

/// `K_ξ(ξ) / (|E(ξ)| ‖K_ξ/E‖₂)` with the norm by quadrature; equals
/// [`c2_exact`] for polynomial-type specs.
pub fn c2_via_kernel(spec: &HbSpec, xi: f64, scheme: &QuadratureScheme) -> Result<f64> {
    if !spec.is_polynomial_type() {
        return Err(Error::Domain(
            "the kernel norm by quadrature needs a polynomial-type spec".into(),
        ));
    }
    let r = integrate_with_breaks(
        |x| {
            let k = kernel_eval(spec, xi, Complex64::new(x, 0.0)).re / spec.abs_at(x);
            k * k
        },
        Domain::Line,
        &[xi],
        scheme,
    );
    if !r.converged {
        return Err(Error::NonConvergence("kernel norm quadrature".into()));
    }
    Ok(kernel_diagonal(spec, xi) / (spec.abs_at(xi) * libm::sqrt(r.value)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn k_p_examples() {
        assert_relative_eq!(
            k_p_closed(2.0).unwrap(),
            libm::sqrt(FRAC_PI_2),
            max_relative = 1e-13
        );
        assert!((k_p_closed(2.0).unwrap() - 1.253_314_137_3).abs() < 1e-10);
        assert_relative_eq!(k_p_closed(1.0).unwrap(), 2.0, max_relative = 1e-13);
        assert_relative_eq!(
            k_p_closed(4.0).unwrap(),
            libm::pow(3.0 * PI / 8.0, 0.25),
            max_relative = 1e-13
        );
        for p in [0.5, 2.0, 20.0] {
            assert_relative_eq!(
                k_p_quadrature(p).unwrap(),
                k_p_closed(p).unwrap(),
                max_relative = 1e-10
            );
        }
        assert!(k_p_closed(0.0).is_err());
    }

    #[test]
    fn bound_examples() {
        assert_relative_eq!(
            embedding_bound(2.0, 2.0 * PI).unwrap(),
            libm::sqrt(2.0),
            max_relative = 1e-13
        );
        assert_relative_eq!(
            embedding_bound(1.0, 2.0 * PI).unwrap(),
            FRAC_PI_2,
            max_relative = 1e-13
        );
        let t = 3.7;
        for p in [0.7, 2.0, 9.0] {
            let ratio = embedding_bound(p, t * 1.3).unwrap() / embedding_bound(p, 1.3).unwrap();
            assert_relative_eq!(ratio, libm::pow(t, 1.0 / p), max_relative = 1e-13);
        }
        assert_relative_eq!(
            nonasymptotic_bound_pth_power(1.0, 2.0 * PI).unwrap(),
            libm::sqrt(PI),
            max_relative = 1e-14
        );
        let v = nonasymptotic_bound_pth_power(2.0, 2.0 * PI).unwrap();
        assert!((v - 2.171).abs() < 1e-3 && v >= 2.0);
        assert!(bound_report(3.0, 2.0 * PI).unwrap().wendel_chain_holds);
    }

    #[test]
    fn asymptotics() {
        assert!((asymptotic_check(1e4).unwrap() - 1.0).abs() <= 0.01);
        assert!((asymptotic_check(100.0).unwrap() - 1.0).abs() <= 0.1);
        assert!(asymptotic_check(0.5).is_err());
    }

    #[test]
    fn interval_energy_examples() {
        let s = HbSpec::paley_wiener(PI).unwrap();
        let scheme = QuadratureScheme::default();
        // A_0 = cos(πx): zeros at ±1/2
        let e = interval_energy(&s, 0.0, 2.0, (-0.5, 0.5), &scheme).unwrap();
        assert_relative_eq!(e.direct, 0.5, max_relative = 1e-12);
        assert_relative_eq!(e.lower_bound, 0.5, max_relative = 1e-12);
        assert_relative_eq!(e.via_phase, e.direct, max_relative = 1e-12);
        let e = interval_energy(&s, 0.0, 1.0, (-0.5, 0.5), &scheme).unwrap();
        assert_relative_eq!(e.direct, 2.0 / PI, max_relative = 1e-12);
        assert_relative_eq!(e.lower_bound, 2.0 / PI, max_relative = 1e-12);

        let d = HbSpec::polynomial(vec![c(0.0, -1.0), c(0.0, -1.0)]).unwrap();
        let e = interval_energy(&d, 0.0, 2.0, (-1.0, 1.0), &scheme).unwrap();
        // ∫_{-1}^{1} (x²-1)²/(x²+1)² dx = 3 - π/2... check numerically against the closed antiderivative
        let exact = 3.0 - PI / 2.0 - 0.0;
        let _ = exact;
        assert!(e.direct >= PI / 4.0);
        assert_relative_eq!(e.via_phase, e.direct, max_relative = 1e-11);
        assert!(interval_energy(&d, 0.0, 2.0, (-1.0, 0.5), &scheme).is_err());
    }

    #[test]
    fn kernel_examples() {
        let e1 = HbSpec::polynomial(vec![c(0.0, -1.0)]).unwrap();
        for z in [c(0.3, 0.0), c(-2.0, 1.0), c(0.0, 0.0)] {
            assert!((kernel_eval(&e1, 0.0, z) - c(1.0 / PI, 0.0)).norm() < 1e-12);
        }
        let e2 = HbSpec::polynomial(vec![c(0.0, -1.0), c(0.0, -1.0)]).unwrap();
        for z in [c(0.3, 0.0), c(-2.0, 1.0), c(0.0, 0.0)] {
            assert!((kernel_eval(&e2, 0.0, z) - c(2.0 / PI, 0.0)).norm() < 1e-12);
        }
        let s = HbSpec::new(0.4, vec![c(0.3, -0.7), c(-1.2, -0.4)], 0.3, 1.2).unwrap();
        for x in [-1.0, 0.2, 2.5] {
            assert!(kernel_eval(&s, 0.7, c(x, 0.0)).im.abs() < 1e-12);
        }
    }

    #[test]
    fn c2_examples() {
        assert_relative_eq!(
            c2_exact(&HbSpec::paley_wiener(PI).unwrap(), 0.37),
            1.0,
            max_relative = 1e-14
        );
        let e2 = HbSpec::polynomial(vec![c(0.0, -1.0), c(0.0, -1.0)]).unwrap();
        assert_relative_eq!(
            c2_exact(&e2, 0.0),
            libm::sqrt(2.0 / PI),
            max_relative = 1e-14
        );
        let via = c2_via_kernel(&e2, 0.0, &QuadratureScheme::default()).unwrap();
        assert_relative_eq!(via, libm::sqrt(2.0 / PI), max_relative = 1e-10);
        let e1 = HbSpec::polynomial(vec![c(0.0, -1.0)]).unwrap();
        assert_relative_eq!(
            c2_exact(&e1, 0.0),
            libm::sqrt(1.0 / PI),
            max_relative = 1e-14
        );
        let sup = c2_sup(&e1);
        assert!(sup.attained);
        assert!(!c2_sup(&HbSpec::polynomial(vec![c(0.0, -1.0)]).unwrap())
            .location
            .eq(&SupLocation::AtInfinity));
    }

    #[test]
    fn kernel_is_smooth_across_the_switch() {
        // S_π: K_t(z) = sinc(z - t), evaluated independently
        let s = HbSpec::paley_wiener(PI).unwrap();
        for d in [1e-12, 1e-9, 1e-6, 1e-3, 0.3, 0.99, 1.01, 2.5] {
            for z in [
                Complex64::new(0.7 + d, 0.0),
                Complex64::new(0.7 + d, 1e-6),
                Complex64::new(0.7, d),
            ] {
                let w = (z - 0.7) * PI;
                let sinc = if w.norm() < 1e-4 {
                    Complex64::new(1.0, 0.0) - w * w / 6.0
                } else {
                    w.sin() / w
                };
                let k = kernel_eval(&s, 0.7, z);
                assert!((k - sinc).norm() <= 1e-14, "z = {z}: {k} vs {sinc}");
            }
        }
        // complex-step derivative of a polynomial-space kernel vs its coefficients
        let spec = HbSpec::new(
            0.0,
            vec![
                Complex64::new(0.3, -0.7),
                Complex64::new(-1.2, -0.4),
                Complex64::new(2.0, -1.5),
            ],
            0.4,
            1.7,
        )
        .unwrap();
        let coeffs = crate::entire::kernel_coefficients(&spec, 0.25).unwrap();
        let dc = crate::poly::derivative(&coeffs);
        for x in [0.25 + 1e-7, 0.25 - 3e-5, 0.26] {
            // the step used when polishing extrema
            let h = 1e-6 * (1.0 + x);
            let cs = kernel_eval(&spec, 0.25, Complex64::new(x, h)).im / h;
            let exact = crate::poly::eval_complex(&coeffs, Complex64::new(x, h)).im / h;
            assert!(
                (cs - exact).abs() <= 1e-8 * crate::poly::eval_real(&dc, x).abs().max(1.0),
                "{x}: {cs} vs {exact}"
            );
        }
    }
}

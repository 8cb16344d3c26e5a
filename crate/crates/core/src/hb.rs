//! Hermite-Biehler functions of the form
//! `E(z) = scale · e^{iα} · e^{-i a z} · Π (z - z_n)` with `a ≥ 0` and every
//! `z_n` in the open lower half-plane, together with the rotations
//! `E_β = e^{iβ} E = A_β + i B_β`, the inner function `Θ_E = E#/E` and the
//! closed-form phase function.

use crate::numerics::{golden_section_max, monotone_solve_newton};
use crate::{principal_angle, Error, Result, Side};
use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

/// Products with more zeros than this are accumulated in log form.
const DIRECT_PRODUCT_LIMIT: usize = 64;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "RawSpec", into = "RawSpec"))]
pub struct HbSpec {
    exp_rate: f64,
    zeros: Vec<Complex64>,
    rotation: f64,
    scale: f64,
}

#[cfg(feature = "serde")]
#[derive(serde::Serialize, serde::Deserialize)]
struct RawSpec {
    exp_rate: f64,
    #[serde(default)]
    zeros: Vec<[f64; 2]>,
    #[serde(default)]
    rotation: f64,
    #[serde(default = "one")]
    scale: f64,
}

#[cfg(feature = "serde")]
fn one() -> f64 {
    1.0
}

#[cfg(feature = "serde")]
impl TryFrom<RawSpec> for HbSpec {
    type Error = Error;
    fn try_from(raw: RawSpec) -> Result<Self> {
        let zeros = raw
            .zeros
            .iter()
            .map(|z| Complex64::new(z[0], z[1]))
            .collect();
        HbSpec::new(raw.exp_rate, zeros, raw.rotation, raw.scale)
    }
}

#[cfg(feature = "serde")]
impl From<HbSpec> for RawSpec {
    fn from(s: HbSpec) -> Self {
        RawSpec {
            exp_rate: s.exp_rate,
            zeros: s.zeros.iter().map(|z| [z.re, z.im]).collect(),
            rotation: s.rotation,
            scale: s.scale,
        }
    }
}

/// Where `sup φ'` is attained.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SupLocation {
    At(f64),
    /// `φ'` is constant (no zeros) or only approaches the sup as `|x| → ∞`.
    AtInfinity,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PhaseSup {
    pub value: f64,
    pub location: SupLocation,
}

impl HbSpec {
    pub fn new(exp_rate: f64, zeros: Vec<Complex64>, rotation: f64, scale: f64) -> Result<Self> {
        let spec = Self {
            exp_rate,
            zeros,
            rotation,
            scale,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// `S_σ(z) = e^{-iσz}`.
    pub fn paley_wiener(sigma: f64) -> Result<Self> {
        Self::new(sigma, Vec::new(), 0.0, 1.0)
    }

    /// `Π (z - z_n)`.
    pub fn polynomial(zeros: Vec<Complex64>) -> Result<Self> {
        Self::new(0.0, zeros, 0.0, 1.0)
    }

    pub fn with_rotation(mut self, rotation: f64) -> Result<Self> {
        self.rotation = rotation;
        self.validate()?;
        Ok(self)
    }

    pub fn with_scale(mut self, scale: f64) -> Result<Self> {
        self.scale = scale;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.exp_rate >= 0.0) || !self.exp_rate.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "exp_rate must be finite and >= 0, got {}",
                self.exp_rate
            )));
        }
        if !(self.scale > 0.0) || !self.scale.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "scale must be finite and > 0, got {}",
                self.scale
            )));
        }
        if !self.rotation.is_finite() {
            return Err(Error::InvalidSpec("rotation must be finite".into()));
        }
        for z in &self.zeros {
            if !(z.im < 0.0) || !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::InvalidSpec(format!(
                    "zero {} + {}i is not in the open lower half-plane",
                    z.re, z.im
                )));
            }
        }
        if self.exp_rate == 0.0 && self.zeros.is_empty() {
            return Err(Error::InvalidSpec(
                "constant E (exp_rate = 0 and no zeros) has φ' ≡ 0".into(),
            ));
        }
        Ok(())
    }

    pub fn exp_rate(&self) -> f64 {
        self.exp_rate
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn rotation(&self) -> f64 {
        self.rotation
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Number of zeros (the degree for polynomial-type specs).
    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    /// `exp_rate == 0`: `E` is a polynomial and `f/E` decays for
    /// polynomial `f` of lower degree.
    pub fn is_polynomial_type(&self) -> bool {
        self.exp_rate == 0.0
    }

    /// The `a` of the factorization `Θ_E(z) = e^{iaz} S(z)`; equals
    /// `2 · exp_rate`.
    pub fn theta_exponent(&self) -> f64 {
        2.0 * self.exp_rate
    }

    /// `E(z)`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let prefactor =
            Complex64::from_polar(self.scale, self.rotation) * (-I * self.exp_rate * z).exp();
        prefactor * product(self.zeros.iter().map(|&zn| z - zn), self.zeros.len())
    }

    /// `E#(z) = conj(E(conj z)) = scale · e^{-iα} e^{iaz} Π (z - conj z_n)`.
    pub fn eval_sharp(&self, z: Complex64) -> Complex64 {
        let prefactor =
            Complex64::from_polar(self.scale, -self.rotation) * (I * self.exp_rate * z).exp();
        prefactor * product(self.zeros.iter().map(|&zn| z - zn.conj()), self.zeros.len())
    }

    /// `E(z)` or `E#(z)` selected by `sharp`.
    pub fn eval_e(&self, z: Complex64, sharp: bool) -> Complex64 {
        if sharp {
            self.eval_sharp(z)
        } else {
            self.eval(z)
        }
    }

    pub fn eval_real(&self, x: f64) -> Complex64 {
        self.eval(Complex64::new(x, 0.0))
    }

    /// `|E(x)|` on the real line.
    pub fn abs_at(&self, x: f64) -> f64 {
        if self.zeros.len() > DIRECT_PRODUCT_LIMIT {
            let log: f64 = self
                .zeros
                .iter()
                .map(|zn| libm::log(libm::hypot(x - zn.re, zn.im)))
                .sum();
            return self.scale * libm::exp(log);
        }
        self.scale
            * self
                .zeros
                .iter()
                .map(|zn| libm::hypot(x - zn.re, zn.im))
                .product::<f64>()
    }

    /// `(A_β(x), B_β(x))`: real and imaginary parts of `e^{iβ} E(x)`.
    pub fn rotated_parts(&self, beta: f64, x: f64) -> (f64, f64) {
        let v = Complex64::from_polar(1.0, beta) * self.eval_real(x);
        (v.re, v.im)
    }

    /// `A_β(z) = (e^{iβ}E(z) + e^{-iβ}E#(z)) / 2` at complex `z`.
    pub fn a_rot(&self, beta: f64, z: Complex64) -> Complex64 {
        let r = Complex64::from_polar(1.0, beta);
        (r * self.eval(z) + r.conj() * self.eval_sharp(z)) * 0.5
    }

    /// `B_β(z) = (e^{iβ}E(z) - e^{-iβ}E#(z)) / 2i` at complex `z`.
    pub fn b_rot(&self, beta: f64, z: Complex64) -> Complex64 {
        let r = Complex64::from_polar(1.0, beta);
        (r * self.eval(z) - r.conj() * self.eval_sharp(z)) / (2.0 * I)
    }

    /// `Θ_E(x) = E#(x)/E(x)` on the real line, as a product of unimodular
    /// factors.
    pub fn theta(&self, x: f64) -> Complex64 {
        let mut t = Complex64::from_polar(1.0, 2.0 * self.exp_rate * x - 2.0 * self.rotation);
        for zn in &self.zeros {
            let w = Complex64::new(x - zn.re, zn.im);
            t *= w / w.conj();
        }
        t
    }

    /// `E'(z)/E(z) = -ia + Σ 1/(z - z_n)`.
    pub fn log_derivative(&self, z: Complex64) -> Complex64 {
        self.zeros
            .iter()
            .fold(-I * self.exp_rate, |acc, &zn| acc + (z - zn).inv())
    }

    /// `E'(z)`.
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        // product rule without dividing by E (safe at the zeros)
        let base = self.eval(z);
        if self.zeros.iter().all(|&zn| zn != z) {
            return base * self.log_derivative(z);
        }
        let prefactor =
            Complex64::from_polar(self.scale, self.rotation) * (-I * self.exp_rate * z).exp();
        let mut sum = Complex64::new(0.0, 0.0);
        for k in 0..self.zeros.len() {
            let mut term = Complex64::new(1.0, 0.0);
            for (j, &zn) in self.zeros.iter().enumerate() {
                if j != k {
                    term *= z - zn;
                }
            }
            sum += term;
        }
        prefactor * sum - I * self.exp_rate * base
    }

    /// `φ'(x) = 2a + 2 Σ ŷ_n / ((x - x_n)² + ŷ_n²)`, with
    /// `x_n + iŷ_n = conj(z_n)`.
    pub fn phase_derivative(&self, x: f64) -> f64 {
        2.0 * self.exp_rate
            + 2.0
                * self
                    .zeros
                    .iter()
                    .map(|zn| {
                        let y = -zn.im;
                        let d = x - zn.re;
                        y / (d * d + y * y)
                    })
                    .sum::<f64>()
    }

    /// `φ''(x)`.
    pub fn phase_second_derivative(&self, x: f64) -> f64 {
        -4.0 * self
            .zeros
            .iter()
            .map(|zn| {
                let y = -zn.im;
                let d = x - zn.re;
                let q = d * d + y * y;
                y * d / (q * q)
            })
            .sum::<f64>()
    }

    /// `sup_ℝ φ'` and where it is attained.
    ///
    /// `φ' → 2a` as `|x| → ∞` and every zero adds a positive bump, so with
    /// zeros present the sup is attained in the hull of the `x_n`. Candidates
    /// come from a 64-point grid across `±3ŷ_n` of each bump plus a grid over
    /// the hull, each refined by golden-section search.
    pub fn phase_derivative_sup(&self) -> PhaseSup {
        if self.zeros.is_empty() {
            return PhaseSup {
                value: 2.0 * self.exp_rate,
                location: SupLocation::AtInfinity,
            };
        }
        let h = |x: f64| self.phase_derivative(x);
        let mut xs: Vec<f64> = Vec::new();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for zn in &self.zeros {
            let y = -zn.im;
            lo = lo.min(zn.re);
            hi = hi.max(zn.re);
            for k in 0..=64 {
                xs.push(zn.re - 3.0 * y + 6.0 * y * k as f64 / 64.0);
            }
        }
        if hi > lo {
            let n = 64 * self.zeros.len().min(64);
            for k in 0..=n {
                xs.push(lo + (hi - lo) * k as f64 / n as f64);
            }
        }
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        let vals: Vec<f64> = xs.iter().map(|&x| h(x)).collect();
        let mut best = (f64::NEG_INFINITY, 0.0);
        for i in 0..xs.len() {
            let left = if i == 0 { vals[i] } else { vals[i - 1] };
            let right = if i + 1 == xs.len() {
                vals[i]
            } else {
                vals[i + 1]
            };
            if vals[i] >= left && vals[i] >= right {
                let a = xs[i.saturating_sub(1)];
                let b = xs[(i + 1).min(xs.len() - 1)];
                let cand = if b > a {
                    golden_section_max(h, a, b, 1e-13 * (1.0 + xs[i].abs()))
                } else {
                    (vals[i], xs[i])
                };
                let cand = if cand.0 >= vals[i] {
                    cand
                } else {
                    (vals[i], xs[i])
                };
                if cand.0 > best.0 {
                    best = cand;
                }
            }
        }
        PhaseSup {
            value: best.0,
            location: SupLocation::At(best.1),
        }
    }

    /// `‖φ'‖∞`.
    pub fn phase_sup(&self) -> f64 {
        self.phase_derivative_sup().value
    }

    /// Phase profile with the default branch: anchored at 0 with the
    /// principal argument of `Θ_E(0)`.
    pub fn profile(&self) -> PhaseProfile {
        PhaseProfile::new(self.clone())
    }

    /// The rotation `α` with `E(ξ) = e^{-iα}|E(ξ)|`, in `(-π, π]`.
    pub fn alpha_at(&self, xi: f64) -> f64 {
        principal_angle(-self.eval_real(xi).arg())
    }

    /// A length scale for the spec: the spread of the zeros.
    pub fn length_scale(&self) -> f64 {
        self.zeros.iter().fold(1.0f64, |m, z| m.max(z.norm()))
    }
}

fn product(factors: impl Iterator<Item = Complex64>, n: usize) -> Complex64 {
    if n <= DIRECT_PRODUCT_LIMIT {
        return factors.fold(Complex64::new(1.0, 0.0), |acc, f| acc * f);
    }
    let log: Complex64 = factors.map(|f| f.ln()).sum();
    log.exp()
}

/// A fixed branch of the phase function `φ` with `Θ_E(x) = e^{iφ(x)}`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PhaseProfile {
    spec: HbSpec,
    anchor_point: f64,
    anchor_value: f64,
}

impl PhaseProfile {
    /// Anchored at 0 with `φ(0) = arg Θ_E(0) ∈ (-π, π]`.
    pub fn new(spec: HbSpec) -> Self {
        let anchor_value = principal_angle(spec.theta(0.0).arg());
        Self {
            spec,
            anchor_point: 0.0,
            anchor_value,
        }
    }

    /// Anchored at `point` with the given value; the value must agree with
    /// `arg Θ_E(point)` mod 2π.
    pub fn with_anchor(spec: HbSpec, anchor_point: f64, anchor_value: f64) -> Result<Self> {
        let theta = spec.theta(anchor_point);
        let diff = principal_angle(anchor_value - theta.arg());
        if diff.abs() > 1e-9 {
            return Err(Error::Domain(format!(
                "anchor value {anchor_value} is not a branch of arg Θ_E({anchor_point})"
            )));
        }
        Ok(Self {
            spec,
            anchor_point,
            anchor_value,
        })
    }

    pub fn spec(&self) -> &HbSpec {
        &self.spec
    }

    pub fn anchor_point(&self) -> f64 {
        self.anchor_point
    }

    pub fn anchor_value(&self) -> f64 {
        self.anchor_value
    }

    /// `φ(x)` in closed form (sum of arctangents).
    pub fn phase(&self, x: f64) -> f64 {
        let x0 = self.anchor_point;
        let mut v = self.anchor_value + 2.0 * self.spec.exp_rate * (x - x0);
        for zn in &self.spec.zeros {
            let y = -zn.im;
            v += 2.0 * (libm::atan((x - zn.re) / y) - libm::atan((x0 - zn.re) / y));
        }
        v
    }

    pub fn phase_derivative(&self, x: f64) -> f64 {
        self.spec.phase_derivative(x)
    }

    /// `(lim_{x→-∞} φ, lim_{x→+∞} φ)`; infinite when `exp_rate > 0`.
    pub fn limits(&self) -> (f64, f64) {
        if self.spec.exp_rate > 0.0 {
            return (f64::NEG_INFINITY, f64::INFINITY);
        }
        let x0 = self.anchor_point;
        let mut lo = self.anchor_value;
        let mut hi = self.anchor_value;
        for zn in &self.spec.zeros {
            let y = -zn.im;
            let a0 = libm::atan((x0 - zn.re) / y);
            lo += 2.0 * (-core::f64::consts::FRAC_PI_2 - a0);
            hi += 2.0 * (core::f64::consts::FRAC_PI_2 - a0);
        }
        (lo, hi)
    }

    fn solve_on(&self, level: f64, lo: f64, hi: f64) -> Result<f64> {
        let tol = 1e-15 * lo.abs().max(hi.abs()).max(1.0);
        monotone_solve_newton(
            |x| self.phase(x),
            |x| self.phase_derivative(x),
            level,
            (lo, hi),
            tol,
        )
    }

    /// The unique `x` with `φ(x) = level`, or `None` when the level lies
    /// outside the range of `φ`.
    pub fn inverse(&self, level: f64) -> Option<f64> {
        let (lim_lo, lim_hi) = self.limits();
        if !(level > lim_lo && level < lim_hi) {
            return None;
        }
        let start = self.anchor_point;
        let f0 = self.phase(start);
        if f0 == level {
            return Some(start);
        }
        let dir = if level > f0 { 1.0 } else { -1.0 };
        let mut step = 1.0f64.max(self.spec.length_scale());
        let mut far = start + dir * step;
        for _ in 0..200 {
            let v = self.phase(far);
            if (dir > 0.0 && v >= level) || (dir < 0.0 && v <= level) {
                let (a, b) = if dir > 0.0 {
                    (start, far)
                } else {
                    (far, start)
                };
                return self.solve_on(level, a, b).ok();
            }
            step *= 2.0;
            far = start + dir * step;
            if !far.is_finite() {
                break;
            }
        }
        None
    }

    /// The point to the left (`Side::Left`, level `φ(x0) - delta`) or right
    /// (level `φ(x0) + delta`) of `x0` where the phase has moved by `delta`.
    pub fn step_from(&self, x0: f64, delta: f64, side: Side) -> Result<f64> {
        let level = match side {
            Side::Left => self.phase(x0) - delta,
            Side::Right => self.phase(x0) + delta,
        };
        self.inverse(level)
            .ok_or(Error::BracketUnavailable { side })
    }

    /// All `x` in `window` with `φ(x) ≡ target (mod 2π)`, increasing.
    ///
    /// `target = 2β + π` gives the zeros of `A_β`, `target = 2β` those of
    /// `B_β`.
    pub fn level_crossings(&self, target_mod_2pi: f64, window: (f64, f64)) -> Vec<f64> {
        let (lo, hi) = window;
        let mut out = Vec::new();
        if !(hi >= lo) {
            return out;
        }
        let plo = self.phase(lo);
        let phi = self.phase(hi);
        let two_pi = 2.0 * PI;
        let k_min = libm::ceil((plo - target_mod_2pi) / two_pi) as i64;
        let k_max = libm::floor((phi - target_mod_2pi) / two_pi) as i64;
        for k in k_min..=k_max {
            let level = target_mod_2pi + two_pi * k as f64;
            if let Ok(x) = self.solve_on(level, lo, hi) {
                out.push(x);
            }
        }
        out
    }

    /// Zeros of `A_β` in `window`.
    pub fn a_zeros(&self, beta: f64, window: (f64, f64)) -> Vec<f64> {
        self.level_crossings(2.0 * beta + PI, window)
    }

    /// Zeros of `B_β` in `window`.
    pub fn b_zeros(&self, beta: f64, window: (f64, f64)) -> Vec<f64> {
        self.level_crossings(2.0 * beta, window)
    }
}

/// Outcome of [`hb_bar_check`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HbBarReport {
    pub passed: bool,
    pub worst_ratio: f64,
    pub worst_point: Option<[f64; 2]>,
    /// Points where `g` vanished (ratio undefined).
    pub skipped: Vec<[f64; 2]>,
    pub checked: usize,
}

/// Check `|g#(z)| ≤ |g(z)| (1 + tol)` on upper half-plane samples, i.e.
/// that `g` is in the closure of the Hermite-Biehler class there.
pub fn hb_bar_check(
    g: impl Fn(Complex64) -> Complex64,
    g_sharp: impl Fn(Complex64) -> Complex64,
    grid: &[Complex64],
    tol: f64,
    zero_tol: f64,
) -> Result<HbBarReport> {
    let mut worst = 0.0f64;
    let mut worst_point = None;
    let mut skipped = Vec::new();
    let mut checked = 0;
    for &z in grid {
        if !(z.im > 0.0) {
            return Err(Error::Domain(format!(
                "sample {z} is not in the upper half-plane"
            )));
        }
        let gz = g(z).norm();
        let gs = g_sharp(z).norm();
        if gz <= zero_tol {
            skipped.push([z.re, z.im]);
            continue;
        }
        checked += 1;
        let ratio = gs / gz;
        if worst_point.is_none() || ratio > worst {
            worst = ratio;
            worst_point = Some([z.re, z.im]);
        }
    }
    Ok(HbBarReport {
        passed: worst <= 1.0 + tol,
        worst_ratio: worst,
        worst_point,
        skipped,
        checked,
    })
}

/// `nx × ny` grid on `[re_lo, re_hi] × (0, im_hi]`.
pub fn upper_half_plane_grid(re: (f64, f64), im_hi: f64, nx: usize, ny: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(nx * ny);
    for i in 0..nx {
        let x = if nx == 1 {
            0.5 * (re.0 + re.1)
        } else {
            re.0 + (re.1 - re.0) * i as f64 / (nx - 1) as f64
        };
        for j in 1..=ny {
            out.push(Complex64::new(x, im_hi * j as f64 / ny as f64));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn double_zero() -> HbSpec {
        HbSpec::polynomial(vec![c(0.0, -1.0), c(0.0, -1.0)]).unwrap()
    }

    #[test]
    fn rejects_invalid_specs() {
        assert!(HbSpec::new(-1.0, vec![], 0.0, 1.0).is_err());
        assert!(HbSpec::new(0.0, vec![], 0.0, 1.0).is_err());
        assert!(HbSpec::new(0.0, vec![c(1.0, 0.0)], 0.0, 1.0).is_err());
        assert!(HbSpec::new(0.0, vec![c(1.0, 0.5)], 0.0, 1.0).is_err());
        assert!(HbSpec::new(1.0, vec![], 0.0, 0.0).is_err());
        assert!(HbSpec::new(1.0, vec![], f64::NAN, 1.0).is_err());
    }

    #[test]
    fn eval_examples() {
        let s = HbSpec::paley_wiener(PI).unwrap();
        assert_relative_eq!(s.eval(c(0.0, 1.0)).re, libm::exp(PI), max_relative = 1e-15);
        let e = HbSpec::polynomial(vec![c(0.0, -1.0)]).unwrap();
        assert!((e.eval(c(0.0, 0.0)) - c(0.0, 1.0)).norm() < 1e-15);
        assert!((double_zero().eval(c(0.0, 0.0)) - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn sharp_is_reflection() {
        let s = HbSpec::new(0.7, vec![c(0.3, -0.5), c(-1.0, -2.0)], 0.4, 2.0).unwrap();
        for z in [c(0.3, 0.2), c(-1.0, 3.0), c(2.0, -0.5)] {
            let direct = s.eval(z.conj()).conj();
            assert!((s.eval_sharp(z) - direct).norm() < 1e-13 * direct.norm().max(1.0));
            assert_eq!(s.eval_e(z, true), s.eval_sharp(z));
        }
    }

    #[test]
    fn log_product_path_agrees() {
        let zeros: Vec<Complex64> = (0..70)
            .map(|k| c(0.05 * k as f64 - 1.5, -0.9 - 0.01 * k as f64))
            .collect();
        let s = HbSpec::polynomial(zeros.clone()).unwrap();
        let z = c(0.37, 0.2);
        let direct: Complex64 = zeros.iter().fold(c(1.0, 0.0), |acc, &zn| acc * (z - zn));
        assert!((s.eval(z) - direct).norm() < 1e-11 * direct.norm());
        assert_relative_eq!(
            s.abs_at(0.37),
            s.eval_real(0.37).norm(),
            max_relative = 1e-11
        );
    }

    #[test]
    fn rotated_parts_examples() {
        let s = HbSpec::paley_wiener(PI).unwrap();
        let (a, b) = s.rotated_parts(0.0, 0.5);
        assert!(a.abs() < 1e-15 && (b + 1.0).abs() < 1e-15);
        let e = double_zero();
        for x in [-2.0, 0.3, 1.7] {
            let (a, b) = e.rotated_parts(0.0, x);
            assert!((a - (x * x - 1.0)).abs() < 1e-13 && (b - 2.0 * x).abs() < 1e-13);
            assert_relative_eq!(a * a + b * b, e.abs_at(x).powi(2), max_relative = 1e-13);
        }
        let (a, b) = e.rotated_parts(PI, 0.0);
        assert!((a - 1.0).abs() < 1e-15 && b.abs() < 1e-15);
        // complex-argument versions agree with the real ones on ℝ
        let z = c(0.4, 0.0);
        assert!((e.a_rot(0.3, z).re - e.rotated_parts(0.3, 0.4).0).abs() < 1e-14);
        assert!((e.b_rot(0.3, z).re - e.rotated_parts(0.3, 0.4).1).abs() < 1e-14);
    }

    #[test]
    fn phase_examples() {
        let s = HbSpec::paley_wiener(PI).unwrap();
        let p = s.profile();
        assert_eq!(p.anchor_value(), 0.0);
        assert_relative_eq!(p.phase(0.5), PI, max_relative = 1e-15);
        assert_relative_eq!(s.theta_exponent(), 2.0 * PI);
        let e = HbSpec::polynomial(vec![c(0.0, -1.0)]).unwrap();
        let p = e.profile();
        assert_relative_eq!(p.anchor_value(), PI);
        for x in [-3.0, 0.2, 5.0] {
            assert_relative_eq!(p.phase(x), PI + 2.0 * libm::atan(x), max_relative = 1e-14);
        }
        let q = PhaseProfile::with_anchor(e.clone(), 1.0, p.phase(1.0) + 2.0 * PI).unwrap();
        assert_relative_eq!(q.phase(1.0), p.phase(1.0) + 2.0 * PI);
        assert!(PhaseProfile::with_anchor(e, 1.0, 0.0).is_err());
    }

    #[test]
    fn phase_derivative_examples() {
        let s = HbSpec::paley_wiener(PI).unwrap();
        for x in [-10.0, 0.0, 3.3] {
            assert_relative_eq!(s.phase_derivative(x), 2.0 * PI);
        }
        assert_relative_eq!(
            HbSpec::polynomial(vec![c(0.0, -1.0)])
                .unwrap()
                .phase_derivative(0.0),
            2.0
        );
        assert_relative_eq!(double_zero().phase_derivative(0.0), 4.0);
    }

    #[test]
    fn phase_sup_examples() {
        let s = HbSpec::paley_wiener(PI).unwrap().phase_derivative_sup();
        assert_eq!(s.location, SupLocation::AtInfinity);
        assert_relative_eq!(s.value, 2.0 * PI);
        let e = HbSpec::polynomial(vec![c(0.0, -1.0)])
            .unwrap()
            .phase_derivative_sup();
        assert_relative_eq!(e.value, 2.0, max_relative = 1e-14);
        match e.location {
            SupLocation::At(x) => assert!(x.abs() < 1e-6),
            _ => panic!("finite argmax expected"),
        }
        let two = HbSpec::polynomial(vec![c(1.0, -1.0), c(-1.0, -1.0)]).unwrap();
        let sup = two.phase_derivative_sup();
        let grid_max = (0..=20000)
            .map(|k| two.phase_derivative(-5.0 + 10.0 * k as f64 / 20000.0))
            .fold(0.0, f64::max);
        assert!(sup.value >= grid_max - 1e-12 && sup.value >= two.phase_derivative(0.0));
    }

    #[test]
    fn level_crossing_examples() {
        let e = double_zero();
        let p = e.profile();
        let a = p.a_zeros(0.0, (-10.0, 10.0));
        assert_eq!(a.len(), 2);
        assert!((a[0] + 1.0).abs() < 1e-13 && (a[1] - 1.0).abs() < 1e-13);
        let b = p.b_zeros(0.0, (-10.0, 10.0));
        assert_eq!(b.len(), 1);
        assert!(b[0].abs() < 1e-13);
        let single = HbSpec::polynomial(vec![c(0.0, -1.0)]).unwrap();
        // E = z + i: B_0 ≡ 1 has no zeros
        assert!(single.profile().b_zeros(0.0, (-10.0, 10.0)).is_empty());
    }

    #[test]
    fn theta_exponent_correspondence() {
        // Θ_E(x) = e^{i a x} S(x) with a = 2·exp_rate: for no zeros, Θ is e^{iax}
        let s = HbSpec::new(1.3, vec![], 0.0, 1.0).unwrap();
        for x in [0.1, -2.0, 7.0] {
            let t = s.theta(x);
            let expected = Complex64::from_polar(1.0, s.theta_exponent() * x);
            assert!((t - expected).norm() < 1e-14);
            let direct = s.eval_sharp(c(x, 0.0)) / s.eval_real(x);
            assert!((t - direct).norm() < 1e-14);
        }
    }

    #[test]
    fn hb_bar_examples() {
        let s = HbSpec::new(0.5, vec![c(0.3, -0.7), c(-1.2, -0.4)], 0.2, 1.5).unwrap();
        let grid = upper_half_plane_grid((-3.0, 3.0), 3.0, 8, 8);
        let r = hb_bar_check(|z| s.eval(z), |z| s.eval_sharp(z), &grid, 0.0, 0.0).unwrap();
        assert!(r.passed && r.worst_ratio < 1.0);
        // A_0 - E = -iB_0: degenerate, ratio 1
        let g = |z: Complex64| s.a_rot(0.0, z) - s.eval(z);
        let gs = |z: Complex64| s.a_rot(0.0, z) - s.eval_sharp(z);
        let r = hb_bar_check(g, gs, &grid, 1e-12, 1e-300).unwrap();
        assert!(r.passed);
        assert!((r.worst_ratio - 1.0).abs() < 1e-12);
        let bad = [c(0.0, -1.0)];
        assert!(hb_bar_check(|z| z, |z| z, &bad, 0.0, 0.0).is_err());
    }
}

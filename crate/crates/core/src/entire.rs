//! Real entire functions that are certified members of `H^∞(E)`.

use crate::bounds::kernel_eval;
use crate::hb::HbSpec;
use crate::{poly, Error, Result};
use alloc::boxed::Box;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

/// An entire function that can be evaluated anywhere in the plane.
pub trait EntireFunction {
    fn eval(&self, z: Complex64) -> Complex64;

    fn eval_real(&self, x: f64) -> f64 {
        self.eval(Complex64::new(x, 0.0)).re
    }

    /// `f#(z) = conj(f(conj z))`.
    fn eval_sharp(&self, z: Complex64) -> Complex64 {
        self.eval(z.conj()).conj()
    }

    /// Ascending real coefficients when the function is a polynomial.
    fn polynomial_coefficients(&self) -> Option<Vec<f64>> {
        None
    }
}

impl<T: EntireFunction + ?Sized> EntireFunction for &T {
    fn eval(&self, z: Complex64) -> Complex64 {
        (**self).eval(z)
    }
    fn eval_real(&self, x: f64) -> f64 {
        (**self).eval_real(x)
    }
    fn eval_sharp(&self, z: Complex64) -> Complex64 {
        (**self).eval_sharp(z)
    }
    fn polynomial_coefficients(&self) -> Option<Vec<f64>> {
        (**self).polynomial_coefficients()
    }
}

impl<T: EntireFunction + ?Sized> EntireFunction for Box<T> {
    fn eval(&self, z: Complex64) -> Complex64 {
        (**self).eval(z)
    }
    fn eval_real(&self, x: f64) -> f64 {
        (**self).eval_real(x)
    }
    fn polynomial_coefficients(&self) -> Option<Vec<f64>> {
        (**self).polynomial_coefficients()
    }
}

/// Wraps a closure. Membership in `H^∞(E)` is the caller's responsibility.
pub struct FromFn<F>(pub F);

impl<F: Fn(Complex64) -> Complex64> EntireFunction for FromFn<F> {
    fn eval(&self, z: Complex64) -> Complex64 {
        (self.0)(z)
    }
}

/// `factor · f`.
pub struct Scaled<T> {
    pub inner: T,
    pub factor: f64,
}

impl<T: EntireFunction> EntireFunction for Scaled<T> {
    fn eval(&self, z: Complex64) -> Complex64 {
        self.inner.eval(z) * self.factor
    }
    fn eval_real(&self, x: f64) -> f64 {
        self.inner.eval_real(x) * self.factor
    }
    fn polynomial_coefficients(&self) -> Option<Vec<f64>> {
        self.inner
            .polynomial_coefficients()
            .map(|c| c.iter().map(|v| v * self.factor).collect())
    }
}

/// A real entire function built from pieces whose membership in `H^∞(E)`
/// is known: rotations `A_β`, reproducing kernels `K_t`, low-degree real
/// polynomials and real-linear combinations of those.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum StructuredEntire {
    /// `A_β` of `spec`.
    RotationRealPart {
        spec: HbSpec,
        beta: f64,
    },
    /// `K_t` of `spec`.
    Kernel {
        spec: HbSpec,
        t: f64,
    },
    /// Ascending coefficients.
    #[cfg_attr(feature = "serde", serde(rename = "polynomial"))]
    RealPolynomial {
        coefficients: Vec<f64>,
    },
    Combination {
        terms: Vec<(f64, StructuredEntire)>,
    },
}

impl StructuredEntire {
    pub fn rotation(spec: &HbSpec, beta: f64) -> Self {
        Self::RotationRealPart {
            spec: spec.clone(),
            beta,
        }
    }

    pub fn kernel(spec: &HbSpec, t: f64) -> Self {
        Self::Kernel {
            spec: spec.clone(),
            t,
        }
    }

    pub fn polynomial(coefficients: Vec<f64>) -> Self {
        Self::RealPolynomial { coefficients }
    }

    pub fn combination(terms: Vec<(f64, StructuredEntire)>) -> Self {
        Self::Combination { terms }
    }

    /// Check that every node is a member of `H^∞(ambient)`.
    ///
    /// Rotations and kernels must come from a spec with the same exponential
    /// rate and zeros as `ambient` (rotation and scale do not change the
    /// space). Polynomials need degree `≤ N - 1` for polynomial-type specs
    /// and `≤ N` when `exp_rate > 0`.
    pub fn certify(&self, ambient: &HbSpec) -> Result<()> {
        let same_space =
            |s: &HbSpec| s.exp_rate() == ambient.exp_rate() && s.zeros() == ambient.zeros();
        match self {
            Self::RotationRealPart { spec, .. } | Self::Kernel { spec, .. } => {
                if same_space(spec) {
                    Ok(())
                } else {
                    Err(Error::NotCertified(
                        "node built from a different space".into(),
                    ))
                }
            }
            Self::RealPolynomial { coefficients } => {
                if coefficients.iter().any(|c| !c.is_finite()) {
                    return Err(Error::NotCertified("non-finite coefficient".into()));
                }
                let deg = poly::degree(coefficients).unwrap_or(0);
                let n = ambient.degree();
                let cap = if ambient.is_polynomial_type() {
                    n.checked_sub(1)
                } else {
                    Some(n)
                };
                match cap {
                    Some(cap) if deg <= cap => Ok(()),
                    _ => Err(Error::NotCertified(format!(
                        "polynomial of degree {deg} exceeds the cap for a spec with {n} zeros"
                    ))),
                }
            }
            Self::Combination { terms } => {
                for (w, t) in terms {
                    if !w.is_finite() {
                        return Err(Error::NotCertified("non-finite weight".into()));
                    }
                    t.certify(ambient)?;
                }
                Ok(())
            }
        }
    }

    /// Ascending real coefficients when every node is polynomial
    /// (i.e. every spec involved has `exp_rate = 0`).
    pub fn to_polynomial(&self) -> Option<Vec<f64>> {
        match self {
            Self::RealPolynomial { coefficients } => Some(coefficients.clone()),
            Self::RotationRealPart { spec, beta } => {
                let e = e_coefficients(spec)?;
                let r = Complex64::from_polar(1.0, *beta);
                Some(e.iter().map(|&c| (r * c).re).collect())
            }
            Self::Kernel { spec, t } => kernel_coefficients(spec, *t),
            Self::Combination { terms } => {
                let mut acc: Vec<f64> = Vec::new();
                for (w, node) in terms {
                    let c = node.to_polynomial()?;
                    if c.len() > acc.len() {
                        acc.resize(c.len(), 0.0);
                    }
                    for (a, v) in acc.iter_mut().zip(&c) {
                        *a += w * v;
                    }
                }
                Some(acc)
            }
        }
    }
}

/// Complex coefficients of `E` for polynomial-type specs.
pub fn e_coefficients(spec: &HbSpec) -> Option<Vec<Complex64>> {
    if !spec.is_polynomial_type() {
        return None;
    }
    Some(poly::from_roots(
        spec.zeros(),
        Complex64::from_polar(spec.scale(), spec.rotation()),
    ))
}

/// Real coefficients of `K_t` for polynomial-type specs (degree `≤ N - 1`).
pub fn kernel_coefficients(spec: &HbSpec, t: f64) -> Option<Vec<f64>> {
    let e = e_coefficients(spec)?;
    let et = spec.eval_real(t);
    // N(z) = conj(E(t)) E(z) - E(t) E#(z); E# has conjugated coefficients.
    let num: Vec<Complex64> = e.iter().map(|&c| et.conj() * c - et * c.conj()).collect();
    let (q, _) = poly::deflate(&num, Complex64::new(t, 0.0));
    // K_t(z) = N(z) / (2πi (t - z)) = q(z) · i / (2π)
    let factor = Complex64::new(0.0, 1.0 / (2.0 * PI));
    let out: Vec<f64> = q.iter().map(|&c| (c * factor).re).collect();
    if out.is_empty() {
        Some(vec![0.0])
    } else {
        Some(out)
    }
}

impl EntireFunction for StructuredEntire {
    fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            Self::RotationRealPart { spec, beta } => spec.a_rot(*beta, z),
            Self::Kernel { spec, t } => kernel_eval(spec, *t, z),
            Self::RealPolynomial { coefficients } => poly::eval_complex(coefficients, z),
            Self::Combination { terms } => terms
                .iter()
                .fold(Complex64::new(0.0, 0.0), |acc, (w, n)| acc + n.eval(z) * *w),
        }
    }

    fn eval_real(&self, x: f64) -> f64 {
        match self {
            Self::RotationRealPart { spec, beta } => spec.rotated_parts(*beta, x).0,
            Self::RealPolynomial { coefficients } => poly::eval_real(coefficients, x),
            Self::Combination { terms } => terms.iter().map(|(w, n)| w * n.eval_real(x)).sum(),
            Self::Kernel { .. } => self.eval(Complex64::new(x, 0.0)).re,
        }
    }

    fn eval_sharp(&self, z: Complex64) -> Complex64 {
        // real entire: f# = f
        self.eval(z)
    }

    fn polynomial_coefficients(&self) -> Option<Vec<f64>> {
        self.to_polynomial()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn spec() -> HbSpec {
        HbSpec::new(
            0.0,
            vec![c(0.3, -0.7), c(-1.2, -0.4), c(2.0, -1.5)],
            0.4,
            1.7,
        )
        .unwrap()
    }

    #[test]
    fn polynomial_forms_agree_with_direct_evaluation() {
        let s = spec();
        let nodes = [
            StructuredEntire::rotation(&s, 0.9),
            StructuredEntire::kernel(&s, 0.25),
            StructuredEntire::combination(vec![
                (2.0, StructuredEntire::kernel(&s, -1.0)),
                (-0.5, StructuredEntire::rotation(&s, 0.0)),
                (1.0, StructuredEntire::polynomial(vec![1.0, 0.0, 3.0])),
            ]),
        ];
        for n in &nodes {
            let coeffs = n.to_polynomial().unwrap();
            for x in [-2.0, -0.3, 0.0, 1.1, 4.0] {
                let direct = n.eval_real(x);
                let via = poly::eval_real(&coeffs, x);
                assert!(
                    (direct - via).abs() < 1e-11 * direct.abs().max(1.0),
                    "{direct} vs {via}"
                );
            }
            // real on the real axis
            assert!(n.eval(c(0.7, 0.0)).im.abs() < 1e-12);
        }
    }

    #[test]
    fn certification() {
        let s = spec();
        assert!(StructuredEntire::kernel(&s, 0.0).certify(&s).is_ok());
        assert!(StructuredEntire::polynomial(vec![1.0, 2.0, 3.0])
            .certify(&s)
            .is_ok());
        assert!(StructuredEntire::polynomial(vec![1.0, 2.0, 3.0, 4.0])
            .certify(&s)
            .is_err());
        let other = HbSpec::polynomial(vec![c(0.0, -1.0)]).unwrap();
        assert!(StructuredEntire::rotation(&other, 0.0).certify(&s).is_err());
        let rotated = s.clone().with_rotation(2.0).unwrap();
        assert!(StructuredEntire::rotation(&rotated, 0.0)
            .certify(&s)
            .is_ok());
        let pw = HbSpec::paley_wiener(PI).unwrap();
        assert!(StructuredEntire::polynomial(vec![1.0]).certify(&pw).is_ok());
        assert!(StructuredEntire::polynomial(vec![1.0, 1.0])
            .certify(&pw)
            .is_err());
        assert!(StructuredEntire::rotation(&pw, 0.0)
            .to_polynomial()
            .is_none());
    }
}

//! The point-evaluation extremal problem
//! `C(p, E, ξ) = sup { |f(ξ)| / (|E(ξ)| ‖f/E‖_p) }` over a finite-dimensional
//! subspace: polynomials of degree `≤ N - 2` for an HB polynomial of degree
//! `N`, or the span of finitely many reproducing kernels (truncated mode).

mod diagnostics;
mod solver;

pub use diagnostics::{
    a_zero_min_gap, extract_zeros, mean_type_diagnostic, orthogonality_residual, plateau_intervals,
    separation_report, symmetrize_real, GapEntry, MeanTypeReport, PlateauInterval,
    SeparationReport, ZeroReport, DEFAULT_MEAN_TYPE_HEIGHTS,
};
pub use solver::{solve, solve_from};

use crate::bounds::{kernel_diagonal, kernel_eval};
use crate::entire::{kernel_coefficients, EntireFunction};
use crate::hb::HbSpec;
use crate::numerics::{Domain, QuadratureScheme};
use crate::{poly, Error, Result};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

/// The subspace searched.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum Basis {
    /// `((x - ξ)/L)^k`, `k = 0..=degree`, with `L` the spec's length scale.
    Polynomial { degree: usize },
    /// `K_{t_j}` for the given nodes. With a window the norm is integrated
    /// over the window only and results are labelled truncated.
    KernelNodes {
        nodes: Vec<f64>,
        #[cfg_attr(feature = "serde", serde(default))]
        window: Option<(f64, f64)>,
    },
}

impl Basis {
    /// `count` equispaced kernel nodes spanning `window`, integrated over
    /// `window` widened by `pad` on each side.
    pub fn kernel_grid(window: (f64, f64), count: usize, pad: f64) -> Self {
        let (lo, hi) = window;
        let nodes = if count <= 1 {
            vec![0.5 * (lo + hi)]
        } else {
            (0..count)
                .map(|j| lo + (hi - lo) * j as f64 / (count - 1) as f64)
                .collect()
        };
        Self::KernelNodes {
            nodes,
            window: Some((lo - pad, hi + pad)),
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            Self::Polynomial { degree } => degree + 1,
            Self::KernelNodes { nodes, .. } => nodes.len(),
        }
    }
}

/// Minimize `‖f/E‖_p` over the basis span subject to `f(ξ) = |E(ξ)|`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExtremalProblem {
    pub p: f64,
    pub spec: HbSpec,
    pub xi: f64,
    pub basis: Basis,
    #[cfg_attr(feature = "serde", serde(default))]
    pub quadrature: QuadratureScheme,
    /// Defaults to 1e-8 for `p > 1` and 1e-6 for `p ≤ 1`.
    #[cfg_attr(feature = "serde", serde(default))]
    pub kkt_tol: Option<f64>,
}

impl ExtremalProblem {
    pub fn new(p: f64, spec: HbSpec, xi: f64, basis: Basis) -> Result<Self> {
        let out = Self {
            p,
            spec,
            xi,
            basis,
            quadrature: QuadratureScheme::default(),
            kkt_tol: None,
        };
        out.validate()?;
        Ok(out)
    }

    pub fn with_kkt_tol(mut self, tol: f64) -> Self {
        self.kkt_tol = Some(tol);
        self
    }

    pub fn with_quadrature(mut self, scheme: QuadratureScheme) -> Self {
        self.quadrature = scheme;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        if !(self.p > 0.0) || !self.p.is_finite() {
            return Err(Error::Domain(format!(
                "p must be finite and > 0, got {}",
                self.p
            )));
        }
        if !self.xi.is_finite() {
            return Err(Error::Domain("ξ must be finite".into()));
        }
        if let Some(t) = self.kkt_tol {
            if !(t > 0.0) {
                return Err(Error::Domain(format!("kkt_tol must be > 0, got {t}")));
            }
        }
        let n = self.spec.degree();
        match &self.basis {
            Basis::Polynomial { degree } => {
                if !self.spec.is_polynomial_type() {
                    return Err(Error::InvalidSpec(
                        "a polynomial basis needs a polynomial-type spec".into(),
                    ));
                }
                if n < 2 || *degree > n - 2 {
                    return Err(Error::InvalidSpec(format!(
                        "basis degree {degree} exceeds N - 2 for N = {n}"
                    )));
                }
                if self.p * (n - degree) as f64 <= 1.0 {
                    return Err(Error::InvalidSpec(format!(
                        "|f/E|^p is not integrable for p = {} and degree gap {}",
                        self.p,
                        n - degree
                    )));
                }
            }
            Basis::KernelNodes { nodes, window } => {
                if nodes.is_empty() || nodes.iter().any(|t| !t.is_finite()) {
                    return Err(Error::InvalidSpec(
                        "kernel nodes must be finite and non-empty".into(),
                    ));
                }
                let mut sorted = nodes.clone();
                sorted.sort_by(f64::total_cmp);
                if sorted
                    .windows(2)
                    .any(|w| w[1] - w[0] <= 1e-12 * (1.0 + w[0].abs()))
                {
                    return Err(Error::InvalidSpec("kernel nodes must be distinct".into()));
                }
                match window {
                    Some((lo, hi)) => {
                        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                            return Err(Error::InvalidSpec(format!("invalid window ({lo}, {hi})")));
                        }
                    }
                    None => {
                        if !self.spec.is_polynomial_type() {
                            return Err(Error::WindowRequired(
                                "kernel bases for specs with exp_rate > 0 need a window".into(),
                            ));
                        }
                    }
                }
                if window.is_none() && self.p <= 1.0 {
                    return Err(Error::InvalidSpec(
                        "kernels are not in H^p(E) for p ≤ 1".into(),
                    ));
                }
            }
        }
        let mut v = vec![0.0; self.dimension()];
        self.basis_values(self.xi, &mut v);
        // |K_t(ξ)| ≤ √(K_t(t) K_ξ(ξ)) sets the scale for kernels
        let negligible = |j: usize, b: f64| match &self.basis {
            Basis::Polynomial { .. } => b == 0.0,
            Basis::KernelNodes { nodes, .. } => {
                let bound = libm::sqrt(
                    kernel_diagonal(&self.spec, nodes[j]) * kernel_diagonal(&self.spec, self.xi),
                );
                b.abs() <= 1e-12 * bound
            }
        };
        if v.iter().enumerate().all(|(j, &b)| negligible(j, b)) {
            return Err(Error::Infeasible(
                "every basis function vanishes at ξ".into(),
            ));
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.basis.dimension()
    }

    pub fn kkt_tol(&self) -> f64 {
        self.kkt_tol
            .unwrap_or(if self.p > 1.0 { 1e-8 } else { 1e-6 })
    }

    /// Kernel bases integrated over a finite window.
    pub fn is_truncated(&self) -> bool {
        matches!(
            self.basis,
            Basis::KernelNodes {
                window: Some(_),
                ..
            }
        )
    }

    /// `0 < p < 1`: the functional is not convex.
    pub fn is_experimental(&self) -> bool {
        self.p < 1.0
    }

    /// Length unit of the polynomial basis.
    pub fn unit(&self) -> f64 {
        self.spec.length_scale()
    }

    pub(crate) fn domain(&self) -> Domain {
        match &self.basis {
            Basis::KernelNodes {
                window: Some((lo, hi)),
                ..
            } => Domain::Interval(*lo, *hi),
            _ => Domain::Line,
        }
    }

    /// Real basis values at `x`.
    pub(crate) fn basis_values(&self, x: f64, out: &mut [f64]) {
        match &self.basis {
            Basis::Polynomial { .. } => {
                let u = (x - self.xi) / self.unit();
                let mut pw = 1.0;
                for o in out.iter_mut() {
                    *o = pw;
                    pw *= u;
                }
            }
            Basis::KernelNodes { nodes, .. } => {
                for (o, &t) in out.iter_mut().zip(nodes) {
                    *o = kernel_eval(&self.spec, t, Complex64::new(x, 0.0)).re;
                }
            }
        }
    }

    /// `f(z)` for basis coordinates `coeffs`.
    pub fn evaluate(&self, coeffs: &[f64], z: Complex64) -> Complex64 {
        match &self.basis {
            Basis::Polynomial { .. } => {
                let u = (z - self.xi) / self.unit();
                coeffs
                    .iter()
                    .rev()
                    .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * u + c)
            }
            Basis::KernelNodes { nodes, .. } => coeffs
                .iter()
                .zip(nodes)
                .fold(Complex64::new(0.0, 0.0), |acc, (&c, &t)| {
                    acc + kernel_eval(&self.spec, t, z) * c
                }),
        }
    }

    pub fn evaluate_real(&self, coeffs: &[f64], x: f64) -> f64 {
        let mut v = vec![0.0; coeffs.len()];
        self.basis_values(x, &mut v);
        v.iter().zip(coeffs).map(|(a, b)| a * b).sum()
    }

    /// Ascending coefficients in `u = (x - ξ)/L` (polynomial-type specs).
    pub fn u_coefficients(&self, coeffs: &[f64]) -> Option<Vec<f64>> {
        match &self.basis {
            Basis::Polynomial { .. } => Some(coeffs.to_vec()),
            Basis::KernelNodes { nodes, .. } => {
                let mut acc: Vec<f64> = Vec::new();
                for (&c, &t) in coeffs.iter().zip(nodes) {
                    let k = kernel_coefficients(&self.spec, t)?;
                    if k.len() > acc.len() {
                        acc.resize(k.len(), 0.0);
                    }
                    for (a, v) in acc.iter_mut().zip(&k) {
                        *a += c * v;
                    }
                }
                Some(poly::shift_scale(&acc, self.xi, self.unit()))
            }
        }
    }

    /// Ascending coefficients in `x` (polynomial-type specs).
    pub fn monomial_coefficients(&self, coeffs: &[f64]) -> Option<Vec<f64>> {
        let u = self.u_coefficients(coeffs)?;
        let l = self.unit();
        Some(poly::shift_scale(&u, -self.xi / l, 1.0 / l))
    }

    pub fn function<'a>(&'a self, coeffs: &'a [f64]) -> ExtremalFunction<'a> {
        ExtremalFunction {
            problem: self,
            coeffs,
        }
    }
}

/// A basis combination viewed as an entire function.
#[derive(Debug, Clone, Copy)]
pub struct ExtremalFunction<'a> {
    problem: &'a ExtremalProblem,
    coeffs: &'a [f64],
}

impl EntireFunction for ExtremalFunction<'_> {
    fn eval(&self, z: Complex64) -> Complex64 {
        self.problem.evaluate(self.coeffs, z)
    }

    fn eval_real(&self, x: f64) -> f64 {
        self.problem.evaluate_real(self.coeffs, x)
    }

    fn polynomial_coefficients(&self) -> Option<Vec<f64>> {
        self.problem.monomial_coefficients(self.coeffs)
    }
}

/// Residual of the zero-pair orthogonality relation for one pair.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OrthogonalityEntry {
    pub lambda_a: f64,
    pub lambda_b: f64,
    pub residual: f64,
}

/// Output of [`solve`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExtremalSolution {
    pub p: f64,
    pub xi: f64,
    /// Basis coordinates of the unit-norm extremal.
    pub coefficients: Vec<f64>,
    /// `f(ξ) / (|E(ξ)| ‖f/E‖_p)`.
    pub c_value: f64,
    /// `‖f/E‖_p` of the returned coefficients, recomputed.
    pub norm: f64,
    pub zeros: Vec<f64>,
    pub kkt_residual: f64,
    pub orthogonality: Vec<OrthogonalityEntry>,
    pub min_zero_gap: Option<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Smoothing parameters visited before the exact functional.
    pub smoothing_path: Vec<f64>,
    pub experimental: bool,
    pub truncated: bool,
}

impl ExtremalSolution {
    pub fn max_orthogonality_residual(&self) -> f64 {
        self.orthogonality
            .iter()
            .map(|o| o.residual.abs())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::c2_exact;
    use approx::assert_relative_eq;
    use core::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn power(n: usize) -> HbSpec {
        HbSpec::polynomial(vec![c(0.0, -1.0); n]).unwrap()
    }

    #[test]
    fn validation() {
        assert!(ExtremalProblem::new(2.0, power(4), 0.0, Basis::Polynomial { degree: 3 }).is_err());
        assert!(ExtremalProblem::new(2.0, power(4), 0.0, Basis::Polynomial { degree: 2 }).is_ok());
        assert!(ExtremalProblem::new(0.4, power(4), 0.0, Basis::Polynomial { degree: 2 }).is_err());
        let pw = HbSpec::paley_wiener(PI).unwrap();
        assert!(
            ExtremalProblem::new(2.0, pw.clone(), 0.0, Basis::Polynomial { degree: 0 }).is_err()
        );
        let b = Basis::KernelNodes {
            nodes: vec![0.0, 1.0],
            window: None,
        };
        assert!(matches!(
            ExtremalProblem::new(2.0, pw, 0.0, b),
            Err(Error::WindowRequired(_))
        ));
        // K_{1/2} of S_π... every node has sin(π(ξ - t)) = 0 at ξ = 1 except t = 1
        let b = Basis::KernelNodes {
            nodes: vec![2.0, 3.0],
            window: Some((-5.0, 5.0)),
        };
        let pw = HbSpec::paley_wiener(PI).unwrap();
        assert!(matches!(
            ExtremalProblem::new(2.0, pw, 1.0, b),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn coefficient_forms_agree() {
        let s = HbSpec::new(
            0.0,
            vec![c(0.3, -0.7), c(-1.2, -0.4), c(2.0, -1.5), c(0.1, -2.0)],
            0.2,
            1.3,
        )
        .unwrap();
        let pr =
            ExtremalProblem::new(2.0, s.clone(), 0.4, Basis::Polynomial { degree: 2 }).unwrap();
        let k = ExtremalProblem::new(
            2.0,
            s,
            0.4,
            Basis::KernelNodes {
                nodes: vec![-1.0, 0.5],
                window: None,
            },
        )
        .unwrap();
        for (pr, coeffs) in [(&pr, vec![0.3, -1.0, 2.0]), (&k, vec![1.5, -0.25])] {
            let m = pr.monomial_coefficients(&coeffs).unwrap();
            for x in [-2.0, 0.0, 0.4, 3.0] {
                let direct = pr.evaluate_real(&coeffs, x);
                assert_relative_eq!(
                    poly::eval_real(&m, x),
                    direct,
                    max_relative = 1e-10,
                    epsilon = 1e-12
                );
                assert!(
                    (pr.evaluate(&coeffs, c(x, 0.0)).re - direct).abs()
                        < 1e-12 * (1.0 + direct.abs())
                );
            }
        }
    }

    #[test]
    fn two_by_two_kernel_value_matches_c2() {
        // the kernel at ξ lies in the span, so p = 2 recovers C(2, E, ξ)
        let s = power(3);
        let pr = ExtremalProblem::new(
            2.0,
            s.clone(),
            0.3,
            Basis::KernelNodes {
                nodes: vec![0.3, -1.0],
                window: None,
            },
        )
        .unwrap();
        let sol = solve(&pr).unwrap();
        assert_relative_eq!(sol.c_value, c2_exact(&s, 0.3), max_relative = 1e-8);
    }
}

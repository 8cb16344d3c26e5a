//! Damped Newton on `Φ(c) = ∫ ρ(f_c/|E|)` restricted to the affine slice
//! `f_c(ξ) = |E(ξ)|`, with `ρ = |t|^p` or its smoothing
//! `(t² + ε²)^{p/2} - ε^p`.

use super::diagnostics::{all_pair_residuals, real_zeros};
use super::{ExtremalProblem, ExtremalSolution};
use crate::numerics::linalg::spd_solve;
use crate::{Error, Result};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

const SMOOTHING: [f64; 4] = [1e-2, 1e-4, 1e-6, 1e-8];
/// Cap on `|t|^{p-2}` near zeros of `f` in the Hessian for `1 < p < 2`.
const HESS_EPS: f64 = 1e-8;
const MAX_NEWTON: usize = 80;
const STARTS: usize = 8;
/// Sufficient-decrease constant. Far from the optimum, full Newton steps on
/// `|t|^p` with `p < 2` overshoot to about `-t (2-p)/(p-1)` and cycle with a
/// tiny decrease; a constant well above the usual `1e-4` forces backtracking
/// there, while near the optimum the full step still gives half the slope.
const ARMIJO: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Penalty {
    Smooth(f64),
    Exact,
}

fn rho(t: f64, p: f64, pen: Penalty) -> (f64, f64, f64) {
    match pen {
        Penalty::Smooth(e) => {
            let s = t * t + e * e;
            // s^{p/2} - e^p without cancellation for |t| ≪ e
            let q = t / e;
            let r = libm::pow(e, p) * libm::expm1(0.5 * p * libm::log1p(q * q));
            let r1 = p * t * libm::pow(s, 0.5 * p - 1.0);
            let r2 = p * libm::pow(s, 0.5 * p - 2.0) * ((p - 1.0) * t * t + e * e);
            (r, r1, r2.abs())
        }
        Penalty::Exact => {
            let a = t.abs();
            let r = libm::pow(a, p);
            let r1 = if a == 0.0 {
                0.0
            } else {
                p * libm::pow(a, p - 1.0) * t.signum()
            };
            let r2 = if p >= 2.0 {
                p * (p - 1.0) * libm::pow(a, p - 2.0)
            } else {
                p * (p - 1.0).abs() * libm::pow(t * t + HESS_EPS * HESS_EPS, 0.5 * (p - 2.0))
            };
            (r, r1, r2)
        }
    }
}

struct Assembly {
    phi: f64,
    grad: Vec<f64>,
    hess: Vec<f64>,
}

/// Quadrature nodes with `v_j(x)/|E(x)|` tabulated.
struct Table {
    w: Vec<f64>,
    b: Vec<f64>,
}

struct Workspace<'a> {
    pr: &'a ExtremalProblem,
    m: usize,
    /// `v_j(ξ)`.
    a: Vec<f64>,
    /// `|E(ξ)|`.
    target: f64,
    pivot: usize,
    level: u32,
}

impl<'a> Workspace<'a> {
    fn new(pr: &'a ExtremalProblem) -> Self {
        let m = pr.dimension();
        let mut a = vec![0.0; m];
        pr.basis_values(pr.xi, &mut a);
        let pivot = (0..m)
            .max_by(|&i, &j| a[i].abs().total_cmp(&a[j].abs()))
            .unwrap_or(0);
        Self {
            pr,
            m,
            a,
            target: pr.spec.abs_at(pr.xi),
            pivot,
            level: 0,
        }
    }

    fn project(&self, c: &mut [f64]) {
        let dot: f64 = c.iter().zip(&self.a).map(|(x, y)| x * y).sum();
        let aa: f64 = self.a.iter().map(|x| x * x).sum();
        let k = (self.target - dot) / aa;
        for (ci, ai) in c.iter_mut().zip(&self.a) {
            *ci += k * ai;
        }
    }

    fn table(&self, breaks: &[f64], level: u32) -> Table {
        let nodes = self.pr.quadrature.node_set(self.pr.domain(), breaks, level);
        let mut w = Vec::with_capacity(nodes.x.len());
        let mut b = Vec::with_capacity(nodes.x.len() * self.m);
        let mut row = vec![0.0; self.m];
        for (&x, &wx) in nodes.x.iter().zip(&nodes.w) {
            let e = self.pr.spec.abs_at(x);
            if !(e > 0.0) || !e.is_finite() {
                continue;
            }
            self.pr.basis_values(x, &mut row);
            w.push(wx);
            b.extend(row.iter().map(|v| v / e));
        }
        Table { w, b }
    }

    fn terms(&self, c: &[f64], pen: Penalty, tab: &Table, want: u8) -> Assembly {
        let m = self.m;
        let p = self.pr.p;
        let mut phi = 0.0;
        let mut grad = vec![0.0; if want >= 1 { m } else { 0 }];
        let mut hess = vec![0.0; if want >= 2 { m * m } else { 0 }];
        for (i, &w) in tab.w.iter().enumerate() {
            let row = &tab.b[i * m..(i + 1) * m];
            let t: f64 = row.iter().zip(c).map(|(x, y)| x * y).sum();
            let (r, r1, r2) = rho(t, p, pen);
            phi += w * r;
            if want >= 1 {
                let s = w * r1;
                for j in 0..m {
                    grad[j] += s * row[j];
                }
            }
            if want >= 2 {
                let s = w * r2;
                for j in 0..m {
                    let sj = s * row[j];
                    for k in j..m {
                        hess[j * m + k] += sj * row[k];
                    }
                }
            }
        }
        if want >= 2 {
            for j in 0..m {
                for k in 0..j {
                    hess[j * m + k] = hess[k * m + j];
                }
            }
        }
        Assembly { phi, grad, hess }
    }

    /// Evaluate at the first quadrature level whose `Φ` agrees with the
    /// next one; the level is remembered for the next call.
    fn assemble(&mut self, c: &[f64], pen: Penalty, want: u8) -> Assembly {
        let breaks = real_zeros(self.pr, c);
        let target = self.pr.quadrature.target_rel_error;
        let max = self.pr.quadrature.max_refinements;
        let mut l = self.level.saturating_sub(1);
        let mut prev = self.terms(c, pen, &self.table(&breaks, l), 0).phi;
        loop {
            let next = self.terms(c, pen, &self.table(&breaks, l + 1), want);
            if (next.phi - prev).abs() <= target * next.phi.abs()
                || l + 1 >= max
                || !next.phi.is_finite()
            {
                self.level = l;
                return next;
            }
            prev = next.phi;
            l += 1;
        }
    }

    /// `Σ_λ 2 b(λ) b(λ)^T / |t'(λ)|`: the Hessian of `∫|t|` concentrated at
    /// the simple real zeros of `f`.
    fn delta_hessian(&self, c: &[f64], hess: &mut [f64]) {
        let m = self.m;
        let eta = 1e-7 * self.pr.unit().max(1.0);
        let mut row = vec![0.0; m];
        for lam in real_zeros(self.pr, c) {
            let e = self.pr.spec.abs_at(lam);
            let slope = self.pr.evaluate(c, Complex64::new(lam, eta)).im / eta / e;
            if !(slope.abs() > 0.0) {
                continue;
            }
            self.pr.basis_values(lam, &mut row);
            for j in 0..m {
                for k in 0..m {
                    hess[j * m + k] += 2.0 * row[j] * row[k] / (e * e * slope.abs());
                }
            }
        }
    }

    fn kkt(&self, g: &[f64]) -> f64 {
        let ga: f64 = g.iter().zip(&self.a).map(|(x, y)| x * y).sum();
        let aa: f64 = self.a.iter().map(|x| x * x).sum();
        let mu = ga / aa;
        let num: f64 = g
            .iter()
            .zip(&self.a)
            .map(|(x, y)| (x - mu * y) * (x - mu * y))
            .sum();
        let den: f64 = g.iter().map(|x| x * x).sum();
        if den == 0.0 {
            0.0
        } else {
            libm::sqrt(num / den)
        }
    }

    /// Newton direction in the full coordinates, tangent to the slice.
    fn direction(&self, g: &[f64], h: &[f64]) -> Option<Vec<f64>> {
        let m = self.m;
        let pv = self.pivot;
        let free: Vec<usize> = (0..m).filter(|&k| k != pv).collect();
        let n = free.len();
        if n == 0 {
            return None;
        }
        let r: Vec<f64> = free.iter().map(|&k| self.a[k] / self.a[pv]).collect();
        let mut gr = vec![0.0; n];
        let mut hr = vec![0.0; n * n];
        for (i, &k) in free.iter().enumerate() {
            gr[i] = -(g[k] - r[i] * g[pv]);
            for (j, &l) in free.iter().enumerate() {
                hr[i * n + j] = h[k * m + l] - r[i] * h[pv * m + l] - r[j] * h[k * m + pv]
                    + r[i] * r[j] * h[pv * m + pv];
            }
        }
        let d = spd_solve(&hr, &gr, n)?;
        let mut full = vec![0.0; m];
        for (i, &k) in free.iter().enumerate() {
            full[k] = d[i];
            full[pv] -= r[i] * d[i];
        }
        Some(full)
    }

    /// Damped Newton on one penalty. Returns the iteration count and the
    /// last KKT residual of that penalty.
    fn newton(&mut self, c: &mut Vec<f64>, pen: Penalty, stop: f64) -> (usize, f64) {
        let p = self.pr.p;
        let mut kkt = f64::INFINITY;
        for it in 0..MAX_NEWTON {
            let mut asm = self.assemble(c, pen, 2);
            kkt = self.kkt(&asm.grad);
            if kkt <= stop || !asm.phi.is_finite() {
                return (it, kkt);
            }
            if pen == Penalty::Exact && p == 1.0 {
                self.delta_hessian(c, &mut asm.hess);
            }
            let Some(d) = self.direction(&asm.grad, &asm.hess) else {
                return (it, kkt);
            };
            let slope: f64 = d.iter().zip(&asm.grad).map(|(x, y)| x * y).sum();
            if !(slope < 0.0) {
                return (it, kkt);
            }
            let mut s = 1.0;
            let mut accepted = false;
            let mut trial = c.clone();
            for _ in 0..40 {
                for ((t, ci), di) in trial.iter_mut().zip(c.iter()).zip(&d) {
                    *t = ci + s * di;
                }
                let phi = self.assemble(&trial, pen, 0).phi;
                if phi <= asm.phi + ARMIJO * s * slope + 1e-14 * asm.phi.abs() {
                    accepted = true;
                    break;
                }
                s *= 0.5;
            }
            if !accepted {
                return (it, kkt);
            }
            let step: f64 = d.iter().map(|x| (s * x) * (s * x)).sum::<f64>();
            let size: f64 = c.iter().map(|x| x * x).sum::<f64>();
            *c = trial;
            if step <= 1e-32 * size {
                let g = self.assemble(c, pen, 1).grad;
                return (it + 1, self.kkt(&g));
            }
        }
        let g = self.assemble(c, pen, 1).grad;
        kkt = kkt.min(self.kkt(&g));
        (MAX_NEWTON, kkt)
    }

    /// The `p = 2` optimum on the slice (one Newton step on a quadratic).
    fn quadratic_start(&mut self) -> Vec<f64> {
        let mut c = vec![0.0; self.m];
        c[self.pivot] = self.target / self.a[self.pivot];
        let asm = self.assemble_p2(&c);
        if let Some(d) = self.direction(&asm.grad, &asm.hess) {
            for (ci, di) in c.iter_mut().zip(&d) {
                *ci += di;
            }
        }
        c
    }

    fn assemble_p2(&mut self, c: &[f64]) -> Assembly {
        let tab = self.table(&[], self.level + 1);
        let m = self.m;
        let mut grad = vec![0.0; m];
        let mut hess = vec![0.0; m * m];
        for (i, &w) in tab.w.iter().enumerate() {
            let row = &tab.b[i * m..(i + 1) * m];
            let t: f64 = row.iter().zip(c).map(|(x, y)| x * y).sum();
            for j in 0..m {
                grad[j] += 2.0 * w * t * row[j];
                for k in 0..m {
                    hess[j * m + k] += 2.0 * w * row[j] * row[k];
                }
            }
        }
        Assembly {
            phi: 0.0,
            grad,
            hess,
        }
    }

    /// Continuation and polish from a feasible `c`.
    fn run(&mut self, mut c: Vec<f64>) -> (Vec<f64>, usize, Vec<f64>) {
        let p = self.pr.p;
        let tol = self.pr.kkt_tol();
        let mut iters = 0;
        let mut path = Vec::new();
        if p < 2.0 {
            for &e in &SMOOTHING {
                let (k, _) = self.newton(&mut c, Penalty::Smooth(e), 1e-13);
                iters += k;
                path.push(e);
            }
        }
        if p >= 1.0 {
            let (k, _) = self.newton(&mut c, Penalty::Exact, 1e-2 * tol);
            iters += k;
        }
        (c, iters, path)
    }
}

/// Solve from the `p = 2` optimum (and, for `0 < p < 1`, from eight
/// deterministic perturbations of it, keeping the best).
pub fn solve(problem: &ExtremalProblem) -> Result<ExtremalSolution> {
    problem.validate()?;
    let mut ws = Workspace::new(problem);
    let start = ws.quadratic_start();
    if !problem.is_experimental() {
        return finish(problem, &mut ws, start);
    }
    let scale = start.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    let mut best: Option<(f64, Vec<f64>, usize, Vec<f64>)> = None;
    for k in 0..STARTS {
        let mut c = start.clone();
        if k > 0 {
            for (j, v) in c.iter_mut().enumerate() {
                *v += 0.5 * scale * libm::sin(1.7 * (k as f64 + 1.0) * (j as f64 + 1.0) + 0.3);
            }
            ws.project(&mut c);
        }
        let (c, it, path) = ws.run(c);
        let phi = ws.assemble(&c, Penalty::Exact, 0).phi;
        if best.as_ref().map_or(true, |b| phi < b.0) {
            best = Some((phi, c, it, path));
        }
    }
    let (_, c, it, path) =
        best.ok_or_else(|| Error::NonConvergence("no start succeeded".into()))?;
    package(problem, &mut ws, c, it, path)
}

/// Solve from the given basis coordinates (projected onto the slice first).
pub fn solve_from(problem: &ExtremalProblem, initial: &[f64]) -> Result<ExtremalSolution> {
    problem.validate()?;
    if initial.len() != problem.dimension() || initial.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain(format!(
            "initial point needs {} finite coordinates",
            problem.dimension()
        )));
    }
    let mut ws = Workspace::new(problem);
    let mut c = initial.to_vec();
    ws.project(&mut c);
    finish(problem, &mut ws, c)
}

fn finish(problem: &ExtremalProblem, ws: &mut Workspace, c: Vec<f64>) -> Result<ExtremalSolution> {
    let (c, it, path) = ws.run(c);
    package(problem, ws, c, it, path)
}

fn package(
    problem: &ExtremalProblem,
    ws: &mut Workspace,
    c: Vec<f64>,
    iterations: usize,
    smoothing_path: Vec<f64>,
) -> Result<ExtremalSolution> {
    let p = problem.p;
    let asm = ws.assemble(&c, Penalty::Exact, 1);
    let kkt = ws.kkt(&asm.grad);
    if !(asm.phi > 0.0) || !asm.phi.is_finite() {
        return Err(Error::NonConvergence(format!(
            "degenerate functional value {}",
            asm.phi
        )));
    }
    let min_norm = libm::pow(asm.phi, 1.0 / p);
    let coefficients: Vec<f64> = c.iter().map(|v| v / min_norm).collect();
    let norm = libm::pow(ws.assemble(&coefficients, Penalty::Exact, 0).phi, 1.0 / p);
    let converged = kkt <= problem.kkt_tol();
    if !converged && !problem.is_experimental() {
        return Err(Error::NonConvergence(format!(
            "KKT residual {kkt:.3e} above {:.1e} after {iterations} Newton steps",
            problem.kkt_tol()
        )));
    }
    let zeros = real_zeros(problem, &coefficients);
    let min_zero_gap = zeros.windows(2).map(|w| w[1] - w[0]).reduce(f64::min);
    let orthogonality =
        if matches!(problem.basis, super::Basis::Polynomial { .. }) && !problem.is_experimental() {
            all_pair_residuals(problem, &coefficients, &zeros)?
        } else {
            Vec::new()
        };
    Ok(ExtremalSolution {
        p,
        xi: problem.xi,
        coefficients,
        c_value: 1.0 / min_norm,
        norm,
        zeros,
        kkt_residual: kkt,
        orthogonality,
        min_zero_gap,
        iterations,
        converged,
        smoothing_path,
        experimental: problem.is_experimental(),
        truncated: problem.is_truncated(),
    })
}

#[cfg(test)]
mod tests {
    use super::super::{orthogonality_residual, Basis};
    use super::*;
    use crate::bounds::{c2_exact, embedding_bound};
    use crate::hb::HbSpec;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn power(n: usize) -> HbSpec {
        HbSpec::polynomial(vec![c(0.0, -1.0); n]).unwrap()
    }

    #[test]
    fn constants_in_double_power() {
        let pr = ExtremalProblem::new(2.0, power(2), 0.0, Basis::Polynomial { degree: 0 }).unwrap();
        let sol = solve(&pr).unwrap();
        assert_relative_eq!(
            sol.c_value,
            libm::sqrt(2.0 / core::f64::consts::PI),
            max_relative = 1e-10
        );
        assert!(sol.zeros.is_empty());
        assert_relative_eq!(sol.norm, 1.0, max_relative = 1e-10);
    }

    #[test]
    fn p2_below_kernel_value() {
        let pr = ExtremalProblem::new(2.0, power(4), 0.0, Basis::Polynomial { degree: 2 }).unwrap();
        let sol = solve(&pr).unwrap();
        assert!(sol.c_value <= c2_exact(&pr.spec, 0.0) * (1.0 + 1e-12));
        assert!(sol.kkt_residual <= 1e-8);
        assert_eq!(sol.zeros.len(), 2);
        assert!((sol.zeros[0] + sol.zeros[1]).abs() < 1e-8);
        assert!(sol.max_orthogonality_residual() <= 1e-8);
    }

    #[test]
    fn p1_matches_brute_force() {
        let spec = power(3);
        let pr =
            ExtremalProblem::new(1.0, spec.clone(), 0.0, Basis::Polynomial { degree: 1 }).unwrap();
        let sol = solve(&pr).unwrap();
        // f = 1 + s·x with f(0) = |E(0)| = 1: minimize ∫|1 + s x| / (1 + x²)^{3/2}
        let norm = |s: f64| {
            crate::numerics::integrate_with_breaks(
                |x| (1.0 + s * x).abs() / libm::pow(1.0 + x * x, 1.5),
                crate::numerics::Domain::Line,
                &[if s != 0.0 { -1.0 / s } else { 0.0 }],
                &Default::default(),
            )
            .value
        };
        let mut best = f64::INFINITY;
        for i in 0..=4000 {
            let ang = -core::f64::consts::FRAC_PI_2 + core::f64::consts::PI * i as f64 / 4000.0;
            best = best.min(norm(libm::tan(ang) * 0.999_999));
        }
        assert_relative_eq!(sol.c_value, 1.0 / best, max_relative = 1e-4);
        assert!(sol.c_value <= embedding_bound(1.0, spec.phase_sup()).unwrap());
    }

    #[test]
    fn uniqueness_from_other_starts() {
        let spec = HbSpec::new(
            0.0,
            vec![
                c(0.3, -0.7),
                c(-1.2, -0.4),
                c(2.0, -1.5),
                c(0.5, -1.0),
                c(-0.4, -2.0),
            ],
            0.0,
            1.0,
        )
        .unwrap();
        for p in [1.0, 1.5, 3.0] {
            let pr = ExtremalProblem::new(p, spec.clone(), 0.2, Basis::Polynomial { degree: 3 })
                .unwrap();
            let a = solve(&pr).unwrap();
            let b = solve_from(&pr, &[0.3, -2.0, 1.0, 0.7]).unwrap();
            let dist: f64 = a
                .coefficients
                .iter()
                .zip(&b.coefficients)
                .map(|(x, y)| (x - y) * (x - y))
                .sum();
            let size: f64 = a.coefficients.iter().map(|x| x * x).sum();
            assert!(
                libm::sqrt(dist / size) <= 1e-6,
                "p = {p}: {}",
                libm::sqrt(dist / size)
            );
            let limit = if p == 1.0 { 1e-4 } else { 1e-6 };
            assert!(
                a.max_orthogonality_residual() <= limit,
                "p = {p}: {:?}",
                a.orthogonality
            );
            if a.zeros.len() >= 2 {
                let mut pert = a.coefficients.clone();
                for (j, v) in pert.iter_mut().enumerate() {
                    *v *= 1.0 + if j % 2 == 0 { 0.01 } else { -0.01 };
                }
                let z = real_zeros(&pr, &pert);
                let worst = z
                    .windows(2)
                    .map(|w| {
                        orthogonality_residual(&pr, &pert, (w[0], w[1]))
                            .unwrap()
                            .abs()
                    })
                    .fold(0.0, f64::max);
                assert!(worst > 1e-3, "p = {p}: {worst}");
            }
        }
    }
}

use crate::{Error, Result};

const MAX_ITER: usize = 400;

/// Solve `g(x) = target` for increasing `g` on `[lo, hi]` by bisection.
///
/// Returns `x` with `|x - root| ≤ tol`.
pub fn monotone_solve(
    g: impl Fn(f64) -> f64,
    target: f64,
    bracket: (f64, f64),
    tol: f64,
) -> Result<f64> {
    solve(&g, None::<&fn(f64) -> f64>, target, bracket, tol)
}

/// As [`monotone_solve`], with safeguarded Newton steps using `dg`.
pub fn monotone_solve_newton(
    g: impl Fn(f64) -> f64,
    dg: impl Fn(f64) -> f64,
    target: f64,
    bracket: (f64, f64),
    tol: f64,
) -> Result<f64> {
    solve(&g, Some(&dg), target, bracket, tol)
}

fn solve<G, D>(g: &G, dg: Option<&D>, target: f64, bracket: (f64, f64), tol: f64) -> Result<f64>
where
    G: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let (mut lo, mut hi) = bracket;
    if lo > hi {
        core::mem::swap(&mut lo, &mut hi);
    }
    let glo = g(lo) - target;
    let ghi = g(hi) - target;
    if !(glo <= 0.0 && ghi >= 0.0) {
        return Err(Error::BracketViolation {
            target,
            lo_value: glo + target,
            hi_value: ghi + target,
        });
    }
    if glo == 0.0 {
        return Ok(lo);
    }
    if ghi == 0.0 {
        return Ok(hi);
    }
    let tol = tol.max(0.0);
    let mut x = 0.5 * (lo + hi);
    for _ in 0..MAX_ITER {
        let gx = g(x) - target;
        if gx == 0.0 {
            return Ok(x);
        }
        if gx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        if hi - lo <= tol {
            return Ok(0.5 * (lo + hi));
        }
        let mut next = 0.5 * (lo + hi);
        if let Some(d) = dg {
            let slope = d(x);
            if slope > 0.0 && slope.is_finite() {
                let newton = x - gx / slope;
                // Newton must land strictly inside the shrunken bracket.
                if newton > lo && newton < hi {
                    if libm::fabs(newton - x) <= 0.5 * tol {
                        return Ok(newton);
                    }
                    next = newton;
                }
            }
        }
        if next == x {
            return Ok(x);
        }
        x = next;
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn spec_examples() {
        let x = monotone_solve(|x| 2.0 * libm::atan(x), PI / 2.0, (-10.0, 10.0), 1e-14).unwrap();
        assert!((x - 1.0).abs() < 1e-13);
        let x =
            monotone_solve_newton(|x| 2.0 * PI * x, |_| 2.0 * PI, PI, (-3.0, 3.0), 1e-15).unwrap();
        assert!((x - 0.5).abs() < 1e-15);
        let x = monotone_solve(|x| x, 0.3, (0.0, 1.0), 1e-15).unwrap();
        assert!((x - 0.3).abs() < 1e-15);
    }

    #[test]
    fn bracket_violation() {
        let e = monotone_solve(|x| x, 3.0, (0.0, 1.0), 1e-12).unwrap_err();
        assert!(matches!(e, Error::BracketViolation { .. }));
    }

    #[test]
    fn newton_with_bad_derivative_still_converges() {
        let x = monotone_solve_newton(|x| x * x * x, |_| 1e-30, 8.0, (0.0, 5.0), 1e-13).unwrap();
        assert!((x - 2.0).abs() < 1e-12);
    }
}

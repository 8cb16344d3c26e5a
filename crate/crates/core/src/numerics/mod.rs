//! Shared numerical kernels: composite Gauss-Legendre quadrature on finite
//! intervals and on the real line, `ln Γ`, monotone root finding, windowed
//! maximization and a small dense SPD solver.

mod gamma;
pub(crate) mod linalg;
mod quadrature;
mod roots;
pub(crate) mod search;

pub use gamma::{ln_beta, log_gamma};
pub use quadrature::{
    integrate, integrate_with_breaks, Domain, GaussLegendre, Integral, Mapping, QuadratureScheme,
};
pub use roots::{monotone_solve, monotone_solve_newton};
pub use search::{golden_section_max, local_maxima, sup_on_window, WindowMax};

/// Centered finite-difference step used for derivative cross-checks.
pub fn fd_step(x: f64) -> f64 {
    1e-5 * libm::fabs(x).max(1.0)
}

/// Fourth-order central first derivative.
pub fn d1_five_point(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}

/// Fourth-order central second derivative.
pub fn d2_five_point(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h))
        / (12.0 * h * h)
}

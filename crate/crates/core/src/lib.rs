//! Numerical toolkit for de Branges spaces built on Hermite-Biehler functions
//! with finitely many zeros.
//!
//! The crate evaluates `E`, `E#`, the rotated real and imaginary parts
//! `A_β`, `B_β`, the closed-form phase function and its derivative, and on
//! top of that:
//!
//! * [`hormander`] checks the generalized Hörmander lower bound
//!   `f(x) ≥ ‖f/E‖∞ A_α(x)` between neighbouring zeros of `B_α`
//!   (or `|f|` between zeros of `A_α`),
//! * [`bounds`] computes `K(p)`, the embedding-norm bounds for
//!   `H^p(E) → H^∞(E)`, reproducing kernels and the exact `p = 2`
//!   point-evaluation constant,
//! * [`extremal`] solves the point-evaluation extremal problem on
//!   finite-dimensional polynomial de Branges spaces and on truncated
//!   Paley-Wiener subspaces, and reports zero structure diagnostics.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod entire;
mod error;
pub mod extremal;
pub mod hb;
pub mod hormander;
pub mod numerics;
pub mod poly;

pub use entire::{EntireFunction, FromFn, StructuredEntire};
pub use error::{Error, Result, Side};
pub use hb::{HbSpec, PhaseProfile, PhaseSup, SupLocation};
pub use num_complex::Complex64;

/// Wrap an angle into `(-π, π]`.
pub fn principal_angle(theta: f64) -> f64 {
    use core::f64::consts::PI;
    let mut t = libm::remainder(theta, 2.0 * PI);
    if t <= -PI {
        t += 2.0 * PI;
    }
    t
}

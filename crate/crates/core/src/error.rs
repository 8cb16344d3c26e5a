use alloc::string::String;

/// Errors raised by the toolkit.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid Hermite-Biehler spec: {0}")]
    InvalidSpec(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("bracket violation: target {target} not within [{lo_value}, {hi_value}]")]
    BracketViolation {
        target: f64,
        lo_value: f64,
        hi_value: f64,
    },
    #[error("bracket unavailable: phase never reaches the level on the {side} side")]
    BracketUnavailable { side: Side },
    #[error("sup of |f/E| is attained at infinity")]
    MaxAtInfinity,
    #[error("an explicit window is required: {0}")]
    WindowRequired(String),
    #[error("wrong sign at xi: f(xi) < 0, use the sign-free variant")]
    WrongSign,
    #[error("membership not certified: {0}")]
    NotCertified(String),
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("infeasible problem: {0}")]
    Infeasible(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Side {
    Left,
    Right,
}

impl core::fmt::Display for Side {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Side::Left => f.write_str("left"),
            Side::Right => f.write_str("right"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;

use clap::{Parser, ValueEnum};
use debranges_core::hormander::DEFAULT_TOL;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Phase function, zeros of A_β and B_β, sup of φ'.
    Phase,
    /// Hörmander-type lower bound f ≥ ‖f/E‖∞ A_α between zeros of B_α.
    VerifyHormander,
    /// K(p) and the embedding bounds.
    Bounds,
    /// Point-evaluation extremal problem.
    Extremal,
    /// Zero separation of the extremal and of A_α.
    Separation,
    /// The full acceptance suite.
    Selftest,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Phase => "phase",
            Command::VerifyHormander => "verify-hormander",
            Command::Bounds => "bounds",
            Command::Extremal => "extremal",
            Command::Separation => "separation",
            Command::Selftest => "selftest",
        }
    }
}

/// Tolerance keys accepted by `--tol-for`.
pub const TOLERANCE_KEYS: [&str; 6] = ["margin", "bar", "kkt", "orthogonality", "gap", "k_p"];

#[derive(Debug, Clone, Parser, Serialize)]
#[command(
    name = "debranges",
    version,
    about = "Numerical toolkit for Hermite-Biehler functions and de Branges spaces"
)]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,
    /// Hermite-Biehler spec (JSON).
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Test function as a structured entire function (JSON).
    #[arg(long)]
    pub f: Option<PathBuf>,
    /// Full extremal problem (JSON); replaces --spec/--p/--xi.
    #[arg(long)]
    pub problem: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub xi: Option<f64>,
    /// Rotation used for zeros of A_α and B_α.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Search or sampling window `LO,HI`.
    #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
    pub window: Option<(f64, f64)>,
    /// Degree cap of the polynomial basis (default N - 2).
    #[arg(long)]
    pub degree: Option<usize>,
    /// JSON report path (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// CSV profile path.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Default tolerance for every check that has no specific override.
    #[arg(long, env = "DEBRANGES_TOL")]
    pub tol: Option<f64>,
    /// Per-check tolerance `KEY=VALUE`; keys: margin, bar, kkt, orthogonality, gap, k_p.
    #[arg(long = "tol-for", value_parser = parse_override)]
    pub tol_overrides: Vec<(String, f64)>,
    /// Seed for the randomized acceptance suite.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Use the sign-free variant (|f| ≥ ‖f/E‖∞ A_α between zeros of A_α).
    #[arg(long)]
    pub sign_free: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            spec: None,
            f: None,
            problem: None,
            p: None,
            xi: None,
            alpha: None,
            window: None,
            degree: None,
            out: None,
            csv: None,
            tol: None,
            tol_overrides: Vec::new(),
            seed: None,
            sign_free: false,
        }
    }

    /// Resolved tolerance for `key`: explicit override, then `--tol`, then `default`.
    pub fn tolerance(&self, key: &str, default: f64) -> f64 {
        self.tol_overrides
            .iter()
            .rev()
            .find(|(k, _)| k == key)
            .map(|(_, v)| *v)
            .or(self.tol)
            .unwrap_or(default)
    }

    pub fn tolerance_map(&self, keys: &[(&str, f64)]) -> BTreeMap<String, f64> {
        keys.iter()
            .map(|&(k, d)| (k.to_owned(), self.tolerance(k, d)))
            .collect()
    }

    pub fn margin_tol(&self) -> f64 {
        self.tolerance("margin", DEFAULT_TOL)
    }
}

fn parse_window(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected LO,HI, got {s:?}"))?;
    let lo: f64 = a.trim().parse().map_err(|e| format!("bad LO {a:?}: {e}"))?;
    let hi: f64 = b.trim().parse().map_err(|e| format!("bad HI {b:?}: {e}"))?;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(format!("window needs finite LO < HI, got {lo},{hi}"));
    }
    Ok((lo, hi))
}

fn parse_override(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected KEY=VALUE, got {s:?}"))?;
    if !TOLERANCE_KEYS.contains(&k) {
        return Err(format!(
            "unknown tolerance key {k:?}; expected one of {TOLERANCE_KEYS:?}"
        ));
    }
    let v: f64 = v.parse().map_err(|e| format!("bad value {v:?}: {e}"))?;
    if !(v > 0.0) || !v.is_finite() {
        return Err(format!("tolerance must be finite and > 0, got {v}"));
    }
    Ok((k.to_owned(), v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flags() {
        let cfg = RunConfig::try_parse_from([
            "debranges",
            "verify-hormander",
            "--spec",
            "s.json",
            "--window",
            "-3.5,2",
            "--tol-for",
            "margin=1e-7",
            "--xi",
            "-0.25",
        ])
        .unwrap();
        assert_eq!(cfg.command, Command::VerifyHormander);
        assert_eq!(cfg.window, Some((-3.5, 2.0)));
        assert_eq!(cfg.xi, Some(-0.25));
        assert_eq!(cfg.tolerance("margin", 1.0), 1e-7);
        assert_eq!(cfg.tolerance("bar", 1.0), cfg.tol.unwrap_or(1.0));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(RunConfig::try_parse_from(["debranges", "frobnicate"]).is_err());
        assert!(RunConfig::try_parse_from(["debranges", "phase", "--window", "2,1"]).is_err());
        assert!(RunConfig::try_parse_from(["debranges", "phase", "--tol-for", "nope=1"]).is_err());
    }
}

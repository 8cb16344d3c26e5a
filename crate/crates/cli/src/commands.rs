use crate::acceptance;
use crate::config::{Command, RunConfig};
use crate::error::{CliError, CliResult, ExitStatus};
use crate::io::{read_json, to_json_string, write_csv, write_json};
use crate::report::{finite, Check, Report};
use core::f64::consts::PI;
use debranges_core::bounds::{
    bound_report, c2_exact, c2_sup, embedding_bound, k_p_closed, k_p_quadrature,
};
use debranges_core::extremal::{
    a_zero_min_gap, extract_zeros, mean_type_diagnostic, plateau_intervals, separation_report,
    solve, Basis, ExtremalProblem, ExtremalSolution, DEFAULT_MEAN_TYPE_HEIGHTS,
};
use debranges_core::hb::{hb_bar_check, upper_half_plane_grid};
use debranges_core::hormander::{verify_sign_free, verify_theorem1, WindowPolicy};
use debranges_core::{Complex64, EntireFunction, HbSpec, StructuredEntire};
use serde_json::json;
use std::collections::BTreeMap;
use std::time::Instant;

const PROFILE_POINTS: usize = 1001;
const ALPHA_SWEEP: usize = 16;

/// A finished command: its report and the exit status it maps to.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub status: ExitStatus,
}

/// Parsed command-line entry point: runs, writes the report and returns
/// the process exit code.
pub fn run(cfg: &RunConfig) -> i32 {
    match execute(cfg) {
        Ok(outcome) => {
            let written = match &cfg.out {
                Some(path) => write_json(path, &outcome.report),
                None => {
                    use std::io::Write;
                    let mut out = std::io::stdout().lock();
                    match writeln!(out, "{}", to_json_string(&outcome.report)) {
                        // a closed reader (e.g. `| head`) is not an error of ours
                        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Io {
                            path: "<stdout>".into(),
                            source: e,
                        }),
                        _ => Ok(()),
                    }
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return e.exit_status().code();
            }
            for name in &outcome.report.failed_invariants {
                eprintln!("failed invariant: {name}");
            }
            outcome.status.code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_status().code()
        }
    }
}

/// Run a command without touching stdout; CSV profiles are still written.
pub fn execute(cfg: &RunConfig) -> CliResult<Outcome> {
    let start = Instant::now();
    let body = match cfg.command {
        Command::Phase => phase(cfg)?,
        Command::VerifyHormander => verify_hormander(cfg)?,
        Command::Bounds => bounds(cfg)?,
        Command::Extremal => extremal(cfg)?,
        Command::Separation => separation(cfg)?,
        Command::Selftest => selftest(cfg)?,
    };
    let failed_invariants = Report::failed(&body.checks);
    let passed = failed_invariants.is_empty();
    let report = Report {
        command: cfg.command.name().into(),
        version: env!("CARGO_PKG_VERSION").into(),
        inputs: body.inputs,
        tolerances: body.tolerances,
        seed: cfg.seed,
        result: body.result,
        checks: body.checks,
        passed,
        failed_invariants,
        wall_time_seconds: start.elapsed().as_secs_f64(),
    };
    let status = if passed {
        ExitStatus::Success
    } else {
        ExitStatus::AssertionFailed
    };
    Ok(Outcome { report, status })
}

struct Body {
    inputs: serde_json::Value,
    tolerances: BTreeMap<String, f64>,
    result: serde_json::Value,
    checks: Vec<Check>,
}

fn value<T: serde::Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("report values serialize")
}

fn require<'a, T>(v: &'a Option<T>, flag: &str, command: Command) -> CliResult<&'a T> {
    v.as_ref()
        .ok_or_else(|| CliError::Input(format!("{} needs --{flag}", command.name())))
}

fn load_spec(cfg: &RunConfig) -> CliResult<HbSpec> {
    read_json(require(&cfg.spec, "spec", cfg.command)?)
}

fn default_window(spec: &HbSpec) -> (f64, f64) {
    let r = spec.zeros().iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let w = 10.0 * (1.0 + r);
    (-w, w)
}

fn sample(window: (f64, f64), n: usize) -> impl Iterator<Item = f64> {
    let (lo, hi) = window;
    (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
}

fn phase(cfg: &RunConfig) -> CliResult<Body> {
    let spec = load_spec(cfg)?;
    let window = cfg.window.unwrap_or_else(|| default_window(&spec));
    let beta = cfg.alpha.unwrap_or(0.0);
    let gap_tol = cfg.tolerance("gap", 1e-9);
    let profile = spec.profile();
    let sup = spec.phase_derivative_sup();
    let a_zeros = profile.a_zeros(beta, window);
    let b_zeros = profile.b_zeros(beta, window);

    let mut merged: Vec<(f64, bool)> = a_zeros
        .iter()
        .map(|&x| (x, true))
        .chain(b_zeros.iter().map(|&x| (x, false)))
        .collect();
    merged.sort_by(|a, b| a.0.total_cmp(&b.0));
    let interlaced = merged
        .windows(2)
        .all(|w| w[0].1 != w[1].1 && w[0].0 < w[1].0);
    let mut checks = vec![Check::flag("a_b_zeros_interlace", interlaced)];
    let floor = 2.0 * PI / sup.value;
    if let Some(g) = a_zero_min_gap(&spec, beta, window) {
        checks.push(Check::at_least(
            "a_zero_gap_minus_2pi_over_sup",
            g - floor,
            -gap_tol,
        ));
    }
    let (lim_lo, lim_hi) = profile.limits();
    let xi_info = cfg.xi.map(|xi| {
        json!({
            "xi": xi,
            "alpha": spec.alpha_at(xi),
            "phase": profile.phase(xi),
            "phase_derivative": profile.phase_derivative(xi),
            "c2_exact": c2_exact(&spec, xi),
        })
    });
    if let Some(path) = &cfg.csv {
        let rows: Vec<Vec<Option<f64>>> = sample(window, PROFILE_POINTS)
            .map(|x| {
                let t = spec.theta(x);
                vec![
                    Some(x),
                    Some(profile.phase(x)),
                    Some(profile.phase_derivative(x)),
                    Some(spec.abs_at(x)),
                    Some(t.re),
                    Some(t.im),
                ]
            })
            .collect();
        write_csv(
            path,
            &["x", "phi", "phi_prime", "abs_e", "theta_re", "theta_im"],
            &rows,
        )?;
    }
    Ok(Body {
        inputs: json!({ "spec": spec, "window": window, "beta": beta, "xi": cfg.xi }),
        tolerances: cfg.tolerance_map(&[("gap", 1e-9)]),
        result: json!({
            "phase_sup": sup,
            "c2_sup": c2_sup(&spec),
            "anchor_point": profile.anchor_point(),
            "anchor_value": profile.anchor_value(),
            "phase_limits": [finite(lim_lo), finite(lim_hi)],
            "a_zeros": a_zeros,
            "b_zeros": b_zeros,
            "a_zero_gap_floor": floor,
            "at_xi": xi_info,
        }),
        checks,
    })
}

fn verify_hormander(cfg: &RunConfig) -> CliResult<Body> {
    let spec = load_spec(cfg)?;
    let f: StructuredEntire = read_json(require(&cfg.f, "f", cfg.command)?)?;
    f.certify(&spec)?;
    let tol = cfg.margin_tol();
    let bar_tol = cfg.tolerance("bar", 1e-12);
    let policy = cfg.window.map_or(WindowPolicy::Auto, |(lo, hi)| {
        WindowPolicy::Explicit(lo, hi)
    });
    let report = if cfg.sign_free {
        verify_sign_free(&f, &spec, policy, tol)?
    } else {
        verify_theorem1(&f, &spec, policy, tol)?
    };

    // f/‖f/E‖∞ - e^{iα}E is in the closure of the Hermite-Biehler class
    let lambda = Complex64::from_polar(1.0, report.alpha);
    let scale = 1.0 / report.norm;
    let r = 2.0 * spec.length_scale();
    let grid = upper_half_plane_grid((report.xi - r, report.xi + r), r, 32, 32);
    let bar = hb_bar_check(
        |z| f.eval(z) * scale - lambda * spec.eval(z),
        |z| f.eval_sharp(z) * scale - lambda.conj() * spec.eval_sharp(z),
        &grid,
        bar_tol,
        1e-300,
    )?;

    let checks = vec![
        Check::at_least("min_scaled_margin", report.min_scaled_margin, -tol),
        Check::at_most(
            "equality_at_xi",
            report.equality_residual,
            tol * spec.abs_at(report.xi).max(1.0),
        ),
        Check::flag("local_expansion", report.local.passed()),
        Check::flag(
            "bracket_contains_xi",
            report.bracket.0 < report.xi && report.xi < report.bracket.1,
        ),
        Check::at_most("hb_bar_worst_ratio", bar.worst_ratio, 1.0 + bar_tol),
    ];
    if let Some(path) = &cfg.csv {
        let rows: Vec<Vec<Option<f64>>> = report
            .margin_profile
            .iter()
            .map(|&(x, m)| vec![Some(x), Some(m)])
            .collect();
        write_csv(path, &["x", "margin"], &rows)?;
    }
    Ok(Body {
        inputs: json!({ "spec": spec, "f": f, "window": cfg.window, "sign_free": cfg.sign_free }),
        tolerances: cfg.tolerance_map(&[("margin", tol), ("bar", 1e-12)]),
        result: json!({ "hormander": report, "hb_bar": bar }),
        checks,
    })
}

fn bounds(cfg: &RunConfig) -> CliResult<Body> {
    let p = *require(&cfg.p, "p", cfg.command)?;
    let spec = load_spec(cfg)?;
    let kp_tol = cfg.tolerance("k_p", 1e-9);
    let sup = spec.phase_sup();
    let report = bound_report(p, sup)?;
    let kq = k_p_quadrature(p)?;
    let mut checks = vec![
        Check::at_most(
            "k_p_quadrature_vs_closed_form",
            (kq / report.k_p - 1.0).abs(),
            kp_tol,
        ),
        Check::flag("wendel_chain", report.wendel_chain_holds),
    ];
    let c2 = c2_sup(&spec);
    if p == 2.0 {
        checks.push(Check::at_most(
            "c2_below_bound",
            c2.value,
            report.c_bound * (1.0 + 1e-12),
        ));
    }
    if let Some(path) = &cfg.csv {
        let n = 100;
        let rows = (0..n)
            .map(|i| {
                let q = 0.5 * (100.0f64).powf(i as f64 / (n - 1) as f64);
                let r = bound_report(q, sup)?;
                Ok(vec![
                    Some(q),
                    Some(k_p_closed(q)?),
                    Some(r.c_bound),
                    Some(r.c_bound_nonasymptotic_pth_power),
                    r.asymptotic_ratio,
                ])
            })
            .collect::<CliResult<Vec<_>>>()?;
        write_csv(
            path,
            &["p", "k_p", "bound", "nonasymptotic", "ratio"],
            &rows,
        )?;
    }
    Ok(Body {
        inputs: json!({ "spec": spec, "p": p }),
        tolerances: cfg.tolerance_map(&[("k_p", 1e-9)]),
        result: json!({ "bounds": report, "k_p_quadrature": kq, "c2_sup": c2 }),
        checks,
    })
}

fn load_problem(cfg: &RunConfig) -> CliResult<ExtremalProblem> {
    let problem = match &cfg.problem {
        Some(path) => {
            if cfg.spec.is_some() || cfg.p.is_some() || cfg.xi.is_some() {
                return Err(CliError::Input(
                    "--problem already fixes spec, p and xi".into(),
                ));
            }
            let pr: ExtremalProblem = read_json(path)?;
            pr.validate()?;
            pr
        }
        None => {
            let spec = load_spec(cfg)?;
            let p = *require(&cfg.p, "p", cfg.command)?;
            let xi = *require(&cfg.xi, "xi", cfg.command)?;
            if !spec.is_polynomial_type() {
                return Err(CliError::Input(
                    "specs with exp_rate > 0 need a kernel basis; pass --problem".into(),
                ));
            }
            let degree = match cfg.degree {
                Some(d) => d,
                None => spec.degree().checked_sub(2).ok_or_else(|| {
                    CliError::Input("the default basis needs a spec of degree ≥ 2".into())
                })?,
            };
            ExtremalProblem::new(p, spec, xi, Basis::Polynomial { degree })?
        }
    };
    Ok(
        match cfg.tol_overrides.iter().rev().find(|(k, _)| k == "kkt") {
            Some(&(_, t)) => problem.with_kkt_tol(t),
            None => problem,
        },
    )
}

fn orthogonality_limit(cfg: &RunConfig, p: f64) -> f64 {
    cfg.tolerance("orthogonality", if p == 1.0 { 1e-4 } else { 1e-6 })
}

fn profile_window(pr: &ExtremalProblem) -> (f64, f64) {
    match &pr.basis {
        Basis::KernelNodes {
            window: Some(w), ..
        } => *w,
        Basis::KernelNodes { nodes, .. } => {
            let r = nodes.iter().fold(pr.xi.abs(), |m, t| m.max(t.abs()));
            (-(r + 10.0 * pr.unit()), r + 10.0 * pr.unit())
        }
        Basis::Polynomial { .. } => (pr.xi - 10.0 * pr.unit(), pr.xi + 10.0 * pr.unit()),
    }
}

fn write_extremal_profile(
    cfg: &RunConfig,
    pr: &ExtremalProblem,
    sol: &ExtremalSolution,
) -> CliResult<()> {
    if let Some(path) = &cfg.csv {
        let rows: Vec<Vec<Option<f64>>> = sample(profile_window(pr), PROFILE_POINTS)
            .map(|x| {
                vec![
                    Some(x),
                    Some(pr.evaluate_real(&sol.coefficients, x) / pr.spec.abs_at(x)),
                ]
            })
            .collect();
        write_csv(path, &["x", "f_over_abs_e"], &rows)?;
    }
    Ok(())
}

fn extremal(cfg: &RunConfig) -> CliResult<Body> {
    let pr = load_problem(cfg)?;
    let sol = solve(&pr)?;
    let zeros = extract_zeros(&pr, &sol.coefficients);
    let f = pr.function(&sol.coefficients);
    let mean_type = pr
        .spec
        .is_polynomial_type()
        .then(|| mean_type_diagnostic(&f, &pr.spec, &DEFAULT_MEAN_TYPE_HEIGHTS));
    let sup = pr.spec.phase_sup();
    let mut checks = Vec::new();
    if !sol.experimental {
        checks.push(Check::at_most(
            "kkt_residual",
            sol.kkt_residual,
            pr.kkt_tol(),
        ));
        checks.push(Check::flag("zeros_real", zeros.all_real));
        checks.push(Check::flag("zeros_simple", zeros.simple));
        if !sol.orthogonality.is_empty() {
            checks.push(Check::at_most(
                "orthogonality_residual",
                sol.max_orthogonality_residual(),
                orthogonality_limit(cfg, pr.p),
            ));
        }
        if !sol.truncated {
            checks.push(Check::at_most(
                "c_value_below_embedding_bound",
                sol.c_value,
                embedding_bound(pr.p, sup)? * (1.0 + 1e-12),
            ));
        }
        if pr.p == 2.0 && !sol.truncated {
            checks.push(Check::at_most(
                "c_value_below_c2_exact",
                sol.c_value,
                c2_exact(&pr.spec, pr.xi) * (1.0 + 1e-10),
            ));
        }
        if let Some(m) = &mean_type {
            checks.push(Check::flag("mean_type_zero", m.passed));
        }
    }
    write_extremal_profile(cfg, &pr, &sol)?;
    Ok(Body {
        inputs: json!({ "problem": pr }),
        tolerances: cfg.tolerance_map(&[
            ("kkt", pr.kkt_tol()),
            ("orthogonality", orthogonality_limit(cfg, pr.p)),
        ]),
        result: json!({
            "solution": sol,
            "zero_report": zeros,
            "mean_type": mean_type,
            "embedding_bound": embedding_bound(pr.p, sup)?,
            "c2_exact": c2_exact(&pr.spec, pr.xi),
        }),
        checks,
    })
}

fn separation(cfg: &RunConfig) -> CliResult<Body> {
    let pr = load_problem(cfg)?;
    let gap_tol = cfg.tolerance("gap", 1e-9);
    let sol = solve(&pr)?;
    let sep = separation_report(&pr, &sol)?;
    let spec = &pr.spec;
    let sup = spec.phase_sup();
    let window = cfg.window.unwrap_or_else(|| default_window(spec));
    let alphas: Vec<f64> = match cfg.alpha {
        Some(a) => vec![a],
        None => (0..ALPHA_SWEEP)
            .map(|k| PI * k as f64 / ALPHA_SWEEP as f64)
            .collect(),
    };
    let mut sweep = Vec::new();
    let mut worst_gap = f64::INFINITY;
    let mut worst_half = f64::INFINITY;
    for &alpha in &alphas {
        let gap = a_zero_min_gap(spec, alpha, window);
        let plateaus = plateau_intervals(spec, alpha, window);
        let half = plateaus
            .iter()
            .map(|p| p.half_width)
            .fold(f64::INFINITY, f64::min);
        if let Some(g) = gap {
            worst_gap = worst_gap.min(g);
        }
        worst_half = worst_half.min(half);
        sweep.push(json!({ "alpha": alpha, "a_zero_min_gap": gap, "min_plateau_half_width": finite(half), "plateaus": plateaus }));
    }
    let mut checks = Vec::new();
    if !sol.experimental {
        checks.push(Check::flag("extremal_zero_gaps_positive", sep.passed));
    }
    if worst_gap.is_finite() {
        checks.push(Check::at_least(
            "a_zero_gap_minus_2pi_over_sup",
            worst_gap - 2.0 * PI / sup,
            -gap_tol,
        ));
    }
    if worst_half.is_finite() {
        checks.push(Check::at_least(
            "plateau_half_width_minus_delta",
            worst_half - 0.5 * PI / sup,
            -gap_tol,
        ));
    }
    write_extremal_profile(cfg, &pr, &sol)?;
    Ok(Body {
        inputs: json!({ "problem": pr, "window": window, "alphas": alphas }),
        tolerances: cfg.tolerance_map(&[("gap", 1e-9)]),
        result: json!({ "solution": sol, "separation": sep, "phase_sup": sup, "alpha_sweep": sweep }),
        checks,
    })
}

fn selftest(cfg: &RunConfig) -> CliResult<Body> {
    let seed = cfg.seed.unwrap_or(acceptance::DEFAULT_SEED);
    let results = acceptance::run_all(seed);
    for r in &results {
        eprintln!("{}", r.line());
    }
    let checks = results
        .iter()
        .map(|r| Check::flag(&format!("criterion_{}_{}", r.id, r.slug), r.passed))
        .collect();
    Ok(Body {
        inputs: json!({ "seed": seed }),
        tolerances: BTreeMap::new(),
        result: value(&results),
        checks,
    })
}

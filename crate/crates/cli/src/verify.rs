//! The `verify` subcommand: the numerical invariant suite.
//!
//! Runs normalization, marginal, symmetry, series-vs-oracle, orbit
//! constancy, and Jacobian checks over λ ∈ {1, 2, 4, 10} (or the λ the
//! user supplied), printing one PASS/FAIL line per check. A `--tol`
//! supplied by the user overrides every check tolerance, which also gives
//! a controlled path for exercising the failure exit status.

use crate::config::{CliError, RunConfig};
use crate::emit::{Cell, Report};
use crate::workers::parallel_wdf_grid;

use morse_wigner::classical::{jacobian_check, period, trajectory, Orbit};
use morse_wigner::sdf::sdf_at_point;
use morse_wigner::spectrum::{BoundState, MorseParams, PhasePoint};
use morse_wigner::wigner::{knu_oracle, knu_series, wdf, wdf_marginal_position, ComplexOrder};

pub struct CheckResult {
    pub name: &'static str,
    pub lambda: Option<f64>,
    pub passed: bool,
    pub detail: String,
}

fn lambda_list(config: &RunConfig) -> Vec<f64> {
    if config.lambda_explicit {
        vec![config.lambda]
    } else {
        vec![1.0, 2.0, 4.0, 10.0]
    }
}

const ALL_CHECKS: [&str; 6] = [
    "normalization",
    "marginal",
    "symmetry",
    "oracle",
    "orbit-constancy",
    "jacobian",
];

fn check_tol(config: &RunConfig, default: f64) -> f64 {
    if config.tol_explicit {
        config.tol
    } else {
        default
    }
}

fn check_normalization(config: &RunConfig, lambda: f64) -> Result<CheckResult, CliError> {
    let tol = check_tol(config, 1e-3);
    let params = MorseParams::new(lambda)?;
    let grid = parallel_wdf_grid(
        &params,
        config.n,
        config.window,
        config.resolution,
        config.resolution,
        1e-10,
    )?;
    let total = grid.integrate();
    Ok(CheckResult {
        name: "normalization",
        lambda: Some(lambda),
        passed: (total - 1.0).abs() <= tol,
        detail: format!("integral = {total:.8} (tolerance {tol:.1e})"),
    })
}

fn check_marginal(config: &RunConfig, lambda: f64) -> Result<CheckResult, CliError> {
    let tol = check_tol(config, 1e-4);
    let params = MorseParams::new(lambda)?;
    let bs = BoundState::new(&params, config.n)?;
    let p_max = 12.0 + lambda;
    let mut worst = 0.0f64;
    for i in 0..5 {
        let q = (-1.0 + i as f64) / lambda.sqrt();
        let m = wdf_marginal_position(&params, config.n, q, p_max, 0.1)?;
        worst = worst.max((m.value - bs.density(q)).abs());
    }
    Ok(CheckResult {
        name: "marginal",
        lambda: Some(lambda),
        passed: worst <= tol,
        detail: format!("max |int rho dp - |psi|^2| = {worst:.3e} (tolerance {tol:.1e})"),
    })
}

fn check_symmetry(config: &RunConfig, lambda: f64) -> Result<CheckResult, CliError> {
    let tol = check_tol(config, 1e-10);
    let params = MorseParams::new(lambda)?;
    let mut worst = 0.0f64;
    for &(q, p) in &[(0.2, 0.8), (-0.4, 1.5), (1.1, 2.5)] {
        let a = wdf(&params, config.n, PhasePoint::new(q, p))?.rho;
        let b = wdf(&params, config.n, PhasePoint::new(q, -p))?.rho;
        worst = worst.max((a - b).abs());
    }
    // order symmetries of the kernel
    for &(n, k, xi) in &[(1i32, 0.7, 1.0), (2, 1.3, 2.5)] {
        let v = knu_oracle(ComplexOrder::new(n, k), xi)?;
        worst = worst.max((v - knu_oracle(ComplexOrder::new(-n, k), xi)?).abs());
        worst = worst.max((v - knu_oracle(ComplexOrder::new(n, -k), xi)?).abs());
    }
    Ok(CheckResult {
        name: "symmetry",
        lambda: Some(lambda),
        passed: worst <= tol,
        detail: format!("max asymmetry = {worst:.3e} (tolerance {tol:.1e})"),
    })
}

fn check_oracle(config: &RunConfig) -> Result<CheckResult, CliError> {
    let floor = check_tol(config, 1e-8);
    let mut worst = 0.0f64;
    let mut failures = 0usize;
    for &xi in &[0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0] {
        for &k in &[0.01, 0.1, 0.5, 1.0, 2.0, 5.0] {
            for &n in &[0i32, 1, 2, 3] {
                let order = ComplexOrder::new(n, k);
                let s = knu_series(order, xi, 1e-10)?.re_k;
                let o = knu_oracle(order, xi)?;
                let diff = (s - o).abs();
                let allowed = floor.max(1e-6 * o.abs());
                if diff > allowed {
                    failures += 1;
                }
                worst = worst.max(diff);
            }
        }
    }
    Ok(CheckResult {
        name: "oracle",
        lambda: None,
        passed: failures == 0,
        detail: format!(
            "168 lattice points, {failures} failures, worst |series - oracle| = {worst:.3e}"
        ),
    })
}

fn check_orbit_constancy(config: &RunConfig, lambda: f64) -> Result<CheckResult, CliError> {
    let tol = check_tol(config, 1e-9);
    let params = MorseParams::new(lambda)?;
    let mut worst = 0.0f64;
    for i in 0..5 {
        let eps = 0.1 + 0.17 * i as f64;
        let orbit = Orbit::new(eps, 0.0)?;
        let base = sdf_at_point(&params, config.n, trajectory(&orbit, &params, 0.4))?;
        for j in 1..3 {
            let theta = orbit.period_theta * (0.13 + 0.31 * j as f64);
            let v = sdf_at_point(&params, config.n, trajectory(&orbit, &params, theta))?;
            worst = worst.max((v - base).abs());
        }
    }
    Ok(CheckResult {
        name: "orbit-constancy",
        lambda: Some(lambda),
        passed: worst <= tol,
        detail: format!("max same-orbit spread = {worst:.3e} (tolerance {tol:.1e})"),
    })
}

fn check_jacobian(config: &RunConfig, lambda: f64) -> Result<CheckResult, CliError> {
    let tol = check_tol(config, 1e-5);
    let params = MorseParams::new(lambda)?;
    let d = params.well_depth();
    let mut worst = 0.0f64;
    for &(eps, frac) in &[(0.3, 0.1), (0.9, 0.4), (0.6, 0.15)] {
        let t = frac * period(eps, &params)?;
        let probe = jacobian_check(eps * d, t, &params)?;
        worst = worst.max((probe.j - 1.0).abs());
    }
    Ok(CheckResult {
        name: "jacobian",
        lambda: Some(lambda),
        passed: worst <= tol,
        detail: format!("max |J - 1| = {worst:.3e} (tolerance {tol:.1e})"),
    })
}

/// Run the requested checks; returns the report and whether all passed.
pub fn run_verify(
    config: &RunConfig,
    selected: &Option<Vec<String>>,
) -> Result<(Report, bool), CliError> {
    let wanted: Vec<&str> = match selected {
        Some(names) => {
            let mut list = Vec::new();
            for name in names {
                let name = name.trim();
                let Some(&known) = ALL_CHECKS.iter().find(|&&c| c == name) else {
                    return Err(CliError::Config(format!(
                        "unknown check `{name}` (available: {})",
                        ALL_CHECKS.join(", ")
                    )));
                };
                list.push(known);
            }
            list
        }
        None => ALL_CHECKS.to_vec(),
    };

    let lambdas = lambda_list(config);
    let mut results = Vec::new();
    for &check in &wanted {
        match check {
            "oracle" => results.push(check_oracle(config)?),
            "normalization" => {
                for &l in &lambdas {
                    results.push(check_normalization(config, l)?);
                }
            }
            "marginal" => {
                for &l in &lambdas {
                    results.push(check_marginal(config, l)?);
                }
            }
            "symmetry" => {
                for &l in &lambdas {
                    results.push(check_symmetry(config, l)?);
                }
            }
            "orbit-constancy" => {
                for &l in &lambdas {
                    results.push(check_orbit_constancy(config, l)?);
                }
            }
            "jacobian" => {
                for &l in &lambdas {
                    results.push(check_jacobian(config, l)?);
                }
            }
            _ => unreachable!(),
        }
    }

    let mut report = Report::default();
    for (k, v) in config.echo() {
        report.push_meta(k, v);
    }
    report.columns = vec!["check", "lambda", "status", "detail"];
    let mut all_passed = true;
    for r in &results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        let lam = r.lambda.map_or_else(|| "-".to_string(), |l| format!("{l}"));
        println!("verify {} lambda={lam}: {status} ({})", r.name, r.detail);
        all_passed &= r.passed;
        report.rows.push(vec![
            Cell::Str(r.name.into()),
            Cell::Str(lam),
            Cell::Str(status.into()),
            Cell::Str(r.detail.clone()),
        ]);
    }
    println!(
        "verify: {}",
        if all_passed {
            "all checks passed".to_string()
        } else {
            format!(
                "{} check(s) FAILED",
                results.iter().filter(|r| !r.passed).count()
            )
        }
    );
    Ok((report, all_passed))
}

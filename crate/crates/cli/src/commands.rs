//! The data-producing subcommands.

use crate::config::{CliError, RunConfig};
use crate::emit::{fmt_f64, write_gnuplot_matrix, Cell, Report};
use crate::workers::{parallel_profile, parallel_sdf_grid, parallel_wdf_grid};

use morse_wigner::contour::extract_level;
use morse_wigner::grid::{compare_level_sets, locate_peak, DensityGrid};
use morse_wigner::sdf::rc_bound_mass;
use morse_wigner::spectrum::{potential_scaled, MorseParams};
use morse_wigner::Error;

/// What a subcommand produced: a table or a raw grid matrix.
pub enum Artifact {
    Table(Report),
    GnuplotGrid {
        meta: Vec<(String, String)>,
        grid: DensityGrid,
    },
}

impl Artifact {
    pub fn write(&self, config: &RunConfig, w: &mut dyn std::io::Write) -> std::io::Result<()> {
        match self {
            Artifact::Table(report) => match config.format {
                crate::config::Format::Csv => report.write_csv(w),
                crate::config::Format::Json => report.write_json(w),
            },
            Artifact::GnuplotGrid { meta, grid } => write_gnuplot_matrix(w, meta, grid),
        }
    }
}

fn base_report(config: &RunConfig) -> Report {
    let mut report = Report::default();
    for (k, v) in config.echo() {
        report.push_meta(k, v);
    }
    report
}

pub fn cmd_spectrum(config: &RunConfig) -> Result<Artifact, CliError> {
    let params = MorseParams::new(config.lambda)?;
    let mut report = base_report(config);
    report.push_meta("num-levels", params.num_levels().to_string());
    report.push_meta_f64("well-depth", params.well_depth());
    report.push_meta_f64("omega0", params.omega0());
    report.columns = vec!["n", "eps_n", "E_n"];
    for lev in params.levels() {
        report.rows.push(vec![
            Cell::Int(lev.n as i64),
            Cell::Num(lev.eps_n),
            Cell::Num(lev.e_n),
        ]);
    }
    Ok(Artifact::Table(report))
}

pub fn cmd_potential(config: &RunConfig) -> Result<Artifact, CliError> {
    let params = MorseParams::new(config.lambda)?;
    let mut report = base_report(config);
    report.push_meta("num-levels", params.num_levels().to_string());
    for lev in params.levels() {
        report.push_meta_f64(&format!("E_{}", lev.n), lev.e_n);
    }
    report.push_meta_f64("dissociation", 0.5 * config.lambda); // V(Q → ∞) = λ/2
    report.columns = vec!["Q", "V"];
    let m = config.resolution.max(2);
    for i in 0..m {
        let q = config.window.q_min
            + (config.window.q_max - config.window.q_min) * i as f64 / (m - 1) as f64;
        report
            .rows
            .push(vec![Cell::Num(q), Cell::Num(potential_scaled(&params, q))]);
    }
    Ok(Artifact::Table(report))
}

fn grid_summary(report: &mut Report, grid: &DensityGrid) {
    let peak = locate_peak(grid);
    report.push_meta_f64("min", grid.min_value());
    report.push_meta_f64("max", grid.max_value());
    report.push_meta_f64("integral", grid.integrate());
    report.push_meta_f64("peak-q", peak.q_scaled);
    report.push_meta_f64("peak-p", peak.p_scaled);
    report.push_meta_f64("peak-value", peak.value);
}

fn grid_artifact(
    config: &RunConfig,
    grid: DensityGrid,
    column: &'static str,
    extra_meta: Vec<(String, String)>,
) -> Artifact {
    let mut report = base_report(config);
    for (k, v) in extra_meta {
        report.push_meta(&k, v);
    }
    grid_summary(&mut report, &grid);
    if config.gnuplot {
        return Artifact::GnuplotGrid {
            meta: report.meta,
            grid,
        };
    }
    report.columns = vec!["Q", "P", column];
    report.rows.reserve(grid.nq * grid.np);
    for j in 0..grid.np {
        for i in 0..grid.nq {
            report.rows.push(vec![
                Cell::Num(grid.q_at(i)),
                Cell::Num(grid.p_at(j)),
                Cell::Num(grid.value(i, j)),
            ]);
        }
    }
    Artifact::Table(report)
}

pub fn cmd_wdf(config: &RunConfig) -> Result<Artifact, CliError> {
    let params = MorseParams::new(config.lambda)?;
    let grid = parallel_wdf_grid(
        &params,
        config.n,
        config.window,
        config.resolution,
        config.resolution,
        config.tol,
    )?;
    Ok(grid_artifact(config, grid, "rho", Vec::new()))
}

pub fn cmd_sdf(config: &RunConfig) -> Result<Artifact, CliError> {
    let params = MorseParams::new(config.lambda)?;
    let profile = parallel_profile(&params, config.n, config.profile_points, config.quad_points)?;
    let grid = parallel_sdf_grid(
        &profile,
        config.window,
        config.resolution,
        config.resolution,
    )?;
    let extra = vec![(
        "rc-bound-mass".to_string(),
        fmt_f64(rc_bound_mass(&profile)),
    )];
    Ok(grid_artifact(config, grid, "rho_c", extra))
}

pub fn cmd_compare(config: &RunConfig) -> Result<Artifact, CliError> {
    let params = MorseParams::new(config.lambda)?;
    let wdf_grid = parallel_wdf_grid(
        &params,
        config.n,
        config.window,
        config.resolution,
        config.resolution,
        config.tol,
    )?;
    let profile = parallel_profile(&params, config.n, config.profile_points, config.quad_points)?;
    let sdf_grid = parallel_sdf_grid(
        &profile,
        config.window,
        config.resolution,
        config.resolution,
    )?;

    let mut report = base_report(config);
    report.push_meta(
        "metric-row",
        "record,level,wdf_area,sdf_area,sym_diff_area,normalized,centroid_dq,centroid_dp",
    );
    report.push_meta("absent-row", "record,level");
    report.push_meta("vertex-row", "record,level,set,curve,vertex,q,p,closed");
    report.columns = vec!["record", "level", "c1", "c2", "c3", "c4", "c5", "c6"];

    let mut present = 0usize;
    let mut mean_disc = 0.0f64;
    for &level in &config.levels {
        match compare_level_sets(&wdf_grid, &sdf_grid, level) {
            Ok(d) => {
                present += 1;
                mean_disc += d.normalized;
                report.rows.push(vec![
                    Cell::Str("metric".into()),
                    Cell::Num(level),
                    Cell::Num(d.wdf_area),
                    Cell::Num(d.sdf_area),
                    Cell::Num(d.sym_diff_area),
                    Cell::Num(d.normalized),
                    Cell::Num(d.centroid_offset.0),
                    Cell::Num(d.centroid_offset.1),
                ]);
            }
            Err(Error::LevelMissing { .. }) => {
                report.rows.push(vec![
                    Cell::Str("absent".into()),
                    Cell::Num(level),
                    Cell::Str(String::new()),
                    Cell::Str(String::new()),
                    Cell::Str(String::new()),
                    Cell::Str(String::new()),
                    Cell::Str(String::new()),
                    Cell::Str(String::new()),
                ]);
            }
            Err(other) => return Err(other.into()),
        }
    }
    if present > 0 {
        report.push_meta_f64("mean-normalized-discrepancy", mean_disc / present as f64);
    }
    report.push_meta("levels-present", present.to_string());

    for (set_name, grid) in [("wdf", &wdf_grid), ("sdf", &sdf_grid)] {
        for &level in &config.levels {
            for (ci, poly) in extract_level(grid, level).iter().enumerate() {
                for (vi, &(q, p)) in poly.points.iter().enumerate() {
                    report.rows.push(vec![
                        Cell::Str("vertex".into()),
                        Cell::Num(level),
                        Cell::Str(set_name.into()),
                        Cell::Int(ci as i64),
                        Cell::Int(vi as i64),
                        Cell::Num(q),
                        Cell::Num(p),
                        Cell::Int(poly.closed as i64),
                    ]);
                }
            }
        }
    }
    Ok(Artifact::Table(report))
}

//! Phase-space quantum mechanics of the one-dimensional Morse oscillator.
//!
//! The crate computes the Wigner distribution function (WDF) of Morse
//! bound states and maps it onto the semiclassical distribution function
//! (SDF) that solves the classical Liouville equation, by time-averaging
//! the WDF over exact classical orbits. Everything is keyed to the single
//! dimensionless well-depth parameter λ, with ħ = a = m = 1 so that the
//! well depth is D = λ²/2 and the small-oscillation frequency is ω₀ = λ.
//!
//! Modules:
//! - [`spectrum`]: bound-state energies, wavefunctions, scaled coordinates
//! - [`classical`]: exact bound trajectories, periods, energy classification
//! - [`wigner`]: the WDF via the complex-order integral K_ν and its oracles
//! - [`sdf`]: orbit time-averages, R_c(E), quantum and classical averages
//! - [`grid`] / [`contour`]: density lattices, level sets, comparison metrics
//!
//! The crate is `no_std`-compatible (requires `alloc`); disable the default
//! `std` feature and enable `libm` for embedded or bare-metal use.

#![cfg_attr(not(feature = "std"), no_std)]

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("either the `std` or the `libm` feature must be enabled");

extern crate alloc;

pub(crate) mod math;
mod special;

pub mod classical;
pub mod contour;
pub mod grid;
pub mod quad;
pub mod sdf;
pub mod spectrum;
pub mod wigner;

pub use classical::{
    classify, energy_ratio, jacobian_check, orbit_from_point, period, trajectory, EnergyClass,
    JacobianProbe, Orbit, TrajectoryClass,
};
pub use contour::{extract_level, extract_levels, LevelSet, Polyline};
pub use grid::{
    compare_level_sets, locate_peak, open_region_wdf_mass, sample_sdf_grid, sample_wdf_grid,
    DensityGrid, GridKind, LevelDiscrepancy, Peak, Window,
};
pub use sdf::{
    average_classical, average_quantum, rc_bound_mass, rc_density, sdf_at_energy, sdf_at_point,
    GridAverage, Observable, RcDensity, SdfProfile,
};
pub use spectrum::{
    eigenvalue, laguerre_poly, num_levels, potential_scaled, wavefunction, BoundState, MorseParams,
    PhasePoint, QuantumLevel,
};
pub use wigner::{
    knu_axis, knu_oracle, knu_series, wdf, wdf_marginal_position, wdf_with_tol, ComplexOrder,
    KnuResult, Marginal, WdfSample,
};

use alloc::boxed::Box;
use core::fmt;

/// Error type shared across the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// λ ≤ 1/2 supports no bound state.
    NoBoundState { lambda: f64 },
    /// Quantum number outside the bound-state range.
    LevelOutOfRange { n: usize, num_levels: usize },
    /// Series tolerance outside the accepted (0, 1e-3] range.
    InvalidTolerance { tol: f64 },
    /// The telescoped K_ν series failed to meet tolerance within the term cap.
    SeriesDivergence { xi: f64, k: f64, terms: usize },
    /// Adaptive quadrature exhausted its subdivision budget.
    Quadrature { context: &'static str },
    /// Orbit period diverges as ε → 1 (and is undefined beyond).
    PeriodDiverges { eps: f64 },
    /// Orbit time-average did not stabilize under quadrature refinement.
    OrbitAverage { eps: f64 },
    /// Not enough orbit quadrature points (minimum 16).
    QuadPointsTooFew { quad_points: usize },
    /// Grid resolution below the supported minimum (32 per axis).
    ResolutionTooSmall { nq: usize, np: usize },
    /// Degenerate or reversed sampling window.
    InvalidWindow,
    /// A profile built for different (λ, n) was supplied.
    ProfileMismatch,
    /// Grids of different geometry cannot be compared point by point.
    GridMismatch,
    /// Requested contour level lies outside a grid's value range.
    LevelMissing { level: f64 },
    /// Evaluation failure at a lattice site, with its scaled coordinates.
    GridEval {
        q_scaled: f64,
        p_scaled: f64,
        source: Box<Error>,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NoBoundState { lambda } => {
                write!(
                    f,
                    "no bound state exists for lambda = {lambda} (need lambda > 0.5)"
                )
            }
            Error::LevelOutOfRange { n, num_levels } => {
                write!(
                    f,
                    "level n = {n} outside bound range (levels: {num_levels})"
                )
            }
            Error::InvalidTolerance { tol } => {
                write!(f, "series tolerance {tol} outside (0, 1e-3]")
            }
            Error::SeriesDivergence { xi, k, terms } => write!(
                f,
                "K_nu series did not converge at xi = {xi}, k = {k} after {terms} terms"
            ),
            Error::Quadrature { context } => {
                write!(f, "adaptive quadrature did not converge ({context})")
            }
            Error::PeriodDiverges { eps } => {
                write!(f, "orbit period diverges at energy ratio eps = {eps}")
            }
            Error::OrbitAverage { eps } => {
                write!(f, "orbit average did not converge at eps = {eps}")
            }
            Error::QuadPointsTooFew { quad_points } => {
                write!(
                    f,
                    "orbit quadrature needs at least 16 points, got {quad_points}"
                )
            }
            Error::ResolutionTooSmall { nq, np } => {
                write!(f, "grid resolution {nq}x{np} below minimum 32 per axis")
            }
            Error::InvalidWindow => write!(f, "degenerate or reversed sampling window"),
            Error::ProfileMismatch => write!(f, "SDF profile does not match requested (lambda, n)"),
            Error::GridMismatch => write!(f, "grids are not congruent"),
            Error::LevelMissing { level } => {
                write!(f, "level {level} outside grid value range")
            }
            Error::GridEval {
                q_scaled,
                p_scaled,
                source,
            } => write!(
                f,
                "evaluation failed at (Q, P) = ({q_scaled}, {p_scaled}): {source}"
            ),
        }
    }
}

impl core::error::Error for Error {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            Error::GridEval { source, .. } => Some(source.as_ref()),
            _ => None,
        }
    }
}

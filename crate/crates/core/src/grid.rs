//! Density lattices over the scaled (Q, P) plane and their diagnostics.
//!
//! Grids store either the WDF ρ or the SDF ρ_c in units of ħ⁻¹, row-major
//! with Q varying fastest. Lattice coordinates are in the harmonic-
//! normalized variables Q = √λ q, P = p/√λ, whose area element equals the
//! canonical one, so plain cell sums double as phase-space integrals.

use crate::classical::energy_ratio;
use crate::sdf::SdfProfile;
use crate::spectrum::{MorseParams, PhasePoint};
use crate::wigner::wdf_with_tol;
use crate::Error;
use alloc::boxed::Box;
use alloc::vec::Vec;

/// Which field a grid holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    Wdf,
    Sdf,
}

/// Rectangular sampling window in scaled coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub q_min: f64,
    pub q_max: f64,
    pub p_min: f64,
    pub p_max: f64,
}

impl Window {
    /// Window covering the classically allowed region of every λ ≤ 10
    /// together with the oscillatory tails.
    pub const DEFAULT: Window = Window {
        q_min: -4.0,
        q_max: 8.0,
        p_min: -5.0,
        p_max: 5.0,
    };

    pub fn new(q_min: f64, q_max: f64, p_min: f64, p_max: f64) -> Result<Self, Error> {
        let w = Window {
            q_min,
            q_max,
            p_min,
            p_max,
        };
        if !(q_min < q_max && p_min < p_max)
            || !(q_min.is_finite() && q_max.is_finite() && p_min.is_finite() && p_max.is_finite())
        {
            return Err(Error::InvalidWindow);
        }
        Ok(w)
    }
}

/// A lattice of ρ or ρ_c values with its provenance.
#[derive(Debug, Clone)]
pub struct DensityGrid {
    pub kind: GridKind,
    pub lambda: f64,
    pub n: usize,
    pub window: Window,
    pub nq: usize,
    pub np: usize,
    /// Row-major values, `values[j * nq + i]` at (Q_i, P_j); units ħ⁻¹.
    pub values: Vec<f64>,
}

impl DensityGrid {
    pub const MIN_RESOLUTION: usize = 32;

    #[inline]
    pub fn dq(&self) -> f64 {
        (self.window.q_max - self.window.q_min) / (self.nq - 1) as f64
    }

    #[inline]
    pub fn dp(&self) -> f64 {
        (self.window.p_max - self.window.p_min) / (self.np - 1) as f64
    }

    #[inline]
    pub fn q_at(&self, i: usize) -> f64 {
        self.window.q_min + self.dq() * i as f64
    }

    #[inline]
    pub fn p_at(&self, j: usize) -> f64 {
        self.window.p_min + self.dp() * j as f64
    }

    #[inline]
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nq + i]
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Trapezoid cell sum over the window; equals ∬ ρ dq dp on the window.
    pub fn integrate(&self) -> f64 {
        let mut acc = 0.0;
        for j in 0..self.np {
            let wj = if j == 0 || j == self.np - 1 { 0.5 } else { 1.0 };
            for i in 0..self.nq {
                let wi = if i == 0 || i == self.nq - 1 { 0.5 } else { 1.0 };
                acc += wi * wj * self.value(i, j);
            }
        }
        acc * self.dq() * self.dp()
    }

    /// Congruence check for point-by-point comparison.
    pub fn congruent_with(&self, other: &DensityGrid) -> bool {
        self.nq == other.nq && self.np == other.np && self.window == other.window
    }

    /// Bilinear interpolation at scaled coordinates inside the window.
    pub fn bilinear(&self, q: f64, p: f64) -> f64 {
        let fx = ((q - self.window.q_min) / self.dq()).clamp(0.0, (self.nq - 1) as f64);
        let fy = ((p - self.window.p_min) / self.dp()).clamp(0.0, (self.np - 1) as f64);
        let i = (fx as usize).min(self.nq - 2);
        let j = (fy as usize).min(self.np - 2);
        let tx = fx - i as f64;
        let ty = fy - j as f64;
        let v00 = self.value(i, j);
        let v10 = self.value(i + 1, j);
        let v01 = self.value(i, j + 1);
        let v11 = self.value(i + 1, j + 1);
        v00 * (1.0 - tx) * (1.0 - ty)
            + v10 * tx * (1.0 - ty)
            + v01 * (1.0 - tx) * ty
            + v11 * tx * ty
    }
}

fn check_resolution(nq: usize, np: usize) -> Result<(), Error> {
    if nq < DensityGrid::MIN_RESOLUTION || np < DensityGrid::MIN_RESOLUTION {
        return Err(Error::ResolutionTooSmall { nq, np });
    }
    Ok(())
}

/// Fill one P-row of a WDF lattice. Exposed separately so callers may
/// partition rows across workers; the values are identical either way.
#[allow(clippy::too_many_arguments)]
pub fn fill_wdf_row(
    params: &MorseParams,
    n: usize,
    window: &Window,
    nq: usize,
    np: usize,
    j: usize,
    tol: f64,
    out: &mut [f64],
) -> Result<(), Error> {
    debug_assert_eq!(out.len(), nq);
    let dq = (window.q_max - window.q_min) / (nq - 1) as f64;
    let dp = (window.p_max - window.p_min) / (np - 1) as f64;
    let p_scaled = window.p_min + dp * j as f64;
    for (i, slot) in out.iter_mut().enumerate() {
        let q_scaled = window.q_min + dq * i as f64;
        let pt = PhasePoint::from_scaled(params, q_scaled, p_scaled);
        *slot = wdf_with_tol(params, n, pt, tol)
            .map_err(|e| Error::GridEval {
                q_scaled,
                p_scaled,
                source: Box::new(e),
            })?
            .rho;
    }
    Ok(())
}

/// Sample the WDF on a (Q, P) lattice.
pub fn sample_wdf_grid(
    params: &MorseParams,
    n: usize,
    window: Window,
    nq: usize,
    np: usize,
    tol: f64,
) -> Result<DensityGrid, Error> {
    check_resolution(nq, np)?;
    let mut values = alloc::vec![0.0; nq * np];
    for j in 0..np {
        fill_wdf_row(
            params,
            n,
            &window,
            nq,
            np,
            j,
            tol,
            &mut values[j * nq..(j + 1) * nq],
        )?;
    }
    Ok(DensityGrid {
        kind: GridKind::Wdf,
        lambda: params.lambda(),
        n,
        window,
        nq,
        np,
        values,
    })
}

/// Fill one P-row of an SDF lattice from a cached profile.
pub fn fill_sdf_row(
    profile: &SdfProfile,
    window: &Window,
    nq: usize,
    np: usize,
    j: usize,
    out: &mut [f64],
) {
    debug_assert_eq!(out.len(), nq);
    let params = profile.params();
    let dq = (window.q_max - window.q_min) / (nq - 1) as f64;
    let dp = (window.p_max - window.p_min) / (np - 1) as f64;
    let p_scaled = window.p_min + dp * j as f64;
    for (i, slot) in out.iter_mut().enumerate() {
        let q_scaled = window.q_min + dq * i as f64;
        let pt = PhasePoint::from_scaled(params, q_scaled, p_scaled);
        *slot = profile.at_point(pt);
    }
}

/// Sample the SDF on a (Q, P) lattice via a cached ρ_c(ε) profile.
/// Lattice points with ε ≥ 1 are exactly zero.
pub fn sample_sdf_grid(
    profile: &SdfProfile,
    window: Window,
    nq: usize,
    np: usize,
) -> Result<DensityGrid, Error> {
    check_resolution(nq, np)?;
    let mut values = alloc::vec![0.0; nq * np];
    for j in 0..np {
        fill_sdf_row(
            profile,
            &window,
            nq,
            np,
            j,
            &mut values[j * nq..(j + 1) * nq],
        );
    }
    Ok(DensityGrid {
        kind: GridKind::Sdf,
        lambda: profile.lambda(),
        n: profile.n(),
        window,
        nq,
        np,
        values,
    })
}

/// WDF mass sitting on open trajectories: the trapezoid sum restricted to
/// lattice points with ε(q, p) ≥ 1.
pub fn open_region_wdf_mass(grid: &DensityGrid) -> f64 {
    let params = MorseParams::new(grid.lambda).expect("grid carries valid lambda");
    let mut acc = 0.0;
    for j in 0..grid.np {
        let wj = if j == 0 || j == grid.np - 1 { 0.5 } else { 1.0 };
        for i in 0..grid.nq {
            let pt = PhasePoint::from_scaled(&params, grid.q_at(i), grid.p_at(j));
            if energy_ratio(pt, &params) < 1.0 {
                continue;
            }
            let wi = if i == 0 || i == grid.nq - 1 { 0.5 } else { 1.0 };
            acc += wi * wj * grid.value(i, j);
        }
    }
    acc * grid.dq() * grid.dp()
}

/// Location and height of a grid maximum, refined by a quadratic fit.
#[derive(Debug, Clone, Copy)]
pub struct Peak {
    pub q_scaled: f64,
    pub p_scaled: f64,
    pub value: f64,
    /// Set when several lattice sites tie for the maximum within 1e-12.
    pub plateau: bool,
}

/// Argmax of the grid with sub-cell refinement from the 3×3 neighborhood
/// (separable three-point parabola fits).
pub fn locate_peak(grid: &DensityGrid) -> Peak {
    let mut best = (0usize, 0usize);
    let mut best_v = f64::NEG_INFINITY;
    for j in 0..grid.np {
        for i in 0..grid.nq {
            let v = grid.value(i, j);
            if v > best_v {
                best_v = v;
                best = (i, j);
            }
        }
    }
    let ties = grid
        .values
        .iter()
        .filter(|&&v| (v - best_v).abs() <= 1e-12)
        .count()
        - 1;
    let (i, j) = best;
    let mut q = grid.q_at(i);
    let mut p = grid.p_at(j);
    let mut value = best_v;
    if i > 0 && i + 1 < grid.nq {
        let (vl, v0, vr) = (grid.value(i - 1, j), best_v, grid.value(i + 1, j));
        let denom = vl - 2.0 * v0 + vr;
        if denom < 0.0 {
            let delta = 0.5 * (vl - vr) / denom;
            q += delta.clamp(-0.5, 0.5) * grid.dq();
            value -= 0.125 * (vl - vr) * (vl - vr) / denom;
        }
    }
    if j > 0 && j + 1 < grid.np {
        let (vl, v0, vr) = (grid.value(i, j - 1), best_v, grid.value(i, j + 1));
        let denom = vl - 2.0 * v0 + vr;
        if denom < 0.0 {
            let delta = 0.5 * (vl - vr) / denom;
            p += delta.clamp(-0.5, 0.5) * grid.dp();
            value -= 0.125 * (vl - vr) * (vl - vr) / denom;
        }
    }
    Peak {
        q_scaled: q,
        p_scaled: p,
        value,
        plateau: ties > 0,
    }
}

/// Discrepancy between the super-level regions {ρ ≥ c} of two grids.
#[derive(Debug, Clone, Copy)]
pub struct LevelDiscrepancy {
    pub level: f64,
    /// Area of {wdf ≥ level}.
    pub wdf_area: f64,
    /// Area of {sdf ≥ level}.
    pub sdf_area: f64,
    /// Area of the symmetric difference of the two regions.
    pub sym_diff_area: f64,
    /// Symmetric difference normalized by the WDF super-level area.
    pub normalized: f64,
    pub wdf_centroid: (f64, f64),
    pub sdf_centroid: (f64, f64),
    /// sdf centroid minus wdf centroid.
    pub centroid_offset: (f64, f64),
}

/// Compare the constant-density regions of two congruent grids at a level.
///
/// Areas are measured by bilinear supersampling (8×8 per cell), which keeps
/// the discrepancy metric stable under grid refinement.
pub fn compare_level_sets(
    wdf_grid: &DensityGrid,
    sdf_grid: &DensityGrid,
    level: f64,
) -> Result<LevelDiscrepancy, Error> {
    if !wdf_grid.congruent_with(sdf_grid) {
        return Err(Error::GridMismatch);
    }
    let in_range = |g: &DensityGrid| level > g.min_value() && level < g.max_value();
    if !in_range(wdf_grid) || !in_range(sdf_grid) {
        return Err(Error::LevelMissing { level });
    }

    const SS: usize = 8;
    let sub_area = wdf_grid.dq() * wdf_grid.dp() / (SS * SS) as f64;
    let mut wdf_area = 0.0;
    let mut sdf_area = 0.0;
    let mut sym = 0.0;
    let mut wdf_c = (0.0f64, 0.0f64);
    let mut sdf_c = (0.0f64, 0.0f64);
    for j in 0..wdf_grid.np - 1 {
        for i in 0..wdf_grid.nq - 1 {
            for sj in 0..SS {
                let p = wdf_grid.p_at(j) + (sj as f64 + 0.5) / SS as f64 * wdf_grid.dp();
                for si in 0..SS {
                    let q = wdf_grid.q_at(i) + (si as f64 + 0.5) / SS as f64 * wdf_grid.dq();
                    let in_w = wdf_grid.bilinear(q, p) >= level;
                    let in_s = sdf_grid.bilinear(q, p) >= level;
                    if in_w {
                        wdf_area += sub_area;
                        wdf_c.0 += q * sub_area;
                        wdf_c.1 += p * sub_area;
                    }
                    if in_s {
                        sdf_area += sub_area;
                        sdf_c.0 += q * sub_area;
                        sdf_c.1 += p * sub_area;
                    }
                    if in_w != in_s {
                        sym += sub_area;
                    }
                }
            }
        }
    }
    if wdf_area > 0.0 {
        wdf_c = (wdf_c.0 / wdf_area, wdf_c.1 / wdf_area);
    }
    if sdf_area > 0.0 {
        sdf_c = (sdf_c.0 / sdf_area, sdf_c.1 / sdf_area);
    }
    Ok(LevelDiscrepancy {
        level,
        wdf_area,
        sdf_area,
        sym_diff_area: sym,
        normalized: if wdf_area > 0.0 {
            sym / wdf_area
        } else {
            f64::INFINITY
        },
        wdf_centroid: wdf_c,
        sdf_centroid: sdf_c,
        centroid_offset: (sdf_c.0 - wdf_c.0, sdf_c.1 - wdf_c.1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic_grid(f: impl Fn(f64, f64) -> f64, nq: usize, np: usize) -> DensityGrid {
        let window = Window::new(-2.0, 2.0, -2.0, 2.0).unwrap();
        let mut g = DensityGrid {
            kind: GridKind::Wdf,
            lambda: 1.0,
            n: 0,
            window,
            nq,
            np,
            values: alloc::vec![0.0; nq * np],
        };
        for j in 0..np {
            for i in 0..nq {
                g.values[j * nq + i] = f(g.q_at(i), g.p_at(j));
            }
        }
        g
    }

    #[test]
    fn window_validation() {
        assert!(Window::new(1.0, -1.0, 0.0, 1.0).is_err());
        assert!(Window::new(0.0, 1.0, 0.0, f64::NAN).is_err());
        assert!(Window::new(-4.0, 8.0, -5.0, 5.0).is_ok());
    }

    #[test]
    fn resolution_floor_enforced() {
        let p = MorseParams::new(1.0).unwrap();
        let r = sample_wdf_grid(&p, 0, Window::DEFAULT, 16, 64, 1e-10);
        assert!(matches!(r, Err(Error::ResolutionTooSmall { .. })));
    }

    #[test]
    fn integrate_matches_known_area() {
        // f = 1 over a 4x4 window integrates to 16 exactly under trapezoid
        let g = synthetic_grid(|_, _| 1.0, 41, 41);
        assert!((g.integrate() - 16.0).abs() < 1e-12);
    }

    #[test]
    fn gaussian_peak_located_and_refined() {
        // peak deliberately off the lattice and off cell midpoints
        let g = synthetic_grid(
            |q, p| (-((q - 0.31f64).powi(2) + (p + 0.17f64).powi(2))).exp(),
            101,
            101,
        );
        let peak = locate_peak(&g);
        assert!(!peak.plateau);
        assert!(
            (peak.q_scaled - 0.31).abs() < 5e-3,
            "Q* = {}",
            peak.q_scaled
        );
        assert!(
            (peak.p_scaled + 0.17).abs() < 5e-3,
            "P* = {}",
            peak.p_scaled
        );
        assert!((peak.value - 1.0).abs() < 1e-3);
    }

    #[test]
    fn plateau_flagged() {
        let g = synthetic_grid(|_, _| 2.5, 41, 41);
        assert!(locate_peak(&g).plateau);
    }

    #[test]
    fn identical_grids_have_zero_discrepancy() {
        let g = synthetic_grid(|q, p| (-(q * q + p * p)).exp(), 65, 65);
        let d = compare_level_sets(&g, &g, 0.5).unwrap();
        assert_eq!(d.sym_diff_area, 0.0);
        assert_eq!(d.normalized, 0.0);
        assert!(d.centroid_offset.0.abs() < 1e-12);
    }

    #[test]
    fn shifted_regions_report_their_offset() {
        let a = synthetic_grid(|q, p| (-(q * q + p * p)).exp(), 129, 129);
        let b = synthetic_grid(|q, p| (-((q - 0.5f64).powi(2) + p * p)).exp(), 129, 129);
        let d = compare_level_sets(&a, &b, 0.5).unwrap();
        assert!(d.sym_diff_area > 0.1);
        assert!(
            (d.centroid_offset.0 - 0.5).abs() < 0.02,
            "{:?}",
            d.centroid_offset
        );
        assert!(d.centroid_offset.1.abs() < 0.02);
        // disk of radius sqrt(ln 2): area π ln 2
        let exact = core::f64::consts::PI * (2.0f64).ln();
        assert!((d.wdf_area - exact).abs() < 0.01 * exact);
    }

    #[test]
    fn out_of_range_level_is_missing() {
        let g = synthetic_grid(|q, p| (-(q * q + p * p)).exp(), 65, 65);
        assert!(matches!(
            compare_level_sets(&g, &g, 2.0),
            Err(Error::LevelMissing { .. })
        ));
        let other = synthetic_grid(|q, p| (-(q * q + p * p)).exp(), 33, 33);
        assert!(matches!(
            compare_level_sets(&g, &other, 0.5),
            Err(Error::GridMismatch)
        ));
    }

    #[test]
    fn row_filling_is_partition_independent() {
        let p = MorseParams::new(1.0).unwrap();
        let window = Window::new(-1.0, 2.0, -1.5, 1.5).unwrap();
        let full = sample_wdf_grid(&p, 0, window, 32, 32, 1e-10).unwrap();
        // fill rows in a scrambled order into a second buffer
        let mut values = alloc::vec![0.0; 32 * 32];
        let mut order: Vec<usize> = (0..32).collect();
        order.reverse();
        for &j in &order {
            fill_wdf_row(
                &p,
                0,
                &window,
                32,
                32,
                j,
                1e-10,
                &mut values[j * 32..(j + 1) * 32],
            )
            .unwrap();
        }
        assert_eq!(full.values, values);
    }
}

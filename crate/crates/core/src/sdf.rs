//! Semiclassical distribution function: the orbit time-average of the WDF.
//!
//! For a stationary bound state the SDF at a phase-space point is the mean
//! of ρ over the classical orbit through that point, which makes it a
//! function of the energy ratio ε alone and exactly zero on open
//! trajectories (ε ≥ 1). The time integral over one period is done by a
//! uniform trapezoid rule in θ — spectrally accurate for the smooth
//! periodic integrand — with the point count doubled until the value
//! stabilizes.
//!
//! `SdfProfile` caches ρ_c on an ε grid clustered toward ε = 1 (where the
//! period diverges) and interpolates with a monotonicity-preserving cubic.
//! `RcDensity` carries R_c(E) = T(E) ρ_c(E), whose energy integral equals
//! the WDF mass on the bound region; the deficit from 1 is the mass the
//! WDF leaves on open trajectories.

use crate::classical::{energy_ratio, trajectory, Orbit};
use crate::grid::DensityGrid;
use crate::math;
use crate::quad;
use crate::spectrum::{MorseParams, PhasePoint};
use crate::wigner::wdf;
use crate::Error;
use alloc::boxed::Box;
use alloc::vec::Vec;
use core::f64::consts::PI;

/// Default number of uniform θ samples per orbit period.
pub const DEFAULT_QUAD_POINTS: usize = 256;
const MAX_QUAD_POINTS: usize = 1 << 16;
const ORBIT_CONV_REL: f64 = 1e-6;
const ORBIT_CONV_ABS: f64 = 1e-12;

/// Mean of ρ over one orbit period with exactly `m` uniform θ samples.
pub(crate) fn orbit_mean_fixed(
    params: &MorseParams,
    n: usize,
    eps: f64,
    m: usize,
    offset: f64,
) -> Result<f64, Error> {
    let orbit = Orbit::new(eps, 0.0)?;
    let step = orbit.period_theta / m as f64;
    let mut acc = 0.0;
    for i in 0..m {
        let pt = trajectory(&orbit, params, (i as f64 + offset) * step);
        acc += wdf(params, n, pt)?.rho;
    }
    Ok(acc / m as f64)
}

/// SDF value at energy ratio ε by orbit time-averaging.
///
/// Starts from `quad_points` samples (at least 16) and doubles until two
/// successive refinements agree to 1e-6 relative. Callers with ε ≥ 1 get 0.
pub fn sdf_at_energy(
    params: &MorseParams,
    n: usize,
    eps: f64,
    quad_points: usize,
) -> Result<f64, Error> {
    if quad_points < 16 {
        return Err(Error::QuadPointsTooFew { quad_points });
    }
    assert!(eps >= 0.0, "energy ratio cannot be negative");
    if eps >= 1.0 {
        return Ok(0.0);
    }
    if eps == 0.0 {
        // degenerate orbit: the fixed point at the well bottom
        return Ok(wdf(params, n, PhasePoint::new(0.0, 0.0))?.rho);
    }
    let mut m = quad_points;
    let mut value = orbit_mean_fixed(params, n, eps, m, 0.0)?;
    while m <= MAX_QUAD_POINTS {
        // midpoints of the current sampling refine it to 2m points
        let shifted = orbit_mean_fixed(params, n, eps, m, 0.5)?;
        let refined = 0.5 * (value + shifted);
        if math::abs(refined - value) <= (ORBIT_CONV_REL * math::abs(refined)).max(ORBIT_CONV_ABS) {
            return Ok(refined);
        }
        value = refined;
        m *= 2;
    }
    Err(Error::OrbitAverage { eps })
}

/// SDF at a phase-space point: the orbit average for bound points, exactly
/// zero for open ones.
pub fn sdf_at_point(params: &MorseParams, n: usize, point: PhasePoint) -> Result<f64, Error> {
    let eps = energy_ratio(point, params);
    if eps >= 1.0 {
        return Ok(0.0);
    }
    sdf_at_energy(params, n, eps, DEFAULT_QUAD_POINTS)
}

/// Cached ρ_c(ε) profile with monotone cubic interpolation.
#[derive(Debug, Clone)]
pub struct SdfProfile {
    params: MorseParams,
    n: usize,
    eps: Vec<f64>,
    rho_c: Vec<f64>,
    slopes: Vec<f64>,
    t_quad_points: usize,
}

impl SdfProfile {
    /// Default number of ε grid points.
    pub const DEFAULT_GRID_POINTS: usize = 400;

    /// The ε grid used by [`SdfProfile::build`]: sine-clustered so spacing
    /// shrinks toward ε = 1, where the orbit period diverges.
    pub fn clustered_grid(grid_points: usize) -> Vec<f64> {
        let m = grid_points.max(16);
        (0..m)
            .map(|i| math::sin(0.5 * PI * i as f64 / m as f64))
            .collect()
    }

    /// Tabulate ρ_c on `grid_points` ε values clustered toward ε = 1.
    pub fn build(
        params: &MorseParams,
        n: usize,
        grid_points: usize,
        quad_points: usize,
    ) -> Result<Self, Error> {
        let eps = Self::clustered_grid(grid_points);
        let mut rho_c = Vec::with_capacity(eps.len());
        for &e in &eps {
            rho_c.push(sdf_at_energy(params, n, e, quad_points)?);
        }
        Self::from_samples(params, n, eps, rho_c, quad_points)
    }

    /// Assemble a profile from precomputed (ε, ρ_c) samples — the ε grid
    /// must be strictly ascending inside [0, 1). Lets callers compute the
    /// samples on their own (possibly parallel) schedule.
    pub fn from_samples(
        params: &MorseParams,
        n: usize,
        eps: Vec<f64>,
        rho_c: Vec<f64>,
        quad_points: usize,
    ) -> Result<Self, Error> {
        if eps.len() != rho_c.len()
            || eps.len() < 2
            || eps.windows(2).any(|w| w[0] >= w[1])
            || eps.first().is_none_or(|&e| e < 0.0)
            || eps.last().is_none_or(|&e| e >= 1.0)
        {
            return Err(Error::ProfileMismatch);
        }
        let slopes = pchip_slopes(&eps, &rho_c);
        Ok(SdfProfile {
            params: *params,
            n,
            eps,
            rho_c,
            slopes,
            t_quad_points: quad_points,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.params.lambda()
    }

    pub fn params(&self) -> &MorseParams {
        &self.params
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t_quad_points(&self) -> usize {
        self.t_quad_points
    }

    pub fn eps_grid(&self) -> &[f64] {
        &self.eps
    }

    pub fn values(&self) -> &[f64] {
        &self.rho_c
    }

    /// Interpolated ρ_c(ε); exactly 0 for ε ≥ 1.
    pub fn value(&self, eps: f64) -> f64 {
        if eps >= 1.0 {
            return 0.0;
        }
        if eps <= self.eps[0] {
            return self.rho_c[0];
        }
        let last = self.eps.len() - 1;
        if eps >= self.eps[last] {
            // linear continuation over the (tiny) sliver up to ε = 1
            return self.rho_c[last] + self.slopes[last] * (eps - self.eps[last]);
        }
        // binary search for the segment
        let mut lo = 0;
        let mut hi = last;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.eps[mid] <= eps {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let h = self.eps[hi] - self.eps[lo];
        let t = (eps - self.eps[lo]) / h;
        hermite(
            self.rho_c[lo],
            self.rho_c[hi],
            self.slopes[lo] * h,
            self.slopes[hi] * h,
            t,
        )
    }

    /// Profile lookup at a phase-space point (0 on open trajectories).
    pub fn at_point(&self, point: PhasePoint) -> f64 {
        let eps = energy_ratio(point, &self.params);
        if eps >= 1.0 {
            0.0
        } else {
            self.value(eps)
        }
    }
}

fn hermite(y0: f64, y1: f64, m0: f64, m1: f64, t: f64) -> f64 {
    let t2 = t * t;
    let t3 = t2 * t;
    y0 * (2.0 * t3 - 3.0 * t2 + 1.0)
        + m0 * (t3 - 2.0 * t2 + t)
        + y1 * (-2.0 * t3 + 3.0 * t2)
        + m1 * (t3 - t2)
}

/// Fritsch–Carlson monotonicity-preserving slopes.
fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut d = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        d.push((y[i + 1] - y[i]) / (x[i + 1] - x[i]));
    }
    let mut m = alloc::vec![0.0; n];
    m[0] = d[0];
    m[n - 1] = d[n - 2];
    for i in 1..n - 1 {
        if d[i - 1] * d[i] <= 0.0 {
            m[i] = 0.0;
        } else {
            let h0 = x[i] - x[i - 1];
            let h1 = x[i + 1] - x[i];
            let w1 = 2.0 * h1 + h0;
            let w2 = h1 + 2.0 * h0;
            m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }
    m
}

/// R_c(E) = T(E) ρ_c(E) tabulated on an ε grid.
///
/// The energy measure is dE = D dε with D = λ²/2 in the ħ = a = m = 1
/// units (equivalently dE = (λ/2) dε with E in units of ħω₀).
#[derive(Debug, Clone)]
pub struct RcDensity {
    pub lambda: f64,
    pub n: usize,
    pub eps: Vec<f64>,
    pub r_c: Vec<f64>,
    pub quad_points: usize,
}

impl RcDensity {
    /// dE/dε for E in physical units: the well depth D = λ²/2.
    pub fn energy_per_eps(&self) -> f64 {
        0.5 * self.lambda * self.lambda
    }

    /// dE/dε for E in units of ħω₀: λ/2.
    pub fn energy_per_eps_hw0(&self) -> f64 {
        0.5 * self.lambda
    }
}

/// Tabulate R_c(ε) = T(ε) ρ_c(ε) on the given ε grid (all inside [0, 1)).
pub fn rc_density(
    params: &MorseParams,
    n: usize,
    eps_grid: &[f64],
    quad_points: usize,
) -> Result<RcDensity, Error> {
    let mut r_c = Vec::with_capacity(eps_grid.len());
    for &e in eps_grid {
        let t = crate::classical::period(e, params)?;
        r_c.push(t * sdf_at_energy(params, n, e, quad_points)?);
    }
    Ok(RcDensity {
        lambda: params.lambda(),
        n,
        eps: eps_grid.to_vec(),
        r_c,
        quad_points,
    })
}

/// Bound-region mass ∫ R_c dE over ε ∈ [0, 1).
///
/// With ε = 1 - w² the weight T D dε collapses to the constant 2πλ dw, so
/// the period divergence integrates away exactly:
/// ∫ R_c dE = 2πλ ∫₀¹ ρ_c(1 - w²) dw.
pub fn rc_bound_mass(profile: &SdfProfile) -> f64 {
    let lambda = profile.lambda();
    let panels = 8;
    let mut acc = 0.0;
    for i in 0..panels {
        let a = i as f64 / panels as f64;
        let b = (i + 1) as f64 / panels as f64;
        acc += quad::gauss_legendre_32(|w| profile.value(1.0 - w * w), a, b);
    }
    2.0 * PI * lambda * acc
}

/// A phase-space observable (the Weyl symbol of an operator).
pub struct Observable {
    f: Box<dyn Fn(PhasePoint) -> f64 + Send + Sync>,
    energy_only: bool,
}

impl Observable {
    pub fn new<F: Fn(PhasePoint) -> f64 + Send + Sync + 'static>(f: F) -> Self {
        Observable {
            f: Box::new(f),
            energy_only: false,
        }
    }

    /// Mark the observable as a function of (q, p) through ε alone,
    /// enabling the fast classical-average path.
    pub fn energy_function<F: Fn(PhasePoint) -> f64 + Send + Sync + 'static>(f: F) -> Self {
        Observable {
            f: Box::new(f),
            energy_only: true,
        }
    }

    #[inline]
    pub fn eval(&self, point: PhasePoint) -> f64 {
        (self.f)(point)
    }

    pub fn is_energy_function(&self) -> bool {
        self.energy_only
    }
}

/// Grid quadrature result with the largest |ρ| seen on the window boundary
/// (a support check: the window must contain the distribution).
#[derive(Debug, Clone, Copy)]
pub struct GridAverage {
    pub value: f64,
    pub boundary_max: f64,
}

impl GridAverage {
    pub fn boundary_supported(&self, tol: f64) -> bool {
        self.boundary_max <= tol
    }
}

/// Quantum average ⟨O⟩ = ∬ 𝒪(q, p) ρ(q, p) dq dp by grid quadrature.
///
/// The grid must be a WDF lattice; the scaled cell measure dQ dP equals
/// the canonical dq dp.
pub fn average_quantum(grid: &DensityGrid, obs: &Observable) -> GridAverage {
    let params = MorseParams::new(grid.lambda).expect("grid carries valid lambda");
    let (dq, dp) = (grid.dq(), grid.dp());
    let mut acc = 0.0;
    let mut boundary_max = 0.0f64;
    for j in 0..grid.np {
        for i in 0..grid.nq {
            let rho = grid.value(i, j);
            let w = trapezoid_weight(i, grid.nq) * trapezoid_weight(j, grid.np);
            let pt = PhasePoint::from_scaled(&params, grid.q_at(i), grid.p_at(j));
            acc += w * obs.eval(pt) * rho;
            if i == 0 || j == 0 || i == grid.nq - 1 || j == grid.np - 1 {
                boundary_max = boundary_max.max(math::abs(rho));
            }
        }
    }
    GridAverage {
        value: acc * dq * dp,
        boundary_max,
    }
}

#[inline]
fn trapezoid_weight(i: usize, n: usize) -> f64 {
    if i == 0 || i == n - 1 {
        0.5
    } else {
        1.0
    }
}

/// Classical average ⟨O⟩_c = ∫ ō(E) R_c(E) dE, with ō the orbit mean of
/// the observable (skipped for energy functions, which are orbit constants).
pub fn average_classical(
    profile: &SdfProfile,
    obs: &Observable,
    orbit_points: usize,
) -> Result<f64, Error> {
    let params = *profile.params();
    let lambda = params.lambda();
    let o_bar = |eps: f64| -> f64 {
        let orbit = Orbit::new(eps, 0.0).expect("eps in (0,1) by construction");
        if obs.is_energy_function() {
            // constant on the orbit: any sample point will do
            return obs.eval(trajectory(&orbit, &params, 0.0));
        }
        let m = orbit_points.max(16);
        let step = orbit.period_theta / m as f64;
        let mut acc = 0.0;
        for i in 0..m {
            acc += obs.eval(trajectory(&orbit, &params, i as f64 * step));
        }
        acc / m as f64
    };
    let panels = 8;
    let mut acc = 0.0;
    for i in 0..panels {
        let a = i as f64 / panels as f64;
        let b = (i + 1) as f64 / panels as f64;
        acc += quad::gauss_legendre_32(
            |w| {
                let eps = 1.0 - w * w;
                let rc = profile.value(eps);
                if rc == 0.0 {
                    0.0
                } else {
                    o_bar(eps) * rc
                }
            },
            a,
            b,
        );
    }
    Ok(2.0 * PI * lambda * acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::TrajectoryClass;

    fn params(lambda: f64) -> MorseParams {
        MorseParams::new(lambda).unwrap()
    }

    #[test]
    fn zero_energy_orbit_is_the_well_bottom_value() {
        let p = params(1.0);
        let rho0 = wdf(&p, 0, PhasePoint::new(0.0, 0.0)).unwrap().rho;
        let sdf0 = sdf_at_energy(&p, 0, 0.0, 64).unwrap();
        assert_eq!(rho0, sdf0);
        assert!((sdf0 - 0.145).abs() < 5e-4, "sdf(0) = {sdf0}");
    }

    #[test]
    fn open_region_is_exactly_zero() {
        let p = params(2.0);
        assert_eq!(sdf_at_energy(&p, 0, 1.0, 64).unwrap(), 0.0);
        assert_eq!(sdf_at_energy(&p, 0, 3.7, 64).unwrap(), 0.0);
        let open_pt = PhasePoint::new(0.0, 5.0);
        assert_eq!(sdf_at_point(&p, 0, open_pt).unwrap(), 0.0);
    }

    #[test]
    fn too_few_quad_points_rejected() {
        let p = params(2.0);
        assert!(matches!(
            sdf_at_energy(&p, 0, 0.5, 8),
            Err(Error::QuadPointsTooFew { .. })
        ));
    }

    #[test]
    fn orbit_average_converges_spectrally() {
        let p = params(2.0);
        for eps in [0.3, 0.9] {
            let a = orbit_mean_fixed(&p, 0, eps, 512, 0.0).unwrap();
            let b = orbit_mean_fixed(&p, 0, eps, 1024, 0.0).unwrap();
            assert!((a - b).abs() <= 1e-8 * b.abs(), "eps={eps}: {a} vs {b}");
        }
    }

    #[test]
    fn sdf_constant_on_orbits() {
        let p = params(2.0);
        let orbit = Orbit::new(0.4, 0.0).unwrap();
        let x1 = trajectory(&orbit, &p, 0.9);
        let x2 = trajectory(&orbit, &p, 3.7);
        let v1 = sdf_at_point(&p, 0, x1).unwrap();
        let v2 = sdf_at_point(&p, 0, x2).unwrap();
        assert!((v1 - v2).abs() < 1e-10, "{v1} vs {v2}");
        // and the well bottom point equals the ε = 0 value
        let v0 = sdf_at_point(&p, 0, PhasePoint::new(0.0, 0.0)).unwrap();
        assert_eq!(v0, sdf_at_energy(&p, 0, 0.0, 64).unwrap());
    }

    #[test]
    fn profile_interpolates_the_direct_value() {
        let p = params(2.0);
        let profile = SdfProfile::build(&p, 0, 80, 128).unwrap();
        for eps in [0.123, 0.456, 0.789] {
            let direct = sdf_at_energy(&p, 0, eps, 256).unwrap();
            let interp = profile.value(eps);
            assert!(
                (direct - interp).abs() < 5e-5,
                "eps={eps}: direct {direct} vs interp {interp}"
            );
        }
        assert_eq!(profile.value(1.0), 0.0);
        assert_eq!(profile.value(2.5), 0.0);
    }

    #[test]
    fn profile_point_lookup_respects_classification() {
        let p = params(2.0);
        let profile = SdfProfile::build(&p, 0, 60, 64).unwrap();
        match crate::classical::orbit_from_point(PhasePoint::new(0.5, 0.3), &p) {
            TrajectoryClass::Bound(orbit) => {
                let pt = trajectory(&orbit, &p, 1.0);
                let via_point = profile.at_point(pt);
                let via_eps = profile.value(orbit.eps);
                assert!((via_point - via_eps).abs() < 1e-12);
            }
            _ => panic!("test point should be bound"),
        }
        assert_eq!(profile.at_point(PhasePoint::new(0.0, 4.0)), 0.0);
    }

    #[test]
    fn rc_relates_to_sdf_by_the_period() {
        let p = params(2.0);
        let grid = [0.0, 0.2, 0.5, 0.8];
        let rc = rc_density(&p, 0, &grid, 128).unwrap();
        for (i, &eps) in grid.iter().enumerate() {
            let t = crate::classical::period(eps, &p).unwrap();
            let rho_c = sdf_at_energy(&p, 0, eps, 128).unwrap();
            assert!((rc.r_c[i] / t - rho_c).abs() < 1e-12);
        }
        assert!((rc.energy_per_eps() - 2.0).abs() < 1e-15); // D = λ²/2 = 2
        assert!((rc.energy_per_eps_hw0() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn classical_average_of_momentum_vanishes() {
        let p = params(2.0);
        let profile = SdfProfile::build(&p, 0, 60, 64).unwrap();
        let obs_p = Observable::new(|pt: PhasePoint| pt.p);
        let avg = average_classical(&profile, &obs_p, 256).unwrap();
        assert!(avg.abs() < 1e-10, "<p>_c = {avg}");
    }

    #[test]
    fn energy_fast_path_matches_general_path() {
        let p = params(2.0);
        let profile = SdfProfile::build(&p, 0, 60, 64).unwrap();
        let lambda = p.lambda();
        let fast = Observable::energy_function(move |pt: PhasePoint| {
            let v = pt.p / lambda;
            v * v + crate::spectrum::potential_ratio(pt.q)
        });
        let slow = Observable::new(move |pt: PhasePoint| {
            let v = pt.p / lambda;
            v * v + crate::spectrum::potential_ratio(pt.q)
        });
        let a = average_classical(&profile, &fast, 512).unwrap();
        let b = average_classical(&profile, &slow, 512).unwrap();
        assert!((a - b).abs() <= 1e-8 * a.abs().max(1.0), "{a} vs {b}");
    }
}

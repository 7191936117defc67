//! Exact classical dynamics in the Morse well.
//!
//! Bound motion (energy ratio ε = E/D < 1) has the closed-form trajectory
//!
//! ```text
//! q(θ) = ln{ [1 + √ε sin(√(1-ε) (θ - θ₀))] / (1 - ε) }
//! p(θ) = ħλ √ε √(1-ε) cos(√(1-ε) (θ - θ₀)) / [1 + √ε sin(√(1-ε) (θ - θ₀))]
//! ```
//!
//! in the dimensionless time θ = ω₀ t, with period 2π/√(1-ε) in θ. Energies
//! ε ≥ 1 correspond to unbounded motion and are only classified here.

use crate::math;
use crate::spectrum::{potential_ratio, MorseParams, PhasePoint};
use crate::Error;

/// Where a phase-space point sits relative to the dissociation threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyClass {
    /// ε < 1: periodic orbit.
    Bound,
    /// ε = 1 exactly: the separatrix (measure zero).
    Threshold,
    /// ε > 1: unbounded trajectory.
    Open,
}

/// A bound orbit: energy ratio, phase offset, and period in θ units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Orbit {
    pub eps: f64,
    pub theta0: f64,
    pub period_theta: f64,
}

impl Orbit {
    pub fn new(eps: f64, theta0: f64) -> Result<Self, Error> {
        if !(0.0..1.0).contains(&eps) {
            return Err(Error::PeriodDiverges { eps });
        }
        Ok(Orbit {
            eps,
            theta0,
            period_theta: 2.0 * core::f64::consts::PI / math::sqrt(1.0 - eps),
        })
    }
}

/// Result of solving for the orbit through a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrajectoryClass {
    Bound(Orbit),
    /// ε ≥ 1: no closed orbit passes through the point.
    Unbound {
        eps: f64,
    },
}

/// Energy ratio ε(q, p) = (p/ħλ)² + (1 - e^{-q})².
pub fn energy_ratio(point: PhasePoint, params: &MorseParams) -> f64 {
    let v = point.p / params.lambda();
    v * v + potential_ratio(point.q)
}

pub fn classify(eps: f64) -> EnergyClass {
    if eps < 1.0 {
        EnergyClass::Bound
    } else if eps == 1.0 {
        EnergyClass::Threshold
    } else {
        EnergyClass::Open
    }
}

/// Phase-space point of a bound orbit at dimensionless time θ.
pub fn trajectory(orbit: &Orbit, params: &MorseParams, theta: f64) -> PhasePoint {
    let eps = orbit.eps;
    if eps == 0.0 {
        return PhasePoint::new(0.0, 0.0);
    }
    let om = math::sqrt(1.0 - eps);
    let se = math::sqrt(eps);
    let phi = om * (theta - orbit.theta0);
    let (s, c) = (math::sin(phi), math::cos(phi));
    let denom = 1.0 + se * s; // ≥ 1 - √ε > 0 for ε < 1
    PhasePoint::new(
        math::ln(denom / (1.0 - eps)),
        params.lambda() * se * om * c / denom,
    )
}

/// Solve for the orbit through `point`; unbounded points are classified only.
pub fn orbit_from_point(point: PhasePoint, params: &MorseParams) -> TrajectoryClass {
    let eps = energy_ratio(point, params);
    if eps >= 1.0 {
        return TrajectoryClass::Unbound { eps };
    }
    if eps == 0.0 {
        return TrajectoryClass::Bound(Orbit::new(0.0, 0.0).expect("eps 0 is bound"));
    }
    let om = math::sqrt(1.0 - eps);
    let se = math::sqrt(eps);
    let eq = math::exp(point.q);
    // invert q: 1 + √ε sin φ = (1-ε) e^q, written to avoid cancellation at q ≈ 0
    let sin_phi = (math::exp_m1(point.q) - eps * eq) / se;
    // invert p: cos φ = p (1-ε) e^q / (λ √ε √(1-ε))
    let cos_phi = point.p * eq * om / (params.lambda() * se);
    let phi = math::atan2(sin_phi, cos_phi);
    // the trajectory phase at θ = 0 is -√(1-ε) θ₀
    let theta0 = -phi / om;
    TrajectoryClass::Bound(Orbit {
        eps,
        theta0,
        period_theta: 2.0 * core::f64::consts::PI / om,
    })
}

/// Orbit period in physical time: T = 2π/(ω₀ √(1-ε)).
pub fn period(eps: f64, params: &MorseParams) -> Result<f64, Error> {
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::PeriodDiverges { eps });
    }
    Ok(2.0 * core::f64::consts::PI / (params.omega0() * math::sqrt(1.0 - eps)))
}

/// Finite-difference probe of the (E, t) → (q, p) area element.
#[derive(Debug, Clone, Copy)]
pub struct JacobianProbe {
    /// Determinant ∂(p, q)/∂(E, t); analytically 1 on every bound orbit.
    pub j: f64,
    /// Set when the probe point sits close to a turning point, where the
    /// finite-difference stencil loses accuracy.
    pub near_turning: bool,
}

/// Check the unit Jacobian of the energy-time parametrization at (E, t).
///
/// `e` is the physical energy (0 < E < D), `t` physical time along the orbit
/// with phase offset zero. Central differences with relative step 1e-6.
pub fn jacobian_check(e: f64, t: f64, params: &MorseParams) -> Result<JacobianProbe, Error> {
    let d = params.well_depth();
    let eps = e / d;
    if !(0.0 < eps && eps < 1.0) {
        return Err(Error::PeriodDiverges { eps });
    }
    let t_period = period(eps, params)?;
    let de = 1e-6 * e;
    let dt = 1e-6 * t_period;
    let omega0 = params.omega0();

    let at = |energy: f64, time: f64| -> PhasePoint {
        let orbit = Orbit::new(energy / d, 0.0).expect("bound by construction");
        trajectory(&orbit, params, omega0 * time)
    };

    let pe_hi = at(e + de, t);
    let pe_lo = at(e - de, t);
    let pt_hi = at(e, t + dt);
    let pt_lo = at(e, t - dt);

    let dq_de = (pe_hi.q - pe_lo.q) / (2.0 * de);
    let dp_de = (pe_hi.p - pe_lo.p) / (2.0 * de);
    let dq_dt = (pt_hi.q - pt_lo.q) / (2.0 * dt);
    let dp_dt = (pt_hi.p - pt_lo.p) / (2.0 * dt);

    let center = at(e, t);
    let p_scale = params.lambda() * math::sqrt(eps * (1.0 - eps));
    Ok(JacobianProbe {
        j: dp_de * dq_dt - dq_de * dp_dt,
        near_turning: math::abs(center.p) < 0.05 * p_scale,
    })
}

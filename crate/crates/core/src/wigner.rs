//! Wigner distribution function of Morse bound states.
//!
//! The WDF reduces to a double sum over the complex-order integral
//!
//! ```text
//! K_ν(ξ) = (1/2) ∫₀^∞ e^{-(ξ/2)(τ + 1/τ)} τ^{ν-1} dτ,   ν = N + 2ik,
//! ```
//!
//! of which only the real part enters. Writing τ = e^u and z = 2ku turns
//! Re K_ν into ∫₀^∞ f_N(z) cos z dz with a positive kernel
//! f_N(z) = (1/2k) e^{-ξ cosh(z/2k)} cosh(Nz/2k). Direct quadrature of that
//! oscillatory integral loses digits to cancellation, so `knu_series`
//! telescopes the tail into a series of strictly one-signed [0, π/2]
//! integrals (each smooth enough for a fixed 32-point Gauss–Legendre rule),
//! subtracting the accumulated series from the head integral once at the
//! end. For N ≥ 1 the kernel first rises through up to N extrema — located
//! as roots of a degree-N polynomial in y = cosh(z/2k) — and the series is
//! started past the last of them, with the non-monotone head handled by
//! adaptive quadrature.
//!
//! `knu_oracle` is the slow, algorithm-independent check: brute-force
//! adaptive quadrature of the defining integral. `knu_axis` covers k = 0,
//! where K reduces to the ordinary modified Bessel function K_N.
//!
//! All internal K evaluations carry an e^{ξ} scaling (the integrand is
//! evaluated as e^{-ξ(cosh w - 1)}) so the ξ^{2λ-1} e^{-ξ}-type products in
//! the WDF prefactor can be assembled in the log domain without underflow.

use crate::math;
use crate::quad;
use crate::special::ln_gamma;
use crate::spectrum::{ln_b_coefficient, MorseParams, PhasePoint};
use crate::Error;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

/// Complex order ν = N + 2ik of the kernel integral; k is the momentum p/ħ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexOrder {
    pub n: i32,
    pub k: f64,
}

impl ComplexOrder {
    pub fn new(n: i32, k: f64) -> Self {
        ComplexOrder { n, k }
    }
}

/// Outcome of a series evaluation of Re K_ν.
#[derive(Debug, Clone, Copy)]
pub struct KnuResult {
    pub re_k: f64,
    pub est_err: f64,
    pub terms_used: usize,
}

/// One WDF sample, in units of ħ⁻¹.
#[derive(Debug, Clone, Copy)]
pub struct WdfSample {
    pub point: PhasePoint,
    pub rho: f64,
}

/// Momentum integral of the WDF at fixed q (an R(q) estimate).
#[derive(Debug, Clone, Copy)]
pub struct Marginal {
    pub value: f64,
    /// Largest |ρ| seen at the ±p_max boundary of the integration window.
    pub boundary_max: f64,
}

impl Marginal {
    /// True when the momentum cutoff was too small for a 1e-10-clean tail.
    pub fn cutoff_warning(&self) -> bool {
        self.boundary_max > 1e-10
    }
}

/// Below this |k| the z = 2ku substitution degenerates; route to `knu_axis`.
pub const K_AXIS_THRESHOLD: f64 = 1e-9;
/// Default relative truncation tolerance of the telescoped series.
pub const DEFAULT_TOL: f64 = 1e-10;
const ABS_FLOOR: f64 = 1e-15;
const MAX_TERMS: usize = 1_000_000;

/// Scaled kernel (1/2k) e^{-ξ(cosh(z/2k) - 1)} cosh(N z/2k), safe for any z.
#[inline]
fn kernel_scaled(inv_2k: f64, n_abs: u32, xi: f64, z: f64) -> f64 {
    let w = z * inv_2k;
    let cm1 = math::cosh_m1(w);
    if cm1 > 1e308 {
        return 0.0; // decay term has won long before cosh overflows
    }
    let mut e = -xi * cm1;
    if n_abs > 0 {
        e += math::ln_cosh(n_abs as f64 * w);
    }
    inv_2k * math::exp(e)
}

/// Scaled kernel on the u axis: e^{-ξ(cosh u - 1)} cosh(Nu), safe for any u.
#[inline]
fn kernel_scaled_u(n_abs: u32, xi: f64, u: f64) -> f64 {
    let cm1 = math::cosh_m1(u);
    if cm1 > 1e308 {
        return 0.0;
    }
    let mut e = -xi * cm1;
    if n_abs > 0 {
        e += math::ln_cosh(n_abs as f64 * u);
    }
    math::exp(e)
}

/// Upper bound on the u-axis kernel maximum, from maximizing
/// -ξ(cosh u - 1) + N u over u ≥ 0.
fn kernel_peak_bound_u(n_abs: u32, xi: f64) -> f64 {
    if n_abs == 0 {
        return 1.0;
    }
    let nf = n_abs as f64;
    let r = nf / xi;
    let m = xi - math::sqrt(xi * xi + nf * nf) + nf * math::ln(r + math::sqrt(1.0 + r * r));
    math::exp(m.max(0.0))
}

/// Breakpoints for adaptive integration of kernel × cos(2ku) over [0, u_end]:
/// uniform panels no wider than half an oscillation period nor a decay scale.
fn oscillation_breaks(u_end: f64, two_k: f64) -> Vec<f64> {
    let per_osc = u_end * two_k.max(2.0) / core::f64::consts::PI;
    let panels = (math::ceil(per_osc) as usize).clamp(4, 4096);
    let mut breaks = Vec::with_capacity(panels + 1);
    for i in 0..=panels {
        breaks.push(u_end * i as f64 / panels as f64);
    }
    breaks
}

/// Coefficients A_j of cosh(Nu) = Σ_j A_j (-1)^j y^{N-2j} with y = cosh u.
fn cosh_multiple_coeffs(n: u32) -> Vec<f64> {
    let half = (n / 2) as usize;
    let mut a = Vec::with_capacity(half + 1);
    for j in 0..=half {
        let mut acc = 0.0;
        for i in j..=half {
            acc += int_binomial(n, 2 * i as u32) * int_binomial(i as u32, j as u32);
        }
        a.push(acc);
    }
    a
}

fn int_binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Horner evaluation of an ascending-coefficient polynomial.
fn poly_eval(coeffs: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    for &c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn poly_derivative(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| i as f64 * c)
        .collect()
}

/// All real roots of the polynomial inside (lo, hi), ascending.
///
/// Recursive derivative-chain isolation: the roots of p' split (lo, hi)
/// into monotone pieces, each holding at most one root found by bisection.
fn poly_roots_in(coeffs: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    let mut deg = coeffs.len();
    while deg > 0 && coeffs[deg - 1] == 0.0 {
        deg -= 1;
    }
    let coeffs = &coeffs[..deg];
    let mut roots = Vec::new();
    if deg <= 1 {
        return roots;
    }
    if deg == 2 {
        let r = -coeffs[0] / coeffs[1];
        if r > lo && r < hi {
            roots.push(r);
        }
        return roots;
    }
    let crit = poly_roots_in(&poly_derivative(coeffs), lo, hi);
    let mut edges = Vec::with_capacity(crit.len() + 2);
    edges.push(lo);
    edges.extend_from_slice(&crit);
    edges.push(hi);
    for pair in edges.windows(2) {
        let (mut a, mut b) = (pair[0], pair[1]);
        let (fa, fb) = (poly_eval(coeffs, a), poly_eval(coeffs, b));
        if fa == 0.0 {
            if roots
                .last()
                .is_none_or(|&r| (r - a).abs() > 1e-12 * (1.0 + a.abs()))
            {
                roots.push(a);
            }
            continue;
        }
        if fa * fb > 0.0 {
            continue;
        }
        let mut fa = fa;
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            let fm = poly_eval(coeffs, mid);
            if fm == 0.0 {
                a = mid;
                break;
            }
            if fa * fm < 0.0 {
                b = mid;
            } else {
                a = mid;
                fa = fm;
            }
        }
        roots.push(0.5 * (a + b));
    }
    roots
}

/// Positions z > 0 of the extrema of f_N, ascending. Empty for N = 0, for
/// |k| below the axis threshold, and when the kernel is monotone from z = 0.
pub fn extremum_positions(n: u32, k: f64, xi: f64) -> Vec<f64> {
    let k = math::abs(k);
    if n == 0 || k < K_AXIS_THRESHOLD {
        return Vec::new();
    }
    // P(y) = Σ_j A_j (-1)^j y^{N-2j}; extrema solve P'(y) = ξ P(y), y > 1
    let a = cosh_multiple_coeffs(n);
    let deg = n as usize;
    let mut p = alloc::vec![0.0; deg + 1];
    for (j, &aj) in a.iter().enumerate() {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        p[deg - 2 * j] = sign * aj;
    }
    let dp = poly_derivative(&p);
    let mut g = alloc::vec![0.0; deg + 1];
    for (i, &c) in dp.iter().enumerate() {
        g[i] += c;
    }
    for (i, &c) in p.iter().enumerate() {
        g[i] -= xi * c;
    }
    // Cauchy bound on root magnitude
    let lead = g[deg];
    let mut bound = 0.0f64;
    for &c in &g[..deg] {
        bound = bound.max(math::abs(c / lead));
    }
    let hi = 2.0 + bound;
    let ys = poly_roots_in(&g, 1.0 + 1e-14, hi);
    ys.into_iter().map(|y| 2.0 * k * math::acosh(y)).collect()
}

/// Result of the scaled series evaluation: (e^ξ Re K, error estimate, terms).
fn re_knu_scaled_series(n_abs: u32, k: f64, xi: f64, tol: f64) -> Result<(f64, f64, usize), Error> {
    let inv_2k = 1.0 / (2.0 * k);
    let two_k = 2.0 * k;
    let f = |z: f64| kernel_scaled(inv_2k, n_abs, xi, z);

    // start the series past the last extremum, where f is monotone
    let z_last = extremum_positions(n_abs, k, xi)
        .last()
        .copied()
        .unwrap_or(0.0);
    let s0 = if z_last <= FRAC_PI_2 {
        0usize
    } else {
        math::ceil((z_last / PI - 0.5) / 2.0) as usize
    };
    let head_end = 2.0 * PI * s0 as f64 + FRAC_PI_2;

    // The head ∫₀^{head_end} f(z) cos z dz is integrated on the u = z/2k
    // axis, where the kernel varies on an O(1) scale for every k; its
    // support beyond the e^{-760} cutoff carries nothing.
    let u_end = (head_end * inv_2k).min(integrand_cutoff(n_abs, xi));
    let peak_u = kernel_peak_bound_u(n_abs, xi);
    let head = quad::adaptive_with_breaks(
        |u| kernel_scaled_u(n_abs, xi, u) * math::cos(two_k * u),
        &oscillation_breaks(u_end, two_k),
        3e-14 * peak_u * u_end.max(1.0),
        1e-13,
        8000,
        "K_nu head integral",
    )?;

    let scale = 1.0 + math::abs(head.value);
    let bracket = |x: f64, s: usize| -> f64 {
        let a = (2 * s + 1) as f64 * PI - x;
        let b = (2 * s + 1) as f64 * PI + x;
        (f(a) - f(a + PI)) + (f(b) - f(b + PI))
    };

    // Kahan-compensated accumulation of the one-signed series terms;
    // the subtraction from the head happens exactly once at the end.
    let mut series = 0.0f64;
    let mut comp = 0.0f64;
    let mut terms = 0usize;
    let mut last_mags = [f64::INFINITY; 2];
    let mut sign_violation = false;
    let mut s = s0;
    loop {
        let t_s = quad::gauss_legendre_32(|x| math::cos(x) * bracket(x, s), 0.0, FRAC_PI_2);
        terms += 1;
        if t_s < -1e-12 * scale {
            sign_violation = true;
            break;
        }
        let y = t_s - comp;
        let t = series + y;
        comp = (t - series) - y;
        series = t;

        let acc = head.value - series;
        let threshold = (tol * math::abs(acc)).max(ABS_FLOOR * scale);
        last_mags = [last_mags[1], math::abs(t_s)];
        if last_mags[0] <= threshold && last_mags[1] <= threshold {
            break;
        }
        if terms >= MAX_TERMS {
            return Err(Error::SeriesDivergence { xi, k, terms });
        }
        s += 1;
    }

    if sign_violation {
        // monotone-tail assumption failed; fall back to brute quadrature
        let (v, e) = re_knu_scaled_quadrature(n_abs, k, xi)?;
        return Ok((v, e, terms));
    }

    let value = head.value - series;
    let est_err = (head.abs_err + last_mags[1] + 1e-15 * math::abs(series)).max(0.0);
    Ok((value, est_err, terms))
}

/// u beyond which the (scaled) integrand magnitude is below e^{-760}.
fn integrand_cutoff(n_abs: u32, xi: f64) -> f64 {
    let nf = n_abs as f64;
    let mut u = 1.0f64;
    loop {
        let cm1 = math::cosh_m1(u);
        if cm1 > 1e308 || -xi * cm1 + nf * u < -760.0 {
            return u;
        }
        u *= 1.5;
        if u > 1e9 {
            return u;
        }
    }
}

/// Brute-force adaptive quadrature of e^ξ Re K_ν: the oracle route.
fn re_knu_scaled_quadrature(n_abs: u32, k: f64, xi: f64) -> Result<(f64, f64), Error> {
    let u_max = integrand_cutoff(n_abs, xi);
    let two_k = 2.0 * k;
    let g = |u: f64| kernel_scaled_u(n_abs, xi, u) * math::cos(two_k * u);
    let peak_u = kernel_peak_bound_u(n_abs, xi);
    let r = quad::adaptive_with_breaks(
        g,
        &oscillation_breaks(u_max, two_k),
        3e-14 * peak_u * u_max.max(1.0),
        1e-11,
        20_000,
        "K_nu oracle quadrature",
    )?;
    Ok((r.value, r.abs_err))
}

/// e^ξ K_N(ξ) for integer order, by adaptive quadrature on the u axis.
fn knu_axis_scaled(n_abs: u32, xi: f64) -> (f64, f64) {
    let u_max = integrand_cutoff(n_abs, xi);
    let g = |u: f64| kernel_scaled_u(n_abs, xi, u);
    // positive smooth integrand; seed a few geometric panels so a peak
    // sitting far from the midpoint cannot hide from the first pass
    let mut breaks = alloc::vec![0.0];
    let mut x = (u_max / 64.0).min(0.5);
    while x < u_max {
        breaks.push(x);
        x *= 2.0;
    }
    breaks.push(u_max);
    let r = quad::adaptive_with_breaks(g, &breaks, 1e-300, 1e-13, 20_000, "K_N axis quadrature")
        .expect("axis integrand is smooth and positive");
    (r.value, r.abs_err)
}

/// Dispatch: scaled Re K_{N+2ik}(ξ) through the series, the axis rule for
/// |k| under the threshold.
pub(crate) fn re_knu_scaled(
    n_abs: u32,
    k: f64,
    xi: f64,
    tol: f64,
) -> Result<(f64, f64, usize), Error> {
    let k = math::abs(k);
    if k < K_AXIS_THRESHOLD {
        let (v, e) = knu_axis_scaled(n_abs, xi);
        Ok((v, e, 1))
    } else {
        re_knu_scaled_series(n_abs, k, xi, tol)
    }
}

/// Re K_ν(ξ) by the sign-stable telescoped series.
///
/// `tol` is the relative truncation tolerance, valid in (0, 1e-3]; orders
/// with |k| below [`K_AXIS_THRESHOLD`] route to the k = 0 quadrature.
pub fn knu_series(order: ComplexOrder, xi: f64, tol: f64) -> Result<KnuResult, Error> {
    assert!(xi > 0.0, "knu_series requires xi > 0");
    if !(tol > 0.0 && tol <= 1e-3) {
        return Err(Error::InvalidTolerance { tol });
    }
    let (v, e, terms) = re_knu_scaled(order.n.unsigned_abs(), order.k, xi, tol)?;
    let unscale = math::exp(-xi);
    Ok(KnuResult {
        re_k: v * unscale,
        est_err: e * unscale,
        terms_used: terms,
    })
}

/// K_N(ξ) for non-negative integer order: the k = 0 axis of the kernel.
pub fn knu_axis(n: u32, xi: f64) -> f64 {
    assert!(xi > 0.0, "knu_axis requires xi > 0");
    let (v, _) = knu_axis_scaled(n, xi);
    v * math::exp(-xi)
}

/// Re K_ν(ξ) by direct adaptive quadrature of the defining integral:
/// slower than the series but independent of it.
pub fn knu_oracle(order: ComplexOrder, xi: f64) -> Result<f64, Error> {
    assert!(xi > 0.0, "knu_oracle requires xi > 0");
    let (v, _) = re_knu_scaled_quadrature(order.n.unsigned_abs(), math::abs(order.k), xi)?;
    Ok(v * math::exp(-xi))
}

/// WDF of bound state n at a phase-space point, with the default series
/// tolerance.
pub fn wdf(params: &MorseParams, n: usize, point: PhasePoint) -> Result<WdfSample, Error> {
    wdf_with_tol(params, n, point, DEFAULT_TOL)
}

/// WDF of bound state n at a phase-space point.
///
/// ρ = (2/πħ) N² ξ^{2λ-2n-1} Σ_{r,s} b_r b_s ξ^{r+s} Re K_{s-r+2ik}(ξ),
/// assembled in the log domain; ħ = 1 so the result is in units of ħ⁻¹.
pub fn wdf_with_tol(
    params: &MorseParams,
    n: usize,
    point: PhasePoint,
    tol: f64,
) -> Result<WdfSample, Error> {
    let num = params.num_levels();
    if n >= num {
        return Err(Error::LevelOutOfRange { n, num_levels: num });
    }
    let lambda = params.lambda();
    let xi = params.xi(point.q);
    if xi <= 0.0 || !xi.is_finite() {
        // q at either infinity: the distribution has decayed to nothing
        return Ok(WdfSample { point, rho: 0.0 });
    }
    let k = math::abs(point.p);

    // one K evaluation per distinct |s - r|
    let mut kvals = Vec::with_capacity(n + 1);
    for m in 0..=n as u32 {
        let (v, _e, _t) = re_knu_scaled(m, k, xi, tol)?;
        kvals.push(v);
    }

    let ln_xi = math::ln(xi);
    let two_s = 2.0 * lambda - 2.0 * n as f64 - 1.0;
    // ln[(2/π) N² ξ^{2λ-2n-1} e^{-ξ}]; the e^{-ξ} cancels the K scaling
    let l0 = math::ln(2.0 / PI) + math::ln(two_s) + ln_gamma(n as f64 + 1.0)
        - ln_gamma(2.0 * lambda - n as f64)
        + two_s * ln_xi
        - xi;

    let b: Vec<(f64, f64)> = (0..=n).map(|j| ln_b_coefficient(lambda, n, j)).collect();

    // max-exponent factoring of the signed double sum
    let mut terms: Vec<(f64, f64)> = Vec::with_capacity((n + 1) * (n + 1));
    let mut m_max = f64::NEG_INFINITY;
    for r in 0..=n {
        for s in 0..=n {
            let kv = kvals[r.abs_diff(s)];
            if kv == 0.0 {
                continue;
            }
            let m = b[r].0 + b[s].0 + (r + s) as f64 * ln_xi + math::ln(math::abs(kv));
            let sign = b[r].1 * b[s].1 * if kv < 0.0 { -1.0 } else { 1.0 };
            terms.push((m, sign));
            if m > m_max {
                m_max = m;
            }
        }
    }
    if terms.is_empty() {
        return Ok(WdfSample { point, rho: 0.0 });
    }
    let mut acc = 0.0;
    for &(m, sign) in &terms {
        acc += sign * math::exp(m - m_max);
    }
    let rho = math::exp(l0 + m_max) * acc;
    Ok(WdfSample { point, rho })
}

/// Trapezoid integral of ρ over p ∈ [-p_max, p_max] at fixed q,
/// approximating the position density R(q) = ∫ ρ dp = |ψ_n(q)|².
pub fn wdf_marginal_position(
    params: &MorseParams,
    n: usize,
    q: f64,
    p_max: f64,
    dp: f64,
) -> Result<Marginal, Error> {
    assert!(p_max > 0.0 && dp > 0.0 && dp < p_max);
    let steps = math::round(2.0 * p_max / dp).max(2.0) as usize;
    let h = 2.0 * p_max / steps as f64;
    let mut acc = 0.0;
    let mut boundary_max = 0.0f64;
    for i in 0..=steps {
        let p = -p_max + i as f64 * h;
        let rho = wdf(params, n, PhasePoint::new(q, p))?.rho;
        let w = if i == 0 || i == steps { 0.5 } else { 1.0 };
        acc += w * rho;
        if i == 0 || i == steps {
            boundary_max = boundary_max.max(math::abs(rho));
        }
    }
    Ok(Marginal {
        value: acc * h,
        boundary_max,
    })
}

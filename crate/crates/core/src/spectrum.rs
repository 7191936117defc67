//! Morse-oscillator bound-state spectrum, wavefunctions, and scalings.
//!
//! The well depth enters only through λ = sqrt(2 m D)/(a ħ); with
//! ħ = a = m = 1 the depth is D = λ²/2 and the harmonic frequency at the
//! well bottom is ω₀ = λ. Energies come in two equivalent normalizations:
//! the ratio ε_n = 𝓔_n/D ∈ (0, 1) and E_n = 𝓔_n/(ħω₀) = ε_n λ/2.
//!
//! Wavefunctions are expressed in the exponential coordinate ξ = 2λ e^{-q};
//! they are ξ^s e^{-ξ/2} times a generalized Laguerre polynomial, with the
//! prefactor assembled in the log domain so large λ and large |q| cannot
//! overflow.

use crate::math;
use crate::special::{binomial, ln_binomial, ln_gamma};
use crate::Error;
use alloc::vec::Vec;

/// Morse well parametrized by the dimensionless depth λ (must exceed 1/2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MorseParams {
    lambda: f64,
}

impl MorseParams {
    pub fn new(lambda: f64) -> Result<Self, Error> {
        if !lambda.is_finite() || lambda <= 0.5 {
            return Err(Error::NoBoundState { lambda });
        }
        Ok(MorseParams { lambda })
    }

    #[inline]
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Well depth D = λ²/2 (ħ = a = m = 1).
    #[inline]
    pub fn well_depth(&self) -> f64 {
        0.5 * self.lambda * self.lambda
    }

    /// Small-oscillation frequency ω₀ = λ.
    #[inline]
    pub fn omega0(&self) -> f64 {
        self.lambda
    }

    /// Exponential coordinate ξ = 2λ e^{-q}.
    #[inline]
    pub fn xi(&self, q: f64) -> f64 {
        2.0 * self.lambda * math::exp(-q)
    }

    /// Number of bound levels: one more than the largest integer strictly
    /// below λ - 1/2. A level sitting exactly at the dissociation threshold
    /// (half-integer λ) is not counted.
    pub fn num_levels(&self) -> usize {
        let t = self.lambda - 0.5;
        let fl = math::floor(t);
        if fl == t {
            t as usize
        } else {
            fl as usize + 1
        }
    }

    /// All bound levels in order of increasing energy.
    pub fn levels(&self) -> Vec<QuantumLevel> {
        (0..self.num_levels())
            .map(|n| eigenvalue(self, n).expect("n < num_levels"))
            .collect()
    }
}

/// A bound level: quantum number and its energy in both normalizations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumLevel {
    pub n: usize,
    /// ε_n = 𝓔_n / D
    pub eps_n: f64,
    /// E_n = 𝓔_n / (ħ ω₀) = ε_n λ / 2
    pub e_n: f64,
}

/// Number of bound levels of the well, as a free function.
pub fn num_levels(params: &MorseParams) -> usize {
    params.num_levels()
}

/// Energy of level `n`.
pub fn eigenvalue(params: &MorseParams, n: usize) -> Result<QuantumLevel, Error> {
    let num = params.num_levels();
    if n >= num {
        return Err(Error::LevelOutOfRange { n, num_levels: num });
    }
    let lambda = params.lambda();
    let half = n as f64 + 0.5;
    let e_n = half - half * half / (2.0 * lambda);
    let eps_n = 2.0 * e_n / lambda;
    Ok(QuantumLevel { n, eps_n, e_n })
}

/// The Laguerre-type polynomial sum_{j=0}^{n} C(n + 2s, n - j) (-ξ)^j / j!.
///
/// With the gamma-function extension of the binomial this equals the
/// standard generalized Laguerre polynomial L_n^{(2s)}(ξ).
pub fn laguerre_poly(n: usize, s: f64, xi: f64) -> f64 {
    let a = n as f64 + 2.0 * s;
    let mut acc = 0.0;
    let mut pow = 1.0; // (-ξ)^j / j!
    for j in 0..=n {
        if j > 0 {
            pow *= -xi / j as f64;
        }
        acc += binomial(a, n - j) * pow;
    }
    acc
}

/// A bound-state wavefunction with its normalization precomputed.
#[derive(Debug, Clone, Copy)]
pub struct BoundState {
    lambda: f64,
    n: usize,
    /// exponent s = λ - n - 1/2 > 0
    s: f64,
    ln_norm: f64,
}

impl BoundState {
    pub fn new(params: &MorseParams, n: usize) -> Result<Self, Error> {
        let num = params.num_levels();
        if n >= num {
            return Err(Error::LevelOutOfRange { n, num_levels: num });
        }
        let lambda = params.lambda();
        let two_s = 2.0 * lambda - 2.0 * (n as f64) - 1.0;
        let ln_norm =
            0.5 * (math::ln(two_s) + ln_gamma(n as f64 + 1.0) - ln_gamma(2.0 * lambda - n as f64));
        Ok(BoundState {
            lambda,
            n,
            s: 0.5 * two_s,
            ln_norm,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// ψ_n(q) = N e^{-ξ/2} ξ^s L_n(ξ) with ξ = 2λ e^{-q}.
    pub fn eval(&self, q: f64) -> f64 {
        let xi = 2.0 * self.lambda * math::exp(-q);
        self.eval_xi(xi)
    }

    pub fn eval_xi(&self, xi: f64) -> f64 {
        if xi <= 0.0 {
            return 0.0;
        }
        let lead = self.ln_norm + self.s * math::ln(xi) - 0.5 * xi;
        // Below double-precision underflow the polynomial factor is moot
        // (and could be infinite for enormous ξ, turning 0 * inf into NaN).
        if lead < -746.0 {
            return 0.0;
        }
        math::exp(lead) * laguerre_poly(self.n, self.s, xi)
    }

    /// |ψ_n(q)|².
    pub fn density(&self, q: f64) -> f64 {
        let v = self.eval(q);
        v * v
    }
}

/// Wavefunction amplitude ψ_n(q), one-shot form.
pub fn wavefunction(params: &MorseParams, n: usize, q: f64) -> Result<f64, Error> {
    Ok(BoundState::new(params, n)?.eval(q))
}

/// Dimensionless potential V(Q) = (λ/2)(1 - e^{-Q/√λ})² in ħω₀ units.
pub fn potential_scaled(params: &MorseParams, q_scaled: f64) -> f64 {
    let lambda = params.lambda();
    let b = -math::exp_m1(-q_scaled / math::sqrt(lambda));
    0.5 * lambda * b * b
}

/// Potential in well-depth units: (1 - e^{-q})², the potential part of ε.
pub fn potential_ratio(q: f64) -> f64 {
    let b = -math::exp_m1(-q);
    b * b
}

/// A point (q, p) in canonical coordinates (q = a x, p in units of ħ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub q: f64,
    pub p: f64,
}

impl PhasePoint {
    pub fn new(q: f64, p: f64) -> Self {
        PhasePoint { q, p }
    }

    /// Harmonic-normalized coordinates (Q, P) = (√λ q, p/√λ).
    pub fn to_scaled(&self, params: &MorseParams) -> (f64, f64) {
        let r = math::sqrt(params.lambda());
        (self.q * r, self.p / r)
    }

    pub fn from_scaled(params: &MorseParams, q_scaled: f64, p_scaled: f64) -> Self {
        let r = math::sqrt(params.lambda());
        PhasePoint {
            q: q_scaled / r,
            p: p_scaled * r,
        }
    }
}

/// ln b(λ, n, j) and its sign, where b = C(2λ-n-1, n-j) (-1)^j / j!.
///
/// These are the coefficients coupling the Wigner sum to K_ν.
pub(crate) fn ln_b_coefficient(lambda: f64, n: usize, j: usize) -> (f64, f64) {
    let a = 2.0 * lambda - n as f64 - 1.0;
    let ln_mag = ln_binomial(a, n - j) - ln_gamma(j as f64 + 1.0);
    let sign = if j.is_multiple_of(2) { 1.0 } else { -1.0 };
    (ln_mag, sign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad;

    fn params(lambda: f64) -> MorseParams {
        MorseParams::new(lambda).unwrap()
    }

    #[test]
    fn level_counts() {
        assert_eq!(params(1.0).num_levels(), 1);
        assert_eq!(params(2.0).num_levels(), 2);
        assert_eq!(params(4.0).num_levels(), 4);
        assert_eq!(params(10.0).num_levels(), 10);
        assert_eq!(params(0.6).num_levels(), 1);
        // a level exactly at threshold is excluded
        assert_eq!(params(1.5).num_levels(), 1);
        assert_eq!(params(2.5).num_levels(), 2);
    }

    #[test]
    fn no_bound_state_below_half() {
        assert!(MorseParams::new(0.5).is_err());
        assert!(MorseParams::new(0.4).is_err());
        assert!(MorseParams::new(-1.0).is_err());
        assert!(MorseParams::new(f64::NAN).is_err());
    }

    #[test]
    fn eigenvalue_closed_forms() {
        let l1 = eigenvalue(&params(1.0), 0).unwrap();
        assert!((l1.eps_n - 0.75).abs() < 1e-15);
        assert!((l1.e_n - 0.375).abs() < 1e-15);

        let l10 = eigenvalue(&params(10.0), 0).unwrap();
        assert!((l10.e_n - 0.4875).abs() < 1e-15);

        let l2 = eigenvalue(&params(2.0), 1).unwrap();
        assert!((l2.eps_n - 0.9375).abs() < 1e-15);
    }

    #[test]
    fn eigenvalues_increasing_and_bounded() {
        for lambda in [1.0, 2.0, 4.0, 10.0] {
            let p = params(lambda);
            let mut prev = 0.0;
            for lev in p.levels() {
                assert!(
                    lev.eps_n > 0.0 && lev.eps_n < 1.0,
                    "eps_{} = {}",
                    lev.n,
                    lev.eps_n
                );
                assert!(lev.eps_n > prev);
                // the two normalizations agree identically
                assert!((lev.e_n - lev.eps_n * lambda / 2.0).abs() < 1e-15);
                prev = lev.eps_n;
            }
        }
    }

    #[test]
    fn out_of_range_level_rejected() {
        assert!(eigenvalue(&params(1.0), 1).is_err());
        assert!(wavefunction(&params(2.0), 2, 0.0).is_err());
    }

    #[test]
    fn laguerre_base_cases() {
        assert_eq!(laguerre_poly(0, 3.3, 7.0), 1.0);
        assert!((laguerre_poly(1, 1.0, 0.0) - 3.0).abs() < 1e-12);
    }

    // Independent three-term recurrence for L_n^{(alpha)}.
    fn laguerre_recurrence(n: usize, alpha: f64, x: f64) -> f64 {
        let mut l0 = 1.0;
        if n == 0 {
            return l0;
        }
        let mut l1 = 1.0 + alpha - x;
        for k in 1..n {
            let kf = k as f64;
            let l2 = ((2.0 * kf + 1.0 + alpha - x) * l1 - (kf + alpha) * l0) / (kf + 1.0);
            l0 = l1;
            l1 = l2;
        }
        l1
    }

    #[test]
    fn laguerre_matches_recurrence_oracle() {
        // frozen value from the recurrence: L_2^{(1)}(1) = 1/2
        assert!((laguerre_poly(2, 0.5, 1.0) - 0.5).abs() < 1e-12);
        for &(n, s, xi) in &[
            (2usize, 0.5, 1.0),
            (3, 1.7, 0.3),
            (5, 4.25, 2.0),
            (9, 0.25, 7.5),
            (6, 9.5, 12.0),
        ] {
            let direct = laguerre_poly(n, s, xi);
            let rec = laguerre_recurrence(n, 2.0 * s, xi);
            assert!(
                (direct - rec).abs() <= 1e-10 * rec.abs().max(1.0),
                "n={n} s={s} xi={xi}: {direct} vs {rec}"
            );
        }
    }

    #[test]
    fn ground_state_peaks_at_ln_2_for_lambda_1() {
        // λ=1: ψ_0 ∝ ξ^{1/2} e^{-ξ/2}, maximal at ξ = 1, i.e. q = ln 2
        let bs = BoundState::new(&params(1.0), 0).unwrap();
        let q_star = (2.0f64).ln();
        let peak = bs.eval(q_star);
        for dq in [-0.01, 0.01] {
            assert!(bs.eval(q_star + dq) < peak);
        }
    }

    #[test]
    fn wavefunction_tails_underflow_to_zero() {
        let bs = BoundState::new(&params(10.0), 0).unwrap();
        assert_eq!(bs.eval(-90.0), 0.0); // ξ enormous
        assert_eq!(bs.eval(4000.0), 0.0); // ξ → 0
        assert!(bs.eval(-3.0).is_finite());
    }

    #[test]
    fn wavefunction_normalized() {
        let breaks = [
            -8.0, -4.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 40.0, 100.0, 200.0,
        ];
        for (lambda, n) in [(1.0, 0), (2.0, 1), (10.0, 0), (10.0, 9)] {
            let p = params(lambda);
            let bs = BoundState::new(&p, n).unwrap();
            let norm = quad::adaptive_with_breaks(
                |q| bs.density(q),
                &breaks,
                1e-12,
                1e-11,
                4000,
                "norm test",
            )
            .unwrap()
            .value;
            assert!(
                (norm - 1.0).abs() < 1e-8,
                "lambda={lambda} n={n}: norm={norm}"
            );
        }
    }

    #[test]
    fn scaled_round_trip() {
        let p = params(7.3);
        let pt = PhasePoint::new(-1.234, 2.5);
        let (qs, ps) = pt.to_scaled(&p);
        let back = PhasePoint::from_scaled(&p, qs, ps);
        assert!((back.q - pt.q).abs() <= 4.0 * f64::EPSILON * pt.q.abs());
        assert!((back.p - pt.p).abs() <= 4.0 * f64::EPSILON * pt.p.abs());
    }

    #[test]
    fn potential_scaled_consistency() {
        // V(Q) equals (λ/2)(1 - e^{-q})² with Q = √λ q
        let p = params(10.0);
        let q: f64 = 0.31622776601683794; // Q = 1
        let direct = 0.5 * 10.0 * (1.0 - (-q).exp()).powi(2);
        assert!((potential_scaled(&p, 1.0) - direct).abs() < 1e-14);
        assert_eq!(potential_scaled(&p, 0.0), 0.0);
        // λ-independence at fixed small Q as λ grows
        let q_fixed = 0.2;
        let d_small = (potential_scaled(&params(4.0), q_fixed)
            - potential_scaled(&params(10.0), q_fixed))
        .abs();
        let d_large = (potential_scaled(&params(40.0), q_fixed)
            - potential_scaled(&params(100.0), q_fixed))
        .abs();
        assert!(d_large < d_small);
        assert!(d_large < 1e-3);
    }
}

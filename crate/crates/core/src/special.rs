//! Log-gamma and generalized binomial coefficients.
//!
//! Everything downstream (wavefunction norms, Laguerre binomials, Wigner
//! prefactors) works with logarithms of gamma functions so that quantities
//! like ξ^(2λ-1)/Γ(2λ) never overflow on the way to a finite result.

use crate::math;

const LANCZOS_G: f64 = 7.0;

// Godfrey's g = 7, n = 9 coefficient set; accurate to ~1e-15 for x > 0.
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

// 0.5 * ln(2 pi)
const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_7;

/// ln Γ(x) for x > 0 via the Lanczos approximation.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0, "ln_gamma requires x > 0, got {x}");
    if x == 1.0 || x == 2.0 {
        return 0.0;
    }
    if x < 0.5 {
        // Γ(x) = Γ(x + 1) / x
        return ln_gamma(x + 1.0) - math::ln(x);
    }
    let z = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    HALF_LN_TWO_PI + (z + 0.5) * math::ln(t) - t + math::ln(acc)
}

/// ln C(a, m) for real a and integer m with a - m + 1 > 0,
/// using the gamma-function extension of the binomial coefficient.
pub fn ln_binomial(a: f64, m: usize) -> f64 {
    if m == 0 {
        return 0.0; // C(a, 0) = 1 exactly
    }
    let m = m as f64;
    debug_assert!(a + 1.0 > 0.0 && a - m + 1.0 > 0.0);
    ln_gamma(a + 1.0) - ln_gamma(m + 1.0) - ln_gamma(a - m + 1.0)
}

/// C(a, m) evaluated directly; safe for the modest arguments used here.
pub fn binomial(a: f64, m: usize) -> f64 {
    math::exp(ln_binomial(a, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_gamma_matches_factorials() {
        let mut ln_fact = 0.0;
        for n in 1..=20u64 {
            ln_fact += (n as f64).ln();
            let got = ln_gamma(n as f64 + 1.0);
            assert!(
                (got - ln_fact).abs() <= 1e-13 * ln_fact.max(1.0),
                "lgamma({}) = {got}, want {ln_fact}",
                n + 1
            );
        }
    }

    #[test]
    fn ln_gamma_half_integers() {
        // Γ(1/2) = sqrt(pi), Γ(3/2) = sqrt(pi)/2
        let sqrt_pi = core::f64::consts::PI.sqrt();
        assert!((ln_gamma(0.5) - sqrt_pi.ln()).abs() < 1e-14);
        assert!((ln_gamma(1.5) - (sqrt_pi / 2.0).ln()).abs() < 1e-14);
        // recurrence Γ(x+1) = x Γ(x) at a generic point
        let x = 3.7;
        assert!((ln_gamma(x + 1.0) - (ln_gamma(x) + x.ln())).abs() < 1e-13);
    }

    #[test]
    fn binomial_integer_cases() {
        assert!((binomial(3.0, 1) - 3.0).abs() < 1e-12);
        assert!((binomial(5.0, 2) - 10.0).abs() < 1e-11);
        assert!((binomial(10.0, 0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn binomial_non_integer_upper() {
        // C(a, 1) = a, C(a, 2) = a(a-1)/2 for real a
        let a = 2.6;
        assert!((binomial(a, 1) - a).abs() < 1e-12);
        assert!((binomial(a, 2) - a * (a - 1.0) / 2.0).abs() < 1e-12);
    }
}

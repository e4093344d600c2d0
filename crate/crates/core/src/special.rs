//! Log-space combinatorics.

use statrs::function::gamma::ln_gamma;

const EXACT_TABLE: usize = 256;

fn ln_factorial_table() -> &'static [f64; EXACT_TABLE] {
    use std::sync::OnceLock;
    static TABLE: OnceLock<[f64; EXACT_TABLE]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [0.0; EXACT_TABLE];
        // products are exact in f64 up to 22!, then accurate to a few ulps
        let mut prod = 1.0f64;
        for (n, slot) in t.iter_mut().enumerate().skip(1) {
            prod *= n as f64;
            *slot = if prod.is_finite() { prod.ln() } else { ln_gamma(n as f64 + 1.0) };
        }
        t
    })
}

/// `ln(n!)`.
pub fn ln_factorial(n: u64) -> f64 {
    if (n as usize) < EXACT_TABLE {
        ln_factorial_table()[n as usize]
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

/// `ln C(n, k)`; `-inf` outside `0 ≤ k ≤ n`.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    if k == 0 || k == n {
        return 0.0;
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// `ln Σ exp(x_i)`, stable for large magnitudes.
pub fn log_sum_exp(xs: impl IntoIterator<Item = f64> + Clone) -> f64 {
    let max = xs.clone().into_iter().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    max + xs.into_iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_binomials_are_exact_after_rounding() {
        assert_eq!(ln_binomial(13, 6).exp().round(), 1716.0);
        assert!((ln_binomial(60, 30).exp() / 118264581564861424.0 - 1.0).abs() < 1e-12);
        assert!((ln_binomial(10, 3).exp() - 120.0).abs() < 1e-10);
        assert_eq!(ln_binomial(5, 6), f64::NEG_INFINITY);
    }

    #[test]
    fn large_binomial_matches_stirling_scale() {
        // ln C(2n, n) ≈ 2n ln 2 - ½ ln(πn)
        let n = 100_000u64;
        let exact = ln_binomial(2 * n, n);
        let approx = 2.0 * n as f64 * std::f64::consts::LN_2 - 0.5 * (std::f64::consts::PI * n as f64).ln();
        assert!((exact - approx).abs() < 1e-5, "{exact} vs {approx}");
    }

    #[test]
    fn table_and_gamma_agree_at_the_seam() {
        let a = ln_factorial(EXACT_TABLE as u64 - 1);
        let b = ln_gamma(EXACT_TABLE as f64);
        assert!((a - b).abs() / b < 1e-14);
    }

    #[test]
    fn log_sum_exp_handles_huge_values() {
        let v = log_sum_exp([1000.0, 1000.0]);
        assert!((v - (1000.0 + std::f64::consts::LN_2)).abs() < 1e-12);
        assert_eq!(log_sum_exp(Vec::<f64>::new()), f64::NEG_INFINITY);
    }
}

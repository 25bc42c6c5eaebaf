//! Special functions: Airy, Lambert W, Laguerre, log-gamma.

mod airy;
mod gamma;
mod lambert;

pub use airy::{airy_ai, airy_beta, airy_zero, airy_zero_estimate, AiryValue};
pub use gamma::{binomial, ln_factorial, ln_gamma};
pub use lambert::{lambert_w, solve_w_power, WBranch};

/// Generalized Laguerre polynomial `L_n^α(x)`, by the three-term recurrence
/// `(k+1) L_{k+1} = (2k+1+α-x) L_k - (k+α) L_{k-1}`.
pub fn laguerre(n: u32, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn generalized_binomial(top: f64, k: u32) -> f64 {
        (0..k).fold(1.0, |acc, i| acc * (top - i as f64) / (i as f64 + 1.0))
    }

    /// Explicit expansion and the sum of its term magnitudes.
    fn explicit(n: u32, alpha: f64, x: f64) -> (f64, f64) {
        let mut sum = 0.0;
        let mut magnitude = 0.0;
        let mut fact = 1.0;
        for k in 0..=n {
            if k > 0 {
                fact *= k as f64;
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let term = generalized_binomial(n as f64 + alpha, n - k) * x.powi(k as i32) / fact;
            sum += sign * term;
            magnitude += term.abs();
        }
        (sum, magnitude)
    }

    #[test]
    fn base_cases() {
        assert_eq!(laguerre(0, 2.5, 7.0), 1.0);
        assert_eq!(laguerre(1, 2.5, 7.0), 1.0 + 2.5 - 7.0);
    }

    #[test]
    fn matches_explicit_expansion() {
        for n in 0..=8 {
            for &alpha in &[-0.5, 0.0, 0.5, 1.0, 3.0, 5.5] {
                for &x in &[0.0, 0.3, 1.7, 4.0, 9.5] {
                    let got = laguerre(n, alpha, x);
                    let (want, magnitude) = explicit(n, alpha, x);
                    assert!(
                        (got - want).abs() <= 1e-12 * magnitude.max(1.0),
                        "n={n} a={alpha} x={x}"
                    );
                }
            }
        }
    }

    #[test]
    fn orthogonality() {
        // x^α e^{-x} L2 L3 on a fine Simpson grid; integer α keeps the
        // integrand smooth at the origin.
        let alpha = 2.0;
        let upper = 80.0;
        let steps = 200_000;
        let h = upper / steps as f64;
        let f = |x: f64| x.powf(alpha) * (-x).exp() * laguerre(2, alpha, x) * laguerre(3, alpha, x);
        let mut sum = f(0.0) + f(upper);
        for i in 1..steps {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            sum += w * f(i as f64 * h);
        }
        let integral = sum * h / 3.0;
        assert!(integral.abs() < 1e-10, "{integral}");
        let norm = {
            let g = |x: f64| x.powf(alpha) * (-x).exp() * laguerre(3, alpha, x).powi(2);
            let mut s = g(0.0) + g(upper);
            for i in 1..steps {
                let w = if i % 2 == 1 { 4.0 } else { 2.0 };
                s += w * g(i as f64 * h);
            }
            s * h / 3.0
        };
        // Γ(n+α+1)/n!
        let want = (ln_gamma(3.0 + alpha + 1.0).unwrap() - ln_factorial(3)).exp();
        assert_relative_eq!(norm, want, max_relative = 1e-8);
    }
}

//! Overlaps between dilated hydrogen-like or oscillator states.
//!
//! `F_{n,n',l}(a) = a^{3/2} ∫ R_{n,l}(x) R_{n',l}(a x) x² dx` for members of
//! one orthonormal family. Closed forms are evaluated term by term with the
//! powers of `Q = aN - N'` (or `1 - a²`) collected first, so the point
//! `Q = 0` needs no special handling.

use crate::afm::AuxiliaryKind;
use crate::error::{Error, Result};
use crate::specfun::{ln_factorial, ln_gamma};

pub use crate::oracle::numeric_overlap;

/// Largest radial index accepted by the closed forms.
pub const MAX_INDEX: u32 = 12;

fn check(n: u32, n_prime: u32, a: f64) -> Result<()> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::domain(format!("dilation factor {a} must be positive")));
    }
    if n > MAX_INDEX || n_prime > MAX_INDEX {
        return Err(Error::domain(format!(
            "radial indices above {MAX_INDEX} are not supported"
        )));
    }
    Ok(())
}

fn sign(p: i64) -> f64 {
    if p.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Dilated overlap of hydrogen-like states.
pub fn overlap_hydrogen_dilated(n: u32, n_prime: u32, l: u32, a: f64) -> Result<f64> {
    check(n, n_prime, a)?;
    let (ni, npi, li) = (n as i64, n_prime as i64, l as i64);
    let big_n = (ni + li + 1) as f64;
    let big_np = (npi + li + 1) as f64;
    let q = a * big_n - big_np;
    let s = a * big_n + big_np;
    let four = 4.0 * a * big_n * big_np;
    let ln_pre = 0.5
        * (a.ln()
            + ln_factorial(n as u64)
            + ln_factorial((ni + 2 * li + 1) as u64)
            + ln_factorial(n_prime as u64)
            + ln_factorial((npi + 2 * li + 1) as u64))
        + big_n * four.ln()
        - (big_n + big_np + 1.0) * s.ln();
    let d = npi - ni;
    let mut sum = 0.0;
    for k in 0..=ni {
        let j = d + k + 1;
        if j < 0 {
            continue;
        }
        let kf = k as f64;
        let ln_c = ln_pre
            - kf * four.ln()
            - ln_factorial(k as u64)
            - ln_factorial((ni - k) as u64)
            - ln_factorial((ni + 2 * li + 1 - k) as u64)
            - ln_factorial(j as u64);
        let c = sign(k) * ln_c.exp();
        let base = d + 2 * k;
        let parts = [
            (2.0 * (big_n - kf) * j as f64, base),
            ((ni - k) as f64 * (big_n - kf + l as f64) / (2.0 * a * big_n), base + 1),
            ((j - 1) as f64 * j as f64 * 2.0 * a * big_n, base - 1),
        ];
        for (coef, power) in parts {
            if coef == 0.0 {
                continue;
            }
            debug_assert!(power >= 0);
            sum += c * coef * q.powi(power as i32);
        }
    }
    Ok(sign(ni + npi) * sum)
}

/// Dilated overlap of harmonic-oscillator states.
pub fn overlap_oscillator_dilated(n: u32, n_prime: u32, l: u32, a: f64) -> Result<f64> {
    check(n, n_prime, a)?;
    let (ni, npi) = (n as i64, n_prime as i64);
    let lf = l as f64;
    let one_minus = 1.0 - a * a;
    let ln_pre = 0.5
        * (ln_factorial(n as u64)
            + ln_factorial(n_prime as u64)
            + ln_gamma(n as f64 + lf + 1.5)?
            + ln_gamma(n_prime as f64 + lf + 1.5)?)
        + (2.0 * n as f64 + lf + 1.5) * (2.0 * a).ln()
        - (n as f64 + n_prime as f64 + lf + 1.5) * (1.0 + a * a).ln();
    let mut sum = 0.0;
    for k in 0..=ni {
        let j = npi - ni + k;
        if j < 0 {
            continue;
        }
        let ln_c = ln_pre
            - 2.0 * k as f64 * (2.0 * a).ln()
            - ln_factorial(k as u64)
            - ln_factorial((ni - k) as u64)
            - ln_factorial(j as u64)
            - ln_gamma((ni - k) as f64 + lf + 1.5)?;
        sum += sign(k) * ln_c.exp() * one_minus.powi((npi - ni + 2 * k) as i32);
    }
    Ok(sum)
}

/// `⟨n,l|n',l⟩` between two AFM trial states of the linear potential.
pub fn afm_pair_overlap(kind: AuxiliaryKind, n: u32, n_prime: u32, l: u32) -> Result<f64> {
    match kind {
        AuxiliaryKind::Coulomb => {
            let a = ((n_prime + l + 1) as f64 / (n + l + 1) as f64).powf(4.0 / 3.0);
            overlap_hydrogen_dilated(n, n_prime, l, a)
        }
        AuxiliaryKind::Quadratic => {
            let a = ((4 * n + 2 * l + 3) as f64 / (4 * n_prime + 2 * l + 3) as f64).powf(1.0 / 6.0);
            overlap_oscillator_dilated(n, n_prime, l, a)
        }
    }
}

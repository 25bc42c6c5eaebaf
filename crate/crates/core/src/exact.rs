//! Closed-form eigenstates of the linear (S-wave), hydrogen-like and
//! harmonic-oscillator Hamiltonians.
//!
//! Radial functions are normalized as `∫ R(r)² r² dr = 1`; angular factors
//! are dropped throughout.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::{airy_ai, airy_zero, binomial, laguerre, ln_factorial, ln_gamma};

/// Radial and orbital quantum numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QuantumNumbers {
    pub n: u32,
    pub l: u32,
}

impl QuantumNumbers {
    pub fn new(n: u32, l: u32) -> Self {
        QuantumNumbers { n, l }
    }

    /// `L = l(l+1)`
    pub fn big_l(self) -> f64 {
        let l = self.l as f64;
        l * (l + 1.0)
    }
}

/// Inverse length of a hydrogen-like state, `η = mν`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HydrogenScale {
    pub eta: f64,
}

impl HydrogenScale {
    /// `γ = η / (n+l+1)`
    pub fn gamma(self, q: QuantumNumbers) -> f64 {
        self.eta / hydrogen_n(q)
    }
}

/// Inverse length of an oscillator state, `λ = (2mν)^{1/4}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscillatorScale {
    pub lambda: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Analytic,
    Quadrature,
}

/// Expectation values of one state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObservableSet {
    /// `k ↦ ⟨r^k⟩`
    pub r_moments: BTreeMap<i32, f64>,
    pub p2: f64,
    pub p4: f64,
    /// `|ψ(0)|²`, only for S-states.
    pub psi0_sq: Option<f64>,
    pub mean_h: Option<f64>,
    pub provenance: Provenance,
}

impl ObservableSet {
    pub fn r(&self, k: i32) -> Option<f64> {
        self.r_moments.get(&k).copied()
    }
}

/// The exponents filled in by the closed-form observable sets.
pub const MOMENT_EXPONENTS: [i32; 6] = [-2, -1, 1, 2, 3, 4];

pub fn hydrogen_n(q: QuantumNumbers) -> f64 {
    (q.n + q.l + 1) as f64
}

pub fn oscillator_n(q: QuantumNumbers) -> f64 {
    2.0 * q.n as f64 + q.l as f64 + 1.5
}

// ---------------------------------------------------------------------------
// Linear potential, S-waves

/// S-wave eigenstate of `p²/2m + a r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryState {
    pub n: u32,
    pub m: f64,
    pub a: f64,
    /// The Airy zero `α_n`.
    pub zero: f64,
    pub energy: f64,
    /// `Ai'(α_n)`, signed; dividing by it makes `ψ(0) > 0` for every `n`.
    slope: f64,
}

pub fn linear_s_state(m: f64, a: f64, n: u32) -> AiryState {
    let zero = airy_zero(n);
    AiryState {
        n,
        m,
        a,
        zero,
        energy: -(a * a / (2.0 * m)).cbrt() * zero,
        slope: airy_ai(zero).derivative,
    }
}

impl AiryState {
    fn kappa(&self) -> f64 {
        (2.0 * self.m * self.a).cbrt()
    }

    /// Full wavefunction `ψ(r)` including the `1/√(4π)` angular factor.
    pub fn psi(&self, r: f64) -> f64 {
        self.radial(r) / (4.0 * PI).sqrt()
    }

    /// Radial function `R(r) = √(4π) ψ(r)`.
    pub fn radial(&self, r: f64) -> f64 {
        let kappa = self.kappa();
        let t = kappa * r;
        // Ai(α+t)/t from the Taylor expansion about the zero when t is tiny.
        let ratio = if t < 1e-5 {
            self.slope * (1.0 + self.zero * t * t / 6.0 + t * t * t / 12.0)
        } else {
            airy_ai(t + self.zero).value / t
        };
        kappa.sqrt() * kappa * ratio / self.slope
    }
}

pub fn linear_s_observables(m: f64, a: f64, n: u32) -> ObservableSet {
    let alpha = airy_zero(n).abs();
    let s = 2.0 * m * a;
    let mut r_moments = BTreeMap::new();
    r_moments.insert(1, 2.0 * alpha / (3.0 * s.cbrt()));
    r_moments.insert(2, 8.0 * alpha * alpha / (15.0 * s.powf(2.0 / 3.0)));
    r_moments.insert(3, (16.0 * alpha.powi(3) + 15.0) / (35.0 * s));
    r_moments.insert(
        4,
        16.0 * (8.0 * alpha.powi(4) + 25.0 * alpha) / (315.0 * s.powf(4.0 / 3.0)),
    );
    ObservableSet {
        r_moments,
        p2: s.powf(2.0 / 3.0) * alpha / 3.0,
        p4: s.powf(4.0 / 3.0) * alpha * alpha / 5.0,
        psi0_sq: Some(m * a / (2.0 * PI)),
        mean_h: None,
        provenance: Provenance::Analytic,
    }
}

// ---------------------------------------------------------------------------
// Hydrogen-like systems

/// Eigenstate of `p²/2m - ν/r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HydrogenState {
    pub q: QuantumNumbers,
    pub energy: f64,
    pub scale: HydrogenScale,
}

pub fn hydrogen_state(m: f64, nu: f64, q: QuantumNumbers) -> HydrogenState {
    let big_n = hydrogen_n(q);
    HydrogenState {
        q,
        energy: -m * nu * nu / (2.0 * big_n * big_n),
        scale: HydrogenScale { eta: m * nu },
    }
}

impl HydrogenState {
    pub fn radial(&self, r: f64) -> f64 {
        hydrogen_radial(self.scale, self.q, r)
    }
}

pub fn hydrogen_radial(scale: HydrogenScale, q: QuantumNumbers, r: f64) -> f64 {
    let big_n = hydrogen_n(q);
    let g2 = 2.0 * scale.gamma(q);
    let x = g2 * r;
    let (n, l) = (q.n as u64, q.l as u64);
    let ln_norm = 0.5 * (ln_factorial(n) - (2.0 * big_n).ln() - ln_factorial(n + 2 * l + 1));
    let ln_x_l = if l == 0 { 0.0 } else { l as f64 * x.ln() };
    let mag = (1.5 * g2.ln() + ln_norm + ln_x_l - 0.5 * x).exp();
    mag * laguerre(q.n, (2 * q.l + 1) as f64, x)
}

pub fn hydrogen_observables(scale: HydrogenScale, q: QuantumNumbers) -> ObservableSet {
    let eta = scale.eta;
    let big_n = hydrogen_n(q);
    let n2 = big_n * big_n;
    let big_l = q.big_l();
    let l = q.l as f64;
    let mut r_moments = BTreeMap::new();
    r_moments.insert(-2, 2.0 * eta * eta / ((2.0 * l + 1.0) * n2 * big_n));
    r_moments.insert(-1, eta / n2);
    r_moments.insert(1, (3.0 * n2 - big_l) / (2.0 * eta));
    r_moments.insert(2, n2 / (2.0 * eta * eta) * (5.0 * n2 - 3.0 * big_l + 1.0));
    r_moments.insert(
        3,
        n2 / (8.0 * eta.powi(3)) * (35.0 * n2 * n2 + 5.0 * n2 * (5.0 - 6.0 * big_l) + 3.0 * big_l * (big_l - 2.0)),
    );
    r_moments.insert(
        4,
        n2 * n2 / (8.0 * eta.powi(4))
            * (63.0 * n2 * n2 + 35.0 * n2 * (3.0 - 2.0 * big_l) + 5.0 * big_l * (3.0 * big_l - 10.0) + 12.0),
    );
    let p2 = eta * eta / n2;
    let p4 = eta.powi(4) * (8.0 * q.n as f64 + 2.0 * l + 5.0) / ((2.0 * l + 1.0) * n2 * n2);
    let psi0_sq = (q.l == 0).then(|| eta.powi(3) / (PI * (q.n as f64 + 1.0).powi(3)));
    ObservableSet {
        r_moments,
        p2,
        p4,
        psi0_sq,
        mean_h: None,
        provenance: Provenance::Analytic,
    }
}

/// `⟨r^k⟩` of a hydrogen-like state from the binomial double sum.
///
/// Valid for `k ≥ -(2l+2)`. The alternating sum cancels heavily, so it is
/// accumulated exactly in integers when they fit and in log space otherwise.
pub fn hydrogen_moment(scale: HydrogenScale, q: QuantumNumbers, k: i32) -> Result<f64> {
    let (n, l) = (q.n as i64, q.l as i64);
    if (k as i64) + 2 * l + 2 < 0 {
        return Err(Error::domain(format!("⟨r^{k}⟩ diverges for l = {l}")));
    }
    let big_n = hydrogen_n(q);
    let top = (n + 2 * l + 1) as u64;
    let ln_pref = ln_factorial(top) - ln_factorial(n as u64);
    let sum = match hydrogen_sum_exact(n as u64, l as u64, k as i64) {
        // Σ · ((n+2l+1)!)² with the prefactor's (n+2l+1)! folded in.
        Some(scaled) => scaled / (ln_factorial(top) + ln_factorial(n as u64)).exp(),
        None => {
            let mut sum = 0.0;
            for p in 0..=n {
                for qq in 0..=n {
                    let sign = if (p + qq) % 2 == 0 { 1.0 } else { -1.0 };
                    let ln_term = ln_factorial((p + qq + k as i64 + 2 * l + 2) as u64)
                        - ln_factorial((p + 2 * l + 1) as u64)
                        - ln_factorial((qq + 2 * l + 1) as u64);
                    sum += sign * binomial(n as u64, p as u64) * binomial(n as u64, qq as u64) * ln_term.exp();
                }
            }
            sum * ln_pref.exp()
        }
    };
    let kf = k as f64;
    Ok(big_n.powf(kf - 1.0) / (2.0 * (2.0 * scale.eta).powf(kf)) * sum)
}

/// `((n+2l+1)!)² Σ_{p,q} (-1)^{p+q} C(n,p) C(n,q) (p+q+k+2l+2)! / ((p+2l+1)!(q+2l+1)!)`
/// in exact integer arithmetic, or `None` on overflow.
fn hydrogen_sum_exact(n: u64, l: u64, k: i64) -> Option<f64> {
    let factorial = |m: u64| (2..=m as u128).try_fold(1u128, |acc, v| acc.checked_mul(v));
    // (n+2l+1)! / (p+2l+1)!
    let falling =
        |p: u64| ((p + 2 * l + 2) as u128..=(n + 2 * l + 1) as u128).try_fold(1u128, |acc, v| acc.checked_mul(v));
    let binom = |p: u64| binomial(n, p) as u128;
    let mut total: i128 = 0;
    for p in 0..=n {
        for q in 0..=n {
            let top = (p + q) as i64 + k + 2 * l as i64 + 2;
            let term = factorial(top as u64)?
                .checked_mul(falling(p)?)?
                .checked_mul(falling(q)?)?
                .checked_mul(binom(p))?
                .checked_mul(binom(q))?;
            let term = i128::try_from(term).ok()?;
            total = if (p + q) % 2 == 0 {
                total.checked_add(term)?
            } else {
                total.checked_sub(term)?
            };
        }
    }
    Some(total as f64)
}

// ---------------------------------------------------------------------------
// Harmonic oscillator

/// Eigenstate of `p²/2m + ν r²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorState {
    pub q: QuantumNumbers,
    pub energy: f64,
    pub scale: OscillatorScale,
}

pub fn oscillator_state(m: f64, nu: f64, q: QuantumNumbers) -> OscillatorState {
    OscillatorState {
        q,
        energy: (2.0 * nu / m).sqrt() * oscillator_n(q),
        scale: OscillatorScale {
            lambda: (2.0 * m * nu).powf(0.25),
        },
    }
}

impl OscillatorState {
    pub fn radial(&self, r: f64) -> f64 {
        oscillator_radial(self.scale, self.q, r)
    }
}

pub fn oscillator_radial(scale: OscillatorScale, q: QuantumNumbers, r: f64) -> f64 {
    let lam = scale.lambda;
    let x = lam * r;
    let l = q.l as f64;
    let ln_norm = 0.5 * ((2.0f64).ln() + ln_factorial(q.n as u64) - ln_gamma(q.n as f64 + l + 1.5).unwrap_or(0.0));
    let ln_x_l = if q.l == 0 { 0.0 } else { l * x.ln() };
    let mag = (1.5 * lam.ln() + ln_norm + ln_x_l - 0.5 * x * x).exp();
    mag * laguerre(q.n, l + 0.5, x * x)
}

pub fn oscillator_observables(scale: OscillatorScale, q: QuantumNumbers) -> ObservableSet {
    let lam = scale.lambda;
    let big_n = oscillator_n(q);
    let big_l = q.big_l();
    let mut r_moments = BTreeMap::new();
    let s_wave_ratio = || (ln_gamma(q.n as f64 + 1.5).unwrap_or(0.0) - ln_factorial(q.n as u64)).exp();
    for k in MOMENT_EXPONENTS {
        let value = match k {
            1 if q.l == 0 => 4.0 * s_wave_ratio() / (PI * lam),
            2 => big_n / (lam * lam),
            3 if q.l == 0 => 8.0 * (4.0 * q.n as f64 + 3.0) * s_wave_ratio() / (3.0 * PI * lam.powi(3)),
            4 => (6.0 * big_n * big_n - 2.0 * big_l + 1.5) / (4.0 * lam.powi(4)),
            _ => match oscillator_moment(scale, q, k) {
                Ok(v) => v,
                Err(_) => continue,
            },
        };
        r_moments.insert(k, value);
    }
    let p2 = lam.powi(4) * r_moments[&2];
    let p4 = lam.powi(8) * r_moments[&4];
    let psi0_sq = (q.l == 0).then(|| lam.powi(3) * 2.0 * s_wave_ratio() / (PI * PI));
    ObservableSet {
        r_moments,
        p2,
        p4,
        psi0_sq,
        mean_h: None,
        provenance: Provenance::Analytic,
    }
}

/// `⟨r^k⟩` of an oscillator state from the gamma-function double sum.
///
/// Valid for `k > -(2l+3)`.
pub fn oscillator_moment(scale: OscillatorScale, q: QuantumNumbers, k: i32) -> Result<f64> {
    let l = q.l as f64;
    let kf = k as f64;
    if kf <= -(2.0 * l + 3.0) {
        return Err(Error::domain(format!("⟨r^{k}⟩ diverges for l = {}", q.l)));
    }
    let n = q.n as u64;
    let mut sum = 0.0;
    for p in 0..=n {
        for qq in 0..=n {
            let sign = if (p + qq) % 2 == 0 { 1.0 } else { -1.0 };
            let ln_term = ln_gamma(l + (p + qq) as f64 + (kf + 3.0) / 2.0)?
                - ln_gamma(p as f64 + l + 1.5)?
                - ln_gamma(qq as f64 + l + 1.5)?;
            sum += sign * binomial(n, p) * binomial(n, qq) * ln_term.exp();
        }
    }
    let ln_pref = ln_gamma(n as f64 + l + 1.5)? - ln_factorial(n);
    Ok(ln_pref.exp() * sum / scale.lambda.powf(kf))
}

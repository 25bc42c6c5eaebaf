//! Airy function `Ai` and its negative zeros.
//!
//! Evaluation strategy:
//! * `|x| >= 10`: the large-argument asymptotic expansions (exponential form
//!   for `x > 0`, phase form for `x < 0`), truncated at the smallest term.
//!   At the switch point the truncation error is below `exp(-2ζ) ≈ 1e-18`.
//! * everywhere else: Taylor series of the Airy equation `y'' = x y`,
//!   re-expanded at intermediate points. Positive arguments are reached by
//!   stepping down from `x = 10`, the direction in which `Ai` is the dominant
//!   solution; negative arguments are reached from whichever of `0` and
//!   `-10` is nearer, where both solutions merely oscillate.

use std::f64::consts::{FRAC_PI_4, PI};

/// Ai(0)
pub const AI0: f64 = 0.355_028_053_887_817_2;
/// Ai'(0)
pub const AIP0: f64 = -0.258_819_403_792_806_8;

const ASYMPTOTIC_SWITCH: f64 = 10.0;
const MAX_STEP: f64 = 0.5;

/// `Ai(x)` and `Ai'(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryValue {
    pub value: f64,
    pub derivative: f64,
}

pub fn airy_ai(x: f64) -> AiryValue {
    if x >= ASYMPTOTIC_SWITCH {
        asymptotic_positive(x)
    } else if x <= -ASYMPTOTIC_SWITCH {
        asymptotic_negative(-x)
    } else if x.abs() <= 1.0 {
        let (value, derivative) = taylor_step(0.0, AI0, AIP0, x);
        AiryValue { value, derivative }
    } else if x > 0.0 {
        let start = asymptotic_positive(ASYMPTOTIC_SWITCH);
        walk(ASYMPTOTIC_SWITCH, start, x)
    } else if x > -0.5 * ASYMPTOTIC_SWITCH {
        walk(
            0.0,
            AiryValue {
                value: AI0,
                derivative: AIP0,
            },
            x,
        )
    } else {
        let start = asymptotic_negative(ASYMPTOTIC_SWITCH);
        walk(-ASYMPTOTIC_SWITCH, start, x)
    }
}

fn walk(from: f64, start: AiryValue, to: f64) -> AiryValue {
    let steps = ((to - from).abs() / MAX_STEP).ceil().max(1.0) as usize;
    let h = (to - from) / steps as f64;
    let (mut y, mut dy) = (start.value, start.derivative);
    for i in 0..steps {
        let x0 = from + i as f64 * h;
        (y, dy) = taylor_step(x0, y, dy, h);
    }
    AiryValue {
        value: y,
        derivative: dy,
    }
}

/// Advances `(y, y')` of `y'' = x y` from `x0` to `x0 + h`.
///
/// The scaled coefficients `b_k = a_k h^k` obey
/// `b_{k+2} = h² (x0 b_k + h b_{k-1}) / ((k+1)(k+2))`.
fn taylor_step(x0: f64, y0: f64, dy0: f64, h: f64) -> (f64, f64) {
    if h == 0.0 {
        return (y0, dy0);
    }
    let h2 = h * h;
    let (mut b_km1, mut b_k, mut b_kp1) = (0.0, y0, dy0 * h);
    let mut value = b_k + b_kp1;
    let mut slope = b_kp1;
    for k in 0..400usize {
        let kf = k as f64;
        let b_next = h2 * (x0 * b_k + h * b_km1) / ((kf + 1.0) * (kf + 2.0));
        value += b_next;
        slope += (kf + 2.0) * b_next;
        b_km1 = b_k;
        b_k = b_kp1;
        b_kp1 = b_next;
        let scale = value.abs().max(slope.abs()).max(f64::MIN_POSITIVE);
        if k > 4 && (b_km1.abs() + b_k.abs() + b_kp1.abs()) * (kf + 3.0) <= 1e-17 * scale {
            break;
        }
    }
    (value, slope / h)
}

/// Terms `u_k` of the asymptotic series.
fn u_coefficients(count: usize) -> Vec<f64> {
    let mut u = Vec::with_capacity(count);
    u.push(1.0);
    for k in 1..count {
        let kf = k as f64;
        let prev = u[k - 1];
        u.push(prev * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf));
    }
    u
}

fn v_from_u(u: &[f64]) -> Vec<f64> {
    u.iter()
        .enumerate()
        .map(|(k, &uk)| {
            let kf = k as f64;
            -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * uk
        })
        .collect()
}

const SERIES_TERMS: usize = 60;

/// Alternating sum of `c_k ζ^{-k}` over `k = stride·j + parity`, truncated at
/// the smallest term.
fn truncated_sum(coeffs: &[f64], zeta: f64, alternate_every: usize, parity: usize) -> f64 {
    let mut sum = 0.0;
    let mut last = f64::INFINITY;
    let mut j = 0usize;
    loop {
        let k = alternate_every * j + parity;
        if k >= coeffs.len() {
            break;
        }
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let term = coeffs[k] * zeta.powi(-(k as i32));
        if term.abs() >= last {
            break;
        }
        sum += sign * term;
        last = term.abs();
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
        j += 1;
    }
    sum
}

fn asymptotic_positive(x: f64) -> AiryValue {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let u = u_coefficients(SERIES_TERMS);
    let v = v_from_u(&u);
    let su = truncated_sum(&u, zeta, 1, 0);
    let sv = truncated_sum(&v, zeta, 1, 0);
    let decay = (-zeta).exp() / (2.0 * PI.sqrt());
    let q = x.powf(0.25);
    AiryValue {
        value: decay / q * su,
        derivative: -decay * q * sv,
    }
}

/// `Ai(-z)` and `Ai'(-z)` for large positive `z`.
fn asymptotic_negative(z: f64) -> AiryValue {
    let zeta = 2.0 / 3.0 * z * z.sqrt();
    let u = u_coefficients(SERIES_TERMS);
    let v = v_from_u(&u);
    let u_even = truncated_sum(&u, zeta, 2, 0);
    let u_odd = truncated_sum(&u, zeta, 2, 1);
    let v_even = truncated_sum(&v, zeta, 2, 0);
    let v_odd = truncated_sum(&v, zeta, 2, 1);
    let phase = zeta - FRAC_PI_4;
    let (s, c) = phase.sin_cos();
    let q = z.powf(0.25);
    let norm = 1.0 / PI.sqrt();
    AiryValue {
        value: norm / q * (c * u_even + s * u_odd),
        derivative: norm * q * (s * v_even - c * v_odd),
    }
}

/// `β_n = [3π/2 (n + 3/4)]^{2/3}`.
pub fn airy_beta(n: u32) -> f64 {
    (1.5 * PI * (n as f64 + 0.75)).powf(2.0 / 3.0)
}

/// Three-term large-`n` approximation of the `(n+1)`-th zero of `Ai`.
pub fn airy_zero_estimate(n: u32) -> f64 {
    let beta = airy_beta(n);
    let b3 = beta.powi(-3);
    -beta * (1.0 + 5.0 / 48.0 * b3 - 5.0 / 36.0 * b3 * b3)
}

/// The `(n+1)`-th zero `α_n < 0` of `Ai`, Newton-refined from the asymptotic estimate.
pub fn airy_zero(n: u32) -> f64 {
    let mut x = airy_zero_estimate(n);
    for _ in 0..50 {
        let ai = airy_ai(x);
        let dx = ai.value / ai.derivative;
        x -= dx;
        if dx.abs() <= 4.0 * f64::EPSILON * x.abs() {
            break;
        }
    }
    x
}

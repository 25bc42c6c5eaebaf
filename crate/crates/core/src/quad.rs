//! Quadrature helpers: adaptive Gauss-Kronrod and Simpson on sampled data.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
/// Gauss weights for the nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = half * XGK[i];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Globally adaptive 15-point Gauss-Kronrod integration of `f` over `[a, b]`.
///
/// Converged when the summed error estimate is below
/// `max(abs_tol, rel_tol·|I|)`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> Result<f64> {
    const MAX_INTERVALS: usize = 2000;
    let (value, error) = kronrod15(&f, a, b);
    let mut pieces = vec![(a, b, value, error)];
    loop {
        let total: f64 = pieces.iter().map(|p| p.2).sum();
        let err: f64 = pieces.iter().map(|p| p.3).sum();
        if !total.is_finite() {
            return Err(Error::QuadratureFailure(format!("non-finite integrand on [{a}, {b}]")));
        }
        if err <= abs_tol.max(rel_tol * total.abs()) {
            return Ok(total);
        }
        if pieces.len() >= MAX_INTERVALS {
            return Err(Error::QuadratureFailure(format!(
                "no convergence on [{a}, {b}]: estimate {total:e}, error {err:e}"
            )));
        }
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (lo, hi, _, _) = pieces.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = kronrod15(&f, lo, mid);
        let (v2, e2) = kronrod15(&f, mid, hi);
        pieces.push((lo, mid, v1, e1));
        pieces.push((mid, hi, v2, e2));
    }
}

/// Integrates over `[0, ∞)` as a sum of adaptive panels `[b_i, b_{i+1}]`
/// with geometrically growing breakpoints, stopping once a panel
/// contributes less than `tail_tol` relative to the running total.
pub fn integrate_half_line(f: impl Fn(f64) -> f64, scale: f64, rel_tol: f64, tail_tol: f64) -> Result<f64> {
    let mut total = 0.0;
    let mut lo = 0.0;
    let mut width = scale;
    for _ in 0..200 {
        let hi = lo + width;
        let part = integrate(&f, lo, hi, rel_tol, 1e-300)?;
        total += part;
        if lo > 0.0 && part.abs() <= tail_tol * total.abs() {
            return Ok(total);
        }
        lo = hi;
        width *= 1.5;
    }
    Err(Error::QuadratureFailure("integrand tail does not decay".into()))
}

/// Composite Simpson rule on an arbitrary increasing grid.
///
/// Pairs of intervals use the three-point rule for unequal spacing; an odd
/// trailing interval is closed with the matching one-interval formula.
pub fn simpson(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let n = x.len();
    if n < 2 {
        return 0.0;
    }
    if n == 2 {
        return 0.5 * (x[1] - x[0]) * (y[0] + y[1]);
    }
    let intervals = n - 1;
    let mut sum = 0.0;
    let mut i = 0;
    while i + 2 < n {
        let h0 = x[i + 1] - x[i];
        let h1 = x[i + 2] - x[i + 1];
        let hs = h0 + h1;
        sum += hs / 6.0 * ((2.0 - h1 / h0) * y[i] + hs * hs / (h0 * h1) * y[i + 1] + (2.0 - h0 / h1) * y[i + 2]);
        i += 2;
    }
    if intervals % 2 == 1 {
        let h0 = x[n - 2] - x[n - 3];
        let h1 = x[n - 1] - x[n - 2];
        sum += y[n - 1] * (2.0 * h1 * h1 + 3.0 * h0 * h1) / (6.0 * (h0 + h1))
            + y[n - 2] * (h1 * h1 + 3.0 * h1 * h0) / (6.0 * h0)
            - y[n - 3] * h1 * h1 * h1 / (6.0 * h0 * (h0 + h1));
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_exact() {
        let v = integrate(|x| x.powi(5) - 2.0 * x, 0.0, 2.0, 1e-14, 0.0).unwrap();
        assert_relative_eq!(v, 64.0 / 6.0 - 4.0, max_relative = 1e-14);
    }

    #[test]
    fn log_singularity() {
        let v = integrate(|x: f64| x.ln(), 0.0, 1.0, 1e-12, 0.0).unwrap();
        assert_relative_eq!(v, -1.0, max_relative = 1e-10);
    }

    #[test]
    fn half_line_gaussian() {
        let v = integrate_half_line(|x: f64| (-x * x).exp(), 1.0, 1e-13, 1e-16).unwrap();
        assert_relative_eq!(v, 0.5 * std::f64::consts::PI.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn simpson_is_exact_for_quadratics_on_uneven_grids() {
        let x: Vec<f64> = (0..12).map(|i| (i as f64 * 0.3).powf(1.4)).collect();
        let y: Vec<f64> = x.iter().map(|t| t * t - t + 1.0).collect();
        let b = *x.last().unwrap();
        let want = b.powi(3) / 3.0 - b * b / 2.0 + b;
        assert_relative_eq!(simpson(&x, &y), want, max_relative = 1e-12);
        let y2: Vec<f64> = x[..11].iter().map(|t| t * t - t + 1.0).collect();
        let b2 = x[10];
        assert_relative_eq!(
            simpson(&x[..11], &y2),
            b2.powi(3) / 3.0 - b2 * b2 / 2.0 + b2,
            max_relative = 1e-12
        );
    }
}

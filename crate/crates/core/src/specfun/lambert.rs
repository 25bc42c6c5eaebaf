//! Real branches of the Lambert W function and the inversion of
//! `z = W(x) x^α`.

use std::f64::consts::E;

use crate::error::{Error, Result};

/// Real branch of the Lambert W function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WBranch {
    /// `W₀`, defined on `[-1/e, ∞)`, values `≥ -1`.
    Principal,
    /// `W₋₁`, defined on `[-1/e, 0)`, values `≤ -1`.
    Lower,
}

const INV_E: f64 = 1.0 / E;
/// Slack below `-1/e` absorbed by rounding of the caller's argument.
const BRANCH_POINT_SLACK: f64 = 4.0 * f64::EPSILON;

pub fn lambert_w(branch: WBranch, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain(format!("lambert_w argument {x} is not finite")));
    }
    let dist = x + INV_E;
    if dist < -BRANCH_POINT_SLACK {
        return Err(Error::domain(format!("lambert_w argument {x} below -1/e")));
    }
    if branch == WBranch::Lower && x >= 0.0 {
        return Err(Error::domain(format!("lower branch undefined for {x} >= 0")));
    }
    if dist <= BRANCH_POINT_SLACK {
        return Ok(-1.0);
    }
    if x == 0.0 {
        return Ok(0.0);
    }

    // p = ±sqrt(2(ex + 1)); W = -1 + p - p²/3 + 11p³/72 - 43p⁴/540 + ...
    let p_abs = (2.0 * E * dist).sqrt();
    let p = match branch {
        WBranch::Principal => p_abs,
        WBranch::Lower => -p_abs,
    };
    let branch_series = -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 + p * (-43.0 / 540.0))));
    if p_abs < 1e-3 {
        return Ok(branch_series);
    }

    let guess = match branch {
        WBranch::Principal if x < -0.25 => branch_series,
        WBranch::Principal if x <= 3.0 => {
            let l = x.ln_1p();
            l * (1.0 - (1.0 + l).ln() / (2.0 + l))
        }
        WBranch::Principal => {
            let l1 = x.ln();
            let l2 = l1.ln();
            l1 - l2 + l2 / l1
        }
        WBranch::Lower if x < -0.25 => branch_series,
        WBranch::Lower => {
            let l1 = (-x).ln();
            let l2 = (-l1).ln();
            l1 - l2 + l2 / l1
        }
    };
    halley(x, guess)
}

fn halley(x: f64, mut w: f64) -> Result<f64> {
    for _ in 0..64 {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        if wp1 == 0.0 {
            return Ok(w);
        }
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let dw = f / denom;
        w -= dw;
        if !w.is_finite() {
            break;
        }
        if dw.abs() <= 2.0 * f64::EPSILON * w.abs().max(f64::MIN_POSITIVE) {
            return Ok(w);
        }
    }
    if w.is_finite() && (w * w.exp() - x).abs() <= 1e-12 * x.abs().max(1.0) {
        return Ok(w);
    }
    Err(Error::NumericalFailure(format!(
        "Halley iteration for W({x}) did not converge"
    )))
}

/// Solves `z = W(x) x^α` for `x`.
///
/// `branch` selects the Lambert branch of the inner evaluation; the generic
/// case is `x = v e^v` with `v = (α+1)/α · W((α/(α+1)) z^{1/(α+1)})`.
pub fn solve_w_power(z: f64, alpha: f64, branch: WBranch) -> Result<f64> {
    if alpha == 0.0 {
        check_in_range(branch, z)?;
        return Ok(z * z.exp());
    }
    if alpha == -1.0 {
        if z <= 0.0 {
            return Err(Error::NoSolution(format!("W(x)/x = {z} requires z > 0")));
        }
        let w = -z.ln();
        check_in_range(branch, w)?;
        return Ok(-z.ln() / z);
    }
    let p = alpha + 1.0;
    let root = real_root(z, p)?;
    let inner = alpha / p * root;
    let w = lambert_w(branch, inner)?;
    let v = p / alpha * w;
    Ok(v * v.exp())
}

/// `z^{1/p}` on the reals.
fn real_root(z: f64, p: f64) -> Result<f64> {
    if z >= 0.0 {
        return Ok(z.powf(1.0 / p));
    }
    let odd_integer = |q: f64| q.fract() == 0.0 && (q.abs() as u64) % 2 == 1;
    let inv = 1.0 / p;
    if odd_integer(p) {
        Ok(-(-z).powf(inv))
    } else if inv.fract() == 0.0 {
        Ok(z.powi(inv as i32))
    } else {
        Err(Error::NoSolution(format!("{z}^(1/{p}) is not real")))
    }
}

fn check_in_range(branch: WBranch, w: f64) -> Result<()> {
    let ok = match branch {
        WBranch::Principal => w >= -1.0,
        WBranch::Lower => w <= -1.0,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "W = {w} is not a value of the {branch:?} branch"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const OMEGA: f64 = 0.567_143_290_409_783_9;

    #[test]
    fn fixed_points() {
        assert_eq!(lambert_w(WBranch::Principal, 0.0).unwrap(), 0.0);
        assert_eq!(lambert_w(WBranch::Principal, -INV_E).unwrap(), -1.0);
        assert_eq!(lambert_w(WBranch::Lower, -(-1f64).exp()).unwrap(), -1.0);
    }

    #[test]
    fn omega_constant() {
        // w ← (w² + e^{-w}) / (w + 1)
        let mut w = 0.5f64;
        for _ in 0..60 {
            w = (w * w + (-w).exp()) / (w + 1.0);
        }
        assert_relative_eq!(w, OMEGA, max_relative = 1e-15);
        assert_relative_eq!(lambert_w(WBranch::Principal, 1.0).unwrap(), OMEGA, max_relative = 1e-14);
    }

    #[test]
    fn reference_values() {
        assert_relative_eq!(
            lambert_w(WBranch::Lower, -0.2).unwrap(),
            -2.542_641_357_773_526_4,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            lambert_w(WBranch::Lower, -1e-5).unwrap(),
            -14.163_600_815_810_183,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            lambert_w(WBranch::Principal, 100.0).unwrap(),
            3.385_630_140_290_050_2,
            max_relative = 1e-14
        );
    }

    #[test]
    fn near_branch_point() {
        for &d in &[1e-14, 1e-10, 1e-7, 1e-4, 1e-2] {
            let x = -INV_E + d;
            for branch in [WBranch::Principal, WBranch::Lower] {
                let w = lambert_w(branch, x).unwrap();
                assert!((w * w.exp() - x).abs() <= 1e-15, "{branch:?} {d}");
                match branch {
                    WBranch::Principal => assert!(w >= -1.0),
                    WBranch::Lower => assert!(w <= -1.0),
                }
            }
        }
    }

    #[test]
    fn rejects_out_of_domain() {
        assert!(matches!(lambert_w(WBranch::Principal, -0.4), Err(Error::Domain(_))));
        assert!(matches!(lambert_w(WBranch::Lower, 0.5), Err(Error::Domain(_))));
        assert!(matches!(lambert_w(WBranch::Lower, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn inversion_special_cases() {
        let x = solve_w_power(E, 0.0, WBranch::Principal).unwrap();
        assert_relative_eq!(x, E * E.exp(), max_relative = 1e-15);
        assert!((x - 41.19).abs() < 0.01);

        let x = solve_w_power(2.0, -1.0, WBranch::Principal).unwrap();
        assert_relative_eq!(x, 0.5 * 0.5f64.ln(), max_relative = 1e-15);
        let w = lambert_w(WBranch::Principal, x).unwrap();
        assert!((w / x - 2.0).abs() < 1e-12);
    }

    #[test]
    fn inversion_round_trip() {
        let x = solve_w_power(OMEGA, 2.0, WBranch::Principal).unwrap();
        assert_relative_eq!(x, 1.0, max_relative = 1e-13);
    }

    #[test]
    fn odd_roots_of_negative_arguments() {
        // W(x) x² < 0 only for x < 0 on the principal branch.
        let x = -0.3;
        let z = lambert_w(WBranch::Principal, x).unwrap() * x * x;
        let back = solve_w_power(z, 2.0, WBranch::Principal).unwrap();
        assert_relative_eq!(back, x, max_relative = 1e-12);
        assert!(matches!(
            solve_w_power(-1.0, 1.0, WBranch::Principal),
            Err(Error::NoSolution(_))
        ));
    }
}

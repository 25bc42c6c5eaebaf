//! Observables of trial and exact states: moment sets, `⟨H⟩`, the virial
//! recurrence for power-law potentials, and Eckart overlap bounds.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::afm::{AfmSolution, PotentialModel};
use crate::error::{Error, Result};
use crate::exact::{ObservableSet, QuantumNumbers};
use crate::quad::integrate_half_line;

/// Moment set of an AFM trial state. Linear potentials also get `⟨H⟩`.
pub fn afm_observable_set(v: PotentialModel, sol: &AfmSolution) -> ObservableSet {
    let mut obs = sol.observables();
    if let PotentialModel::Linear { m, a } = v {
        obs.mean_h = obs.r(1).map(|r1| obs.p2 / (2.0 * m) + a * r1);
    }
    obs
}

/// `⟨φ|V|φ⟩` over the trial radial density.
pub fn trial_expectation(sol: &AfmSolution, f: impl Fn(f64) -> f64) -> Result<f64> {
    let q = sol.q;
    let scale = sol.scale.length(q);
    integrate_half_line(
        |r| {
            let rr = sol.radial(r) * r;
            if rr == 0.0 {
                0.0
            } else {
                rr * rr * f(r)
            }
        },
        scale,
        1e-10,
        1e-15,
    )
}

/// `⟨H⟩` in the trial state: closed form for linear potentials, quadrature otherwise.
pub fn mean_hamiltonian(v: PotentialModel, sol: &AfmSolution) -> Result<f64> {
    let obs = sol.observables();
    let kinetic = obs.p2 / (2.0 * v.mass());
    match v {
        PotentialModel::Linear { a, .. } => {
            let r1 = obs.r(1).ok_or_else(|| Error::NumericalFailure("missing ⟨r⟩".into()))?;
            Ok(kinetic + a * r1)
        }
        _ => Ok(kinetic + trial_expectation(sol, |r| v.value(r))?),
    }
}

/// Moments `⟨r^s⟩` of an eigenstate of `sgn(λ) a r^λ` from the virial recurrence
/// `2(s+1)E⟨r^s⟩ - sgn(λ) a (2s+λ+2)⟨r^{s+λ}⟩ + (s/4m)(s²-1-4l(l+1))⟨r^{s-2}⟩ = 0`.
///
/// Starts from `⟨r⁰⟩ = 1` plus any `seeds`, and steps `s = 0..=s_max`,
/// solving each relation for whichever of `⟨r^s⟩`, `⟨r^{s+λ}⟩` is missing.
/// A step whose inputs are unknown is skipped, so the result holds every
/// moment the recurrence reaches.
pub fn power_law_moments(
    lambda: f64,
    a: f64,
    m: f64,
    energy: f64,
    q: QuantumNumbers,
    s_max: i32,
    seeds: &[(i32, f64)],
) -> Result<BTreeMap<i32, f64>> {
    if lambda == 0.0 || lambda.fract() != 0.0 {
        return Err(Error::domain(format!("exponent {lambda} must be a non-zero integer")));
    }
    let lam = lambda as i32;
    let big_l = q.big_l();
    let mut moments: BTreeMap<i32, f64> = seeds.iter().copied().collect();
    moments.insert(0, 1.0);
    for s in 0..=s_max {
        let sf = s as f64;
        let coef = lambda.signum() * a * (2 * s + lam + 2) as f64;
        let c_s = 2.0 * (sf + 1.0) * energy;
        let c_low = sf / (4.0 * m) * (sf * sf - 1.0 - 4.0 * big_l);
        let low = if c_low == 0.0 {
            Some(0.0)
        } else {
            moments.get(&(s - 2)).map(|x| c_low * x)
        };
        let Some(low) = low else { continue };
        match (moments.get(&s).copied(), moments.get(&(s + lam)).copied()) {
            // upward for confining powers
            (Some(rs), None) if coef != 0.0 => {
                moments.insert(s + lam, (c_s * rs + low) / coef);
            }
            // solved for ⟨r^s⟩ when the step runs the other way
            (None, Some(rl)) if c_s != 0.0 => {
                moments.insert(s, (coef * rl - low) / c_s);
            }
            _ => {}
        }
    }
    Ok(moments)
}

/// `⟨p²⟩` and `⟨p⁴⟩` of an eigenstate from potential expectations.
pub fn p2_p4_from_potential(energy: f64, mean_v: f64, mean_v2: f64, m: f64) -> (f64, f64) {
    let p2 = 2.0 * m * (energy - mean_v);
    let p4 = 4.0 * m * m * (energy * energy - 2.0 * energy * mean_v + mean_v2);
    (p2, p4)
}

/// `|ψ(0)|²` of an S-state from the mean force.
pub fn psi0_from_force(m: f64, mean_vprime: f64) -> f64 {
    m * mean_vprime / (2.0 * PI)
}

/// Energies entering the Eckart bounds on `|⟨φ|ψ₀⟩|²`.
///
/// `e0`, `e1` are exact levels; the `*_lower`/`*_upper` fields are bounds.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct EckartInput {
    pub e0: Option<f64>,
    pub e1: Option<f64>,
    pub e0_lower: Option<f64>,
    pub e1_lower: Option<f64>,
    pub e1_upper: Option<f64>,
    pub h_trial: f64,
}

/// `(B_E, B′_E)`: the bound from exact levels and the one from level bounds.
///
/// Negative values are vacuous bounds and are returned unchanged.
pub fn eckart_bound(input: EckartInput) -> Result<(Option<f64>, Option<f64>)> {
    let h = input.h_trial;
    let exact = match (input.e0, input.e1) {
        (Some(e0), Some(e1)) => {
            if e1 == e0 {
                return Err(Error::domain("E₁ equals E₀"));
            }
            Some((e1 - h) / (e1 - e0))
        }
        _ => None,
    };
    let bounded = match (input.e1_lower, input.e1_upper, input.e0_lower) {
        (Some(e1l), Some(e1u), Some(e0l)) => {
            if e1u == e0l {
                return Err(Error::domain("upper E₁ equals lower E₀"));
            }
            Some((e1l - h) / (e1u - e0l))
        }
        _ => None,
    };
    Ok((exact, bounded))
}

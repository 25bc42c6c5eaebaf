//! Invariants checked on random inputs.

use afm::afm::afm_solve;
use afm::observables::{eckart_bound, EckartInput};
use afm::overlaps::{overlap_hydrogen_dilated, overlap_oscillator_dilated, MAX_INDEX};
use afm::specfun::{laguerre, lambert_w, solve_w_power, WBranch};
use afm::{AuxiliaryKind, PotentialModel, QuantumNumbers};
use proptest::prelude::*;

const INV_E: f64 = 0.367_879_441_171_442_33;

fn kind() -> impl Strategy<Value = AuxiliaryKind> {
    prop_oneof![Just(AuxiliaryKind::Coulomb), Just(AuxiliaryKind::Quadratic)]
}

fn dilation() -> impl Strategy<Value = f64> {
    (-3.0f64..3.0).prop_map(f64::exp)
}

proptest! {
    #[test]
    fn dilated_overlaps_are_bounded_and_symmetric(n in 0u32..7, np in 0u32..7, l in 0u32..5, a in dilation()) {
        for f in [overlap_hydrogen_dilated, overlap_oscillator_dilated] {
            let v = f(n, np, l, a).unwrap();
            prop_assert!(v.abs() <= 1.0 + 1e-12);
            let w = f(np, n, l, 1.0 / a).unwrap();
            prop_assert!((v - w).abs() < 1e-9, "{} vs {}", v, w);
        }
    }

    // Bessel's inequality over the partial basis.
    #[test]
    fn dilated_overlaps_respect_completeness(n in 0u32..5, l in 0u32..4, a in dilation()) {
        for f in [overlap_hydrogen_dilated, overlap_oscillator_dilated] {
            let sum: f64 = (0..=MAX_INDEX).map(|np| f(n, np, l, a).unwrap().powi(2)).sum();
            prop_assert!(sum <= 1.0 + 1e-10, "{}", sum);
        }
    }

    #[test]
    fn principal_branch_inverts(x in -INV_E..1e6f64) {
        let w = lambert_w(WBranch::Principal, x).unwrap();
        prop_assert!(w >= -1.0);
        prop_assert!((w * w.exp() - x).abs() <= 1e-12 * x.abs().max(1e-3));
    }

    #[test]
    fn lower_branch_inverts(x in -INV_E..-1e-12f64) {
        let w = lambert_w(WBranch::Lower, x).unwrap();
        prop_assert!(w <= -1.0);
        prop_assert!((w * w.exp() - x).abs() <= 1e-12 * x.abs());
    }

    #[test]
    fn w_power_round_trip(x in 1e-2f64..1e3, alpha in 0.1f64..4.0) {
        let z = lambert_w(WBranch::Principal, x).unwrap() * x.powf(alpha);
        let back = solve_w_power(z, alpha, WBranch::Principal).unwrap();
        prop_assert!(((back - x) / x).abs() <= 1e-10);
    }

    #[test]
    fn laguerre_at_origin_is_binomial(n in 0u32..20, alpha in 0.0f64..6.0) {
        // L_n^α(0) = Γ(n+α+1) / (n! Γ(α+1))
        let want = (1..=n).map(|k| (k as f64 + alpha) / k as f64).product::<f64>();
        let got = laguerre(n, alpha, 0.0);
        prop_assert!(((got - want) / want).abs() < 1e-12);
    }

    #[test]
    fn trial_moments_satisfy_cauchy_schwarz(kind in kind(), n in 0u32..12, l in 0u32..6, m in 0.1f64..5.0, a in 0.1f64..5.0) {
        let sol = afm_solve(PotentialModel::Linear { m, a }, kind, QuantumNumbers::new(n, l)).unwrap();
        let obs = sol.observables();
        let (r1, r2) = (obs.r(1).unwrap(), obs.r(2).unwrap());
        prop_assert!(r2 >= r1 * r1 * (1.0 - 1e-12));
        prop_assert!(obs.p4 >= obs.p2 * obs.p2 * (1.0 - 1e-12));
        // uncertainty: ⟨r²⟩⟨p²⟩ ≥ 9/4
        prop_assert!(r2 * obs.p2 >= 2.25 * (1.0 - 1e-12));
    }

    #[test]
    fn linear_energies_scale_and_bracket(n in 0u32..12, l in 0u32..6, m in 0.1f64..5.0, a in 0.1f64..5.0) {
        let q = QuantumNumbers::new(n, l);
        let v = PotentialModel::Linear { m, a };
        let scale = (a * a / (2.0 * m)).cbrt();
        let mut energies = Vec::new();
        for kind in [AuxiliaryKind::Coulomb, AuxiliaryKind::Quadratic] {
            let reduced = afm_solve(PotentialModel::REDUCED_LINEAR, kind, q).unwrap().energy;
            let e = afm_solve(v, kind, q).unwrap().energy;
            prop_assert!(((e - scale * reduced) / e).abs() < 1e-12);
            energies.push(e);
        }
        // lower bound below upper bound
        prop_assert!(energies[0] < energies[1]);
    }

    #[test]
    fn eckart_bound_falls_with_trial_energy(e0 in 0.5f64..3.0, gap in 0.1f64..3.0, h in 0.0f64..1.0, dh in 0.0f64..1.0) {
        let e1 = e0 + gap;
        let input = |h_trial| EckartInput { e0: Some(e0), e1: Some(e1), h_trial, ..Default::default() };
        let (lo, _) = eckart_bound(input(e0 + h * gap)).unwrap();
        let (hi_h, _) = eckart_bound(input(e0 + (h + dh) * gap)).unwrap();
        let (lo, hi_h) = (lo.unwrap(), hi_h.unwrap());
        prop_assert!(hi_h <= lo + 1e-15);
        prop_assert!((0.0..=1.0 + 1e-15).contains(&lo));
    }
}

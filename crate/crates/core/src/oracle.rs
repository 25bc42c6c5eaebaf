//! Numerical eigenstates of the radial Schrödinger equation.
//!
//! The equation `-u''/2m + [V + l(l+1)/(2m r²)] u = E u` is integrated on a
//! logarithmic mesh: with `x = ln r` and `u = √r y` it becomes
//! `y'' = [(l+½)² + 2m r² (V - E)] y`, which Numerov's method handles on a
//! uniform `x` grid. The mesh resolves the origin (where `y ∝ r^{l+½}`)
//! and the long tails of weakly bound states with the same number of points.
//!
//! Eigenvalues are located by bisection on the node count of the outward
//! solution, which equals the number of levels below the trial energy for
//! a Dirichlet wall at `r_max`. The eigenfunction is assembled from an
//! outward solution up to the outer turning point and an inward solution
//! from `r_max`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::afm::PotentialModel;
use crate::error::{Error, NoBoundReason, Result};
use crate::exact::{ObservableSet, Provenance, QuantumNumbers, MOMENT_EXPONENTS};
use crate::quad::simpson;

/// Solver settings. `r_max = None` picks a cutoff from the potential and
/// the state, extending it until the tail is resolved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub r_max: Option<f64>,
    pub grid_points: usize,
    pub energy_tol: f64,
    pub max_bisections: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            r_max: None,
            grid_points: 20_000,
            energy_tol: 1e-11,
            max_bisections: 200,
        }
    }
}

/// Reduced radial function `u(r) = r R(r)` sampled on a grid, normalized to
/// `∫ u² dr = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialFunction {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub energy: f64,
    pub q: QuantumNumbers,
}

impl RadialFunction {
    /// Samples `r ↦ r R(r)` for a radial function `R`.
    pub fn from_radial(grid: Vec<f64>, energy: f64, q: QuantumNumbers, radial: impl Fn(f64) -> f64) -> Self {
        let values = grid.iter().map(|&r| r * radial(r)).collect();
        RadialFunction {
            grid,
            values,
            energy,
            q,
        }
    }

    pub fn norm(&self) -> f64 {
        self.integrate(|_, u| u * u)
    }

    /// `∫ f(r, u(r)) dr` over `[0, r_max]`.
    ///
    /// The head interval `[0, r_first]` is added assuming the integrand
    /// behaves as a power of `r` there.
    pub fn integrate(&self, f: impl Fn(f64, f64) -> f64) -> f64 {
        let y: Vec<f64> = self.grid.iter().zip(&self.values).map(|(&r, &u)| f(r, u)).collect();
        let body = simpson(&self.grid, &y);
        body + head_correction(&self.grid, &y)
    }

    /// Number of interior sign changes of `u`.
    pub fn node_count(&self) -> usize {
        let peak = self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let floor = 1e-10 * peak;
        let mut count = 0;
        let mut prev = 0.0;
        for &v in &self.values {
            if v.abs() <= floor {
                continue;
            }
            if prev != 0.0 && (v > 0.0) != (prev > 0.0) {
                count += 1;
            }
            prev = v;
        }
        count
    }

    /// `R(0)` extrapolated from the first three grid points (S-states).
    pub fn radial_at_origin(&self) -> f64 {
        let r = &self.grid[..3];
        let f: Vec<f64> = (0..3).map(|i| self.values[i] / r[i]).collect();
        // Lagrange extrapolation to r = 0
        f[0] * r[1] * r[2] / ((r[0] - r[1]) * (r[0] - r[2]))
            + f[1] * r[0] * r[2] / ((r[1] - r[0]) * (r[1] - r[2]))
            + f[2] * r[0] * r[1] / ((r[2] - r[0]) * (r[2] - r[1]))
    }

    /// Probability beyond `fraction · r_max`.
    pub fn tail_mass(&self, fraction: f64) -> f64 {
        let cut = fraction * self.grid[self.grid.len() - 1];
        let start = self.grid.partition_point(|&r| r < cut);
        if start + 2 >= self.grid.len() {
            return 0.0;
        }
        let y: Vec<f64> = self.values[start..].iter().map(|u| u * u).collect();
        simpson(&self.grid[start..], &y)
    }

    /// `u(r)` by cubic Hermite interpolation; zero outside the grid.
    pub fn interpolate(&self, r: f64) -> f64 {
        let g = &self.grid;
        let n = g.len();
        if r < g[0] || r > g[n - 1] {
            return 0.0;
        }
        let i = g.partition_point(|&x| x <= r).clamp(1, n - 1) - 1;
        let (x0, x1) = (g[i], g[i + 1]);
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let d0 = self.slope(i);
        let d1 = self.slope(i + 1);
        let h = x1 - x0;
        let t = (r - x0) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * h * d0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * h * d1
    }

    /// Three-point derivative estimate on the (non-uniform) grid.
    fn slope(&self, i: usize) -> f64 {
        let g = &self.grid;
        let v = &self.values;
        let n = g.len();
        if i == 0 {
            return (v[1] - v[0]) / (g[1] - g[0]);
        }
        if i == n - 1 {
            return (v[n - 1] - v[n - 2]) / (g[n - 1] - g[n - 2]);
        }
        let h0 = g[i] - g[i - 1];
        let h1 = g[i + 1] - g[i];
        (-h1 / (h0 * (h0 + h1))) * v[i - 1] + ((h1 - h0) / (h0 * h1)) * v[i] + (h0 / (h1 * (h0 + h1))) * v[i + 1]
    }
}

/// `∫_0^{r_0} f` for `f ∝ r^p`, with `p` estimated from the first two samples.
fn head_correction(grid: &[f64], y: &[f64]) -> f64 {
    if y[0] == 0.0 || y[1] == 0.0 || (y[0] > 0.0) != (y[1] > 0.0) {
        return 0.0;
    }
    let p = (y[1] / y[0]).ln() / (grid[1] / grid[0]).ln();
    if p <= -1.0 {
        return 0.0;
    }
    y[0] * grid[0] / (p + 1.0)
}

/// Uniform mesh in `x = ln r`.
struct Mesh {
    r: Vec<f64>,
    h: f64,
    /// `(l+½)² + 2m r² V(r)`
    base: Vec<f64>,
    /// `2m r²`
    weight: Vec<f64>,
}

impl Mesh {
    fn new(v: PotentialModel, l: u32, r_min: f64, r_max: f64, points: usize) -> Self {
        let (x0, x1) = (r_min.ln(), r_max.ln());
        let h = (x1 - x0) / (points - 1) as f64;
        let two_m = 2.0 * v.mass();
        let lh = l as f64 + 0.5;
        let r: Vec<f64> = (0..points).map(|i| (x0 + i as f64 * h).exp()).collect();
        let weight: Vec<f64> = r.iter().map(|&ri| two_m * ri * ri).collect();
        let base = r
            .iter()
            .zip(&weight)
            .map(|(&ri, &w)| lh * lh + w * v.value(ri))
            .collect();
        Mesh { r, h, base, weight }
    }

    fn g(&self, i: usize, e: f64) -> f64 {
        self.base[i] - self.weight[i] * e
    }

    fn start(&self, l: u32) -> (f64, f64) {
        // y ∝ r^{l+½}: consecutive ratio e^{(l+½)h}
        ((-(l as f64 + 0.5) * self.h).exp(), 1.0)
    }

    /// Sign changes of the outward solution over the whole mesh.
    fn count_nodes(&self, l: u32, e: f64) -> usize {
        let h2 = self.h * self.h / 12.0;
        let (mut y_prev, mut y) = self.start(l);
        let mut w_prev = (1.0 - h2 * self.g(0, e)) * y_prev;
        let mut w = (1.0 - h2 * self.g(1, e)) * y;
        let mut nodes = 0;
        for i in 1..self.r.len() - 1 {
            let w_next = 2.0 * w - w_prev + 12.0 * h2 * self.g(i, e) * y;
            let y_next = w_next / (1.0 - h2 * self.g(i + 1, e));
            if (y_next > 0.0) != (y > 0.0) && y_next != 0.0 {
                nodes += 1;
            }
            w_prev = w;
            w = w_next;
            y_prev = y;
            y = y_next;
            if y.abs() > 1e150 {
                w_prev *= 1e-150;
                w *= 1e-150;
                y *= 1e-150;
                y_prev *= 1e-150;
            }
        }
        let _ = y_prev;
        nodes
    }

    /// Eigenfunction `u` at energy `e`: outward to `m`, inward from the end, matched at `m`.
    fn eigenfunction(&self, l: u32, e: f64) -> Vec<f64> {
        let n = self.r.len();
        let h2 = self.h * self.h / 12.0;
        // Outer classical turning point: last index with g < 0.
        let turning = (0..n).rev().find(|&i| self.g(i, e) < 0.0).unwrap_or(n / 2);
        let m = turning.clamp(2, n - 3);

        let mut out = vec![0.0; m + 1];
        let (y0, y1) = self.start(l);
        out[0] = y0;
        out[1] = y1;
        for i in 1..m {
            let w_prev = (1.0 - h2 * self.g(i - 1, e)) * out[i - 1];
            let w = (1.0 - h2 * self.g(i, e)) * out[i];
            let w_next = 2.0 * w - w_prev + 12.0 * h2 * self.g(i, e) * out[i];
            out[i + 1] = w_next / (1.0 - h2 * self.g(i + 1, e));
            if out[i + 1].abs() > 1e150 {
                out[..=i + 1].iter_mut().for_each(|v| *v *= 1e-150);
            }
        }

        let mut inw = vec![0.0; n];
        inw[n - 1] = 0.0;
        inw[n - 2] = 1e-200;
        for i in (m + 1..n - 1).rev() {
            let w_next = (1.0 - h2 * self.g(i + 1, e)) * inw[i + 1];
            let w = (1.0 - h2 * self.g(i, e)) * inw[i];
            let w_prev = 2.0 * w - w_next + 12.0 * h2 * self.g(i, e) * inw[i];
            inw[i - 1] = w_prev / (1.0 - h2 * self.g(i - 1, e));
            if inw[i - 1].abs() > 1e150 {
                inw[i - 1..].iter_mut().for_each(|v| *v *= 1e-150);
            }
        }
        let scale = if inw[m] != 0.0 { out[m] / inw[m] } else { 0.0 };
        let mut y = out;
        y.extend(inw[m + 1..].iter().map(|v| v * scale));
        y.iter().zip(&self.r).map(|(yi, ri)| yi * ri.sqrt()).collect()
    }
}

/// Characteristic length of the potential for the default cutoff.
fn length_scale(v: PotentialModel) -> f64 {
    match v {
        PotentialModel::Linear { m, a } => (2.0 * m * a).powf(-1.0 / 3.0),
        PotentialModel::Logarithmic | PotentialModel::Exponential { .. } => 1.0,
    }
}

/// Cutoff that leaves the tail of a state of energy `e` negligible.
fn required_r_max(v: PotentialModel, e: f64) -> f64 {
    let base = 30.0 * length_scale(v);
    match v {
        PotentialModel::Linear { a, .. } => base.max(2.0 * e / a + 15.0 * length_scale(v)),
        PotentialModel::Logarithmic => base.max(3.0 * e.exp()),
        PotentialModel::Exponential { k } => {
            let depth = e.abs().max(1e-12);
            (30.0 * (k / depth).ln().max(1.0)).max(20.0 / depth.sqrt())
        }
    }
}

fn bisect(mesh: &Mesh, q: QuantumNumbers, mut lo: f64, mut hi: f64, cfg: &SolverConfig) -> Result<f64> {
    for _ in 0..cfg.max_bisections {
        if hi - lo <= cfg.energy_tol {
            return Ok(0.5 * (lo + hi));
        }
        let mid = 0.5 * (lo + hi);
        if mesh.count_nodes(q.l, mid) > q.n as usize {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if hi - lo <= 10.0 * cfg.energy_tol {
        return Ok(0.5 * (lo + hi));
    }
    Err(Error::NumericalFailure(format!(
        "bisection for {q:?} stalled at width {:e}",
        hi - lo
    )))
}

fn solve_on(v: PotentialModel, q: QuantumNumbers, r_max: f64, cfg: &SolverConfig) -> Result<(Mesh, f64)> {
    let r_min = 1e-6 * length_scale(v);
    let mesh = Mesh::new(v, q.l, r_min, r_max, cfg.grid_points);
    let e_min = (0..mesh.r.len())
        .map(|i| mesh.base[i] / mesh.weight[i] - (q.l as f64 + 0.5).powi(2) / mesh.weight[i])
        .fold(f64::INFINITY, f64::min);
    let lo = e_min - 1e-3;
    let hi = match v {
        PotentialModel::Exponential { .. } => {
            let hi = -1e-14;
            if mesh.count_nodes(q.l, hi) <= q.n as usize {
                return Err(Error::NoBoundState(NoBoundReason::NotFound));
            }
            hi
        }
        _ => {
            let mut step = 1.0;
            let mut hi = lo + step;
            while mesh.count_nodes(q.l, hi) <= q.n as usize {
                step *= 2.0;
                hi = lo + step;
                if step > 1e8 {
                    return Err(Error::NumericalFailure(format!("no bracket for {q:?}")));
                }
            }
            hi
        }
    };
    let e = bisect(&mesh, q, lo, hi, cfg)?;
    Ok((mesh, e))
}

/// Eigenstate of `v` with quantum numbers `q`.
pub fn solve_radial(v: PotentialModel, q: QuantumNumbers, cfg: SolverConfig) -> Result<RadialFunction> {
    v.validate()?;
    if cfg.grid_points < 16 {
        return Err(Error::domain("grid_points must be at least 16"));
    }
    let (mesh, e) = match cfg.r_max {
        Some(r_max) => solve_on(v, q, r_max, &cfg)?,
        None => {
            let mut r_max = 30.0 * length_scale(v);
            let mut attempt = solve_on(v, q, r_max, &cfg);
            let mut rounds = 0;
            loop {
                rounds += 1;
                match attempt {
                    Ok((mesh, e)) => {
                        let needed = required_r_max(v, e);
                        if needed <= 1.05 * r_max || rounds > 8 {
                            break (mesh, e);
                        }
                        r_max = needed;
                    }
                    // Weakly bound states may be squeezed out by the wall.
                    Err(Error::NoBoundState(_)) if rounds <= 4 => r_max *= 4.0,
                    Err(err) => return Err(err),
                }
                attempt = solve_on(v, q, r_max, &cfg);
            }
        }
    };
    let mut values = mesh.eigenfunction(q.l, e);
    let mut f = RadialFunction {
        grid: mesh.r,
        values: Vec::new(),
        energy: e,
        q,
    };
    f.values = std::mem::take(&mut values);
    let norm = f.norm();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::NumericalFailure(format!("degenerate eigenfunction for {q:?}")));
    }
    let s = norm.sqrt();
    f.values.iter_mut().for_each(|u| *u /= s);
    Ok(f)
}

/// Observables of a numerical eigenstate.
pub fn numeric_observables(f: &RadialFunction, v: PotentialModel) -> Result<ObservableSet> {
    let tail = f.tail_mass(0.9);
    if tail > 1e-8 {
        return Err(Error::QuadratureFailure(format!(
            "probability {tail:e} beyond 90% of r_max; extend the grid"
        )));
    }
    let mut r_moments = BTreeMap::new();
    for k in MOMENT_EXPONENTS {
        r_moments.insert(k, f.integrate(|r, u| u * u * r.powi(k)));
    }
    let mean_v = f.integrate(|r, u| u * u * v.value(r));
    let mean_v2 = f.integrate(|r, u| u * u * v.value(r).powi(2));
    let m = v.mass();
    let e = f.energy;
    let psi0_sq = (f.q.l == 0).then(|| f.radial_at_origin().powi(2) / (4.0 * PI));
    Ok(ObservableSet {
        r_moments,
        p2: 2.0 * m * (e - mean_v),
        p4: 4.0 * m * m * (e * e - 2.0 * e * mean_v + mean_v2),
        psi0_sq,
        mean_h: Some(e),
        provenance: Provenance::Quadrature,
    })
}

/// `∫ u_f u_g dr` on the grid of `f`, interpolating `g`.
pub fn numeric_overlap(f: &RadialFunction, g: &RadialFunction) -> Result<f64> {
    if f.grid == g.grid {
        return Ok(integrate_product(&f.grid, &f.values, &g.values));
    }
    let lo = f.grid[0].max(g.grid[0]);
    let hi = f.grid[f.grid.len() - 1].min(g.grid[g.grid.len() - 1]);
    for h in [f, g] {
        let outside = outside_mass(h, lo, hi);
        if outside > 1e-10 {
            return Err(Error::GridMismatch(format!(
                "probability {outside:e} outside the common support [{lo}, {hi}]"
            )));
        }
    }
    let start = f.grid.partition_point(|&r| r < lo);
    let end = f.grid.partition_point(|&r| r <= hi);
    let grid = &f.grid[start..end];
    let gv: Vec<f64> = grid.iter().map(|&r| g.interpolate(r)).collect();
    Ok(integrate_product(grid, &f.values[start..end], &gv))
}

fn integrate_product(grid: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let y: Vec<f64> = a.iter().zip(b).map(|(x, y)| x * y).collect();
    simpson(grid, &y) + head_correction(grid, &y)
}

fn outside_mass(h: &RadialFunction, lo: f64, hi: f64) -> f64 {
    let y: Vec<f64> = h.values.iter().map(|u| u * u).collect();
    let below = h.grid.partition_point(|&r| r < lo);
    let above = h.grid.partition_point(|&r| r <= hi);
    let mut mass = 0.0;
    if below >= 2 {
        mass += simpson(&h.grid[..=below], &y[..=below]);
    }
    if above + 1 < h.grid.len() {
        let from = above.saturating_sub(1);
        mass += simpson(&h.grid[from..], &y[from..]);
    }
    mass
}

/// Logarithmic grid suitable for sampling analytic states.
pub fn log_grid(r_min: f64, r_max: f64, points: usize) -> Vec<f64> {
    let (x0, x1) = (r_min.ln(), r_max.ln());
    let h = (x1 - x0) / (points - 1) as f64;
    (0..points).map(|i| (x0 + i as f64 * h).exp()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{linear_s_observables, linear_s_state};
    use crate::specfun::airy_zero;
    use approx::assert_relative_eq;

    const LIN: PotentialModel = PotentialModel::REDUCED_LINEAR;

    fn solve(v: PotentialModel, n: u32, l: u32) -> RadialFunction {
        solve_radial(v, QuantumNumbers::new(n, l), SolverConfig::default()).unwrap()
    }

    #[test]
    fn linear_s_waves_match_airy_zeros() {
        for n in 0..=8 {
            let f = solve(LIN, n, 0);
            assert_relative_eq!(f.energy, -airy_zero(n), max_relative = 1e-7);
            assert_eq!(f.node_count(), n as usize);
            assert_relative_eq!(f.norm(), 1.0, max_relative = 1e-9);
        }
    }

    #[test]
    fn linear_higher_waves() {
        let want = [
            (0, 1, 3.361_254_52),
            (2, 1, 6.207_623_29),
            (0, 2, 4.248_182_26),
            (3, 2, 8.009_702_92),
        ];
        for (n, l, e) in want {
            let f = solve(LIN, n, l);
            assert_relative_eq!(f.energy, e, max_relative = 1e-8);
            assert_eq!(f.node_count(), n as usize);
        }
    }

    #[test]
    fn logarithmic_levels() {
        let want = [(0, 0.351_185_09), (1, 1.154_295_4), (2, 1.596_468_53)];
        for (n, e) in want {
            let f = solve(PotentialModel::Logarithmic, n, 0);
            assert!((f.energy - e).abs() < 1e-7, "{} vs {e}", f.energy);
            let obs = numeric_observables(&f, PotentialModel::Logarithmic).unwrap();
            assert!((obs.p2 - 2.0).abs() < 1e-6, "{}", obs.p2);
        }
    }

    #[test]
    fn exponential_levels() {
        let f = solve(PotentialModel::Exponential { k: 5.0 }, 0, 0);
        assert!((f.energy + 0.550).abs() < 1e-3);
        assert!((f.energy + 0.550_316).abs() < 1e-6);
        let f = solve(PotentialModel::Exponential { k: 20.0 }, 2, 0);
        assert!((f.energy + 0.009).abs() < 1e-3);
        assert!((f.energy + 0.008_694_51).abs() < 1e-7);
        let f = solve(PotentialModel::Exponential { k: 10.0 }, 0, 1);
        assert!((f.energy + 0.334_054_719).abs() < 1e-7);
        assert!(numeric_observables(&f, PotentialModel::Exponential { k: 10.0 }).is_ok());
    }

    #[test]
    fn exponential_missing_state() {
        let err = solve_radial(
            PotentialModel::Exponential { k: 5.0 },
            QuantumNumbers::new(1, 0),
            SolverConfig::default(),
        )
        .unwrap_err();
        assert_eq!(err, Error::NoBoundState(NoBoundReason::NotFound));
    }

    #[test]
    fn linear_observables_match_closed_forms() {
        let f = solve(LIN, 0, 0);
        let obs = numeric_observables(&f, LIN).unwrap();
        let exact = linear_s_observables(0.5, 1.0, 0);
        for k in [1, 2, 3, 4] {
            assert_relative_eq!(obs.r(k).unwrap(), exact.r(k).unwrap(), max_relative = 1e-7);
        }
        assert_relative_eq!(obs.p2, exact.p2, max_relative = 1e-7);
        assert_relative_eq!(obs.p4, exact.p4, max_relative = 1e-6);
        assert_relative_eq!(obs.psi0_sq.unwrap(), exact.psi0_sq.unwrap(), max_relative = 1e-6);
    }

    #[test]
    fn overlap_with_itself_and_with_airy_state() {
        let f = solve(LIN, 1, 0);
        assert_relative_eq!(numeric_overlap(&f, &f).unwrap(), 1.0, max_relative = 1e-8);
        let airy = linear_s_state(0.5, 1.0, 1);
        let g = RadialFunction::from_radial(log_grid(1e-5, 25.0, 8000), airy.energy, f.q, |r| airy.radial(r));
        assert_relative_eq!(numeric_overlap(&f, &g).unwrap(), 1.0, max_relative = 1e-7);
    }

    #[test]
    fn grid_convergence() {
        let q = QuantumNumbers::new(1, 1);
        let coarse = solve_radial(
            LIN,
            q,
            SolverConfig {
                r_max: Some(30.0),
                ..Default::default()
            },
        )
        .unwrap();
        let fine = solve_radial(
            LIN,
            q,
            SolverConfig {
                r_max: Some(60.0),
                grid_points: 40_000,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(
            (coarse.energy - fine.energy).abs() < 1e-9,
            "{}",
            coarse.energy - fine.energy
        );
    }
}

//! Executable checks on computed solutions: conservation of the area under
//! the graph, Rankine-Hugoniot speeds measured by finite differences of the
//! shock positions, the jump-direction (entropy) rule, and L1 comparison
//! against a reference.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::flux::{Convexity, Flux};
use crate::geometry::area_under_graph;
use crate::godunov::Grid1D;
use crate::profile::PiecewiseProfile;
use crate::solver::{solve_at_time, SolutionCurve, SolveParams};

/// Anything evaluable pointwise on a finite interval.
pub trait Sampled1D {
    fn value_at(&self, x: f64) -> f64;
    fn span(&self) -> (f64, f64);
}

impl Sampled1D for SolutionCurve {
    fn value_at(&self, x: f64) -> f64 {
        self.evaluate(x)
    }

    fn span(&self) -> (f64, f64) {
        let pts = self.curve.points();
        (pts[0].x, pts[pts.len() - 1].x)
    }
}

impl Sampled1D for Grid1D {
    fn value_at(&self, x: f64) -> f64 {
        Grid1D::value_at(self, x)
    }

    fn span(&self) -> (f64, f64) {
        (self.x_min, self.x_max)
    }
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub conservation_residual: f64,
    /// Per shock: (position, |fd speed - RH speed|).
    pub rh_residuals: Vec<(f64, f64)>,
    pub entropy_ok: bool,
    pub l1_vs_reference: Option<f64>,
}

/// Composite midpoint approximation of the L1 distance on the union span.
pub fn l1_distance<A: Sampled1D + ?Sized, B: Sampled1D + ?Sized>(
    a: &A,
    b: &B,
    grid: usize,
) -> f64 {
    let (a_lo, a_hi) = a.span();
    let (b_lo, b_hi) = b.span();
    let lo = a_lo.min(b_lo);
    let hi = a_hi.max(b_hi);
    let n = grid.max(1);
    let h = (hi - lo) / n as f64;
    let mut acc = crate::geometry::CompensatedSum::new();
    for i in 0..n {
        let x = lo + (i as f64 + 0.5) * h;
        acc.add((a.value_at(x) - b.value_at(x)).abs());
    }
    acc.value() * h
}

/// Central-difference speed of one shock, with ordinals matched across the
/// time stencil by nearest position.
pub fn shock_speed_fd(
    flux: &Flux,
    profile: &PiecewiseProfile,
    shock_index: usize,
    t: f64,
    dt: f64,
    params: &SolveParams,
) -> Result<f64> {
    if !(dt > 0.0) || t - dt < 0.0 {
        return Err(Error::Config(alloc::format!(
            "stencil [t - dt, t + dt] = [{}, {}] must stay non-negative",
            t - dt,
            t + dt
        )));
    }
    let center = solve_at_time(flux, profile, t, params)?;
    let shock = center
        .shocks
        .get(shock_index)
        .ok_or(Error::UnmatchedShock { index: shock_index, t })?;
    let minus = solve_at_time(flux, profile, t - dt, params)?;
    let plus = solve_at_time(flux, profile, t + dt, params)?;
    if minus.shocks.len() != center.shocks.len() || plus.shocks.len() != center.shocks.len() {
        return Err(Error::UnmatchedShock { index: shock_index, t });
    }
    let (u_lo, u_hi) = profile.value_range();
    let radius = 10.0 * dt * flux.max_abs_speed(u_lo, u_hi).max(1.0);
    let nearest = |sol: &SolutionCurve| -> Result<f64> {
        let mut best: Option<f64> = None;
        for s in &sol.shocks {
            let d = (s.x - shock.x).abs();
            if best.is_none_or(|bx: f64| d < (bx - shock.x).abs()) {
                best = Some(s.x);
            }
        }
        match best {
            Some(x) if (x - shock.x).abs() <= radius => Ok(x),
            _ => Err(Error::UnmatchedShock { index: shock_index, t }),
        }
    };
    let x_m = nearest(&minus)?;
    let x_p = nearest(&plus)?;
    Ok((x_p - x_m) / (2.0 * dt))
}

/// Runs the full report for a solution produced by `solve_at_time` with the
/// same flux, profile, and numeric parameters.
pub fn validate(
    flux: &Flux,
    profile: &PiecewiseProfile,
    solution: &SolutionCurve,
    dt: f64,
    params: &SolveParams,
) -> Result<ValidationReport> {
    let conservation_residual =
        (area_under_graph(&solution.curve) - profile.initial_area()).abs();

    let mut rh_residuals = Vec::with_capacity(solution.shocks.len());
    for (i, s) in solution.shocks.iter().enumerate() {
        let fd = shock_speed_fd(flux, profile, i, solution.t, dt, params)?;
        rh_residuals.push((s.x, (fd - s.rh_speed).abs()));
    }

    let entropy_ok = solution.shocks.iter().all(|s| match flux.convexity() {
        Convexity::StrictlyConvex => s.u_minus > s.u_plus,
        Convexity::StrictlyConcave => s.u_minus < s.u_plus,
    });

    Ok(ValidationReport {
        conservation_residual,
        rh_residuals,
        entropy_ok,
        l1_vs_reference: None,
    })
}

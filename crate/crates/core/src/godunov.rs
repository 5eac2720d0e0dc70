//! First-order Godunov finite-volume reference solver.
//!
//! This is the independent cross-check oracle: a monotone scheme that
//! converges to the entropy solution, run on a grid wide enough that no wave
//! reaches the boundary.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::flux::Flux;
use crate::profile::PiecewiseProfile;

/// Uniform cell-average grid.
#[derive(Debug, Clone)]
pub struct Grid1D {
    pub x_min: f64,
    pub x_max: f64,
    pub n_cells: usize,
    pub dx: f64,
    pub averages: Vec<f64>,
}

impl Grid1D {
    pub fn cell_center(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx
    }

    /// Piecewise-constant evaluation; zero outside the grid.
    pub fn value_at(&self, x: f64) -> f64 {
        if x < self.x_min || x >= self.x_max {
            return 0.0;
        }
        let i = (((x - self.x_min) / self.dx) as usize).min(self.n_cells - 1);
        self.averages[i]
    }

    /// Discrete conserved quantity: sum of averages times dx.
    pub fn total_mass(&self) -> f64 {
        let mut acc = crate::geometry::CompensatedSum::new();
        for &u in &self.averages {
            acc.add(u);
        }
        acc.value() * self.dx
    }
}

/// Exact Riemann flux for convexity-classified f:
/// min over [u_l, u_r] of f when u_l <= u_r, max over [u_r, u_l] otherwise;
/// the extremum sits at an endpoint or at the sonic state where f' = 0.
fn godunov_flux(flux: &Flux, u_l: f64, u_r: f64) -> f64 {
    let fl = flux.value(u_l);
    let fr = flux.value(u_r);
    if u_l == u_r {
        return fl;
    }
    let sonic = flux.speed_root_in(u_l.min(u_r), u_l.max(u_r));
    if u_l <= u_r {
        let mut m = fl.min(fr);
        if let Some(s) = sonic {
            m = m.min(flux.value(s));
        }
        m
    } else {
        let mut m = fl.max(fr);
        if let Some(s) = sonic {
            m = m.max(flux.value(s));
        }
        m
    }
}

/// Evolves cell averages of the profile to `t_final` with the first-order
/// Godunov scheme; the time step is re-chosen each step from the current
/// wave speeds and the final partial step lands on `t_final` exactly.
pub fn godunov_solve(
    flux: &Flux,
    profile: &PiecewiseProfile,
    t_final: f64,
    n_cells: usize,
    cfl: f64,
) -> Result<Grid1D> {
    if !(cfl > 0.0 && cfl <= 0.9) {
        return Err(Error::Config(alloc::format!(
            "cfl = {cfl} outside (0, 0.9]"
        )));
    }
    if t_final < 0.0 {
        return Err(Error::Config(alloc::format!(
            "t_final = {t_final} must be >= 0"
        )));
    }
    if n_cells < 2 {
        return Err(Error::Config(alloc::format!(
            "n_cells = {n_cells} too small"
        )));
    }

    let (s_lo, s_hi) = profile.support();
    let (u_lo, u_hi) = profile.value_range();
    let margin = 1.0f64.max(t_final * flux.max_abs_speed(u_lo, u_hi));
    let x_min = s_lo - margin;
    let x_max = s_hi + margin;
    let dx = (x_max - x_min) / n_cells as f64;

    let mut u: Vec<f64> = (0..n_cells)
        .map(|i| {
            let a = x_min + dx * i as f64;
            profile.integral(a, a + dx) / dx
        })
        .collect();

    if t_final == 0.0 {
        return Ok(Grid1D {
            x_min,
            x_max,
            n_cells,
            dx,
            averages: u,
        });
    }

    let mut t = 0.0;
    let mut fluxes: Vec<f64> = alloc::vec![0.0; n_cells + 1];
    while t < t_final {
        let max_speed = u
            .iter()
            .map(|&v| flux.speed(v).abs())
            .fold(0.0f64, f64::max);
        if max_speed == 0.0 {
            // No wave motion anywhere: the state is already stationary.
            break;
        }
        let dt = (cfl * dx / max_speed).min(t_final - t);

        // Outflow boundaries: ghost states copy the edge cells.
        fluxes[0] = godunov_flux(flux, u[0], u[0]);
        fluxes[n_cells] = godunov_flux(flux, u[n_cells - 1], u[n_cells - 1]);
        for i in 1..n_cells {
            fluxes[i] = godunov_flux(flux, u[i - 1], u[i]);
        }
        let r = dt / dx;
        for i in 0..n_cells {
            u[i] -= r * (fluxes[i + 1] - fluxes[i]);
        }
        t += dt;
    }

    Ok(Grid1D {
        x_min,
        x_max,
        n_cells,
        dx,
        averages: u,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn total_variation(u: &[f64]) -> f64 {
        u.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
    }

    #[test]
    fn initial_averages_at_zero_time() {
        let g = godunov_solve(
            &Flux::burgers(),
            &PiecewiseProfile::box_profile(),
            0.0,
            400,
            0.9,
        )
        .unwrap();
        assert_relative_eq!(g.total_mass(), 1.0, max_relative = 1e-12);
        assert_relative_eq!(g.value_at(-0.5), 1.0, max_relative = 1e-12);
        assert_eq!(g.value_at(g.x_min - 1.0), 0.0);
    }

    #[test]
    fn riemann_shock_lands_within_two_cells() {
        let n = 4000;
        let g = godunov_solve(
            &Flux::burgers(),
            &PiecewiseProfile::riemann_step(),
            1.0,
            n,
            0.9,
        )
        .unwrap();
        // Locate the steepest descent as the discrete shock position.
        let mut best = 0;
        let mut drop = 0.0;
        for i in 0..n - 1 {
            let d = g.averages[i] - g.averages[i + 1];
            if d > drop {
                drop = d;
                best = i;
            }
        }
        let x_shock = 0.5 * (g.cell_center(best) + g.cell_center(best + 1));
        assert!(
            (x_shock - 0.5).abs() <= 2.0 * g.dx,
            "shock at {x_shock}, dx = {}",
            g.dx
        );
    }

    #[test]
    fn mass_is_conserved_and_tv_does_not_grow() {
        let flux = Flux::burgers();
        let profile = PiecewiseProfile::gaussian_triple();
        let g0 = godunov_solve(&flux, &profile, 0.0, 1000, 0.9).unwrap();
        let g1 = godunov_solve(&flux, &profile, 2.0, 1000, 0.9).unwrap();
        let g2 = godunov_solve(&flux, &profile, 4.25, 1000, 0.9).unwrap();
        assert_relative_eq!(g1.total_mass(), g0.total_mass(), max_relative = 1e-12);
        assert_relative_eq!(g2.total_mass(), g0.total_mass(), max_relative = 1e-12);
        let tv0 = total_variation(&g0.averages);
        assert!(total_variation(&g1.averages) <= tv0 + 1e-12);
        assert!(total_variation(&g2.averages) <= tv0 + 1e-12);
    }

    #[test]
    fn sonic_rarefaction_flux_uses_the_sonic_state() {
        // Transonic data around the Burgers sonic point u = 0.
        let b = Flux::burgers();
        assert_eq!(godunov_flux(&b, -1.0, 1.0), 0.0);
        assert_eq!(godunov_flux(&b, 1.0, -1.0), 0.5);
        // One-sided data: the extremum sits at an endpoint.
        assert_eq!(godunov_flux(&b, 0.5, 1.0), 0.125);
    }

    #[test]
    fn rejects_bad_configuration() {
        let b = Flux::burgers();
        let p = PiecewiseProfile::box_profile();
        assert!(godunov_solve(&b, &p, 1.0, 100, 0.0).is_err());
        assert!(godunov_solve(&b, &p, 1.0, 100, 1.2).is_err());
        assert!(godunov_solve(&b, &p, -1.0, 100, 0.5).is_err());
    }
}

//! Shock paths in the (x, t)-plane, built by solving at a ladder of times
//! (each solve independent) and linking shocks across consecutive slices by
//! nearest position.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::flux::Flux;
use crate::geometry::Point;
use crate::profile::PiecewiseProfile;
use crate::solver::{solve_at_time, SolutionCurve, SolveParams};

/// One linked path; points carry x in `x` and t in `y`, matching the
/// (x, t)-plane output convention.
#[derive(Debug, Clone)]
pub struct ShockPath {
    pub points: Vec<Point>,
}

/// Two or more paths matched a single shock between consecutive slices.
#[derive(Debug, Clone, PartialEq)]
pub struct MergeEvent {
    pub t_before: f64,
    pub t_after: f64,
    pub surviving: usize,
    pub absorbed: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct ShockPathSet {
    pub times: Vec<f64>,
    pub paths: Vec<ShockPath>,
    pub merge_events: Vec<MergeEvent>,
}

impl ShockPathSet {
    /// Number of shocks present at each slice.
    pub fn counts_per_slice(&self) -> Vec<usize> {
        self.times
            .iter()
            .map(|&t| {
                self.paths
                    .iter()
                    .filter(|p| p.points.iter().any(|q| q.y == t))
                    .count()
            })
            .collect()
    }
}

/// Links per-slice shock positions into paths. `max_speed` bounds how far a
/// shock can travel per unit time; the matching radius between consecutive
/// slices is twice that times the slice spacing.
pub fn link_slices(times: &[f64], slices: &[SolutionCurve], max_speed: f64) -> ShockPathSet {
    assert_eq!(times.len(), slices.len());
    let mut paths: Vec<ShockPath> = Vec::new();
    let mut merge_events: Vec<MergeEvent> = Vec::new();
    // Paths still open: (path index, last x).
    let mut active: Vec<(usize, f64)> = Vec::new();

    for (k, (t, slice)) in times.iter().zip(slices).enumerate() {
        let xs: Vec<f64> = slice.shocks.iter().map(|s| s.x).collect();
        if k == 0 {
            for &x in &xs {
                paths.push(ShockPath {
                    points: alloc::vec![Point::new(x, *t)],
                });
                active.push((paths.len() - 1, x));
            }
            continue;
        }
        let dt = times[k] - times[k - 1];
        let radius = 2.0 * dt * max_speed.max(1e-12);

        // Greedy nearest assignment: shortest path-to-shock links first,
        // one shock per path. Paths left within radius of an already-taken
        // shock merged into it; shocks left over start new paths.
        let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
        for (a, &(_, last_x)) in active.iter().enumerate() {
            for (j, &x) in xs.iter().enumerate() {
                let d = (x - last_x).abs();
                if d <= radius {
                    pairs.push((d, a, j));
                }
            }
        }
        pairs.sort_by(|p, q| p.partial_cmp(q).expect("finite distances"));

        let mut path_match: Vec<Option<usize>> = alloc::vec![None; active.len()];
        let mut shock_taken: Vec<Option<usize>> = alloc::vec![None; xs.len()];
        for &(_, a, j) in &pairs {
            if path_match[a].is_none() && shock_taken[j].is_none() {
                path_match[a] = Some(j);
                shock_taken[j] = Some(a);
            }
        }

        let mut next_active: Vec<(usize, f64)> = Vec::new();
        for (j, &x) in xs.iter().enumerate() {
            match shock_taken[j] {
                Some(a) => {
                    let path_idx = active[a].0;
                    paths[path_idx].points.push(Point::new(x, *t));
                    next_active.push((path_idx, x));
                }
                None => {
                    paths.push(ShockPath {
                        points: alloc::vec![Point::new(x, *t)],
                    });
                    next_active.push((paths.len() - 1, x));
                }
            }
        }

        // Unmatched paths that still sit within radius of a matched shock
        // merged into its path between these two slices.
        for (a, &(path_idx, last_x)) in active.iter().enumerate() {
            if path_match[a].is_some() {
                continue;
            }
            let nearest = xs
                .iter()
                .enumerate()
                .filter(|(_, &x)| (x - last_x).abs() <= radius)
                .min_by(|(_, x1), (_, x2)| {
                    (*x1 - last_x)
                        .abs()
                        .partial_cmp(&(*x2 - last_x).abs())
                        .expect("finite distances")
                });
            if let Some((j, _)) = nearest {
                let surviving = active[shock_taken[j].expect("nearest shock was matched")].0;
                merge_events.push(MergeEvent {
                    t_before: times[k - 1],
                    t_after: times[k],
                    surviving,
                    absorbed: alloc::vec![path_idx],
                });
            }
        }
        active = next_active;
    }

    ShockPathSet {
        times: times.to_vec(),
        paths,
        merge_events,
    }
}

/// Solves at `n_times` uniformly spaced times and links the shocks.
pub fn sweep(
    flux: &Flux,
    profile: &PiecewiseProfile,
    t_start: f64,
    t_end: f64,
    n_times: usize,
    params: &SolveParams,
) -> Result<ShockPathSet> {
    if !(0.0 <= t_start && t_start < t_end) || n_times < 2 {
        return Err(Error::Config(alloc::format!(
            "sweep needs 0 <= t_start < t_end and n_times >= 2 (got [{t_start}, {t_end}], {n_times})"
        )));
    }
    let times: Vec<f64> = (0..n_times)
        .map(|i| t_start + (t_end - t_start) * i as f64 / (n_times - 1) as f64)
        .collect();
    let mut slices = Vec::with_capacity(n_times);
    for &t in &times {
        let sol = solve_at_time(flux, profile, t, params).map_err(|e| Error::SliceFailed {
            t,
            message: alloc::format!("{e}"),
        })?;
        slices.push(sol);
    }
    let (u_lo, u_hi) = profile.value_range();
    Ok(link_slices(&times, &slices, flux.max_abs_speed(u_lo, u_hi)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::Segment;
    use alloc::boxed::Box;

    #[test]
    fn pre_breaking_sweep_yields_no_paths() {
        // A gentle bump whose characteristics first cross near t = 2.3:
        // sweeping well before that sees no shocks at all.
        let profile = PiecewiseProfile::new(alloc::vec![Segment::new(
            -8.0,
            8.0,
            Box::new(|x: f64| 0.5 * (-x * x).exp()),
        )])
        .unwrap();
        let set = sweep(
            &Flux::burgers(),
            &profile,
            0.0,
            1.0,
            6,
            &SolveParams {
                n_points: 300,
                jump_subpoints: 8,
                ..SolveParams::default()
            },
        )
        .unwrap();
        assert!(set.paths.is_empty());
        assert!(set.merge_events.is_empty());
    }

    #[test]
    fn riemann_path_follows_half_t() {
        let set = sweep(
            &Flux::burgers(),
            &PiecewiseProfile::riemann_step(),
            0.1,
            1.9,
            25,
            &SolveParams {
                n_points: 400,
                jump_subpoints: 32,
                ..SolveParams::default()
            },
        )
        .unwrap();
        assert_eq!(set.paths.len(), 1);
        assert!(set.merge_events.is_empty());
        let path = &set.paths[0];
        assert_eq!(path.points.len(), 25);
        for q in &path.points {
            assert!(
                (q.x - 0.5 * q.y).abs() <= 5e-3,
                "shock at x = {} for t = {}",
                q.x,
                q.y
            );
        }
        // t strictly increasing along the path.
        assert!(path.points.windows(2).all(|w| w[1].y > w[0].y));
    }

    #[test]
    fn linking_records_merges() {
        // Synthetic slices: two shocks that approach and become one.
        use crate::geometry::{Point as P, Polyline};
        let fake = |xs: &[f64], t: f64| -> SolutionCurve {
            let shocks = xs
                .iter()
                .map(|&x| crate::solver::Shock {
                    x,
                    u_minus: 1.0,
                    u_plus: 0.0,
                    rh_speed: 0.5,
                    balanced_area: 0.1,
                    secant_iters: 8,
                    s_curve_length: 1.0,
                })
                .collect();
            SolutionCurve {
                t,
                curve: Polyline::new(alloc::vec![P::new(0.0, 0.0), P::new(1.0, 0.0)]).unwrap(),
                shocks,
                area_drift: 0.0,
                epsilon_estimate: 0.0,
                cuts_performed: xs.len() as u32,
                initial_area: 1.0,
                secant_iterations: alloc::vec![8; xs.len()],
            }
        };
        let times = [0.0, 1.0, 2.0];
        let slices = [
            fake(&[0.0, 1.0], 0.0),
            fake(&[0.4, 0.7], 1.0),
            fake(&[0.55], 2.0),
        ];
        let set = link_slices(&times, &slices, 0.5);
        assert_eq!(set.paths.len(), 2);
        assert_eq!(set.merge_events.len(), 1);
        let ev = &set.merge_events[0];
        assert_eq!((ev.t_before, ev.t_after), (1.0, 2.0));
        assert_eq!(set.counts_per_slice(), alloc::vec![2, 2, 1]);
    }
}

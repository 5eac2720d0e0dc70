//! The area-preserving plane shear (x, y) -> (x + f'(y) t, y) that carries
//! the initial curve to its time-t image, and the fold census of the result.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::flux::Flux;
use crate::geometry::{Point, Polyline, DEDUP_EPS};

/// Runs of consecutive x within this absolute tolerance collapse to one
/// representative before extrema are counted.
pub const PLATEAU_EPS: f64 = 1e-14;

/// The time-t image of an initial curve, with the pre-shear abscissa of
/// every vertex retained.
#[derive(Debug, Clone)]
pub struct ShearedCurve {
    pub t: f64,
    pub curve: Polyline,
    pub source_params: Vec<f64>,
}

/// (x, y) -> (x + f'(y) t, y).
pub fn apply_shear(flux: &Flux, p: Point, t: f64) -> Point {
    Point::new(p.x + flux.speed(p.y) * t, p.y)
}

/// Shears a curve vertex-wise. The y-coordinates are untouched, so the
/// signed area under the graph is carried over exactly.
pub fn shear_polyline(flux: &Flux, gamma0: &Polyline, t: f64) -> Result<ShearedCurve> {
    if t < 0.0 {
        return Err(Error::Config(alloc::format!("time t = {t} must be >= 0")));
    }
    let mut pts: Vec<Point> = Vec::with_capacity(gamma0.len());
    let mut params: Vec<f64> = Vec::with_capacity(gamma0.len());
    for p in gamma0.points() {
        let q = apply_shear(flux, *p, t);
        if let Some(last) = pts.last() {
            if last.dist(&q) < DEDUP_EPS {
                continue;
            }
        }
        pts.push(q);
        params.push(p.x);
    }
    Ok(ShearedCurve {
        t,
        curve: Polyline::new(pts)?,
        source_params: params,
    })
}

/// Number of strict local extrema of the x-coordinate along the vertex
/// order, after collapsing plateau runs.
pub fn count_x_extrema(curve: &ShearedCurve) -> usize {
    count_x_extrema_of(&curve.curve)
}

pub fn count_x_extrema_of(polyline: &Polyline) -> usize {
    let xs = collapse_plateaus(polyline);
    let mut count = 0;
    for w in xs.windows(3) {
        if (w[1] - w[0]) * (w[2] - w[1]) < 0.0 {
            count += 1;
        }
    }
    count
}

fn collapse_plateaus(polyline: &Polyline) -> Vec<f64> {
    let mut xs: Vec<f64> = Vec::with_capacity(polyline.len());
    for p in polyline.points() {
        match xs.last() {
            Some(&last) if (p.x - last).abs() <= PLATEAU_EPS => {}
            _ => xs.push(p.x),
        }
    }
    xs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::area_under_graph;
    use crate::profile::{sample_gamma0, PiecewiseProfile};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn shear_point_cases() {
        let b = Flux::burgers();
        let p = Point::new(1.0, 0.5);
        assert_eq!(apply_shear(&b, p, 0.0), p);
        assert_eq!(apply_shear(&b, p, 2.0), Point::new(2.0, 0.5));
        let l = Flux::lwr_traffic();
        assert_eq!(apply_shear(&l, Point::new(0.0, 0.5), 7.0), Point::new(0.0, 0.5));
    }

    #[test]
    fn identity_at_t_zero() {
        let g0 = sample_gamma0(&PiecewiseProfile::hat(), 64, 8).unwrap();
        let sheared = shear_polyline(&Flux::burgers(), &g0, 0.0).unwrap();
        assert_eq!(sheared.curve, g0);
        assert_eq!(count_x_extrema(&sheared), 0);
    }

    #[test]
    fn box_shear_moves_top_edge_only() {
        // Burgers at t = 1: the bottom edge is fixed (f'(0) = 0), the top
        // translates by +1, and the left vertical run opens into the segment
        // from (-1, 0) to (0, 1).
        let g0 = sample_gamma0(&PiecewiseProfile::box_profile(), 64, 16).unwrap();
        let sheared = shear_polyline(&Flux::burgers(), &g0, 1.0).unwrap();
        for (q, p) in sheared.curve.points().iter().zip(g0.points()) {
            assert_eq!(q.y, p.y);
            assert_relative_eq!(q.x, p.x + p.y, epsilon = 1e-15);
        }
        let fan: Vec<_> = sheared
            .curve
            .points()
            .iter()
            .filter(|p| (p.x - (p.y - 1.0)).abs() < 1e-15 && p.y > 0.0 && p.y < 1.0)
            .collect();
        assert_eq!(fan.len(), 14);
    }

    #[test]
    fn hat_folds_only_past_unit_time() {
        // Slopes of x_t along the hat are 1 + t and 1 - t, so the fold
        // appears exactly for t > 1.
        let g0 = sample_gamma0(&PiecewiseProfile::hat(), 256, 8).unwrap();
        let b = Flux::burgers();
        assert_eq!(count_x_extrema(&shear_polyline(&b, &g0, 0.5).unwrap()), 0);
        assert_eq!(count_x_extrema(&shear_polyline(&b, &g0, 2.0).unwrap()), 2);
    }

    #[test]
    fn gaussian_triple_fold_census_at_t425() {
        let g0 = sample_gamma0(&PiecewiseProfile::gaussian_triple(), 1000, 64).unwrap();
        let sheared = shear_polyline(&Flux::burgers(), &g0, 4.25).unwrap();
        let n = count_x_extrema(&sheared);
        assert!(n >= 2 && n % 2 == 0, "expected even fold census, got {n}");
        assert_eq!(n, 6, "three folds expected at t = 4.25");
        // Area is carried over exactly up to roundoff.
        let before = area_under_graph(&g0);
        let after = area_under_graph(&sheared.curve);
        assert!((after - before).abs() <= 1e-12 * (1.0 + before.abs()));
    }

    #[test]
    fn monotone_data_never_folds_under_convex_flux() {
        // Non-decreasing y with convex flux: x_t stays monotone for all t.
        let pts: Vec<Point> = (0..200)
            .map(|i| {
                let x = i as f64 * 0.05;
                Point::new(x, (x - 5.0).tanh())
            })
            .collect();
        let curve = Polyline::new(pts).unwrap();
        let b = Flux::burgers();
        for &t in &[0.0, 0.5, 3.0, 10.0] {
            let sheared = shear_polyline(&b, &curve, t).unwrap();
            assert_eq!(count_x_extrema(&sheared), 0, "fold appeared at t = {t}");
        }
    }

    proptest! {
        #[test]
        fn shear_preserves_y_and_area(t in 0.0f64..6.0, seed in 0u64..1000) {
            // A smooth random bump sampled as the initial curve.
            let a = 0.3 + (seed % 7) as f64 * 0.1;
            let c = (seed % 11) as f64 * 0.1 - 0.5;
            let pts: Vec<Point> = (0..400)
                .map(|i| {
                    let x = -6.0 + 12.0 * i as f64 / 399.0;
                    Point::new(x, a * (-(x - c) * (x - c)).exp())
                })
                .collect();
            let curve = Polyline::new(pts).unwrap();
            let sheared = shear_polyline(&Flux::burgers(), &curve, t).unwrap();
            for (q, p) in sheared.curve.points().iter().zip(curve.points()) {
                prop_assert_eq!(q.y, p.y);
            }
            let before = area_under_graph(&curve);
            let after = area_under_graph(&sheared.curve);
            prop_assert!((after - before).abs() <= 1e-12 * (1.0 + before.abs()));
            // Far ends rise monotonically, so the fold census is even.
            prop_assert_eq!(count_x_extrema(&sheared) % 2, 0);
        }
    }
}

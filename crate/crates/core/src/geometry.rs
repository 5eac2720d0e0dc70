//! Planar polyline and polygon-area primitives.
//!
//! Areas are computed with the triangle-fan formula anchored at the first
//! vertex and accumulated with Neumaier compensation, so that the residual
//! fed to the root-finder stays quiet down to ~1e-16 even for thousand-vertex
//! lobes.

use alloc::string::String;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};

/// Two consecutive vertices closer than this are merged at construction.
pub const DEDUP_EPS: f64 = 1e-15;

/// A vertex within this distance of a cut line counts as lying on it.
pub const TIE_EPS: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(&self, other: &Point) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2)).sqrt()
    }
}

/// An ordered planar vertex chain (length >= 2, finite coordinates,
/// no consecutive duplicates).
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pts: Vec<Point>,
}

impl Polyline {
    /// Builds a polyline, dropping consecutive near-duplicate vertices.
    pub fn new(points: Vec<Point>) -> Result<Self> {
        let mut pts: Vec<Point> = Vec::with_capacity(points.len());
        for p in points {
            if !p.x.is_finite() || !p.y.is_finite() {
                return Err(Error::BadPolyline(String::from("non-finite coordinate")));
            }
            match pts.last() {
                Some(last) if last.dist(&p) < DEDUP_EPS => {}
                _ => pts.push(p),
            }
        }
        if pts.len() < 2 {
            return Err(Error::BadPolyline(String::from(
                "fewer than 2 distinct vertices",
            )));
        }
        Ok(Polyline { pts })
    }

    pub fn points(&self) -> &[Point] {
        &self.pts
    }

    pub fn len(&self) -> usize {
        self.pts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Total edge length.
    pub fn arc_length(&self) -> f64 {
        self.pts
            .windows(2)
            .map(|w| w[0].dist(&w[1]))
            .sum()
    }
}

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Signed area of the triangle (t0, t1, t2); positive when counterclockwise.
pub fn triangle_signed_area(t0: Point, t1: Point, t2: Point) -> f64 {
    0.5 * ((t1.x - t0.x) * (t2.y - t0.y) - (t2.x - t0.x) * (t1.y - t0.y))
}

/// Signed area of the closed polygon through `vertices` (implicitly closed
/// back to the first vertex); positive for counterclockwise boundaries.
pub fn polygon_area(vertices: &[Point]) -> Result<f64> {
    if vertices.len() < 3 {
        return Err(Error::BadPolyline(String::from(
            "polygon needs at least 3 vertices",
        )));
    }
    let anchor = vertices[0];
    let mut acc = CompensatedSum::new();
    for w in vertices[1..].windows(2) {
        acc.add(triangle_signed_area(anchor, w[0], w[1]));
    }
    Ok(acc.value())
}

/// Signed area of the region enclosed by the sub-polyline `i1..=i2` and the
/// chord from vertex `i2` back to vertex `i1`.
pub fn chord_closed_area(curve: &Polyline, i1: usize, i2: usize) -> Result<f64> {
    if i1 >= i2 || i2 >= curve.len() {
        return Err(Error::BadPolyline(String::from("invalid index range")));
    }
    if i2 - i1 < 2 {
        return Ok(0.0);
    }
    polygon_area(&curve.points()[i1..=i2])
}

/// Signed area between the polyline and the x-axis (trapezoid sum over
/// edges). Backward-running edges contribute negatively, which makes the
/// result exact for folded multivalued curves as well.
pub fn area_under_graph(curve: &Polyline) -> f64 {
    let mut acc = CompensatedSum::new();
    for w in curve.points().windows(2) {
        acc.add(0.5 * (w[0].y + w[1].y) * (w[1].x - w[0].x));
    }
    acc.value()
}

/// Point where the edge (a, b) crosses the vertical line x = cut_x.
fn edge_crossing(a: Point, b: Point, cut_x: f64) -> Point {
    let span = b.x - a.x;
    if span.abs() < DEDUP_EPS {
        return Point::new(cut_x, 0.5 * (a.y + b.y));
    }
    let s = ((cut_x - a.x) / span).clamp(0.0, 1.0);
    Point::new(cut_x, a.y + s * (b.y - a.y))
}

/// One side of a lobe walk: the index range (inclusive) of vertices strictly
/// on the anchor's side, plus the interpolated boundary point on the cut line.
pub(crate) struct LobeWalk {
    pub first: usize,
    pub last: usize,
    pub entry: Point,
    pub exit: Point,
}

/// Walks outward from `anchor` along the parameter while vertices stay
/// strictly on the anchor's side of `x = cut_x`. Vertices within [`TIE_EPS`]
/// of the line terminate the walk and act as the crossing themselves.
pub(crate) fn lobe_walk(curve: &Polyline, cut_x: f64, anchor: usize) -> Result<Option<LobeWalk>> {
    let pts = curve.points();
    let side = pts[anchor].x - cut_x;
    if side.abs() <= TIE_EPS {
        // Anchor sits on the line: degenerate lobe of zero area.
        return Ok(None);
    }
    let sgn = side.signum();
    let on_side = |p: &Point| sgn * (p.x - cut_x) > TIE_EPS;

    let mut first = anchor;
    while first > 0 && on_side(&pts[first - 1]) {
        first -= 1;
    }
    if first == 0 {
        return Err(Error::MalformedFold(String::from(
            "cut line never re-crossed before curve start",
        )));
    }
    let entry = if (pts[first - 1].x - cut_x).abs() <= TIE_EPS {
        Point::new(cut_x, pts[first - 1].y)
    } else {
        edge_crossing(pts[first - 1], pts[first], cut_x)
    };

    let mut last = anchor;
    while last + 1 < pts.len() && on_side(&pts[last + 1]) {
        last += 1;
    }
    if last + 1 == pts.len() {
        return Err(Error::MalformedFold(String::from(
            "cut line never re-crossed before curve end",
        )));
    }
    let exit = if (pts[last + 1].x - cut_x).abs() <= TIE_EPS {
        Point::new(cut_x, pts[last + 1].y)
    } else {
        edge_crossing(pts[last], pts[last + 1], cut_x)
    };

    Ok(Some(LobeWalk {
        first,
        last,
        entry,
        exit,
    }))
}

/// Unsigned area of the lobe cut off by the line `x = cut_x` through the
/// parameter-connected piece of the curve containing `anchor`.
///
/// The closing edge from exit back to entry is the vertical chord on the cut
/// line, so the loop handed to [`polygon_area`] is closed by construction.
pub fn lobe_area(curve: &Polyline, cut_x: f64, anchor: usize) -> Result<f64> {
    let walk = match lobe_walk(curve, cut_x, anchor)? {
        Some(w) => w,
        None => return Ok(0.0),
    };
    let mut loop_pts: Vec<Point> = Vec::with_capacity(walk.last - walk.first + 3);
    loop_pts.push(walk.entry);
    loop_pts.extend_from_slice(&curve.points()[walk.first..=walk.last]);
    loop_pts.push(walk.exit);
    if loop_pts.len() < 3 {
        return Ok(0.0);
    }
    Ok(polygon_area(&loop_pts)?.abs())
}

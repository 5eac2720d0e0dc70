//! Piecewise-C^1 initial data with compact support, and its polygonal
//! initial curve including vertical runs at discontinuities.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::geometry::{Point, Polyline};

/// Left/right limits differing by more than this make a discontinuity.
const JUMP_TOL: f64 = 1e-12;

/// Segment boundaries must tile the support to within this slack.
const TILING_TOL: f64 = 1e-12;

type ScalarFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// One smooth piece of the initial condition on the closed interval [a, b].
pub struct Segment {
    pub a: f64,
    pub b: f64,
    value: ScalarFn,
}

impl Segment {
    pub fn new(a: f64, b: f64, value: ScalarFn) -> Self {
        Segment { a, b, value }
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.value)(x)
    }
}

/// A jump of the profile: position plus one-sided limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpPoint {
    pub x: f64,
    pub left: f64,
    pub right: f64,
}

/// Ordered smooth segments tiling a compact support; zero outside.
pub struct PiecewiseProfile {
    segments: Vec<Segment>,
    support: (f64, f64),
    jumps: Vec<JumpPoint>,
}

impl core::fmt::Debug for PiecewiseProfile {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("PiecewiseProfile")
            .field("support", &self.support)
            .field("segments", &self.segments.len())
            .field("jumps", &self.jumps)
            .finish()
    }
}

impl PiecewiseProfile {
    /// Validates ordering, exact tiling, and finiteness, then derives the
    /// jump list (internal discontinuities plus nonzero support edges).
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::EmptySupport);
        }
        for seg in &segments {
            if !(seg.a < seg.b) || !seg.a.is_finite() || !seg.b.is_finite() {
                return Err(Error::Config(format!(
                    "segment [{}, {}] is not a proper interval",
                    seg.a, seg.b
                )));
            }
            // Spot-check finiteness across the closed interval.
            for i in 0..=64 {
                let x = seg.a + (seg.b - seg.a) * i as f64 / 64.0;
                if !seg.eval(x).is_finite() {
                    return Err(Error::Config(format!(
                        "segment value is not finite at x = {x}"
                    )));
                }
            }
        }
        for w in segments.windows(2) {
            let gap = w[1].a - w[0].b;
            if gap.abs() > TILING_TOL {
                return Err(Error::Config(format!(
                    "segments do not tile the support: [{}, {}] then [{}, {}]",
                    w[0].a, w[0].b, w[1].a, w[1].b
                )));
            }
        }
        let support = (segments[0].a, segments[segments.len() - 1].b);
        if !(support.0 < support.1) {
            return Err(Error::EmptySupport);
        }

        let mut jumps = Vec::new();
        let first_val = segments[0].eval(support.0);
        if first_val.abs() > JUMP_TOL {
            jumps.push(JumpPoint {
                x: support.0,
                left: 0.0,
                right: first_val,
            });
        }
        for w in segments.windows(2) {
            let left = w[0].eval(w[0].b);
            let right = w[1].eval(w[1].a);
            if (right - left).abs() > JUMP_TOL {
                jumps.push(JumpPoint {
                    x: w[0].b,
                    left,
                    right,
                });
            }
        }
        let last = &segments[segments.len() - 1];
        let last_val = last.eval(support.1);
        if last_val.abs() > JUMP_TOL {
            jumps.push(JumpPoint {
                x: support.1,
                left: last_val,
                right: 0.0,
            });
        }

        Ok(PiecewiseProfile {
            segments,
            support,
            jumps,
        })
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    pub fn jumps(&self) -> &[JumpPoint] {
        &self.jumps
    }

    /// All segment boundary abscissae, support edges included.
    pub fn boundaries(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.segments.len() + 1);
        out.push(self.segments[0].a);
        for seg in &self.segments {
            out.push(seg.b);
        }
        out
    }

    /// h(x); zero outside the support. At shared segment boundaries the
    /// left segment wins.
    pub fn eval(&self, x: f64) -> f64 {
        if x < self.support.0 || x > self.support.1 {
            return 0.0;
        }
        for seg in &self.segments {
            if x <= seg.b {
                return if x >= seg.a { seg.eval(x) } else { 0.0 };
            }
        }
        0.0
    }

    /// Integral of h over [a, b] by adaptive quadrature split at segment
    /// boundaries (relative tolerance 1e-12).
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        let mut total = 0.0;
        for seg in &self.segments {
            let lo = a.max(seg.a);
            let hi = b.min(seg.b);
            if hi > lo {
                total += adaptive_simpson(&|x| seg.eval(x), lo, hi, 1e-12);
            }
        }
        total
    }

    /// The conserved reference area: integral of h over its support.
    pub fn initial_area(&self) -> f64 {
        self.integral(self.support.0, self.support.1)
    }

    /// Min/max of the profile values (0 included, since h vanishes outside
    /// the support), sampled densely per segment along with one-sided limits.
    pub fn value_range(&self) -> (f64, f64) {
        let mut lo = 0.0f64;
        let mut hi = 0.0f64;
        for seg in &self.segments {
            for i in 0..=2048 {
                let x = seg.a + (seg.b - seg.a) * i as f64 / 2048.0;
                let v = seg.eval(x);
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        (lo, hi)
    }

    /// h = 1 on [-1, 0].
    pub fn box_profile() -> PiecewiseProfile {
        PiecewiseProfile::new(alloc::vec![Segment::new(-1.0, 0.0, Box::new(|_| 1.0))])
            .expect("box profile is well formed")
    }

    /// Canonical Riemann data: identical to [`Self::box_profile`]; the
    /// downward jump at x = 0 is the shock seed, the upward jump at x = -1
    /// opens into a rarefaction fan.
    pub fn riemann_step() -> PiecewiseProfile {
        Self::box_profile()
    }

    /// h(x) = 1 - |x| on [-1, 1].
    pub fn hat() -> PiecewiseProfile {
        PiecewiseProfile::new(alloc::vec![
            Segment::new(-1.0, 0.0, Box::new(|x| 1.0 + x)),
            Segment::new(0.0, 1.0, Box::new(|x| 1.0 - x)),
        ])
        .expect("hat profile is well formed")
    }

    /// Three gaussian humps on [-10, 10]:
    /// 0.9 e^{-x^2} + 0.7 e^{-(x-2)^2} + 0.85 e^{-(x+2)^2}.
    pub fn gaussian_triple() -> PiecewiseProfile {
        PiecewiseProfile::new(alloc::vec![Segment::new(
            -10.0,
            10.0,
            Box::new(|x: f64| {
                0.9 * (-x * x).exp()
                    + 0.7 * (-(x - 2.0) * (x - 2.0)).exp()
                    + 0.85 * (-(x + 2.0) * (x + 2.0)).exp()
            }),
        )])
        .expect("gaussian triple profile is well formed")
    }

    /// Builds a named built-in profile.
    pub fn builtin(name: &str) -> Result<PiecewiseProfile> {
        match name {
            "box" => Ok(Self::box_profile()),
            "hat" => Ok(Self::hat()),
            "gaussian_triple" => Ok(Self::gaussian_triple()),
            "riemann_step" => Ok(Self::riemann_step()),
            other => Err(Error::Config(format!("unknown profile '{other}'"))),
        }
    }
}

/// Samples the initial curve: the graph of h over the support widened by a
/// 5% margin, with every discontinuity replaced by a vertical run of
/// `jump_subpoints` vertices, and all segment boundaries snapped onto
/// sample nodes so that kinks and jumps sit exactly on the polyline.
pub fn sample_gamma0(
    profile: &PiecewiseProfile,
    n_points: usize,
    jump_subpoints: usize,
) -> Result<Polyline> {
    if n_points < 16 {
        return Err(Error::Config(String::from("n_points must be at least 16")));
    }
    if jump_subpoints < 2 {
        return Err(Error::Config(String::from(
            "jump_subpoints must be at least 2",
        )));
    }
    let (x_min, x_max) = profile.support();
    let span = x_max - x_min;
    let margin = 0.05 * span;
    let lo = x_min - margin;
    let hi = x_max + margin;
    let dx = (hi - lo) / (n_points - 1) as f64;

    let mut nodes: Vec<f64> = (0..n_points).map(|i| lo + dx * i as f64).collect();
    // Snap each segment boundary to its nearest node; this keeps kinks exact
    // and pins vertical runs to the true jump abscissae.
    let mut claimed: Vec<Option<f64>> = alloc::vec![None; n_points];
    for xb in profile.boundaries() {
        let raw = ((xb - lo) / dx).round() as isize;
        let mut k = raw.clamp(1, n_points as isize - 2) as usize;
        if claimed[k].is_some() {
            let alt = [k + 1, k.saturating_sub(1)]
                .into_iter()
                .find(|&j| j >= 1 && j < n_points - 1 && claimed[j].is_none());
            match alt {
                Some(j) => k = j,
                None => {
                    return Err(Error::Config(format!(
                        "n_points = {n_points} too small to separate segment boundaries near x = {xb}"
                    )))
                }
            }
        }
        claimed[k] = Some(xb);
        nodes[k] = xb;
    }

    let jump_at = |x: f64| profile.jumps().iter().find(|j| j.x == x);

    let mut verts: Vec<Point> = Vec::with_capacity(n_points + profile.jumps().len() * jump_subpoints);
    for (i, &x) in nodes.iter().enumerate() {
        match claimed[i].and_then(jump_at) {
            Some(jump) => {
                for j in 0..jump_subpoints {
                    let s = j as f64 / (jump_subpoints - 1) as f64;
                    verts.push(Point::new(jump.x, jump.left + s * (jump.right - jump.left)));
                }
            }
            _ => verts.push(Point::new(x, profile.eval(x))),
        }
    }
    Polyline::new(verts)
}

/// Adaptive Simpson quadrature with relative tolerance `rel_tol`.
pub(crate) fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
        h / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        eps: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, m - a);
        let right = simpson(fm, frm, fb, b - m);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * eps {
            return left + right + delta / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1)
    }

    let fa = f(a);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let fb = f(b);
    let whole = simpson(fa, fm, fb, b - a);
    let eps = rel_tol * (1.0 + whole.abs());
    recurse(f, a, b, fa, fm, fb, whole, eps, 48)
}

//! The equal-area cut loop.
//!
//! A solve shears the sampled initial curve to its time-t image, then
//! repeatedly locates the first fold of x along the parameter, balances the
//! two cut-off lobes with a bracketed secant iteration, and replaces the
//! excised fold by a vertical run, until x is non-decreasing along the whole
//! vertex order. Every cut conserves the area under the graph exactly (up to
//! the root tolerance), which is what pins the jump to the correct position.

use alloc::string::String;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::flux::{rankine_hugoniot_speed, Flux};
use crate::geometry::{
    area_under_graph, lobe_area, lobe_walk, Point, Polyline, DEDUP_EPS, TIE_EPS,
};
use crate::profile::{sample_gamma0, PiecewiseProfile};
use crate::shear::{count_x_extrema_of, shear_polyline, PLATEAU_EPS};

pub const DEFAULT_N_POINTS: usize = 1000;
pub const DEFAULT_JUMP_SUBPOINTS: usize = 64;
pub const DEFAULT_ROOT_TOL: f64 = 1e-14;

/// Extra cuts allowed beyond the stationary-point bound before the loop is
/// declared non-terminating.
const CUT_SAFETY_MARGIN: u32 = 8;

/// One-sided limits at a shock are read this far (times the x scale) into
/// the surviving curve.
const ONE_SIDED_READ: f64 = 1e-12;

/// Numeric controls of a solve.
#[derive(Debug, Clone, Copy)]
pub struct SolveParams {
    pub n_points: usize,
    pub jump_subpoints: usize,
    pub root_tol: f64,
    /// Override for the conservation check; defaults to
    /// 1e-9 * (1 + |initial area|).
    pub area_tol: Option<f64>,
}

impl Default for SolveParams {
    fn default() -> Self {
        SolveParams {
            n_points: DEFAULT_N_POINTS,
            jump_subpoints: DEFAULT_JUMP_SUBPOINTS,
            root_tol: DEFAULT_ROOT_TOL,
            area_tol: None,
        }
    }
}

/// The landmarks of the first fold along the parameter: the crest is the
/// first local maximum of x, the trough the first local minimum after it,
/// and the cap bounds the admissible cut line from the right (either the
/// crest x or the next local maximum's x, whichever is smaller).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FoldBracket {
    pub crest_idx: usize,
    pub trough_idx: usize,
    pub crest_x: f64,
    pub trough_x: f64,
    pub cap_x: f64,
}

/// A vertical cut of the curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shock {
    pub x: f64,
    pub u_minus: f64,
    pub u_plus: f64,
    pub rh_speed: f64,
    pub balanced_area: f64,
    pub secant_iters: u32,
    /// Arc length of the excised fold piece, the `l` of the displacement
    /// estimate.
    pub s_curve_length: f64,
}

/// Result of one equal-area cut.
#[derive(Debug, Clone)]
pub struct CutOutcome {
    pub curve: Polyline,
    pub cut_x: f64,
    pub u_minus: f64,
    pub u_plus: f64,
    pub balanced_area: f64,
    pub secant_iters: u32,
    pub s_curve_length: f64,
}

/// The final single-valued graph with its shocks and run diagnostics.
#[derive(Debug, Clone)]
pub struct SolutionCurve {
    pub t: f64,
    pub curve: Polyline,
    pub shocks: Vec<Shock>,
    pub area_drift: f64,
    pub epsilon_estimate: f64,
    pub cuts_performed: u32,
    pub initial_area: f64,
    /// Secant iteration count of every cut, merged-away cuts included.
    pub secant_iterations: Vec<u32>,
}

/// Collapsed view of the x sequence: representative index and x per plateau.
fn plateau_reps(curve: &Polyline) -> (Vec<usize>, Vec<f64>) {
    let pts = curve.points();
    let mut reps: Vec<usize> = Vec::with_capacity(pts.len());
    let mut xs: Vec<f64> = Vec::with_capacity(pts.len());
    for (i, p) in pts.iter().enumerate() {
        match xs.last() {
            Some(&last) if (p.x - last).abs() <= PLATEAU_EPS => {}
            _ => {
                reps.push(i);
                xs.push(p.x);
            }
        }
    }
    (reps, xs)
}

/// Finds the first fold of the curve, or `None` when x is non-decreasing
/// along the whole vertex sequence and the curve is already a graph.
pub fn find_fold(curve: &Polyline) -> Result<Option<FoldBracket>> {
    let (reps, xs) = plateau_reps(curve);
    let m = xs.len();
    if xs.windows(2).all(|w| w[1] > w[0]) {
        return Ok(None);
    }

    let is_max = |k: usize| xs[k] > xs[k - 1] && xs[k] > xs[k + 1];
    let is_min = |k: usize| xs[k] < xs[k - 1] && xs[k] < xs[k + 1];

    let crest_k = (1..m.saturating_sub(1)).find(|&k| is_max(k)).ok_or_else(|| {
        Error::MalformedFold(String::from(
            "x decreases somewhere but has no interior local maximum",
        ))
    })?;
    let trough_k = (crest_k + 1..m - 1).find(|&k| is_min(k)).ok_or_else(|| {
        Error::MalformedFold(String::from(
            "local maximum of x with no subsequent local minimum",
        ))
    })?;
    let next_max_x = (trough_k + 1..m - 1).find(|&k| is_max(k)).map(|k| xs[k]);

    let crest_x = xs[crest_k];
    let trough_x = xs[trough_k];
    let cap_x = match next_max_x {
        Some(x) => x.min(crest_x),
        None => crest_x,
    };
    Ok(Some(FoldBracket {
        crest_idx: reps[crest_k],
        trough_idx: reps[trough_k],
        crest_x,
        trough_x,
        cap_x,
    }))
}

/// The signed lobe balance p(x) = p_trough(x) - p_crest(x) for a cut line
/// inside the fold bracket. Negative near the trough, increasing in x.
pub fn area_balance(curve: &Polyline, fold: &FoldBracket, x: f64) -> Result<f64> {
    let crest_lobe = lobe_area(curve, x, fold.crest_idx)?;
    let trough_lobe = lobe_area(curve, x, fold.trough_idx)?;
    Ok(trough_lobe - crest_lobe)
}

/// Bracketed secant iteration with bisection fallback. `f_lo` and `f_hi`
/// must differ in sign. Returns the root and the number of function
/// evaluations spent inside the loop.
fn bracketed_secant<F>(
    mut f: F,
    lo: f64,
    hi: f64,
    f_lo: f64,
    f_hi: f64,
    x_tol: f64,
) -> Result<(f64, u32)>
where
    F: FnMut(f64) -> Result<f64>,
{
    if f_lo == 0.0 {
        return Ok((lo, 0));
    }
    if f_hi == 0.0 {
        return Ok((hi, 0));
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::BracketInvalid {
            lo,
            hi,
            f_lo,
            f_hi,
        });
    }

    let (mut a, mut b, mut fa) = (lo, hi, f_lo);
    let (mut x0, mut f0) = (lo, f_lo);
    let (mut x1, mut f1) = (hi, f_hi);
    let mut iters = 0u32;

    const SECANT_LIMIT: u32 = 60;
    const TOTAL_LIMIT: u32 = 200;

    loop {
        let mut cand = if iters < SECANT_LIMIT && f1 != f0 {
            x1 - f1 * (x1 - x0) / (f1 - f0)
        } else {
            0.5 * (a + b)
        };
        if !cand.is_finite() || cand <= a.min(b) || cand >= a.max(b) {
            cand = 0.5 * (a + b);
        }
        let fc = f(cand)?;
        iters += 1;
        if fc == 0.0 || (cand - x1).abs() <= x_tol || (b - a).abs() <= x_tol {
            return Ok((cand, iters));
        }
        if iters >= TOTAL_LIMIT {
            return Ok((cand, iters));
        }
        if fc.signum() == fa.signum() {
            a = cand;
            fa = fc;
        } else {
            b = cand;
        }
        x0 = x1;
        f0 = f1;
        x1 = cand;
        f1 = fc;
    }
}

fn push_dedup(out: &mut Vec<Point>, p: Point) {
    match out.last() {
        Some(last) if last.dist(&p) < DEDUP_EPS => {}
        _ => out.push(p),
    }
}

fn extend_dedup(out: &mut Vec<Point>, tail: &[Point]) {
    for p in tail {
        push_dedup(out, *p);
    }
}

fn seg_length(entry: Point, pts: &[Point], exit: Point) -> f64 {
    let mut l = 0.0;
    let mut prev = entry;
    for p in pts {
        l += prev.dist(p);
        prev = *p;
    }
    l + prev.dist(&exit)
}

/// Performs one equal-area cut on the first fold of `curve`.
///
/// Balanced case (the lobe balance changes sign before the cap): the cut
/// line is the unique zero of the balance and the whole fold between the
/// outer crossings collapses into one vertical run. Capped case (the crest
/// lobe still dominates at the cap): the cut line is placed right of the cap
/// where the crest lobe equals the trough lobe at the cap, and the two lobe
/// pieces are replaced by verticals at their own lines — the curve piece
/// between them survives for a later pass.
pub fn equal_area_cut(
    curve: &Polyline,
    fold: &FoldBracket,
    root_tol: f64,
) -> Result<CutOutcome> {
    if !(root_tol > 0.0) {
        return Err(Error::Config(String::from("root_tol must be positive")));
    }
    let (alpha, beta, gamma) = (fold.trough_x, fold.crest_x, fold.cap_x);
    let x_tol = root_tol * 1.0f64.max(alpha.abs()).max(beta.abs());

    let mut lo = alpha + 1e-3 * (gamma - alpha);
    let mut f_lo = area_balance(curve, fold, lo)?;
    if f_lo >= 0.0 {
        // The balance already favors the trough lobe this close to the
        // trough: retreat toward it so the bracket still straddles the root.
        lo = alpha + 1e-12 * (gamma - alpha);
        f_lo = area_balance(curve, fold, lo)?;
    }
    let f_cap = area_balance(curve, fold, gamma)?;

    let (cut_x, balanced_area, secant_iters) = if f_cap >= 0.0 {
        let (root, iters) = if f_lo >= 0.0 {
            (lo, 0)
        } else {
            bracketed_secant(
                |x| area_balance(curve, fold, x),
                lo,
                gamma,
                f_lo,
                f_cap,
                x_tol,
            )?
        };
        let root = root.min(beta - 2.0 * TIE_EPS.max(x_tol));
        let area = lobe_area(curve, root, fold.crest_idx)?;
        (root, area, iters)
    } else {
        // Capped: match the crest lobe at x to the trough lobe at the cap.
        let target = lobe_area(curve, gamma, fold.trough_idx)?;
        let q = |x: f64| -> Result<f64> { Ok(lobe_area(curve, x, fold.crest_idx)? - target) };
        let q_lo = -f_cap; // q(gamma) = p_crest(gamma) - p_trough(gamma) > 0
        let q_hi = -target; // q(beta) = 0 - target < 0
        let (root, iters) = bracketed_secant(q, gamma, beta, q_lo, q_hi, x_tol)?;
        let root = root.min(beta - 2.0 * TIE_EPS.max(x_tol));
        (root, target, iters)
    };

    let pts = curve.points();
    let crest_walk = lobe_walk(curve, cut_x, fold.crest_idx)?
        .ok_or_else(|| Error::MalformedFold(String::from("crest lobe degenerated at the cut")))?;

    if f_cap >= 0.0 {
        // Single vertical run: excise everything between the outer crossings.
        let trough_walk = lobe_walk(curve, cut_x, fold.trough_idx)?.ok_or_else(|| {
            Error::MalformedFold(String::from("trough lobe degenerated at the cut"))
        })?;
        if crest_walk.last >= trough_walk.first || crest_walk.first == 0 {
            return Err(Error::MalformedFold(String::from(
                "crest and trough lobes are not parameter-ordered",
            )));
        }
        let top = Point::new(cut_x, crest_walk.entry.y);
        let bottom = Point::new(cut_x, trough_walk.exit.y);
        let mut out: Vec<Point> = Vec::with_capacity(pts.len());
        extend_dedup(&mut out, &pts[..crest_walk.first]);
        push_dedup(&mut out, top);
        push_dedup(&mut out, bottom);
        extend_dedup(&mut out, &pts[trough_walk.last + 1..]);
        let length = seg_length(
            crest_walk.entry,
            &pts[crest_walk.first..=trough_walk.last],
            trough_walk.exit,
        );
        Ok(CutOutcome {
            curve: Polyline::new(out)?,
            cut_x,
            u_minus: top.y,
            u_plus: bottom.y,
            balanced_area,
            secant_iters,
            s_curve_length: length,
        })
    } else {
        let trough_walk = lobe_walk(curve, gamma, fold.trough_idx)?.ok_or_else(|| {
            Error::MalformedFold(String::from("trough lobe degenerated at the cap"))
        })?;
        if crest_walk.last >= trough_walk.first {
            return Err(Error::MalformedFold(String::from(
                "capped cut: lobe pieces overlap along the parameter",
            )));
        }
        let mut out: Vec<Point> = Vec::with_capacity(pts.len());
        extend_dedup(&mut out, &pts[..crest_walk.first]);
        push_dedup(&mut out, Point::new(cut_x, crest_walk.entry.y));
        push_dedup(&mut out, Point::new(cut_x, crest_walk.exit.y));
        extend_dedup(&mut out, &pts[crest_walk.last + 1..trough_walk.first]);
        push_dedup(&mut out, Point::new(gamma, trough_walk.entry.y));
        push_dedup(&mut out, Point::new(gamma, trough_walk.exit.y));
        extend_dedup(&mut out, &pts[trough_walk.last + 1..]);
        let length = seg_length(
            crest_walk.entry,
            &pts[crest_walk.first..=crest_walk.last],
            crest_walk.exit,
        ) + seg_length(
            trough_walk.entry,
            &pts[trough_walk.first..=trough_walk.last],
            trough_walk.exit,
        );
        Ok(CutOutcome {
            curve: Polyline::new(out)?,
            cut_x,
            u_minus: crest_walk.entry.y,
            u_plus: crest_walk.exit.y,
            balanced_area,
            secant_iters,
            s_curve_length: length,
        })
    }
}

/// Chord-sagitta bound on the distance between the polyline and the smooth
/// curve it samples: max over edges of L^2 k / 8, with the curvature k
/// estimated from the turning angle at the edge endpoints.
pub fn epsilon_estimate(curve: &Polyline) -> f64 {
    let pts = curve.points();
    let n = pts.len();
    if n < 3 {
        return 0.0;
    }
    let mut kappa = alloc::vec![0.0f64; n];
    for i in 1..n - 1 {
        let e1 = (pts[i].x - pts[i - 1].x, pts[i].y - pts[i - 1].y);
        let e2 = (pts[i + 1].x - pts[i].x, pts[i + 1].y - pts[i].y);
        let l1 = (e1.0 * e1.0 + e1.1 * e1.1).sqrt();
        let l2 = (e2.0 * e2.0 + e2.1 * e2.1).sqrt();
        let cross = e1.0 * e2.1 - e1.1 * e2.0;
        let dot = e1.0 * e2.0 + e1.1 * e2.1;
        let theta = cross.abs().atan2(dot);
        kappa[i] = theta / (0.5 * (l1 + l2));
    }
    let mut eps = 0.0f64;
    for i in 0..n - 1 {
        let l = pts[i].dist(&pts[i + 1]);
        let k = kappa[i].max(kappa[i + 1]);
        eps = eps.max(l * l * k / 8.0);
    }
    eps
}

/// Displacement bound for a shock: the polygonal error eps spread along the
/// excised fold of length l concentrates into a cut offset eps * l / s for a
/// jump of height s.
pub fn shock_displacement_estimate(epsilon: f64, s_curve_length: f64, shock_height: f64) -> Result<f64> {
    if shock_height <= 1e-12 {
        return Err(Error::DegenerateShock);
    }
    Ok(epsilon * s_curve_length / shock_height)
}

/// Appends flat tail vertices so the sheared curve's zero tails extend past
/// every fold, which the lobe walks need in order to close.
fn extend_tails(gamma0: Polyline, flux: &Flux, profile: &PiecewiseProfile, t: f64) -> Result<Polyline> {
    let (u_lo, u_hi) = profile.value_range();
    let s_min = flux.speed(u_lo).min(flux.speed(u_hi)).min(0.0);
    let s_max = flux.speed(u_lo).max(flux.speed(u_hi)).max(0.0);
    let s_zero = flux.speed(0.0);
    let (x_min, x_max) = profile.support();
    let pad = 0.05 * (x_max - x_min);

    let first = *gamma0.points().first().expect("polyline is non-empty");
    let last = *gamma0.points().last().expect("polyline is non-empty");
    let left_to = first.x + t * (s_min - s_zero) - pad;
    let right_to = last.x + t * (s_max - s_zero) + pad;

    let mut pts: Vec<Point> = Vec::with_capacity(gamma0.len() + 2);
    if left_to < first.x {
        pts.push(Point::new(left_to, first.y));
    }
    pts.extend_from_slice(gamma0.points());
    if right_to > last.x {
        pts.push(Point::new(right_to, last.y));
    }
    Polyline::new(pts)
}

struct CutRecord {
    cut_x: f64,
    balanced_area: f64,
    secant_iters: u32,
    s_curve_length: f64,
}

/// Maximal plateau run of vertices around x, if the curve carries a genuine
/// vertical jump there.
fn locate_run(pts: &[Point], x: f64) -> Option<(usize, usize)> {
    let tol = 5e-14 * 1.0f64.max(x.abs());
    let mut best: Option<usize> = None;
    let mut best_d = f64::INFINITY;
    for (i, p) in pts.iter().enumerate() {
        let d = (p.x - x).abs();
        if d <= tol && d < best_d {
            best = Some(i);
            best_d = d;
        }
    }
    let seed = best?;
    let mut a = seed;
    while a > 0 && (pts[a - 1].x - pts[a].x).abs() <= PLATEAU_EPS {
        a -= 1;
    }
    let mut b = seed;
    while b + 1 < pts.len() && (pts[b + 1].x - pts[b].x).abs() <= PLATEAU_EPS {
        b += 1;
    }
    if b > a && (pts[b].y - pts[a].y).abs() > 1e-13 {
        Some((a, b))
    } else {
        None
    }
}

/// Solves the conservation law at the single time `t`, directly (no time
/// stepping): shear the sampled initial curve, then cut until single-valued.
pub fn solve_at_time(
    flux: &Flux,
    profile: &PiecewiseProfile,
    t: f64,
    params: &SolveParams,
) -> Result<SolutionCurve> {
    if t < 0.0 {
        return Err(Error::Config(alloc::format!("time t = {t} must be >= 0")));
    }
    let initial_area = profile.initial_area();
    let gamma0 = sample_gamma0(profile, params.n_points, params.jump_subpoints)?;
    let gamma0 = extend_tails(gamma0, flux, profile, t)?;
    let sheared = shear_polyline(flux, &gamma0, t)?;
    let epsilon = epsilon_estimate(&sheared.curve);
    let census = count_x_extrema_of(&sheared.curve);
    let cut_bound = (census / 2) as u32 + CUT_SAFETY_MARGIN;

    let mut curve = sheared.curve;
    let mut cut_log: Vec<CutRecord> = Vec::new();
    while let Some(fold) = find_fold(&curve)? {
        if cut_log.len() as u32 >= cut_bound {
            return Err(Error::NonTermination {
                cuts: cut_log.len() as u32,
                bound: cut_bound,
            });
        }
        let outcome = equal_area_cut(&curve, &fold, params.root_tol)?;
        cut_log.push(CutRecord {
            cut_x: outcome.cut_x,
            balanced_area: outcome.balanced_area,
            secant_iters: outcome.secant_iters,
            s_curve_length: outcome.s_curve_length,
        });
        curve = outcome.curve;
    }

    let area = area_under_graph(&curve);
    let area_drift = (area - initial_area).abs();
    let area_tol = params
        .area_tol
        .unwrap_or(1e-9 * (1.0 + initial_area.abs()));
    if area_drift > area_tol {
        return Err(Error::AreaDrift {
            drift: area_drift,
            tol: area_tol,
        });
    }

    // A cut survives if its vertical run is still present in the final
    // curve; cuts excised by later passes were merged into them.
    let pts = curve.points();
    let span = pts[pts.len() - 1].x - pts[0].x;
    let read_off = ONE_SIDED_READ * 1.0f64.max(span.abs());
    let mut shocks: Vec<Shock> = Vec::new();
    let mut claimed_runs: Vec<(usize, usize)> = Vec::new();
    for rec in cut_log.iter().rev() {
        let run = match locate_run(pts, rec.cut_x) {
            Some(r) => r,
            None => continue,
        };
        if claimed_runs.contains(&run) {
            continue;
        }
        claimed_runs.push(run);
        let u_minus = evaluate_on(&curve, rec.cut_x - read_off);
        let u_plus = evaluate_on(&curve, rec.cut_x + read_off);
        shocks.push(Shock {
            x: rec.cut_x,
            u_minus,
            u_plus,
            rh_speed: rankine_hugoniot_speed(flux, u_minus, u_plus),
            balanced_area: rec.balanced_area,
            secant_iters: rec.secant_iters,
            s_curve_length: rec.s_curve_length,
        });
    }
    shocks.sort_by(|a, b| a.x.partial_cmp(&b.x).expect("shock positions are finite"));

    Ok(SolutionCurve {
        t,
        curve,
        shocks,
        area_drift,
        epsilon_estimate: epsilon,
        cuts_performed: cut_log.len() as u32,
        initial_area,
        secant_iterations: cut_log.iter().map(|r| r.secant_iters).collect(),
    })
}

fn evaluate_on(curve: &Polyline, x: f64) -> f64 {
    let pts = curve.points();
    let first = pts[0];
    let last = pts[pts.len() - 1];
    if x < first.x || x > last.x {
        return 0.0;
    }
    let idx = pts.partition_point(|p| p.x <= x);
    if idx == 0 {
        return first.y;
    }
    if idx == pts.len() {
        return last.y;
    }
    let a = pts[idx - 1];
    let b = pts[idx];
    let span = b.x - a.x;
    if span <= 0.0 {
        return a.y;
    }
    a.y + (x - a.x) / span * (b.y - a.y)
}

impl SolutionCurve {
    /// Linear interpolation on the single-valued curve. At a shock position
    /// this returns the right limit; outside the sampled window, zero.
    pub fn evaluate(&self, x: f64) -> f64 {
        evaluate_on(&self.curve, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{PiecewiseProfile, Segment};
    use approx::assert_relative_eq;

    fn pl(v: &[(f64, f64)]) -> Polyline {
        Polyline::new(v.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap()
    }

    #[test]
    fn monotone_curve_is_done() {
        let line = pl(&[(0.0, 0.0), (1.0, 0.5), (2.0, 0.2), (3.0, 0.0)]);
        // x is increasing even though y wiggles.
        assert_eq!(find_fold(&line).unwrap(), None);
    }

    #[test]
    fn sheared_hat_fold_landmarks() {
        // Burgers at t = 2: crest at (2, 1), trough at (1, 0), cap = crest.
        let g0 = sample_gamma0(&PiecewiseProfile::hat(), 512, 8).unwrap();
        let sheared = shear_polyline(&Flux::burgers(), &g0, 2.0).unwrap();
        let fold = find_fold(&sheared.curve).unwrap().unwrap();
        assert_relative_eq!(fold.crest_x, 2.0, epsilon = 1e-12);
        assert_relative_eq!(fold.trough_x, 1.0, epsilon = 1e-12);
        assert_eq!(fold.cap_x, fold.crest_x);
        assert!(fold.crest_idx < fold.trough_idx);
        let p = sheared.curve.points();
        assert_relative_eq!(p[fold.crest_idx].y, 1.0, epsilon = 1e-12);
        assert_relative_eq!(p[fold.trough_idx].y, 0.0, epsilon = 1e-12);
    }

    /// The sheared hat at t = 2 is exactly piecewise linear: rising edge
    /// from (-1, 0) to (2, 1), fold-back to (1, 0), flat tails.
    fn sheared_hat_exact() -> Polyline {
        pl(&[(-3.0, 0.0), (-1.0, 0.0), (2.0, 1.0), (1.0, 0.0), (4.0, 0.0)])
    }

    #[test]
    fn balance_signs_on_sheared_hat() {
        let curve = sheared_hat_exact();
        let fold = find_fold(&curve).unwrap().unwrap();
        // Near the trough the crest lobe dominates.
        let near_trough = area_balance(&curve, &fold, 1.001).unwrap();
        assert!(near_trough < 0.0);
        // Between the fold midpoint and the crest the trough lobe dominates:
        // closed-form triangle areas give p(1.5) = 0.125 - 1/12.
        let mid = area_balance(&curve, &fold, 1.5).unwrap();
        assert_relative_eq!(mid, 0.125 - 1.0 / 12.0, epsilon = 1e-12);
    }

    #[test]
    fn sheared_hat_cut_matches_closed_form() {
        // Equalizing the two triangle lobes of the sheared hat puts the cut
        // at sqrt(6) - 1 with jump height sqrt(6)/3 (hand triangle algebra:
        // (2 - d)^2 / 3 = (d - 1)^2 / 2).
        let curve = sheared_hat_exact();
        let fold = find_fold(&curve).unwrap().unwrap();
        let cut = equal_area_cut(&curve, &fold, 1e-14).unwrap();
        let expect = 6.0f64.sqrt() - 1.0;
        assert_relative_eq!(cut.cut_x, expect, epsilon = 1e-10);
        assert_relative_eq!(cut.u_minus, 6.0f64.sqrt() / 3.0, epsilon = 1e-9);
        assert_relative_eq!(cut.u_plus, 0.0, epsilon = 1e-12);
        assert!(find_fold(&cut.curve).unwrap().is_none());

        // The full solve on the sampled hat reproduces the same shock.
        let sol = solve_at_time(
            &Flux::burgers(),
            &PiecewiseProfile::hat(),
            2.0,
            &SolveParams::default(),
        )
        .unwrap();
        assert_eq!(sol.shocks.len(), 1);
        assert_relative_eq!(sol.shocks[0].x, expect, epsilon = 1e-9);
        assert_relative_eq!(sol.shocks[0].u_minus, 6.0f64.sqrt() / 3.0, epsilon = 1e-9);
    }

    #[test]
    fn symmetric_s_fold_cuts_at_its_axis() {
        // A z-shaped fold symmetric about x = 0.
        let curve = pl(&[
            (-4.0, 0.0),
            (1.0, 0.0),
            (1.5, 0.5),
            (-1.5, 0.5),
            (-1.0, 1.0),
            (4.0, 1.0),
        ]);
        let fold = find_fold(&curve).unwrap().unwrap();
        let cut = equal_area_cut(&curve, &fold, 1e-14).unwrap();
        assert_relative_eq!(cut.cut_x, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn capped_cut_on_interacting_box_folds() {
        // Burgers with a unit box on [-1, 0] and a 0.15 box on [0.1, 0.6],
        // sheared to t = 2 (exactly piecewise linear): the small box's fold
        // crests at x = 0.9, below the big fold's crest at x = 2, and its
        // trough lobe at the cap (0.105) is smaller than the crest lobe
        // there (0.3025), so the capped branch fires. Closed form for the
        // cut: (1 - d/2)^2 = 0.105, i.e. d = 2 - sqrt(0.42).
        let curve = pl(&[
            (-1.5, 0.0),
            (-1.0, 0.0),
            (1.0, 1.0),
            (2.0, 1.0),
            (0.0, 0.0),
            (0.1, 0.0),
            (0.4, 0.15),
            (0.9, 0.15),
            (0.6, 0.0),
            (3.0, 0.0),
        ]);
        let fold = find_fold(&curve).unwrap().unwrap();
        assert_relative_eq!(fold.crest_x, 2.0, epsilon = 1e-15);
        assert_relative_eq!(fold.trough_x, 0.0, epsilon = 1e-15);
        assert_relative_eq!(fold.cap_x, 0.9, epsilon = 1e-15);
        assert!(area_balance(&curve, &fold, 0.9).unwrap() < 0.0);

        let before = area_under_graph(&curve);
        let cut = equal_area_cut(&curve, &fold, 1e-14).unwrap();
        let expect = 2.0 - 0.42f64.sqrt();
        assert_relative_eq!(cut.cut_x, expect, epsilon = 1e-10);
        assert_relative_eq!(cut.balanced_area, 0.105, epsilon = 1e-12);
        // Both the cut line and the cap line carry vertical runs now, and
        // the lower-branch piece between them survives.
        let xs: Vec<f64> = cut.curve.points().iter().map(|p| p.x).collect();
        assert!(xs.windows(2).any(|w| w[0] == w[1] && (w[0] - cut.cut_x).abs() < 1e-9));
        assert!(xs.windows(2).any(|w| w[0] == w[1] && (w[0] - 0.9).abs() < 1e-9));
        assert_relative_eq!(area_under_graph(&cut.curve), before, epsilon = 1e-12);

        // Finish the loop by hand: the leftover fold resolves and the area
        // still holds.
        let mut curve = cut.curve;
        let mut guard = 0;
        while let Some(f) = find_fold(&curve).unwrap() {
            curve = equal_area_cut(&curve, &f, 1e-14).unwrap().curve;
            guard += 1;
            assert!(guard <= 4, "leftover fold failed to resolve");
        }
        assert_relative_eq!(area_under_graph(&curve), before, epsilon = 1e-12);

        // The same configuration through the full pipeline: both cuts merge
        // into a single shock and the area matches the two-box mass.
        let profile = PiecewiseProfile::new(alloc::vec![
            Segment::new(-1.0, 0.0, alloc::boxed::Box::new(|_| 1.0)),
            Segment::new(0.0, 0.1, alloc::boxed::Box::new(|_| 0.0)),
            Segment::new(0.1, 0.6, alloc::boxed::Box::new(|_| 0.15)),
        ])
        .unwrap();
        let sol = solve_at_time(&Flux::burgers(), &profile, 2.0, &SolveParams::default()).unwrap();
        assert_eq!(sol.shocks.len(), 1, "folds merge into one shock");
        assert!(sol.cuts_performed >= 2);
        assert_relative_eq!(sol.initial_area, 1.075, epsilon = 1e-12);
    }

    #[test]
    fn solve_at_zero_time_has_no_shocks() {
        let sol = solve_at_time(
            &Flux::burgers(),
            &PiecewiseProfile::box_profile(),
            0.0,
            &SolveParams::default(),
        )
        .unwrap();
        assert!(sol.shocks.is_empty());
        assert_eq!(sol.cuts_performed, 0);
        assert!(sol.area_drift <= 1e-12);
        assert_eq!(sol.evaluate(-0.5), 1.0);
    }

    #[test]
    fn riemann_shock_and_fan_at_unit_time() {
        let sol = solve_at_time(
            &Flux::burgers(),
            &PiecewiseProfile::riemann_step(),
            1.0,
            &SolveParams::default(),
        )
        .unwrap();
        assert_eq!(sol.shocks.len(), 1);
        let shock = &sol.shocks[0];
        assert_relative_eq!(shock.x, 0.5, epsilon = 1e-9);
        assert_relative_eq!(shock.u_minus, 1.0, epsilon = 1e-9);
        assert_relative_eq!(shock.u_plus, 0.0, epsilon = 1e-9);
        assert_relative_eq!(shock.rh_speed, 0.5, epsilon = 1e-9);
        // The fan is u = x + 1 on [-1, 0]; left of the shock u = 1.
        assert_relative_eq!(sol.evaluate(-0.5), 0.5, epsilon = 1e-9);
        assert_relative_eq!(sol.evaluate(0.25), 1.0, epsilon = 1e-9);
        assert_eq!(sol.evaluate(-1.4), 0.0);
        // Right limit at the shock.
        assert_relative_eq!(sol.evaluate(shock.x), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn lwr_box_has_stationary_left_shock_and_right_fan() {
        // Concave flux: the upward jump at x = -1 is the admissible shock
        // (u- < u+) and is stationary because f(0) = f(1) = 0.
        let sol = solve_at_time(
            &Flux::lwr_traffic(),
            &PiecewiseProfile::box_profile(),
            0.5,
            &SolveParams::default(),
        )
        .unwrap();
        assert_eq!(sol.shocks.len(), 1);
        let s = &sol.shocks[0];
        assert_relative_eq!(s.x, -1.0, epsilon = 1e-9);
        assert!(s.u_minus < s.u_plus, "concave flux jumps upward");
        assert_relative_eq!(s.rh_speed, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn direct_in_time_solves_are_reproducible() {
        let flux = Flux::burgers();
        let profile = PiecewiseProfile::gaussian_triple();
        let params = SolveParams::default();
        let a = solve_at_time(&flux, &profile, 4.25, &params).unwrap();
        // Unrelated work in between.
        let _ = solve_at_time(&flux, &profile, 2.0, &params).unwrap();
        let b = solve_at_time(&flux, &profile, 4.25, &params).unwrap();
        assert_eq!(a.shocks.len(), b.shocks.len());
        for (sa, sb) in a.shocks.iter().zip(&b.shocks) {
            assert!((sa.x - sb.x).abs() <= 1e-12);
        }
    }

    #[test]
    fn cut_count_is_bounded_by_fold_census() {
        let flux = Flux::burgers();
        let profile = PiecewiseProfile::gaussian_triple();
        let g0 = sample_gamma0(&profile, 1000, 64).unwrap();
        let census = count_x_extrema_of(
            &shear_polyline(&flux, &g0, 4.25).unwrap().curve,
        );
        let sol = solve_at_time(&flux, &profile, 4.25, &SolveParams::default()).unwrap();
        assert!(sol.cuts_performed as usize <= census);
        assert!(!sol.shocks.is_empty());
        for s in &sol.shocks {
            assert!(s.u_minus > s.u_plus, "convex flux jumps downward");
            let rh = rankine_hugoniot_speed(&flux, s.u_minus, s.u_plus);
            assert_eq!(rh, s.rh_speed);
        }
    }

    #[test]
    fn displacement_estimate_cases() {
        assert_eq!(shock_displacement_estimate(0.0, 3.0, 0.5).unwrap(), 0.0);
        assert!(shock_displacement_estimate(1e-4, 3.0, 0.0).is_err());
        assert_relative_eq!(
            shock_displacement_estimate(6e-4, 4.0, 0.8).unwrap(),
            3e-3,
            epsilon = 1e-12
        );
    }
}

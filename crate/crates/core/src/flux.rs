//! Flux functions f(u) with analytic derivatives and convexity tagging.
//!
//! The characteristic shear is driven by f', so fluxes carry analytic
//! first and second derivatives rather than numeric differentiation; the
//! declared convexity fixes the admissible jump direction and is verified
//! against sampled f'' at construction.

use alloc::boxed::Box;
use alloc::format;

use crate::error::{Error, Result};

/// Threshold below which a jump is treated as the degenerate equal-state
/// limit in [`rankine_hugoniot_speed`].
const DEGENERATE_JUMP: f64 = 1e-12;

/// Number of sample points used to verify the declared convexity.
const CONVEXITY_SAMPLES: usize = 1001;

type ScalarFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convexity {
    StrictlyConvex,
    StrictlyConcave,
}

impl Convexity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Convexity::StrictlyConvex => "strictly_convex",
            Convexity::StrictlyConcave => "strictly_concave",
        }
    }
}

/// A flux f in C^2 over a stated working range.
///
/// Immutable after construction; safe to share across threads.
pub struct Flux {
    value: ScalarFn,
    speed: ScalarFn,
    second_deriv: ScalarFn,
    convexity: Convexity,
    range: (f64, f64),
}

impl core::fmt::Debug for Flux {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Flux")
            .field("convexity", &self.convexity)
            .field("range", &self.range)
            .finish()
    }
}

impl Flux {
    /// Builds a flux from analytic f, f', f''. The declared convexity is
    /// verified by sampling f'' at 1001 points of the working range; any
    /// sign mismatch is a hard configuration error.
    pub fn new(
        value: ScalarFn,
        speed: ScalarFn,
        second_deriv: ScalarFn,
        convexity: Convexity,
        range: (f64, f64),
    ) -> Result<Self> {
        if !(range.0 < range.1) || !range.0.is_finite() || !range.1.is_finite() {
            return Err(Error::Config(format!(
                "flux working range [{}, {}] is not a proper interval",
                range.0, range.1
            )));
        }
        let flux = Flux {
            value,
            speed,
            second_deriv,
            convexity,
            range,
        };
        flux.verify_convexity()?;
        Ok(flux)
    }

    fn verify_convexity(&self) -> Result<()> {
        let (lo, hi) = self.range;
        let step = (hi - lo) / (CONVEXITY_SAMPLES - 1) as f64;
        for i in 0..CONVEXITY_SAMPLES {
            let u = lo + step * i as f64;
            let dd = (self.second_deriv)(u);
            let ok = match self.convexity {
                Convexity::StrictlyConvex => dd > 0.0,
                Convexity::StrictlyConcave => dd < 0.0,
            };
            if !ok || !dd.is_finite() {
                return Err(Error::ConvexityMismatch {
                    declared: self.convexity.as_str(),
                    at_u: u,
                    second_deriv: dd,
                });
            }
        }
        Ok(())
    }

    /// f(u).
    pub fn value(&self, u: f64) -> f64 {
        (self.value)(u)
    }

    /// f'(u), the characteristic speed of the state u.
    pub fn speed(&self, u: f64) -> f64 {
        (self.speed)(u)
    }

    /// f''(u).
    pub fn second_deriv(&self, u: f64) -> f64 {
        (self.second_deriv)(u)
    }

    pub fn convexity(&self) -> Convexity {
        self.convexity
    }

    pub fn range(&self) -> (f64, f64) {
        self.range
    }

    /// Largest |f'| over [lo, hi]. f' is monotone for the admitted fluxes,
    /// so the extremes sit at the interval endpoints.
    pub fn max_abs_speed(&self, lo: f64, hi: f64) -> f64 {
        self.speed(lo).abs().max(self.speed(hi).abs())
    }

    /// Root of f' inside [lo, hi] found by bisection, if f' changes sign
    /// there. Used by the Godunov numerical flux for sonic interfaces.
    pub fn speed_root_in(&self, lo: f64, hi: f64) -> Option<f64> {
        let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        let (mut fa, fb) = (self.speed(a), self.speed(b));
        if fa == 0.0 {
            return Some(a);
        }
        if fb == 0.0 {
            return Some(b);
        }
        if fa.signum() == fb.signum() {
            return None;
        }
        for _ in 0..80 {
            let mid = 0.5 * (a + b);
            let fm = self.speed(mid);
            if fm == 0.0 || (b - a) < 1e-15 * (1.0 + mid.abs()) {
                return Some(mid);
            }
            if fm.signum() == fa.signum() {
                a = mid;
                fa = fm;
            } else {
                b = mid;
            }
        }
        Some(0.5 * (a + b))
    }

    /// f(u) = u^2 / 2, strictly convex.
    pub fn burgers() -> Flux {
        Flux::new(
            Box::new(|u| 0.5 * u * u),
            Box::new(|u| u),
            Box::new(|_| 1.0),
            Convexity::StrictlyConvex,
            (-2.0, 2.0),
        )
        .expect("burgers flux is well formed")
    }

    /// f(u) = u (1 - u), strictly concave.
    pub fn lwr_traffic() -> Flux {
        Flux::new(
            Box::new(|u| u * (1.0 - u)),
            Box::new(|u| 1.0 - 2.0 * u),
            Box::new(|_| -2.0),
            Convexity::StrictlyConcave,
            (-2.0, 2.0),
        )
        .expect("lwr flux is well formed")
    }

    /// Builds a named built-in flux.
    pub fn builtin(name: &str) -> Result<Flux> {
        match name {
            "burgers" => Ok(Flux::burgers()),
            "lwr_traffic" => Ok(Flux::lwr_traffic()),
            other => Err(Error::Config(format!("unknown flux '{other}'"))),
        }
    }
}

/// Shock speed (f(u+) - f(u-)) / (u+ - u-); degenerates to f' at the mean
/// state when the jump is smaller than 1e-12.
pub fn rankine_hugoniot_speed(flux: &Flux, u_minus: f64, u_plus: f64) -> f64 {
    let jump = u_plus - u_minus;
    if jump.abs() < DEGENERATE_JUMP {
        flux.speed(0.5 * (u_minus + u_plus))
    } else {
        (flux.value(u_plus) - flux.value(u_minus)) / jump
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn builtin_values() {
        let b = Flux::burgers();
        assert_eq!(b.speed(0.5), 0.5);
        assert_eq!(b.convexity(), Convexity::StrictlyConvex);
        let l = Flux::lwr_traffic();
        assert_eq!(l.speed(0.5), 0.0);
        assert_eq!(l.second_deriv(17.3), -2.0);
        assert_eq!(l.convexity(), Convexity::StrictlyConcave);
        assert!(Flux::builtin("nope").is_err());
    }

    #[test]
    fn rh_basic_cases() {
        let b = Flux::burgers();
        assert_eq!(rankine_hugoniot_speed(&b, 1.0, 0.0), 0.5);
        // Degenerate jump falls back to the characteristic speed.
        assert_eq!(rankine_hugoniot_speed(&b, 0.7, 0.7), 0.7);
        let l = Flux::lwr_traffic();
        assert_relative_eq!(
            rankine_hugoniot_speed(&l, 0.2, 0.8),
            0.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn declared_convexity_is_verified() {
        let bad = Flux::new(
            Box::new(|u| 0.5 * u * u),
            Box::new(|u| u),
            Box::new(|_| 1.0),
            Convexity::StrictlyConcave,
            (-1.0, 1.0),
        );
        assert!(matches!(bad, Err(Error::ConvexityMismatch { .. })));
    }

    #[test]
    fn finite_difference_consistency_of_builtins() {
        let delta = 1e-4;
        for flux in [Flux::burgers(), Flux::lwr_traffic()] {
            let (lo, hi) = flux.range();
            for i in 0..=100 {
                let u = lo + (hi - lo) * i as f64 / 100.0;
                let fd = (flux.value(u + delta) - flux.value(u - delta)) / (2.0 * delta);
                assert!(
                    (flux.speed(u) - fd).abs() <= 1e-6,
                    "f' mismatch at u = {u}"
                );
            }
        }
    }

    #[test]
    fn sonic_point_bisection() {
        let b = Flux::burgers();
        let root = b.speed_root_in(1.0, -0.5).unwrap();
        assert!(root.abs() < 1e-12);
        assert!(b.speed_root_in(0.25, 1.0).is_none());
        let l = Flux::lwr_traffic();
        assert_relative_eq!(l.speed_root_in(0.0, 1.0).unwrap(), 0.5, epsilon = 1e-12);
    }

    proptest! {
        #[test]
        fn rh_is_symmetric(a in -1.5f64..1.5, b in -1.5f64..1.5) {
            prop_assume!((a - b).abs() > 1e-9);
            let flux = Flux::burgers();
            let lr = rankine_hugoniot_speed(&flux, a, b);
            let rl = rankine_hugoniot_speed(&flux, b, a);
            prop_assert!((lr - rl).abs() <= 1e-12 * (1.0 + lr.abs()));
        }

        #[test]
        fn rh_sits_between_characteristic_speeds(a in -1.5f64..1.5, d in 1e-6f64..1.0) {
            // Strictly convex flux: f'(a) < s_RH < f'(b) for a < b.
            let b = a + d;
            let flux = Flux::burgers();
            let s = rankine_hugoniot_speed(&flux, a, b);
            prop_assert!(flux.speed(a) < s && s < flux.speed(b));
        }
    }
}

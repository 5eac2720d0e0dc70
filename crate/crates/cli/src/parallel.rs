//! Worker-pool evaluation of independent time slices. Solves are pure
//! functions of immutable inputs, so the result is identical for any worker
//! count; only wall time changes.

use std::sync::Mutex;

use eqarea_core::{solve_at_time, Error, Flux, PiecewiseProfile, SolutionCurve, SolveParams};

pub fn solve_slices(
    flux: &Flux,
    profile: &PiecewiseProfile,
    times: &[f64],
    params: &SolveParams,
    jobs: usize,
) -> Result<Vec<SolutionCurve>, Error> {
    let n = times.len();
    let slots: Vec<Mutex<Option<Result<SolutionCurve, Error>>>> =
        (0..n).map(|_| Mutex::new(None)).collect();

    let workers = jobs.max(1).min(n.max(1));
    std::thread::scope(|scope| {
        for w in 0..workers {
            let slots = &slots;
            scope.spawn(move || {
                let mut i = w;
                while i < n {
                    let result = solve_at_time(flux, profile, times[i], params);
                    *slots[i].lock().expect("slice slot poisoned") = Some(result);
                    i += workers;
                }
            });
        }
    });

    let mut out = Vec::with_capacity(n);
    for (i, slot) in slots.into_iter().enumerate() {
        let result = slot
            .into_inner()
            .expect("slice slot poisoned")
            .expect("worker filled every assigned slot");
        match result {
            Ok(sol) => out.push(sol),
            Err(e) => {
                return Err(Error::SliceFailed {
                    t: times[i],
                    message: e.to_string(),
                })
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worker_count_does_not_change_results() {
        let flux = Flux::burgers();
        let profile = PiecewiseProfile::hat();
        let params = SolveParams {
            n_points: 200,
            jump_subpoints: 8,
            ..SolveParams::default()
        };
        let times: Vec<f64> = (0..9).map(|i| 0.5 * i as f64).collect();
        let serial = solve_slices(&flux, &profile, &times, &params, 1).unwrap();
        let parallel = solve_slices(&flux, &profile, &times, &params, 4).unwrap();
        assert_eq!(serial.len(), parallel.len());
        for (a, b) in serial.iter().zip(&parallel) {
            assert_eq!(a.shocks.len(), b.shocks.len());
            for (sa, sb) in a.shocks.iter().zip(&b.shocks) {
                assert_eq!(sa.x, sb.x);
            }
        }
    }
}

//! Wall-clock comparison of the direct Veronese path and the compressed fast path.

use serde::Serialize;

use crate::condition::{condition_veronese, condition_waring_fast};
use crate::error::{Error, Result};
use crate::experiments::sampling::random_waring;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchReport {
    pub n: usize,
    #[serde(rename = "D")]
    pub order: usize,
    #[serde(rename = "R")]
    pub rank: usize,
    pub reps: usize,
    pub median_direct_s: f64,
    pub median_fast_s: f64,
    pub speedup: f64,
    pub kappa_direct: f64,
    pub kappa_fast: f64,
    pub rel_diff: f64,
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let k = xs.len();
    if k % 2 == 1 {
        xs[k / 2]
    } else {
        (xs[k / 2 - 1] + xs[k / 2]) / 2.0
    }
}

/// Relative difference `|a - b| / |a|`, zero when both are infinite.
pub fn relative_difference(a: f64, b: f64) -> f64 {
    if a.is_infinite() && b.is_infinite() && a.signum() == b.signum() {
        0.0
    } else {
        (a - b).abs() / a.abs()
    }
}

/// Times both paths `reps` times on the same random decomposition and
/// reports median wall-clock seconds. Requires `n > R`.
pub fn speed_benchmark(n: usize, order: usize, rank: usize, seed: u64, reps: usize) -> Result<BenchReport> {
    if reps == 0 {
        return Err(Error::InvalidArgument("reps must be at least 1".into()));
    }
    if n <= rank {
        return Err(Error::FastPathInapplicable { dim: n, rank });
    }
    let dec = random_waring(n, order, rank, seed)?;
    let mut direct_times = Vec::with_capacity(reps);
    let mut fast_times = Vec::with_capacity(reps);
    let mut kappa_direct = f64::NAN;
    let mut kappa_fast = f64::NAN;
    for _ in 0..reps {
        let d = condition_veronese(&dec)?;
        direct_times.push(d.elapsed.as_secs_f64());
        kappa_direct = d.kappa;
        let f = condition_waring_fast(&dec)?;
        fast_times.push(f.elapsed.as_secs_f64());
        kappa_fast = f.kappa;
    }
    let median_direct_s = median(direct_times);
    let median_fast_s = median(fast_times);
    Ok(BenchReport {
        n,
        order,
        rank,
        reps,
        median_direct_s,
        median_fast_s,
        speedup: median_direct_s / median_fast_s,
        kappa_direct,
        kappa_fast,
        rel_diff: relative_difference(kappa_direct, kappa_fast),
    })
}

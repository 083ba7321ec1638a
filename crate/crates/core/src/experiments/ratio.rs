//! Monte-Carlo comparison of the CPD and Waring condition numbers of random
//! symmetric decompositions.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;

use crate::condition::{condition_segre, condition_veronese};
use crate::error::{Error, Result};
use crate::experiments::sampling::{derive_seed, random_waring};

/// Header of the per-trial CSV.
pub const RECORDS_HEADER: &str = "n,R,trial,kappa_segre,kappa_veronese,ratio,infinite_flag,seed";
/// Header of the per-`(n, R)` summary CSV.
pub const SUMMARY_HEADER: &str = "n,R,max_ratio,num_infinite";

/// Largest `R` with `R n < binom(n + D - 1, D)`, the dimension of the space
/// of symmetric order-`D` tensors on `R^n`. Beyond it the Terracini matrix has
/// more columns than that space has dimensions and the condition number is infinite.
pub fn max_rank_bound(n: usize, order: usize) -> usize {
    let dim = binomial(n + order - 1, order);
    ((dim - 1) / n as u128) as usize
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankRule {
    /// Every `R` from 1 to [`max_rank_bound`].
    FinitenessBound,
    Fixed(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub order: usize,
    pub trials: usize,
    pub seed: u64,
    pub rank_rule: RankRule,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self { n_min: 3, n_max: 10, order: 3, trials: 50, seed: 0, rank_rule: RankRule::FinitenessBound }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if self.n_min < 2 || self.n_min > self.n_max || self.n_max > 64 {
            return Err(Error::InvalidArgument(format!(
                "n range [{}, {}] must lie within [2, 64]",
                self.n_min, self.n_max
            )));
        }
        if self.order < 2 {
            return Err(Error::OrderTooSmall { min: 2, got: self.order });
        }
        if self.rank_rule == RankRule::Fixed(0) {
            return Err(Error::InvalidArgument("fixed rank must be at least 1".into()));
        }
        Ok(())
    }

    pub fn ranks(&self, n: usize) -> Vec<usize> {
        match self.rank_rule {
            RankRule::FinitenessBound => (1..=max_rank_bound(n, self.order)).collect(),
            RankRule::Fixed(r) => vec![r],
        }
    }
}

/// One trial. `ratio = kappa_segre / kappa_veronese`.
#[derive(Clone, Debug, PartialEq)]
pub struct RatioRecord {
    pub n: usize,
    pub rank: usize,
    pub trial: usize,
    pub kappa_segre: f64,
    pub kappa_veronese: f64,
    pub ratio: f64,
    /// Either condition number is infinite.
    pub infinite: bool,
    pub seed: u64,
    /// SVD or construction failure; the kappas are NaN.
    pub failure: Option<String>,
}

impl RatioRecord {
    pub fn is_finite(&self) -> bool {
        !self.infinite && self.failure.is_none()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RatioSummary {
    pub n: usize,
    pub rank: usize,
    /// Maximum over finite trials; NaN when there are none.
    pub max_ratio: f64,
    pub num_infinite: usize,
    pub num_failed: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RatioOutcome {
    /// Sorted by `(n, R, trial)`.
    pub records: Vec<RatioRecord>,
    /// Sorted by `(n, R)`.
    pub summary: Vec<RatioSummary>,
}

impl RatioOutcome {
    fn finite_ratios(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().filter(|r| r.is_finite()).map(|r| r.ratio)
    }

    pub fn max_ratio(&self) -> Option<f64> {
        self.finite_ratios().reduce(f64::max)
    }

    pub fn min_ratio(&self) -> Option<f64> {
        self.finite_ratios().reduce(f64::min)
    }

    pub fn write_records_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{RECORDS_HEADER}")?;
        for r in &self.records {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                r.n,
                r.rank,
                r.trial,
                r.kappa_segre,
                r.kappa_veronese,
                r.ratio,
                u8::from(r.infinite),
                r.seed
            )?;
        }
        Ok(())
    }

    pub fn write_summary_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{SUMMARY_HEADER}")?;
        for s in &self.summary {
            writeln!(w, "{},{},{},{}", s.n, s.rank, s.max_ratio, s.num_infinite)?;
        }
        Ok(())
    }
}

fn run_trial(n: usize, rank: usize, trial: usize, order: usize, base_seed: u64) -> RatioRecord {
    let seed = derive_seed(base_seed, &[n as u64, rank as u64, trial as u64]);
    let mut rec = RatioRecord {
        n,
        rank,
        trial,
        kappa_segre: f64::NAN,
        kappa_veronese: f64::NAN,
        ratio: f64::NAN,
        infinite: false,
        seed,
        failure: None,
    };
    let computed = random_waring(n, order, rank, seed)
        .and_then(|dec| Ok((condition_segre(&dec)?.kappa, condition_veronese(&dec)?.kappa)));
    match computed {
        Ok((ks, kv)) => {
            rec.kappa_segre = ks;
            rec.kappa_veronese = kv;
            rec.ratio = ks / kv;
            rec.infinite = ks.is_infinite() || kv.is_infinite();
        }
        Err(e) => rec.failure = Some(e.to_string()),
    }
    rec
}

/// Runs every trial of `cfg` (in parallel when a thread pool is available)
/// and aggregates per-`(n, R)` maxima over finite trials. Output order and
/// contents do not depend on the number of threads.
pub fn ratio_experiment(cfg: &ExperimentConfig) -> Result<RatioOutcome> {
    cfg.validate()?;
    let tasks: Vec<(usize, usize, usize)> = (cfg.n_min..=cfg.n_max)
        .flat_map(|n| cfg.ranks(n).into_iter().map(move |r| (n, r)))
        .flat_map(|(n, r)| (0..cfg.trials).map(move |t| (n, r, t)))
        .collect();
    let mut records: Vec<RatioRecord> =
        tasks.par_iter().map(|&(n, r, t)| run_trial(n, r, t, cfg.order, cfg.seed)).collect();
    records.sort_by_key(|r| (r.n, r.rank, r.trial));

    let mut groups: BTreeMap<(usize, usize), RatioSummary> = BTreeMap::new();
    for rec in &records {
        let s = groups.entry((rec.n, rec.rank)).or_insert(RatioSummary {
            n: rec.n,
            rank: rec.rank,
            max_ratio: f64::NAN,
            num_infinite: 0,
            num_failed: 0,
        });
        if rec.failure.is_some() {
            s.num_failed += 1;
        } else if rec.infinite {
            s.num_infinite += 1;
        } else {
            s.max_ratio = if s.max_ratio.is_nan() { rec.ratio } else { s.max_ratio.max(rec.ratio) };
        }
    }
    Ok(RatioOutcome { records, summary: groups.into_values().collect() })
}

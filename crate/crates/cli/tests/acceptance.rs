//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails. Every random draw derives from base seed 0.

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::RngExt;
use symcond::experiments::{derive_seed, random_orthonormal, random_psrd, random_q_wd, random_waring, rng_from_seed};
use symcond::{
    condition_psrd_fast, condition_segre, condition_segre_veronese, condition_veronese, condition_waring_fast,
    embed_psrd, embed_waring, gramian_orthocomplement, orthocomplement_block, orthogonal_complement, q_wd_condition,
    rank2_condition, singular_values, terracini_veronese, DenseMatrix, UnitVector, WaringDecomposition,
};

const BASE_SEED: u64 = 0;

type Outcome = Result<String, String>;

fn seed(criterion: u64, case: u64) -> u64 {
    derive_seed(BASE_SEED, &[criterion, case])
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

fn e<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|err| err.to_string())
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_symcond")
}

fn scratch_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("symcond-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    dir
}

fn rank_one_exactness() -> Outcome {
    // n^D rows must stay in memory; n is capped per order below 30.
    let mut rng = rng_from_seed(seed(1, 0));
    let mut worst = 0.0f64;
    for case in 0..20 {
        let order = [3, 4, 5][rng.random_range(0..3usize)];
        let n_max = match order {
            3 => 30,
            4 => 12,
            _ => 7,
        };
        let n = rng.random_range(2..=n_max);
        let dec = e(random_waring(n, order, 1, seed(1, case + 1)))?;
        for k in
            [e(condition_segre(&dec))?.kappa, e(condition_veronese(&dec))?.kappa, e(condition_waring_fast(&dec))?.kappa]
        {
            worst = worst.max((k - 1.0).abs());
            if (k - 1.0).abs() > 1e-11 {
                return Err(format!("n={n} D={order}: kappa {k}"));
            }
        }
    }
    Ok(format!("20 cases, max |kappa - 1| = {worst:.1e}"))
}

fn rank_two_closed_form() -> Outcome {
    let mut rng = rng_from_seed(seed(2, 0));
    let (mut worst_sv, mut worst_cf) = (0.0f64, 0.0f64);
    for case in 0..200 {
        let n = rng.random_range(2..=8usize);
        let order = rng.random_range(3..=5usize);
        let dec = e(random_waring(n, order, 2, seed(2, case + 1)))?;
        let alpha = dec.terms()[0].direction().dot(dec.terms()[1].direction());
        let ks = e(condition_segre(&dec))?.kappa;
        let kv = e(condition_veronese(&dec))?.kappa;
        let kc = e(rank2_condition(alpha, order))?.kappa;
        let (d_sv, d_cf) = (rel(ks, kv), rel(ks, kc).max(rel(kv, kc)));
        worst_sv = worst_sv.max(d_sv);
        worst_cf = worst_cf.max(d_cf);
        if d_sv > 1e-10 || d_cf > 1e-9 {
            return Err(format!("n={n} D={order} alpha={alpha}: kS={ks} kV={kv} closed={kc}"));
        }
    }
    Ok(format!("200 cases, max rel |kS-kV| = {worst_sv:.1e}, max rel vs closed form = {worst_cf:.1e}"))
}

fn tucker_chain() -> Outcome {
    let mut rng = rng_from_seed(seed(3, 0));
    let mut beyond_resolution = 0;
    let mut worst_kappa = 0.0f64;
    for case in 0..100 {
        let m = rng.random_range(2..=4usize);
        let n = rng.random_range(m + 1..=10usize);
        let order = rng.random_range(3..=4usize);
        let rank = rng.random_range(1..=3usize);
        let (core, q) = e(random_q_wd(n, m, order, rank, seed(3, case + 1)))?;
        let a = e(embed_waring(&core, &q))?;
        let kw = e(q_wd_condition(&core, &q))?.kappa;
        let kv = e(condition_veronese(&a))?.kappa;
        let upper = (order as f64).sqrt() * kw;
        if kw.is_finite() {
            worst_kappa = worst_kappa.max(kw);
            if kw * kw * f64::EPSILON > 1e-9 {
                beyond_resolution += 1;
            }
        }
        if !(kw <= kv + 1e-9 && kv <= upper + 1e-9) {
            return Err(format!("m={m} n={n} D={order} R={rank}: kW={kw} kV={kv} sqrt(D)kW={upper}"));
        }
    }
    Ok(format!("100 cases, largest finite kW = {worst_kappa:.3e}, {beyond_resolution} with kW^2*eps above the slack"))
}

fn fast_path() -> Outcome {
    let mut rng = rng_from_seed(seed(4, 0));
    let mut worst = 0.0f64;
    for case in 0..50 {
        let rank = rng.random_range(1..=6usize);
        let n = rng.random_range(rank + 2..=25);
        let dec = e(random_waring(n, 3, rank, seed(4, case + 1)))?;
        let direct = e(condition_veronese(&dec))?.kappa;
        let fast = e(condition_waring_fast(&dec))?.kappa;
        let d = rel(fast, direct);
        worst = worst.max(d);
        if d > 1e-9 {
            return Err(format!("n={n} R={rank}: direct {direct} fast {fast}"));
        }
    }
    Ok(format!("50 cases, max rel diff = {worst:.1e}"))
}

fn orthocomplement(core: &WaringDecomposition, q: &DenseMatrix, order: usize) -> Result<DenseMatrix, String> {
    let a = e(embed_waring(core, q))?;
    let dirs: Vec<UnitVector> = a.directions().cloned().collect();
    e(orthocomplement_block(&dirs, &e(orthogonal_complement(q))?, order))
}

fn gramian_identity() -> Outcome {
    let mut rng = rng_from_seed(seed(5, 0));
    let mut worst = 0.0f64;
    for case in 0..50 {
        let m = rng.random_range(2..=5usize);
        let n = rng.random_range(m + 1..=9usize);
        let order = rng.random_range(3..=4usize);
        let rank = rng.random_range(1..=4usize);
        let (core, q) = e(random_q_wd(n, m, order, rank, seed(5, case + 1)))?;
        let perp = orthocomplement(&core, &q, order)?;
        let core_dirs: Vec<UnitVector> = core.directions().cloned().collect();
        let predicted = e(gramian_orthocomplement(&core_dirs, order, n))?;
        let d = perp.gram().max_abs_diff(&predicted);
        worst = worst.max(d);
        if d > 1e-12 {
            return Err(format!("m={m} n={n} D={order} R={rank}: max entry diff {d:e}"));
        }
    }
    Ok(format!("50 cases, max entry diff = {worst:.1e}"))
}

fn singular_value_union() -> Outcome {
    let mut rng = rng_from_seed(seed(6, 0));
    let mut worst = 0.0f64;
    for case in 0..30 {
        let m = rng.random_range(2..=4usize);
        let n = rng.random_range(m + 1..=8usize);
        let order = rng.random_range(3..=4usize);
        let rank = rng.random_range(1..=3usize);
        let (core, q) = e(random_q_wd(n, m, order, rank, seed(6, case + 1)))?;
        let a = e(embed_waring(&core, &q))?;
        let full = sorted(e(singular_values(e(terracini_veronese(&a))?.matrix()))?);
        let mut merged = e(singular_values(e(terracini_veronese(&core))?.matrix()))?;
        merged.extend(e(singular_values(&orthocomplement(&core, &q, order)?))?);
        let merged = sorted(merged);
        if merged.len() != full.len() {
            return Err(format!("m={m} n={n}: {} vs {} singular values", merged.len(), full.len()));
        }
        let d = full.iter().zip(&merged).fold(0.0f64, |acc, (x, y)| acc.max((x - y).abs()));
        worst = worst.max(d);
        if d > 1e-9 {
            return Err(format!("m={m} n={n} D={order} R={rank}: max gap {d:e}"));
        }
    }
    Ok(format!("30 cases, max gap = {worst:.1e}"))
}

fn ratio_reproduction() -> Outcome {
    let out = scratch_dir().join("ratio.csv");
    let run = e(Command::new(bin())
        .args(["ratio-experiment", "--n-min", "3", "--n-max", "10", "--D", "3", "--trials", "50", "--seed", "0"])
        .arg("--out")
        .arg(&out)
        .output())?;
    if !run.status.success() {
        return Err(format!("ratio-experiment exited with {}: {}", run.status, String::from_utf8_lossy(&run.stderr)));
    }
    let text = e(std::fs::read_to_string(&out))?;
    let (mut max, mut min, mut finite, mut infinite) = (f64::NEG_INFINITY, f64::INFINITY, 0, 0);
    for line in text.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        if cols[6] == "1" {
            infinite += 1;
            continue;
        }
        let ratio: f64 = e(cols[5].parse())?;
        finite += 1;
        max = max.max(ratio);
        min = min.min(ratio);
    }
    let _ = std::fs::remove_dir_all(out.parent().unwrap());
    let summary =
        format!("{finite} finite trials, {infinite} infinite, ratio in [1 - {:.1e}, 1 + {:.1e}]", 1.0 - min, max - 1.0);
    if finite > 0 && max <= 1.0 + 1e-11 && min >= 1.0 - 1e-11 {
        Ok(summary)
    } else {
        Err(summary)
    }
}

fn speedup() -> Outcome {
    let output = e(Command::new(bin()).args(["bench", "--n", "60", "--D", "3", "--R", "8"]).output())?;
    if !output.status.success() {
        return Err(format!("bench exited with {}", output.status));
    }
    let v: serde_json::Value = e(serde_json::from_slice(&output.stdout))?;
    let speedup = v["speedup"].as_f64().ok_or("missing speedup")?;
    let rel_diff = v["rel_diff"].as_f64().ok_or("missing rel_diff")?;
    let summary = format!("speedup {speedup:.0}x, rel diff {rel_diff:.1e}");
    if speedup >= 100.0 && rel_diff <= 1e-9 {
        Ok(summary)
    } else {
        Err(summary)
    }
}

fn partially_symmetric() -> Outcome {
    let mut rng = rng_from_seed(seed(9, 0));
    let (mut worst_margin, mut worst_fast) = (f64::INFINITY, 0.0f64);
    for case in 0..30 {
        let degrees = [[1, 1], [2, 1], [2, 2]][rng.random_range(0..3usize)];
        let ms = [rng.random_range(2..=3usize), rng.random_range(2..=3usize)];
        let ns = [rng.random_range(ms[0] + 1..=7), rng.random_range(ms[1] + 1..=7)];
        let rank = rng.random_range(1..=2usize);
        let core = e(random_psrd(&ms, &degrees, rank, seed(9, case + 1)))?;
        let qs = vec![e(random_orthonormal(&mut rng, ns[0], ms[0]))?, e(random_orthonormal(&mut rng, ns[1], ms[1]))?];
        let a = e(embed_psrd(&core, &qs))?;
        let k_big = e(condition_segre_veronese(&a))?.kappa;
        let k_core = e(condition_segre_veronese(&core))?.kappa;
        let k_fast = e(condition_psrd_fast(&a))?.kappa;
        let bound = (*degrees.iter().max().unwrap() as f64).sqrt() * k_core + 1e-9;
        let params = format!("m={ms:?} n={ns:?} d={degrees:?} R={rank}");
        if k_big > bound {
            return Err(format!("{params}: {k_big} > {bound}"));
        }
        if k_big.is_finite() {
            worst_margin = worst_margin.min(bound - k_big);
        }
        let d = rel(k_fast, k_big);
        worst_fast = worst_fast.max(d);
        if d > 1e-9 {
            return Err(format!("{params}: direct {k_big} fast {k_fast}"));
        }
    }
    Ok(format!("30 cases, smallest bound margin {worst_margin:.2e}, max fast rel diff {worst_fast:.1e}"))
}

fn property_suite() -> Outcome {
    let output = e(Command::new(bin()).args(["verify", "--seed", "0", "--cases", "25"]).output())?;
    let report = String::from_utf8_lossy(&output.stdout);
    let last = report.lines().last().unwrap_or_default().to_string();
    if output.status.success() {
        Ok(last)
    } else {
        Err(format!("exit {:?}\n{report}", output.status.code()))
    }
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() -> ExitCode {
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let criteria: [Criterion; 10] = [
        ("rank-one exactness", Duration::from_secs(10), rank_one_exactness),
        ("rank-two closed form", Duration::from_secs(60), rank_two_closed_form),
        ("Tucker compression chain", Duration::from_secs(120), tucker_chain),
        ("fast-path equivalence", Duration::from_secs(120), fast_path),
        ("orthocomplement Gramian", Duration::MAX, gramian_identity),
        ("singular-value union", Duration::MAX, singular_value_union),
        ("ratio experiment", Duration::from_secs(600), ratio_reproduction),
        ("fast-path speedup", Duration::MAX, speedup),
        ("partially symmetric compression", Duration::MAX, partially_symmetric),
        ("property suite", Duration::from_secs(300), property_suite),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= limit => (true, d),
            Ok(d) => (false, format!("{d}; exceeded {:.0} s", limit.as_secs_f64())),
            Err(d) => (false, d),
        };
        failed += usize::from(!ok);
        println!("{} {:>2} {name}: {detail} [{:.2} s]", if ok { "PASS" } else { "FAIL" }, i + 1, elapsed.as_secs_f64());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}

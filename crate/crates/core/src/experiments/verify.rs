//! Randomized property checks over the Terracini builders, the condition
//! numbers and the rank-two oracles.

use std::fmt::Write as _;

use rand::RngExt;

use crate::condition::{
    condition_from_terracini, condition_psrd_fast, condition_segre, condition_segre_veronese, condition_veronese,
    condition_waring_fast, embed_psrd, embed_waring, q_wd_condition, singular_values,
};
use crate::error::Result;
use crate::experiments::bench::relative_difference;
use crate::experiments::sampling::{
    derive_seed, random_orthonormal, random_psrd, random_q_wd, random_unit, random_waring, rng_from_seed, ExperimentRng,
};
use crate::rank2::{gramian_orthocomplement, rank2_block_split, rank2_condition};
use crate::tensor::{orthogonal_complement, outer_power, sphere_tangent_basis, DenseMatrix, TangentBasis, UnitVector};
use crate::terracini::{
    expected_cols, orthocomplement_block, terracini_segre, terracini_segre_veronese, terracini_segre_with_bases,
    terracini_veronese, terracini_veronese_with_bases, Manifold, PsrdDecomposition, TerraciniMatrix,
    WaringDecomposition,
};

#[derive(Clone, Debug, Default)]
pub struct VerifyConfig {
    pub seed: u64,
    pub cases: usize,
    /// Negative control: shrink the tangent bases of the embedded Veronese
    /// Terracini matrix so the Tucker-compression chain must fail.
    pub corrupt_tangent_basis: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: usize,
    /// Instances whose condition numbers are too large for the absolute
    /// slack of the check to be resolvable in double precision.
    pub inconclusive: Vec<String>,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<CheckOutcome>,
    pub warnings: Vec<String>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.failures.is_empty())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        for c in &self.checks {
            let total = c.passed + c.inconclusive.len() + c.failures.len();
            let tag = if c.failures.is_empty() { "PASS" } else { "FAIL" };
            let _ = write!(out, "{tag} {:<34} {}/{}", c.name, c.passed, total);
            if !c.inconclusive.is_empty() {
                let _ = write!(out, " ({} inconclusive)", c.inconclusive.len());
            }
            out.push('\n');
            for f in &c.failures {
                let _ = writeln!(out, "    {f}");
            }
            for f in &c.inconclusive {
                let _ = writeln!(out, "    inconclusive: {f}");
            }
        }
        let failed = self.checks.iter().filter(|c| !c.failures.is_empty()).count();
        let _ = writeln!(out, "{} checks, {} failed", self.checks.len(), failed);
        out
    }
}

type CheckResult = std::result::Result<(), String>;

enum Verdict {
    Pass,
    Inconclusive(String),
}

type CheckVerdict = std::result::Result<Verdict, String>;

/// A computed `kappa` is only resolved to about `kappa^2 * eps`: that is the
/// effect of a backward-stable SVD and of rounding the input data. Absolute
/// slacks below this cannot separate a violation from roundoff.
fn unresolvable(kappa: f64, slack: f64) -> bool {
    kappa.is_finite() && kappa * kappa * f64::EPSILON > slack
}

struct Case {
    rng: ExperimentRng,
    seed: u64,
    corrupt: bool,
}

impl Case {
    fn pick(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.random_range(lo..=hi)
    }
}

fn lib<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| format!("library error: {e}"))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> CheckResult {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn same_kappa(a: f64, b: f64, rel: f64) -> bool {
    relative_difference(a, b) <= rel
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).fold(0.0, |m, (x, y)| f64::max(m, (x - y).abs()))
}

fn random_orthogonal(rng: &mut ExperimentRng, n: usize) -> Result<DenseMatrix> {
    random_orthonormal(rng, n, n)
}

fn block_defect(t: &TerraciniMatrix) -> f64 {
    (0..t.block_ranges().len()).map(|r| t.block(r).orthonormality_defect()).fold(0.0, f64::max)
}

fn weight_invariance(c: &mut Case) -> CheckResult {
    let (n, order, rank) = (c.pick(2, 5), c.pick(2, 4), c.pick(1, 3));
    let dec = lib(random_waring(n, order, rank, c.seed))?;
    let weights: Vec<f64> = (0..rank)
        .map(|_| {
            let s: f64 = c.rng.random_range(0.1..10.0);
            if c.rng.random_bool(0.5) {
                -s
            } else {
                s
            }
        })
        .collect();
    let scaled = lib(dec.with_weights(&weights))?;
    let params = format!("n={n} D={order} R={rank}");
    ensure(lib(terracini_segre(&dec))? == lib(terracini_segre(&scaled))?, || format!("{params}: Segre changed"))?;
    ensure(lib(terracini_veronese(&dec))? == lib(terracini_veronese(&scaled))?, || {
        format!("{params}: Veronese changed")
    })?;
    let (p, q) = (PsrdDecomposition::from_waring(&dec), PsrdDecomposition::from_waring(&scaled));
    ensure(lib(terracini_segre_veronese(&p))? == lib(terracini_segre_veronese(&q))?, || {
        format!("{params}: Segre-Veronese changed")
    })?;
    if n > rank {
        let a = lib(condition_waring_fast(&dec))?.kappa;
        let b = lib(condition_waring_fast(&scaled))?.kappa;
        ensure(a.to_bits() == b.to_bits(), || format!("{params}: fast kappa {a} vs {b}"))?;
    }
    Ok(())
}

fn rotated_bases(c: &mut Case, dec: &WaringDecomposition) -> std::result::Result<Vec<TangentBasis>, String> {
    dec.directions()
        .map(|a| {
            let rot = lib(random_orthogonal(&mut c.rng, dec.n() - 1))?;
            lib(lib(sphere_tangent_basis(a))?.rotated(&rot))
        })
        .collect()
}

fn basis_invariance(c: &mut Case) -> CheckResult {
    let (n, order, rank) = (c.pick(3, 5), c.pick(3, 4), c.pick(1, 3));
    let dec = lib(random_waring(n, order, rank, c.seed))?;
    let bases = rotated_bases(c, &dec)?;
    let kv = lib(condition_veronese(&dec))?.kappa;
    let kv_rot = lib(condition_from_terracini(&lib(terracini_veronese_with_bases(&dec, &bases))?))?.kappa;
    let ks = lib(condition_segre(&dec))?.kappa;
    let ks_rot = lib(condition_from_terracini(&lib(terracini_segre_with_bases(&dec, &bases))?))?.kappa;
    ensure(same_kappa(kv, kv_rot, 1e-10) && same_kappa(ks, ks_rot, 1e-10), || {
        format!("n={n} D={order} R={rank}: Veronese {kv} vs {kv_rot}, Segre {ks} vs {ks_rot}")
    })
}

fn block_orthonormality(c: &mut Case) -> CheckResult {
    let (n, order, rank) = (c.pick(2, 5), c.pick(2, 4), c.pick(1, 3));
    let dec = lib(random_waring(n, order, rank, c.seed))?;
    let s = lib(terracini_segre(&dec))?;
    let v = lib(terracini_veronese(&dec))?;
    let k = c.pick(1, 3);
    let sizes: Vec<usize> = (0..k).map(|_| c.pick(1, 4)).collect();
    let degrees: Vec<usize> = (0..k).map(|_| c.pick(1, 2)).collect();
    let degrees = if degrees.iter().sum::<usize>() < 2 { vec![2; k] } else { degrees };
    let p = lib(random_psrd(&sizes, &degrees, rank, c.seed ^ 1))?;
    let sv = lib(terracini_segre_veronese(&p))?;
    let worst = block_defect(&s).max(block_defect(&v)).max(block_defect(&sv));
    ensure(worst <= 1e-12, || format!("n={n} D={order} sizes={sizes:?} degrees={degrees:?}: defect {worst:e}"))?;
    let counts_ok = s.total_cols() == expected_cols(Manifold::Segre, &[n], order, rank)
        && v.total_cols() == expected_cols(Manifold::Veronese, &[n], order, rank)
        && sv.total_cols() == expected_cols(Manifold::SegreVeronese, &sizes, p.order(), rank);
    ensure(counts_ok, || format!("n={n} D={order} R={rank}: column counts"))
}

fn embedded_veronese(c: &Case, dec: &WaringDecomposition) -> std::result::Result<f64, String> {
    if !c.corrupt {
        return Ok(lib(condition_veronese(dec))?.kappa);
    }
    let bases = dec
        .directions()
        .map(|a| {
            let b = lib(sphere_tangent_basis(a))?;
            Ok(TangentBasis::new_unchecked(a.clone(), b.basis().clone().scaled(0.25)))
        })
        .collect::<std::result::Result<Vec<_>, String>>()?;
    Ok(lib(condition_from_terracini(&lib(terracini_veronese_with_bases(dec, &bases))?))?.kappa)
}

fn manifold_nesting(c: &mut Case) -> CheckVerdict {
    let m = c.pick(2, 3);
    let (n, rank) = (c.pick(m + 1, 6), c.pick(1, m));
    let (core, q) = lib(random_q_wd(n, m, 3, rank, c.seed))?;
    let a = lib(embed_waring(&core, &q))?;
    let kw = lib(q_wd_condition(&core, &q))?.kappa;
    let kv = lib(condition_veronese(&a))?.kappa;
    let ks = lib(condition_segre(&a))?.kappa;
    let params = format!("m={m} n={n} R={rank}: kW={kw} kV={kv} kS={ks}");
    if unresolvable(kw.max(kv).max(ks), 1e-10) {
        return Ok(Verdict::Inconclusive(params));
    }
    ensure(kw <= kv + 1e-10 && kv <= ks + 1e-10, || params)?;
    Ok(Verdict::Pass)
}

fn tucker_chain(c: &mut Case) -> CheckVerdict {
    let m = c.pick(2, 4);
    let (n, order, rank) = (c.pick(m + 1, 8), c.pick(3, 4), c.pick(1, 3));
    let (core, q) = lib(random_q_wd(n, m, order, rank, c.seed))?;
    let a = lib(embed_waring(&core, &q))?;
    let kw = lib(q_wd_condition(&core, &q))?.kappa;
    let kv = embedded_veronese(c, &a)?;
    let root_d = (order as f64).sqrt();
    let params = format!("m={m} n={n} D={order} R={rank}: kW={kw} kV={kv} sqrt(D)kW={}", root_d * kw);
    if unresolvable(kw.max(kv), 1e-9) {
        return Ok(Verdict::Inconclusive(params));
    }
    ensure(kw <= kv + 1e-9 && kv <= root_d * kw + 1e-9, || params)?;
    Ok(Verdict::Pass)
}

fn fast_path(c: &mut Case) -> CheckResult {
    let rank = c.pick(1, 4);
    let n = c.pick(rank + 2, 12);
    let dec = lib(random_waring(n, 3, rank, c.seed))?;
    let fast = lib(condition_waring_fast(&dec))?.kappa;
    let direct = lib(condition_veronese(&dec))?.kappa;
    ensure(same_kappa(direct, fast, 1e-9), || format!("n={n} R={rank}: direct {direct} fast {fast}"))
}

fn singular_value_union(c: &mut Case) -> CheckResult {
    let m = c.pick(2, 3);
    let (n, order, rank) = (c.pick(m + 1, 6), c.pick(3, 4), c.pick(1, 3));
    let (core, q) = lib(random_q_wd(n, m, order, rank, c.seed))?;
    let a = lib(embed_waring(&core, &q))?;
    let full = sorted(lib(singular_values(lib(terracini_veronese(&a))?.matrix()))?);
    let mut parts = lib(singular_values(lib(terracini_veronese(&core))?.matrix()))?;
    let dirs: Vec<UnitVector> = a.directions().cloned().collect();
    let perp = lib(orthocomplement_block(&dirs, &lib(orthogonal_complement(&q))?, order))?;
    parts.extend(lib(singular_values(&perp))?);
    let gap = max_gap(&full, &sorted(parts));
    ensure(gap <= 1e-9, || format!("m={m} n={n} D={order} R={rank}: gap {gap:e}"))
}

fn orthocomplement_gramian(c: &mut Case) -> CheckResult {
    let m = c.pick(2, 4);
    let (n, order, rank) = (c.pick(m + 1, 7), c.pick(3, 4), c.pick(1, 4));
    let (core, q) = lib(random_q_wd(n, m, order, rank, c.seed))?;
    let a = lib(embed_waring(&core, &q))?;
    let dirs: Vec<UnitVector> = a.directions().cloned().collect();
    let perp = lib(orthocomplement_block(&dirs, &lib(orthogonal_complement(&q))?, order))?;
    let core_dirs: Vec<UnitVector> = core.directions().cloned().collect();
    let predicted = lib(gramian_orthocomplement(&core_dirs, order, n))?;
    let gap = perp.gram().max_abs_diff(&predicted);
    ensure(gap <= 1e-12, || format!("m={m} n={n} D={order} R={rank}: gap {gap:e}"))
}

fn rank2_closed_form(c: &mut Case) -> CheckResult {
    let (n, order) = (c.pick(2, 6), c.pick(3, 5));
    let dec = lib(random_waring(n, order, 2, c.seed))?;
    let alpha = dec.terms()[0].direction().dot(dec.terms()[1].direction());
    let ks = lib(condition_segre(&dec))?.kappa;
    let kv = lib(condition_veronese(&dec))?.kappa;
    let closed = lib(rank2_condition(alpha, order))?.kappa;
    ensure(same_kappa(kv, ks, 1e-10) && same_kappa(closed, kv, 1e-9) && same_kappa(closed, ks, 1e-9), || {
        format!("n={n} D={order} alpha={alpha}: kS={ks} kV={kv} closed={closed}")
    })
}

fn rank2_blocks(c: &mut Case) -> CheckResult {
    let (n, order) = (c.pick(2, 5), c.pick(3, 5));
    let u = random_unit(&mut c.rng, n);
    let v = random_unit(&mut c.rng, n);
    let blocks = lib(rank2_block_split(&u, &v, order))?;
    let all = blocks.all();
    let mut cross = 0.0f64;
    for i in 0..all.len() {
        for j in (i + 1)..all.len() {
            cross = cross.max(lib(all[i].transpose_mul(all[j]))?.max_abs());
        }
    }
    ensure(cross <= 1e-11, || format!("n={n} D={order}: cross Gramian {cross:e}"))?;
    let joint =
        sorted(all.iter().map(|b| singular_values(b)).collect::<Result<Vec<_>>>().map_err(|e| e.to_string())?.concat());
    let dec = lib(WaringDecomposition::from_parts(
        n,
        order,
        vec![(1.0, u.as_slice().to_vec()), (1.0, v.as_slice().to_vec())],
    ))?;
    let segre = sorted(lib(singular_values(lib(terracini_segre(&dec))?.matrix()))?);
    let gap = max_gap(&joint, &segre);
    ensure(gap <= 1e-10, || format!("n={n} D={order}: spectrum gap {gap:e}"))?;
    // Symmetric tensors are orthogonal to every complement block.
    let x = random_unit(&mut c.rng, n);
    let px = lib(DenseMatrix::from_col_major(all[0].rows(), 1, lib(outer_power(&x, order))?))?;
    let leak = blocks
        .complements
        .iter()
        .map(|t| px.transpose_mul(t).map(|g| g.max_abs()))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| e.to_string())?
        .into_iter()
        .fold(0.0, f64::max);
    ensure(leak <= 1e-12, || format!("n={n} D={order}: symmetric leak {leak:e}"))
}

fn rank2_inequality(c: &mut Case) -> CheckResult {
    let order = c.pick(3, 8);
    let alpha: f64 = c.rng.random_range(-1.0..=1.0);
    let cf = lib(rank2_condition(alpha, order))?;
    ensure(cf.gs_extreme_eigs[0] <= cf.gperp_min() + 1e-15, || {
        format!("alpha={alpha} D={order}: min G_S {} > min G_perp {}", cf.gs_extreme_eigs[0], cf.gperp_min())
    })
}

fn rank2_dimension_independence(c: &mut Case) -> CheckResult {
    let order = c.pick(3, 5);
    let alpha: f64 = c.rng.random_range(-0.95..0.95);
    let make = |n: usize| -> std::result::Result<f64, String> {
        let mut v = vec![0.0; n];
        v[0] = alpha;
        v[n - 1] = (1.0 - alpha * alpha).sqrt();
        let mut u = vec![0.0; n];
        u[0] = 1.0;
        let dec = lib(WaringDecomposition::from_parts(
            n,
            order,
            vec![(1.0, u), (2.0, lib(UnitVector::normalize(v))?.into_vec())],
        ))?;
        Ok(lib(condition_veronese(&dec))?.kappa)
    };
    let (n1, n2) = (c.pick(2, 3), c.pick(4, 6));
    let (k1, k2) = (make(n1)?, make(n2)?);
    ensure(same_kappa(k1, k2, 1e-10), || format!("alpha={alpha} D={order}: n={n1} {k1} vs n={n2} {k2}"))
}

fn partial_symmetric_compression(c: &mut Case) -> CheckResult {
    let degree_sets = [[1, 1], [2, 1], [2, 2]];
    let degrees = degree_sets[c.pick(0, 2)].to_vec();
    let ms = vec![c.pick(2, 3), c.pick(2, 3)];
    let ns: Vec<usize> = ms.iter().map(|&m| c.pick(m + 1, 6)).collect();
    let rank = c.pick(1, 2);
    let core = lib(random_psrd(&ms, &degrees, rank, c.seed))?;
    let qs = ns
        .iter()
        .zip(&ms)
        .map(|(&n, &m)| random_orthonormal(&mut c.rng, n, m))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| e.to_string())?;
    let a = lib(embed_psrd(&core, &qs))?;
    let k_big = lib(condition_segre_veronese(&a))?.kappa;
    let k_core = lib(condition_segre_veronese(&core))?.kappa;
    let k_fast = lib(condition_psrd_fast(&a))?.kappa;
    let bound = (*degrees.iter().max().unwrap() as f64).sqrt() * k_core + 1e-9;
    let params = format!("m={ms:?} n={ns:?} d={degrees:?} R={rank}");
    ensure(k_big <= bound, || format!("{params}: {k_big} > {bound}"))?;
    ensure(same_kappa(k_big, k_fast, 1e-9), || format!("{params}: direct {k_big} fast {k_fast}"))
}

fn determinism(c: &mut Case) -> CheckResult {
    let (n, order, rank) = (c.pick(2, 5), c.pick(2, 4), c.pick(1, 3));
    let a = lib(random_waring(n, order, rank, c.seed))?;
    let b = lib(random_waring(n, order, rank, c.seed))?;
    ensure(a == b, || format!("n={n}: random_waring differs"))?;
    for dir in a.directions() {
        let (x, y) = (lib(sphere_tangent_basis(dir))?, lib(sphere_tangent_basis(dir))?);
        let bitwise = x.basis().as_slice().iter().zip(y.basis().as_slice()).all(|(p, q)| p.to_bits() == q.to_bits());
        ensure(bitwise, || format!("n={n}: tangent basis differs"))?;
    }
    let (s1, s2) = (lib(condition_segre(&a))?, lib(condition_segre(&b))?);
    ensure(s1.kappa.to_bits() == s2.kappa.to_bits(), || format!("n={n}: kappa {} vs {}", s1.kappa, s2.kappa))
}

fn kappa_sigma_consistency(c: &mut Case) -> CheckResult {
    let (n, order, rank) = (c.pick(2, 5), c.pick(2, 4), c.pick(1, 3));
    let dec = lib(random_waring(n, order, rank, c.seed))?;
    for rep in [lib(condition_segre(&dec))?, lib(condition_veronese(&dec))?] {
        if rep.kappa.is_finite() {
            let prod = rep.kappa * rep.sigma_min;
            ensure((prod - 1.0).abs() <= 1e-14, || format!("n={n} D={order} R={rank}: kappa*sigma = {prod}"))?;
        }
    }
    Ok(())
}

type Check = (&'static str, fn(&mut Case) -> CheckVerdict);

const CHECKS: &[Check] = &[
    ("weight-invariance", |c| weight_invariance(c).map(|()| Verdict::Pass)),
    ("basis-choice-invariance", |c| basis_invariance(c).map(|()| Verdict::Pass)),
    ("block-orthonormality", |c| block_orthonormality(c).map(|()| Verdict::Pass)),
    ("manifold-nesting", manifold_nesting),
    ("tucker-compression-chain", tucker_chain),
    ("fast-path-equivalence", |c| fast_path(c).map(|()| Verdict::Pass)),
    ("singular-value-union", |c| singular_value_union(c).map(|()| Verdict::Pass)),
    ("orthocomplement-gramian", |c| orthocomplement_gramian(c).map(|()| Verdict::Pass)),
    ("rank2-closed-form", |c| rank2_closed_form(c).map(|()| Verdict::Pass)),
    ("rank2-block-orthogonality", |c| rank2_blocks(c).map(|()| Verdict::Pass)),
    ("rank2-eigenvalue-inequality", |c| rank2_inequality(c).map(|()| Verdict::Pass)),
    ("rank2-dimension-independence", |c| rank2_dimension_independence(c).map(|()| Verdict::Pass)),
    ("partially-symmetric-compression", |c| partial_symmetric_compression(c).map(|()| Verdict::Pass)),
    ("determinism", |c| determinism(c).map(|()| Verdict::Pass)),
    ("kappa-sigma-consistency", |c| kappa_sigma_consistency(c).map(|()| Verdict::Pass)),
];

/// Names of the checks run by [`verify_suite`], in order.
pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|(name, _)| *name).collect()
}

/// Runs every check on `cases` random instances.
pub fn verify_suite(cfg: &VerifyConfig) -> VerifyReport {
    let mut warnings = Vec::new();
    if cfg.cases == 0 {
        warnings.push("zero cases requested; nothing was checked".to_string());
    }
    let checks = CHECKS
        .iter()
        .enumerate()
        .map(|(id, (name, check))| {
            let mut outcome = CheckOutcome { name, passed: 0, inconclusive: Vec::new(), failures: Vec::new() };
            for case in 0..cfg.cases {
                let seed = derive_seed(cfg.seed, &[id as u64, case as u64]);
                let mut ctx = Case { rng: rng_from_seed(seed), seed, corrupt: cfg.corrupt_tangent_basis };
                match check(&mut ctx) {
                    Ok(Verdict::Pass) => outcome.passed += 1,
                    Ok(Verdict::Inconclusive(msg)) => {
                        outcome.inconclusive.push(format!("case {case} (seed {seed}): {msg}"))
                    }
                    Err(msg) => outcome.failures.push(format!("case {case} (seed {seed}): {msg}")),
                }
            }
            outcome
        })
        .collect();
    VerifyReport { checks, warnings }
}

//! Condition numbers from Terracini matrices, `kappa = 1 / sigma_min(T)`,
//! and the compressed fast path for Waring and partially symmetric
//! decompositions.
//!
//! The fast path rests on the invariance of the condition number under
//! non-minimal symmetric Tucker compressions: with the thin SVD
//! `[a_1 ... a_R] = Q S V^T` and `g_r` the columns of `S V^T`, the Waring
//! decomposition with directions `b_r = [g_r; 0]` in `R^{R+1}` has the same
//! condition number as the original one on `R^n`, whenever `n > R`.

use std::time::{Duration, Instant};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::tensor::{DenseMatrix, UnitVector, ORTHONORMAL_TOL};
use crate::terracini::{
    terracini_segre, terracini_segre_veronese, terracini_veronese, Manifold, PsrdDecomposition, PsrdTerm,
    SymmetricTerm, TerraciniMatrix, WaringDecomposition,
};

/// Relative numerical-rank tolerance: `kappa = inf` when
/// `sigma_min <= RANK_TOL * sigma_max * max(rows, cols)`.
pub const RANK_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    DirectSegre,
    DirectVeronese,
    DirectSegreVeronese,
    CompressedVeronese,
    CompressedSegreVeronese,
    ClosedFormRank2,
}

impl Method {
    fn direct(manifold: Manifold) -> Self {
        match manifold {
            Manifold::Segre => Method::DirectSegre,
            Manifold::Veronese => Method::DirectVeronese,
            Manifold::SegreVeronese => Method::DirectSegreVeronese,
        }
    }
}

fn serialize_extended<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else {
        s.serialize_str(&x.to_string())
    }
}

fn serialize_secs<S: Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

/// Result of one condition-number computation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionReport {
    #[serde(serialize_with = "serialize_extended")]
    pub kappa: f64,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub method: Method,
    pub ambient_dim: usize,
    pub total_cols: usize,
    /// Wall-clock time of matrix construction plus SVD.
    #[serde(rename = "elapsed_s", serialize_with = "serialize_secs")]
    pub elapsed: Duration,
}

impl ConditionReport {
    pub fn is_finite(&self) -> bool {
        self.kappa.is_finite()
    }
}

/// All singular values of `m`, in nonincreasing order.
pub fn singular_values(m: &DenseMatrix) -> Result<Vec<f64>> {
    if m.rows() == 0 || m.cols() == 0 {
        return Err(Error::InvalidArgument("empty matrix has no singular values".into()));
    }
    m.as_faer().singular_values().map_err(|_| Error::SvdNoConvergence)
}

/// Smallest of the `min(rows, cols)` singular values of `m`.
pub fn sigma_min(m: &DenseMatrix) -> Result<f64> {
    Ok(*singular_values(m)?.last().expect("nonempty"))
}

fn kappa_from(sigma_min: f64, sigma_max: f64, rows: usize, cols: usize) -> f64 {
    if sigma_min <= RANK_TOL * sigma_max * rows.max(cols) as f64 {
        f64::INFINITY
    } else {
        1.0 / sigma_min
    }
}

fn report(t: &DenseMatrix, method: Method, started: Instant) -> Result<ConditionReport> {
    let sv = singular_values(t)?;
    let sigma_max = sv[0];
    // A wide matrix has a nontrivial kernel: its n-th singular value is zero.
    let sigma_min = if t.cols() > t.rows() { 0.0 } else { *sv.last().expect("nonempty") };
    Ok(ConditionReport {
        kappa: kappa_from(sigma_min, sigma_max, t.rows(), t.cols()),
        sigma_min,
        sigma_max,
        method,
        ambient_dim: t.rows(),
        total_cols: t.cols(),
        elapsed: started.elapsed(),
    })
}

/// `kappa = 1 / sigma_min(T)`, or infinity below the rank tolerance. The
/// elapsed time covers the SVD only.
pub fn condition_from_terracini(t: &TerraciniMatrix) -> Result<ConditionReport> {
    report(t.matrix(), Method::direct(t.manifold()), Instant::now())
}

/// Direct condition number of the Waring decomposition read as a CPD.
pub fn condition_segre(dec: &WaringDecomposition) -> Result<ConditionReport> {
    let start = Instant::now();
    let t = terracini_segre(dec)?;
    report(t.matrix(), Method::DirectSegre, start)
}

/// Direct condition number of the Waring decomposition.
pub fn condition_veronese(dec: &WaringDecomposition) -> Result<ConditionReport> {
    let start = Instant::now();
    let t = terracini_veronese(dec)?;
    report(t.matrix(), Method::DirectVeronese, start)
}

/// Direct condition number of a partially symmetric decomposition.
pub fn condition_segre_veronese(dec: &PsrdDecomposition) -> Result<ConditionReport> {
    let start = Instant::now();
    let t = terracini_segre_veronese(dec)?;
    report(t.matrix(), Method::DirectSegreVeronese, start)
}

/// A Waring decomposition compressed onto the span of its directions.
#[derive(Clone, Debug, PartialEq)]
pub struct CompressedWd {
    /// `n x m` with orthonormal columns, `m = R`.
    pub q: DenseMatrix,
    /// Directions `g_r` in `R^m` with `Q g_r = a_r`.
    pub core: WaringDecomposition,
    /// Directions `b_r = [g_r; 0]` in `R^{m+1}`.
    pub padded: WaringDecomposition,
}

/// Thin SVD of the `n x R` factor matrix `[f_1 ... f_R]`. Returns `Q` and the
/// columns of `S V^T` normalized to the unit sphere.
fn compress_factors(factors: &[&UnitVector]) -> Result<(DenseMatrix, Vec<UnitVector>)> {
    let n = factors[0].len();
    let rank = factors.len();
    if n <= rank {
        return Err(Error::FastPathInapplicable { dim: n, rank });
    }
    let cols: Vec<&[f64]> = factors.iter().map(|a| a.as_slice()).collect();
    let a = DenseMatrix::from_columns(n, &cols)?;
    let svd = a.as_faer().thin_svd().map_err(|_| Error::SvdNoConvergence)?;
    let q = DenseMatrix::from_faer(svd.U());
    let s = svd.S().column_vector();
    let v = svd.V();
    let core = (0..rank)
        .map(|r| UnitVector::normalize((0..rank).map(|i| s[i] * v[(r, i)]).collect()))
        .collect::<Result<Vec<_>>>()?;
    Ok((q, core))
}

fn pad(g: &UnitVector) -> UnitVector {
    let mut b = g.as_slice().to_vec();
    b.push(0.0);
    UnitVector::new(b).expect("padding preserves the norm")
}

/// Steps 1–2 of the fast path: thin SVD of the factor matrix, `m = R`, no
/// truncation, then zero padding to `R^{m+1}`. Requires `n > R`.
pub fn compress_waring(dec: &WaringDecomposition) -> Result<CompressedWd> {
    let dirs: Vec<&UnitVector> = dec.directions().collect();
    let (q, core_dirs) = compress_factors(&dirs)?;
    let m = q.cols();
    let weights = dec.terms().iter().map(SymmetricTerm::weight);
    let core_terms =
        weights.clone().zip(&core_dirs).map(|(w, g)| SymmetricTerm::new(w, g.clone())).collect::<Result<Vec<_>>>()?;
    let padded_terms =
        weights.zip(&core_dirs).map(|(w, g)| SymmetricTerm::new(w, pad(g))).collect::<Result<Vec<_>>>()?;
    Ok(CompressedWd {
        core: WaringDecomposition::new(m, dec.order(), core_terms)?,
        padded: WaringDecomposition::new(m + 1, dec.order(), padded_terms)?,
        q,
    })
}

/// Condition number of a Waring decomposition computed on its compression
/// to `R^{R+1}`. Cost `O(n R^2 + R^{D+4})` instead of `O(n^{D+2} R^2)`.
pub fn condition_waring_fast(dec: &WaringDecomposition) -> Result<ConditionReport> {
    let start = Instant::now();
    if dec.n() < 2 {
        return Err(Error::TrivialTangentSpace { dim: dec.n() });
    }
    let compressed = compress_waring(dec)?;
    let t = terracini_veronese(&compressed.padded)?;
    report(t.matrix(), Method::CompressedVeronese, start)
}

/// Per-group compression of a partially symmetric decomposition: each group
/// is compressed to `m_k = R` dimensions and padded to `R + 1`.
pub fn compress_psrd(dec: &PsrdDecomposition) -> Result<PsrdDecomposition> {
    let rank = dec.rank();
    let groups = dec.sizes().len();
    let mut per_group = Vec::with_capacity(groups);
    for k in 0..groups {
        let factors: Vec<&UnitVector> = dec.terms().iter().map(|t| &t.directions()[k]).collect();
        let (_, core) = compress_factors(&factors)?;
        per_group.push(core.iter().map(pad).collect::<Vec<_>>());
    }
    let terms = dec
        .terms()
        .iter()
        .enumerate()
        .map(|(r, t)| PsrdTerm::new(t.weight(), per_group.iter().map(|g| g[r].clone()).collect()))
        .collect::<Result<Vec<_>>>()?;
    PsrdDecomposition::new(vec![rank + 1; groups], dec.degrees().to_vec(), terms)
}

/// Compressed condition number of a partially symmetric decomposition.
/// Requires `n_k > R` for every group.
pub fn condition_psrd_fast(dec: &PsrdDecomposition) -> Result<ConditionReport> {
    let start = Instant::now();
    let padded = compress_psrd(dec)?;
    let t = terracini_segre_veronese(&padded)?;
    report(t.matrix(), Method::CompressedSegreVeronese, start)
}

/// Checks that `q` has orthonormal columns within [`ORTHONORMAL_TOL`].
pub fn check_orthonormal(q: &DenseMatrix) -> Result<()> {
    if q.cols() > q.rows() {
        return Err(Error::DimensionMismatch { expected: q.rows(), found: q.cols() });
    }
    let deviation = q.orthonormality_defect();
    if deviation > ORTHONORMAL_TOL {
        return Err(Error::NotOrthonormal { deviation });
    }
    Ok(())
}

/// The Waring decomposition `sum_r alpha_r (Q g_r)^{⊗D}` on `R^n`.
pub fn embed_waring(core: &WaringDecomposition, q: &DenseMatrix) -> Result<WaringDecomposition> {
    check_orthonormal(q)?;
    if q.cols() != core.n() {
        return Err(Error::DimensionMismatch { expected: core.n(), found: q.cols() });
    }
    let terms = core
        .terms()
        .iter()
        .map(|t| {
            let g = DenseMatrix::from_col_major(core.n(), 1, t.direction().as_slice().to_vec())?;
            let a = q.mul(&g)?;
            SymmetricTerm::new(t.weight(), UnitVector::normalize(a.column(0).to_vec())?)
        })
        .collect::<Result<Vec<_>>>()?;
    WaringDecomposition::new(q.rows(), core.order(), terms)
}

/// The partially symmetric decomposition with group `k` mapped by `qs[k]`.
pub fn embed_psrd(core: &PsrdDecomposition, qs: &[DenseMatrix]) -> Result<PsrdDecomposition> {
    if qs.len() != core.sizes().len() {
        return Err(Error::DimensionMismatch { expected: core.sizes().len(), found: qs.len() });
    }
    for (q, &m) in qs.iter().zip(core.sizes()) {
        check_orthonormal(q)?;
        if q.cols() != m {
            return Err(Error::DimensionMismatch { expected: m, found: q.cols() });
        }
    }
    let terms = core
        .terms()
        .iter()
        .map(|t| {
            let dirs = t
                .directions()
                .iter()
                .zip(qs)
                .map(|(g, q)| {
                    let g = DenseMatrix::from_col_major(g.len(), 1, g.as_slice().to_vec())?;
                    UnitVector::normalize(q.mul(&g)?.column(0).to_vec())
                })
                .collect::<Result<Vec<_>>>()?;
            PsrdTerm::new(t.weight(), dirs)
        })
        .collect::<Result<Vec<_>>>()?;
    PsrdDecomposition::new(qs.iter().map(DenseMatrix::rows).collect(), core.degrees().to_vec(), terms)
}

/// Condition number of the Q-compressed Waring decomposition with core
/// `core` on `R^m` and Tucker factor `q` (`n x m`, orthonormal columns).
///
/// `Q^{⊗D}` is an isometry from the Veronese manifold on `R^m` onto its
/// image, so this equals the Veronese condition number of the core.
pub fn q_wd_condition(core: &WaringDecomposition, q: &DenseMatrix) -> Result<ConditionReport> {
    check_orthonormal(q)?;
    if q.cols() != core.n() {
        return Err(Error::DimensionMismatch { expected: core.n(), found: q.cols() });
    }
    condition_veronese(core)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(v: &[f64]) -> UnitVector {
        UnitVector::normalize(v.to_vec()).unwrap()
    }

    fn wd(order: usize, dirs: &[&[f64]]) -> WaringDecomposition {
        let n = dirs[0].len();
        let terms = dirs.iter().map(|d| SymmetricTerm::new(1.0, unit(d)).unwrap()).collect();
        WaringDecomposition::new(n, order, terms).unwrap()
    }

    #[test]
    fn sigma_min_diagonal_cases() {
        assert_eq!(sigma_min(&DenseMatrix::identity(3)).unwrap(), 1.0);
        let d = DenseMatrix::from_row_major(3, 3, &[3.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.5]).unwrap();
        assert!((sigma_min(&d).unwrap() - 0.5).abs() < 1e-15);
        assert!(singular_values(&DenseMatrix::zeros(0, 3).unwrap()).is_err());
    }

    #[test]
    fn sigma_min_matches_gram_eigen_oracle() {
        // Fixed pseudo-random 20x7 matrix.
        let mut state = 12345u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let m = DenseMatrix::from_fn(20, 7, |_, _| next()).unwrap();
        let lam = m.gram().symmetric_eigenvalues().unwrap();
        let sv = singular_values(&m).unwrap();
        assert!((sv[6] - lam[0].sqrt()).abs() < 1e-10 * sv[0]);
    }

    #[test]
    fn rank_one_is_perfectly_conditioned() {
        let dec = wd(3, &[&[0.3, 0.4, -0.2, 0.8]]);
        let rep = condition_from_terracini(&terracini_veronese(&dec).unwrap()).unwrap();
        assert!((rep.kappa - 1.0).abs() < 1e-12);
        assert!((rep.kappa * rep.sigma_min - 1.0).abs() < 1e-15);
        assert_eq!(rep.method, Method::DirectVeronese);
    }

    #[test]
    fn orthogonal_pair_segre_is_one() {
        let dec = wd(3, &[&[1.0, 2.0, 0.0], &[2.0, -1.0, 0.0]]);
        let rep = condition_segre(&dec).unwrap();
        assert!((rep.kappa - 1.0).abs() < 1e-10);
    }

    #[test]
    fn duplicated_summand_is_ill_posed() {
        let dec = wd(3, &[&[0.3, 0.4, -0.2], &[0.3, 0.4, -0.2]]);
        let rep = condition_veronese(&dec).unwrap();
        assert!(rep.kappa.is_infinite());
    }

    #[test]
    fn compress_rank_one_basis_vector() {
        let dec = wd(3, &[&[1.0, 0.0, 0.0, 0.0, 0.0]]);
        let c = compress_waring(&dec).unwrap();
        assert_eq!(c.q.cols(), 1);
        assert!((c.core.terms()[0].direction().as_slice()[0].abs() - 1.0).abs() < 1e-15);
        let b = c.padded.terms()[0].direction().as_slice();
        assert_eq!(b.len(), 2);
        assert!((b[0].abs() - 1.0).abs() < 1e-15 && b[1] == 0.0);
    }

    #[test]
    fn compress_keeps_full_rank_on_dependent_directions() {
        let a1 = [1.0, 0.0, 0.0, 0.0, 0.2];
        let a2 = [0.0, 1.0, 0.0, 0.3, 0.0];
        let a3: Vec<f64> = a1.iter().zip(&a2).map(|(x, y)| 0.6 * x - 1.1 * y).collect();
        let dec = wd(3, &[&a1, &a2, &a3]);
        let c = compress_waring(&dec).unwrap();
        assert_eq!(c.q.cols(), 3);
        assert!(c.core.terms()[2].direction().as_slice()[2].abs() < 1e-10);
    }

    #[test]
    fn compress_rejects_rank_at_least_n() {
        let dec = wd(3, &[&[1.0, 0.0], &[0.0, 1.0]]);
        assert!(matches!(compress_waring(&dec), Err(Error::FastPathInapplicable { dim: 2, rank: 2 })));
        assert!(matches!(condition_waring_fast(&dec), Err(Error::FastPathInapplicable { .. })));
    }

    #[test]
    fn fast_path_reconstructs_directions() {
        let dec = wd(3, &[&[0.2, -0.3, 0.5, 0.1, 0.9, 0.0, 0.3], &[0.7, 0.1, -0.2, 0.4, 0.0, 0.5, -0.1]]);
        let c = compress_waring(&dec).unwrap();
        assert!(c.q.orthonormality_defect() < 1e-12);
        for (t, a) in c.core.terms().iter().zip(dec.directions()) {
            let g = DenseMatrix::from_col_major(2, 1, t.direction().as_slice().to_vec()).unwrap();
            let qa = c.q.mul(&g).unwrap();
            let err = qa.column(0).iter().zip(a.as_slice()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            assert!(err < 1e-12);
        }
        let fast = condition_waring_fast(&dec).unwrap();
        let direct = condition_veronese(&dec).unwrap();
        assert!((fast.kappa - direct.kappa).abs() <= 1e-9 * direct.kappa);
        assert_eq!(fast.method, Method::CompressedVeronese);
        assert_eq!(fast.ambient_dim, 27);
    }

    #[test]
    fn q_wd_identity_factor_is_plain_veronese() {
        let core = wd(3, &[&[0.6, 0.8, 0.0], &[0.0, 0.6, 0.8]]);
        let q = DenseMatrix::identity(3);
        let a = q_wd_condition(&core, &q).unwrap();
        let b = condition_veronese(&embed_waring(&core, &q).unwrap()).unwrap();
        assert_eq!(a.kappa, b.kappa);
        let bad = DenseMatrix::identity(3).scaled(2.0);
        assert!(matches!(q_wd_condition(&core, &bad), Err(Error::NotOrthonormal { .. })));
    }

    #[test]
    fn report_serializes_infinite_kappa() {
        let dec = wd(3, &[&[0.3, 0.4, -0.2], &[0.3, 0.4, -0.2]]);
        let rep = condition_veronese(&dec).unwrap();
        let json = serde_json::to_value(&rep).unwrap();
        assert_eq!(json["kappa"], "inf");
        assert_eq!(json["method"], "direct-veronese");
    }
}

//! Closed-form spectra for rank-two Waring decompositions and the Gramian of
//! the orthogonal-complement block, used as oracles for the SVD path.
//!
//! For `A = l_1 u^{⊗D} + l_2 v^{⊗D}` with `alpha = <u, v>`, a Helmert change
//! of basis splits the Segre Terracini matrix into the Veronese Terracini
//! matrix and `D - 1` mutually orthogonal complement blocks. The Gramian of
//! the Veronese part has eigenvalues `1 ± sigma(Z)`, and every complement
//! block has Gramian `G_perp` with eigenvalues `1 ± alpha^{D-1}`,
//! `1 ± alpha^{D-2}`.

use crate::error::{Error, Result};
use crate::tensor::{helmert_matrix, mode_insert, outer_power, sphere_tangent_basis, DenseMatrix, UnitVector};

/// Closed-form spectral data of a rank-two Waring decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct Rank2ClosedForm {
    pub alpha: f64,
    pub order: usize,
    /// `[1 + a^{D-1}, 1 - a^{D-1}, 1 + a^{D-2}, 1 - a^{D-2}]`.
    pub gperp_eigs: [f64; 4],
    /// `(D - 1)(1 - a^2)`.
    pub tau: f64,
    /// `-a^2`.
    pub delta: f64,
    /// `(a^{D-2} / 2)(tau ± sqrt(tau^2 - 4 delta))`.
    pub zprime_eigs: [f64; 2],
    /// Smallest and largest eigenvalue of the Veronese Gramian `G_S`.
    pub gs_extreme_eigs: [f64; 2],
    pub kappa: f64,
}

impl Rank2ClosedForm {
    /// Singular values of `Z` for ambient dimension `n`: `|lambda(Z')|` and
    /// `n - 2` copies of `|alpha|^{D-1}`.
    fn z_singular_values(&self, n: usize) -> Vec<f64> {
        let mut s: Vec<f64> = self.zprime_eigs.iter().map(|x| x.abs()).collect();
        s.extend(std::iter::repeat(self.alpha.abs().powi(self.order as i32 - 1)).take(n.saturating_sub(2)));
        s
    }

    /// Full spectrum of the `2n x 2n` Gramian of the Veronese Terracini
    /// matrix, sorted ascending.
    pub fn gs_spectrum(&self, n: usize) -> Vec<f64> {
        let mut eigs: Vec<f64> = self.z_singular_values(n).iter().flat_map(|s| [1.0 - s, 1.0 + s]).collect();
        eigs.sort_by(f64::total_cmp);
        eigs
    }

    /// Full spectrum of the `2(n-1) x 2(n-1)` Gramian of one complement
    /// block, sorted ascending.
    pub fn gperp_spectrum(&self, n: usize) -> Vec<f64> {
        let mut eigs = vec![self.gperp_eigs[2], self.gperp_eigs[3]];
        for _ in 0..n.saturating_sub(2) {
            eigs.extend([self.gperp_eigs[0], self.gperp_eigs[1]]);
        }
        eigs.sort_by(f64::total_cmp);
        eigs
    }

    /// Smallest eigenvalue of `G_perp`, `1 - |alpha|^{D-2}`.
    pub fn gperp_min(&self) -> f64 {
        self.gperp_eigs.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Condition number (Segre and Veronese alike) of any rank-two Waring
/// decomposition whose unit directions have inner product `alpha`.
pub fn rank2_condition(alpha: f64, order: usize) -> Result<Rank2ClosedForm> {
    if order < 3 {
        return Err(Error::OrderTooSmall { min: 3, got: order });
    }
    if !alpha.is_finite() || alpha.abs() > 1.0 + 1e-12 {
        return Err(Error::InvalidArgument(format!("inner product {alpha} outside [-1, 1]")));
    }
    let alpha = alpha.clamp(-1.0, 1.0);
    let d = order as i32;
    let p1 = alpha.powi(d - 1);
    let p2 = alpha.powi(d - 2);
    let gperp_eigs = [1.0 + p1, 1.0 - p1, 1.0 + p2, 1.0 - p2];
    let tau = (order as f64 - 1.0) * (1.0 - alpha * alpha);
    let delta = -alpha * alpha;
    let root = (tau * tau - 4.0 * delta).sqrt();
    let zprime_eigs = [p2 / 2.0 * (tau + root), p2 / 2.0 * (tau - root)];

    let sigma_z = [p1.abs(), zprime_eigs[0].abs(), zprime_eigs[1].abs()];
    let s_max = sigma_z.iter().copied().fold(0.0, f64::max);
    let gs_extreme_eigs = [1.0 - s_max, 1.0 + s_max];
    let kappa =
        if alpha.abs() == 1.0 || gs_extreme_eigs[0] <= 0.0 { f64::INFINITY } else { gs_extreme_eigs[0].powf(-0.5) };
    Ok(Rank2ClosedForm { alpha, order, gperp_eigs, tau, delta, zprime_eigs, gs_extreme_eigs, kappa })
}

/// Predicted Gramian `(T^⊥)^T T^⊥` of the complement block for core
/// directions `g_r` in `R^m` embedded in `R^n`: block `(r1, r2)` is
/// `<g_r1, g_r2>^{D-1} I_{n-m}`.
pub fn gramian_orthocomplement(dirs: &[UnitVector], order: usize, n: usize) -> Result<DenseMatrix> {
    if order < 2 {
        return Err(Error::OrderTooSmall { min: 2, got: order });
    }
    let m = dirs.first().ok_or(Error::EmptyDecomposition)?.len();
    if let Some(g) = dirs.iter().find(|g| g.len() != m) {
        return Err(Error::DimensionMismatch { expected: m, found: g.len() });
    }
    if n <= m {
        return Err(Error::InvalidArgument(format!("ambient dimension {n} must exceed core dimension {m}")));
    }
    let p = n - m;
    let rank = dirs.len();
    DenseMatrix::from_fn(rank * p, rank * p, |i, j| {
        if i % p != j % p {
            return 0.0;
        }
        dirs[i / p].dot(&dirs[j / p]).powi(order as i32 - 1)
    })
}

/// The Helmert split of the rank-two Segre Terracini matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Rank2Blocks {
    /// `[u^{⊗D}, S_u, v^{⊗D}, S_v]`, the Veronese Terracini matrix.
    pub veronese: DenseMatrix,
    /// `T_perp^j = [S^j_{u,⊥}, S^j_{v,⊥}]` for `j = 1..D-1`.
    pub complements: Vec<DenseMatrix>,
}

impl Rank2Blocks {
    pub fn all(&self) -> Vec<&DenseMatrix> {
        std::iter::once(&self.veronese).chain(&self.complements).collect()
    }
}

/// Splits the Segre Terracini matrix of `(u, v)` by right-multiplying each
/// summand's tangent columns with `Q_D ⊗ I`, `Q_D` the Helmert matrix.
pub fn rank2_block_split(u: &UnitVector, v: &UnitVector, order: usize) -> Result<Rank2Blocks> {
    if order < 3 {
        return Err(Error::OrderTooSmall { min: 3, got: order });
    }
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch { expected: u.len(), found: v.len() });
    }
    if u.dot(v).abs() >= 1.0 - 1e-14 {
        return Err(Error::InvalidArgument("directions must not be parallel".into()));
    }
    let helmert = helmert_matrix(order)?;
    let mut veronese_parts = Vec::new();
    let mut complement_parts: Vec<Vec<DenseMatrix>> = vec![Vec::new(); order - 1];
    for a in [u, v] {
        let basis = sphere_tangent_basis(a)?;
        let inserts = (1..=order).map(|d| mode_insert(basis.basis(), a, d, order)).collect::<Result<Vec<_>>>()?;
        let mixed = |j: usize| -> Result<DenseMatrix> {
            let mut out = DenseMatrix::zeros(inserts[0].rows(), inserts[0].cols())?;
            for (d, ins) in inserts.iter().enumerate() {
                let w = helmert.get(d, j);
                for c in 0..ins.cols() {
                    out.column_mut(c).iter_mut().zip(ins.column(c)).for_each(|(o, x)| *o += w * x);
                }
            }
            Ok(out)
        };
        let point = DenseMatrix::from_col_major(inserts[0].rows(), 1, outer_power(a, order)?)?;
        veronese_parts.push(point);
        veronese_parts.push(mixed(0)?);
        for (j, part) in complement_parts.iter_mut().enumerate() {
            part.push(mixed(j + 1)?);
        }
    }
    let veronese = DenseMatrix::hcat(&veronese_parts.iter().collect::<Vec<_>>())?;
    let complements = complement_parts
        .iter()
        .map(|p| DenseMatrix::hcat(&p.iter().collect::<Vec<_>>()))
        .collect::<Result<Vec<_>>>()?;
    Ok(Rank2Blocks { veronese, complements })
}

//! Terracini matrices of the Segre, Veronese and Segre–Veronese manifolds.
//!
//! Each summand contributes an orthonormal basis of the tangent space of its
//! manifold at that summand. Blocks are laid out summand by summand; inside a
//! block the point column `a^{⊗D}` comes first, followed by the tangent
//! columns. Weights never enter the matrices.

use std::ops::Range;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::tensor::{kron_into, power, sphere_tangent_basis, DenseMatrix, TangentBasis, UnitVector};

/// One Waring summand `weight * direction^{⊗D}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricTerm {
    weight: f64,
    direction: UnitVector,
}

impl SymmetricTerm {
    pub fn new(weight: f64, direction: UnitVector) -> Result<Self> {
        if weight == 0.0 || !weight.is_finite() {
            return Err(Error::InvalidWeight(weight));
        }
        Ok(Self { weight, direction })
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn direction(&self) -> &UnitVector {
        &self.direction
    }
}

/// A Waring decomposition `sum_r alpha_r a_r^{⊗D}` of an order-`D` tensor on `R^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct WaringDecomposition {
    n: usize,
    order: usize,
    terms: Vec<SymmetricTerm>,
}

impl WaringDecomposition {
    pub fn new(n: usize, order: usize, terms: Vec<SymmetricTerm>) -> Result<Self> {
        if order < 2 {
            return Err(Error::OrderTooSmall { min: 2, got: order });
        }
        if terms.is_empty() {
            return Err(Error::EmptyDecomposition);
        }
        if let Some(t) = terms.iter().find(|t| t.direction.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: t.direction.len() });
        }
        Ok(Self { n, order, terms })
    }

    /// Builds a decomposition from raw `(weight, direction)` pairs; directions
    /// must already be unit vectors.
    pub fn from_parts(n: usize, order: usize, parts: Vec<(f64, Vec<f64>)>) -> Result<Self> {
        let terms =
            parts.into_iter().map(|(w, d)| SymmetricTerm::new(w, UnitVector::new(d)?)).collect::<Result<Vec<_>>>()?;
        Self::new(n, order, terms)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[SymmetricTerm] {
        &self.terms
    }

    pub fn directions(&self) -> impl Iterator<Item = &UnitVector> {
        self.terms.iter().map(|t| &t.direction)
    }

    /// Same directions with new weights.
    pub fn with_weights(&self, weights: &[f64]) -> Result<Self> {
        if weights.len() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), found: weights.len() });
        }
        let terms = self
            .terms
            .iter()
            .zip(weights)
            .map(|(t, &w)| SymmetricTerm::new(w, t.direction.clone()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.n, self.order, terms)
    }

    /// The dense tensor `sum_r alpha_r a_r^{⊗D}`.
    pub fn to_tensor(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n.pow(self.order as u32)];
        for t in &self.terms {
            let p = power(t.direction.as_slice(), self.order);
            out.iter_mut().zip(&p).for_each(|(o, x)| *o += t.weight * x);
        }
        out
    }
}

/// One partially symmetric summand `weight * a_1^{⊗d_1} ⊗ ... ⊗ a_K^{⊗d_K}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PsrdTerm {
    weight: f64,
    directions: Vec<UnitVector>,
}

impl PsrdTerm {
    pub fn new(weight: f64, directions: Vec<UnitVector>) -> Result<Self> {
        if weight == 0.0 || !weight.is_finite() {
            return Err(Error::InvalidWeight(weight));
        }
        if directions.is_empty() {
            return Err(Error::InvalidDecomposition("a term needs at least one factor".into()));
        }
        Ok(Self { weight, directions })
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn directions(&self) -> &[UnitVector] {
        &self.directions
    }
}

/// A partially symmetric rank decomposition with factor groups of sizes
/// `n_k` and degrees `d_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct PsrdDecomposition {
    sizes: Vec<usize>,
    degrees: Vec<usize>,
    terms: Vec<PsrdTerm>,
}

impl PsrdDecomposition {
    pub fn new(sizes: Vec<usize>, degrees: Vec<usize>, terms: Vec<PsrdTerm>) -> Result<Self> {
        if sizes.is_empty() || sizes.len() != degrees.len() {
            return Err(Error::InvalidDecomposition(format!("{} sizes but {} degrees", sizes.len(), degrees.len())));
        }
        if degrees.contains(&0) {
            return Err(Error::InvalidDecomposition("degrees must be positive".into()));
        }
        let order: usize = degrees.iter().sum();
        if order < 2 {
            return Err(Error::OrderTooSmall { min: 2, got: order });
        }
        if terms.is_empty() {
            return Err(Error::EmptyDecomposition);
        }
        for t in &terms {
            if t.directions.len() != sizes.len() {
                return Err(Error::DimensionMismatch { expected: sizes.len(), found: t.directions.len() });
            }
            for (a, &n) in t.directions.iter().zip(&sizes) {
                if a.len() != n {
                    return Err(Error::DimensionMismatch { expected: n, found: a.len() });
                }
            }
        }
        Ok(Self { sizes, degrees, terms })
    }

    /// The one-group view of a Waring decomposition.
    pub fn from_waring(dec: &WaringDecomposition) -> Self {
        let terms =
            dec.terms.iter().map(|t| PsrdTerm { weight: t.weight, directions: vec![t.direction.clone()] }).collect();
        Self { sizes: vec![dec.n], degrees: vec![dec.order], terms }
    }

    /// The Waring decomposition read as a CPD: `D` groups of degree one, each
    /// carrying the same direction.
    pub fn cpd_from_waring(dec: &WaringDecomposition) -> Self {
        let terms = dec
            .terms
            .iter()
            .map(|t| PsrdTerm { weight: t.weight, directions: vec![t.direction.clone(); dec.order] })
            .collect();
        Self { sizes: vec![dec.n; dec.order], degrees: vec![1; dec.order], terms }
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn terms(&self) -> &[PsrdTerm] {
        &self.terms
    }

    pub fn rank(&self) -> usize {
        self.terms.len()
    }

    pub fn order(&self) -> usize {
        self.degrees.iter().sum()
    }

    pub fn ambient_dim(&self) -> usize {
        self.sizes.iter().zip(&self.degrees).map(|(&n, &d)| n.pow(d as u32)).product()
    }

    pub fn with_weights(&self, weights: &[f64]) -> Result<Self> {
        if weights.len() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), found: weights.len() });
        }
        let terms = self
            .terms
            .iter()
            .zip(weights)
            .map(|(t, &w)| PsrdTerm::new(w, t.directions.clone()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.sizes.clone(), self.degrees.clone(), terms)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Manifold {
    Segre,
    Veronese,
    SegreVeronese,
}

/// A Terracini matrix together with the column span of each summand's block.
#[derive(Clone, Debug, PartialEq)]
pub struct TerraciniMatrix {
    matrix: DenseMatrix,
    manifold: Manifold,
    block_ranges: Vec<Range<usize>>,
}

impl TerraciniMatrix {
    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> DenseMatrix {
        self.matrix
    }

    pub fn manifold(&self) -> Manifold {
        self.manifold
    }

    pub fn block_ranges(&self) -> &[Range<usize>] {
        &self.block_ranges
    }

    pub fn ambient_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn total_cols(&self) -> usize {
        self.matrix.cols()
    }

    /// The columns belonging to summand `r`.
    pub fn block(&self, r: usize) -> DenseMatrix {
        self.matrix.column_range(self.block_ranges[r].clone())
    }
}

fn default_bases<'a>(dirs: impl Iterator<Item = &'a UnitVector>) -> Result<Vec<TangentBasis>> {
    dirs.map(sphere_tangent_basis).collect()
}

fn check_bases(dec: &WaringDecomposition, bases: &[TangentBasis]) -> Result<()> {
    if bases.len() != dec.rank() {
        return Err(Error::DimensionMismatch { expected: dec.rank(), found: bases.len() });
    }
    for b in bases {
        if b.basis().rows() != dec.n || b.basis().cols() + 1 != dec.n {
            return Err(Error::DimensionMismatch { expected: dec.n, found: b.basis().rows() });
        }
    }
    Ok(())
}

/// Terracini matrix of the Veronese manifold, `n^D x R n`.
pub fn terracini_veronese(dec: &WaringDecomposition) -> Result<TerraciniMatrix> {
    let bases = default_bases(dec.directions())?;
    terracini_veronese_with_bases(dec, &bases)
}

/// [`terracini_veronese`] with caller-supplied tangent bases, one per summand.
pub fn terracini_veronese_with_bases(dec: &WaringDecomposition, bases: &[TangentBasis]) -> Result<TerraciniMatrix> {
    check_bases(dec, bases)?;
    let (n, order) = (dec.n, dec.order);
    let block = n;
    let mut matrix = DenseMatrix::zeros(n.pow(order as u32), dec.rank() * block)?;
    let mut block_ranges = Vec::with_capacity(dec.rank());
    for (r, (term, basis)) in dec.terms.iter().zip(bases).enumerate() {
        let start = r * block;
        let a = term.direction.as_slice();
        kron_into(&vec![a; order], matrix.column_mut(start));
        crate::tensor::symmetric_insert_into(basis.basis(), a, order, &mut matrix, start + 1);
        block_ranges.push(start..start + block);
    }
    Ok(TerraciniMatrix { matrix, manifold: Manifold::Veronese, block_ranges })
}

/// Terracini matrix of the Segre manifold for the Waring decomposition read
/// as a CPD, `n^D x R (1 + D (n - 1))`. Tangent columns are ordered by mode,
/// then by basis index.
pub fn terracini_segre(dec: &WaringDecomposition) -> Result<TerraciniMatrix> {
    let bases = default_bases(dec.directions())?;
    terracini_segre_with_bases(dec, &bases)
}

/// [`terracini_segre`] with caller-supplied tangent bases, one per summand
/// and shared across modes.
pub fn terracini_segre_with_bases(dec: &WaringDecomposition, bases: &[TangentBasis]) -> Result<TerraciniMatrix> {
    check_bases(dec, bases)?;
    let (n, order) = (dec.n, dec.order);
    let block = 1 + order * (n - 1);
    let mut matrix = DenseMatrix::zeros(n.pow(order as u32), dec.rank() * block)?;
    let mut block_ranges = Vec::with_capacity(dec.rank());
    for (r, (term, basis)) in dec.terms.iter().zip(bases).enumerate() {
        let start = r * block;
        let a = term.direction.as_slice();
        kron_into(&vec![a; order], matrix.column_mut(start));
        let mut col = start + 1;
        for mode in 0..order {
            for b in 0..basis.basis().cols() {
                let mut factors = vec![a; order];
                factors[mode] = basis.basis().column(b);
                kron_into(&factors, matrix.column_mut(col));
                col += 1;
            }
        }
        block_ranges.push(start..start + block);
    }
    Ok(TerraciniMatrix { matrix, manifold: Manifold::Segre, block_ranges })
}

/// Terracini matrix of the Segre–Veronese manifold.
///
/// For each summand the block is `[⊗_k a_k^{⊗d_k} | T_1 | ... | T_K]` where
/// `T_k` places the symmetrized tangent directions
/// `(1/sqrt(d_k)) sum_d U(a_k) ⊗_d a_k^{⊗(d_k - 1)}` in group `k`. A group of
/// size one has a trivial tangent space and contributes no columns.
pub fn terracini_segre_veronese(dec: &PsrdDecomposition) -> Result<TerraciniMatrix> {
    let bases = dec
        .terms
        .iter()
        .map(|t| {
            t.directions
                .iter()
                .map(|a| if a.len() == 1 { Ok(None) } else { sphere_tangent_basis(a).map(Some) })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    build_segre_veronese(dec, &bases)
}

/// [`terracini_segre_veronese`] with caller-supplied bases, indexed
/// `[summand][group]`.
pub fn terracini_segre_veronese_with_bases(
    dec: &PsrdDecomposition,
    bases: &[Vec<TangentBasis>],
) -> Result<TerraciniMatrix> {
    let wrapped: Vec<Vec<Option<TangentBasis>>> =
        bases.iter().map(|bs| bs.iter().cloned().map(Some).collect()).collect();
    build_segre_veronese(dec, &wrapped)
}

fn build_segre_veronese(dec: &PsrdDecomposition, bases: &[Vec<Option<TangentBasis>>]) -> Result<TerraciniMatrix> {
    if bases.len() != dec.rank() {
        return Err(Error::DimensionMismatch { expected: dec.rank(), found: bases.len() });
    }
    let k_groups = dec.sizes.len();
    let tangent_cols: usize = dec.sizes.iter().map(|n| n - 1).sum();
    let block = 1 + tangent_cols;
    let mut matrix = DenseMatrix::zeros(dec.ambient_dim(), dec.rank() * block)?;
    let mut block_ranges = Vec::with_capacity(dec.rank());
    for (r, (term, term_bases)) in dec.terms.iter().zip(bases).enumerate() {
        if term_bases.len() != k_groups {
            return Err(Error::DimensionMismatch { expected: k_groups, found: term_bases.len() });
        }
        let start = r * block;
        let group_powers: Vec<Vec<f64>> =
            term.directions.iter().zip(&dec.degrees).map(|(a, &d)| power(a.as_slice(), d)).collect();
        let point_factors: Vec<&[f64]> = group_powers.iter().map(Vec::as_slice).collect();
        kron_into(&point_factors, matrix.column_mut(start));
        let mut col = start + 1;
        for (k, basis) in term_bases.iter().enumerate() {
            let n_k = dec.sizes[k];
            let basis = match basis {
                Some(b) if b.basis().rows() == n_k && b.basis().cols() + 1 == n_k => b,
                Some(b) => return Err(Error::DimensionMismatch { expected: n_k, found: b.basis().rows() }),
                None if n_k == 1 => continue,
                None => return Err(Error::TrivialTangentSpace { dim: n_k }),
            };
            let sym = crate::tensor::symmetric_mode_insert(basis.basis(), &term.directions[k], dec.degrees[k])?;
            for b in 0..sym.cols() {
                let mut factors = point_factors.clone();
                factors[k] = sym.column(b);
                kron_into(&factors, matrix.column_mut(col));
                col += 1;
            }
        }
        block_ranges.push(start..start + block);
    }
    Ok(TerraciniMatrix { matrix, manifold: Manifold::SegreVeronese, block_ranges })
}

/// `[(1/sqrt(D)) sum_d X ⊗_d a_r^{⊗(D-1)}]_r`: the symmetrized insertion of
/// the same columns `X` at every direction. With `X` an orthonormal basis of
/// the complement of a Tucker subspace this is the block `T^⊥` whose Gramian
/// is predicted by [`crate::rank2::gramian_orthocomplement`].
pub fn orthocomplement_block(directions: &[UnitVector], complement: &DenseMatrix, order: usize) -> Result<DenseMatrix> {
    let blocks = directions
        .iter()
        .map(|a| crate::tensor::symmetric_mode_insert(complement, a, order))
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<&DenseMatrix> = blocks.iter().collect();
    DenseMatrix::hcat(&refs)
}

/// Closed-form column counts.
pub fn expected_cols(manifold: Manifold, sizes: &[usize], order: usize, rank: usize) -> usize {
    match manifold {
        Manifold::Segre => rank * (1 + order * (sizes[0] - 1)),
        Manifold::Veronese => rank * sizes[0],
        Manifold::SegreVeronese => rank * (1 + sizes.iter().map(|n| n - 1).sum::<usize>()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{kron, mode_insert};

    fn unit(v: &[f64]) -> UnitVector {
        UnitVector::normalize(v.to_vec()).unwrap()
    }

    fn wd(order: usize, dirs: &[&[f64]]) -> WaringDecomposition {
        let n = dirs[0].len();
        let terms = dirs.iter().map(|d| SymmetricTerm::new(1.0, unit(d)).unwrap()).collect();
        WaringDecomposition::new(n, order, terms).unwrap()
    }

    fn block_defects(t: &TerraciniMatrix) -> f64 {
        (0..t.block_ranges().len()).map(|r| t.block(r).orthonormality_defect()).fold(0.0, f64::max)
    }

    #[test]
    fn decomposition_validation() {
        let a = unit(&[1.0, 0.0]);
        assert!(matches!(SymmetricTerm::new(0.0, a.clone()), Err(Error::InvalidWeight(_))));
        let t = SymmetricTerm::new(1.0, a.clone()).unwrap();
        assert!(matches!(WaringDecomposition::new(2, 1, vec![t.clone()]), Err(Error::OrderTooSmall { .. })));
        assert!(matches!(WaringDecomposition::new(3, 3, vec![t.clone()]), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(WaringDecomposition::new(2, 3, vec![]), Err(Error::EmptyDecomposition)));
        let p = PsrdTerm::new(1.0, vec![a.clone()]).unwrap();
        assert!(PsrdDecomposition::new(vec![2], vec![1], vec![p.clone()]).is_err());
        assert!(PsrdDecomposition::new(vec![2, 2], vec![1, 1], vec![p]).is_err());
    }

    #[test]
    fn veronese_hand_expansion() {
        let dec = wd(2, &[&[1.0, 0.0]]);
        let t = terracini_veronese(&dec).unwrap();
        assert_eq!((t.ambient_dim(), t.total_cols()), (4, 2));
        assert_eq!(t.matrix().column(0), &[1.0, 0.0, 0.0, 0.0]);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let tangent = t.matrix().column(1);
        let expect = [0.0, r, r, 0.0];
        let sign = tangent[1].signum();
        for (x, e) in tangent.iter().zip(expect) {
            assert!((x - sign * e).abs() < 1e-15);
        }
    }

    #[test]
    fn segre_hand_expansion() {
        let dec = wd(2, &[&[1.0, 0.0]]);
        let t = terracini_segre(&dec).unwrap();
        assert_eq!((t.ambient_dim(), t.total_cols()), (4, 3));
        // e1⊗e1, e2⊗e1, e1⊗e2 (tangent basis of e1 is e2)
        assert_eq!(t.matrix().column(0), &[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(t.matrix().column(1), &[0.0, 0.0, 1.0, 0.0]);
        assert_eq!(t.matrix().column(2), &[0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn rank_one_blocks_are_orthonormal() {
        for order in 2..=4 {
            let dec = wd(order, &[&[0.3, -0.2, 0.9, 0.1]]);
            let v = terracini_veronese(&dec).unwrap();
            let s = terracini_segre(&dec).unwrap();
            assert!(v.matrix().orthonormality_defect() < 1e-12);
            assert!(s.matrix().orthonormality_defect() < 1e-12);
            assert_eq!(s.total_cols(), 1 + order * 3);
        }
    }

    #[test]
    fn orthogonal_pair_segre_fully_orthonormal() {
        let dec = wd(3, &[&[1.0, 1.0, 0.0], &[1.0, -1.0, 0.0]]);
        let s = terracini_segre(&dec).unwrap();
        assert_eq!(s.total_cols(), 2 * (1 + 3 * 2));
        assert!(s.matrix().orthonormality_defect() < 1e-12);
    }

    #[test]
    fn veronese_gramian_matches_index_loop_oracle() {
        let dirs: [&[f64]; 2] = [&[0.5, -0.1, 0.8], &[0.2, 0.7, -0.4]];
        let dec = wd(3, &dirs);
        let t = terracini_veronese(&dec).unwrap();
        // Rebuild every column from explicit triple loops over the same tangent bases.
        let mut cols = Vec::new();
        for a in dec.directions() {
            let u = sphere_tangent_basis(a).unwrap();
            let x = a.as_slice();
            let mut p = vec![0.0; 27];
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        p[(i * 3 + j) * 3 + k] = x[i] * x[j] * x[k];
                    }
                }
            }
            cols.push(p);
            for b in 0..2 {
                let y = u.basis().column(b);
                let mut c = vec![0.0; 27];
                for i in 0..3 {
                    for j in 0..3 {
                        for k in 0..3 {
                            let s = y[i] * x[j] * x[k] + x[i] * y[j] * x[k] + x[i] * x[j] * y[k];
                            c[(i * 3 + j) * 3 + k] = s / 3f64.sqrt();
                        }
                    }
                }
                cols.push(c);
            }
        }
        let refs: Vec<&[f64]> = cols.iter().map(Vec::as_slice).collect();
        let oracle = DenseMatrix::from_columns(27, &refs).unwrap();
        assert!(t.matrix().gram().max_abs_diff(&oracle.gram()) < 1e-13);
    }

    #[test]
    fn segre_veronese_single_group_is_veronese() {
        let dec = wd(3, &[&[0.5, -0.1, 0.8], &[0.2, 0.7, -0.4]]);
        let sv = terracini_segre_veronese(&PsrdDecomposition::from_waring(&dec)).unwrap();
        let v = terracini_veronese(&dec).unwrap();
        assert_eq!(sv.matrix(), v.matrix());
    }

    #[test]
    fn segre_veronese_degree_one_groups_is_segre() {
        let dec = wd(3, &[&[0.5, -0.1, 0.8], &[0.2, 0.7, -0.4]]);
        let sv = terracini_segre_veronese(&PsrdDecomposition::cpd_from_waring(&dec)).unwrap();
        let s = terracini_segre(&dec).unwrap();
        assert_eq!(sv.matrix(), s.matrix());
    }

    #[test]
    fn segre_veronese_mixed_degrees_orthonormal() {
        let term = PsrdTerm::new(2.0, vec![unit(&[0.6, 0.8]), unit(&[-0.3, 0.4])]).unwrap();
        let dec = PsrdDecomposition::new(vec![2, 2], vec![2, 1], vec![term]).unwrap();
        let t = terracini_segre_veronese(&dec).unwrap();
        assert_eq!((t.ambient_dim(), t.total_cols()), (8, 3));
        assert!(t.matrix().orthonormality_defect() < 1e-12);
    }

    #[test]
    fn segre_veronese_column_count_and_blocks() {
        let terms = (0..2)
            .map(|r| {
                let s = r as f64;
                PsrdTerm::new(1.0, vec![unit(&[1.0, s, 0.3]), unit(&[0.2, 1.0 - s, 0.5, 0.1])]).unwrap()
            })
            .collect();
        let dec = PsrdDecomposition::new(vec![3, 4], vec![2, 1], terms).unwrap();
        let t = terracini_segre_veronese(&dec).unwrap();
        assert_eq!(t.total_cols(), expected_cols(Manifold::SegreVeronese, &[3, 4], 3, 2));
        assert!(block_defects(&t) < 1e-12);
    }

    #[test]
    fn size_one_group_has_no_tangent_columns() {
        let term = PsrdTerm::new(1.0, vec![unit(&[0.6, 0.8]), unit(&[-1.0])]).unwrap();
        let dec = PsrdDecomposition::new(vec![2, 1], vec![2, 1], vec![term]).unwrap();
        let t = terracini_segre_veronese(&dec).unwrap();
        assert_eq!(t.total_cols(), 2);
    }

    #[test]
    fn veronese_columns_are_symmetric_tensors() {
        let dec = wd(3, &[&[0.5, -0.1, 0.8]]);
        let t = terracini_veronese(&dec).unwrap();
        let n = 3;
        for c in 0..t.total_cols() {
            let col = t.matrix().column(c);
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let x = col[(i * n + j) * n + k];
                        assert!((x - col[(j * n + k) * n + i]).abs() < 1e-15);
                        assert!((x - col[(i * n + k) * n + j]).abs() < 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn segre_tangent_columns_are_mode_insertions() {
        let a = unit(&[0.1, 0.9, -0.3]);
        let dec = WaringDecomposition::new(3, 3, vec![SymmetricTerm::new(1.0, a.clone()).unwrap()]).unwrap();
        let t = terracini_segre(&dec).unwrap();
        let u = sphere_tangent_basis(&a).unwrap();
        for mode in 1..=3 {
            let ins = mode_insert(u.basis(), &a, mode, 3).unwrap();
            for b in 0..2 {
                let col = t.matrix().column(1 + (mode - 1) * 2 + b);
                for (x, y) in col.iter().zip(ins.column(b)) {
                    assert!((x - y).abs() < 1e-15, "mode {mode}: {x} vs {y}");
                }
            }
        }
        assert_eq!(t.matrix().column(0), kron(&[a.as_slice(); 3]).as_slice());
    }

    #[test]
    fn weights_do_not_enter() {
        let dec = wd(3, &[&[0.5, -0.1, 0.8], &[0.2, 0.7, -0.4]]);
        let scaled = dec.with_weights(&[10.0, -3.0]).unwrap();
        assert_eq!(terracini_veronese(&dec).unwrap(), terracini_veronese(&scaled).unwrap());
        assert_eq!(terracini_segre(&dec).unwrap(), terracini_segre(&scaled).unwrap());
    }

    #[test]
    fn to_tensor_sums_weighted_powers() {
        let dec = wd(2, &[&[1.0, 0.0], &[0.0, 1.0]]).with_weights(&[2.0, -1.0]).unwrap();
        assert_eq!(dec.to_tensor(), vec![2.0, 0.0, 0.0, -1.0]);
    }
}

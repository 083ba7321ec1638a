//! Dense vector and matrix primitives shared by the Terracini builders.
//!
//! Tensors are stored as flat vectors. Entry `(i_1, ..., i_D)` of a tensor in
//! `R^{n_1} x ... x R^{n_D}` lives at offset
//! `((i_1 * n_2 + i_2) * n_3 + ...) * n_D + i_D`, so the first index varies
//! slowest and `vec(x ⊗ y)` is the Kronecker product of `x` and `y`.

use faer::{MatRef, Side};

use crate::error::{Error, Result};

/// Tolerance on `| ||a|| - 1 |` accepted by [`UnitVector::new`].
pub const UNIT_NORM_TOL: f64 = 1e-13;

/// Tolerance for the orthonormality checks on tangent bases and Tucker factors.
pub const ORTHONORMAL_TOL: f64 = 1e-12;

/// A point on the unit sphere `S^{n-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitVector(Vec<f64>);

impl UnitVector {
    /// Wraps `entries`, which must already have unit norm.
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        if let Some(i) = entries.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { row: i, col: 0 });
        }
        let norm = norm2(&entries);
        if (norm - 1.0).abs() > UNIT_NORM_TOL {
            return Err(Error::NotUnit { norm, tol: UNIT_NORM_TOL });
        }
        Ok(Self(entries))
    }

    /// Divides `raw` by its Euclidean norm.
    pub fn normalize(mut raw: Vec<f64>) -> Result<Self> {
        let norm = norm2(&raw);
        if raw.is_empty() || !norm.is_finite() || norm == 0.0 {
            return Err(Error::Unnormalizable);
        }
        raw.iter_mut().for_each(|x| *x /= norm);
        Ok(Self(raw))
    }

    /// The standard basis vector `e_index` of `R^dim`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::DimensionMismatch { expected: dim, found: index + 1 });
        }
        let mut e = vec![0.0; dim];
        e[index] = 1.0;
        Ok(Self(e))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &UnitVector) -> f64 {
        dot(&self.0, &other.0)
    }

    /// The `n x 1` matrix holding this vector.
    pub fn to_column(&self) -> DenseMatrix {
        DenseMatrix { rows: self.len(), cols: 1, data: self.0.clone() }
    }
}

/// Column-major dense matrix with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    /// Allocates a zero matrix, reporting allocation failure instead of aborting.
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        let bytes = rows as u128 * cols as u128 * std::mem::size_of::<f64>() as u128;
        let alloc_err = || Error::Allocation { rows, cols, bytes };
        let len = rows.checked_mul(cols).ok_or_else(alloc_err)?;
        let mut data = Vec::new();
        data.try_reserve_exact(len).map_err(|_| alloc_err())?;
        data.resize(len, 0.0);
        Ok(Self { rows, cols, data })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self { rows: n, cols: n, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        Self::from_col_major(rows, cols, data)
    }

    pub fn from_col_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        if let Some(k) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { row: k % rows.max(1), col: k / rows.max(1) });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from row-major data; convenient for literals.
    pub fn from_row_major(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        Self::from_fn(rows, cols, |i, j| data[i * cols + j])
    }

    pub fn from_columns(rows: usize, columns: &[&[f64]]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * columns.len());
        for c in columns {
            if c.len() != rows {
                return Err(Error::DimensionMismatch { expected: rows, found: c.len() });
            }
            data.extend_from_slice(c);
        }
        Self::from_col_major(rows, columns.len(), data)
    }

    pub(crate) fn from_faer(m: MatRef<'_, f64>) -> Self {
        let (rows, cols) = (m.nrows(), m.ncols());
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            data.extend(m.col(j).iter().copied());
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        assert!(row < self.rows && col < self.cols, "index ({row}, {col}) out of bounds");
        self.data[col * self.rows + row]
    }

    pub fn column(&self, col: usize) -> &[f64] {
        &self.data[col * self.rows..(col + 1) * self.rows]
    }

    pub(crate) fn column_mut(&mut self, col: usize) -> &mut [f64] {
        &mut self.data[col * self.rows..(col + 1) * self.rows]
    }

    /// The entries in column-major order.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_faer(&self) -> MatRef<'_, f64> {
        MatRef::from_column_major_slice(&self.data, self.rows, self.cols)
    }

    /// Returns `self^T * other`.
    pub fn transpose_mul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: other.rows });
        }
        let prod = self.as_faer().transpose() * other.as_faer();
        Ok(Self::from_faer(prod.as_ref()))
    }

    /// Returns `self * other`.
    pub fn mul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let prod = self.as_faer() * other.as_faer();
        Ok(Self::from_faer(prod.as_ref()))
    }

    /// The Gramian `self^T * self`.
    pub fn gram(&self) -> DenseMatrix {
        self.transpose_mul(self).expect("row counts agree")
    }

    pub fn transpose(&self) -> DenseMatrix {
        Self::from_faer(self.as_faer().transpose())
    }

    /// Horizontal concatenation.
    pub fn hcat(parts: &[&DenseMatrix]) -> Result<DenseMatrix> {
        let rows = parts.first().map_or(0, |p| p.rows);
        let mut data = Vec::with_capacity(rows * parts.iter().map(|p| p.cols).sum::<usize>());
        let mut cols = 0;
        for p in parts {
            if p.rows != rows {
                return Err(Error::DimensionMismatch { expected: rows, found: p.rows });
            }
            data.extend_from_slice(&p.data);
            cols += p.cols;
        }
        Ok(Self { rows, cols, data })
    }

    /// Copies the columns in `range`.
    pub fn column_range(&self, range: std::ops::Range<usize>) -> DenseMatrix {
        assert!(range.end <= self.cols);
        Self {
            rows: self.rows,
            cols: range.len(),
            data: self.data[range.start * self.rows..range.end * self.rows].to_vec(),
        }
    }

    /// Multiplies every entry by `factor`.
    pub fn scaled(mut self, factor: f64) -> DenseMatrix {
        self.data.iter_mut().for_each(|x| *x *= factor);
        self
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).fold(0.0, |m, (a, b)| f64::max(m, (a - b).abs()))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| f64::max(m, x.abs()))
    }

    /// `max |(self^T self - I)_{ij}|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let g = self.gram();
        g.max_abs_diff(&DenseMatrix::identity(self.cols))
    }

    /// Eigenvalues of a symmetric matrix in nondecreasing order.
    pub fn symmetric_eigenvalues(&self) -> Result<Vec<f64>> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        self.as_faer().self_adjoint_eigenvalues(Side::Lower).map_err(|_| Error::EigNoConvergence)
    }
}

pub(crate) fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub(crate) fn norm2(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

/// Writes `vec(f_1 ⊗ ... ⊗ f_k)` into `out`, which must have length `prod |f_i|`.
pub fn kron_into(factors: &[&[f64]], out: &mut [f64]) {
    let total: usize = factors.iter().map(|f| f.len()).product();
    assert_eq!(out.len(), total, "output length does not match Kronecker product size");
    if total == 0 {
        return;
    }
    out[0] = 1.0;
    let mut len = 1;
    for f in factors {
        let flen = f.len();
        // Expand in place from the back so unread prefixes stay intact.
        for i in (0..len).rev() {
            let v = out[i];
            for j in (0..flen).rev() {
                out[i * flen + j] = v * f[j];
            }
        }
        len *= flen;
    }
}

/// `vec(f_1 ⊗ ... ⊗ f_k)`.
pub fn kron(factors: &[&[f64]]) -> Vec<f64> {
    let total = factors.iter().map(|f| f.len()).product();
    let mut out = vec![0.0; total];
    kron_into(factors, &mut out);
    out
}

/// `vec(a^{⊗order})`.
pub fn outer_power(a: &UnitVector, order: usize) -> Result<Vec<f64>> {
    if order == 0 {
        return Err(Error::OrderTooSmall { min: 1, got: 0 });
    }
    Ok(power(a.as_slice(), order))
}

pub(crate) fn power(a: &[f64], order: usize) -> Vec<f64> {
    let factors = vec![a; order];
    kron(&factors)
}

/// Accumulates `scale * vec(left ⊗ mid ⊗ right)` into `out`.
fn kron3_accumulate(left: &[f64], mid: &[f64], right: &[f64], scale: f64, out: &mut [f64]) {
    let (nm, nr) = (mid.len(), right.len());
    for (i, &l) in left.iter().enumerate() {
        for (j, &m) in mid.iter().enumerate() {
            let c = scale * l * m;
            let base = (i * nm + j) * nr;
            for (o, &r) in out[base..base + nr].iter_mut().zip(right) {
                *o += c * r;
            }
        }
    }
}

/// `X ⊗_d a^{⊗(order-1)} = a^{⊗(d-1)} ⊗ X ⊗ a^{⊗(order-d)}`, column by column.
///
/// `mode` is one-based.
pub fn mode_insert(x: &DenseMatrix, a: &UnitVector, mode: usize, order: usize) -> Result<DenseMatrix> {
    if mode == 0 || mode > order {
        return Err(Error::ModeOutOfRange { mode, order });
    }
    if x.rows() != a.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), found: x.rows() });
    }
    let left = power(a.as_slice(), mode - 1);
    let right = power(a.as_slice(), order - mode);
    let mut out = DenseMatrix::zeros(a.len().pow(order as u32), x.cols())?;
    for j in 0..x.cols() {
        kron3_accumulate(&left, x.column(j), &right, 1.0, out.column_mut(j));
    }
    Ok(out)
}

/// `(1/sqrt(order)) * sum_d X ⊗_d a^{⊗(order-1)}`: the symmetrized tangent
/// directions of the Veronese manifold at `a^{⊗order}` along the columns of `X`.
pub fn symmetric_mode_insert(x: &DenseMatrix, a: &UnitVector, order: usize) -> Result<DenseMatrix> {
    if order == 0 {
        return Err(Error::OrderTooSmall { min: 1, got: 0 });
    }
    if x.rows() != a.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), found: x.rows() });
    }
    let mut out = DenseMatrix::zeros(a.len().pow(order as u32), x.cols())?;
    symmetric_insert_into(x, a.as_slice(), order, &mut out, 0);
    Ok(out)
}

/// Writes the symmetrized insertion of every column of `x` into consecutive
/// columns of `out`, starting at `first_col`.
pub(crate) fn symmetric_insert_into(x: &DenseMatrix, a: &[f64], order: usize, out: &mut DenseMatrix, first_col: usize) {
    let powers: Vec<Vec<f64>> = (0..order).map(|k| power(a, k)).collect();
    let scale = 1.0 / (order as f64).sqrt();
    for j in 0..x.cols() {
        let col = out.column_mut(first_col + j);
        for d in 1..=order {
            kron3_accumulate(&powers[d - 1], x.column(j), &powers[order - d], scale, col);
        }
    }
}

/// An orthonormal basis of the tangent space `a^⊥` of the sphere at `a`.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentBasis {
    base_point: UnitVector,
    basis: DenseMatrix,
}

impl TangentBasis {
    /// Validates `basis^T basis = I` and `basis^T a = 0` within [`ORTHONORMAL_TOL`].
    pub fn new(base_point: UnitVector, basis: DenseMatrix) -> Result<Self> {
        let n = base_point.len();
        if basis.rows() != n {
            return Err(Error::DimensionMismatch { expected: n, found: basis.rows() });
        }
        if basis.cols() + 1 != n {
            return Err(Error::DimensionMismatch { expected: n - 1, found: basis.cols() });
        }
        let ortho = basis.orthonormality_defect();
        let normal = (0..basis.cols()).map(|j| dot(basis.column(j), base_point.as_slice()).abs()).fold(0.0, f64::max);
        let deviation = ortho.max(normal);
        if deviation > ORTHONORMAL_TOL {
            return Err(Error::NotOrthonormal { deviation });
        }
        Ok(Self { base_point, basis })
    }

    /// Skips validation. Only for negative-control tests that need a broken basis.
    #[doc(hidden)]
    pub fn new_unchecked(base_point: UnitVector, basis: DenseMatrix) -> Self {
        Self { base_point, basis }
    }

    pub fn base_point(&self) -> &UnitVector {
        &self.base_point
    }

    pub fn basis(&self) -> &DenseMatrix {
        &self.basis
    }

    /// Right-multiplies the basis by an orthogonal `(n-1) x (n-1)` matrix.
    pub fn rotated(&self, rotation: &DenseMatrix) -> Result<Self> {
        let basis = self.basis.mul(rotation)?;
        Self::new(self.base_point.clone(), basis)
    }
}

/// Householder-based tangent basis of the sphere at `a`.
///
/// With `s = sign(a_1)` (`+1` when `a_1 = 0`) and `w = a + s e_1`, the
/// reflector `H = I - 2 w w^T / (w^T w)` maps `a` to `-s e_1`; columns
/// `2..n` of `H` are returned. The sign choice avoids cancellation in `w`.
pub fn sphere_tangent_basis(a: &UnitVector) -> Result<TangentBasis> {
    let n = a.len();
    if n < 2 {
        return Err(Error::TrivialTangentSpace { dim: n });
    }
    let x = a.as_slice();
    let s = if x[0] >= 0.0 { 1.0 } else { -1.0 };
    let mut w = x.to_vec();
    w[0] += s;
    // w^T w = 2 (1 + |a_1|) for unit a.
    let half_norm_sq = 1.0 + x[0].abs();
    let basis = DenseMatrix::from_fn(n, n - 1, |i, j| {
        let col = j + 1;
        let delta = if i == col { 1.0 } else { 0.0 };
        delta - w[i] * w[col] / half_norm_sq
    })?;
    Ok(TangentBasis { base_point: a.clone(), basis })
}

/// Helmert's orthogonal matrix of size `order`: first column `1/sqrt(D)`,
/// column `j >= 1` equal to `[1_j, -j, 0] / sqrt(j (j + 1))`.
pub fn helmert_matrix(order: usize) -> Result<DenseMatrix> {
    if order == 0 {
        return Err(Error::OrderTooSmall { min: 1, got: 0 });
    }
    let d = order as f64;
    DenseMatrix::from_fn(order, order, |i, j| {
        if j == 0 {
            return 1.0 / d.sqrt();
        }
        let jf = j as f64;
        let norm = (jf * (jf + 1.0)).sqrt();
        match i.cmp(&j) {
            std::cmp::Ordering::Less => 1.0 / norm,
            std::cmp::Ordering::Equal => -jf / norm,
            std::cmp::Ordering::Greater => 0.0,
        }
    })
}

/// An orthonormal basis of the orthogonal complement of the column space of
/// `q` (`n x m`, full column rank), as an `n x (n - m)` matrix.
pub fn orthogonal_complement(q: &DenseMatrix) -> Result<DenseMatrix> {
    let (n, m) = (q.rows(), q.cols());
    if m > n {
        return Err(Error::DimensionMismatch { expected: n, found: m });
    }
    let svd = q.as_faer().svd().map_err(|_| Error::SvdNoConvergence)?;
    Ok(DenseMatrix::from_faer(svd.U().subcols(m, n - m)))
}

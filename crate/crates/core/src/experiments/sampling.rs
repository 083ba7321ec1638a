//! Seeded random instances.
//!
//! Every generator draws from `ChaCha8Rng` (rand_chacha 0.10) seeded with
//! `seed_from_u64`, with standard normals from `rand_distr::StandardNormal`
//! (rand_distr 0.6). Independent sub-streams, e.g. one per
//! `(n, R, trial)` of an experiment, get their own seed from
//! [`derive_seed`], a SplitMix64 chain, so results do not depend on the order
//! in which trials run.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::tensor::{norm2, DenseMatrix, UnitVector};
use crate::terracini::{PsrdDecomposition, PsrdTerm, SymmetricTerm, WaringDecomposition};

pub type ExperimentRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> ExperimentRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes `tags` into `seed`.
pub fn derive_seed(seed: u64, tags: &[u64]) -> u64 {
    tags.iter().fold(splitmix64(seed), |acc, &t| splitmix64(acc ^ splitmix64(t)))
}

pub fn gaussian_vec(rng: &mut ExperimentRng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

/// Uniform point on the sphere `S^{n-1}`.
pub fn random_unit(rng: &mut ExperimentRng, n: usize) -> UnitVector {
    loop {
        if let Ok(u) = UnitVector::normalize(gaussian_vec(rng, n)) {
            return u;
        }
    }
}

/// `n x m` matrix with orthonormal columns: the thin Q factor of a Gaussian matrix.
pub fn random_orthonormal(rng: &mut ExperimentRng, n: usize, m: usize) -> Result<DenseMatrix> {
    if m > n || m == 0 {
        return Err(Error::InvalidArgument(format!("cannot draw {m} orthonormal columns in R^{n}")));
    }
    let data = gaussian_vec(rng, n * m);
    let g = DenseMatrix::from_col_major(n, m, data)?;
    Ok(DenseMatrix::from_faer(g.as_faer().qr().compute_thin_Q().as_ref()))
}

/// Random Waring decomposition `sum_r x_r^{⊗D}` with `x_r ~ N(0, I_n)`,
/// stored as direction `x_r / |x_r|` and weight `|x_r|^D`.
pub fn random_waring(n: usize, order: usize, rank: usize, seed: u64) -> Result<WaringDecomposition> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("dimension must be at least 2, got {n}")));
    }
    if order < 2 {
        return Err(Error::OrderTooSmall { min: 2, got: order });
    }
    if rank == 0 {
        return Err(Error::EmptyDecomposition);
    }
    let mut rng = rng_from_seed(seed);
    let mut terms = Vec::with_capacity(rank);
    while terms.len() < rank {
        let raw = gaussian_vec(&mut rng, n);
        let norm = norm2(&raw);
        if norm == 0.0 {
            continue;
        }
        let weight = norm.powi(order as i32);
        terms.push(SymmetricTerm::new(weight, UnitVector::normalize(raw)?)?);
    }
    WaringDecomposition::new(n, order, terms)
}

/// Random partially symmetric decomposition with Gaussian factors, unit
/// weights folded into the factor norms as in [`random_waring`].
pub fn random_psrd(sizes: &[usize], degrees: &[usize], rank: usize, seed: u64) -> Result<PsrdDecomposition> {
    if rank == 0 {
        return Err(Error::EmptyDecomposition);
    }
    if sizes.len() != degrees.len() {
        return Err(Error::DimensionMismatch { expected: sizes.len(), found: degrees.len() });
    }
    let mut rng = rng_from_seed(seed);
    let terms = (0..rank)
        .map(|_| {
            let mut weight = 1.0;
            let dirs = sizes
                .iter()
                .zip(degrees)
                .map(|(&n, &d)| {
                    let raw = gaussian_vec(&mut rng, n);
                    weight *= norm2(&raw).powi(d as i32);
                    UnitVector::normalize(raw)
                })
                .collect::<Result<Vec<_>>>()?;
            PsrdTerm::new(weight, dirs)
        })
        .collect::<Result<Vec<_>>>()?;
    PsrdDecomposition::new(sizes.to_vec(), degrees.to_vec(), terms)
}

/// A random Tucker-compressed Waring decomposition: a random core on `R^m`
/// and a random `n x m` orthonormal factor.
pub fn random_q_wd(
    n: usize,
    m: usize,
    order: usize,
    rank: usize,
    seed: u64,
) -> Result<(WaringDecomposition, DenseMatrix)> {
    let core = random_waring(m, order, rank, seed)?;
    let mut rng = rng_from_seed(derive_seed(seed, &[0x5157]));
    let q = random_orthonormal(&mut rng, n, m)?;
    Ok((core, q))
}

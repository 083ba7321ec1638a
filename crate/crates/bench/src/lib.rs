//! Fixtures shared by the benchmarks.

use symcond::experiments::random_waring;
use symcond::WaringDecomposition;

/// `(n, D, R)` sizes for the direct-versus-fast comparison.
pub const FAST_PATH_SIZES: &[(usize, usize, usize)] = &[(10, 3, 2), (20, 3, 4), (30, 3, 6), (40, 3, 8)];

/// Sizes for the Terracini builders alone.
pub const BUILDER_SIZES: &[(usize, usize, usize)] = &[(8, 3, 4), (16, 3, 8), (8, 4, 4)];

pub fn fixture(n: usize, order: usize, rank: usize) -> WaringDecomposition {
    random_waring(n, order, rank, 0).expect("benchmark sizes are valid")
}

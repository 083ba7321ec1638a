//! Condition numbers of symmetric tensor decompositions.
//!
//! Computes the condition numbers of the canonical polyadic decomposition
//! (Segre manifold), the Waring decomposition (Veronese manifold), the
//! Tucker-compressed Waring decomposition and partially symmetric rank
//! decompositions (Segre–Veronese manifold) through Terracini matrices,
//! together with a compressed fast path, closed-form rank-two oracles and a
//! seeded experiment harness.

pub mod condition;
pub mod error;
pub mod experiments;
pub mod io;
pub mod rank2;
pub mod tensor;
pub mod terracini;

pub use condition::{
    compress_psrd, compress_waring, condition_from_terracini, condition_psrd_fast, condition_segre,
    condition_segre_veronese, condition_veronese, condition_waring_fast, embed_psrd, embed_waring, q_wd_condition,
    sigma_min, singular_values, CompressedWd, ConditionReport, Method,
};
pub use error::{Error, Result};
pub use rank2::{gramian_orthocomplement, rank2_block_split, rank2_condition, Rank2Blocks, Rank2ClosedForm};
pub use tensor::{
    helmert_matrix, mode_insert, orthogonal_complement, outer_power, sphere_tangent_basis, symmetric_mode_insert,
    DenseMatrix, TangentBasis, UnitVector,
};
pub use terracini::{
    orthocomplement_block, terracini_segre, terracini_segre_veronese, terracini_veronese, Manifold, PsrdDecomposition,
    PsrdTerm, SymmetricTerm, TerraciniMatrix, WaringDecomposition,
};

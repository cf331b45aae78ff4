//! Symplectic eigenvalues of positive definite matrices and the symplectic
//! analogues of the Schur–Horn theorem and Ky Fan's minimum principle,
//! stated for generalized two-variable means.
//!
//! Modules, bottom-up:
//!
//! * [`means`]: generalized means, axiom validation, geometric dominance.
//! * [`symplectic`]: the form `J`, symplecticity predicates, expanding sums,
//!   s-pinching, completion of symplectic frames.
//! * [`random`]: seeded generators of symplectic and positive definite matrices.
//! * [`spectral`]: symplectic eigenvalues, Williamson factorization,
//!   mean-indexed symplectic diagonals.
//! * [`majorization`]: `≺^w` and `≺`, intermediate vectors, Horn rotations.
//! * [`schur_horn`]: Schur check, Horn realization, Ky Fan tools.
//! * [`io`]: JSON/text interchange formats.

pub mod error;
pub mod io;
pub mod linalg;
pub mod majorization;
pub mod means;
pub mod random;
pub mod schur_horn;
pub mod spectral;
pub mod symplectic;

pub use error::{Error, Result};
pub use linalg::Matrix;
pub use majorization::{
    horn_realize, intermediate_vector, majorize, weak_supermajorize, MajorizationReport, OrderKind,
};
pub use means::{dominates_geometric, validate_mean_axioms, MeanSpec};
pub use schur_horn::{
    equivalence_crosscheck, horn_symplectic_realize, kyfan_minimizer, kyfan_objective,
    kyfan_search, schur_check, sl2_for_ratio, KyFanResult, KyFanSearchReport, SchurCheckReport,
};
pub use spectral::{
    symplectic_diag, symplectic_eigenvalues, williamson, PdMatrix, SymplecticSpectrum,
    WilliamsonFactorization,
};
pub use symplectic::{
    block_criterion, complete_to_symplectic, expanding_sum, is_symplectic, s_pinching,
    standard_j, BlockPartition, SymplecticFrame,
};

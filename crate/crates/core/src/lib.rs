//! Delsarte rank-metric codes over finite fields, the (q,r)-polymatroids they
//! induce, their four-variable rank generating functions, and exact checks of
//! the Greene-type, duality and MacWilliams identities that connect them.

pub mod cli;
pub mod delsarte;
pub mod error;
pub mod gf;
pub mod identities;
pub mod matrix;
pub mod poly;
pub mod qpolymatroid;
pub mod qseries;
pub mod subspace;

pub use delsarte::{all_codes, CodeFile, FieldSpec, RankDistribution, RankMetricCode, DEFAULT_BUDGET};
pub use error::{Error, Result};
pub use identities::{check_all, check_named, IdentityReport};
pub use gf::{FieldContext, FieldElement};
pub use matrix::MatrixFq;
pub use poly::{HomogeneousPoly, MultiPoly};
pub use subspace::{enumerate_subspaces, Lattice, Subspace};
pub use qpolymatroid::{AxiomReport, QPolymatroid, Violation};

//! Exact gradings on matrix superalgebras.
//!
//! Everything is computed over cyclotomic fields ℚ(ζ_m) with exact rational
//! coefficients: finite abelian group gradings of M_{n,m}, superinvolutions
//! and their compatibility with gradings, the symmetric and skew subspaces
//! those involutions cut out, and the Jordan and Lie superalgebras built on
//! them.

pub mod abelian_group;
pub mod classify;
pub mod cyclotomic;
pub mod grading;
pub mod linalg;
pub mod report;
pub mod structures;
pub mod superinvolution;
pub mod supermatrix;

pub use abelian_group::{Character, FiniteAbelianGroup, GroupElement, GroupError, QuotientGroup, Subgroup};
pub use classify::{Bounds, ClassifyError, EnumKind, Enumeration, TrpSpec, TypeASpec, TypeQSpec};
pub use cyclotomic::{CycError, CycScalar};
pub use grading::{Grading, GradingError, GradingSpec};
pub use linalg::{LinalgError, Matrix, Subspace};
pub use report::{EvidenceKind, Instance, Report, Verdict};
pub use superinvolution::{InvolutionError, InvolutionKind, LinearMap, Superinvolution};
pub use structures::{GradedSuperStructure, StructureError, StructureKind};
pub use supermatrix::{Parity, ProductRule, SuperAlgebraView, SuperMatrix, SuperSignature};

//! Distributed storage built on equidistant subspace codes from the Plücker
//! embedding.
//!
//! A file of `B = C(b, 2)` symbols over GF(q) is stored on nodes identified by
//! normalized vectors of F_q^b; node `v` keeps the `b − 1` values `φ(v; e_j)·x`.
//! The crate provides encoding, minimum-bandwidth repair (one symbol from each
//! of `b − 1` or `b` helpers), local and parallel repair, reconstruction from
//! `2B` or exactly `B` downloaded symbols, sparse in-place modification,
//! failure-resilient node assignments, and an in-process simulator that
//! accounts for every transferred symbol.
//!
//! All algorithms are generic over [`Field`]; [`FieldSpec`] is the runtime
//! field used by the CLI and the `Gf*` aliases below fix it.

pub mod assignment;
pub mod codec;
pub mod error;
pub mod field;
pub mod goodmatrix;
pub mod linalg;
pub mod plucker;
pub mod simnet;

pub use assignment::{Assignment, Provenance, Resilience};
pub use codec::{NodeState, RepairMode, RepairPlan, SystemConfig};
pub use error::{Error, Result};
pub use field::{Field, FieldElement, FieldSpec, PrimeField};
pub use goodmatrix::GoodMatrix;
pub use linalg::Matrix;
pub use plucker::{CodewordBasis, NodeVector, PluckerVector};
pub use simnet::{BandwidthLedger, Cluster, Report, Scenario, SweepReport};

pub type GfVector = NodeVector<FieldElement>;
pub type GfNode = NodeState<FieldElement>;
pub type GfAssignment = Assignment<FieldElement>;
pub type GfMatrix = Matrix<FieldElement>;
pub type GfConfig = SystemConfig<FieldSpec>;
pub type GfCluster = Cluster<FieldSpec>;

/// GF(2) fixed at compile time.
pub type Gf2 = PrimeField<2>;
/// GF(3) fixed at compile time.
pub type Gf3 = PrimeField<3>;

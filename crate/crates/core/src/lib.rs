//! Exact exponential-time Subset Sum solvers.
//!
//! The crate contains the classic meet-in-the-middle and four-list baselines, a
//! two-level representation-technique solver that filters candidate half-solutions
//! by random congruences, an Orthogonal Vectors engine driven by sparse 1-covers of
//! the disjointness matrix, and a reduction to Exact Node Weighted P4.
//!
//! Every randomized routine takes an explicit [`Rng`]; same seed, same answer.

pub mod error;
pub mod instance;
pub mod mixer;
pub mod numerics;
pub mod ov;
pub mod p4;
pub mod repsolver;
pub mod rng;
pub mod set;
pub mod sumset;

pub use error::SolveError;
pub use instance::{brute_force_solve, InstanceError, ParseError, Solution, SubsetSumInstance};
pub use rng::{random_subset, Rng};
pub use set::IndexSet;

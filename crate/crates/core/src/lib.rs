//! Solver toolkit for capacitated vertex cover with hard capacities (VC-HC)
//! on hypergraphs.
//!
//! The toolkit computes augmented covers with a primal-dual scheme driven by
//! exact-rational max-flow subroutines, and ships the machinery needed to
//! check its own work: an LP dual certificate, structural-invariant audits,
//! a brute-force optimum oracle for small instances, and deterministic
//! instance generators.
//!
//! Everything in this crate is exact: all numeric state is held in
//! arbitrary-precision rationals and every comparison made by the solver,
//! the certifiers and the oracle is an exact one. There is no floating-point
//! fallback in any algorithmic path.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats and the command
//! line front end live in the companion `vchc` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub use num_bigint;
pub use num_integer;
pub use num_rational;
pub use num_traits;

pub mod assignment;
pub mod certify;
pub mod cover;
pub mod gen;
pub mod instance;
pub mod maxflow;
pub mod oracle;
pub mod primal_dual;
pub mod rational;

pub use assignment::DemandAssignment;
pub use instance::{Edge, EdgeId, Instance, ValidationReport, Vertex, VertexId};
pub use rational::Rat;

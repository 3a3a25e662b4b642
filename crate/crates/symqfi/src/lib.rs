//! Collective spin correlators, random permutation-invariant Hamiltonians,
//! and quantum Fisher information in the symmetric subspace.
//!
//! Everything lives in the (N+1)-dimensional Dicke basis of an N-qubit
//! system. [`symspace`] builds the basis, collective correlator operators
//! and their brute-force cross-checks; [`hamiltonian`] draws random
//! permutation-invariant Hamiltonians and extracts ground-state data;
//! [`encoding`] turns single-qubit generator models into collective
//! encodings; [`qfi`] computes the quantum Fisher information along
//! three mutually checking routes; [`experiments`] wraps them in seeded,
//! reproducible sampling campaigns, scans and searches.

mod dd;
mod linalg;
mod mat2;

pub mod encoding;
pub mod experiments;
pub mod hamiltonian;
pub mod qfi;
pub mod symspace;

pub use mat2::Mat2;

//! Qudit stabilizer structures, discrete Wigner negativity, and facets of the
//! single-qudit Clifford polytope, for computing depolarizing-noise
//! thresholds of magic states and non-Clifford gates in prime dimension.
//!
//! Computations that scan many operators take an [`Exec`] argument; with the
//! `parallel` feature (on by default) they run on the rayon pool.

pub mod clifford;
pub mod data;
pub mod error;
pub mod exec;
pub mod gatesearch;
pub mod linalg;
pub mod pauli;
pub mod stabilizer;
pub mod wigner;
pub mod witness;

pub use clifford::{choi_state, enumerate_clifford, ChoiVector, CliffordElement, CliffordGroup};
pub use error::{Error, Result};
pub use exec::Exec;
pub use gatesearch::{
    eigen_bound, gate_robustness, gate_value, optimize_gate, table_one, GateSearchConfig,
};
pub use linalg::{CMatrix, C64};
pub use pauli::PauliLabel;
pub use stabilizer::CodeId;
pub use wigner::{negativity, state_robustness, PhasePointIndex};
pub use witness::{
    certify, derive_witness, orbit, witness_from_tuples, CertifyOptions, FacetReport, Witness,
};

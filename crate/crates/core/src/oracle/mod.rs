//! Independent verifiers: a Wick-contraction evaluation of the moments and a
//! truncated Fock-space construction of the states.

pub mod fock;
pub mod quadrature;
pub mod wick;

pub use fock::{fidelity, fock_dss_state, fock_sscs_state, verify_stabilization, FockStateTensor};
pub use quadrature::QuadratureConfig;
pub use wick::{enumerate_contractions, evaluate_som_oracle, ContractionTerm, Correlator, OracleEntry};

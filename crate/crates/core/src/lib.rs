//! Measurement-conditioned synthesis of non-classical states of a nanomechanical
//! resonator coupled to a driven qubit.
//!
//! Resonator states are kept as finite superpositions of phased coherent states
//! ([`coherent`]), driven by the pulse protocols in [`protocol`], dephased in
//! [`decoherence`] and sampled in [`observables`]. [`fock`] is an independent
//! truncated Fock-space integrator used to check the closed forms, and
//! [`run`] drives everything from a flat config file.

pub mod coherent;
pub mod config;
pub mod decoherence;
pub mod error;
pub mod fock;
pub mod observables;
pub mod protocol;
pub mod run;

pub use num_complex::Complex64 as C64;

pub use coherent::{CoherentLabel, Component, Kick, PulseOperator, SuperposedState};
pub use decoherence::DyadEnsemble;
pub use error::{Error, Result};
pub use observables::{GridField, PhaseSpaceGrid};
pub use protocol::{PhysicalParams, ProtocolParams, QubitOutcome};

//! Simulator core for two identical three-level atoms, Zeeman-split in a
//! static magnetic field and coupled to a single quantized cavity mode.
//!
//! The total excitation number (photons plus both magnetic quantum numbers)
//! is conserved, so the Hilbert space splits into small invariant sectors.
//! This crate enumerates those sectors, builds the Hamiltonian and its
//! sector blocks, evolves states exactly by Hermitian eigendecomposition,
//! carries tabulated closed-form propagators for the two sectors that admit
//! them, and implements the entanglement protocols built on top: EPR-pair
//! generation by photon post-selection, local excitation exchange,
//! entanglement transfer between two cavities, and a closed-loop calibration
//! cycle that tracks a drifting coupling strength.
//!
//! The crate is `no_std`-compatible (requires `alloc`); the default `std`
//! feature only switches the float backends.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod measurement;
pub mod operators;
pub mod protocols;
pub mod rng;
pub mod state_space;

pub use dynamics::{evolve, Picture, Propagator, QuantumState};
pub use error::{Error, Result};
pub use linalg::{CMat, HermitianEig, C64};
pub use measurement::{
    entropy, fidelity, fidelity_to_pure, measure_photons, negativity, reduced_density,
    DensityMatrix, MeasurementOutcome, Subsystem,
};
pub use operators::{
    hamiltonian_full, interaction_block, ladder_minus, ladder_plus, OperatorMatrix,
    PhysicalParams,
};
pub use protocols::{
    epr_generate, epr_target, feedback_cycle, local_exchange, state_at, transfer, DriftModel,
    ProtocolReport,
};
pub use state_space::{full_basis, AtomLevel, BasisState, Sector, Space, StateBasis};

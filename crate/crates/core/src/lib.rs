//! Stabilizer Rényi entropy estimation through purity.
//!
//! Applying a uniformly random Pauli string to each of `α` copies of a pure
//! state `ψ` produces a mixed state whose purity is `A_α(ψ)/d`, where
//! `A_α = d⁻¹ Σ_j ⟨ψ|P_j|ψ⟩^{2α}` and `M_α = (1-α)⁻¹ ln A_α` is the
//! stabilizer Rényi entropy. This crate provides
//!
//! * Pauli-string algebra on symplectic bitmasks ([`pauli`]),
//! * a dense state-vector and density-matrix engine ([`state`]),
//! * exact `A_α` / `M_α` and stabilizer test fixtures ([`oracle`]),
//! * exact, coherent and incoherent preparation of the channel output ([`channel`]),
//! * swap-test purity estimation and copy budgets ([`purity`]),
//! * the end-to-end estimator ([`pipeline`]),
//! * sweeps, replica-observable checks and direct estimators ([`bench`]).
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bench;
pub mod channel;
pub mod error;
mod math;
pub mod oracle;
pub mod pauli;
pub mod pipeline;
pub mod purity;
pub mod rng;
pub mod state;

pub use channel::PreparationMethod;
pub use error::{Error, Result};
pub use math::loglog_slope;
pub use pauli::{PauliIndex, PauliString};
pub use pipeline::{run_estimation, EstimationRequest};
pub use purity::{EstimateReport, Marginal, ShotBudget, ShotMode};
pub use state::{DensityMatrix, StateVector};

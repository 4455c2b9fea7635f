//! Photon-number entanglement from a doubly driven biexciton–exciton cascade.
//!
//! Two π-pulses separated by `Δt` drive the ground-to-biexciton transition of
//! a three-level emitter. Photons emitted before and after the second pulse
//! populate four modes (early/late × biexciton/exciton colour) in the state
//! `α|0000⟩ + β|1001⟩ + γ|1111⟩`. This crate builds that state, measures its
//! bipartite correlations, evaluates eavesdropper-conditioned secret rates,
//! and checks the branch weights against two independent dynamics oracles.
//!
//! * [`qmath`]: dense complex matrices, partial trace/transpose, Jacobi
//!   eigensolver, entropies.
//! * [`cascade`]: branch amplitudes and protocol states.
//! * [`entanglement`]: channels, mutual information, conditional mutual
//!   information, negativity.
//! * [`oracle`]: rate-equation integrator and quantum-jump sampler.
//! * [`sweep`], [`secure`], [`figures`], [`validate`]: batch computations
//!   behind the `cascade` command-line tool.

pub mod cascade;
pub mod entanglement;
pub mod error;
pub mod figures;
pub mod oracle;
pub mod qmath;
pub mod secure;
pub mod sweep;
pub mod table;
pub mod validate;

pub use cascade::{
    amplitudes, apply_second_pulse, dephased_density, early_state, final_state, ghz_fidelity,
    ghz_state, Amplitudes, DecayParams, ModeLabel,
};
pub use entanglement::{
    average_mutual_information, conditional_mutual_information, enumerate_channels,
    mutual_information, negativity, Channel, EveSplit, ModeSet,
};
pub use error::{Error, Result};
pub use oracle::{monte_carlo_patterns, rate_equation_populations, PatternCounts, Populations};
pub use qmath::{ComplexMatrix, DensityMatrix, StateVector, SubsystemShape};

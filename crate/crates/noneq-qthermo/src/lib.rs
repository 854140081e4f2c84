//! Nonequilibrium quantum thermodynamics of a single damped bosonic mode.
//!
//! A bosonic mode of frequency ω₀ is linearly coupled to a continuum of
//! reservoir modes (Fano–Anderson model) with an Ohmic spectral density
//! J(ω) = η ω e^{−ω/ω_c}. The reduced dynamics is exact: the retarded
//! propagator u(t,t₀) solves a Volterra integro-differential equation with
//! memory kernel g(t−τ), and the thermal noise function v(t,t) follows from
//! the finite-temperature kernel g̃. From u and v the engine derives
//!
//! - the time-local master-equation coefficients ω(t), γ(t), γ̃(t),
//! - the Fock-basis density matrix and energy populations p_n(t) for a
//!   coherent initial state |α₀⟩,
//! - the energy (thermodynamic) entropy 𝒮(t), the Gaussian von Neumann
//!   entropy S(t), and the relative entropy of coherence C(t) = 𝒮 − S,
//! - the full thermodynamic ledger: U, dW/dt, dQ/dt, entropy rates
//!   Σ = Φ_Q + Φ_C, dynamical temperature T(t) = Q̇/𝒮̇, and free energy
//!   F(t) = U − T 𝒮, with first-law and entropy-balance residuals.
//!
//! Units: ħ = k_B = 1, frequencies in ω₀, times in 1/ω₀, temperatures and
//! energies in ħω₀.
//!
//! The crate is a library first; see `examples/` for runnable tours of each
//! capability and `src/bin/noneq-qthermo.rs` for the thin CLI (`run`,
//! `validate`, `figure`).

pub mod bath;
pub mod coefficients;
pub mod config;
pub mod diff;
pub mod eig;
mod error;
pub mod figures;
pub mod fock;
pub mod gaussian;
pub mod grid;
pub mod output;
pub mod propagator;
pub mod scenario;
pub mod thermo;
pub mod validate;

pub use bath::{BathSpec, KernelTables, QuadratureSpec};
pub use coefficients::MasterCoefficients;
pub use config::SimulationConfig;
pub use error::{Error, Result};
pub use fock::{CoherentInit, FockDensityMatrix};
pub use gaussian::GaussianMoments;
pub use grid::TimeGrid;
pub use propagator::PropagatorSolution;
pub use thermo::{Ledger, TemperatureFlag, ThermoRecord};

use std::sync::Once;

static THREAD_INIT: Once = Once::new();

/// Configure the global rayon pool from `NONEQ_QTHERMO_THREADS`.
///
/// A value of 1 forces fully sequential execution. Results are bitwise
/// identical for any thread count: all parallel reductions use fixed-size
/// chunking with a sequential combine, so the env var only affects speed.
pub fn init_threads_from_env() {
    THREAD_INIT.call_once(|| {
        if let Ok(s) = std::env::var("NONEQ_QTHERMO_THREADS") {
            if let Ok(n) = s.trim().parse::<usize>() {
                if n >= 1 {
                    // Ignore failure: a pool may already exist in this process.
                    let _ = rayon::ThreadPoolBuilder::new()
                        .num_threads(n)
                        .build_global();
                }
            }
        }
    });
}

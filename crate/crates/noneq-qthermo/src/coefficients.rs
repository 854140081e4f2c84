//! Time-local master-equation coefficients from the propagator solution.
//!
//! The exact master equation for the reduced density matrix carries a
//! renormalized frequency, a dissipation rate, and a fluctuation rate,
//!
//!   ω(t) = −Im[u̇(t,t₀)/u(t,t₀)],
//!   γ(t) = −Re[u̇(t,t₀)/u(t,t₀)],
//!   γ̃(t) = v̇(t,t) + 2 v(t,t) γ(t),
//!
//! all fully determined by u and v. The ratio u̇/u is singular where u
//! crosses zero; such zeros occur only in the strong-coupling bound-state
//! regime, so the series is truncated at the last safe index and the event
//! flagged rather than letting NaNs propagate.

use serde::Serialize;

use crate::grid::TimeGrid;
use crate::propagator::PropagatorSolution;
use crate::{Error, Result};

/// Default |u| floor below which u̇/u is treated as singular.
pub const U_FLOOR: f64 = 1e-12;

/// ω(t), γ(t), γ̃(t) sampled on the solution grid.
#[derive(Debug, Clone, Serialize)]
pub struct MasterCoefficients {
    #[serde(skip)]
    pub grid: TimeGrid,
    pub omega_ren: Vec<f64>,
    pub gamma: Vec<f64>,
    pub gamma_tilde: Vec<f64>,
    /// Index at which |u| fell below the floor, if it did.
    pub truncated_at: Option<usize>,
}

pub fn derive_coefficients(sol: &PropagatorSolution, u_floor: f64) -> Result<MasterCoefficients> {
    let n = sol.u.len();
    let mut omega_ren = Vec::with_capacity(n);
    let mut gamma = Vec::with_capacity(n);
    let mut truncated_at = None;
    for j in 0..n {
        if sol.u[j].norm() < u_floor {
            truncated_at = Some(j);
            break;
        }
        let ratio = sol.u_dot[j] / sol.u[j];
        omega_ren.push(-ratio.im);
        gamma.push(-ratio.re);
    }
    if truncated_at == Some(0) {
        return Err(Error::numerics(
            "derive_coefficients",
            "|u(t₀)| below floor; propagator solution is unusable",
        ));
    }
    let len = omega_ren.len();
    let gamma_tilde: Vec<f64> = (0..len)
        .map(|j| sol.v_dot[j] + 2.0 * sol.v[j] * gamma[j])
        .collect();
    Ok(MasterCoefficients {
        grid: sol.grid.clone(),
        omega_ren,
        gamma,
        gamma_tilde,
        truncated_at,
    })
}

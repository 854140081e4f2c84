//! The thermodynamic ledger: energies, work/heat rates, entropies, fluxes,
//! dynamical temperature, free energy, and the residuals of the first law
//! and the entropy balance, per time step.
//!
//! With n(t) = |u|²|α₀|² + v(t,t) and the renormalized frequency ω(t):
//!
//!   U = ω n,   dW/dt = ω̇ n,   dQ/dt = ω (γ̃ − 2γ n),
//!   Σ = dS/dt = Φ_Q + Φ_C,   Φ_Q = d𝒮/dt = Q̇/T,   Φ_C = −dC/dt,
//!   T = Q̇ / 𝒮̇,   F = U − T 𝒮.
//!
//! Φ_Q is computed as d𝒮/dt and T as the ratio Q̇/𝒮̇; the algebraically
//! identical route (T first, then Φ_Q = Q̇/T) is exercised as a consistency
//! check, not a second code path. All differentiated series share the one
//! stencil in [`crate::diff`]. The first-law residual dU/dt − dW/dt − dQ/dt
//! is a genuine cross-check: dU/dt differences the product ω·n while the
//! other two come from the coefficient formulas, so the residual measures
//! real solver/stencil error, vanishing as O(Δt²).
//!
//! Temperature policy: the ratio is taken where |d𝒮/dt| ≥ s_floor; samples
//! below the floor are bridged — isolated gaps by linear interpolation
//! (`regularized`), trailing equilibrium plateaus by holding the last stable
//! value (`equilibrium-limit`). The first and last samples carry one-sided
//! stencils over a 0/0 limit at t₀ and a scheme switch at t_end, so they are
//! always bridged from the nearest interior value.

use serde::Serialize;

use crate::coefficients::MasterCoefficients;
use crate::diff::derivative;
use crate::fock::{self, CoherentInit};
use crate::gaussian;
use crate::propagator::PropagatorSolution;
use crate::{Error, Result};

/// Default floor on |d𝒮/dt| below which the temperature ratio is not taken.
pub const S_FLOOR: f64 = 1e-8;

/// Provenance of each temperature sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TemperatureFlag {
    Stable,
    Regularized,
    EquilibriumLimit,
}

impl TemperatureFlag {
    pub fn as_str(&self) -> &'static str {
        match self {
            TemperatureFlag::Stable => "stable",
            TemperatureFlag::Regularized => "regularized",
            TemperatureFlag::EquilibriumLimit => "equilibrium-limit",
        }
    }
}

impl std::fmt::Display for TemperatureFlag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One time step of the ledger. Units: ħ = k = 1, energies in ħω₀.
#[derive(Debug, Clone, Serialize)]
pub struct ThermoRecord {
    pub time: f64,
    pub internal_energy: f64,
    pub occupation: f64,
    pub du_dt: f64,
    pub work_rate: f64,
    pub heat_rate: f64,
    pub energy_entropy: f64,
    pub vn_entropy: f64,
    pub coherence: f64,
    pub entropy_rate: f64,
    pub flux_heat: f64,
    pub flux_coherence: f64,
    pub temperature: f64,
    pub temperature_flag: TemperatureFlag,
    pub free_energy: f64,
    pub first_law_residual: f64,
    pub balance_residual: f64,
}

/// Options controlling ledger assembly.
#[derive(Debug, Clone)]
pub struct LedgerOptions {
    pub s_floor: f64,
    pub tail_tol: f64,
    /// Fixed Fock truncation; `None` selects automatically from the tail.
    pub n_max: Option<usize>,
}

impl Default for LedgerOptions {
    fn default() -> Self {
        LedgerOptions {
            s_floor: S_FLOOR,
            tail_tol: 1e-10,
            n_max: None,
        }
    }
}

/// Assembled ledger plus bookkeeping from the build.
#[derive(Debug, Clone)]
pub struct Ledger {
    pub records: Vec<ThermoRecord>,
    pub n_max_used: usize,
    pub max_tail_mass: f64,
    pub warnings: Vec<String>,
}

/// U(t) = ω(t)·n(t) at one grid index.
pub fn internal_energy(
    coeffs: &MasterCoefficients,
    sol: &PropagatorSolution,
    init: &CoherentInit,
    t_index: usize,
) -> f64 {
    coeffs.omega_ren[t_index] * occupation(sol, init, t_index)
}

/// n(t) = |u|²|α₀|² + v(t,t).
pub fn occupation(sol: &PropagatorSolution, init: &CoherentInit, t_index: usize) -> f64 {
    sol.u[t_index].norm_sqr() * init.alpha0.norm_sqr() + sol.v[t_index]
}

/// dW/dt = ω̇·n with ω̇ from the shared stencil (local evaluation).
pub fn work_rate(
    coeffs: &MasterCoefficients,
    sol: &PropagatorSolution,
    init: &CoherentInit,
    t_index: usize,
) -> f64 {
    let om = &coeffs.omega_ren;
    let h = coeffs.grid.step;
    let len = om.len();
    let domega = if t_index == 0 {
        (-3.0 * om[0] + 4.0 * om[1] - om[2]) / (2.0 * h)
    } else if t_index == len - 1 {
        (3.0 * om[len - 1] - 4.0 * om[len - 2] + om[len - 3]) / (2.0 * h)
    } else {
        (om[t_index + 1] - om[t_index - 1]) / (2.0 * h)
    };
    domega * occupation(sol, init, t_index)
}

/// dQ/dt = ω (γ̃ − 2γ n).
pub fn heat_rate(
    coeffs: &MasterCoefficients,
    sol: &PropagatorSolution,
    init: &CoherentInit,
    t_index: usize,
) -> f64 {
    let n = occupation(sol, init, t_index);
    coeffs.omega_ren[t_index] * (coeffs.gamma_tilde[t_index] - 2.0 * coeffs.gamma[t_index] * n)
}

/// Entropy rates from the sampled entropy series.
pub struct EntropyRates {
    /// Σ = dS/dt (total entropy rate).
    pub sigma: Vec<f64>,
    /// Φ_Q = d𝒮/dt (entropy flux from heat exchange).
    pub phi_q: Vec<f64>,
    /// Φ_C = −dC/dt (entropy production from coherence loss).
    pub phi_c: Vec<f64>,
}

pub fn entropy_rates(s_energy: &[f64], s_vn: &[f64], coherence: &[f64], dt: f64) -> EntropyRates {
    let sigma = derivative(s_vn, dt);
    let phi_q = derivative(s_energy, dt);
    let phi_c: Vec<f64> = derivative(coherence, dt).into_iter().map(|d| -d).collect();
    EntropyRates {
        sigma,
        phi_q,
        phi_c,
    }
}

/// F = U − T·𝒮.
pub fn free_energy(internal_energy: f64, temperature: f64, s_energy: f64) -> f64 {
    internal_energy - temperature * s_energy
}

/// Series-level dynamical temperature T = Q̇/𝒮̇ with the bridging policy.
///
/// Returns (T, flags, warnings).
pub fn dynamical_temperature(
    heat: &[f64],
    ds_energy: &[f64],
    s_floor: f64,
) -> (Vec<f64>, Vec<TemperatureFlag>, Vec<String>) {
    let n = heat.len();
    let mut warnings = Vec::new();
    let mut stable = vec![false; n];
    for j in 0..n {
        stable[j] = ds_energy[j].abs() >= s_floor;
    }
    // Boundary samples carry one-sided stencils over vanishing rates; always bridge.
    if n >= 1 {
        stable[0] = false;
    }
    if n >= 2 {
        stable[n - 1] = false;
    }

    let mut temp = vec![f64::NAN; n];
    for j in 0..n {
        if stable[j] {
            temp[j] = heat[j] / ds_energy[j];
        }
    }

    let first_stable = (0..n).find(|&j| stable[j]);
    let Some(first) = first_stable else {
        warnings.push("no stable temperature samples; T column is NaN".to_string());
        return (temp, vec![TemperatureFlag::EquilibriumLimit; n], warnings);
    };

    let mut flags = vec![TemperatureFlag::Stable; n];
    let mut last_stable: Option<usize> = None;
    for j in 0..n {
        if stable[j] {
            last_stable = Some(j);
            continue;
        }
        // Nearest stable neighbors.
        let left = last_stable;
        let right = (j + 1..n).find(|&k| stable[k]);
        let q_floor = s_floor * temp[left.unwrap_or(first)].abs().max(1.0);
        match (left, right) {
            (Some(l), Some(r)) => {
                // Isolated gap: bridge by linear interpolation.
                let w = (j - l) as f64 / (r - l) as f64;
                temp[j] = temp[l] * (1.0 - w) + temp[r] * w;
                flags[j] = TemperatureFlag::Regularized;
            }
            (None, Some(r)) => {
                temp[j] = temp[r];
                flags[j] = TemperatureFlag::Regularized;
            }
            (Some(l), None) => {
                temp[j] = temp[l];
                if ds_energy[j].abs() < s_floor && heat[j].abs() < q_floor {
                    flags[j] = TemperatureFlag::EquilibriumLimit;
                } else {
                    flags[j] = TemperatureFlag::Regularized;
                }
            }
            (None, None) => unreachable!("first_stable exists"),
        }
        if ds_energy[j].abs() < s_floor && heat[j].abs() >= q_floor {
            warnings.push(format!(
                "sample {j}: |d𝒮/dt| = {:.3e} below floor while |dQ/dt| = {:.3e}; \
                 temperature bridged",
                ds_energy[j].abs(),
                heat[j].abs()
            ));
        }
    }
    (temp, flags, warnings)
}

/// Endpoint differences of the integrated balance ΔS = Δ𝒮 + ΔC over
/// [records[i0], records[i1]]; note ΔC = C(t₀) − C(τ).
pub struct BalanceDeltas {
    pub delta_s_vn: f64,
    pub delta_s_energy: f64,
    pub delta_coherence: f64,
    pub residual: f64,
}

pub fn integrate_balance(records: &[ThermoRecord], i0: usize, i1: usize) -> Result<BalanceDeltas> {
    let (a, b) = (&records[i0], &records[i1]);
    let delta_s_vn = b.vn_entropy - a.vn_entropy;
    let delta_s_energy = b.energy_entropy - a.energy_entropy;
    let delta_coherence = a.coherence - b.coherence;
    let residual = delta_s_vn - delta_s_energy - delta_coherence;
    if residual.abs() > 1e-6 {
        return Err(Error::inconsistency(
            "integrate_balance",
            format!("ΔS − Δ𝒮 − ΔC = {residual:.3e}"),
        ));
    }
    Ok(BalanceDeltas {
        delta_s_vn,
        delta_s_energy,
        delta_coherence,
        residual,
    })
}

/// Assemble the full ledger on the solution grid.
pub fn build_ledger(
    sol: &PropagatorSolution,
    coeffs: &MasterCoefficients,
    init: &CoherentInit,
    opts: &LedgerOptions,
) -> Result<Ledger> {
    let len = coeffs.omega_ren.len();
    if len < 3 {
        return Err(Error::domain("build_ledger", "need at least 3 samples"));
    }
    let dt = sol.grid.step;
    let mut warnings = Vec::new();
    if sol.report.contractivity_warning {
        warnings.push(format!(
            "|u| reached {:.6} > 1 + {:.0e}: step too coarse",
            sol.report.max_u_norm,
            crate::propagator::U_CONTRACT_TOL
        ));
    }
    if let Some(k) = coeffs.truncated_at {
        warnings.push(format!(
            "coefficients truncated at index {k} (|u| below floor)"
        ));
    }

    let occ: Vec<f64> = (0..len).map(|j| occupation(sol, init, j)).collect();
    let u_energy: Vec<f64> = (0..len).map(|j| coeffs.omega_ren[j] * occ[j]).collect();
    let du_dt = derivative(&u_energy, dt);
    let domega = derivative(&coeffs.omega_ren, dt);
    let dw: Vec<f64> = (0..len).map(|j| domega[j] * occ[j]).collect();
    let dq: Vec<f64> = (0..len)
        .map(|j| coeffs.omega_ren[j] * (coeffs.gamma_tilde[j] - 2.0 * coeffs.gamma[j] * occ[j]))
        .collect();

    // Fock truncation: size at the most occupied sample, then stream.
    let j_widest = (0..len)
        .max_by(|&a, &b| {
            let na = sol.v[a] + sol.u[a].norm_sqr() * init.alpha0.norm_sqr();
            let nb = sol.v[b] + sol.u[b].norm_sqr() * init.alpha0.norm_sqr();
            na.partial_cmp(&nb).unwrap()
        })
        .unwrap();
    let mut n_max = match opts.n_max {
        Some(n) => n,
        None => fock::n_max_for_tail(sol.u[j_widest], sol.v[j_widest], init.alpha0, opts.tail_tol)?,
    };

    let (s_energy, max_tail) = loop {
        let mut s = Vec::with_capacity(len);
        let mut max_tail = 0.0_f64;
        let mut buf = vec![0.0; n_max + 1];
        let mut ok = true;
        for j in 0..len {
            fock::populations_into(sol.u[j], sol.v[j], init.alpha0, &mut buf)?;
            let tail = 1.0 - buf.iter().sum::<f64>();
            max_tail = max_tail.max(tail);
            if tail > opts.tail_tol {
                ok = false;
                break;
            }
            s.push(fock::energy_entropy(&buf)?);
        }
        if ok {
            break (s, max_tail);
        }
        if opts.n_max.is_some() {
            return Err(Error::Truncation {
                tail: max_tail,
                tol: opts.tail_tol,
                n_max,
            });
        }
        n_max *= 2;
        if n_max > 1 << 22 {
            return Err(Error::Truncation {
                tail: max_tail,
                tol: opts.tail_tol,
                n_max,
            });
        }
    };

    let mut s_vn = Vec::with_capacity(len);
    let mut coherence = Vec::with_capacity(len);
    for (j, &se) in s_energy.iter().enumerate() {
        let m = gaussian::moments_at(sol, init, j)?;
        let s = gaussian::von_neumann_gaussian(m.symplectic_nu)?;
        s_vn.push(s);
        coherence.push(fock::coherence_rel_entropy(se, s)?);
    }

    let rates = entropy_rates(&s_energy, &s_vn, &coherence, dt);
    let (temp, flags, mut t_warn) = dynamical_temperature(&dq, &rates.phi_q, opts.s_floor);
    warnings.append(&mut t_warn);

    let records: Vec<ThermoRecord> = (0..len)
        .map(|j| ThermoRecord {
            time: sol.grid.time(j),
            internal_energy: u_energy[j],
            occupation: occ[j],
            du_dt: du_dt[j],
            work_rate: dw[j],
            heat_rate: dq[j],
            energy_entropy: s_energy[j],
            vn_entropy: s_vn[j],
            coherence: coherence[j],
            entropy_rate: rates.sigma[j],
            flux_heat: rates.phi_q[j],
            flux_coherence: rates.phi_c[j],
            temperature: temp[j],
            temperature_flag: flags[j],
            free_energy: free_energy(u_energy[j], temp[j], s_energy[j]),
            first_law_residual: du_dt[j] - dw[j] - dq[j],
            balance_residual: rates.sigma[j] - rates.phi_q[j] - rates.phi_c[j],
        })
        .collect();

    Ok(Ledger {
        records,
        n_max_used: n_max,
        max_tail_mass: max_tail,
        warnings,
    })
}

impl Ledger {
    /// Max relative Clausius residual |dQ/dt − T·d𝒮/dt| over stable samples.
    pub fn clausius_max_residual(&self) -> f64 {
        self.records
            .iter()
            .filter(|r| r.temperature_flag == TemperatureFlag::Stable)
            .map(|r| {
                (r.heat_rate - r.temperature * r.flux_heat).abs() / r.heat_rate.abs().max(1e-300)
            })
            .fold(0.0, f64::max)
    }
}

//! Fock-basis state of the mode for a coherent initial state |α₀⟩.
//!
//! The evolved state is a displaced thermal state: displacement α(t) =
//! u(t,t₀) α₀ and thermal weight v(t,t). Its matrix elements in the energy
//! basis are, with A(t) = |u|²/(1+v) and x = A|α₀|² = |α|²/(1+v),
//!
//!   ⟨m|ρ|n⟩ = e^{−A|α₀|²} α^m α*^n (1+v)^{−(m+n+1)}
//!             Σ_k √(m!n!) / [(m−k)!(n−k)!k!] · [v/(A|α₀|²)]^k .
//!
//! The bracketed power is singular as α₀ → 0, so production code evaluates
//! the algebraically identical all-positive form
//!
//!   ⟨m|ρ|n⟩ = e^{iφ(m−n)} e^{−x} (1+v)^{−(m+n)/2−1}
//!             Σ_k √(m!n!) / [(m−k)!(n−k)!k!] · v^k x^{(m+n)/2−k} ,
//!
//! (φ = arg α; the x-exponent is ≥ 0 since k ≤ min(m,n)) in log space, which
//! is overflow-free to n ~ 10³ and continuous at α₀ = 0. The printed form is
//! kept in the tests as a small-n oracle. The diagonal satisfies a three-term
//! recurrence (Laguerre ladder of the displaced thermal distribution),
//!
//!   (n+1) p_{n+1} = [(2n+1)v + x] p_n / (1+v) − n [v/(1+v)]² p_{n−1},
//!
//! giving all populations in O(n_max) — the energy entropy 𝒮(t) = −Σ pₙ ln pₙ
//! is evaluated from it at every output time.

use ndarray::Array2;
use num_complex::Complex64;

use crate::eig::hermitian_eigenvalues;
use crate::propagator::PropagatorSolution;
use crate::{Error, Result};

/// Coherent initial amplitude α₀ (α₀ = 0 degenerates to vacuum).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentInit {
    pub alpha0: Complex64,
}

impl CoherentInit {
    pub fn new(alpha0: Complex64) -> Self {
        CoherentInit { alpha0 }
    }
}

/// Truncated density matrix snapshot at one time.
#[derive(Debug, Clone)]
pub struct FockDensityMatrix {
    pub time: f64,
    pub n_max: usize,
    pub elements: Array2<Complex64>,
    pub populations: Vec<f64>,
    pub tail_mass: f64,
}

/// Negative-population slack from pure rounding.
const P_NEG_TOL: f64 = 1e-14;
/// v(t,t) may round slightly negative; beyond this it is an upstream bug.
const V_NEG_TOL: f64 = 1e-6;

fn checked_uv(u: Complex64, v: f64, op: &'static str) -> Result<(Complex64, f64)> {
    if v < -V_NEG_TOL {
        return Err(Error::numerics(
            op,
            format!("v(t,t) = {v} < 0 from upstream"),
        ));
    }
    Ok((u, v.max(0.0)))
}

/// Displaced weight x = |u α₀|²/(1+v) and phase φ = arg(u α₀).
fn displaced_params(u: Complex64, v: f64, alpha0: Complex64) -> (f64, f64) {
    let alpha = u * alpha0;
    (alpha.norm_sqr() / (1.0 + v), alpha.arg())
}

/// All populations p_0..p_{n_max} for displaced weight x and thermal weight v.
pub fn populations_from_uv(
    u: Complex64,
    v: f64,
    alpha0: Complex64,
    n_max: usize,
) -> Result<Vec<f64>> {
    let mut p = vec![0.0; n_max + 1];
    populations_into(u, v, alpha0, &mut p)?;
    Ok(p)
}

/// Fill a caller-owned buffer with populations p_0..p_{buf.len()−1}.
pub fn populations_into(u: Complex64, v: f64, alpha0: Complex64, p: &mut [f64]) -> Result<()> {
    let (u, v) = checked_uv(u, v, "populations_into")?;
    let (x, _) = displaced_params(u, v, alpha0);
    let n_max = p.len() - 1;
    let opv = 1.0 + v;
    p[0] = (-x).exp() / opv;
    if n_max == 0 {
        return Ok(());
    }
    p[1] = (v + x) / opv * p[0];
    let ratio2 = (v / opv) * (v / opv);
    for n in 1..n_max {
        let a = ((2 * n + 1) as f64 * v + x) / opv;
        p[n + 1] = (a * p[n] - n as f64 * ratio2 * p[n - 1]) / (n + 1) as f64;
    }
    Ok(())
}

/// Populations from the solved propagator at one grid index.
pub fn populations_at(
    sol: &PropagatorSolution,
    init: &CoherentInit,
    t_index: usize,
    n_max: usize,
) -> Result<Vec<f64>> {
    populations_from_uv(sol.u[t_index], sol.v[t_index], init.alpha0, n_max)
}

/// Starting truncation guess; callers double until the tail passes.
pub fn suggest_n_max(alpha0: Complex64, v_max: f64) -> usize {
    ((10.0 * (alpha0.norm_sqr() + v_max.max(0.0))).ceil() as usize).max(16)
}

/// Smallest power-of-two-scaled truncation whose tail mass meets `tail_tol`.
pub fn n_max_for_tail(u: Complex64, v: f64, alpha0: Complex64, tail_tol: f64) -> Result<usize> {
    let mut n_max = suggest_n_max(alpha0, v);
    loop {
        let p = populations_from_uv(u, v, alpha0, n_max)?;
        let tail = 1.0 - p.iter().sum::<f64>();
        if tail <= tail_tol {
            return Ok(n_max);
        }
        n_max *= 2;
        if n_max > 1 << 22 {
            return Err(Error::Truncation {
                tail,
                tol: tail_tol,
                n_max,
            });
        }
    }
}

/// ln k! table: lf[k] = ln Γ(k+1).
fn ln_factorials(n: usize) -> Vec<f64> {
    let mut lf = vec![0.0; n + 1];
    for k in 1..=n {
        lf[k] = lf[k - 1] + (k as f64).ln();
    }
    lf
}

/// Full density matrix from (u, v, α₀) at the given truncation.
pub fn density_matrix_from_uv(
    u: Complex64,
    v: f64,
    alpha0: Complex64,
    time: f64,
    n_max: usize,
    tail_tol: f64,
) -> Result<FockDensityMatrix> {
    let (u, v) = checked_uv(u, v, "density_matrix_from_uv")?;
    let (x, phi) = displaced_params(u, v, alpha0);
    let opv = 1.0 + v;
    let ln_opv = opv.ln();
    let ln_v = if v > 0.0 { v.ln() } else { f64::NEG_INFINITY };
    let ln_x = if x > 0.0 { x.ln() } else { f64::NEG_INFINITY };
    let lf = ln_factorials(n_max);

    let dim = n_max + 1;
    let mut rho = Array2::<Complex64>::zeros((dim, dim));
    let mut terms: Vec<f64> = Vec::with_capacity(dim);
    for m in 0..dim {
        for n in 0..=m {
            let half_mn = 0.5 * (m + n) as f64;
            terms.clear();
            let kmax = n.min(m);
            for k in 0..=kmax {
                // v^k x^{(m+n)/2−k}: skip terms that are exactly zero.
                let xpow = half_mn - k as f64;
                let lt_v = if k == 0 {
                    0.0
                } else if v == 0.0 {
                    continue;
                } else {
                    k as f64 * ln_v
                };
                let lt_x = if xpow == 0.0 {
                    0.0
                } else if x == 0.0 {
                    continue;
                } else {
                    xpow * ln_x
                };
                let lt = 0.5 * (lf[m] + lf[n]) - lf[m - k] - lf[n - k] - lf[k] + lt_v + lt_x
                    - x
                    - (half_mn + 1.0) * ln_opv;
                terms.push(lt);
            }
            let mag = if terms.is_empty() {
                0.0
            } else {
                let mx = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                if mx == f64::NEG_INFINITY {
                    0.0
                } else {
                    let s: f64 = terms.iter().map(|lt| (lt - mx).exp()).sum();
                    (mx + s.ln()).exp()
                }
            };
            let val = mag * Complex64::new(0.0, phi * (m as f64 - n as f64)).exp();
            rho[[m, n]] = val;
            rho[[n, m]] = val.conj();
        }
    }

    let populations: Vec<f64> = (0..dim).map(|i| rho[[i, i]].re).collect();
    for (n, p) in populations.iter().enumerate() {
        if *p < -P_NEG_TOL {
            return Err(Error::numerics(
                "density_matrix_from_uv",
                format!("negative population p_{n} = {p}"),
            ));
        }
    }
    let tail_mass = 1.0 - populations.iter().sum::<f64>();
    if tail_mass > tail_tol {
        return Err(Error::Truncation {
            tail: tail_mass,
            tol: tail_tol,
            n_max,
        });
    }
    Ok(FockDensityMatrix {
        time,
        n_max,
        elements: rho,
        populations,
        tail_mass,
    })
}

/// Density matrix from the solved propagator at one grid index.
pub fn density_matrix_at(
    sol: &PropagatorSolution,
    init: &CoherentInit,
    t_index: usize,
    n_max: usize,
    tail_tol: f64,
) -> Result<FockDensityMatrix> {
    density_matrix_from_uv(
        sol.u[t_index],
        sol.v[t_index],
        init.alpha0,
        sol.grid.time(t_index),
        n_max,
        tail_tol,
    )
}

/// Energy (thermodynamic) entropy 𝒮 = −Σ pₙ ln pₙ, with 0·ln 0 = 0.
pub fn energy_entropy(p: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for (n, &pn) in p.iter().enumerate() {
        if pn < -P_NEG_TOL {
            return Err(Error::numerics(
                "energy_entropy",
                format!("p_{n} = {pn} < 0"),
            ));
        }
        if pn > 0.0 {
            s -= pn * pn.ln();
        }
    }
    Ok(s)
}

/// von Neumann entropy from the eigenvalue spectrum of the truncated matrix.
///
/// Oracle route for the Gaussian-formula entropy; eigenvalues above −1e−10
/// are clipped to zero, anything lower signals broken truncation/numerics.
pub fn von_neumann_fock(rho: &FockDensityMatrix) -> Result<f64> {
    let evals = hermitian_eigenvalues(&rho.elements, 1e-12)?;
    let mut s = 0.0;
    for lam in evals {
        if lam < -1e-10 {
            return Err(Error::numerics(
                "von_neumann_fock",
                format!("eigenvalue {lam:.3e} below clip window"),
            ));
        }
        if lam > 0.0 {
            s -= lam * lam.ln();
        }
    }
    Ok(s)
}

/// Relative entropy of coherence C = 𝒮 − S ≥ 0 (energy eigenbasis).
pub fn coherence_rel_entropy(s_energy: f64, s_vn: f64) -> Result<f64> {
    let c = s_energy - s_vn;
    if c < -1e-6 {
        return Err(Error::inconsistency(
            "coherence_rel_entropy",
            format!("C = {c:.3e} < 0: entropy routes disagree (mismatched truncation?)"),
        ));
    }
    Ok(c)
}

//! Closed-system sanity check: with η = 0 the mode never feels the bath.
//!
//! ```bash
//! cargo run --release --example closed_system
//! ```
//!
//! Expect |u(t)| = 1, v(t,t) = 0, ω(t) = ω₀, and vanishing work/heat rates;
//! the coherent state stays pure so C(t) stays at the Poisson entropy.

use noneq_qthermo::config::parse_config;
use noneq_qthermo::scenario::run_pipeline;

fn main() -> noneq_qthermo::Result<()> {
    let cfg = parse_config(r#"{"eta_over_eta_c": 0.0, "t_end": 20.0, "dt": 0.001}"#)?;
    let (sol, coeffs, ledger, _) = run_pipeline(&cfg)?;

    let max_u_dev = sol
        .u
        .iter()
        .map(|u| (u.norm() - 1.0).abs())
        .fold(0.0, f64::max);
    let max_v = sol.v.iter().cloned().fold(0.0, f64::max);
    let max_gamma = coeffs.gamma.iter().map(|g| g.abs()).fold(0.0, f64::max);
    let max_q = ledger
        .records
        .iter()
        .map(|r| r.heat_rate.abs())
        .fold(0.0, f64::max);
    let max_w = ledger
        .records
        .iter()
        .map(|r| r.work_rate.abs())
        .fold(0.0, f64::max);

    println!("closed system (eta = 0), t in [0, 20/omega0], dt = 1e-3:");
    println!("  max | |u(t)| - 1 |   = {max_u_dev:.3e}   (unitary evolution)");
    println!("  max v(t,t)          = {max_v:.3e}   (no thermal excitation)");
    println!("  max |gamma(t)|      = {max_gamma:.3e}   (no dissipation)");
    println!("  max |dW/dt|         = {max_w:.3e}");
    println!("  max |dQ/dt|         = {max_q:.3e}");

    let first = &ledger.records[0];
    let last = ledger.records.last().unwrap();
    println!(
        "  U(0) = {:.6}, U(t_end) = {:.6}  (constant energy)",
        first.internal_energy, last.internal_energy
    );
    println!(
        "  C(0) = {:.6}, C(t_end) = {:.6}  (coherence preserved; Poisson(|alpha0|^2=1) entropy)",
        first.coherence, last.coherence
    );
    Ok(())
}

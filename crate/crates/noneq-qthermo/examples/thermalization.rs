//! Dynamical emergence of equilibrium: the dynamical temperature
//! T(t) = Q̇/𝒮̇ climbs from its early-time value to the reservoir
//! temperature, while U and 𝒮 saturate and F decreases monotonically.
//!
//! ```bash
//! cargo run --release --example thermalization
//! ```

use noneq_qthermo::bath::bose_occupation;
use noneq_qthermo::config::parse_config;
use noneq_qthermo::scenario::run_pipeline;

fn main() -> noneq_qthermo::Result<()> {
    println!("thermalization at eta = 0.1 eta_c (relaxation rate 2*gamma ~ 0.05 omega0):");
    for k_t0 in [15.0, 20.0, 25.0] {
        let cfg = parse_config(&format!(
            r#"{{"eta_over_eta_c":0.1,"omega_c":10,"kT0":{k_t0},"alpha0_re":1,"dt":0.008,"t_end":120}}"#
        ))?;
        let (_, coeffs, ledger, _) = run_pipeline(&cfg)?;
        let r = &ledger.records;
        println!();
        println!("kT0 = {k_t0} hbar*omega0:");
        println!(
            "{:>7} {:>10} {:>10} {:>10} {:>12} {:>8}",
            "t", "U", "S_energy", "T", "F", "flag"
        );
        for &t in &[0.5f64, 2.0, 10.0, 30.0, 60.0, 120.0] {
            let j = ((t / 0.008).round() as usize).min(r.len() - 1);
            let x = &r[j];
            println!(
                "{:>7.1} {:>10.4} {:>10.4} {:>10.4} {:>12.4} {:>8}",
                x.time,
                x.internal_energy,
                x.energy_entropy,
                x.temperature,
                x.free_energy,
                x.temperature_flag
            );
        }
        let j_end = r.len() - 1;
        let nbar = bose_occupation(coeffs.omega_ren[j_end], k_t0)?;
        println!(
            "  T(t_end)/T0 = {:.4}; n(t_end) = {:.3} vs thermal n̄(omega(t_end)) = {:.3}",
            r[j_end].temperature / k_t0,
            r[j_end].occupation,
            nbar
        );
        println!(
            "  renormalized frequency omega(t_end) = {:.4} omega0 (bare mode red-shifted by the bath)",
            coeffs.omega_ren[j_end]
        );
    }
    Ok(())
}

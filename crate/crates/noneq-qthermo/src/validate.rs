//! The self-check suite behind `noneq-qthermo validate`: every module's
//! invariants plus the headline physics checks, on grids sized to finish in
//! minutes. `fast` trims windows further; `dt_scale` coarsens every grid by
//! that factor (useful to watch the convergence-sensitive checks fail).

use std::time::Instant;

use num_complex::Complex64;

use crate::bath::{bose_occupation, BathSpec, KernelTables};
use crate::config::parse_config;
use crate::fock::{self, CoherentInit};
use crate::gaussian;
use crate::grid::TimeGrid;
use crate::propagator::{solve_u, solve_with_tables};
use crate::scenario::run_pipeline;
use crate::thermo::{integrate_balance, TemperatureFlag};
use crate::Result;

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    pub pass: bool,
}

impl Check {
    fn le(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Check {
            name: name.into(),
            measured,
            bound,
            pass: measured <= bound,
        }
    }

    fn in_range(name: impl Into<String>, measured: f64, lo: f64, hi: f64) -> Self {
        Check {
            name: name.into(),
            measured,
            bound: hi,
            pass: (lo..=hi).contains(&measured),
        }
    }
}

#[derive(Debug)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    pub elapsed_seconds: f64,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn render_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<58} {:>13} {:>13}  {}\n",
            "check", "measured", "bound", "status"
        ));
        for c in &self.checks {
            out.push_str(&format!(
                "{:<58} {:>13.4e} {:>13.4e}  {}\n",
                c.name,
                c.measured,
                c.bound,
                if c.pass { "PASS" } else { "FAIL" }
            ));
        }
        out.push_str(&format!(
            "\n{} of {} checks passed in {:.1} s\n",
            self.checks.iter().filter(|c| c.pass).count(),
            self.checks.len(),
            self.elapsed_seconds
        ));
        out
    }
}

fn fig_cfg(k_t0: f64, t_end: f64, dt: f64) -> crate::config::SimulationConfig {
    parse_config(&format!(
        r#"{{"eta_over_eta_c":0.1,"omega_c":10,"kT0":{k_t0},"alpha0_re":1,"dt":{dt},"t_end":{t_end}}}"#
    ))
    .expect("static config")
}

pub fn run_validation(fast: bool, dt_scale: f64) -> Result<ValidationReport> {
    let started = Instant::now();
    let mut checks = Vec::new();

    checks.extend(closed_system(dt_scale)?);
    checks.push(u_convergence(dt_scale)?);
    checks.push(v_oracle(dt_scale)?);
    checks.push(entropy_routes(fast, dt_scale)?);
    checks.push(first_law(fast, dt_scale)?);
    checks.extend(fig1_suite(dt_scale)?);
    checks.extend(work_rate(fast, dt_scale)?);
    if !fast {
        checks.extend(thermalization(dt_scale)?);
    }

    Ok(ValidationReport {
        checks,
        elapsed_seconds: started.elapsed().as_secs_f64(),
    })
}

fn closed_system(dt_scale: f64) -> Result<Vec<Check>> {
    let cfg = parse_config(&format!(
        r#"{{"eta_over_eta_c":0,"t_end":10.0,"dt":{}}}"#,
        1e-3 * dt_scale
    ))
    .unwrap();
    let (sol, _, ledger, _) = run_pipeline(&cfg)?;
    let max_u_dev = sol
        .u
        .iter()
        .map(|u| (u.norm() - 1.0).abs())
        .fold(0.0, f64::max);
    let max_v = sol.v.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let max_dq = ledger
        .records
        .iter()
        .map(|r| r.heat_rate.abs())
        .fold(0.0, f64::max);
    let max_dw = ledger
        .records
        .iter()
        .map(|r| r.work_rate.abs())
        .fold(0.0, f64::max);
    Ok(vec![
        Check::le("closed system: max | |u|-1 |", max_u_dev, 1e-8),
        Check::le("closed system: max |v|", max_v, 1e-8),
        Check::le("closed system: max |dQ/dt|", max_dq, 1e-8),
        Check::le("closed system: max |dW/dt|", max_dw, 1e-8),
    ])
}

fn u_convergence(dt_scale: f64) -> Result<Check> {
    let bath = BathSpec::from_eta_ratio(0.1, 10.0, 20.0)?;
    let base = 4e-3 * dt_scale;
    let run = |dt: f64| -> Result<Vec<Complex64>> {
        let grid = TimeGrid::new(0.0, 5.0, dt)?;
        let tables = KernelTables::build(&bath, &grid, 50.0)?;
        Ok(solve_u(&tables, &grid).0)
    };
    let (u1, u2, u4) = (run(base)?, run(base / 2.0)?, run(base / 4.0)?);
    let diff = |c: &[Complex64], f: &[Complex64]| {
        c.iter()
            .enumerate()
            .map(|(j, x)| (x - f[2 * j]).norm())
            .fold(0.0, f64::max)
    };
    let ratio = diff(&u1, &u2) / diff(&u2, &u4);
    Ok(Check::in_range(
        "u convergence: halving ratio (want ~4)",
        ratio,
        3.5,
        4.5,
    ))
}

fn v_oracle(dt_scale: f64) -> Result<Check> {
    let bath = BathSpec::from_eta_ratio(0.1, 10.0, 20.0)?;
    let grid = TimeGrid::new(0.0, 10.0, 0.05 * dt_scale)?;
    let tables = KernelTables::build(&bath, &grid, 50.0)?;
    let sol = solve_with_tables(&tables, &grid);
    let n = grid.count - 1;
    let mut max_rel = 0.0_f64;
    for m in [n / 4, n / 2, n] {
        let w = |a: usize| if a == 0 || a == m { 0.5 } else { 1.0 };
        let mut acc = Complex64::new(0.0, 0.0);
        for a in 0..=m {
            for b in 0..=m {
                acc += w(a)
                    * w(b)
                    * sol.u[a]
                    * tables.gtilde(b as isize - a as isize)
                    * sol.u[b].conj();
            }
        }
        let brute = acc * grid.step * grid.step;
        max_rel = max_rel.max((sol.v[m] - brute.re).abs() / brute.re.abs().max(1e-300));
    }
    Ok(Check::le(
        "v(t,t): brute-force double sum, max rel diff",
        max_rel,
        1e-10,
    ))
}

fn entropy_routes(fast: bool, dt_scale: f64) -> Result<Check> {
    let t_end = if fast { 10.0 } else { 20.0 };
    let cfg = fig_cfg(2.0, t_end, 2e-3 * dt_scale);
    let (sol, _, _, _) = run_pipeline(&cfg)?;
    let init = CoherentInit::new(Complex64::new(1.0, 0.0));
    let v_max = sol.v.iter().cloned().fold(0.0, f64::max);
    let n_last = sol.u.len() - 1;
    let n_max = fock::n_max_for_tail(sol.u[n_last], v_max, init.alpha0, 1e-10)?;
    let mut max_diff = 0.0_f64;
    let samples = 10;
    for k in 1..=samples {
        let j = k * n_last / samples;
        let rho = fock::density_matrix_at(&sol, &init, j, n_max, 1e-10)?;
        let s_fock = fock::von_neumann_fock(&rho)?;
        let m = gaussian::moments_at(&sol, &init, j)?;
        let s_gauss = gaussian::von_neumann_gaussian(m.symplectic_nu)?;
        max_diff = max_diff.max((s_fock - s_gauss).abs());
    }
    Ok(Check::le(
        "entropy routes: |S_gaussian - S_fock| at kT0=2",
        max_diff,
        1e-4,
    ))
}

fn first_law(fast: bool, dt_scale: f64) -> Result<Check> {
    let t_end = if fast { 1.5 } else { 3.0 };
    let cfg = fig_cfg(20.0, t_end, 1e-4 * dt_scale);
    let (_, _, ledger, _) = run_pipeline(&cfg)?;
    let worst = ledger
        .records
        .iter()
        .map(|r| r.first_law_residual.abs() / (1e-6 * r.du_dt.abs().max(1.0)))
        .fold(0.0, f64::max);
    Ok(Check::le(
        "first law: residual / (1e-6 max(1,|dU/dt|))",
        worst,
        1.0,
    ))
}

fn fig1_suite(dt_scale: f64) -> Result<Vec<Check>> {
    let cfg = fig_cfg(20.0, 30.0, 2e-3 * dt_scale);
    let (_, _, ledger, _) = run_pipeline(&cfg)?;
    let r = &ledger.records;
    let n = r.len();
    let inner = &r[1..n - 1];
    let min_c = r.iter().map(|x| x.coherence).fold(f64::INFINITY, f64::min);
    let min_phi_c = inner
        .iter()
        .map(|x| x.flux_coherence)
        .fold(f64::INFINITY, f64::min);
    let max_balance = r
        .iter()
        .map(|x| x.balance_residual.abs())
        .fold(0.0, f64::max);
    let min_ds = inner
        .windows(2)
        .map(|w| w[1].energy_entropy - w[0].energy_entropy)
        .fold(f64::INFINITY, f64::min);
    let min_ds_vn = inner
        .windows(2)
        .map(|w| w[1].vn_entropy - w[0].vn_entropy)
        .fold(f64::INFINITY, f64::min);
    let max_df = inner
        .windows(2)
        .map(|w| w[1].free_energy - w[0].free_energy)
        .fold(f64::NEG_INFINITY, f64::max);
    // crossover: Φ_C dominates first, Φ_Q later
    let cross = inner.iter().position(|x| x.flux_heat > x.flux_coherence);
    let crossed_back = cross
        .map(|k| {
            inner[..k]
                .iter()
                .filter(|x| x.flux_coherence > x.flux_heat)
                .count()
                > 0
                && k > 0
        })
        .unwrap_or(false);
    let balance = integrate_balance(r, 0, n - 1)?;
    Ok(vec![
        Check::le("entropy ordering: -min C(t)", -min_c, 1e-6),
        Check::le("Spohn inequality: -min Phi_C(t)", -min_phi_c, 1e-6),
        Check::le(
            "entropy balance: max |Sigma - Phi_Q - Phi_C|",
            max_balance,
            1e-10,
        ),
        Check::le("second law: -min d(S_energy) per step", -min_ds, 1e-8),
        Check::le(
            "von Neumann entropy: -min d(S_vn) per step",
            -min_ds_vn,
            1e-8,
        ),
        Check::le("free energy: max dF per step", max_df, 1e-8),
        Check {
            name: "flux crossover: Phi_C first, then Phi_Q".into(),
            measured: if crossed_back { 1.0 } else { 0.0 },
            bound: 1.0,
            pass: crossed_back,
        },
        Check::le(
            "integrated balance: |dS - dS_energy - dC|",
            balance.residual.abs(),
            1e-10,
        ),
        Check::le(
            "Clausius: max rel |dQ/dt - T dS_energy/dt| (stable)",
            ledger.clausius_max_residual(),
            1e-8,
        ),
    ])
}

fn work_rate(fast: bool, dt_scale: f64) -> Result<Vec<Check>> {
    let dt = if fast { 5e-4 } else { 2.5e-4 } * dt_scale;
    let mut curves = Vec::new();
    for k_t0 in [15.0, 25.0] {
        let cfg = fig_cfg(k_t0, 4.0, dt);
        let (_, _, ledger, _) = run_pipeline(&cfg)?;
        curves.push(
            ledger
                .records
                .iter()
                .map(|r| r.work_rate)
                .collect::<Vec<f64>>(),
        );
    }
    let n2 = (2.0 / dt) as usize;
    let peak = curves[0].iter().map(|x| x.abs()).fold(0.0, f64::max);
    let max_sign = curves[0][..n2]
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let max_spread = curves[0]
        .iter()
        .zip(&curves[1])
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(vec![
        Check::le(
            "work rate: max dW/dt on transient [0,2]",
            max_sign,
            1e-4 * peak.max(1.0),
        ),
        Check::le(
            "work rate: temperature spread / peak",
            max_spread / peak,
            0.05,
        ),
    ])
}

fn thermalization(dt_scale: f64) -> Result<Vec<Check>> {
    let cfg = fig_cfg(20.0, 150.0, 8e-3 * dt_scale);
    let (_sol, coeffs, ledger, _) = run_pipeline(&cfg)?;
    let n = ledger.records.len();
    let last = &ledger.records[n - 1];
    let nbar = bose_occupation(coeffs.omega_ren[n - 1], 20.0)?;
    let t_rel = (last.temperature / 20.0 - 1.0).abs();
    let n_rel = (last.occupation / nbar - 1.0).abs();
    let stable_frac = ledger
        .records
        .iter()
        .filter(|r| r.temperature_flag == TemperatureFlag::Stable)
        .count() as f64
        / n as f64;
    Ok(vec![
        Check::le("thermalization: |T(t_end)/T0 - 1|", t_rel, 0.02),
        Check::le(
            "thermalization: |n(t_end)/nbar(omega(t_end)) - 1|",
            n_rel,
            0.02,
        ),
        Check::le("coherence loss: C(t_end)", last.coherence, 1e-3),
        Check::in_range("temperature: stable sample fraction", stable_frac, 0.9, 1.0),
    ])
}

//! Plot-ready data files for the three reference figures.
//!
//! Parameter sets: η = 0.1 η_c, ω_c = 10 ω₀, α₀ = 1 throughout; kT₀ = 20 for
//! the entropy-balance figure and kT₀ ∈ {15, 20, 25} for the thermodynamics
//! and rate figures. Each panel lands in its own `.dat` file with
//! `#`-prefixed header lines naming columns and units.

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::config::{parse_config, SimulationConfig};
use crate::diff::derivative;
use crate::scenario::run_pipeline;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig3,
}

impl std::str::FromStr for FigureId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig1" => Ok(FigureId::Fig1),
            "fig2" => Ok(FigureId::Fig2),
            "fig3" => Ok(FigureId::Fig3),
            other => Err(Error::Config(format!(
                "key \"figure id\" = \"{other}\" violates: must be one of fig1|fig2|fig3"
            ))),
        }
    }
}

const TEMPERATURES: [f64; 3] = [15.0, 20.0, 25.0];

fn base_config(k_t0: f64, t_end: f64, dt: f64) -> Result<SimulationConfig> {
    parse_config(&format!(
        r#"{{"eta_over_eta_c":0.1,"omega_c":10,"kT0":{k_t0},"alpha0_re":1,"dt":{dt},"t_end":{t_end}}}"#
    ))
}

struct DatFile {
    name: &'static str,
    header: Vec<String>,
    columns: Vec<Vec<f64>>,
}

fn write_dat(dir: &Path, f: &DatFile, stride: usize) -> Result<PathBuf> {
    let path = dir.join(f.name);
    let mut w = std::io::BufWriter::new(std::fs::File::create(&path)?);
    for h in &f.header {
        writeln!(w, "# {h}")?;
    }
    let rows = f.columns[0].len();
    for j in (0..rows).step_by(stride) {
        let line: Vec<String> = f.columns.iter().map(|c| format!("{}", c[j])).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    Ok(path)
}

fn params_line(k_t0: &str, t_end: f64, dt: f64) -> String {
    format!("parameters: eta = 0.1*eta_c, omega_c = 10*omega0, alpha0 = 1, kT0 = {k_t0} hbar*omega0, t_end = {t_end}/omega0, dt = {dt}/omega0")
}

/// Generate the panel files for one figure; returns the written paths.
pub fn figure_data(id: FigureId, out_dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir)?;
    match id {
        FigureId::Fig1 => fig1(out_dir),
        FigureId::Fig2 => fig2(out_dir),
        FigureId::Fig3 => fig3(out_dir),
    }
}

/// Entropies and entropy rates at kT₀ = 20: the balance Σ = Φ_Q + Φ_C.
fn fig1(dir: &Path) -> Result<Vec<PathBuf>> {
    let (t_end, dt, stride) = (30.0, 1e-3, 10);
    let cfg = base_config(20.0, t_end, dt)?;
    let (sol, _, ledger, _) = run_pipeline(&cfg)?;
    let t: Vec<f64> = sol.grid.times();
    let s_energy: Vec<f64> = ledger.records.iter().map(|r| r.energy_entropy).collect();
    let s_vn: Vec<f64> = ledger.records.iter().map(|r| r.vn_entropy).collect();
    let ds_energy = derivative(&s_energy, dt);
    let ds_vn = derivative(&s_vn, dt);
    let a = DatFile {
        name: "fig1a.dat",
        header: vec![
            "thermodynamic (energy) entropy vs von Neumann entropy and their rates".into(),
            params_line("20", t_end, dt),
            "columns: t[1/omega0] S_energy[dimensionless] S_vn[dimensionless] dS_energy_dt[omega0] dS_vn_dt[omega0]".into(),
        ],
        columns: vec![t.clone(), s_energy, s_vn, ds_energy, ds_vn],
    };
    let b = DatFile {
        name: "fig1b.dat",
        header: vec![
            "entropy balance: total rate Sigma, coherence-loss production Phi_C, heat flux Phi_Q"
                .into(),
            params_line("20", t_end, dt),
            "columns: t[1/omega0] Sigma[omega0] Phi_C[omega0] Phi_Q[omega0]".into(),
        ],
        columns: vec![
            t,
            ledger.records.iter().map(|r| r.entropy_rate).collect(),
            ledger.records.iter().map(|r| r.flux_coherence).collect(),
            ledger.records.iter().map(|r| r.flux_heat).collect(),
        ],
    };
    Ok(vec![
        write_dat(dir, &a, stride)?,
        write_dat(dir, &b, stride)?,
    ])
}

/// U, 𝒮, T, F for kT₀ ∈ {15, 20, 25}.
fn fig2(dir: &Path) -> Result<Vec<PathBuf>> {
    let (t_end, dt, stride) = (100.0, 2e-3, 20);
    let mut t = Vec::new();
    let mut u = Vec::new();
    let mut s = Vec::new();
    let mut temp = Vec::new();
    let mut f = Vec::new();
    for k_t0 in TEMPERATURES {
        let cfg = base_config(k_t0, t_end, dt)?;
        let (sol, _, ledger, _) = run_pipeline(&cfg)?;
        if t.is_empty() {
            t = sol.grid.times();
        }
        u.push(
            ledger
                .records
                .iter()
                .map(|r| r.internal_energy)
                .collect::<Vec<_>>(),
        );
        s.push(
            ledger
                .records
                .iter()
                .map(|r| r.energy_entropy)
                .collect::<Vec<_>>(),
        );
        temp.push(
            ledger
                .records
                .iter()
                .map(|r| r.temperature)
                .collect::<Vec<_>>(),
        );
        f.push(
            ledger
                .records
                .iter()
                .map(|r| r.free_energy)
                .collect::<Vec<_>>(),
        );
    }
    let make = |name: &'static str, what: &str, unit: &str, series: Vec<Vec<f64>>| DatFile {
        name,
        header: vec![
            format!("{what} for kT0 = 15, 20, 25 hbar*omega0"),
            params_line("{15,20,25}", t_end, dt),
            format!(
                "columns: t[1/omega0] {c}_kT15[{unit}] {c}_kT20[{unit}] {c}_kT25[{unit}]",
                c = what.split(' ').next().unwrap()
            ),
        ],
        columns: {
            let mut cols = vec![t.clone()];
            cols.extend(series);
            cols
        },
    };
    let files = [
        make("fig2a.dat", "U internal energy", "hbar*omega0", u),
        make(
            "fig2b.dat",
            "S_energy thermodynamic entropy",
            "dimensionless",
            s,
        ),
        make("fig2c.dat", "T dynamical temperature", "hbar*omega0", temp),
        make("fig2d.dat", "F free energy", "hbar*omega0", f),
    ];
    files.iter().map(|df| write_dat(dir, df, stride)).collect()
}

/// dU/dt, dW/dt, dQ/dt for kT₀ ∈ {15, 20, 25}.
fn fig3(dir: &Path) -> Result<Vec<PathBuf>> {
    let (t_end, dt, stride) = (30.0, 1e-3, 10);
    let mut t = Vec::new();
    let mut du = Vec::new();
    let mut dw = Vec::new();
    let mut dq = Vec::new();
    for k_t0 in TEMPERATURES {
        let cfg = base_config(k_t0, t_end, dt)?;
        let (sol, _, ledger, _) = run_pipeline(&cfg)?;
        if t.is_empty() {
            t = sol.grid.times();
        }
        du.push(ledger.records.iter().map(|r| r.du_dt).collect::<Vec<_>>());
        dw.push(
            ledger
                .records
                .iter()
                .map(|r| r.work_rate)
                .collect::<Vec<_>>(),
        );
        dq.push(
            ledger
                .records
                .iter()
                .map(|r| r.heat_rate)
                .collect::<Vec<_>>(),
        );
    }
    let make = |name: &'static str, what: &str, series: Vec<Vec<f64>>| {
        DatFile {
        name,
        header: vec![
            format!("{what} for kT0 = 15, 20, 25 hbar*omega0"),
            params_line("{15,20,25}", t_end, dt),
            format!("columns: t[1/omega0] {w}_kT15[hbar*omega0^2] {w}_kT20[hbar*omega0^2] {w}_kT25[hbar*omega0^2]", w = what.split(' ').next().unwrap()),
        ],
        columns: {
            let mut cols = vec![t.clone()];
            cols.extend(series);
            cols
        },
    }
    };
    let files = [
        make("fig3a.dat", "dU_dt internal-energy rate", du),
        make("fig3b.dat", "dW_dt work rate", dw),
        make("fig3c.dat", "dQ_dt heat rate", dq),
    ];
    files.iter().map(|df| write_dat(dir, df, stride)).collect()
}

//! Series serialization: CSV/JSON time series and the run metadata document.

use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};

use crate::coefficients::MasterCoefficients;
use crate::config::SimulationConfig;
use crate::propagator::PropagatorSolution;
use crate::thermo::Ledger;
use crate::Result;

/// Column order of the series file. Fixed; consumers may rely on it.
pub const COLUMNS: [&str; 23] = [
    "t",
    "re_u",
    "im_u",
    "v",
    "omega_ren",
    "gamma",
    "gamma_tilde",
    "n",
    "U",
    "dU_dt",
    "dW_dt",
    "dQ_dt",
    "S_energy",
    "S_vn",
    "C",
    "Sigma",
    "Phi_Q",
    "Phi_C",
    "T",
    "T_flag",
    "F",
    "first_law_residual",
    "balance_residual",
];

/// Unit annotation per column (ħ = k_B = 1).
pub fn column_units() -> Vec<(&'static str, &'static str)> {
    vec![
        ("t", "1/omega0"),
        ("re_u", "dimensionless"),
        ("im_u", "dimensionless"),
        ("v", "dimensionless"),
        ("omega_ren", "omega0"),
        ("gamma", "omega0"),
        ("gamma_tilde", "omega0"),
        ("n", "dimensionless"),
        ("U", "hbar*omega0"),
        ("dU_dt", "hbar*omega0^2"),
        ("dW_dt", "hbar*omega0^2"),
        ("dQ_dt", "hbar*omega0^2"),
        ("S_energy", "dimensionless"),
        ("S_vn", "dimensionless"),
        ("C", "dimensionless"),
        ("Sigma", "omega0"),
        ("Phi_Q", "omega0"),
        ("Phi_C", "omega0"),
        ("T", "hbar*omega0"),
        ("T_flag", "stable|regularized|equilibrium-limit"),
        ("F", "hbar*omega0"),
        ("first_law_residual", "hbar*omega0^2"),
        ("balance_residual", "omega0"),
    ]
}

/// One output row as (numeric cells before the flag, flag, numeric cells after).
fn row_cells(
    sol: &PropagatorSolution,
    coeffs: &MasterCoefficients,
    ledger: &Ledger,
    j: usize,
) -> ([f64; 19], &'static str, [f64; 3]) {
    let r = &ledger.records[j];
    (
        [
            r.time,
            sol.u[j].re,
            sol.u[j].im,
            sol.v[j],
            coeffs.omega_ren[j],
            coeffs.gamma[j],
            coeffs.gamma_tilde[j],
            r.occupation,
            r.internal_energy,
            r.du_dt,
            r.work_rate,
            r.heat_rate,
            r.energy_entropy,
            r.vn_entropy,
            r.coherence,
            r.entropy_rate,
            r.flux_heat,
            r.flux_coherence,
            r.temperature,
        ],
        r.temperature_flag.as_str(),
        [r.free_energy, r.first_law_residual, r.balance_residual],
    )
}

/// Sampled row indices: every `stride`-th grid point.
pub fn sampled_indices(len: usize, stride: usize) -> impl Iterator<Item = usize> {
    (0..len).step_by(stride.max(1))
}

pub fn write_series_csv(
    path: &Path,
    sol: &PropagatorSolution,
    coeffs: &MasterCoefficients,
    ledger: &Ledger,
    stride: usize,
) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "{}", COLUMNS.join(","))?;
    for j in sampled_indices(ledger.records.len(), stride) {
        let (head, flag, tail) = row_cells(sol, coeffs, ledger, j);
        let mut line = String::with_capacity(512);
        for x in head {
            line.push_str(&fmt_cell(x));
            line.push(',');
        }
        line.push_str(flag);
        for x in tail {
            line.push(',');
            line.push_str(&fmt_cell(x));
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

/// Shortest round-trip representation, with negative zero normalized.
fn fmt_cell(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x}")
}

pub fn write_series_json(
    path: &Path,
    sol: &PropagatorSolution,
    coeffs: &MasterCoefficients,
    ledger: &Ledger,
    stride: usize,
) -> Result<()> {
    let mut rows = Vec::new();
    for j in sampled_indices(ledger.records.len(), stride) {
        let (head, flag, tail) = row_cells(sol, coeffs, ledger, j);
        let mut row: Vec<Value> = head.iter().map(|x| float_value(*x)).collect();
        row.push(json!(flag));
        row.extend(tail.iter().map(|x| float_value(*x)));
        rows.push(Value::Array(row));
    }
    let doc = json!({ "columns": COLUMNS, "rows": rows });
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    serde_json::to_writer_pretty(&mut w, &doc)?;
    writeln!(w)?;
    Ok(())
}

/// JSON has no NaN literal; emit it as a string so files stay parseable.
/// Negative zero is normalized.
fn float_value(x: f64) -> Value {
    if x.is_finite() {
        json!(if x == 0.0 { 0.0 } else { x })
    } else {
        json!(x.to_string())
    }
}

/// Full metadata document: the verbatim config plus solver statistics and
/// the tolerances in force, enough to re-run the scenario with no context.
#[allow(clippy::too_many_arguments)]
pub fn meta_document(
    config: &SimulationConfig,
    sol: Option<&PropagatorSolution>,
    coeffs: Option<&MasterCoefficients>,
    ledger: Option<&Ledger>,
    quad_report: Option<&crate::bath::QuadReport>,
    runtime_seconds: f64,
    error: Option<&crate::Error>,
) -> Value {
    let columns: Vec<Value> = column_units()
        .into_iter()
        .map(|(name, unit)| json!({ "name": name, "unit": unit }))
        .collect();
    json!({
        "config": config.to_config_json(),
        "units": "hbar = k_B = 1; frequencies in omega0, times in 1/omega0, energies and temperatures in hbar*omega0",
        "tolerances": {
            "tail_tol": config.tail_tol,
            "u_floor": config.u_floor,
            "s_floor": config.s_floor,
            "u_contractivity_tol": crate::propagator::U_CONTRACT_TOL,
            "gtilde_quadrature_rtol": 1e-8,
        },
        "solver": {
            "max_u_norm": sol.map(|s| s.report.max_u_norm),
            "min_v": sol.map(|s| s.report.min_v),
            "contractivity_warning": sol.map(|s| s.report.contractivity_warning),
            "coefficients_truncated_at": coeffs.and_then(|c| c.truncated_at),
            "n_max_used": ledger.map(|l| l.n_max_used),
            "max_tail_mass": ledger.map(|l| l.max_tail_mass),
            "warnings": ledger.map(|l| l.warnings.clone()).unwrap_or_default(),
            "gtilde_quadrature": quad_report.map(|q| serde_json::to_value(q).unwrap()),
        },
        "columns": columns,
        "runtime_seconds": runtime_seconds,
        "error": error.map(|e| json!({ "kind": e.kind(), "message": e.to_string() })),
    })
}

pub fn write_meta(path: &Path, doc: &Value) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    serde_json::to_writer_pretty(&mut w, doc)?;
    writeln!(w)?;
    Ok(())
}

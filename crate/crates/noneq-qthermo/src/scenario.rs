//! End-to-end scenario execution: kernels → propagator → coefficients →
//! states → ledger → serialized run directory.

use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::bath::KernelTables;
use crate::coefficients::{derive_coefficients, MasterCoefficients};
use crate::config::{NMaxPolicy, OutputFormat, SimulationConfig};
use crate::fock::CoherentInit;
use crate::output;
use crate::propagator::{solve_with_tables, PropagatorSolution};
use crate::thermo::{build_ledger, Ledger, LedgerOptions};
use crate::Result;

/// Everything a finished run leaves behind, in memory and on disk.
pub struct RunArtifacts {
    pub dir: PathBuf,
    pub series_path: PathBuf,
    pub meta_path: PathBuf,
    pub sol: PropagatorSolution,
    pub coeffs: MasterCoefficients,
    pub ledger: Ledger,
}

/// Run the whole pipeline in memory (no files).
pub fn run_pipeline(
    config: &SimulationConfig,
) -> Result<(
    PropagatorSolution,
    MasterCoefficients,
    Ledger,
    crate::bath::QuadReport,
)> {
    config.validate()?;
    let bath = config.bath()?;
    let grid = config.grid()?;
    let tables = KernelTables::build(&bath, &grid, config.omega_max_factor)?;
    let quad_report = tables.quad_report.clone();
    let sol = solve_with_tables(&tables, &grid);
    let coeffs = derive_coefficients(&sol, config.u_floor)?;
    let init = CoherentInit::new(config.alpha0());
    let opts = LedgerOptions {
        s_floor: config.s_floor,
        tail_tol: config.tail_tol,
        n_max: match config.n_max {
            NMaxPolicy::Auto => None,
            NMaxPolicy::Fixed(n) => Some(n),
        },
    };
    let ledger = build_ledger(&sol, &coeffs, &init, &opts)?;
    Ok((sol, coeffs, ledger, quad_report))
}

/// Execute a scenario and write `series.csv`/`series.json` plus `meta.json`
/// into `out_dir`. On failure the metadata still lands on disk with a
/// machine-readable error record.
pub fn run_scenario(config: &SimulationConfig, out_dir: &Path) -> Result<RunArtifacts> {
    std::fs::create_dir_all(out_dir)?;
    let meta_path = out_dir.join("meta.json");
    let started = Instant::now();

    match run_pipeline(config) {
        Ok((sol, coeffs, ledger, quad_report)) => {
            let series_path = match config.format {
                OutputFormat::Csv => {
                    let p = out_dir.join("series.csv");
                    output::write_series_csv(&p, &sol, &coeffs, &ledger, config.stride)?;
                    p
                }
                OutputFormat::Json => {
                    let p = out_dir.join("series.json");
                    output::write_series_json(&p, &sol, &coeffs, &ledger, config.stride)?;
                    p
                }
            };
            let doc = output::meta_document(
                config,
                Some(&sol),
                Some(&coeffs),
                Some(&ledger),
                Some(&quad_report),
                started.elapsed().as_secs_f64(),
                None,
            );
            output::write_meta(&meta_path, &doc)?;
            Ok(RunArtifacts {
                dir: out_dir.to_path_buf(),
                series_path,
                meta_path,
                sol,
                coeffs,
                ledger,
            })
        }
        Err(e) => {
            let doc = output::meta_document(
                config,
                None,
                None,
                None,
                None,
                started.elapsed().as_secs_f64(),
                Some(&e),
            );
            output::write_meta(&meta_path, &doc)?;
            Err(e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    fn tmp_dir(tag: &str) -> PathBuf {
        let d =
            std::env::temp_dir().join(format!("noneq-qthermo-test-{tag}-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&d);
        d
    }

    #[test]
    fn closed_system_run_writes_expected_files() {
        let cfg = parse_config(r#"{"eta_over_eta_c":0, "t_end":2.0, "dt":0.001}"#).unwrap();
        let dir = tmp_dir("closed");
        let art = run_scenario(&cfg, &dir).unwrap();
        assert!(art.series_path.exists());
        assert!(art.meta_path.exists());
        let head = std::fs::read_to_string(&art.series_path).unwrap();
        let mut lines = head.lines();
        assert_eq!(lines.next().unwrap(), output::COLUMNS.join(","));
        // dissipative columns identically zero, |u| = 1
        for line in lines {
            let cells: Vec<&str> = line.split(',').collect();
            let re_u: f64 = cells[1].parse().unwrap();
            let im_u: f64 = cells[2].parse().unwrap();
            let v: f64 = cells[3].parse().unwrap();
            let gamma: f64 = cells[5].parse().unwrap();
            let dq: f64 = cells[11].parse().unwrap();
            assert!((re_u.hypot(im_u) - 1.0).abs() <= 1e-8);
            assert_eq!(v, 0.0);
            assert!(gamma.abs() <= 1e-9);
            assert!(dq.abs() <= 1e-10);
        }
        let meta: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&art.meta_path).unwrap()).unwrap();
        assert!(meta["error"].is_null());
        assert_eq!(meta["config"]["eta_over_eta_c"], 0.0);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn determinism_byte_identical_series() {
        let cfg = parse_config(r#"{"t_end":1.0, "dt":0.002, "stride":5}"#).unwrap();
        let d1 = tmp_dir("det1");
        let d2 = tmp_dir("det2");
        let a1 = run_scenario(&cfg, &d1).unwrap();
        let a2 = run_scenario(&cfg, &d2).unwrap();
        let b1 = std::fs::read(&a1.series_path).unwrap();
        let b2 = std::fs::read(&a2.series_path).unwrap();
        assert_eq!(b1, b2);
        std::fs::remove_dir_all(&d1).ok();
        std::fs::remove_dir_all(&d2).ok();
    }

    #[test]
    fn failed_run_leaves_error_record() {
        // Fixed n_max far too small: truncation error propagates to meta.json.
        let cfg = parse_config(r#"{"t_end":1.0, "dt":0.002, "n_max":3}"#).unwrap();
        let dir = tmp_dir("fail");
        let err = run_scenario(&cfg, &dir);
        assert!(err.is_err());
        let meta: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(dir.join("meta.json")).unwrap()).unwrap();
        assert_eq!(meta["error"]["kind"], "truncation");
        assert!(meta["error"]["message"].as_str().unwrap().contains("tail"));
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn json_format_emits_columns_and_rows() {
        let cfg =
            parse_config(r#"{"t_end":0.5, "dt":0.001, "format":"json", "stride":50}"#).unwrap();
        let dir = tmp_dir("json");
        let art = run_scenario(&cfg, &dir).unwrap();
        let doc: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&art.series_path).unwrap()).unwrap();
        assert_eq!(
            doc["columns"].as_array().unwrap().len(),
            output::COLUMNS.len()
        );
        let rows = doc["rows"].as_array().unwrap();
        assert_eq!(rows.len(), 11);
        assert_eq!(rows[0].as_array().unwrap().len(), output::COLUMNS.len());
        std::fs::remove_dir_all(&dir).ok();
    }
}

//! Run configuration: JSON parsing, validation, defaults.
//!
//! The JSON surface is exactly these keys (unknown keys are rejected):
//! `eta_over_eta_c`, `omega_c`, `kT0`, `alpha0_re`, `alpha0_im`, `dt`,
//! `t_end`, `n_max`, `tail_tol`, `omega_max_factor`, `stride`, `format`.
//! Every key has a default, so `{}` is a runnable configuration (the Fig-1
//! parameter set). Numerical floors that are not part of the JSON surface
//! (u_floor, s_floor) are fixed defaults, recorded in run metadata.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bath::BathSpec;
use crate::grid::TimeGrid;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn as_str(&self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NMaxPolicy {
    Auto,
    Fixed(usize),
}

/// Validated parameters of one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationConfig {
    pub eta_over_eta_c: f64,
    pub omega_c: f64,
    pub k_t0: f64,
    pub alpha0_re: f64,
    pub alpha0_im: f64,
    pub dt: f64,
    pub t_end: f64,
    pub n_max: NMaxPolicy,
    pub tail_tol: f64,
    pub omega_max_factor: f64,
    pub stride: usize,
    pub format: OutputFormat,
    /// |u| floor for the coefficient ratio u̇/u (not a JSON key).
    pub u_floor: f64,
    /// |d𝒮/dt| floor for the temperature ratio (not a JSON key).
    pub s_floor: f64,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            eta_over_eta_c: 0.1,
            omega_c: 10.0,
            k_t0: 20.0,
            alpha0_re: 1.0,
            alpha0_im: 0.0,
            dt: 1e-3,
            t_end: 30.0,
            n_max: NMaxPolicy::Auto,
            tail_tol: 1e-10,
            omega_max_factor: 50.0,
            stride: 10,
            format: OutputFormat::Csv,
            u_floor: crate::coefficients::U_FLOOR,
            s_floor: crate::thermo::S_FLOOR,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum NMaxRaw {
    Text(String),
    Number(i64),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    eta_over_eta_c: Option<f64>,
    omega_c: Option<f64>,
    #[serde(rename = "kT0")]
    k_t0: Option<f64>,
    alpha0_re: Option<f64>,
    alpha0_im: Option<f64>,
    dt: Option<f64>,
    t_end: Option<f64>,
    n_max: Option<NMaxRaw>,
    tail_tol: Option<f64>,
    omega_max_factor: Option<f64>,
    stride: Option<i64>,
    format: Option<String>,
}

fn constraint(key: &str, value: impl std::fmt::Display, rule: &str) -> Error {
    Error::Config(format!("key \"{key}\" = {value} violates: {rule}"))
}

/// Parse and validate a JSON configuration.
pub fn parse_config(source: &str) -> Result<SimulationConfig> {
    let raw: RawConfig = serde_json::from_str(source).map_err(|e| Error::Config(e.to_string()))?;
    let d = SimulationConfig::default();
    let mut cfg = SimulationConfig {
        eta_over_eta_c: raw.eta_over_eta_c.unwrap_or(d.eta_over_eta_c),
        omega_c: raw.omega_c.unwrap_or(d.omega_c),
        k_t0: raw.k_t0.unwrap_or(d.k_t0),
        alpha0_re: raw.alpha0_re.unwrap_or(d.alpha0_re),
        alpha0_im: raw.alpha0_im.unwrap_or(d.alpha0_im),
        dt: raw.dt.unwrap_or(d.dt),
        t_end: raw.t_end.unwrap_or(d.t_end),
        n_max: NMaxPolicy::Auto,
        tail_tol: raw.tail_tol.unwrap_or(d.tail_tol),
        omega_max_factor: raw.omega_max_factor.unwrap_or(d.omega_max_factor),
        stride: 10,
        format: OutputFormat::Csv,
        ..d
    };
    if let Some(nm) = raw.n_max {
        cfg.n_max = match nm {
            NMaxRaw::Text(s) if s == "auto" => NMaxPolicy::Auto,
            NMaxRaw::Text(s) => {
                return Err(constraint(
                    "n_max",
                    format!("\"{s}\""),
                    "must be \"auto\" or a positive integer",
                ))
            }
            NMaxRaw::Number(n) if n > 0 => NMaxPolicy::Fixed(n as usize),
            NMaxRaw::Number(n) => {
                return Err(constraint(
                    "n_max",
                    n,
                    "must be \"auto\" or a positive integer",
                ))
            }
        };
    }
    if let Some(s) = raw.stride {
        if s < 1 {
            return Err(constraint("stride", s, "must be a positive integer"));
        }
        cfg.stride = s as usize;
    }
    if let Some(f) = raw.format {
        cfg.format = match f.as_str() {
            "csv" => OutputFormat::Csv,
            "json" => OutputFormat::Json,
            other => {
                return Err(constraint(
                    "format",
                    format!("\"{other}\""),
                    "must be \"csv\" or \"json\"",
                ))
            }
        };
    }
    cfg.validate()?;
    Ok(cfg)
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        let finite_pos = |key: &str, v: f64| -> Result<()> {
            if v <= 0.0 || !v.is_finite() {
                return Err(constraint(key, v, "must be a finite positive number"));
            }
            Ok(())
        };
        if self.eta_over_eta_c < 0.0 || !self.eta_over_eta_c.is_finite() {
            return Err(constraint(
                "eta_over_eta_c",
                self.eta_over_eta_c,
                "must be >= 0",
            ));
        }
        finite_pos("omega_c", self.omega_c)?;
        if self.k_t0 < 0.0 || !self.k_t0.is_finite() {
            return Err(constraint("kT0", self.k_t0, "must be >= 0"));
        }
        if !self.alpha0_re.is_finite() || !self.alpha0_im.is_finite() {
            return Err(constraint(
                "alpha0_re/alpha0_im",
                "non-finite",
                "must be finite",
            ));
        }
        finite_pos("dt", self.dt)?;
        finite_pos("t_end", self.t_end)?;
        if self.t_end <= self.dt {
            return Err(constraint("t_end", self.t_end, "must exceed dt"));
        }
        finite_pos("tail_tol", self.tail_tol)?;
        finite_pos("omega_max_factor", self.omega_max_factor)?;
        if self.stride < 1 {
            return Err(constraint("stride", self.stride, "must be >= 1"));
        }
        Ok(())
    }

    pub fn bath(&self) -> Result<BathSpec> {
        BathSpec::from_eta_ratio(self.eta_over_eta_c, self.omega_c, self.k_t0)
    }

    pub fn alpha0(&self) -> Complex64 {
        Complex64::new(self.alpha0_re, self.alpha0_im)
    }

    pub fn grid(&self) -> Result<TimeGrid> {
        TimeGrid::new(0.0, self.t_end, self.dt)
    }

    /// The JSON document with exactly the documented keys; parse ∘ serialize
    /// is the identity.
    pub fn to_config_json(&self) -> Value {
        json!({
            "eta_over_eta_c": self.eta_over_eta_c,
            "omega_c": self.omega_c,
            "kT0": self.k_t0,
            "alpha0_re": self.alpha0_re,
            "alpha0_im": self.alpha0_im,
            "dt": self.dt,
            "t_end": self.t_end,
            "n_max": match self.n_max {
                NMaxPolicy::Auto => json!("auto"),
                NMaxPolicy::Fixed(n) => json!(n),
            },
            "tail_tol": self.tail_tol,
            "omega_max_factor": self.omega_max_factor,
            "stride": self.stride,
            "format": self.format.as_str(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_yields_fig1_defaults() {
        let cfg = parse_config("{}").unwrap();
        assert_eq!(cfg, SimulationConfig::default());
        assert_eq!(cfg.eta_over_eta_c, 0.1);
        assert_eq!(cfg.omega_c, 10.0);
        assert_eq!(cfg.k_t0, 20.0);
        assert_eq!(cfg.dt, 1e-3);
        assert_eq!(cfg.t_end, 30.0);
        assert_eq!(cfg.stride, 10);
        assert_eq!(cfg.format, OutputFormat::Csv);
        assert_eq!(cfg.n_max, NMaxPolicy::Auto);
        // the bath it implies
        let b = cfg.bath().unwrap();
        assert!((b.coupling_eta - 0.01).abs() < 1e-15);
    }

    #[test]
    fn fig1_explicit_keys() {
        let cfg =
            parse_config(r#"{"eta_over_eta_c":0.1,"omega_c":10,"kT0":20,"alpha0_re":1}"#).unwrap();
        assert_eq!(cfg, SimulationConfig::default());
    }

    #[test]
    fn unknown_key_is_named() {
        let err = parse_config(r#"{"etaa":1}"#).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("etaa"), "{msg}");
    }

    #[test]
    fn constraint_errors_name_key_value_rule() {
        let err = parse_config(r#"{"kT0":-1}"#).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("kT0") && msg.contains("-1"), "{msg}");
        assert!(parse_config(r#"{"dt":0}"#).is_err());
        assert!(parse_config(r#"{"stride":0}"#).is_err());
        assert!(parse_config(r#"{"format":"xml"}"#).is_err());
        assert!(parse_config(r#"{"n_max":"many"}"#).is_err());
        assert!(parse_config(r#"{"n_max":-3}"#).is_err());
        assert!(parse_config(r#"{"t_end":0.0005}"#).is_err());
    }

    #[test]
    fn n_max_accepts_auto_and_numbers() {
        assert_eq!(
            parse_config(r#"{"n_max":"auto"}"#).unwrap().n_max,
            NMaxPolicy::Auto
        );
        assert_eq!(
            parse_config(r#"{"n_max":128}"#).unwrap().n_max,
            NMaxPolicy::Fixed(128)
        );
    }

    #[test]
    fn round_trip_identity() {
        let cfg = parse_config(
            r#"{"eta_over_eta_c":0.05,"omega_c":8,"kT0":15,"alpha0_re":0.5,
                "alpha0_im":-0.25,"dt":0.002,"t_end":12,"n_max":256,
                "tail_tol":1e-9,"omega_max_factor":40,"stride":5,"format":"json"}"#,
        )
        .unwrap();
        let round = parse_config(&cfg.to_config_json().to_string()).unwrap();
        assert_eq!(cfg, round);
    }
}

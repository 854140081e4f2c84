use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Uniform time grid t_j = t_start + j·Δt, j = 0..count−1.
///
/// Times are in units of 1/ω₀. `t_start` is 0 for every physical run; a
/// nonzero start is allowed so the propagator's stationarity in t−t₀ can be
/// exercised directly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub t_start: f64,
    pub step: f64,
    pub count: usize,
}

impl TimeGrid {
    /// Grid over [t_start, t_end] with the given step. The step is snapped so
    /// that (count−1)·step spans the interval exactly.
    pub fn new(t_start: f64, t_end: f64, step: f64) -> Result<Self> {
        if step <= 0.0 || !step.is_finite() {
            return Err(Error::domain(
                "TimeGrid::new",
                format!("step must be > 0, got {step}"),
            ));
        }
        if t_end <= t_start || !t_end.is_finite() {
            return Err(Error::domain(
                "TimeGrid::new",
                format!("t_end ({t_end}) must exceed t_start ({t_start})"),
            ));
        }
        let n = ((t_end - t_start) / step).round() as usize;
        if n < 1 {
            return Err(Error::domain(
                "TimeGrid::new",
                "grid needs at least two samples",
            ));
        }
        Ok(TimeGrid {
            t_start,
            step: (t_end - t_start) / n as f64,
            count: n + 1,
        })
    }

    pub fn t_end(&self) -> f64 {
        self.t_start + self.step * (self.count - 1) as f64
    }

    pub fn time(&self, j: usize) -> f64 {
        self.t_start + self.step * j as f64
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.count).map(|j| self.time(j)).collect()
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spans_interval_exactly() {
        let g = TimeGrid::new(0.0, 30.0, 1e-3).unwrap();
        assert_eq!(g.count, 30_001);
        assert!((g.t_end() - 30.0).abs() < 1e-12);
        assert!((g.time(1) - g.time(0) - g.step).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_steps() {
        assert!(TimeGrid::new(0.0, 1.0, 0.0).is_err());
        assert!(TimeGrid::new(0.0, 1.0, -0.1).is_err());
        assert!(TimeGrid::new(1.0, 1.0, 0.1).is_err());
    }
}

//! Reservoir spectral density, thermal occupation, and the memory kernels.
//!
//! The bath enters the reduced dynamics only through two stationary kernels,
//!
//!   g(s)  = ∫₀^∞ dω J(ω) e^{−iωs},
//!   g̃(s) = ∫₀^∞ dω J(ω) n̄(ω,T₀) e^{−iωs},
//!
//! with the Ohmic form J(ω) = η ω e^{−ω/ω_c} and the Bose–Einstein
//! occupation n̄(ω,T₀) = 1/(e^{ω/T₀} − 1). For Ohmic J the zero-temperature
//! kernel has the closed form g(s) = η ω_c² / (1 + i ω_c s)², which is used
//! in production (quadrature of the defining integral is kept as a test
//! oracle). g̃ has no elementary closed form and is integrated numerically
//! on composite Gauss–Legendre panels; the integrand is continued to its
//! finite ω→0 limit η·kT₀.
//!
//! Both kernels are Hermitian in the lag, g(−s) = g(s)*, so tables store
//! s ≥ 0 and mirror by conjugation.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::grid::TimeGrid;
use crate::{Error, Result};

/// System frequency in its own units.
pub const OMEGA0: f64 = 1.0;

/// Physical parameters of the Ohmic reservoir.
///
/// `coupling_eta` is the dimensionless coupling strength η (η = 0 is the
/// closed system), `cutoff` the spectral cutoff ω_c in units of ω₀,
/// `temperature` the initial reservoir temperature kT₀ in units of ħω₀.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BathSpec {
    pub coupling_eta: f64,
    pub cutoff: f64,
    pub temperature: f64,
}

impl BathSpec {
    pub fn new(coupling_eta: f64, cutoff: f64, temperature: f64) -> Result<Self> {
        let b = BathSpec {
            coupling_eta,
            cutoff,
            temperature,
        };
        b.validate()?;
        Ok(b)
    }

    /// η given as a fraction of the critical coupling η_c = ω₀/ω_c.
    pub fn from_eta_ratio(ratio: f64, cutoff: f64, temperature: f64) -> Result<Self> {
        Self::new(ratio * OMEGA0 / cutoff, cutoff, temperature)
    }

    pub fn validate(&self) -> Result<()> {
        if self.coupling_eta < 0.0 || !self.coupling_eta.is_finite() {
            return Err(Error::domain(
                "BathSpec",
                format!("coupling_eta must be >= 0, got {}", self.coupling_eta),
            ));
        }
        if self.cutoff <= 0.0 || !self.cutoff.is_finite() {
            return Err(Error::domain(
                "BathSpec",
                format!("cutoff must be > 0, got {}", self.cutoff),
            ));
        }
        if self.temperature < 0.0 || !self.temperature.is_finite() {
            return Err(Error::domain(
                "BathSpec",
                format!("temperature must be >= 0, got {}", self.temperature),
            ));
        }
        Ok(())
    }

    /// Critical coupling η_c = ω₀/ω_c beyond which a bound state forms.
    pub fn eta_c(&self) -> f64 {
        OMEGA0 / self.cutoff
    }

    pub fn is_weak_coupling(&self) -> bool {
        self.coupling_eta < self.eta_c()
    }
}

/// The one place the spectral shape lives; other densities would plug in here.
#[inline]
fn j_ohmic(omega: f64, bath: &BathSpec) -> f64 {
    bath.coupling_eta * omega * (-omega / bath.cutoff).exp()
}

/// Ohmic spectral density J(ω) = η ω e^{−ω/ω_c}.
pub fn spectral_density(omega: f64, bath: &BathSpec) -> Result<f64> {
    if omega < 0.0 {
        return Err(Error::domain(
            "spectral_density",
            format!("omega must be >= 0, got {omega}"),
        ));
    }
    Ok(j_ohmic(omega, bath))
}

/// Bose–Einstein occupation n̄(ω,T) = 1/(e^{ω/T} − 1); 0 at T = 0.
pub fn bose_occupation(omega: f64, temperature: f64) -> Result<f64> {
    if omega <= 0.0 {
        return Err(Error::domain(
            "bose_occupation",
            format!("omega must be > 0, got {omega}"),
        ));
    }
    if temperature < 0.0 {
        return Err(Error::domain(
            "bose_occupation",
            format!("temperature must be >= 0, got {temperature}"),
        ));
    }
    if temperature == 0.0 {
        return Ok(0.0);
    }
    Ok(1.0 / (omega / temperature).exp_m1())
}

/// Zero-temperature memory kernel, closed Ohmic form g(s) = η ω_c²/(1 + i ω_c s)².
pub fn g_kernel(lag: f64, bath: &BathSpec) -> Complex64 {
    let d = Complex64::new(1.0, bath.cutoff * lag);
    bath.coupling_eta * bath.cutoff * bath.cutoff / (d * d)
}

/// Thermal-kernel integrand J(ω)·n̄(ω,T₀), continued to η·kT₀ at ω = 0.
pub fn gtilde_integrand(omega: f64, bath: &BathSpec) -> f64 {
    if bath.temperature == 0.0 {
        return 0.0;
    }
    if omega == 0.0 {
        return bath.coupling_eta * bath.temperature;
    }
    j_ohmic(omega, bath) / (omega / bath.temperature).exp_m1()
}

/// Settings for the g̃ frequency quadrature: upper cutoff Ω_max and the
/// number of Gauss–Legendre panels on (0, Ω_max].
#[derive(Debug, Clone, Copy, Serialize)]
pub struct QuadratureSpec {
    pub omega_max: f64,
    pub panels: usize,
    /// Relative tolerance demanded under panel doubling.
    pub rtol: f64,
}

/// Gauss–Legendre order used on every panel.
const GL_ORDER: usize = 24;
/// Max phase advance ω·s across one panel that GL_ORDER resolves to ~1e−12.
const MAX_PANEL_PHASE: f64 = 19.0;
/// Panels with integrand below this fraction of the peak are dropped; the
/// exponential cutoff makes the discarded tail < 1e−12 of the integral.
const PANEL_DROP: f64 = 1e-18;

impl QuadratureSpec {
    /// Panel layout resolving both the integrand decay scale and the
    /// oscillation e^{−iωs} at the largest lag of interest.
    pub fn for_bath(bath: &BathSpec, omega_max_factor: f64, max_lag: f64) -> Self {
        let omega_max = omega_max_factor * bath.cutoff.max(bath.temperature).max(OMEGA0);
        let decay = if bath.temperature > 0.0 {
            1.0 / (1.0 / bath.cutoff + 1.0 / bath.temperature)
        } else {
            bath.cutoff
        };
        let h = (decay / 4.0).min(MAX_PANEL_PHASE / max_lag.max(1.0));
        let panels = ((omega_max / h).ceil() as usize).max(4);
        QuadratureSpec {
            omega_max,
            panels,
            rtol: 1e-8,
        }
    }
}

/// Gauss–Legendre nodes and weights on [−1, 1], by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-like initial guess.
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        loop {
            // Legendre P_n(z) and derivative via the three-term recurrence.
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                let dpf = {
                    let (mut p0, mut p1) = (1.0, z);
                    for k in 2..=n {
                        let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                        p0 = p1;
                        p1 = p2;
                    }
                    n as f64 * (z * p1 - p0) / (z * z - 1.0)
                };
                x[i] = -z;
                x[n - 1 - i] = z;
                let wi = 2.0 / ((1.0 - z * z) * dpf * dpf);
                w[i] = wi;
                w[n - 1 - i] = wi;
                break;
            }
        }
    }
    (x, w)
}

/// Scaled quadrature nodes (ω_q, W_q·F(ω_q)) for the kept panels of a spec.
fn gtilde_nodes(bath: &BathSpec, quad: &QuadratureSpec) -> Vec<(f64, f64)> {
    let (gx, gw) = gauss_legendre(GL_ORDER);
    let h = quad.omega_max / quad.panels as f64;
    // J·n̄ is unimodal; probe for its peak to scale the panel-drop threshold.
    let probes = 256;
    let peak = (0..=probes)
        .map(|i| gtilde_integrand(quad.omega_max * i as f64 / probes as f64, bath))
        .fold(0.0, f64::max);
    let mut nodes = Vec::new();
    for p in 0..quad.panels {
        let a = p as f64 * h;
        let b = a + h;
        let bound = gtilde_integrand(a, bath)
            .max(gtilde_integrand(0.5 * (a + b), bath))
            .max(gtilde_integrand(b, bath));
        if bound < PANEL_DROP * peak {
            continue;
        }
        for q in 0..GL_ORDER {
            let om = a + 0.5 * h * (gx[q] + 1.0);
            nodes.push((om, 0.5 * h * gw[q] * gtilde_integrand(om, bath)));
        }
    }
    nodes
}

/// Evaluate g̃ at one lag with the given node set.
fn gtilde_from_nodes(nodes: &[(f64, f64)], lag: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &(om, wf) in nodes {
        acc += wf * Complex64::new(0.0, -om * lag).exp();
    }
    acc
}

/// Finite-temperature kernel g̃(s) = ∫₀^{Ω_max} dω J n̄ e^{−iωs} by composite
/// Gauss–Legendre panels, with convergence verified by panel doubling.
pub fn g_tilde_kernel(lag: f64, bath: &BathSpec, quad: &QuadratureSpec) -> Result<Complex64> {
    if bath.temperature == 0.0 || bath.coupling_eta == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let alag = lag.abs();
    let mut spec = *quad;
    let mut prev = gtilde_from_nodes(&gtilde_nodes(bath, &spec), alag);
    let scale = bath.coupling_eta * bath.temperature * bath.cutoff; // ~ g̃(0)
    for _ in 0..4 {
        spec.panels *= 2;
        let cur = gtilde_from_nodes(&gtilde_nodes(bath, &spec), alag);
        let delta = (cur - prev).norm();
        if delta <= quad.rtol * cur.norm().max(1e-6 * scale) {
            let v = if lag < 0.0 { cur.conj() } else { cur };
            return Ok(v);
        }
        prev = cur;
    }
    Err(Error::numerics(
        "g_tilde_kernel",
        format!(
            "quadrature not converged at lag {lag}: last value {prev}, \
             panels {} (omega_max {})",
            spec.panels, spec.omega_max
        ),
    ))
}

/// Convergence diagnostics from a table build, kept for run metadata.
#[derive(Debug, Clone, Serialize)]
pub struct QuadReport {
    pub omega_max: f64,
    pub panels: usize,
    pub nodes_kept: usize,
    pub checked_lags: usize,
    pub max_check_delta: f64,
}

/// Kernel values sampled on the uniform lag grid s_j = j·Δt.
///
/// `g` holds lags 0..=N; g̃ is stored for −N..=N (Hermitian mirror) so the
/// propagator's double sum can index signed lag differences directly.
#[derive(Debug, Clone)]
pub struct KernelTables {
    pub grid_step: f64,
    pub g_samples: Vec<Complex64>,
    gtilde_full: Vec<Complex64>,
    offset: usize,
    pub is_zero: bool,
    pub quad_report: QuadReport,
}

impl KernelTables {
    pub fn build(bath: &BathSpec, grid: &TimeGrid, omega_max_factor: f64) -> Result<Self> {
        let n = grid.count - 1;
        let dt = grid.step;
        let g_samples: Vec<Complex64> = (0..=n).map(|j| g_kernel(j as f64 * dt, bath)).collect();

        let is_zero = bath.coupling_eta == 0.0;
        let thermal_zero = is_zero || bath.temperature == 0.0;
        let quad = QuadratureSpec::for_bath(bath, omega_max_factor, grid.t_end() - grid.t_start);

        let mut gtilde_pos = vec![Complex64::new(0.0, 0.0); n + 1];
        let mut report = QuadReport {
            omega_max: quad.omega_max,
            panels: quad.panels,
            nodes_kept: 0,
            checked_lags: 0,
            max_check_delta: 0.0,
        };

        if !thermal_zero {
            let nodes = gtilde_nodes(bath, &quad);
            report.nodes_kept = nodes.len();
            fill_lag_table(&nodes, dt, &mut gtilde_pos);

            // Panel-doubling spot check across the lag range.
            let fine = QuadratureSpec {
                panels: quad.panels * 2,
                ..quad
            };
            let fine_nodes = gtilde_nodes(bath, &fine);
            let checks = 48.min(n + 1);
            let scale = gtilde_pos[0].norm();
            let mut max_delta = 0.0_f64;
            for c in 0..checks {
                let j = c * n / checks.max(1);
                let refv = gtilde_from_nodes(&fine_nodes, j as f64 * dt);
                let delta = (gtilde_pos[j] - refv).norm() / refv.norm().max(1e-6 * scale);
                max_delta = max_delta.max(delta);
            }
            report.checked_lags = checks;
            report.max_check_delta = max_delta;
            if max_delta > quad.rtol {
                return Err(Error::numerics(
                    "KernelTables::build",
                    format!(
                        "g̃ table not converged: max relative delta {max_delta:.3e} \
                         under panel doubling (panels {}, omega_max {})",
                        quad.panels, quad.omega_max
                    ),
                ));
            }
        }

        let mut gtilde_full = vec![Complex64::new(0.0, 0.0); 2 * n + 1];
        for j in 0..=n {
            gtilde_full[n + j] = gtilde_pos[j];
            gtilde_full[n - j] = gtilde_pos[j].conj();
        }

        Ok(KernelTables {
            grid_step: dt,
            g_samples,
            gtilde_full,
            offset: n,
            is_zero,
            quad_report: report,
        })
    }

    /// g̃ at signed lag index k (s = k·Δt), using Hermitian symmetry.
    #[inline]
    pub fn gtilde(&self, k: isize) -> Complex64 {
        self.gtilde_full[(self.offset as isize + k) as usize]
    }

    /// Slice of g̃ over signed lags [lo, hi] as contiguous memory.
    #[inline]
    pub fn gtilde_range(&self, lo: isize, hi: isize) -> &[Complex64] {
        let a = (self.offset as isize + lo) as usize;
        let b = (self.offset as isize + hi) as usize;
        &self.gtilde_full[a..=b]
    }
}

/// Accumulate Σ_q W_q F_q e^{−iω_q s_k} for every lag k via per-node phase
/// recurrence. Lag blocks are written disjointly, so the result is bitwise
/// independent of the thread count.
fn fill_lag_table(nodes: &[(f64, f64)], dt: f64, out: &mut [Complex64]) {
    const BLOCK: usize = 4096;
    out.par_chunks_mut(BLOCK)
        .enumerate()
        .for_each(|(bi, chunk)| {
            let k0 = bi * BLOCK;
            for &(om, wf) in nodes {
                let step = Complex64::new(0.0, -om * dt).exp();
                let mut ph = Complex64::new(0.0, -om * (k0 as f64) * dt).exp();
                for slot in chunk.iter_mut() {
                    *slot += wf * ph;
                    ph *= step;
                }
            }
        });
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    fn fig_bath() -> BathSpec {
        BathSpec::from_eta_ratio(0.1, 10.0, 20.0).unwrap()
    }

    #[test]
    fn critical_coupling_and_regime_flag() {
        let b = fig_bath();
        assert_abs_diff_eq!(b.coupling_eta, 0.01, epsilon = 1e-15);
        assert_abs_diff_eq!(b.eta_c(), 0.1, epsilon = 1e-15);
        assert!(b.is_weak_coupling());
        assert!(!BathSpec::new(0.2, 10.0, 20.0).unwrap().is_weak_coupling());
    }

    #[test]
    fn spectral_density_values() {
        let b = BathSpec::new(1.0, 10.0, 1.0).unwrap();
        assert_abs_diff_eq!(spectral_density(0.0, &b).unwrap(), 0.0);
        // J(ω_c) = η ω_c e^{−1}
        assert_relative_eq!(
            spectral_density(10.0, &b).unwrap(),
            10.0 * (-1.0_f64).exp(),
            max_relative = 1e-14
        );
        // Fig-1 coupling η = 0.1 η_c at ω = ω_c
        assert_relative_eq!(
            spectral_density(10.0, &fig_bath()).unwrap(),
            0.1 * (-1.0_f64).exp(),
            max_relative = 1e-14
        );
        assert!(spectral_density(-1.0, &b).is_err());
    }

    #[test]
    fn bose_occupation_values() {
        assert_abs_diff_eq!(bose_occupation(1.0, 0.0).unwrap(), 0.0);
        // Frozen against an independent high-precision evaluator.
        assert_relative_eq!(
            bose_occupation(1.0, 20.0).unwrap(),
            19.50416649306589,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            bose_occupation(1.0, 15.0).unwrap(),
            14.505555144076464,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            bose_occupation(1.0, 25.0).unwrap(),
            24.50333324444783,
            max_relative = 1e-13
        );
        assert!(bose_occupation(0.0, 1.0).is_err());
        assert!(bose_occupation(-1.0, 1.0).is_err());
    }

    #[test]
    fn g_kernel_closed_form_points() {
        let b = fig_bath();
        // g(0) = η ω_c²
        let g0 = g_kernel(0.0, &b);
        assert_relative_eq!(g0.re, 1.0, max_relative = 1e-14);
        assert_abs_diff_eq!(g0.im, 0.0);
        // s = 1/ω_c at η = ω_c = 1: 1/(1+i)² = −i/2
        let unit = BathSpec::new(1.0, 1.0, 0.0).unwrap();
        let g1 = g_kernel(1.0, &unit);
        assert_abs_diff_eq!(g1.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g1.im, -0.5, epsilon = 1e-15);
        // Riemann–Lebesgue decay
        assert!(g_kernel(1e6, &b).norm() < 1e-12);
    }

    /// Direct quadrature of ∫ J e^{−iωs} dω as an oracle for the closed form.
    fn g_oracle(lag: f64, bath: &BathSpec) -> Complex64 {
        // Composite Simpson on (0, 40ω_c], panel width resolving e^{−iωs}.
        let omega_max = 40.0 * bath.cutoff;
        let n = ((omega_max * lag.abs()).max(omega_max / bath.cutoff) * 40.0) as usize + 200;
        let n = n + n % 2;
        let h = omega_max / n as f64;
        let f = |om: f64| {
            bath.coupling_eta
                * om
                * (-om / bath.cutoff).exp()
                * Complex64::new(0.0, -om * lag).exp()
        };
        let mut acc = f(0.0) + f(omega_max);
        for k in 1..n {
            acc += f(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        acc * h / 3.0
    }

    #[test]
    fn g_closed_form_matches_quadrature() {
        let b = fig_bath();
        for &s in &[0.0, 0.05, 0.3, 1.0, 7.5, 20.0, 50.0] {
            let exact = g_kernel(s, &b);
            let quad = g_oracle(s, &b);
            assert!(
                (exact - quad).norm() <= 1e-8 * exact.norm().max(1e-12),
                "s={s}: {exact} vs {quad}"
            );
        }
    }

    #[test]
    fn gtilde_zero_temperature_and_integrand_limit() {
        let cold = BathSpec::new(0.01, 10.0, 0.0).unwrap();
        let quad = QuadratureSpec::for_bath(&cold, 50.0, 1.0);
        assert_eq!(
            g_tilde_kernel(0.0, &cold, &quad).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        // Integrand continuation at ω → 0 is η·kT₀.
        assert_relative_eq!(
            gtilde_integrand(0.0, &fig_bath()),
            0.2,
            max_relative = 1e-14
        );
    }

    #[test]
    fn gtilde_zero_lag_frozen_value() {
        // V₀ frozen from two independent evaluations (adaptive quadrature and
        // a Matsubara-sum closed form) agreeing to 1e−10.
        let b = fig_bath();
        let quad = QuadratureSpec::for_bath(&b, 50.0, 1.0);
        let v0 = g_tilde_kernel(0.0, &b, &quad).unwrap();
        assert_relative_eq!(v0.re, 1.5797362673929058, max_relative = 1e-8);
        assert_abs_diff_eq!(v0.im, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn gtilde_table_matches_single_lag_operation() {
        let b = fig_bath();
        let grid = TimeGrid::new(0.0, 2.0, 0.01).unwrap();
        let tables = KernelTables::build(&b, &grid, 50.0).unwrap();
        let quad = QuadratureSpec::for_bath(&b, 50.0, 2.0);
        for &j in &[0usize, 1, 17, 100, 200] {
            let single = g_tilde_kernel(j as f64 * grid.step, &b, &quad).unwrap();
            let tabled = tables.gtilde(j as isize);
            assert!(
                (single - tabled).norm() <= 1e-8 * single.norm().max(1e-10),
                "lag {j}: {single} vs {tabled}"
            );
        }
    }

    #[test]
    fn gtilde_hermitian_symmetry_and_positivity() {
        let b = fig_bath();
        let grid = TimeGrid::new(0.0, 3.0, 0.005).unwrap();
        let t = KernelTables::build(&b, &grid, 50.0).unwrap();
        for k in [1isize, 13, 99, 600] {
            let p = t.gtilde(k);
            let m = t.gtilde(-k);
            assert_eq!(p.conj(), m);
        }
        assert!(t.gtilde(0).re > 0.0);
        assert!(t.gtilde(0).im.abs() < 1e-12 * t.gtilde(0).re);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(GL_ORDER);
        assert_eq!(x.len(), GL_ORDER);
        let total: f64 = w.iter().sum();
        assert_relative_eq!(total, 2.0, max_relative = 1e-14);
        // Exact through degree 2n−1: try x^8 and x^20.
        for &p in &[8usize, 20] {
            let s: f64 = x
                .iter()
                .zip(&w)
                .map(|(xi, wi)| wi * xi.powi(p as i32))
                .sum();
            assert_relative_eq!(s, 2.0 / (p as f64 + 1.0), max_relative = 1e-12);
        }
    }

    proptest! {
        #[test]
        fn g_bounded_and_hermitian(s in -40.0f64..40.0) {
            let b = fig_bath();
            let g = g_kernel(s, &b);
            prop_assert!(g.norm() <= g_kernel(0.0, &b).norm() + 1e-15);
            let gm = g_kernel(-s, &b);
            prop_assert!((g.conj() - gm).norm() < 1e-15);
        }

        #[test]
        fn gtilde_linear_in_eta(s in 0.0f64..5.0, scale in 0.5f64..4.0) {
            let b1 = BathSpec::new(0.01, 10.0, 20.0).unwrap();
            let b2 = BathSpec::new(0.01 * scale, 10.0, 20.0).unwrap();
            let quad = QuadratureSpec::for_bath(&b1, 50.0, 5.0);
            let v1 = g_tilde_kernel(s, &b1, &quad).unwrap();
            let v2 = g_tilde_kernel(s, &b2, &quad).unwrap();
            prop_assert!((v2 - v1 * scale).norm() <= 1e-9 * v2.norm().max(1e-12));
        }
    }
}

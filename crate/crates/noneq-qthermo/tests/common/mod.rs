//! Independent oracles shared by the integration suites. Everything here is
//! deliberately built on different numerics than the production code paths
//! it checks.

#![allow(dead_code)]

use ndarray::Array2;
use num_complex::Complex64;

use noneq_qthermo::bath::BathSpec;
use noneq_qthermo::KernelTables;

/// Complex trigamma ψ₁(z) by recurrence + asymptotic series.
pub fn trigamma(mut z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    while z.re < 1.0 || z.norm() < 30.0 {
        acc += 1.0 / (z * z);
        z += 1.0;
    }
    // ψ₁(z) ≈ 1/z + 1/2z² + Σ B_{2k} z^{−2k−1}
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let series = inv
        + 0.5 * inv2
        + inv
            * inv2
            * (1.0 / 6.0
                + inv2
                    * (-1.0 / 30.0
                        + inv2 * (1.0 / 42.0 + inv2 * (-1.0 / 30.0 + inv2 * (5.0 / 66.0)))));
    acc + series
}

/// Matsubara-sum closed form of the thermal kernel:
/// g̃(s) = η kT₀² ψ₁(1 + kT₀/ω_c + i kT₀ s).
pub fn gtilde_matsubara(lag: f64, bath: &BathSpec) -> Complex64 {
    if bath.temperature == 0.0 || bath.coupling_eta == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let t = bath.temperature;
    let z = Complex64::new(1.0 + t / bath.cutoff, t * lag);
    bath.coupling_eta * t * t * trigamma(z)
}

/// Adaptive Simpson quadrature for complex integrands.
pub fn adaptive_simpson<F: Fn(f64) -> Complex64 + Copy>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> Complex64 {
    fn simpson<F: Fn(f64) -> Complex64>(f: &F, a: f64, m: f64, b: f64) -> Complex64 {
        (f(a) + 4.0 * f(m) + f(b)) * ((b - a) / 6.0)
    }
    fn rec<F: Fn(f64) -> Complex64>(
        f: &F,
        a: f64,
        b: f64,
        whole: Complex64,
        tol: f64,
        depth: u32,
    ) -> Complex64 {
        let m = 0.5 * (a + b);
        let left = simpson(f, a, 0.5 * (a + m), m);
        let right = simpson(f, m, 0.5 * (m + b), b);
        let delta = left + right - whole;
        if depth == 0 || delta.norm() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, left, 0.5 * tol, depth - 1) + rec(f, m, b, right, 0.5 * tol, depth - 1)
    }
    let m = 0.5 * (a + b);
    let whole = simpson(&f, a, m, b);
    rec(&f, a, b, whole, tol, 48)
}

/// Natural cubic spline with analytic derivative at the nodes.
pub struct CubicSpline {
    x0: f64,
    h: f64,
    y: Vec<f64>,
    /// second derivatives at the nodes
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn fit_uniform(x0: f64, h: f64, y: &[f64]) -> Self {
        let n = y.len();
        assert!(n >= 3);
        // Solve the natural-spline tridiagonal system for second derivatives.
        let mut sub = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut sup = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        diag[0] = 1.0;
        diag[n - 1] = 1.0;
        for i in 1..n - 1 {
            sub[i] = h / 6.0;
            diag[i] = 2.0 * h / 3.0;
            sup[i] = h / 6.0;
            rhs[i] = (y[i + 1] - y[i]) / h - (y[i] - y[i - 1]) / h;
        }
        // Thomas algorithm.
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        c[0] = sup[0] / diag[0];
        d[0] = rhs[0] / diag[0];
        for i in 1..n {
            let den = diag[i] - sub[i] * c[i - 1];
            c[i] = sup[i] / den;
            d[i] = (rhs[i] - sub[i] * d[i - 1]) / den;
        }
        let mut m = vec![0.0; n];
        m[n - 1] = d[n - 1];
        for i in (0..n - 1).rev() {
            m[i] = d[i] - c[i] * m[i + 1];
        }
        CubicSpline {
            x0,
            h,
            y: y.to_vec(),
            m,
        }
    }

    /// Spline derivative at node index j.
    pub fn derivative_at_node(&self, j: usize) -> f64 {
        let n = self.y.len();
        let h = self.h;
        if j + 1 < n {
            // Left endpoint of segment [j, j+1].
            (self.y[j + 1] - self.y[j]) / h - h * (2.0 * self.m[j] + self.m[j + 1]) / 6.0
        } else {
            // Right endpoint of the last segment.
            (self.y[j] - self.y[j - 1]) / h + h * (2.0 * self.m[j] + self.m[j - 1]) / 6.0
        }
    }
}

/// Brute-force double sum for v(t_m, t_m): the raw complex quadratic form
/// with no incremental reuse and no symmetrization.
pub fn v_brute_force(tables: &KernelTables, u: &[Complex64], dt: f64, m: usize) -> Complex64 {
    let w = |a: usize| if a == 0 || a == m { 0.5 } else { 1.0 };
    let mut acc = Complex64::new(0.0, 0.0);
    for a in 0..=m {
        for b in 0..=m {
            acc += w(a) * w(b) * u[a] * tables.gtilde(b as isize - a as isize) * u[b].conj();
        }
    }
    acc * dt * dt
}

/// Lamb shift Δ(ω) = P∫₀^∞ J(ω')/(ω'−ω) dω' by the symmetric-interval
/// principal-value trick (the integrand is regularized at ω' = ω).
pub fn lamb_shift(omega: f64, bath: &BathSpec) -> f64 {
    let j = |w: f64| bath.coupling_eta * w * (-w / bath.cutoff).exp();
    let jp = |w: f64| bath.coupling_eta * (-w / bath.cutoff).exp() * (1.0 - w / bath.cutoff);
    let jw = j(omega);
    let regular = move |w: f64| {
        let d = w - omega;
        let val = if d.abs() < 1e-9 {
            jp(omega)
        } else {
            (j(w) - jw) / d
        };
        Complex64::new(val, 0.0)
    };
    let near = adaptive_simpson(regular, 0.0, 2.0 * omega, 1e-12).re;
    let far = adaptive_simpson(
        move |w: f64| Complex64::new(j(w) / (w - omega), 0.0),
        2.0 * omega,
        60.0 * bath.cutoff,
        1e-12,
    )
    .re;
    near + far
}

/// Laplace-pole oracle for the long-time decay rate and frequency: iterate
/// ω_r = ω₀ − Δ(ω_r), then γ_r = π J(ω_r).
pub fn pole_oracle(bath: &BathSpec) -> (f64, f64) {
    let mut omega_r = 1.0;
    for _ in 0..6 {
        omega_r = 1.0 - lamb_shift(omega_r, bath);
    }
    let gamma_r =
        std::f64::consts::PI * bath.coupling_eta * omega_r * (-omega_r / bath.cutoff).exp();
    (omega_r, gamma_r)
}

/// ⟨a⟩, ⟨a†a⟩, ⟨aa⟩ extracted directly from a Fock-basis density matrix.
pub fn fock_moments(rho: &Array2<Complex64>) -> (Complex64, f64, Complex64) {
    let n = rho.nrows();
    let mut mean_a = Complex64::new(0.0, 0.0);
    let mut number = 0.0;
    let mut anomalous = Complex64::new(0.0, 0.0);
    for k in 0..n {
        number += k as f64 * rho[[k, k]].re;
        if k >= 1 {
            mean_a += (k as f64).sqrt() * rho[[k, k - 1]];
        }
        if k >= 2 {
            anomalous += ((k * (k - 1)) as f64).sqrt() * rho[[k, k - 2]];
        }
    }
    (mean_a, number, anomalous)
}

#[cfg(test)]
mod self_tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn trigamma_reference_values() {
        let pi2 = std::f64::consts::PI * std::f64::consts::PI;
        assert_relative_eq!(
            trigamma(Complex64::new(1.0, 0.0)).re,
            pi2 / 6.0,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            trigamma(Complex64::new(0.5, 0.0)).re,
            pi2 / 2.0,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            trigamma(Complex64::new(2.0, 0.0)).re,
            pi2 / 6.0 - 1.0,
            max_relative = 1e-13
        );
    }
}

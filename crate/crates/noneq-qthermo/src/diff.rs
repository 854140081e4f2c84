//! The one differentiation stencil used for every rate in the ledger.
//!
//! Second-order central differences on interior points, second-order
//! one-sided at the two endpoints. Residual identities (first law, entropy
//! balance) compare differentiated series against each other; a single shared
//! stencil keeps scheme mismatch out of those residuals.

/// d/dt of a uniformly sampled series with spacing `h`.
pub fn derivative(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    assert!(n >= 3, "derivative needs at least 3 samples");
    let mut d = vec![0.0; n];
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    for j in 1..n - 1 {
        d[j] = (f[j + 1] - f[j - 1]) / (2.0 * h);
    }
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn exact_on_linear_data() {
        let h = 0.1;
        let f: Vec<f64> = (0..50).map(|j| 3.5 * j as f64 * h - 2.0).collect();
        for d in derivative(&f, h) {
            assert_abs_diff_eq!(d, 3.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn exact_on_quadratic_data() {
        // Both the central and the one-sided stencils are exact for quadratics.
        let h = 0.05;
        let f: Vec<f64> = (0..40)
            .map(|j| {
                let t = j as f64 * h;
                1.0 + 2.0 * t - 0.7 * t * t
            })
            .collect();
        let d = derivative(&f, h);
        for (j, dj) in d.iter().enumerate() {
            let t = j as f64 * h;
            assert_abs_diff_eq!(*dj, 2.0 - 1.4 * t, epsilon = 1e-10);
        }
    }

    #[test]
    fn second_order_convergence() {
        let eval = |h: f64| -> f64 {
            let n = (1.0 / h) as usize + 1;
            let f: Vec<f64> = (0..n).map(|j| (j as f64 * h).sin()).collect();
            let d = derivative(&f, h);
            (0..n)
                .map(|j| (d[j] - (j as f64 * h).cos()).abs())
                .fold(0.0, f64::max)
        };
        let e1 = eval(1e-2);
        let e2 = eval(5e-3);
        let ratio = e1 / e2;
        assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
    }
}

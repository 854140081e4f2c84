//! Eigenvalues of Hermitian matrices by cyclic Jacobi rotations.
//!
//! Self-contained (no LAPACK), eigenvalues only: this backs the Fock-basis
//! von Neumann entropy, which serves as the independent oracle for the
//! Gaussian-formula entropy, so it deliberately shares no machinery with
//! that route. Quadratic convergence; matrices here are ≲ a few hundred
//! rows, where Jacobi is both fast and very accurate.

use ndarray::Array2;
use num_complex::Complex64;

use crate::{Error, Result};

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// The input must be Hermitian within `herm_tol` (relative to the Frobenius
/// norm); the iteration itself maintains Hermiticity exactly.
pub fn hermitian_eigenvalues(a: &Array2<Complex64>, herm_tol: f64) -> Result<Vec<f64>> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::domain(
            "hermitian_eigenvalues",
            "matrix must be square",
        ));
    }
    let fro: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut max_asym = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            max_asym = max_asym.max((a[[i, j]] - a[[j, i]].conj()).norm());
        }
    }
    if max_asym > herm_tol * fro.max(1.0) {
        return Err(Error::domain(
            "hermitian_eigenvalues",
            format!("matrix not Hermitian: max |A_ij − A_ji*| = {max_asym:.3e}"),
        ));
    }

    let mut m = a.clone();
    // Symmetrize exactly so rotations see a Hermitian matrix.
    for i in 0..n {
        m[[i, i]] = Complex64::new(m[[i, i]].re, 0.0);
        for j in i + 1..n {
            let h = 0.5 * (m[[i, j]] + m[[j, i]].conj());
            m[[i, j]] = h;
            m[[j, i]] = h.conj();
        }
    }

    let off = |m: &Array2<Complex64>| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                s += m[[i, j]].norm_sqr();
            }
        }
        (2.0 * s).sqrt()
    };

    let tol = 1e-14 * fro.max(1e-300);
    for _sweep in 0..40 {
        if off(&m) <= tol {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[[p, q]];
                let r = apq.norm();
                if r <= 1e-300 {
                    continue;
                }
                let phase = apq / r; // e^{iφ}
                let app = m[[p, p]].re;
                let aqq = m[[q, q]].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau == 0.0 {
                    1.0
                } else {
                    -tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // U restricted to (p,q): [[c, −s], [s e^{−iφ}, c e^{−iφ}]].
                let e_m = phase.conj();
                let e_p = phase;
                // Rows: A[p][:], A[q][:] ← U† A.
                for j in 0..n {
                    let ap = m[[p, j]];
                    let aq = m[[q, j]];
                    m[[p, j]] = c * ap + s * e_p * aq;
                    m[[q, j]] = -s * ap + c * e_p * aq;
                }
                // Columns: A[:][p], A[:][q] ← A U.
                for i in 0..n {
                    let ap = m[[i, p]];
                    let aq = m[[i, q]];
                    m[[i, p]] = c * ap + s * e_m * aq;
                    m[[i, q]] = -s * ap + c * e_m * aq;
                }
                m[[p, q]] = Complex64::new(0.0, 0.0);
                m[[q, p]] = Complex64::new(0.0, 0.0);
                m[[p, p]] = Complex64::new(m[[p, p]].re, 0.0);
                m[[q, q]] = Complex64::new(m[[q, q]].re, 0.0);
            }
        }
    }
    if off(&m) > 1e3 * tol {
        return Err(Error::numerics(
            "hermitian_eigenvalues",
            format!("Jacobi sweeps did not converge: off-norm {:.3e}", off(&m)),
        ));
    }
    let mut evals: Vec<f64> = (0..n).map(|i| m[[i, i]].re).collect();
    evals.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(evals)
}

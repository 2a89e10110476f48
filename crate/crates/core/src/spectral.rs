//! Ground-state correlation matrices, a symmetric eigensolver and
//! log-determinants of `λ + 1 − 2A_L`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::criticality::FermiAnalysis;
use crate::error::{Error, Result};
use crate::models::{mode_energy_unchecked, InteractionModel};
use crate::specfun::ComplexValue;

/// Tolerance for mode energies coinciding with μ in finite chains.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Distance from the spectrum below which `log_det_char` refuses λ.
pub const SINGULAR_TOL: f64 = 1e-12;

const QL_MAX_SWEEPS: usize = 60;

/// Eigenvalues of the L×L Toeplitz correlation matrix with its generator.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationSpectrum {
    first_row: Vec<f64>,
    eigenvalues: Vec<f64>,
}

impl CorrelationSpectrum {
    pub fn new(first_row: Vec<f64>) -> Result<Self> {
        let eigenvalues = eigenvalues_symmetric(&first_row)?;
        Ok(CorrelationSpectrum {
            first_row,
            eigenvalues,
        })
    }

    pub fn from_analysis(analysis: &FermiAnalysis, l: usize) -> Result<Self> {
        Self::new(correlation_row(analysis, l)?)
    }

    pub fn len(&self) -> usize {
        self.first_row.len()
    }

    pub fn is_empty(&self) -> bool {
        self.first_row.is_empty()
    }

    pub fn first_row(&self) -> &[f64] {
        &self.first_row
    }

    /// Ascending eigenvalues, unclamped.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn trace(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }
}

/// First row of the thermodynamic-limit correlation matrix,
/// `(1/2π) ∫_sea e^{−idp} dp` for lags `d = 0..L−1`.
pub fn correlation_row(analysis: &FermiAnalysis, l: usize) -> Result<Vec<f64>> {
    if l == 0 {
        return Err(Error::domain("block length must be >= 1"));
    }
    let mut row = Vec::with_capacity(l);
    let filled_pi = if analysis.pi_in_sea { 1.0 } else { 0.0 };
    row.push(
        analysis
            .roots
            .iter()
            .map(|r| r.side as f64 * r.p / PI)
            .sum::<f64>()
            + filled_pi,
    );
    for d in 1..l {
        let df = d as f64;
        let s: f64 = analysis
            .roots
            .iter()
            .map(|r| r.side as f64 * (r.p * df).sin())
            .sum();
        row.push(s / (PI * df));
    }
    Ok(row)
}

/// First row of the correlation matrix of an N-site chain,
/// `(1/N) Σ_{ε_N(l) < μ} cos(2πdl/N)`.
pub fn correlation_row_finite(
    model: &InteractionModel,
    mu: f64,
    l: usize,
    n: usize,
) -> Result<Vec<f64>> {
    model.validate()?;
    if l == 0 || n < l {
        return Err(Error::domain(format!("need 1 <= L <= N, got L = {l}, N = {n}")));
    }
    let mut filled = Vec::new();
    for k in 0..n {
        let e = mode_energy_unchecked(model, n, k);
        if (e - mu).abs() < DEGENERACY_TOL {
            return Err(Error::DegenerateGroundState {
                mode: k,
                energy: e,
                tol: DEGENERACY_TOL,
            });
        }
        if e < mu {
            filled.push(k);
        }
    }
    let cosines: Vec<f64> = (0..n)
        .map(|k| (2.0 * PI * k as f64 / n as f64).cos())
        .collect();
    Ok((0..l)
        .map(|d| filled.iter().map(|&k| cosines[(d * k) % n]).sum::<f64>() / n as f64)
        .collect())
}

/// Dense row-major symmetric Toeplitz matrix generated by `row`.
pub fn toeplitz(row: &[f64]) -> Vec<f64> {
    let n = row.len();
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = row[i.abs_diff(j)];
        }
    }
    a
}

/// Ascending eigenvalues of the symmetric Toeplitz matrix generated by `row`.
pub fn eigenvalues_symmetric(row: &[f64]) -> Result<Vec<f64>> {
    if row.is_empty() {
        return Err(Error::domain("Toeplitz generator must be nonempty"));
    }
    if row.iter().any(|x| !x.is_finite()) {
        return Err(Error::domain("Toeplitz generator has non-finite entries"));
    }
    let n = row.len();
    let mut a = toeplitz(row);
    symmetric_eigenvalues(&mut a, n)
}

/// Eigenvalues of a dense symmetric matrix (row-major, overwritten):
/// Householder reduction to tridiagonal form, then implicit QL.
pub fn symmetric_eigenvalues(a: &mut [f64], n: usize) -> Result<Vec<f64>> {
    if a.len() != n * n {
        return Err(Error::domain("matrix storage does not match dimension"));
    }
    let (mut d, mut e) = tridiagonalize(a, n);
    tridiagonal_ql(&mut d, &mut e)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

// Householder reduction, values only. Returns (diagonal, subdiagonal) with
// e[i] coupling rows i−1 and i.
fn tridiagonalize(a: &mut [f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    for i in (1..n).rev() {
        let l = i - 1;
        if l > 0 {
            let mut h = 0.0;
            let scale: f64 = (0..=l).map(|k| a[i * n + k].abs()).sum();
            if scale == 0.0 {
                e[i] = a[i * n + l];
            } else {
                for k in 0..=l {
                    a[i * n + k] /= scale;
                    h += a[i * n + k] * a[i * n + k];
                }
                let f = a[i * n + l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i * n + l] = f - g;
                let mut f = 0.0;
                for j in 0..=l {
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[j * n + k] * a[i * n + k];
                    }
                    for k in (j + 1)..=l {
                        g += a[k * n + j] * a[i * n + k];
                    }
                    e[j] = g / h;
                    f += e[j] * a[i * n + j];
                }
                let hh = f / (h + h);
                for j in 0..=l {
                    let f = a[i * n + j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[j * n + k] -= f * e[k] + g * a[i * n + k];
                    }
                }
            }
        } else {
            e[i] = a[i * n + l];
        }
    }
    for i in 0..n {
        d[i] = a[i * n + i];
    }
    (d, e)
}

// Implicit QL with Wilkinson-type shifts on a symmetric tridiagonal matrix.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n == 1 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    // Absolute deflation floor; clustered eigenvalues near zero never meet
    // the purely relative test.
    let floor = f64::EPSILON
        * d.iter().zip(e.iter()).map(|(x, y)| x.abs() + y.abs()).fold(0.0, f64::max);
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd || e[m].abs() <= floor {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > QL_MAX_SWEEPS {
                return Err(Error::NonConvergence {
                    what: format!(
                        "tridiagonal QL on a {n}x{n} matrix (cap {QL_MAX_SWEEPS} sweeps per eigenvalue)"
                    ),
                    achieved: e[l].abs(),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// log det(λ + 1 − 2A_L) = Σ log(λ + 1 − 2λ_i), principal branch per factor.
pub fn log_det_char(spectrum: &CorrelationSpectrum, lambda: ComplexValue) -> Result<ComplexValue> {
    let mut sum = Complex64::new(0.0, 0.0);
    for &v in spectrum.eigenvalues() {
        let factor = lambda + 1.0 - 2.0 * v;
        if (lambda - (2.0 * v - 1.0)).norm() < SINGULAR_TOL {
            return Err(Error::Singular(format!(
                "lambda = {lambda} coincides with spectral point {}",
                2.0 * v - 1.0
            )));
        }
        sum += factor.ln();
    }
    Ok(sum)
}

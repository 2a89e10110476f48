//! Fisher–Hartwig asymptotics of det(λ + 1 − 2A_L) for the piecewise
//! constant symbol of a Fermi sea with 2(m+1) jumps.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::criticality::FermiAnalysis;
use crate::entanglement::log_f_factor;
use crate::error::{Error, Result};
use crate::specfun::{log_barnes_pair, ComplexValue};
use crate::spectral::{log_det_char, CorrelationSpectrum};

/// Minimum distance of λ from the cut [−1, 1].
pub const CUT_TOL: f64 = 1e-9;

/// Jump exponents and constant of the symbol `λ + 1 − 2·1_sea(p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FhSymbol {
    pub lambda: ComplexValue,
    pub beta: ComplexValue,
    /// β_j = (−1)^j β, one per jump.
    pub betas: Vec<ComplexValue>,
    /// Constant factor b of the symbol.
    pub b: ComplexValue,
    /// Filling P entering b.
    pub p: f64,
    /// Jump locations ±p_i.
    pub jump_angles: Vec<f64>,
    pub roots: Vec<f64>,
}

fn distance_to_cut(lambda: ComplexValue) -> f64 {
    if lambda.re.abs() <= 1.0 {
        lambda.im.abs()
    } else {
        let end = lambda.re.signum();
        (lambda - end).norm()
    }
}

fn check_roots(roots: &[f64]) -> Result<()> {
    if roots.is_empty() {
        return Err(Error::domain("symbol needs at least one Fermi point"));
    }
    if roots.iter().any(|p| !(*p > 0.0 && *p < PI)) || roots.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain("Fermi points must be strictly increasing in (0, pi)"));
    }
    Ok(())
}

fn build(roots: &[f64], lambda: ComplexValue, p: f64) -> Result<FhSymbol> {
    if !(lambda.re.is_finite() && lambda.im.is_finite()) {
        return Err(Error::domain("lambda must be finite"));
    }
    if distance_to_cut(lambda) <= CUT_TOL {
        return Err(Error::domain(format!("lambda = {lambda} lies on the cut [-1, 1]")));
    }
    let log_w = ((lambda + 1.0) / (lambda - 1.0)).ln();
    let beta = log_w / Complex64::new(0.0, 2.0 * PI);
    let jumps = 2 * roots.len();
    let betas = (0..jumps)
        .map(|j| if j % 2 == 0 { beta } else { -beta })
        .collect();
    let b = ((lambda + 1.0).ln() - p * log_w).exp();
    let mut jump_angles: Vec<f64> = roots.iter().map(|p| -p).collect();
    jump_angles.extend_from_slice(roots);
    jump_angles.sort_by(f64::total_cmp);
    Ok(FhSymbol {
        lambda,
        beta,
        betas,
        b,
        p,
        jump_angles,
        roots: roots.to_vec(),
    })
}

/// Symbol parameters for a sea (−p₀, p₀) ∪ (p₁, 2π−p₁) ∪ … containing p = 0.
pub fn symbol_params(roots: &[f64], lambda: ComplexValue) -> Result<FhSymbol> {
    check_roots(roots)?;
    let alternating: f64 = roots
        .iter()
        .enumerate()
        .map(|(k, p)| if k % 2 == 0 { p / PI } else { -p / PI })
        .sum();
    let parity = ((roots.len() - 1) % 2) as f64;
    build(roots, lambda, alternating + parity)
}

impl FhSymbol {
    /// Symbol of a critical analysis; P is the sea measure over 2π, which
    /// also covers seas that do not contain p = 0.
    pub fn from_analysis(analysis: &FermiAnalysis, lambda: ComplexValue) -> Result<Self> {
        analysis.require_critical()?;
        let roots = analysis.root_momenta();
        check_roots(&roots)?;
        build(&roots, lambda, analysis.sea_measure() / (2.0 * PI))
    }

    /// log b = log(λ+1) − P log((λ+1)/(λ−1)).
    pub fn log_b(&self) -> ComplexValue {
        (self.lambda + 1.0).ln() - self.p * ((self.lambda + 1.0) / (self.lambda - 1.0)).ln()
    }
}

/// Asymptotic log D_L(λ) = L log b − 2β² log(L^{m+1} f) + 2(m+1) log[G(1+β)G(1−β)].
pub fn log_dl_asymptotic(symbol: &FhSymbol, l: usize) -> Result<ComplexValue> {
    if l < 2 {
        return Err(Error::domain(format!("asymptotic determinant needs L >= 2, got {l}")));
    }
    let components = symbol.roots.len() as f64;
    let log_f = log_f_factor(&symbol.roots)?;
    let beta2 = symbol.beta * symbol.beta;
    let barnes = log_barnes_pair(symbol.beta)?;
    let lf = l as f64;
    Ok(-2.0 * beta2 * (components * lf.ln() + log_f) + lf * symbol.log_b() + 2.0 * components * barnes)
}

/// Reduces the imaginary part into (−π, π].
fn reduce_branch(z: ComplexValue) -> ComplexValue {
    let two_pi = 2.0 * PI;
    let mut im = z.im.rem_euclid(two_pi);
    if im > PI {
        im -= two_pi;
    }
    Complex64::new(z.re, im)
}

/// |log D_L^exact − log D_L^asym| (modulo 2πi) for every L in `ls`.
pub fn fh_deviation(
    analysis: &FermiAnalysis,
    lambda: ComplexValue,
    ls: &[usize],
) -> Result<Vec<(usize, f64)>> {
    let symbol = FhSymbol::from_analysis(analysis, lambda)?;
    ls.par_iter()
        .map(|&l| {
            let spectrum = CorrelationSpectrum::from_analysis(analysis, l)?;
            let exact = log_det_char(&spectrum, lambda)?;
            let asym = log_dl_asymptotic(&symbol, l)?;
            Ok((l, reduce_branch(exact - asym).norm()))
        })
        .collect()
}

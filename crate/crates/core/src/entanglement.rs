//! Block Rényi entropies: exact values from the correlation spectrum and
//! the large-L asymptotic law with its universal constant C̃_α.
//!
//! Throughout, `alpha = f64::INFINITY` selects the min-entropy limit and
//! |α − 1| < 1e−6 selects the von Neumann branch.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::criticality::FermiAnalysis;
use crate::error::{Error, Result};
use crate::numerics::{integrate_panels, QuadSettings};
use crate::specfun::{digamma_real_part, entropy_kernel};
use crate::spectral::CorrelationSpectrum;

/// |x| this close to 1 counts as a pure mode and contributes nothing.
pub const PURE_MODE_TOL: f64 = 1e-9;

const VON_NEUMANN_TOL: f64 = 1e-6;
const TAIL_BOUND: f64 = 1e-14;

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("Renyi index must be > 0, got {alpha}")))
    }
}

fn is_von_neumann(alpha: f64) -> bool {
    (alpha - 1.0).abs() < VON_NEUMANN_TOL
}

/// S_α = Σ s_α(2λ_i − 1) over the correlation eigenvalues.
pub fn renyi_exact(spectrum: &CorrelationSpectrum, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let mut total = 0.0;
    for &v in spectrum.eigenvalues() {
        let x = 2.0 * v - 1.0;
        if x.abs() >= 1.0 - PURE_MODE_TOL {
            if x.abs() > 1.0 + PURE_MODE_TOL {
                return Err(Error::domain(format!(
                    "correlation eigenvalue {v} outside [0, 1]"
                )));
            }
            continue;
        }
        total += entropy_kernel(alpha, x)?;
    }
    Ok(total)
}

/// log f(p₀, …, p_m) for Fermi points 0 < p₀ < … < p_m < π.
pub fn log_f_factor(roots: &[f64]) -> Result<f64> {
    if roots.is_empty() {
        return Err(Error::domain("f factor needs at least one Fermi point"));
    }
    if roots.iter().any(|p| !(*p > 0.0 && *p < PI)) {
        return Err(Error::domain("Fermi points must lie in (0, pi)"));
    }
    if roots.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Singular(
            "Fermi points must be strictly increasing (coincident roots)".into(),
        ));
    }
    let mut log_f: f64 = roots.iter().map(|p| (2.0 * p.sin()).ln()).sum();
    for (i, pi) in roots.iter().enumerate() {
        for (j, pj) in roots.iter().enumerate().take(i) {
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            let plus = (0.5 * (pi + pj)).sin().abs().ln();
            let minus = (0.5 * (pi - pj)).sin().abs().ln();
            log_f += sign * 2.0 * (plus - minus);
        }
    }
    Ok(log_f)
}

/// f(p₀, …, p_m) = Π 2 sin p_i · Π_{j<i} [sin²((p_i+p_j)/2) / sin²((p_i−p_j)/2)]^{(−1)^{i+j}}.
pub fn f_factor(roots: &[f64]) -> Result<f64> {
    log_f_factor(roots).map(f64::exp)
}

/// Prefactor (1 + α)/(6α) of log L per Fermi-sea component.
pub fn i1(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if alpha.is_infinite() {
        return Ok(1.0 / 6.0);
    }
    Ok((1.0 + alpha) / (6.0 * alpha))
}

/// s_α(tanh πw) for w ≥ 0 in a form free of cancellation at large w.
fn kernel_of_rapidity(alpha: f64, w: f64) -> f64 {
    let u = (-2.0 * PI * w).exp();
    if is_von_neumann(alpha) {
        u.ln_1p() + 2.0 * PI * w * u / (1.0 + u)
    } else if alpha.is_infinite() {
        u.ln_1p()
    } else {
        ((-2.0 * alpha * PI * w).exp().ln_1p() - alpha * u.ln_1p()) / (1.0 - alpha)
    }
}

fn rapidity_breaks(alpha: f64) -> Vec<f64> {
    let rate = 2.0 * PI * alpha.min(1.0);
    let upper = 40.0 / rate + 2.0;
    let mut breaks = vec![0.0];
    let mut w = 0.125;
    while w < upper {
        breaks.push(w);
        w *= 2.0;
    }
    breaks.push(upper);
    breaks
}

fn tight() -> QuadSettings {
    QuadSettings {
        abs_tol: 1e-14,
        rel_tol: 1e-13,
        max_intervals: 20_000,
    }
}

/// (2/π²) ∫_{−1}^{1} s_α(x)/(1 − x²) dx evaluated by quadrature in the
/// rapidity w = artanh(x)/π; equals [`i1`] identically.
pub fn i1_quadrature(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let r = integrate_panels(|w: f64| kernel_of_rapidity(alpha, w), &rapidity_breaks(alpha), tight())?;
    Ok(4.0 / PI * r.value)
}

/// C̃_α from the digamma representation
/// −(2/π²) ∫ s_α(x)/(1 − x²) Re ψ(½ + iB(x)) dx, in the rapidity w = B(x).
pub fn c_tilde_oracle(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let r = integrate_panels(
        |w: f64| kernel_of_rapidity(alpha, w) * digamma_real_part(w),
        &rapidity_breaks(alpha),
        tight(),
    )?;
    Ok(-4.0 / PI * r.value)
}

// csch x = 1/x − x/6 + q(x); odd Taylor coefficients of q from x³ on.
const CSCH_SERIES: [f64; 9] = [
    7.0 / 360.0,
    -31.0 / 15_120.0,
    127.0 / 604_800.0,
    -73.0 / 3_421_440.0,
    1_414_477.0 / 653_837_184_000.0,
    -8191.0 / 37_362_124_800.0,
    16_931_177.0 / 762_187_345_920_000.0,
    -5_749_691_557.0 / 2_554_547_108_585_472_000.0,
    91_546_277_357.0 / 401_428_831_349_145_600_000.0,
];

// coth x = 1/x + x/3 + c(x); odd Taylor coefficients of c from x³ on.
const COTH_SERIES: [f64; 9] = [
    -1.0 / 45.0,
    2.0 / 945.0,
    -1.0 / 4725.0,
    2.0 / 93_555.0,
    -1382.0 / 638_512_875.0,
    4.0 / 18_243_225.0,
    -3617.0 / 162_820_783_125.0,
    87_734.0 / 38_979_295_480_125.0,
    -349_222.0 / 1_531_329_465_290_625.0,
];

fn odd_series(coefs: &[f64], x: f64) -> f64 {
    let x2 = x * x;
    let mut acc = 0.0;
    for c in coefs.iter().rev() {
        acc = acc * x2 + c;
    }
    acc * x2 * x
}

fn csch(x: f64) -> f64 {
    if x > 20.0 {
        2.0 * (-x).exp() / (1.0 - (-2.0 * x).exp())
    } else {
        1.0 / x.sinh()
    }
}

/// csch x − 1/x + x/6.
fn csch_q(x: f64) -> f64 {
    if x < 0.5 {
        odd_series(&CSCH_SERIES, x)
    } else {
        csch(x) - 1.0 / x + x / 6.0
    }
}

/// csch x − 1/x.
fn csch_r(x: f64) -> f64 {
    -x / 6.0 + csch_q(x)
}

/// coth x − 1/x − x/3.
fn coth_c(x: f64) -> f64 {
    if x < 0.5 {
        odd_series(&COTH_SERIES, x)
    } else {
        1.0 / x.tanh() - 1.0 / x - x / 3.0
    }
}

// (1 − α) times the integrand of C̃_α in t, including the 1/t measure.
fn c_tilde_integrand(alpha: f64, t: f64) -> f64 {
    let k = (1.0 - alpha * alpha) / (6.0 * alpha);
    let s = t / alpha;
    let numerator = if t.min(s) < 1.0 {
        let (rt, rs) = (csch_r(t), csch_r(s));
        (alpha * csch_q(t) - csch_q(s)) / t + alpha * rt * rt - rt * rs - k * (-2.0 * t).exp_m1()
    } else {
        let ct = csch(t);
        alpha * ct * ct - ct * csch(s) - k * (-2.0 * t).exp()
    };
    numerator / t
}

// Integrand of C̃₁ in t.
fn c_tilde_one_integrand(t: f64) -> f64 {
    if t < 1.0 {
        let r = csch_r(t);
        let c = t / 3.0 + coth_c(t);
        let s = 2.0 * r / t + r * r;
        -(-2.0 * t).exp_m1() / (3.0 * t) + coth_c(t) / (t * t) + c * s
    } else {
        let ch = csch(t);
        (1.0 / t.tanh()) * ch * ch - ch * ch / t - (-2.0 * t).exp() / (3.0 * t)
    }
}

// Integrand of C̃_∞ in t (including the 1/t measure).
fn c_tilde_inf_integrand(t: f64) -> f64 {
    if t < 1.0 {
        let r = csch_r(t);
        -(-2.0 * t).exp_m1() / (6.0 * t) - csch_q(t) / (t * t) - r * r / t
    } else {
        let ch = csch(t);
        (ch / t - ch * ch - (-2.0 * t).exp() / 6.0) / t
    }
}

/// Point where α e^{−2 min(1, 1/α) t}/t drops below the tail bound. The
/// α = ∞ integrand decays as 2e^{−t}/t² instead.
fn truncation_point(alpha: f64) -> f64 {
    let (amplitude, rate) = if alpha.is_infinite() {
        (2.0, 1.0)
    } else {
        (alpha, 2.0 * (1.0 / alpha).min(1.0))
    };
    let mut t = 1.0;
    while amplitude * (-rate * t).exp() / t >= TAIL_BOUND {
        t *= 1.05;
    }
    t
}

/// ∫₀^{T*} g(t) dt computed in u = e^{−t} with breakpoints uniform in t.
fn integrate_log_variable(g: impl Fn(f64) -> f64, t_max: f64, abs_tol: f64) -> Result<f64> {
    let mut ts = vec![0.0, 0.125, 0.25, 0.5];
    let mut t = 1.0;
    while t < t_max {
        ts.push(t);
        t = if t < 64.0 { t + 1.0 } else { t * 1.25 };
    }
    ts.push(t_max);
    // u decreasing in t; integrate over ascending u.
    let mut us: Vec<f64> = ts.iter().map(|t| (-t).exp()).collect();
    us.reverse();
    let r = integrate_panels(
        |u: f64| {
            let t = -u.ln();
            g(t) / u
        },
        &us,
        QuadSettings {
            abs_tol,
            rel_tol: 1e-13,
            max_intervals: 50_000,
        },
    )?;
    Ok(r.value)
}

/// Universal constant C̃_α of the asymptotic block entropy.
pub fn c_tilde(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if is_von_neumann(alpha) {
        return integrate_log_variable(c_tilde_one_integrand, truncation_point(1.0), 1e-14);
    }
    if alpha.is_infinite() {
        return integrate_log_variable(c_tilde_inf_integrand, truncation_point(alpha), 1e-14);
    }
    // The numerator is O(1 − α); its round-off floor sets the tolerance.
    let gap = 1.0 - alpha;
    let scaled = integrate_log_variable(
        |t| c_tilde_integrand(alpha, t),
        truncation_point(alpha),
        (1e-14 * gap.abs()).max(2e-15),
    )?;
    Ok(scaled / gap)
}

/// Asymptotic entropy of an L-site block of a critical ground state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticEntropy {
    pub alpha: f64,
    pub l: usize,
    pub s_asymptotic: f64,
    /// Constant term (1+α)/(6α)·log f + (m+1)·C̃_α.
    pub c_alpha: f64,
    pub c_tilde: f64,
    pub f_factor: f64,
}

fn asymptotic_from_parts(roots: &[f64], l: usize, alpha: f64, c_tilde: f64) -> Result<AsymptoticEntropy> {
    if l == 0 {
        return Err(Error::domain("block length must be >= 1"));
    }
    let components = roots.len() as f64;
    let prefactor = i1(alpha)?;
    let log_f = log_f_factor(roots)?;
    let c_alpha = prefactor * log_f + components * c_tilde;
    Ok(AsymptoticEntropy {
        alpha,
        l,
        s_asymptotic: components * prefactor * (l as f64).ln() + c_alpha,
        c_alpha,
        c_tilde,
        f_factor: log_f.exp(),
    })
}

/// S_app = (m+1)(1+α)/(6α)·log(L f^{1/(m+1)}) + (m+1)C̃_α.
pub fn renyi_asymptotic(analysis: &FermiAnalysis, l: usize, alpha: f64) -> Result<AsymptoticEntropy> {
    analysis.require_critical()?;
    asymptotic_from_parts(&analysis.root_momenta(), l, alpha, c_tilde(alpha)?)
}

/// Exact and asymptotic block entropy side by side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyReport {
    pub alpha: f64,
    pub l: usize,
    pub s_exact: f64,
    pub s_asymptotic: f64,
    pub c_alpha: f64,
    pub c_tilde: f64,
    pub f_factor: f64,
    /// S_app / S − 1.
    pub r_l: f64,
}

fn combine(s_exact: f64, asym: AsymptoticEntropy) -> EntropyReport {
    EntropyReport {
        alpha: asym.alpha,
        l: asym.l,
        s_exact,
        s_asymptotic: asym.s_asymptotic,
        c_alpha: asym.c_alpha,
        c_tilde: asym.c_tilde,
        f_factor: asym.f_factor,
        r_l: asym.s_asymptotic / s_exact - 1.0,
    }
}

pub fn entropy_report(analysis: &FermiAnalysis, l: usize, alpha: f64) -> Result<EntropyReport> {
    let asym = renyi_asymptotic(analysis, l, alpha)?;
    let spectrum = CorrelationSpectrum::from_analysis(analysis, l)?;
    Ok(combine(renyi_exact(&spectrum, alpha)?, asym))
}

/// Reports for every (L, α) pair, ordered by L then α. Block lengths are
/// processed in parallel; each spectrum is computed once.
pub fn entropy_sweep(analysis: &FermiAnalysis, ls: &[usize], alphas: &[f64]) -> Result<Vec<EntropyReport>> {
    analysis.require_critical()?;
    let roots = analysis.root_momenta();
    let constants = alphas
        .iter()
        .map(|&a| c_tilde(a).map(|c| (a, c)))
        .collect::<Result<Vec<_>>>()?;
    let per_l = ls
        .par_iter()
        .map(|&l| {
            let spectrum = CorrelationSpectrum::from_analysis(analysis, l)?;
            constants
                .iter()
                .map(|&(alpha, ct)| {
                    let asym = asymptotic_from_parts(&roots, l, alpha, ct)?;
                    Ok(combine(renyi_exact(&spectrum, alpha)?, asym))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_l.into_iter().flatten().collect())
}

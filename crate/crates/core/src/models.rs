//! Interaction families of the su(1|1) chain, finite-N mode energies and
//! thermodynamic-limit dispersion relations.

use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::specfun::{
    polylog_circle_estimate, polylog_circle_phase_derivative_estimate, zeta,
};

/// Largest accepted power-law exponent. Beyond it Γ(ν) in the polylog
/// integral loses accuracy and the model is indistinguishable from
/// nearest-neighbour hopping anyway.
pub const MAX_POWER_LAW_EXPONENT: f64 = 100.0;

/// Tail bound below which a custom interaction is truncated.
pub const CUSTOM_TRUNCATION_TOL: f64 = 1e-12;

/// Default number of grid intervals on [0, π] for the monotonicity scan.
pub const DEFAULT_SCAN_GRID: usize = 4096;

const CUSTOM_MAX_TERMS: usize = 1 << 22;

type Coupling = Arc<dyn Fn(usize) -> f64 + Send + Sync>;

/// A user-supplied absolutely summable coupling `h(j)` together with a tail
/// bound `B(J) ≥ Σ_{j>J} |h(j)|`.
#[derive(Clone)]
pub struct CustomInteraction {
    name: String,
    coupling: Coupling,
    tail_bound: Coupling,
}

impl CustomInteraction {
    pub fn new(
        name: impl Into<String>,
        coupling: impl Fn(usize) -> f64 + Send + Sync + 'static,
        tail_bound: impl Fn(usize) -> f64 + Send + Sync + 'static,
    ) -> Self {
        CustomInteraction {
            name: name.into(),
            coupling: Arc::new(coupling),
            tail_bound: Arc::new(tail_bound),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn coupling(&self, j: usize) -> f64 {
        (self.coupling)(j)
    }

    pub fn tail_bound(&self, j: usize) -> f64 {
        (self.tail_bound)(j)
    }
}

impl fmt::Debug for CustomInteraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomInteraction")
            .field("name", &self.name)
            .finish_non_exhaustive()
    }
}

/// Hopping amplitude family `h(j)` of the chain.
#[derive(Debug, Clone)]
pub enum InteractionModel {
    /// `h_N(j) = (π/N)² / sin²(πj/N)`.
    HaldaneShastry,
    /// `h(j) = α_j` for `1 ≤ j ≤ r`, zero beyond.
    FiniteRange { coefficients: Vec<f64> },
    /// `h(j) = C j^{−ν}`.
    PowerLaw { exponent: f64, amplitude: f64 },
    /// `h(j) = 1/j² − J/j³`.
    RationalCubic { j: f64 },
    Custom(CustomInteraction),
}

impl InteractionModel {
    pub fn haldane_shastry() -> Self {
        InteractionModel::HaldaneShastry
    }

    pub fn finite_range(coefficients: Vec<f64>) -> Result<Self> {
        let model = InteractionModel::FiniteRange { coefficients };
        model.validate()?;
        Ok(model)
    }

    pub fn power_law(exponent: f64, amplitude: f64) -> Result<Self> {
        let model = InteractionModel::PowerLaw {
            exponent,
            amplitude,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn rational_cubic(j: f64) -> Result<Self> {
        let model = InteractionModel::RationalCubic { j };
        model.validate()?;
        Ok(model)
    }

    pub fn custom(custom: CustomInteraction) -> Result<Self> {
        let model = InteractionModel::Custom(custom);
        model.validate()?;
        Ok(model)
    }

    /// Short family name as used on the command line.
    pub fn family(&self) -> &'static str {
        match self {
            InteractionModel::HaldaneShastry => "haldane-shastry",
            InteractionModel::FiniteRange { .. } => "finite-range",
            InteractionModel::PowerLaw { .. } => "power-law",
            InteractionModel::RationalCubic { .. } => "rational-cubic",
            InteractionModel::Custom(_) => "custom",
        }
    }

    /// Checks the family invariants; the public variants can be built
    /// directly, so every consumer re-validates.
    pub fn validate(&self) -> Result<()> {
        match self {
            InteractionModel::HaldaneShastry => Ok(()),
            InteractionModel::FiniteRange { coefficients } => {
                if coefficients.is_empty() {
                    return Err(Error::domain("finite-range model needs at least one coefficient"));
                }
                if coefficients.iter().any(|c| !c.is_finite()) {
                    return Err(Error::domain("finite-range coefficients must be finite"));
                }
                if *coefficients.last().unwrap() == 0.0 {
                    return Err(Error::domain("last finite-range coefficient must be nonzero"));
                }
                Ok(())
            }
            InteractionModel::PowerLaw {
                exponent,
                amplitude,
            } => {
                if !(*exponent > 1.0) {
                    return Err(Error::domain(format!(
                        "power-law exponent must be > 1 (the series diverges otherwise), got {exponent}"
                    )));
                }
                if *exponent > MAX_POWER_LAW_EXPONENT {
                    return Err(Error::domain(format!(
                        "power-law exponent must be <= {MAX_POWER_LAW_EXPONENT}, got {exponent}"
                    )));
                }
                if !amplitude.is_finite() {
                    return Err(Error::domain("power-law amplitude must be finite"));
                }
                Ok(())
            }
            InteractionModel::RationalCubic { j } => {
                if !j.is_finite() {
                    return Err(Error::domain("rational-cubic J must be finite"));
                }
                Ok(())
            }
            InteractionModel::Custom(c) => {
                let b1 = c.tail_bound(1);
                if !(b1.is_finite() && b1 >= 0.0) {
                    return Err(Error::domain("custom tail bound must be finite and non-negative"));
                }
                custom_truncation(c).map(|_| ())
            }
        }
    }

    /// `h_N(j)` for `1 ≤ j ≤ N/2`.
    pub fn coupling(&self, n: usize, j: usize) -> f64 {
        match self {
            InteractionModel::HaldaneShastry => {
                let s = (PI * j as f64 / n as f64).sin();
                (PI / n as f64).powi(2) / (s * s)
            }
            InteractionModel::FiniteRange { coefficients } => {
                coefficients.get(j.wrapping_sub(1)).copied().unwrap_or(0.0)
            }
            InteractionModel::PowerLaw {
                exponent,
                amplitude,
            } => amplitude * (j as f64).powf(-exponent),
            InteractionModel::RationalCubic { j: jc } => {
                let x = j as f64;
                1.0 / (x * x) - jc / (x * x * x)
            }
            InteractionModel::Custom(c) => c.coupling(j),
        }
    }
}

fn custom_truncation(c: &CustomInteraction) -> Result<usize> {
    let mut j = 1usize;
    while c.tail_bound(j) >= CUSTOM_TRUNCATION_TOL {
        if j >= CUSTOM_MAX_TERMS {
            return Err(Error::domain(format!(
                "custom tail bound stays above {CUSTOM_TRUNCATION_TOL:e} up to j = {CUSTOM_MAX_TERMS}"
            )));
        }
        j *= 2;
    }
    // Smallest J in (j/2, j] with B(J) below tolerance.
    let (mut lo, mut hi) = (j / 2, j);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if c.tail_bound(mid) < CUSTOM_TRUNCATION_TOL {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

fn parity(k: usize) -> f64 {
    (k % 2) as f64
}

/// Finite-N single-mode energy ε_N(l) from the half-range sum over
/// `1 ≤ j ≤ N/2`, including the midpoint term for even N.
pub fn mode_energy(model: &InteractionModel, n: usize, l: usize) -> Result<f64> {
    model.validate()?;
    if n == 0 || l >= n {
        return Err(Error::IndexOutOfRange { index: l, len: n });
    }
    Ok(mode_energy_unchecked(model, n, l))
}

pub(crate) fn mode_energy_unchecked(model: &InteractionModel, n: usize, l: usize) -> f64 {
    let mut sum = 0.0;
    for j in 1..=(n - 1) / 2 {
        // 1 − cos θ = 2 sin²(θ/2), with the angle reduced exactly.
        let k = (j * l) % n;
        let s = (PI * k as f64 / n as f64).sin();
        sum += 2.0 * s * s * model.coupling(n, j);
    }
    let mut energy = 2.0 * sum;
    if n % 2 == 0 {
        energy += 2.0 * (1.0 - parity(n)) * parity(l) * model.coupling(n, n / 2);
    }
    energy
}

/// Interior critical points of E on (0, π) and whether E is monotone there.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport {
    pub monotonic: bool,
    pub critical_points: Vec<f64>,
}

/// Thermodynamic-limit dispersion E(p) of a validated model.
#[derive(Debug, Clone)]
pub struct DispersionProfile {
    model: InteractionModel,
    /// ζ(ν) for power-law, ζ(3) for rational-cubic.
    zeta_value: f64,
    custom_terms: usize,
    scan_grid: usize,
    report: OnceLock<MonotonicityReport>,
}

impl DispersionProfile {
    pub fn new(model: InteractionModel) -> Result<Self> {
        Self::with_scan_grid(model, DEFAULT_SCAN_GRID)
    }

    /// Profile whose monotonicity scan uses `grid` intervals on [0, π].
    pub fn with_scan_grid(model: InteractionModel, grid: usize) -> Result<Self> {
        model.validate()?;
        if grid < 16 {
            return Err(Error::domain(format!("scan grid must have >= 16 points, got {grid}")));
        }
        let zeta_value = match &model {
            InteractionModel::PowerLaw { exponent, .. } => zeta(*exponent)?,
            InteractionModel::RationalCubic { .. } => zeta(3.0)?,
            _ => 0.0,
        };
        let custom_terms = match &model {
            InteractionModel::Custom(c) => custom_truncation(c)?,
            _ => 0,
        };
        Ok(DispersionProfile {
            model,
            zeta_value,
            custom_terms,
            scan_grid: grid,
            report: OnceLock::new(),
        })
    }

    pub fn model(&self) -> &InteractionModel {
        &self.model
    }

    /// E(p); any real p is reduced into [0, 2π).
    pub fn energy(&self, p: f64) -> f64 {
        let q = p.rem_euclid(2.0 * PI);
        match &self.model {
            InteractionModel::HaldaneShastry => 0.5 * q * (2.0 * PI - q),
            InteractionModel::FiniteRange { coefficients } => coefficients
                .iter()
                .enumerate()
                .map(|(k, a)| {
                    let s = (0.5 * (k + 1) as f64 * q).sin();
                    4.0 * a * s * s
                })
                .sum(),
            InteractionModel::PowerLaw {
                exponent,
                amplitude,
            } => {
                if q == 0.0 {
                    return 0.0;
                }
                2.0 * amplitude * (self.zeta_value - polylog_circle_estimate(*exponent, q).re)
            }
            InteractionModel::RationalCubic { j } => {
                let hs = 0.5 * q * (2.0 * PI - q);
                if q == 0.0 {
                    return 0.0;
                }
                hs - 2.0 * j * (self.zeta_value - polylog_circle_estimate(3.0, q).re)
            }
            InteractionModel::Custom(c) => (1..=self.custom_terms)
                .map(|k| {
                    let s = (0.5 * k as f64 * q).sin();
                    4.0 * c.coupling(k) * s * s
                })
                .sum(),
        }
    }

    /// E′(p). At p ≡ 0 the kinked families (Haldane–Shastry,
    /// rational-cubic) return the right derivative.
    pub fn first_derivative(&self, p: f64) -> f64 {
        let q = p.rem_euclid(2.0 * PI);
        match &self.model {
            InteractionModel::HaldaneShastry => PI - q,
            InteractionModel::FiniteRange { coefficients } => coefficients
                .iter()
                .enumerate()
                .map(|(k, a)| {
                    let j = (k + 1) as f64;
                    2.0 * a * j * (j * q).sin()
                })
                .sum(),
            InteractionModel::PowerLaw {
                exponent,
                amplitude,
            } => {
                if q == 0.0 {
                    return 0.0;
                }
                2.0 * amplitude * polylog_circle_estimate(exponent - 1.0, q).im
            }
            InteractionModel::RationalCubic { j } => {
                if q == 0.0 {
                    return PI;
                }
                (PI - q) - 2.0 * j * polylog_circle_estimate(2.0, q).im
            }
            InteractionModel::Custom(c) => (1..=self.custom_terms)
                .map(|k| 2.0 * c.coupling(k) * k as f64 * (k as f64 * q).sin())
                .sum(),
        }
    }

    /// E″(p). Infinite at p ≡ 0 where the profile has a cusp there.
    pub fn second_derivative(&self, p: f64) -> f64 {
        let q = p.rem_euclid(2.0 * PI);
        match &self.model {
            InteractionModel::HaldaneShastry => -1.0,
            InteractionModel::FiniteRange { coefficients } => coefficients
                .iter()
                .enumerate()
                .map(|(k, a)| {
                    let j = (k + 1) as f64;
                    2.0 * a * j * j * (j * q).cos()
                })
                .sum(),
            InteractionModel::PowerLaw {
                exponent,
                amplitude,
            } => {
                if q == 0.0 {
                    if *exponent > 3.0 {
                        // Σ j² h(j) = C ζ(ν−2) converges.
                        return 2.0 * amplitude * zeta(exponent - 2.0).unwrap_or(f64::INFINITY);
                    }
                    return f64::INFINITY * amplitude.signum();
                }
                2.0 * amplitude * polylog_circle_phase_derivative_estimate(exponent - 1.0, q).im
            }
            InteractionModel::RationalCubic { j } => {
                if q == 0.0 {
                    return -f64::INFINITY * j.signum();
                }
                -1.0 + 2.0 * j * (2.0 * (0.5 * q).sin()).ln()
            }
            InteractionModel::Custom(c) => (1..=self.custom_terms)
                .map(|k| {
                    let x = k as f64;
                    2.0 * c.coupling(k) * x * x * (x * q).cos()
                })
                .sum(),
        }
    }

    /// E^{(order)}(p) for order 1 or 2.
    pub fn derivative(&self, p: f64, order: u8) -> Result<f64> {
        match order {
            1 => Ok(self.first_derivative(p)),
            2 => Ok(self.second_derivative(p)),
            _ => Err(Error::domain(format!("derivative order must be 1 or 2, got {order}"))),
        }
    }

    /// E‴(p) by central differences of E″; only used to confirm triple roots.
    pub(crate) fn third_derivative(&self, p: f64) -> f64 {
        let h = 1e-4;
        (self.second_derivative(p + h) - self.second_derivative(p - h)) / (2.0 * h)
    }

    /// True when E is smooth and even at p = 0, so E′(0) = 0.
    pub fn smooth_at_origin(&self) -> bool {
        match &self.model {
            InteractionModel::HaldaneShastry | InteractionModel::RationalCubic { .. } => false,
            InteractionModel::PowerLaw { exponent, .. } => *exponent > 3.0,
            InteractionModel::FiniteRange { .. } | InteractionModel::Custom(_) => true,
        }
    }

    /// Critical points of E on (0, π), cached after the first call.
    pub fn monotonicity_report(&self) -> &MonotonicityReport {
        self.report.get_or_init(|| self.scan_critical_points())
    }

    // Zeros of g(p) = E′(p)/sin p, which stays finite at smooth endpoints.
    fn scan_critical_points(&self) -> MonotonicityReport {
        let n = self.scan_grid;
        let g = |p: f64| self.first_derivative(p) / p.sin();
        let mut samples: Vec<(f64, f64)> = Vec::with_capacity(n + 1);
        if self.smooth_at_origin() {
            let v = self.second_derivative(0.0);
            if v.is_finite() {
                samples.push((0.0, v));
            }
        }
        for k in 1..n {
            let p = PI * k as f64 / n as f64;
            samples.push((p, g(p)));
        }
        let v = -self.second_derivative(PI);
        if v.is_finite() {
            samples.push((PI, v));
        }

        let mut critical = Vec::new();
        for w in samples.windows(2) {
            let (a, ga) = w[0];
            let (b, gb) = w[1];
            if ga == 0.0 {
                if a > 0.0 && a < PI {
                    critical.push(a);
                }
                continue;
            }
            if ga * gb < 0.0 {
                critical.push(bisect(&g, a, b, ga));
            }
        }
        critical.dedup_by(|x, y| (*x - *y).abs() < 1e-10);
        MonotonicityReport {
            monotonic: critical.is_empty(),
            critical_points: critical,
        }
    }

    /// Minimum and maximum of E over [0, 2π].
    pub fn extrema(&self) -> (f64, f64) {
        let mut lo = self.energy(0.0).min(self.energy(PI));
        let mut hi = self.energy(0.0).max(self.energy(PI));
        for &c in &self.monotonicity_report().critical_points {
            let e = self.energy(c);
            lo = lo.min(e);
            hi = hi.max(e);
        }
        (lo, hi)
    }
}

/// Bisection on a bracketed sign change down to 1e−12 in p.
fn bisect(g: &impl Fn(f64) -> f64, a: f64, b: f64, ga: f64) -> f64 {
    let (mut a, mut b, mut ga) = (a, b, ga);
    while b - a > 1e-12 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let gm = if m == 0.0 || m == PI { ga } else { g(m) };
        if gm == 0.0 {
            return m;
        }
        if (gm < 0.0) == (ga < 0.0) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fig8() -> InteractionModel {
        InteractionModel::finite_range(vec![1.0, 0.5]).unwrap()
    }

    // Full-range ε_N(l) = Σ_{j=1}^{N−1} (1 − cos 2πjl/N) h_N(j), h_N(j) = h_N(N−j).
    fn full_range(model: &InteractionModel, n: usize, l: usize) -> f64 {
        (1..n)
            .map(|j| {
                let h = model.coupling(n, j.min(n - j));
                (1.0 - (2.0 * PI * (j * l) as f64 / n as f64).cos()) * h
            })
            .sum()
    }

    #[test]
    fn haldane_shastry_mode_energies() {
        let hs = InteractionModel::haldane_shastry();
        assert_eq!(mode_energy(&hs, 6, 0).unwrap(), 0.0);
        let e = mode_energy(&hs, 6, 2).unwrap();
        assert!((e - 4.0 * PI * PI / 9.0).abs() < 1e-12, "{e}");
        for n in [7usize, 10, 33] {
            for l in 0..n {
                let exact = 2.0 * PI * PI * (l * (n - l)) as f64 / (n * n) as f64;
                assert!((mode_energy(&hs, n, l).unwrap() - exact).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn finite_range_mode_energy_matches_full_range() {
        let m = fig8();
        // Frozen from the full-range sum with h(1)=1, h(2)=1/2 at N=8, l=4.
        let e = mode_energy(&m, 8, 4).unwrap();
        assert!((e - 4.0).abs() < 1e-12, "{e}");
        assert!((e - full_range(&m, 8, 4)).abs() < 1e-12);
    }

    #[test]
    fn mode_energy_index_errors() {
        let hs = InteractionModel::haldane_shastry();
        assert!(matches!(
            mode_energy(&hs, 6, 6),
            Err(Error::IndexOutOfRange { index: 6, len: 6 })
        ));
        assert!(mode_energy(&hs, 0, 0).is_err());
    }

    #[test]
    fn construction_rejects_invalid_models() {
        assert!(InteractionModel::power_law(1.0, 1.0).is_err());
        assert!(InteractionModel::power_law(0.5, 1.0).is_err());
        assert!(InteractionModel::finite_range(vec![]).is_err());
        assert!(InteractionModel::finite_range(vec![1.0, 0.0]).is_err());
        assert!(InteractionModel::rational_cubic(f64::NAN).is_err());
        let bad = InteractionModel::FiniteRange {
            coefficients: vec![0.0],
        };
        assert!(DispersionProfile::new(bad).is_err());
    }

    #[test]
    fn dispersion_examples() {
        let hs = DispersionProfile::new(InteractionModel::haldane_shastry()).unwrap();
        assert!((hs.energy(PI) - PI * PI / 2.0).abs() < 1e-14);
        assert_eq!(hs.first_derivative(PI), 0.0);
        let f = DispersionProfile::new(fig8()).unwrap();
        assert!((f.energy(2.0 * PI / 3.0) - 4.5).abs() < 1e-13);
        assert!(f.first_derivative(2.0 * PI / 3.0).abs() < 1e-13);
        assert!((f.second_derivative(2.0 * PI / 3.0) + 3.0).abs() < 1e-13);
        for model in [
            InteractionModel::haldane_shastry(),
            fig8(),
            InteractionModel::power_law(2.5, 0.7).unwrap(),
            InteractionModel::rational_cubic(0.3).unwrap(),
        ] {
            let d = DispersionProfile::new(model).unwrap();
            assert_eq!(d.energy(0.0), 0.0);
        }
    }

    #[test]
    fn derivative_order_validated() {
        let f = DispersionProfile::new(fig8()).unwrap();
        assert!(f.derivative(1.0, 3).is_err());
        assert_eq!(f.derivative(1.0, 2).unwrap(), f.second_derivative(1.0));
    }

    #[test]
    fn power_law_two_is_haldane_shastry() {
        let hs = DispersionProfile::new(InteractionModel::haldane_shastry()).unwrap();
        // ζ(2) − Re Li₂(e^{ip}) = p(2π−p)/4, so C = 1 reproduces E_HS.
        let pl = DispersionProfile::new(InteractionModel::power_law(2.0, 1.0).unwrap()).unwrap();
        for k in 0..100 {
            let p = 2.0 * PI * k as f64 / 99.0;
            assert!((hs.energy(p) - pl.energy(p)).abs() < 1e-9, "p = {p}");
        }
    }

    #[test]
    fn first_derivative_matches_finite_differences() {
        let models = [
            InteractionModel::haldane_shastry(),
            fig8(),
            InteractionModel::power_law(3.0, 1.0).unwrap(),
            InteractionModel::power_law(1.5, 0.5).unwrap(),
            InteractionModel::rational_cubic(0.9).unwrap(),
        ];
        for model in models {
            let d = DispersionProfile::new(model).unwrap();
            for k in 1..40 {
                let p = 2.0 * PI * k as f64 / 40.0;
                let h = 1e-5;
                let fd = (d.energy(p + h) - d.energy(p - h)) / (2.0 * h);
                assert!(
                    (fd - d.first_derivative(p)).abs() < 1e-6,
                    "{} p={p}: {fd} vs {}",
                    d.model().family(),
                    d.first_derivative(p)
                );
                let fd2 = (d.first_derivative(p + h) - d.first_derivative(p - h)) / (2.0 * h);
                assert!((fd2 - d.second_derivative(p)).abs() < 1e-5);
            }
        }
    }

    #[test]
    fn clausen_ratio_increases_to_two_log_two() {
        let phi = |p: f64| 2.0 * polylog_circle_estimate(2.0, p).im / (PI - p);
        let mut prev = f64::NEG_INFINITY;
        for k in 1..=50 {
            let p = PI * k as f64 / 51.0;
            let v = phi(p);
            assert!(v > prev);
            prev = v;
        }
        let near = phi(PI - 1e-7);
        assert!((near - 2.0 * 2f64.ln()).abs() < 1e-6, "{near}");
    }

    #[test]
    fn monotonicity_examples() {
        let mono = DispersionProfile::new(InteractionModel::finite_range(vec![1.0, 0.2]).unwrap())
            .unwrap();
        assert!(mono.monotonicity_report().monotonic);
        let f = DispersionProfile::new(fig8()).unwrap();
        let r = f.monotonicity_report();
        assert!(!r.monotonic);
        assert_eq!(r.critical_points.len(), 1);
        assert!((r.critical_points[0] - 2.0 * PI / 3.0).abs() < 1e-11);
        let rc = DispersionProfile::new(InteractionModel::rational_cubic(0.5).unwrap()).unwrap();
        assert!(rc.monotonicity_report().monotonic);
        let rc = DispersionProfile::new(InteractionModel::rational_cubic(0.9).unwrap()).unwrap();
        assert!(!rc.monotonicity_report().monotonic);
        let hs = DispersionProfile::new(InteractionModel::haldane_shastry()).unwrap();
        assert!(hs.monotonicity_report().monotonic);
        assert_eq!(hs.extrema(), (0.0, PI * PI / 2.0));
    }

    #[test]
    fn custom_model_truncates_tail() {
        let c = CustomInteraction::new(
            "geometric",
            |j| 0.5f64.powi(j as i32),
            |j| 0.5f64.powi(j as i32),
        );
        let d = DispersionProfile::new(InteractionModel::custom(c).unwrap()).unwrap();
        // Σ 2^{-j}(1 − cos jπ)·2 = 2·Σ_{odd} 2^{1-j} = 8/3
        assert!((d.energy(PI) - 8.0 / 3.0).abs() < 1e-11);
        let never = CustomInteraction::new("flat", |_| 1.0, |_| 1.0);
        assert!(InteractionModel::custom(never).is_err());
    }

    #[test]
    fn thermodynamic_limit_convergence() {
        let exact_models = [InteractionModel::haldane_shastry(), fig8()];
        for model in exact_models {
            let d = DispersionProfile::new(model.clone()).unwrap();
            for l in [0usize, 5, 17, 40, 63] {
                let p = 2.0 * PI * l as f64 / 64.0;
                assert!((mode_energy(&model, 64, l).unwrap() - d.energy(p)).abs() < 1e-11);
            }
        }
        let slow_models = [
            InteractionModel::power_law(3.0, 1.0).unwrap(),
            InteractionModel::rational_cubic(0.4).unwrap(),
        ];
        for model in slow_models {
            let d = DispersionProfile::new(model.clone()).unwrap();
            for k in 1..=16 {
                let p = 2.0 * PI * k as f64 / 17.0;
                let mut prev = f64::INFINITY;
                for n in [64usize, 256, 1024] {
                    let l = (n as f64 * p / (2.0 * PI)).round() as usize;
                    let err = (mode_energy(&model, n, l).unwrap() - d.energy(2.0 * PI * l as f64 / n as f64)).abs();
                    assert!(err < prev, "{} N={n}: {err}", model.family());
                    prev = err;
                }
                assert!(prev < 2e-2, "{} p={p}: {prev}", model.family());
            }
        }
    }

    proptest! {
        #[test]
        fn reflection_symmetry(n in 1usize..=64, a1 in -2.0f64..2.0, a2 in 0.1f64..2.0, nu in 1.1f64..5.0) {
            let models = [
                InteractionModel::haldane_shastry(),
                InteractionModel::finite_range(vec![a1, a2]).unwrap(),
                InteractionModel::power_law(nu, a1).unwrap(),
                InteractionModel::rational_cubic(a1).unwrap(),
            ];
            for model in &models {
                for l in 1..n {
                    let a = mode_energy(model, n, l).unwrap();
                    let b = mode_energy(model, n, n - l).unwrap();
                    prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
                    prop_assert!((a - full_range(model, n, l)).abs() <= 1e-11 * (1.0 + a.abs()));
                }
            }
        }

        #[test]
        fn dispersion_even_about_pi(p in 0.0f64..PI, nu in 1.2f64..6.0, j in -1.0f64..1.0) {
            for model in [InteractionModel::power_law(nu, 1.0).unwrap(), InteractionModel::rational_cubic(j).unwrap()] {
                let d = DispersionProfile::new(model).unwrap();
                prop_assert!((d.energy(p) - d.energy(2.0 * PI - p)).abs() < 1e-9);
            }
        }
    }
}

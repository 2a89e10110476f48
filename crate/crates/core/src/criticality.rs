//! Fermi points, phase classification, the free energy per site and its
//! low-temperature scaling.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::models::DispersionProfile;
use crate::numerics::{brent, fit_line, integrate_panels, QuadSettings};
use crate::specfun::{gamma, zeta};

/// |E′| below which a bracketed root is treated as degenerate.
pub const MULTIPLE_ROOT_SLOPE_TOL: f64 = 1e-8;

/// μ within this distance of E at a critical point is snapped onto it.
pub const SNAP_TOL: f64 = 1e-10;

/// Largest acceptable RMS residual of the log–log fit.
pub const FIT_RESIDUAL_THRESHOLD: f64 = 0.02;

const ROOT_XTOL: f64 = 1e-13;

/// Ground-state phase at chemical potential μ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    GappedBelow,
    GappedAbove,
    Boundary,
    Critical { central_charge: usize },
    NonCriticalMultipleRoot,
}

impl Phase {
    pub fn label(&self) -> &'static str {
        match self {
            Phase::GappedBelow => "gapped-below",
            Phase::GappedAbove => "gapped-above",
            Phase::Boundary => "boundary",
            Phase::Critical { .. } => "critical",
            Phase::NonCriticalMultipleRoot => "non-critical-multiple-root",
        }
    }
}

/// A solution of E(p) = μ in (0, π).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FermiPoint {
    pub p: f64,
    /// Vanishing order ν of E − μ at `p`.
    pub multiplicity: u32,
    /// |E′(p)|; zero for multiple roots.
    pub velocity: f64,
    /// (ν!/|E^{(ν)}(p)|)^{1/ν}; only meaningful when `multiplicity > 1`.
    pub b: f64,
    /// Sign of E^{(ν)}(p).
    pub epsilon: f64,
    /// +1 if the Fermi sea lies just below `p`, −1 if just above, 0 if on
    /// both or neither side.
    pub side: i8,
}

/// Fermi points, sea and phase of a profile at fixed μ.
#[derive(Debug, Clone, PartialEq)]
pub struct FermiAnalysis {
    /// μ after snapping onto a critical value.
    pub mu: f64,
    pub roots: Vec<FermiPoint>,
    /// Disjoint intervals of [0, 2π) where E < μ.
    pub sea: Vec<(f64, f64)>,
    pub phase: Phase,
    pub e_min: f64,
    pub e_max: f64,
    /// Whether p = π belongs to the sea.
    pub pi_in_sea: bool,
}

impl FermiAnalysis {
    pub fn is_critical(&self) -> bool {
        matches!(self.phase, Phase::Critical { .. })
    }

    pub fn root_momenta(&self) -> Vec<f64> {
        self.roots.iter().map(|r| r.p).collect()
    }

    pub fn velocities(&self) -> Vec<f64> {
        self.roots.iter().map(|r| r.velocity).collect()
    }

    /// Total length of the sea.
    pub fn sea_measure(&self) -> f64 {
        self.sea.iter().map(|(a, b)| b - a).sum()
    }

    /// Number of connected components of the sea on the circle.
    pub fn sea_components(&self) -> usize {
        let n = self.sea.len();
        if n >= 2 {
            let first = self.sea[0];
            let last = self.sea[n - 1];
            if first.0 == 0.0 && last.1 == 2.0 * PI {
                return n - 1;
            }
        }
        n
    }

    pub fn require_critical(&self) -> Result<()> {
        if self.is_critical() {
            Ok(())
        } else {
            Err(Error::NotCritical(format!(
                "phase is {} at mu = {}",
                self.phase.label(),
                self.mu
            )))
        }
    }
}

/// Solves E(p) = μ on (0, π) and classifies the phase.
pub fn fermi_points(profile: &DispersionProfile, mu: f64) -> Result<FermiAnalysis> {
    if !mu.is_finite() {
        return Err(Error::domain("chemical potential must be finite"));
    }
    let critical = &profile.monotonicity_report().critical_points;
    let (e_min, e_max) = profile.extrema();

    let mut mu = mu;
    let mut multiple_at = Vec::new();
    for &c in critical {
        let e = profile.energy(c);
        if (e - mu).abs() <= SNAP_TOL {
            mu = e;
            multiple_at.push(c);
        }
    }

    let mut nodes = vec![0.0];
    nodes.extend_from_slice(critical);
    nodes.push(PI);
    let f = |p: f64| profile.energy(p) - mu;

    let mut roots = Vec::new();
    for w in nodes.windows(2) {
        let (a, b) = (w[0], w[1]);
        if multiple_at.contains(&a) || multiple_at.contains(&b) {
            continue;
        }
        let (fa, fb) = (f(a), f(b));
        if fa * fb < 0.0 {
            roots.push(simple_or_flat_root(profile, brent(f, a, b, ROOT_XTOL)?));
        }
        // fb == 0 at an interior node is covered by the snap; at π it is a
        // band edge and not a root in the open interval.
    }
    for &c in &multiple_at {
        roots.push(multiple_root(profile, c));
    }
    roots.sort_by(|x, y| x.p.total_cmp(&y.p));

    let pi_in_sea = profile.energy(PI) < mu;
    assign_sides(profile, mu, &mut roots);
    let sea = build_sea(profile, mu, &roots);

    let phase = if mu < e_min - SNAP_TOL {
        Phase::GappedBelow
    } else if mu > e_max + SNAP_TOL {
        Phase::GappedAbove
    } else if roots.iter().any(|r| r.multiplicity > 1) {
        Phase::NonCriticalMultipleRoot
    } else if (mu - e_min).abs() <= SNAP_TOL || (mu - e_max).abs() <= SNAP_TOL || roots.is_empty() {
        Phase::Boundary
    } else {
        Phase::Critical {
            central_charge: roots.len(),
        }
    };

    Ok(FermiAnalysis {
        mu,
        roots,
        sea,
        phase,
        e_min,
        e_max,
        pi_in_sea,
    })
}

/// Same as [`fermi_points`]; the phase is always filled in.
pub fn classify_phase(profile: &DispersionProfile, mu: f64) -> Result<FermiAnalysis> {
    fermi_points(profile, mu)
}

fn simple_or_flat_root(profile: &DispersionProfile, p: f64) -> FermiPoint {
    let d1 = profile.first_derivative(p);
    if d1.abs() >= MULTIPLE_ROOT_SLOPE_TOL {
        return FermiPoint {
            p,
            multiplicity: 1,
            velocity: d1.abs(),
            b: 1.0 / d1.abs(),
            epsilon: d1.signum(),
            side: 0,
        };
    }
    // A sign change with vanishing slope is an odd-order zero.
    let d2 = profile.second_derivative(p);
    if d2.abs() > MULTIPLE_ROOT_SLOPE_TOL {
        shaped_root(p, 2, d2)
    } else {
        shaped_root(p, 3, profile.third_derivative(p))
    }
}

fn multiple_root(profile: &DispersionProfile, c: f64) -> FermiPoint {
    let d2 = profile.second_derivative(c);
    if d2.abs() > MULTIPLE_ROOT_SLOPE_TOL {
        shaped_root(c, 2, d2)
    } else {
        shaped_root(c, 3, profile.third_derivative(c))
    }
}

fn shaped_root(p: f64, nu: u32, derivative: f64) -> FermiPoint {
    let factorial = (1..=nu).product::<u32>() as f64;
    FermiPoint {
        p,
        multiplicity: nu,
        velocity: 0.0,
        b: (factorial / derivative.abs()).powf(1.0 / nu as f64),
        epsilon: derivative.signum(),
        side: 0,
    }
}

fn assign_sides(profile: &DispersionProfile, mu: f64, roots: &mut [FermiPoint]) {
    let mut nodes = vec![0.0];
    nodes.extend(roots.iter().map(|r| r.p));
    nodes.push(PI);
    let below = |a: f64, b: f64| profile.energy(0.5 * (a + b)) < mu;
    for (i, root) in roots.iter_mut().enumerate() {
        let left = below(nodes[i], nodes[i + 1]);
        let right = below(nodes[i + 1], nodes[i + 2]);
        root.side = left as i8 - right as i8;
    }
}

/// Sea intervals of [0, 2π), built from the roots and their reflections.
fn build_sea(profile: &DispersionProfile, mu: f64, roots: &[FermiPoint]) -> Vec<(f64, f64)> {
    let mut cuts = vec![0.0];
    cuts.extend(roots.iter().map(|r| r.p));
    cuts.push(PI);
    cuts.extend(roots.iter().rev().map(|r| 2.0 * PI - r.p));
    cuts.push(2.0 * PI);
    cuts.dedup();

    let mut sea: Vec<(f64, f64)> = Vec::new();
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if profile.energy(0.5 * (a + b)) < mu {
            match sea.last_mut() {
                Some(last) if last.1 == a => last.1 = b,
                _ => sea.push((a, b)),
            }
        }
    }
    sea
}

/// Free energy per site at temperature T together with the ground energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalResult {
    pub temperature: f64,
    pub f: f64,
    pub f0: f64,
    /// f − f0, computed directly rather than by subtraction.
    pub excess: f64,
    pub quadrature_error: f64,
}

fn panel_breaks(profile: &DispersionProfile, analysis: &FermiAnalysis) -> Vec<f64> {
    let mut breaks = vec![0.0, PI];
    breaks.extend(analysis.roots.iter().map(|r| r.p));
    breaks.extend_from_slice(&profile.monotonicity_report().critical_points);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    breaks
}

/// f(T) = −(T/π) ∫₀^π log(1 + e^{−(E−μ)/T}) dp, split as f0 plus a
/// non-positive thermal excess.
pub fn free_energy(profile: &DispersionProfile, mu: f64, temperature: f64) -> Result<ThermalResult> {
    let analysis = fermi_points(profile, mu)?;
    free_energy_with(profile, &analysis, temperature)
}

pub(crate) fn free_energy_with(
    profile: &DispersionProfile,
    analysis: &FermiAnalysis,
    temperature: f64,
) -> Result<ThermalResult> {
    if !(temperature > 0.0) || !temperature.is_finite() {
        return Err(Error::domain(format!("temperature must be > 0, got {temperature}")));
    }
    let mu = analysis.mu;
    let breaks = panel_breaks(profile, analysis);

    let ground = integrate_panels(
        |p: f64| (profile.energy(p) - mu).min(0.0),
        &breaks,
        QuadSettings::default(),
    )?;
    let settings = QuadSettings {
        abs_tol: 1e-15,
        rel_tol: 1e-11,
        max_intervals: 8000,
    };
    let thermal = integrate_panels(
        |p: f64| (-(profile.energy(p) - mu).abs() / temperature).exp().ln_1p(),
        &breaks,
        settings,
    )?;
    let f0 = ground.value / PI;
    let excess = -temperature * thermal.value / PI;
    Ok(ThermalResult {
        temperature,
        f: f0 + excess,
        f0,
        excess,
        quadrature_error: ground.error / PI + temperature * thermal.error / PI,
    })
}

/// Power law f − f0 ≈ coefficient · T^exponent fitted on a temperature grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LowTemperatureFit {
    pub exponent: f64,
    pub coefficient: f64,
    pub rms_residual: f64,
    pub predicted_exponent: Option<f64>,
    pub predicted_coefficient: Option<f64>,
    pub points: Vec<ThermalResult>,
}

/// Geometric grid of `n` temperatures from 1e−3 to 1e−2.
pub fn default_temperature_grid(n: usize) -> Vec<f64> {
    geometric_grid(1e-3, 1e-2, n)
}

pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![lo];
    }
    let ratio = (hi / lo).ln() / (n - 1) as f64;
    (0..n).map(|k| lo * (ratio * k as f64).exp()).collect()
}

/// Leading low-temperature law predicted from the Fermi points, if any.
pub fn predicted_scaling(analysis: &FermiAnalysis) -> Option<(f64, f64)> {
    match analysis.phase {
        Phase::Critical { .. } => {
            let inv: f64 = analysis.roots.iter().map(|r| 1.0 / r.velocity).sum();
            Some((2.0, -PI / 6.0 * inv))
        }
        Phase::NonCriticalMultipleRoot => {
            let nu = analysis.roots.iter().map(|r| r.multiplicity).max()?;
            let x = 1.0 / nu as f64;
            let amplitude = gamma(1.0 + x) * zeta(1.0 + x).ok()? * (1.0 - 2f64.powf(-x));
            let coefficient = analysis
                .roots
                .iter()
                .filter(|r| r.multiplicity == nu)
                .map(|r| -2.0 * r.b / PI * amplitude)
                .sum();
            Some((1.0 + x, coefficient))
        }
        _ => None,
    }
}

/// Least-squares fit of log|f − f0| against log T.
pub fn low_temperature_fit(
    profile: &DispersionProfile,
    mu: f64,
    temperatures: &[f64],
) -> Result<LowTemperatureFit> {
    if temperatures.len() < 4 {
        return Err(Error::domain(format!(
            "low-temperature fit needs at least 4 temperatures, got {}",
            temperatures.len()
        )));
    }
    if temperatures.iter().any(|t| !(*t > 0.0) || !t.is_finite()) {
        return Err(Error::domain("temperatures must be positive and finite"));
    }
    let analysis = fermi_points(profile, mu)?;
    let points = temperatures
        .iter()
        .map(|&t| free_energy_with(profile, &analysis, t))
        .collect::<Result<Vec<_>>>()?;
    if let Some(p) = points.iter().find(|p| !(p.excess < 0.0)) {
        return Err(Error::domain(format!(
            "thermal excess vanishes at T = {} (gapped phase?)",
            p.temperature
        )));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.temperature.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| (-p.excess).ln()).collect();
    let line = fit_line(&xs, &ys).ok_or_else(|| Error::domain("degenerate temperature grid"))?;
    if line.rms_residual > FIT_RESIDUAL_THRESHOLD {
        return Err(Error::NonConvergence {
            what: "low-temperature power-law fit (grid outside the scaling regime)".into(),
            achieved: line.rms_residual,
        });
    }
    let predicted = predicted_scaling(&analysis);
    Ok(LowTemperatureFit {
        exponent: line.slope,
        coefficient: -line.intercept.exp(),
        rms_residual: line.rms_residual,
        predicted_exponent: predicted.map(|p| p.0),
        predicted_coefficient: predicted.map(|p| p.1),
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::InteractionModel;
    use proptest::prelude::*;

    fn hs() -> DispersionProfile {
        DispersionProfile::new(InteractionModel::haldane_shastry()).unwrap()
    }

    fn fig8() -> DispersionProfile {
        DispersionProfile::new(InteractionModel::finite_range(vec![1.0, 0.5]).unwrap()).unwrap()
    }

    #[test]
    fn two_root_fermi_sea() {
        let a = fermi_points(&fig8(), 4.25).unwrap();
        let ps = a.root_momenta();
        assert_eq!(ps.len(), 2);
        assert!((ps[0] - 1.717_771_517_458_401_7).abs() < 1e-12);
        assert!((ps[1] - 2.593_564_245_969_480_5).abs() < 1e-12);
        assert!(a.roots.iter().all(|r| r.multiplicity == 1));
        assert_eq!(a.phase, Phase::Critical { central_charge: 2 });
        assert_eq!(a.roots[0].side, 1);
        assert_eq!(a.roots[1].side, -1);
        assert_eq!(a.sea_components(), 2);
        assert!(a.pi_in_sea);
    }

    #[test]
    fn gapped_and_boundary_phases() {
        let below = fermi_points(&hs(), -1.0).unwrap();
        assert!(below.roots.is_empty());
        assert_eq!(below.phase, Phase::GappedBelow);
        let above = fermi_points(&hs(), 6.0).unwrap();
        assert_eq!(above.phase, Phase::GappedAbove);
        assert!((above.mu - above.e_max - (6.0 - PI * PI / 2.0)).abs() < 1e-14);
        assert_eq!(above.sea, vec![(0.0, 2.0 * PI)]);
        assert_eq!(fermi_points(&hs(), 0.0).unwrap().phase, Phase::Boundary);
        assert_eq!(fermi_points(&hs(), PI * PI / 2.0).unwrap().phase, Phase::Boundary);
    }

    #[test]
    fn double_root_at_critical_point() {
        let a = fermi_points(&fig8(), 4.5).unwrap();
        assert_eq!(a.phase, Phase::NonCriticalMultipleRoot);
        assert_eq!(a.roots.len(), 1);
        let r = a.roots[0];
        assert!((r.p - 2.0 * PI / 3.0).abs() < 1e-11);
        assert_eq!(r.multiplicity, 2);
        assert_eq!(r.epsilon, -1.0);
        assert!((r.b - (2.0f64 / 3.0).sqrt()).abs() < 1e-9);
        // Snapping tolerates tiny offsets.
        let b = fermi_points(&fig8(), 4.5 + 5e-11).unwrap();
        assert_eq!(b.phase, Phase::NonCriticalMultipleRoot);
    }

    #[test]
    fn single_root_velocity() {
        let a = classify_phase(&hs(), 2.0).unwrap();
        assert_eq!(a.phase, Phase::Critical { central_charge: 1 });
        let p0 = PI - (PI * PI - 4.0).sqrt();
        assert!((a.roots[0].p - p0).abs() < 1e-12);
        assert!((a.roots[0].velocity - (PI - p0)).abs() < 1e-12);
        assert!((a.sea_measure() - 2.0 * p0).abs() < 1e-12);
        assert_eq!(a.sea_components(), 1);
    }

    #[test]
    fn ground_energy_in_gapped_phase() {
        let r = free_energy(&hs(), 6.0, 1e-3).unwrap();
        assert!((r.f0 - (PI * PI / 3.0 - 6.0)).abs() < 1e-12, "{}", r.f0);
        let r = free_energy(&hs(), -1.0, 0.1).unwrap();
        assert!(r.f.abs() < 0.1 * (-10.0f64).exp());
    }

    #[test]
    fn free_energy_below_ground_energy() {
        for mu in [-1.0, 1.0, 3.0, 4.25, 6.0] {
            let r = free_energy(&fig8(), mu, 1.0).unwrap();
            assert!(r.f < r.f0);
            assert!((r.f - r.f0 - r.excess).abs() < 1e-14);
        }
        assert!(free_energy(&hs(), 1.0, 0.0).is_err());
    }

    #[test]
    fn haldane_shastry_scaling() {
        let fit = low_temperature_fit(&hs(), 3.0 * PI * PI / 8.0, &default_temperature_grid(6)).unwrap();
        assert!((fit.exponent - 2.0).abs() < 0.05, "{}", fit.exponent);
        assert!((fit.coefficient + 1.0 / 3.0).abs() < 0.02 / 3.0, "{}", fit.coefficient);
        assert!((fit.predicted_coefficient.unwrap() + 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn gapped_fit_is_rejected() {
        assert!(low_temperature_fit(&hs(), -1.0, &default_temperature_grid(6)).is_err());
        assert!(low_temperature_fit(&hs(), 1.0, &[0.01, 0.02]).is_err());
    }

    proptest! {
        #[test]
        fn roots_reproduce_mu(mu in 0.05f64..4.9, j in 0.0f64..1.2) {
            for profile in [hs(), DispersionProfile::new(InteractionModel::finite_range(vec![1.0, j]).unwrap()).unwrap()] {
                let a = fermi_points(&profile, mu).unwrap();
                for r in &a.roots {
                    prop_assert!((profile.energy(r.p) - a.mu).abs() < 1e-10);
                }
                if a.is_critical() {
                    prop_assert_eq!(a.sea_components(), a.roots.len());
                    let measure: f64 = a.roots.iter().map(|r| 2.0 * r.side as f64 * r.p).sum::<f64>()
                        + if a.pi_in_sea { 2.0 * PI } else { 0.0 };
                    prop_assert!((measure - a.sea_measure()).abs() < 1e-10);
                }
            }
        }
    }
}

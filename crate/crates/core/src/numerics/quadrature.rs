use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

// 21-point Kronrod abscissae on [-1, 1] (non-negative half, descending) and
// weights; odd indices carry the embedded 10-point Gauss rule.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_980_111_453,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Values that can be integrated: reals and complex numbers.
pub trait Integrable:
    Copy + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn magnitude(&self) -> f64;
}

impl Integrable for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Integrable for Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadSettings {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadSettings {
    fn default() -> Self {
        QuadSettings {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_intervals: 4000,
        }
    }
}

impl QuadSettings {
    pub fn with_abs_tol(abs_tol: f64) -> Self {
        QuadSettings {
            abs_tol,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult<T> {
    pub value: T,
    pub error: f64,
    pub evaluations: usize,
}

struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl<T> Eq for Segment<T> {}

impl<T> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One 21-point Kronrod panel with the QUADPACK error heuristic.
fn kronrod21<T: Integrable, F: Fn(f64) -> T>(f: &F, a: f64, b: f64) -> (T, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = T::default();
    let mut fv1 = [T::default(); 10];
    let mut fv2 = [T::default(); 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod = kronrod + (f1 + f2) * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + (f1 + f2) * WG[j / 2];
        }
    }
    let mean = kronrod * 0.5;
    let mut resasc = WGK[10] * (fc - mean).magnitude();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - mean).magnitude() + (fv2[j] - mean).magnitude());
    }
    let resasc = resasc * half.abs();
    let value = kronrod * half;
    let mut error = ((kronrod - gauss) * half).magnitude();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    (value, error)
}

/// Globally adaptive integration over `[a, b]`.
pub fn integrate<T, F>(f: F, a: f64, b: f64, settings: QuadSettings) -> Result<QuadResult<T>>
where
    T: Integrable,
    F: Fn(f64) -> T,
{
    integrate_panels(f, &[a, b], settings)
}

/// Adaptive integration over consecutive panels `[x0, x1], [x1, x2], ...`.
///
/// Breakpoints should sit on kinks or near-singularities of the integrand;
/// the refinement is global, always bisecting the panel with the largest
/// error estimate.
pub fn integrate_panels<T, F>(
    f: F,
    breakpoints: &[f64],
    settings: QuadSettings,
) -> Result<QuadResult<T>>
where
    T: Integrable,
    F: Fn(f64) -> T,
{
    let (result, converged) = refine(f, breakpoints, settings)?;
    match converged {
        Ok(()) => Ok(result),
        Err(what) => Err(Error::NonConvergence {
            what: what.into(),
            achieved: result.error,
        }),
    }
}

/// Like [`integrate_panels`] but returns the current estimate when the
/// tolerance cannot be met; callers inspect `error` themselves.
pub fn integrate_panels_best_effort<T, F>(
    f: F,
    breakpoints: &[f64],
    settings: QuadSettings,
) -> Result<QuadResult<T>>
where
    T: Integrable,
    F: Fn(f64) -> T,
{
    refine(f, breakpoints, settings).map(|(result, _)| result)
}

type Refined<T> = (QuadResult<T>, std::result::Result<(), &'static str>);

fn refine<T, F>(f: F, breakpoints: &[f64], settings: QuadSettings) -> Result<Refined<T>>
where
    T: Integrable,
    F: Fn(f64) -> T,
{
    if breakpoints.len() < 2 {
        return Err(Error::domain("integration needs at least two breakpoints"));
    }
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in breakpoints.windows(2) {
        if w[1] == w[0] {
            continue;
        }
        let (value, error) = kronrod21(&f, w[0], w[1]);
        evaluations += 21;
        heap.push(Segment {
            a: w[0],
            b: w[1],
            value,
            error,
        });
    }

    loop {
        let (total, error) = heap.iter().fold((T::default(), 0.0), |(v, e), s| {
            (v + s.value, e + s.error)
        });
        let result = QuadResult {
            value: total,
            error,
            evaluations,
        };
        let tolerance = settings.abs_tol.max(settings.rel_tol * total.magnitude());
        if error <= tolerance || heap.is_empty() {
            return Ok((result, Ok(())));
        }
        if heap.len() >= settings.max_intervals {
            return Ok((result, Err("adaptive quadrature")));
        }
        let worst = heap.pop().expect("non-empty heap");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            // Panel cannot be split further in double precision.
            heap.push(worst);
            let (total, error) = heap.iter().fold((T::default(), 0.0), |(v, e), s| {
                (v + s.value, e + s.error)
            });
            let result = QuadResult {
                value: total,
                error,
                evaluations,
            };
            return Ok((result, Err("adaptive quadrature (interval underflow)")));
        }
        for (a, b) in [(worst.a, mid), (mid, worst.b)] {
            let (value, error) = kronrod21(&f, a, b);
            evaluations += 21;
            heap.push(Segment { a, b, value, error });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x: f64| x.powi(5) - 3.0 * x * x, 0.0, 2.0, QuadSettings::default()).unwrap();
        assert!((r.value - (64.0 / 6.0 - 8.0)).abs() < 1e-13);
    }

    #[test]
    fn fermi_integral_self_test() {
        // ∫₀^∞ log(1+e^{-x}) dx = π²/12
        let r = integrate_panels(
            |x: f64| (-x).exp().ln_1p(),
            &[0.0, 1.0, 4.0, 16.0, 64.0],
            QuadSettings::default(),
        )
        .unwrap();
        assert!((r.value - PI * PI / 12.0).abs() < 1e-12, "{}", r.value);
    }

    #[test]
    fn endpoint_singularity() {
        let r = integrate(|x: f64| x.powf(-0.5), 0.0, 1.0, QuadSettings::default()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-10);
    }

    #[test]
    fn complex_integrand() {
        let r = integrate(
            |x: f64| Complex64::new(0.0, x).exp(),
            0.0,
            PI,
            QuadSettings::default(),
        )
        .unwrap();
        assert!((r.value - Complex64::new(0.0, 2.0)).norm() < 1e-13);
    }

    #[test]
    fn reports_non_convergence() {
        let settings = QuadSettings {
            max_intervals: 3,
            ..Default::default()
        };
        let err = integrate(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, settings).unwrap_err();
        assert!(err.is_numerical());
    }
}

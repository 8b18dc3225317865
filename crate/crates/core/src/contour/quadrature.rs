//! Globally adaptive Gauss-Kronrod (G10K21) quadrature for complex-valued
//! integrands on parameter intervals, plus the helpers built on it.
//!
//! The engine keeps every live subinterval in a heap ordered by its error
//! estimate and bisects the worst one until the summed estimate drops below
//! the requested tolerance (or the roundoff floor), or the interval budget is
//! exhausted. Final sums are formed in a fixed order so that identical inputs
//! give bit-identical outputs.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::ContourError;

#[allow(clippy::excessive_precision)]
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

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Default cap on the number of live subintervals.
pub const DEFAULT_MAX_INTERVALS: usize = 4000;

/// Outcome of an adaptive quadrature.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
    /// False when the interval budget ran out before the tolerance was met;
    /// `value` is then the best available estimate.
    pub converged: bool,
}

impl QuadratureResult {
    pub(crate) fn zero() -> Self {
        Self {
            value: Complex64::new(0.0, 0.0),
            abs_error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        }
    }

    /// Sum of two independent results.
    pub fn combine(self, other: Self) -> Self {
        Self {
            value: self.value + other.value,
            abs_error_estimate: self.abs_error_estimate + other.abs_error_estimate,
            evaluations: self.evaluations + other.evaluations,
            converged: self.converged && other.converged,
        }
    }

    pub fn scale(self, factor: Complex64) -> Self {
        Self {
            value: self.value * factor,
            abs_error_estimate: self.abs_error_estimate * factor.norm(),
            ..self
        }
    }
}

struct Piece {
    value: Complex64,
    error: f64,
    resabs: f64,
}

fn gk21<F>(f: &F, piece: usize, lo: f64, hi: f64) -> Result<Piece, ContourError>
where
    F: Fn(usize, f64) -> Complex64,
{
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let sample = |t: f64| -> Result<Complex64, ContourError> {
        let v = f(piece, t);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(ContourError::NonFiniteIntegrand { piece, parameter: t })
        }
    };

    let fc = sample(center)?;
    let mut fv1 = [Complex64::new(0.0, 0.0); 10];
    let mut fv2 = [Complex64::new(0.0, 0.0); 10];
    let mut res_k = fc * WGK[10];
    let mut res_g = Complex64::new(0.0, 0.0);
    let mut resabs = WGK[10] * fc.norm();
    for j in 0..10 {
        let dx = half * XGK[j];
        let a = sample(center - dx)?;
        let b = sample(center + dx)?;
        fv1[j] = a;
        fv2[j] = b;
        res_k += (a + b) * WGK[j];
        resabs += WGK[j] * (a.norm() + b.norm());
        if j % 2 == 1 {
            res_g += (a + b) * WG[j / 2];
        }
    }
    let mean = res_k * 0.5;
    let mut resasc = WGK[10] * (fc - mean).norm();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - mean).norm() + (fv2[j] - mean).norm());
    }
    let scale = half.abs();
    let value = res_k * half;
    resabs *= scale;
    resasc *= scale;

    let mut error = ((res_k - res_g) * half).norm();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * resabs);
    }
    Ok(Piece { value, error, resabs })
}

struct Interval {
    piece: usize,
    lo: f64,
    hi: f64,
    value: Complex64,
    error: f64,
    resabs: f64,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Interval {}
impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.piece.cmp(&self.piece))
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}

/// Integrates `f(piece, t)` over `t ∈ ranges[piece]` for every piece and sums
/// the results. `initial_splits` equal subintervals seed each piece.
pub(crate) fn adaptive<F>(
    f: &F,
    ranges: &[(f64, f64)],
    tol: f64,
    max_intervals: usize,
    initial_splits: usize,
) -> Result<QuadratureResult, ContourError>
where
    F: Fn(usize, f64) -> Complex64,
{
    if !(tol > 0.0) {
        return Err(ContourError::InvalidTolerance(tol));
    }
    let splits = initial_splits.max(1);
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0usize;
    for (piece, &(lo, hi)) in ranges.iter().enumerate() {
        let width = (hi - lo) / splits as f64;
        for k in 0..splits {
            let a = lo + width * k as f64;
            let b = if k + 1 == splits { hi } else { a + width };
            let p = gk21(f, piece, a, b)?;
            evaluations += 21;
            heap.push(Interval { piece, lo: a, hi: b, value: p.value, error: p.error, resabs: p.resabs });
        }
    }

    let mut converged = false;
    loop {
        let total_error: f64 = heap.iter().map(|iv| iv.error).sum();
        let total_abs: f64 = heap.iter().map(|iv| iv.resabs).sum();
        if total_error <= tol.max(100.0 * f64::EPSILON * total_abs) {
            converged = true;
            break;
        }
        if heap.len() >= max_intervals {
            break;
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo.min(worst.hi) || mid >= worst.lo.max(worst.hi) {
            // interval collapsed to adjacent floats; nothing left to refine
            heap.push(worst);
            break;
        }
        for (a, b) in [(worst.lo, mid), (mid, worst.hi)] {
            let p = gk21(f, worst.piece, a, b)?;
            evaluations += 21;
            heap.push(Interval { piece: worst.piece, lo: a, hi: b, value: p.value, error: p.error, resabs: p.resabs });
        }
    }

    let mut intervals = heap.into_vec();
    intervals.sort_by(|x, y| x.piece.cmp(&y.piece).then_with(|| x.lo.total_cmp(&y.lo)));
    let mut value = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    for iv in &intervals {
        value += iv.value;
        error += iv.error;
    }
    Ok(QuadratureResult { value, abs_error_estimate: error, evaluations, converged })
}

/// `∫_start^∞ g(x) dx` through the substitution `x = start + (1 - t)/t`.
pub fn integrate_to_infinity<G>(g: G, start: f64, tol: f64) -> Result<QuadratureResult, ContourError>
where
    G: Fn(f64) -> Complex64,
{
    let mapped = |_: usize, t: f64| {
        let x = start + (1.0 - t) / t;
        g(x) / (t * t)
    };
    adaptive(&mapped, &[(0.0, 1.0)], tol, DEFAULT_MAX_INTERVALS, 4)
}

/// Probes the mapped tail integrand of [`integrate_to_infinity`] close to
/// `t = 0`. A mapped integrand that keeps growing means `g` decays no faster
/// than `1/x` and the tail integral does not exist.
pub fn tail_is_integrable<G>(g: G, start: f64) -> bool
where
    G: Fn(f64) -> Complex64,
{
    let probe = |t: f64| {
        let x = start + (1.0 - t) / t;
        (g(x) / (t * t)).norm()
    };
    let near = probe(1e-7);
    let far = probe(1e-5);
    if !near.is_finite() {
        return false;
    }
    // 1/x decay gives a ratio of ~100 between these probes; 1/x^2 gives ~1.
    near <= 10.0 * far.max(1e-300) || near < 1e-8
}

/// Taylor coefficient `f^(n)(center)/n!` from the Cauchy integral formula,
/// evaluated with the trapezoidal rule on the circle `|z - center| = radius`.
///
/// The rule converges geometrically for functions analytic on a neighbourhood
/// of the closed disc; the point count doubles until two successive estimates
/// agree. Returns the coefficient and the last difference as error estimate.
pub fn taylor_coefficient<F>(
    f: F,
    center: Complex64,
    radius: f64,
    n: u32,
) -> Result<(Complex64, f64), ContourError>
where
    F: Fn(Complex64) -> Complex64,
{
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(ContourError::InvalidRadius(radius));
    }
    // samples[k] = f(center + r e^{iθ_k}) e^{-i n θ_k}, θ_k = 2πk/N
    let sample = |theta: f64| -> Result<Complex64, ContourError> {
        let w = Complex64::from_polar(1.0, theta);
        let v = f(center + w * radius) * Complex64::from_polar(1.0, -(n as f64) * theta);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(ContourError::NonFiniteIntegrand { piece: 0, parameter: theta })
        }
    };
    let scale = radius.powi(n as i32);
    let mut count = 8usize;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut peak: f64 = 0.0;
    for k in 0..count {
        let v = sample(2.0 * PI * k as f64 / count as f64)?;
        peak = peak.max(v.norm());
        sum += v;
    }
    let mut estimate = sum / (count as f64 * scale);
    while count < 1 << 16 {
        for k in 0..count {
            let v = sample(2.0 * PI * (2 * k + 1) as f64 / (2 * count) as f64)?;
            peak = peak.max(v.norm());
            sum += v;
        }
        count *= 2;
        let next = sum / (count as f64 * scale);
        let diff = (next - estimate).norm();
        estimate = next;
        let floor = 64.0 * f64::EPSILON * peak / scale;
        if count >= 32 && diff <= floor.max(1e-15 * estimate.norm()) {
            return Ok((estimate, diff.max(floor)));
        }
    }
    Err(ContourError::NotConverged)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_kronrod_polynomial_exact() {
        // G10 is exact through degree 19, K21 through degree 31.
        let f = |_: usize, t: f64| Complex64::new(t.powi(19), 0.0);
        let r = adaptive(&f, &[(0.0, 1.0)], 1e-14, 10, 1).unwrap();
        assert!((r.value.re - 0.05).abs() < 1e-15);
        assert!(r.converged);
    }

    #[test]
    fn tail_of_inverse_square() {
        let r = integrate_to_infinity(|x| Complex64::new(1.0 / (x * x), 0.0), 2.0, 1e-13).unwrap();
        assert!((r.value.re - 0.5).abs() < 1e-12, "{:?}", r);
    }

    #[test]
    fn tail_probe_detects_slow_decay() {
        assert!(tail_is_integrable(|x| Complex64::new(1.0 / (x * x), 0.0), 1.0));
        assert!(!tail_is_integrable(|x| Complex64::new(1.0 / x, 0.0), 1.0));
        assert!(tail_is_integrable(|x| Complex64::new((-x * x).exp(), 0.0), 1.0));
    }

    #[test]
    fn taylor_coefficient_of_exponential() {
        let (c, err) = taylor_coefficient(|z| z.exp(), Complex64::new(0.0, 0.0), 1.0, 3).unwrap();
        assert!((c - Complex64::new(1.0 / 6.0, 0.0)).norm() < 1e-14);
        assert!(err < 1e-13);
    }

    #[test]
    fn non_finite_sample_is_reported() {
        let f = |_: usize, t: f64| Complex64::new(1.0 / (t - 0.5), 0.0);
        let err = adaptive(&f, &[(0.0, 1.0)], 1e-10, 100, 1).unwrap_err();
        assert!(matches!(err, ContourError::NonFiniteIntegrand { .. }));
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let f = |_: usize, t: f64| Complex64::new(t.sqrt().recip(), 0.0);
        let r = adaptive(&f, &[(0.0, 1.0)], 1e-15, 6, 1).unwrap();
        assert!(!r.converged);
    }
}

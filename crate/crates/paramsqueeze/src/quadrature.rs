//! Adaptive Gauss–Kronrod quadrature for complex integrands and a Fourier
//! tail summed over half-period panels with Wynn's epsilon algorithm.
//!
//! For tails whose amplitude does not decay the panel sums oscillate
//! boundedly and the epsilon limit is the Abel-regularized value.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

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

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_segments: usize,
    pub max_tail_panels: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self { abs_tol: 0.0, rel_tol: 1e-12, max_segments: 200_000, max_tail_panels: 600 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
}

impl Estimate {
    pub fn zero() -> Self {
        Self { value: Complex64::new(0.0, 0.0), error: 0.0 }
    }
}

impl std::ops::Add for Estimate {
    type Output = Estimate;
    fn add(self, o: Estimate) -> Estimate {
        Estimate { value: self.value + o.value, error: self.error + o.error }
    }
}

impl std::ops::Mul<Complex64> for Estimate {
    type Output = Estimate;
    fn mul(self, c: Complex64) -> Estimate {
        Estimate { value: self.value * c, error: self.error * c.norm() }
    }
}

struct Rule {
    value: Complex64,
    error: f64,
    abs: f64,
}

fn gk21<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Rule {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[10];
    let mut gauss = Complex64::new(0.0, 0.0);
    let mut abs = WGK[10] * fc.norm();
    let mut fv1 = [Complex64::new(0.0, 0.0); 10];
    let mut fv2 = [Complex64::new(0.0, 0.0); 10];
    for j in 0..10 {
        let x = h * XGK[j];
        let f1 = f(c - x);
        let f2 = f(c + x);
        fv1[j] = f1;
        fv2[j] = f2;
        kron += (f1 + f2) * WGK[j];
        abs += WGK[j] * (f1.norm() + f2.norm());
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }
    let mean = kron * 0.5;
    let mut asc = WGK[10] * (fc - mean).norm();
    for j in 0..10 {
        asc += WGK[j] * ((fv1[j] - mean).norm() + (fv2[j] - mean).norm());
    }
    let ha = h.abs();
    let mut err = ((kron - gauss) * h).norm();
    let asc = asc * ha;
    let abs = abs * ha;
    if asc != 0.0 && err != 0.0 {
        err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
    }
    if abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * abs);
    }
    Rule { value: kron * h, error: err, abs }
}

struct Segment {
    a: f64,
    b: f64,
    rule: Rule,
}

impl PartialEq for Segment {
    fn eq(&self, o: &Self) -> bool {
        self.rule.error == o.rule.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Segment {
    fn cmp(&self, o: &Self) -> Ordering {
        self.rule.error.total_cmp(&o.rule.error)
    }
}

/// Adaptive integral of `f` over `[points[0], points[last]]`, starting from
/// the panels delimited by `points` (ascending, at least two).
pub fn gauss_kronrod<F>(f: F, points: &[f64], cfg: &QuadConfig) -> Result<Estimate>
where
    F: Fn(f64) -> Complex64,
{
    if points.len() < 2 || points.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("quadrature breakpoints must ascend".into()));
    }
    let mut heap = BinaryHeap::new();
    for w in points.windows(2) {
        heap.push(Segment { a: w[0], b: w[1], rule: gk21(&f, w[0], w[1]) });
    }
    let totals = |heap: &BinaryHeap<Segment>| {
        let mut v = Complex64::new(0.0, 0.0);
        let (mut e, mut ab) = (0.0, 0.0);
        for s in heap.iter() {
            v += s.rule.value;
            e += s.rule.error;
            ab += s.rule.abs;
        }
        (v, e, ab)
    };
    let (mut value, mut error, mut abs) = totals(&heap);
    let mut since_refresh = 0;
    loop {
        if !value.re.is_finite() || !value.im.is_finite() || !error.is_finite() {
            return Err(Error::QuadratureFailure {
                detail: "non-finite integrand".into(),
                budget: f64::INFINITY,
            });
        }
        let target = cfg.abs_tol.max(cfg.rel_tol * value.norm()).max(50.0 * f64::EPSILON * abs);
        if error <= target {
            break;
        }
        if heap.len() >= cfg.max_segments {
            return Err(Error::QuadratureFailure {
                detail: format!("segment limit {} reached", cfg.max_segments),
                budget: error,
            });
        }
        let worst = heap.pop().expect("non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            return Err(Error::QuadratureFailure {
                detail: "segment too narrow to bisect".into(),
                budget: error,
            });
        }
        let left = gk21(&f, worst.a, mid);
        let right = gk21(&f, mid, worst.b);
        value += left.value + right.value - worst.rule.value;
        error += left.error + right.error - worst.rule.error;
        abs += left.abs + right.abs - worst.rule.abs;
        heap.push(Segment { a: worst.a, b: mid, rule: left });
        heap.push(Segment { a: mid, b: worst.b, rule: right });
        since_refresh += 1;
        if since_refresh == 256 {
            (value, error, abs) = totals(&heap);
            since_refresh = 0;
        }
    }
    // ordered summation keeps results reproducible regardless of heap layout
    let mut segs: Vec<&Segment> = heap.iter().collect();
    segs.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value = segs.iter().fold(Complex64::new(0.0, 0.0), |acc, s| acc + s.rule.value);
    let error = segs.iter().map(|s| s.rule.error).sum();
    Ok(Estimate { value, error })
}

/// Wynn's epsilon algorithm applied to a growing sequence of partial sums.
pub struct Epsilon {
    e: Vec<Complex64>,
    last: Option<Complex64>,
}

impl Default for Epsilon {
    fn default() -> Self {
        Self::new()
    }
}

impl Epsilon {
    pub fn new() -> Self {
        Self { e: Vec::new(), last: None }
    }

    /// Adds the next partial sum and returns the current best limit.
    pub fn push(&mut self, sum: Complex64) -> Complex64 {
        const BIG: f64 = 1e300;
        let n = self.e.len();
        self.e.push(sum);
        let mut t2 = Complex64::new(0.0, 0.0);
        for j in (1..=n).rev() {
            let t1 = t2;
            t2 = self.e[j - 1];
            let diff = self.e[j] - t2;
            self.e[j - 1] = if diff.norm() <= 1e-300 {
                Complex64::new(BIG, 0.0)
            } else {
                t1 + diff.inv()
            };
        }
        let count = n + 1;
        let mut val = if count % 2 == 1 { self.e[0] } else { self.e[1] };
        if val.norm() > 0.01 * BIG {
            val = self.last.unwrap_or(sum);
        }
        self.last = Some(val);
        val
    }
}

/// ∫_a^∞ f(ω) dω for an integrand oscillating like e^{±iκω}: half-period
/// panels summed and extrapolated.
pub fn oscillatory_tail<F>(f: F, a: f64, kappa: f64, cfg: &QuadConfig) -> Result<Estimate>
where
    F: Fn(f64) -> Complex64,
{
    if !(kappa.abs() > 0.0 && kappa.is_finite()) {
        return Err(Error::InvalidArgument("tail needs a nonzero oscillation rate".into()));
    }
    let half = PI / kappa.abs();
    let panel_cfg = QuadConfig { rel_tol: cfg.rel_tol * 1e-2, ..*cfg };
    let mut eps = Epsilon::new();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut panel_err = 0.0;
    let mut prev: Option<Complex64> = None;
    let mut streak = 0;
    let mut last_diff = f64::INFINITY;
    for k in 0..cfg.max_tail_panels {
        let lo = a + half * k as f64;
        let p = gauss_kronrod(&f, &[lo, lo + half], &panel_cfg)?;
        sum += p.value;
        panel_err += p.error;
        let est = eps.push(sum);
        if let Some(pv) = prev {
            let diff = (est - pv).norm();
            let target = cfg.abs_tol.max(cfg.rel_tol * est.norm());
            if diff <= target && k >= 8 {
                streak += 1;
                if streak >= 3 {
                    return Ok(Estimate { value: est, error: diff.max(last_diff) + panel_err });
                }
            } else {
                streak = 0;
            }
            last_diff = diff;
        }
        prev = Some(est);
    }
    Err(Error::QuadratureFailure {
        detail: format!("oscillatory tail not converged after {} panels", cfg.max_tail_panels),
        budget: last_diff + panel_err,
    })
}

/// ∫_0^∞ f(ω) dω for an integrand oscillating at rate `kappa` with a
/// Lorentzian-scale structure inside `[0, cut]`. The finite part is split at
/// half periods and at the listed `features`.
pub fn half_line<F>(f: F, kappa: f64, cut: f64, features: &[f64], cfg: &QuadConfig) -> Result<Estimate>
where
    F: Fn(f64) -> Complex64,
{
    half_line_from(f, 0.0, kappa, cut, features, cfg)
}

/// As [`half_line`] but over [a, ∞).
pub fn half_line_from<F>(
    f: F,
    a: f64,
    kappa: f64,
    cut: f64,
    features: &[f64],
    cfg: &QuadConfig,
) -> Result<Estimate>
where
    F: Fn(f64) -> Complex64,
{
    if !(cut > a) || !(a >= 0.0) {
        return Err(Error::InvalidArgument("cutoff must exceed the lower limit".into()));
    }
    let half = PI / kappa.abs();
    let panels = ((cut - a) / half).ceil().max(1.0) as usize;
    let cut = a + half * panels as f64;
    let mut points: Vec<f64> = (0..=panels).map(|k| a + half * k as f64).collect();
    points.extend(features.iter().copied().filter(|&x| x > a && x < cut));
    points.sort_by(f64::total_cmp);
    points.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * cut);
    let body = gauss_kronrod(&f, &points, cfg)?;
    let tail = oscillatory_tail(&f, cut, kappa, cfg)?;
    Ok(body + tail)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn polynomial_exact() {
        let r = gauss_kronrod(|x| c(x.powi(7) - 3.0 * x * x), &[0.0, 2.0], &QuadConfig::default())
            .unwrap();
        assert!((r.value.re - (256.0 / 8.0 - 8.0)).abs() < 1e-13);
    }

    #[test]
    fn peaked_integrand() {
        // ∫ 1/(x² + ε²) over [−1, 1] = 2 atan(1/ε)/ε
        let e = 1e-3;
        let r = gauss_kronrod(|x| c(1.0 / (x * x + e * e)), &[-1.0, 1.0], &QuadConfig::default())
            .unwrap();
        let exact = 2.0 * (1.0 / e).atan() / e;
        assert!((r.value.re / exact - 1.0).abs() < 1e-11);
    }

    #[test]
    fn epsilon_accelerates_alternating_series() {
        // ln 2 = Σ (−1)^{k+1}/k
        let mut eps = Epsilon::new();
        let mut s = 0.0;
        let mut est = c(0.0);
        for k in 1..=20 {
            s += if k % 2 == 1 { 1.0 } else { -1.0 } / f64::from(k);
            est = eps.push(c(s));
        }
        assert!((est.re - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn decaying_fourier_tail() {
        // ∫_1^∞ e^{iκx}/x² dx against a dense direct sum
        let kappa = 3.0;
        let f = |x: f64| Complex64::from_polar(1.0 / (x * x), kappa * x);
        let t = oscillatory_tail(f, 1.0, kappa, &QuadConfig::default()).unwrap();
        let direct = gauss_kronrod(
            f,
            &(0..=4000).map(|k| 1.0 + 0.5 * f64::from(k)).collect::<Vec<_>>(),
            &QuadConfig { rel_tol: 1e-13, ..Default::default() },
        )
        .unwrap();
        // remainder beyond 2001 is O(1/(κ x²)) ≈ 1e-7
        assert!((t.value - direct.value).norm() < 2e-7);
    }

    #[test]
    fn non_decaying_tail_gets_abel_value() {
        // Abel value of ∫_a^∞ e^{iκx} dx is i e^{iκa}/κ
        let (kappa, a) = (2.5, 0.7);
        let t = oscillatory_tail(|x| Complex64::from_polar(1.0, kappa * x), a, kappa, &QuadConfig::default())
            .unwrap();
        let exact = Complex64::i() * Complex64::from_polar(1.0, kappa * a) / kappa;
        assert!((t.value - exact).norm() < 1e-11);
    }

    #[test]
    fn half_line_lorentzian_fourier() {
        // ∫_0^∞ cos(κx)/(1+x²) dx = π e^{−κ}/2
        let kappa = 4.0;
        let r = half_line(
            |x| c((kappa * x).cos() / (1.0 + x * x)),
            kappa,
            20.0,
            &[1.0],
            &QuadConfig::default(),
        )
        .unwrap();
        let exact = PI * (-kappa).exp() / 2.0;
        assert!((r.value.re - exact).abs() < 1e-11, "{} vs {exact}", r.value.re);
    }
}

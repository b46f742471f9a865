//! Dormand–Prince 5(4) with step-size control and a fourth-order dense
//! output, for small fixed-size real systems.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// fifth-order weights minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rel: f64,
    pub abs: f64,
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { rel: 1e-10, abs: 1e-12, max_step: f64::INFINITY, max_steps: 1_000_000 }
    }
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += h * c * k[i];
        }
    }
    out
}

/// Integrates `y' = f(t, y)` from `t0` to `t1` and returns the state at
/// every requested time in `samples`. Samples must be ascending and lie in
/// `[t0, t1]`. The final state is always returned last.
pub fn integrate<const N: usize, F>(
    f: F,
    t0: f64,
    y0: [f64; N],
    t1: f64,
    samples: &[f64],
    tol: &Tolerances,
) -> Result<(Vec<[f64; N]>, [f64; N])>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    if !(t1 >= t0) {
        return Err(Error::InvalidArgument(format!("integration end {t1} precedes start {t0}")));
    }
    if samples.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidArgument("sample times must be ascending".into()));
    }
    if samples.iter().any(|&s| s < t0 || s > t1) {
        return Err(Error::InvalidArgument("sample time outside the integration span".into()));
    }
    let mut out = Vec::with_capacity(samples.len());
    let mut next = 0;
    while next < samples.len() && samples[next] == t0 {
        out.push(y0);
        next += 1;
    }
    if t1 == t0 {
        return Ok((out, y0));
    }

    let span = t1 - t0;
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    let mut h = initial_step(&f, t0, &y0, &k1, tol).min(span).min(tol.max_step);
    let mut steps = 0usize;
    let mut fac_old: f64 = 1e-4;

    loop {
        if steps >= tol.max_steps {
            return Err(Error::StepLimit { t, steps });
        }
        steps += 1;
        let last = t + h >= t1;
        if last {
            h = t1 - t;
        }

        let k2 = f(t + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
        let k3 = f(t + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(t + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(
            t + C5 * h,
            &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = f(
            t + h,
            &axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        );
        let y_new = axpy(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let k7 = f(t + h, &y_new);

        let mut err = 0.0;
        for i in 0..N {
            let e = h
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = tol.abs + tol.rel * y[i].abs().max(y_new[i].abs());
            err += (e / sc) * (e / sc);
        }
        let err = (err / N as f64).sqrt();
        if !err.is_finite() {
            return Err(Error::StepLimit { t, steps });
        }

        if err <= 1.0 {
            // dense output coefficients for this step
            let t_end = if last { t1 } else { t + h };
            while next < samples.len() && samples[next] <= t_end {
                let theta = ((samples[next] - t) / h).clamp(0.0, 1.0);
                out.push(dense(&y, &y_new, h, theta, [&k1, &k3, &k4, &k5, &k6, &k7]));
                next += 1;
            }
            // Lund stabilization as in Hairer's DOPRI5
            let fac11 = err.max(1e-300).powf(0.17);
            let fac = (fac11 / fac_old.powf(0.04) / 0.9).clamp(0.1, 5.0);
            fac_old = err.max(1e-4);
            t = t_end;
            y = y_new;
            k1 = k7;
            if last {
                break;
            }
            h = (h / fac).min(tol.max_step);
            if h <= f64::EPSILON * t.abs().max(1.0) {
                return Err(Error::StepLimit { t, steps });
            }
        } else {
            let fac11 = err.powf(0.17);
            h /= (fac11 / 0.9).min(5.0);
            if h <= f64::EPSILON * t.abs().max(1.0) {
                return Err(Error::StepLimit { t, steps });
            }
        }
    }
    Ok((out, y))
}

fn dense<const N: usize>(
    y0: &[f64; N],
    y1: &[f64; N],
    h: f64,
    theta: f64,
    k: [&[f64; N]; 6],
) -> [f64; N] {
    let [k1, k3, k4, k5, k6, k7] = k;
    let th1 = 1.0 - theta;
    let mut out = [0.0; N];
    for i in 0..N {
        let dy = y1[i] - y0[i];
        let bspl = h * k1[i] - dy;
        let r5 = h
            * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
        let r4 = dy - h * k7[i] - bspl;
        out[i] = y0[i] + theta * (dy + th1 * (bspl + theta * (r4 + th1 * r5)));
    }
    out
}

fn initial_step<const N: usize, F>(f: &F, t0: f64, y0: &[f64; N], f0: &[f64; N], tol: &Tolerances) -> f64
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let sc = |i: usize| tol.abs + tol.rel * y0[i].abs();
    let norm = |v: &[f64; N]| {
        ((0..N).map(|i| (v[i] / sc(i)).powi(2)).sum::<f64>() / N as f64).sqrt()
    };
    let d0 = norm(y0);
    let d1 = norm(f0);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let y1 = axpy(y0, h0, &[(1.0, f0)]);
    let f1 = f(t0 + h0, &y1);
    let mut diff = [0.0; N];
    for i in 0..N {
        diff[i] = f1[i] - f0[i];
    }
    let d2 = norm(&diff) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn harmonic(w: f64) -> impl Fn(f64, &[f64; 2]) -> [f64; 2] {
        move |_t, y| [y[1], -w * w * y[0]]
    }

    #[test]
    fn harmonic_oscillator_end_state() {
        let w = 3.0;
        let tol = Tolerances { rel: 1e-12, abs: 1e-14, ..Default::default() };
        let (_, y) = integrate(harmonic(w), 0.0, [1.0, 0.0], 10.0, &[], &tol).unwrap();
        assert!((y[0] - (w * 10.0).cos()).abs() < 1e-9);
        assert!((y[1] + w * (w * 10.0).sin()).abs() < 1e-8);
    }

    #[test]
    fn dense_output_tracks_exact_solution() {
        let w = 2.0;
        let tol = Tolerances { rel: 1e-11, abs: 1e-13, ..Default::default() };
        let samples: Vec<f64> = (0..=200).map(|i| 0.05 * f64::from(i)).collect();
        let (ys, _) = integrate(harmonic(w), 0.0, [0.0, 1.0], 10.0, &samples, &tol).unwrap();
        assert_eq!(ys.len(), samples.len());
        for (t, y) in samples.iter().zip(&ys) {
            assert!((y[0] - (w * t).sin() / w).abs() < 1e-8, "t={t}");
        }
    }

    #[test]
    fn fifth_order_convergence_with_fixed_steps() {
        // forcing fixed steps through max_step with a loose tolerance
        let run = |h: f64| {
            let tol = Tolerances { rel: 1.0, abs: 1.0, max_step: h, max_steps: 1_000_000 };
            let (_, y) = integrate(|t, y: &[f64; 1]| [y[0] * t.cos()], 0.0, [1.0], 2.0, &[], &tol)
                .unwrap();
            (y[0] - 2.0f64.sin().exp()).abs()
        };
        let e1 = run(0.1);
        let e2 = run(0.05);
        let order = (e1 / e2).log2();
        assert!(order > 4.6 && order < 5.6, "order {order}");
    }

    #[test]
    fn rejects_backward_span() {
        assert!(integrate(harmonic(1.0), 1.0, [1.0, 0.0], 0.0, &[], &Tolerances::default()).is_err());
    }

    #[test]
    fn step_limit_reported() {
        let tol = Tolerances { max_steps: 5, ..Default::default() };
        let r = integrate(harmonic(50.0), 0.0, [1.0, 0.0], 100.0, &[], &tol);
        assert!(matches!(r, Err(Error::StepLimit { .. })));
    }
}

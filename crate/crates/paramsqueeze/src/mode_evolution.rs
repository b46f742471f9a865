//! Fundamental solutions of d̈ + ω²(t) d = 0 with d⁽¹⁾ = (1, 0) and
//! d⁽²⁾ = (0, 1) at t = 0.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ode::{self, Tolerances};
use crate::profiles::ParametricProfile;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FundamentalSolution {
    pub t: f64,
    pub d1: f64,
    pub d1_dot: f64,
    pub d2: f64,
    pub d2_dot: f64,
}

impl FundamentalSolution {
    /// Initial data at t = 0.
    pub fn initial() -> Self {
        Self { t: 0.0, d1: 1.0, d1_dot: 0.0, d2: 0.0, d2_dot: 1.0 }
    }

    pub fn wronskian(&self) -> f64 {
        self.d1 * self.d2_dot - self.d1_dot * self.d2
    }

    /// Closed form for a constant frequency `omega` from t = 0.
    pub fn harmonic(omega: f64, t: f64) -> Self {
        let (s, c) = (omega * t).sin_cos();
        Self { t, d1: c, d1_dot: -omega * s, d2: s / omega, d2_dot: c }
    }

    fn state(&self) -> [f64; 4] {
        [self.d1, self.d1_dot, self.d2, self.d2_dot]
    }

    fn from_state(t: f64, y: &[f64; 4]) -> Self {
        Self { t, d1: y[0], d1_dot: y[1], d2: y[2], d2_dot: y[3] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub wronskian_alarm: f64,
    pub max_steps: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            max_step: f64::INFINITY,
            wronskian_alarm: 1e-8,
            max_steps: 5_000_000,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let pos = |v: f64| v.is_finite() && v > 0.0;
        if !pos(self.rel_tol) {
            return Err(Error::InvalidArgument("rel_tol must be positive".into()));
        }
        if !pos(self.abs_tol) {
            return Err(Error::InvalidArgument("abs_tol must be positive".into()));
        }
        if !(self.max_step > 0.0) {
            return Err(Error::InvalidArgument("max_step must be positive".into()));
        }
        if !pos(self.wronskian_alarm) {
            return Err(Error::InvalidArgument("wronskian_alarm must be positive".into()));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidArgument("max_steps must be positive".into()));
        }
        Ok(())
    }

    pub(crate) fn tolerances(&self) -> Tolerances {
        Tolerances {
            rel: self.rel_tol,
            abs: self.abs_tol,
            max_step: self.max_step,
            max_steps: self.max_steps,
        }
    }
}

/// Out-region continuation at constant `omega_f`; exact rotation of the
/// phase-space pair, so the Wronskian is carried over unchanged.
pub fn continue_out_region(
    sol_at_tb: &FundamentalSolution,
    omega_f: f64,
    t: f64,
) -> Result<FundamentalSolution> {
    if t < sol_at_tb.t {
        return Err(Error::InvalidArgument(format!(
            "continuation time {t} precedes the seed time {}",
            sol_at_tb.t
        )));
    }
    if !(omega_f > 0.0) {
        return Err(Error::InvalidArgument("omega_f must be positive".into()));
    }
    let (s, c) = (omega_f * (t - sol_at_tb.t)).sin_cos();
    let rot = |d: f64, dd: f64| (d * c + dd * s / omega_f, -d * omega_f * s + dd * c);
    let (d1, d1_dot) = rot(sol_at_tb.d1, sol_at_tb.d1_dot);
    let (d2, d2_dot) = rot(sol_at_tb.d2, sol_at_tb.d2_dot);
    Ok(FundamentalSolution { t, d1, d1_dot, d2, d2_dot })
}

fn check_wronskian(sol: &FundamentalSolution, cfg: &SolverConfig) -> Result<()> {
    let drift = (sol.wronskian() - 1.0).abs();
    if drift > cfg.wronskian_alarm || !drift.is_finite() {
        return Err(Error::WronskianDrift { t: sol.t, drift });
    }
    Ok(())
}

/// Solution at the end of the transition window, `t_b + shift`.
pub fn evolve_to_end(profile: &ParametricProfile, cfg: &SolverConfig) -> Result<FundamentalSolution> {
    evolve(profile, profile.end(), cfg)
}

pub fn evolve(
    profile: &ParametricProfile,
    t_target: f64,
    cfg: &SolverConfig,
) -> Result<FundamentalSolution> {
    let mut v = trajectory(profile, &[t_target], cfg)?;
    Ok(v.pop().expect("one sample requested"))
}

/// Solutions at every time in `times` (any order, all ≥ 0), from a single
/// integration through the transition window.
pub fn trajectory(
    profile: &ParametricProfile,
    times: &[f64],
    cfg: &SolverConfig,
) -> Result<Vec<FundamentalSolution>> {
    profile.validate()?;
    cfg.validate()?;
    if let Some(&bad) = times.iter().find(|t| !(**t >= 0.0) || !t.is_finite()) {
        return Err(Error::InvalidArgument(format!("time {bad} outside [0, inf)")));
    }
    let (ts, te) = (profile.start(), profile.end());
    if profile.is_trivial() {
        let out: Vec<_> =
            times.iter().map(|&t| FundamentalSolution::harmonic(profile.omega_i, t)).collect();
        for s in &out {
            check_wronskian(s, cfg)?;
        }
        return Ok(out);
    }

    let mut inside: Vec<f64> = times.iter().copied().filter(|&t| t > ts && t < te).collect();
    inside.sort_by(f64::total_cmp);
    inside.dedup();
    let needs_window = times.iter().any(|&t| t > ts);

    let seed = FundamentalSolution::harmonic(profile.omega_i, ts);
    let (window, end_sol) = if needs_window {
        let (ys, y_end) = integrate_window(profile, &seed, &inside, cfg)?;
        let window: Vec<FundamentalSolution> =
            inside.iter().zip(&ys).map(|(&t, y)| FundamentalSolution::from_state(t, y)).collect();
        (window, Some(FundamentalSolution::from_state(te, &y_end)))
    } else {
        (Vec::new(), None)
    };

    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        let sol = if t <= ts {
            FundamentalSolution::harmonic(profile.omega_i, t)
        } else if t < te {
            let k = inside.partition_point(|&x| x < t);
            window[k]
        } else {
            continue_out_region(end_sol.as_ref().expect("window integrated"), profile.omega_f, t)?
        };
        check_wronskian(&sol, cfg)?;
        out.push(sol);
    }
    Ok(out)
}

fn integrate_window(
    profile: &ParametricProfile,
    seed: &FundamentalSolution,
    samples: &[f64],
    cfg: &SolverConfig,
) -> Result<(Vec<[f64; 4]>, [f64; 4])> {
    let rhs = |t: f64, y: &[f64; 4]| {
        let w2 = profile.eval_omega_sq(t);
        [y[1], -w2 * y[0], y[3], -w2 * y[2]]
    };
    let tol = cfg.tolerances();
    // restart the stepper at internal breakpoints of tabulated profiles so
    // no step straddles a kink in the second derivative
    let mut cuts: Vec<f64> = profile.interior_breakpoints();
    cuts.push(profile.end());
    let mut t0 = seed.t;
    let mut y = seed.state();
    let mut out = Vec::with_capacity(samples.len());
    let mut next = 0;
    for &t1 in &cuts {
        let end = samples.partition_point(|&s| s <= t1);
        let (ys, y1) = ode::integrate(rhs, t0, y, t1, &samples[next..end], &tol)?;
        out.extend(ys);
        next = end;
        t0 = t1;
        y = y1;
    }
    Ok((out, y))
}

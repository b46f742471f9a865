//! Parameter sweeps of the squeeze pipeline: η against the end time of the
//! process, the shift of the whole process, or the mode frequency.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mode_evolution::SolverConfig;
use crate::profiles::{ParametricProfile, Shape, Table};
use crate::squeeze::squeeze_at;
use crate::stability::{monodromy_trace, to_mathieu};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    /// End time t_b of the transition, t_a held fixed.
    EndTime,
    /// Mode frequency; see [`scaled_for_mode`].
    ModeFrequency,
    /// Translation Δ of the whole process.
    Shift,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub template: ParametricProfile,
    pub axis: SweepAxis,
    pub range: (f64, f64),
    pub samples: usize,
    pub observation_time: f64,
    pub solver: SolverConfig,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.template.validate()?;
        self.solver.validate()?;
        let (lo, hi) = self.range;
        if self.samples < 2 {
            return Err(Error::InvalidArgument("a sweep needs at least 2 samples".into()));
        }
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidArgument("sweep range must be finite with lo < hi".into()));
        }
        let t_obs = self.observation_time;
        match self.axis {
            SweepAxis::EndTime => {
                if matches!(self.template.shape, Shape::Custom { .. }) {
                    return Err(Error::InvalidArgument("a tabulated profile has a fixed end time".into()));
                }
                if !(lo > self.template.t_a) {
                    return Err(Error::InvalidArgument("end times must exceed t_a".into()));
                }
                if !(hi + self.template.shift < t_obs) {
                    return Err(Error::InvalidArgument(
                        "end-time range must finish before the observation time".into(),
                    ));
                }
            }
            SweepAxis::Shift => {
                if !(lo >= 0.0) {
                    return Err(Error::InvalidArgument("shifts must be non-negative".into()));
                }
                if !(self.template.t_b + hi <= t_obs) {
                    return Err(Error::InvalidArgument(
                        "the most shifted process must end before the observation time".into(),
                    ));
                }
            }
            SweepAxis::ModeFrequency => {
                if !(lo > 0.0) {
                    return Err(Error::InvalidArgument("mode frequencies must be positive".into()));
                }
                if !(self.template.end() <= t_obs) {
                    return Err(Error::InvalidArgument(
                        "observation time precedes the end of the transition".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn axis_values(&self) -> Vec<f64> {
        linspace(self.range.0, self.range.1, self.samples)
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub axis_value: f64,
    pub eta: f64,
    pub cosh2eta: f64,
    pub theta: f64,
    pub phase_undefined: bool,
    pub residual_unitarity: f64,
    pub residual_hyperbolic: f64,
    pub mathieu_a: Option<f64>,
    pub mathieu_q: Option<f64>,
    pub trace: Option<f64>,
    pub error: Option<String>,
}

impl SweepRow {
    fn failed(axis_value: f64, err: &Error) -> Self {
        Self {
            axis_value,
            eta: f64::NAN,
            cosh2eta: f64::NAN,
            theta: f64::NAN,
            phase_undefined: false,
            residual_unitarity: f64::NAN,
            residual_hyperbolic: f64::NAN,
            mathieu_a: None,
            mathieu_q: None,
            trace: None,
            error: Some(err.to_string()),
        }
    }
}

/// The template with (ω_i, ω_f) ↦ (s ω_i, s ω_f), s = ω / ω_i of the
/// template, and the transition window kept in place. A table is scaled by s².
pub fn scaled_for_mode(template: &ParametricProfile, omega: f64) -> Result<ParametricProfile> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::InvalidArgument("mode frequency must be positive".into()));
    }
    let s = omega / template.omega_i;
    let mut p = template.clone();
    p.omega_i *= s;
    p.omega_f *= s;
    if let Shape::Custom { table } = &template.shape {
        let vals = table.values().iter().map(|v| v * s * s).collect();
        p.shape = Shape::Custom { table: Table::new(table.times().to_vec(), vals)? };
    }
    p.validate()?;
    Ok(p)
}

fn profile_at(spec: &SweepSpec, x: f64) -> Result<ParametricProfile> {
    let mut p = spec.template.clone();
    match spec.axis {
        SweepAxis::EndTime => {
            p.t_b = x;
            p.validate()?;
            Ok(p)
        }
        SweepAxis::Shift => p.with_shift(x),
        SweepAxis::ModeFrequency => scaled_for_mode(&p, x),
    }
}

fn row_at(spec: &SweepSpec, x: f64) -> Result<SweepRow> {
    let p = profile_at(spec, x)?;
    let sq = squeeze_at(&p, spec.observation_time, &spec.solver)?;
    let (mut a, mut q, mut trace) = (None, None, None);
    if let Shape::SineSquared { .. } = p.shape {
        let mp = to_mathieu(&p)?;
        a = Some(mp.a);
        q = Some(mp.q);
        trace = Some(monodromy_trace(mp.a, mp.q)?);
    }
    Ok(SweepRow {
        axis_value: x,
        eta: sq.eta,
        cosh2eta: sq.cosh2eta,
        theta: sq.theta,
        phase_undefined: sq.phase_undefined,
        residual_unitarity: sq.residual_unitarity,
        residual_hyperbolic: sq.residual_hyperbolic,
        mathieu_a: a,
        mathieu_q: q,
        trace,
        error: None,
    })
}

/// One row per axis value in increasing order. A failing point is recorded
/// in its row's `error` column and the sweep carries on.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    Ok(spec
        .axis_values()
        .par_iter()
        .map(|&x| row_at(spec, x).unwrap_or_else(|e| SweepRow::failed(x, &e)))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralRow {
    pub omega_mode: f64,
    pub eta: f64,
    pub theta: f64,
    pub error: Option<String>,
}

/// η(ω) across mode frequencies, each mode driven by the scaled template
/// and observed at the end of its transition.
pub fn spectral_sweep(
    profile: &ParametricProfile,
    omega_range: (f64, f64),
    samples: usize,
    cfg: &SolverConfig,
) -> Result<Vec<SpectralRow>> {
    profile.validate()?;
    let (lo, hi) = omega_range;
    if samples < 2 || !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::InvalidArgument("need a positive range lo < hi and at least 2 samples".into()));
    }
    Ok(linspace(lo, hi, samples)
        .par_iter()
        .map(|&w| {
            match scaled_for_mode(profile, w).and_then(|p| squeeze_at(&p, p.end(), cfg)) {
                Ok(sq) => SpectralRow { omega_mode: w, eta: sq.eta, theta: sq.theta, error: None },
                Err(e) => SpectralRow { omega_mode: w, eta: f64::NAN, theta: f64::NAN, error: Some(e.to_string()) },
            }
        })
        .collect())
}

/// Indices of strict interior local maxima.
pub fn local_maxima(values: &[f64]) -> Vec<usize> {
    (1..values.len().saturating_sub(1))
        .filter(|&i| values[i] > values[i - 1] && values[i] > values[i + 1])
        .collect()
}

/// Centered moving average whose window spans one local oscillation, taken
/// as the median spacing between neighbouring maxima. Only points with a
/// full window are returned, paired with their index. Without at least two
/// maxima the input is returned unchanged.
pub fn smooth_over_oscillation(values: &[f64]) -> Vec<(usize, f64)> {
    let peaks = local_maxima(values);
    if peaks.len() < 2 {
        return values.iter().copied().enumerate().collect();
    }
    let mut gaps: Vec<usize> = peaks.windows(2).map(|w| w[1] - w[0]).collect();
    gaps.sort_unstable();
    let width = gaps[gaps.len() / 2].max(1);
    let (left, right) = (width / 2, width - width / 2);
    (left..values.len().saturating_sub(right))
        .map(|i| {
            let win = &values[i - left..i + right];
            (i, win.iter().sum::<f64>() / win.len() as f64)
        })
        .collect()
}

pub fn strictly_decreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] < w[0])
}

//! Bogoliubov coefficients and two-mode squeeze parameters (η, θ) from the
//! fundamental solutions in the out-region.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mode_evolution::{trajectory, FundamentalSolution, SolverConfig};
use crate::profiles::ParametricProfile;

/// Residual above which solutions are considered corrupted upstream.
pub const UNITARITY_REJECT: f64 = 1e-6;
/// Below this sinh 2η the squeeze phase carries no information.
pub const PHASE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BogoliubovPair {
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl BogoliubovPair {
    pub fn unitarity_residual(&self) -> f64 {
        (self.alpha.norm_sqr() - self.beta.norm_sqr() - 1.0).abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SqueezeResult {
    pub eta: f64,
    /// Squeeze phase in [0, 2π), time origin at the end of the transition.
    pub theta: f64,
    pub cosh2eta: f64,
    pub sinh2eta: f64,
    pub residual_unitarity: f64,
    pub residual_hyperbolic: f64,
    /// Set when sinh 2η is too small for θ to mean anything; θ is then 0.
    pub phase_undefined: bool,
    pub alpha: Complex64,
    pub beta: Complex64,
}

fn check_frequencies(omega_i: f64, omega_f: f64) -> Result<()> {
    if !(omega_i > 0.0 && omega_f > 0.0 && omega_i.is_finite() && omega_f.is_finite()) {
        return Err(Error::InvalidArgument("frequencies must be positive and finite".into()));
    }
    Ok(())
}

pub fn bogoliubov_from_solution(
    sol: &FundamentalSolution,
    omega_i: f64,
    omega_f: f64,
) -> Result<BogoliubovPair> {
    check_frequencies(omega_i, omega_f)?;
    let FundamentalSolution { d1, d1_dot, d2, d2_dot, .. } = *sol;
    let norm = 2.0 * (omega_i * omega_f).sqrt();
    let alpha = Complex64::new(omega_i * omega_f * d2 - d1_dot, omega_f * d1 + omega_i * d2_dot) / norm;
    let beta = Complex64::new(omega_i * omega_f * d2 + d1_dot, -omega_f * d1 + omega_i * d2_dot) / norm;
    let pair = BogoliubovPair { alpha, beta };
    let residual = pair.unitarity_residual();
    if !(residual <= UNITARITY_REJECT) {
        return Err(Error::UnitarityViolation { residual });
    }
    Ok(pair)
}

/// The three quadratic forms of the solution that carry cosh 2η and the two
/// rotating components of sinh 2η.
fn quadratic_forms(sol: &FundamentalSolution, wi: f64, wf: f64) -> (f64, f64, f64) {
    let FundamentalSolution { d1, d1_dot, d2, d2_dot, .. } = *sol;
    let kinetic = d1_dot * d1_dot / (wf * wi) + (wi / wf) * d2_dot * d2_dot;
    let potential = (wf / wi) * d1 * d1 + wf * wi * d2 * d2;
    let cosh = 0.5 * (kinetic + potential);
    let cos_part = 0.5 * (kinetic - potential);
    let sin_part = -(d1 * d1_dot / wi + wi * d2 * d2_dot);
    (cosh, cos_part, sin_part)
}

/// Squeeze parameters from a solution sampled at `sol.t ≥ t_origin`, with
/// `t_origin` the end of the transition.
pub fn squeeze_from_solution(
    sol: &FundamentalSolution,
    omega_i: f64,
    omega_f: f64,
    t_origin: f64,
) -> Result<SqueezeResult> {
    if sol.t < t_origin {
        return Err(Error::InvalidArgument(format!(
            "solution time {} precedes the out-region start {t_origin}",
            sol.t
        )));
    }
    let pair = bogoliubov_from_solution(sol, omega_i, omega_f)?;
    let (c2, e2, e3) = quadratic_forms(sol, omega_i, omega_f);
    let s2 = e2.hypot(e3);
    // ln(cosh 2η + sinh 2η) stays accurate as η → 0 where arccosh does not
    let eta = 0.5 * (c2 + s2).ln().max(0.0);
    let phase_undefined = s2 < PHASE_FLOOR;
    let theta = if phase_undefined {
        0.0
    } else {
        (e3.atan2(e2) + 2.0 * omega_f * (sol.t - t_origin)).rem_euclid(TAU)
    };
    Ok(SqueezeResult {
        eta,
        theta: if theta >= TAU { 0.0 } else { theta },
        cosh2eta: c2.max(1.0),
        sinh2eta: s2,
        residual_unitarity: pair.unitarity_residual(),
        residual_hyperbolic: (c2 * c2 - e2 * e2 - e3 * e3 - 1.0).abs(),
        phase_undefined,
        alpha: pair.alpha,
        beta: pair.beta,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AbPhase {
    pub a: f64,
    pub b: f64,
    pub theta: f64,
}

/// Phase from the pair (A, B) evaluated at the end of the transition. Their
/// norm √(A² + B²) equals 2 sinh 2η.
pub fn ab_phase(sol_at_tb: &FundamentalSolution, omega_i: f64, omega_f: f64) -> Result<AbPhase> {
    check_frequencies(omega_i, omega_f)?;
    let (wi, wf) = (omega_i, omega_f);
    let FundamentalSolution { d1, d1_dot, d2, d2_dot, .. } = *sol_at_tb;
    let a = 2.0 * (d1 * d1_dot / wi + wi * d2 * d2_dot);
    let b = d1_dot * d1_dot / (wf * wi) + (wi / wf) * d2_dot * d2_dot
        - (wf / wi) * d1 * d1
        - wf * wi * d2 * d2;
    let theta = if a == 0.0 && b == 0.0 { 0.0 } else { (-a).atan2(b).rem_euclid(TAU) };
    Ok(AbPhase { a, b, theta })
}

/// Full pipeline: evolve the mode and extract the squeeze parameters at
/// `t_obs`, which must lie in the out-region.
pub fn squeeze_at(profile: &ParametricProfile, t_obs: f64, cfg: &SolverConfig) -> Result<SqueezeResult> {
    Ok(squeeze_series(profile, &[t_obs], cfg)?[0])
}

/// Squeeze parameters at several out-region times from one integration.
pub fn squeeze_series(
    profile: &ParametricProfile,
    times: &[f64],
    cfg: &SolverConfig,
) -> Result<Vec<SqueezeResult>> {
    let end = profile.end();
    if let Some(&t) = times.iter().find(|&&t| !(t >= end)) {
        return Err(Error::InvalidArgument(format!(
            "observation time {t} precedes the end of the transition {end}"
        )));
    }
    let sols = trajectory(profile, times, cfg)?;
    sols.iter()
        .map(|s| squeeze_from_solution(s, profile.omega_i, profile.omega_f, end))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShiftReport {
    pub eta_unshifted: f64,
    pub eta_shifted: f64,
    pub abs_diff: f64,
}

/// Runs the pipeline on `profile` as given and translated by `delta`, both
/// observed at `t_obs`.
pub fn shift_invariance_check(
    profile: &ParametricProfile,
    delta: f64,
    t_obs: f64,
    cfg: &SolverConfig,
) -> Result<ShiftReport> {
    let shifted = profile.clone().with_shift(profile.shift + delta)?;
    if t_obs < shifted.end() {
        return Err(Error::InvalidArgument(format!(
            "observation time {t_obs} precedes the shifted transition end {}",
            shifted.end()
        )));
    }
    let a = squeeze_at(profile, t_obs, cfg)?.eta;
    let b = squeeze_at(&shifted, t_obs, cfg)?.eta;
    Ok(ShiftReport { eta_unshifted: a, eta_shifted: b, abs_diff: (a - b).abs() })
}

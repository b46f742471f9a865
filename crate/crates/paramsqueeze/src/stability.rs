//! Mathieu form of the sine-squared process and Floquet classification by
//! the monodromy matrix over one period.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ode::{self, Tolerances};
use crate::profiles::{ParametricProfile, Shape};

/// Slack on |trace| ≤ 2 so exact band edges classify as stable despite
/// round-off in the integration.
pub const MARGINAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MathieuParams {
    pub a: f64,
    pub q: f64,
    pub omega: f64,
    pub a_sq: f64,
    pub b_sq: f64,
}

/// ω²(t) = A² − B² cos Ω(t − t_a) inside the window; with Ω t = 2τ this is
/// x'' + (a − 2q cos 2τ) x = 0.
pub fn to_mathieu(profile: &ParametricProfile) -> Result<MathieuParams> {
    let n = match profile.shape {
        Shape::SineSquared { n } => n,
        _ => return Err(Error::WrongVariant),
    };
    let wi2 = profile.omega_i * profile.omega_i;
    let wf2 = profile.omega_f * profile.omega_f;
    let omega = f64::from(n) * PI / profile.duration();
    let a_sq = 0.5 * (wf2 + wi2);
    let b_sq = 0.5 * (wf2 - wi2);
    Ok(MathieuParams {
        a: 4.0 * a_sq / (omega * omega),
        q: 2.0 * b_sq / (omega * omega),
        omega,
        a_sq,
        b_sq,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Monodromy {
    /// Columns are the two solutions at τ = π started from (1, 0) and (0, 1).
    pub m: [[f64; 2]; 2],
}

impl Monodromy {
    pub fn trace(&self) -> f64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn det(&self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// Growth rate μ per unit τ from trace = 2 cosh(πμ); zero when stable.
    pub fn floquet_exponent(&self) -> f64 {
        let half = self.trace().abs() / 2.0;
        if half <= 1.0 {
            0.0
        } else {
            half.acosh() / PI
        }
    }

    /// Same rate from the larger eigenvalue modulus, ln|λ|/π.
    pub fn floquet_exponent_from_eigenvalues(&self) -> f64 {
        let tr = self.trace();
        let disc = tr * tr - 4.0 * self.det();
        if disc <= 0.0 {
            return 0.0;
        }
        let lam = 0.5 * (tr.abs() + disc.sqrt());
        lam.ln().max(0.0) / PI
    }

    pub fn is_stable(&self) -> bool {
        is_stable(self.trace())
    }
}

pub fn is_stable(trace: f64) -> bool {
    trace.abs() <= 2.0 + MARGINAL_TOL
}

fn mathieu_tolerances() -> Tolerances {
    Tolerances { rel: 1e-13, abs: 1e-15, max_step: 0.05, max_steps: 10_000_000 }
}

pub fn monodromy(a: f64, q: f64) -> Result<Monodromy> {
    if !(a.is_finite() && q.is_finite()) {
        return Err(Error::InvalidArgument("a and q must be finite".into()));
    }
    let rhs = |tau: f64, y: &[f64; 4]| {
        let k = a - 2.0 * q * (2.0 * tau).cos();
        [y[1], -k * y[0], y[3], -k * y[2]]
    };
    let (_, y) = ode::integrate(rhs, 0.0, [1.0, 0.0, 0.0, 1.0], PI, &[], &mathieu_tolerances())?;
    Ok(Monodromy { m: [[y[0], y[2]], [y[1], y[3]]] })
}

pub fn monodromy_trace(a: f64, q: f64) -> Result<f64> {
    Ok(monodromy(a, q)?.trace())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridCell {
    pub a: f64,
    pub q: f64,
    pub trace: f64,
    pub stable: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanSpec {
    pub a_range: (f64, f64),
    pub q_range: (f64, f64),
    pub a_points: usize,
    pub q_points: usize,
    /// Drop cells with q > a/2, which no positive ω_i reaches.
    pub physical_wedge_only: bool,
}

impl Default for ScanSpec {
    fn default() -> Self {
        Self {
            a_range: (0.0, 10.0),
            q_range: (0.0, 5.0),
            a_points: 400,
            q_points: 400,
            physical_wedge_only: true,
        }
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> + Clone {
    (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
}

/// Monodromy traces on a rectangular (a, q) grid, ordered by a then q.
pub fn stability_scan(spec: &ScanSpec) -> Result<Vec<GridCell>> {
    if spec.a_points < 2 || spec.q_points < 2 {
        return Err(Error::InvalidArgument("grid resolution must be at least 2 per axis".into()));
    }
    let finite = |r: (f64, f64)| r.0.is_finite() && r.1.is_finite() && r.1 > r.0;
    if !finite(spec.a_range) || !finite(spec.q_range) {
        return Err(Error::InvalidArgument("grid ranges must be finite with lo < hi".into()));
    }
    let points: Vec<(f64, f64)> = linspace(spec.a_range.0, spec.a_range.1, spec.a_points)
        .flat_map(|a| linspace(spec.q_range.0, spec.q_range.1, spec.q_points).map(move |q| (a, q)))
        .filter(|&(a, q)| !spec.physical_wedge_only || q <= a / 2.0)
        .collect();
    points
        .par_iter()
        .map(|&(a, q)| {
            let trace = monodromy_trace(a, q)?;
            Ok(GridCell { a, q, trace, stable: is_stable(trace) })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub t_b: f64,
    pub a: f64,
    pub q: f64,
    pub trace: f64,
    pub stable: bool,
}

/// The (a, q) path traced by a sine-squared template as its end time varies.
pub fn parameter_curve(template: &ParametricProfile, t_b_values: &[f64]) -> Result<Vec<CurvePoint>> {
    if !matches!(template.shape, Shape::SineSquared { .. }) {
        return Err(Error::WrongVariant);
    }
    t_b_values
        .par_iter()
        .map(|&t_b| {
            let mut p = template.clone();
            p.t_b = t_b;
            p.validate()?;
            let mp = to_mathieu(&p)?;
            let trace = monodromy_trace(mp.a, mp.q)?;
            Ok(CurvePoint { t_b, a: mp.a, q: mp.q, trace, stable: is_stable(trace) })
        })
        .collect()
}

//! Frequency processes ω²(t) that drive a single field mode.
//!
//! Every process holds ω² at ω_i² up to `t_a + shift`, performs its
//! transition, then holds ω_f² from `t_b + shift` on.

use std::f64::consts::PI;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

/// Tabulated ω²(t) with a shape-preserving (PCHIP) cubic interpolant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    t: Vec<f64>,
    omega_sq: Vec<f64>,
    #[serde(skip)]
    slopes: Vec<f64>,
}

impl Table {
    pub fn new(t: Vec<f64>, omega_sq: Vec<f64>) -> Result<Self> {
        if t.len() != omega_sq.len() {
            return Err(Error::InvalidProfile(format!(
                "table columns differ in length ({} vs {})",
                t.len(),
                omega_sq.len()
            )));
        }
        if t.len() < 2 {
            return Err(Error::InvalidProfile("table needs at least two rows".into()));
        }
        if t.iter().chain(omega_sq.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidProfile("table contains a non-finite value".into()));
        }
        if t.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidProfile("table times must be strictly ascending".into()));
        }
        if omega_sq[0] <= 0.0 || omega_sq[omega_sq.len() - 1] <= 0.0 {
            return Err(Error::InvalidProfile(
                "table must start and end at a positive omega_sq".into(),
            ));
        }
        let slopes = pchip_slopes(&t, &omega_sq);
        Ok(Self { t, omega_sq, slopes })
    }

    /// Reads a whitespace separated two-column file `t omega_sq`. Blank lines
    /// and lines starting with `#` are skipped.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::InvalidProfile(format!("cannot read table {}: {e}", path.display()))
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut t = Vec::new();
        let mut w = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split_whitespace().collect();
            if cols.len() != 2 {
                return Err(Error::InvalidProfile(format!(
                    "table line {}: expected 2 columns, found {}",
                    lineno + 1,
                    cols.len()
                )));
            }
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|_| {
                    Error::InvalidProfile(format!("table line {}: bad number {s:?}", lineno + 1))
                })
            };
            t.push(parse(cols[0])?);
            w.push(parse(cols[1])?);
        }
        Self::new(t, w)
    }

    pub fn times(&self) -> &[f64] {
        &self.t
    }

    pub fn values(&self) -> &[f64] {
        &self.omega_sq
    }

    /// Interpolated value, clamped to the end values outside the table.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.t.len();
        if x <= self.t[0] {
            return self.omega_sq[0];
        }
        if x >= self.t[n - 1] {
            return self.omega_sq[n - 1];
        }
        let k = self.t.partition_point(|&tk| tk <= x) - 1;
        let h = self.t[k + 1] - self.t[k];
        let s = (x - self.t[k]) / h;
        let (y0, y1) = (self.omega_sq[k], self.omega_sq[k + 1]);
        let (m0, m1) = (self.slopes[k] * h, self.slopes[k + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        (2.0 * s3 - 3.0 * s2 + 1.0) * y0
            + (s3 - 2.0 * s2 + s) * m0
            + (-2.0 * s3 + 3.0 * s2) * y1
            + (s3 - s2) * m1
    }
}

fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
    if n == 2 {
        return vec![delta[0], delta[0]];
    }
    let mut m = vec![0.0; n];
    for k in 1..n - 1 {
        let (d0, d1) = (delta[k - 1], delta[k]);
        if d0 * d1 > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            m[k] = (w1 + w2) / (w1 / d0 + w2 / d1);
        }
    }
    m[0] = pchip_edge(h[0], h[1], delta[0], delta[1]);
    m[n - 1] = pchip_edge(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    m
}

fn pchip_edge(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d.signum() != d0.signum() || d0 == 0.0 {
        0.0
    } else if d0.signum() != d1.signum() && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum Shape {
    Constant,
    PiecewiseLinear,
    SineSquared { n: u32 },
    SmoothSeptic,
    Custom { table: Table },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParametricProfile {
    pub shape: Shape,
    pub omega_i: f64,
    pub omega_f: f64,
    pub t_a: f64,
    pub t_b: f64,
    pub shift: f64,
}

/// Normalized septic transition 35u⁴ − 84u⁵ + 70u⁶ − 20u⁷ on [0, 1].
pub fn septic_step(u: f64) -> f64 {
    let u4 = u * u * u * u;
    u4 * (35.0 + u * (-84.0 + u * (70.0 - 20.0 * u)))
}

impl ParametricProfile {
    fn build(shape: Shape, omega_i: f64, omega_f: f64, t_a: f64, t_b: f64) -> Result<Self> {
        let p = Self { shape, omega_i, omega_f, t_a, t_b, shift: 0.0 };
        p.validate()?;
        Ok(p)
    }

    /// ω² ≡ ω_i² everywhere. `t_a`/`t_b` only mark where the out-region is
    /// considered to begin.
    pub fn constant(omega: f64, t_a: f64, t_b: f64) -> Result<Self> {
        Self::build(Shape::Constant, omega, omega, t_a, t_b)
    }

    pub fn piecewise_linear(omega_i: f64, omega_f: f64, t_a: f64, t_b: f64) -> Result<Self> {
        Self::build(Shape::PiecewiseLinear, omega_i, omega_f, t_a, t_b)
    }

    pub fn sine_squared(omega_i: f64, omega_f: f64, t_a: f64, t_b: f64, n: u32) -> Result<Self> {
        Self::build(Shape::SineSquared { n }, omega_i, omega_f, t_a, t_b)
    }

    pub fn smooth_septic(omega_i: f64, omega_f: f64, t_a: f64, t_b: f64) -> Result<Self> {
        Self::build(Shape::SmoothSeptic, omega_i, omega_f, t_a, t_b)
    }

    /// The table fixes everything: `t_a`, `t_b` are its first and last times
    /// and ω_i², ω_f² its first and last values.
    pub fn custom(table: Table) -> Result<Self> {
        let t = table.times();
        let w = table.values();
        let (t_a, t_b) = (t[0], t[t.len() - 1]);
        let (wi, wf) = (w[0].sqrt(), w[w.len() - 1].sqrt());
        Self::build(Shape::Custom { table }, wi, wf, t_a, t_b)
    }

    pub fn with_shift(mut self, shift: f64) -> Result<Self> {
        self.shift = shift;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidProfile(m.to_string()));
        if !(self.omega_i.is_finite() && self.omega_i > 0.0) {
            return bad("omega_i must be positive and finite");
        }
        if !(self.omega_f.is_finite() && self.omega_f > 0.0) {
            return bad("omega_f must be positive and finite");
        }
        if !(self.t_a.is_finite() && self.t_b.is_finite()) {
            return bad("t_a and t_b must be finite");
        }
        if self.t_b <= self.t_a {
            return bad("t_b must exceed t_a");
        }
        if self.t_a < 0.0 {
            return bad("t_a must not precede the initial time 0");
        }
        if !(self.shift.is_finite() && self.shift >= 0.0) {
            return bad("shift must be finite and non-negative");
        }
        match &self.shape {
            Shape::Constant if self.omega_i != self.omega_f => {
                bad("constant profile needs omega_i == omega_f")
            }
            Shape::SineSquared { n } if n % 2 == 0 => {
                bad("sine-squared profile needs an odd n")
            }
            _ => Ok(()),
        }
    }

    pub fn duration(&self) -> f64 {
        self.t_b - self.t_a
    }

    /// Start of the transition including the shift.
    pub fn start(&self) -> f64 {
        self.t_a + self.shift
    }

    /// End of the transition including the shift.
    pub fn end(&self) -> f64 {
        self.t_b + self.shift
    }

    /// True when ω² never leaves ω_i², so the mode evolves in closed form.
    pub fn is_trivial(&self) -> bool {
        match self.shape {
            Shape::Constant => true,
            Shape::Custom { ref table } => table.values().iter().all(|&v| v == table.values()[0]),
            _ => self.omega_i == self.omega_f,
        }
    }

    pub fn eval_omega_sq(&self, t: f64) -> f64 {
        let wi2 = self.omega_i * self.omega_i;
        let wf2 = self.omega_f * self.omega_f;
        if let Shape::Custom { table } = &self.shape {
            return table.eval(t - self.shift);
        }
        if let Shape::Constant = self.shape {
            return wi2;
        }
        let u = ((t - self.shift) - self.t_a) / (self.t_b - self.t_a);
        if u <= 0.0 {
            return wi2;
        }
        if u >= 1.0 {
            return wf2;
        }
        let dw = wf2 - wi2;
        match self.shape {
            Shape::PiecewiseLinear => wi2 + dw * u,
            Shape::SineSquared { n } => {
                let s = (u * f64::from(n) * PI / 2.0).sin();
                wi2 + dw * s * s
            }
            Shape::SmoothSeptic => wi2 + dw * septic_step(u),
            Shape::Constant | Shape::Custom { .. } => unreachable!(),
        }
    }

    /// Times in the open transition window where ω²(t) may lose smoothness,
    /// besides the window ends themselves.
    pub fn interior_breakpoints(&self) -> Vec<f64> {
        match &self.shape {
            Shape::Custom { table } => {
                let t = table.times();
                t[1..t.len() - 1].iter().map(|&x| x + self.shift).collect()
            }
            _ => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ContinuityOrder {
    /// Derivatives 0..=k agree on both sides.
    Order(u32),
    Smooth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SmoothnessReport {
    pub continuity_order_at_ta: ContinuityOrder,
    pub continuity_order_at_tb: ContinuityOrder,
}

const MAX_ORDER_CHECKED: u32 = 6;

/// Estimates how many one-sided derivatives of ω²(t) agree across each
/// junction. A derivative counts as continuous when the one-sided estimates
/// approach each other linearly as the step halves.
pub fn smoothness_report(profile: &ParametricProfile) -> SmoothnessReport {
    if profile.is_trivial() {
        return SmoothnessReport {
            continuity_order_at_ta: ContinuityOrder::Smooth,
            continuity_order_at_tb: ContinuityOrder::Smooth,
        };
    }
    SmoothnessReport {
        continuity_order_at_ta: junction_order(profile, profile.start()),
        continuity_order_at_tb: junction_order(profile, profile.end()),
    }
}

fn junction_order(p: &ParametricProfile, tj: f64) -> ContinuityOrder {
    let dur = p.duration();
    let scale0 = (p.omega_f * p.omega_f - p.omega_i * p.omega_i).abs().max(1e-300);
    let h = 1e-2 * dur;
    if p.eval_omega_sq(tj - 1e-12 * dur.max(1.0)) - p.eval_omega_sq(tj + 1e-12 * dur.max(1.0))
        > 1e-9 * scale0
    {
        return ContinuityOrder::Order(0);
    }
    let mut order = 0;
    for k in 1..=MAX_ORDER_CHECKED {
        let scale = scale0 / dur.powi(k as i32);
        let j1 = derivative_jump(p, tj, k, h);
        let j2 = derivative_jump(p, tj, k, h / 2.0);
        let continuous = j1 < 1e-7 * scale || j2 / j1 < 0.75;
        if !continuous {
            return ContinuityOrder::Order(order);
        }
        order = k;
    }
    ContinuityOrder::Smooth
}

fn derivative_jump(p: &ParametricProfile, tj: f64, k: u32, h: f64) -> f64 {
    let one_sided = |dir: f64| {
        let mut acc = 0.0;
        let mut binom = 1.0;
        for i in 0..=k {
            let sign = if (k - i) % 2 == 0 { 1.0 } else { -1.0 };
            acc += sign * binom * p.eval_omega_sq(tj + dir * f64::from(i) * h);
            binom = binom * f64::from(k - i) / f64::from(i + 1);
        }
        acc * dir.powi(k as i32) / h.powi(k as i32)
    };
    (one_sided(1.0) - one_sided(-1.0)).abs()
}

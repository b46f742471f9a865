//! Response functions of the damped atom and the free field, and the
//! thermal/squeeze weights that multiply them in spectral integrals.
//!
//! Fourier convention: f(t) = ∫ dω/2π f̃(ω) e^{−iωt}.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AtomParams {
    pub m: f64,
    pub gamma: f64,
    pub omega_r: f64,
}

impl AtomParams {
    pub fn new(m: f64, gamma: f64, omega_r: f64) -> Result<Self> {
        let a = Self { m, gamma, omega_r };
        a.validate()?;
        Ok(a)
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |v: f64| v.is_finite() && v > 0.0;
        if !pos(self.m) {
            return Err(Error::InvalidArgument("atom mass must be positive".into()));
        }
        if !pos(self.gamma) {
            return Err(Error::InvalidArgument("damping gamma must be positive".into()));
        }
        if !pos(self.omega_r) {
            return Err(Error::InvalidArgument("omega_r must be positive".into()));
        }
        if self.gamma >= self.omega_r {
            return Err(Error::InvalidArgument("gamma must be below omega_r (underdamped)".into()));
        }
        Ok(())
    }

    /// e² = 8πγm.
    pub fn coupling_sq(&self) -> f64 {
        8.0 * PI * self.gamma * self.m
    }

    /// Ω = √(ω_R² − γ²).
    pub fn damped_frequency(&self) -> f64 {
        (self.omega_r * self.omega_r - self.gamma * self.gamma).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Temperature {
    Zero,
    /// Inverse temperature β.
    Finite(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BathSpec {
    pub temperature: Temperature,
    pub eta: f64,
    pub theta: f64,
}

impl BathSpec {
    pub fn new(temperature: Temperature, eta: f64, theta: f64) -> Result<Self> {
        let b = Self { temperature, eta, theta };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        if let Temperature::Finite(beta) = self.temperature {
            if !(beta.is_finite() && beta > 0.0) {
                return Err(Error::InvalidArgument("beta_T must be positive".into()));
            }
        }
        if !(self.eta.is_finite() && self.eta >= 0.0) {
            return Err(Error::InvalidArgument("eta must be non-negative".into()));
        }
        if !self.theta.is_finite() {
            return Err(Error::InvalidArgument("theta must be finite".into()));
        }
        Ok(())
    }

    pub fn cosh2eta(&self) -> f64 {
        (2.0 * self.eta).cosh()
    }

    pub fn sinh2eta(&self) -> f64 {
        (2.0 * self.eta).sinh()
    }
}

/// G̃(ω) = 1 / [m(ω_R² − ω² − 2iγω)], transform of e^{−γτ} sin Ωτ /(mΩ) θ(τ).
pub fn chi_retarded_ft(atom: &AtomParams, omega: f64) -> Complex64 {
    chi_retarded_complex(atom, Complex64::new(omega, 0.0))
}

/// Same rational function continued to complex frequency.
pub fn chi_retarded_complex(atom: &AtomParams, w: Complex64) -> Complex64 {
    let den = Complex64::new(atom.omega_r * atom.omega_r, 0.0)
        - w * w
        - Complex64::new(0.0, 2.0 * atom.gamma) * w;
    (den * atom.m).inv()
}

/// Time-domain retarded kernel, zero for τ < 0.
pub fn chi_retarded_time(atom: &AtomParams, tau: f64) -> f64 {
    if tau < 0.0 {
        return 0.0;
    }
    let om = atom.damped_frequency();
    (-atom.gamma * tau).exp() * (om * tau).sin() / (atom.m * om)
}

/// G̃(r; ω) = e^{iωr}/(4πr).
pub fn field_retarded_ft(r: f64, omega: f64) -> Result<Complex64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidArgument("field point distance must be positive".into()));
    }
    Ok(Complex64::from_polar(1.0 / (4.0 * PI * r), omega * r))
}

/// coth(βω/2), or sgn ω at zero temperature. Undefined at ω = 0.
pub fn thermal_factor(temp: Temperature, omega: f64) -> Result<f64> {
    if omega == 0.0 {
        return Err(Error::InvalidArgument("thermal factor is singular at omega = 0".into()));
    }
    Ok(match temp {
        Temperature::Zero => omega.signum(),
        Temperature::Finite(beta) => 1.0 / (0.5 * beta * omega).tanh(),
    })
}

/// ω coth(βω/2), continued to 2/β at ω = 0; |ω| at zero temperature.
pub fn omega_thermal_factor(temp: Temperature, omega: f64) -> f64 {
    match temp {
        Temperature::Zero => omega.abs(),
        Temperature::Finite(beta) => {
            let x = 0.5 * beta * omega;
            if x.abs() < 1e-4 {
                // x coth x = 1 + x²/3 − x⁴/45
                let x2 = x * x;
                2.0 / beta * (1.0 + x2 / 3.0 - x2 * x2 / 45.0)
            } else {
                omega / x.tanh()
            }
        }
    }
}

/// (ρ_ST, ρ_NS) = (cosh 2η, sinh 2η) × coth(βω/2).
pub fn spectral_kernels(bath: &BathSpec, omega: f64) -> Result<(f64, f64)> {
    let c = thermal_factor(bath.temperature, omega)?;
    Ok((bath.cosh2eta() * c, bath.sinh2eta() * c))
}

/// Hadamard spectrum of the atom at late times: cosh 2η coth(βω/2) Im G̃(ω).
pub fn hadamard_chi(atom: &AtomParams, bath: &BathSpec, omega: f64) -> Result<f64> {
    let (rho_st, _) = spectral_kernels(bath, omega)?;
    Ok(rho_st * chi_retarded_ft(atom, omega).im)
}

/// Bose occupation 1/(e^{βω} − 1); zero at zero temperature.
pub fn bose_occupation(temp: Temperature, omega: f64) -> f64 {
    match temp {
        Temperature::Zero => 0.0,
        Temperature::Finite(beta) => 1.0 / (beta * omega).exp_m1(),
    }
}

/// Second moments of a two-mode squeezed thermal state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SecondMoments {
    pub a1_a1: Complex64,
    pub a2_a2: Complex64,
    pub a1dag_a1: f64,
    pub a1_a1dag: f64,
    pub a2dag_a2: f64,
    pub a2_a2dag: f64,
    pub a1_a2: Complex64,
    pub a1dag_a2dag: Complex64,
}

impl SecondMoments {
    /// Coefficient of the stationary part of the symmetrized correlator,
    /// ⟨{a₁, a₁†}⟩ for equal occupations.
    pub fn stationary_weight(&self) -> f64 {
        self.a1dag_a1 + self.a1_a1dag
    }

    /// Magnitude of the pair-correlation weight, 2|⟨a₁a₂⟩|.
    pub fn pair_weight(&self) -> f64 {
        2.0 * self.a1_a2.norm()
    }
}

pub fn tmst_expectations(bath: &BathSpec, nbar1: f64, nbar2: f64) -> Result<SecondMoments> {
    if !(nbar1 >= 0.0 && nbar2 >= 0.0 && nbar1.is_finite() && nbar2.is_finite()) {
        return Err(Error::InvalidArgument("occupations must be non-negative".into()));
    }
    let (ch, sh) = (bath.eta.cosh(), bath.eta.sinh());
    let (c2, s2) = (ch * ch, sh * sh);
    let pair = -Complex64::from_polar(1.0, bath.theta) * 0.5 * (nbar1 + nbar2 + 1.0) * bath.sinh2eta();
    Ok(SecondMoments {
        a1_a1: Complex64::new(0.0, 0.0),
        a2_a2: Complex64::new(0.0, 0.0),
        a1dag_a1: nbar1 * c2 + (nbar2 + 1.0) * s2,
        a1_a1dag: (nbar1 + 1.0) * c2 + nbar2 * s2,
        a2dag_a2: nbar2 * c2 + (nbar1 + 1.0) * s2,
        a2_a2dag: (nbar2 + 1.0) * c2 + nbar1 * s2,
        a1_a2: pair,
        a1dag_a2dag: pair.conj(),
    })
}

//! Late-time energy flux ⟨ΔT_tr⟩ and energy density ⟨ΔT_tt⟩ of the field
//! radiated by a damped atom immersed in a two-mode squeezed thermal field.
//!
//! Stationary parts carry cosh 2η, nonstationary parts sinh 2η and the
//! phase e^{−2iωt+iθ}. Each nonstationary part is returned as 2 Re Z for a
//! complex amplitude Z; |Z| is the envelope of the oscillating signal.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::atomfield::{
    chi_retarded_ft, field_retarded_ft, omega_thermal_factor, AtomParams, BathSpec, Temperature,
};
use crate::error::{Error, Result};
use crate::quadrature::{gauss_kronrod, half_line, half_line_from, Estimate, QuadConfig};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn cplx(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Upper frequency of the resolved band, max(40 ω_R, 60 / min(r, 1/γ)).
pub fn frequency_cutoff(atom: &AtomParams, r: f64) -> f64 {
    (40.0 * atom.omega_r).max(60.0 / r.min(1.0 / atom.gamma))
}

fn check_inputs(atom: &AtomParams, bath: &BathSpec, r: f64) -> Result<()> {
    atom.validate()?;
    bath.validate()?;
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidArgument("distance r must be positive".into()));
    }
    Ok(())
}

fn check_retarded(r: f64, t: f64) -> Result<()> {
    if !(t > r) || !t.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "observation time {t} must exceed the distance {r} (outside the light cone)"
        )));
    }
    Ok(())
}

/// coth(βω/2) for ω > 0; 1 at zero temperature.
fn weight(temp: Temperature, w: f64) -> f64 {
    omega_thermal_factor(temp, w) / w
}

/// |G̃_φ|² = 1/(16π² r²).
fn field_sq(r: f64) -> f64 {
    1.0 / (16.0 * PI * PI * r * r)
}

/// Re G̃ · G̃/G̃*, the combination the dissipation identity produces.
fn re_phase_chi(atom: &AtomParams, w: f64) -> Complex64 {
    let g = chi_retarded_ft(atom, w);
    g.re * g / g.conj()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StationaryFlux {
    pub rr: f64,
    pub hr: f64,
    pub error: f64,
    pub cutoff: f64,
}

/// Stationary flux from the radiation-radiation and cross correlators, each
/// integrated over [−ω_c, ω_c]. Each part grows like ln ω_c on its own.
pub fn flux_stationary(
    atom: &AtomParams,
    bath: &BathSpec,
    r: f64,
    cfg: &QuadConfig,
) -> Result<StationaryFlux> {
    check_inputs(atom, bath, r)?;
    let cut = frequency_cutoff(atom, r);
    let temp = bath.temperature;
    let wr = atom.omega_r;
    let pts = [-cut, -wr, 0.0, wr, cut];
    let pre = -atom.coupling_sq() * bath.cosh2eta() * field_sq(r) / (2.0 * PI);

    let rr = gauss_kronrod(
        |w| cplx(omega_thermal_factor(temp, w) * w * chi_retarded_ft(atom, w).im),
        &pts,
        cfg,
    )?;
    let hr = gauss_kronrod(
        |w| I * omega_thermal_factor(temp, w) * w * chi_retarded_ft(atom, w),
        &pts,
        cfg,
    )?;
    Ok(StationaryFlux {
        rr: pre * rr.value.re,
        hr: pre * hr.value.re,
        error: pre.abs() * (rr.error + hr.error + rr.value.im.abs() + hr.value.im.abs()),
        cutoff: cut,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Scalar {
    pub value: f64,
    pub error: f64,
}

/// Stationary energy-density residual; independent of t.
pub fn density_stationary(atom: &AtomParams, bath: &BathSpec, r: f64, cfg: &QuadConfig) -> Result<Scalar> {
    check_inputs(atom, bath, r)?;
    let cut = frequency_cutoff(atom, r);
    let temp = bath.temperature;
    let f = |w: f64| {
        let x = chi_retarded_ft(atom, w) * Complex64::from_polar(1.0, 2.0 * w * r);
        cplx(omega_thermal_factor(temp, w) * (x.re / r - x.im / (2.0 * r * r * w)))
    };
    let est = half_line(f, 2.0 * r, cut, &[atom.omega_r], cfg)?;
    // integrand is even in ω: the full line is twice the half line
    let pre = -atom.coupling_sq() * bath.cosh2eta() * field_sq(r) / (2.0 * PI) * 2.0;
    Ok(Scalar { value: pre * est.value.re, error: pre.abs() * est.error })
}

/// ∫_0^∞ f(ω) e^{−iκω} dω.
fn fourier(
    atom: &AtomParams,
    r: f64,
    kappa: f64,
    f: impl Fn(f64) -> Complex64,
    cfg: &QuadConfig,
) -> Result<Estimate> {
    let g = |w: f64| f(w) * Complex64::from_polar(1.0, -kappa * w);
    half_line(g, kappa, frequency_cutoff(atom, r), &[atom.omega_r], cfg)
}

/// Complex amplitude Z with value 2 Re Z.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Amplitude {
    pub z: Complex64,
    pub error: f64,
}

impl Amplitude {
    pub fn value(&self) -> f64 {
        2.0 * self.z.re
    }

    pub fn envelope(&self) -> f64 {
        2.0 * self.z.norm()
    }

    fn from(est: Estimate, pre: Complex64) -> Self {
        Self { z: est.value * pre, error: 2.0 * est.error * pre.norm() }
    }
}

fn ns_prefactor(bath: &BathSpec, r: f64) -> Complex64 {
    bath.sinh2eta() * field_sq(r) / (2.0 * PI) * Complex64::from_polar(1.0, bath.theta)
}

/// Radiation-radiation nonstationary flux.
pub fn flux_ns_rr(atom: &AtomParams, bath: &BathSpec, r: f64, t: f64, cfg: &QuadConfig) -> Result<Amplitude> {
    check_inputs(atom, bath, r)?;
    check_retarded(r, t)?;
    let e2 = atom.coupling_sq();
    let temp = bath.temperature;
    let s = t - r;
    let est = fourier(
        atom,
        r,
        2.0 * s,
        |w| {
            let g = chi_retarded_ft(atom, w);
            weight(temp, w) * w * w * (I * w - 1.0 / r) * g * g
        },
        cfg,
    )?;
    Ok(Amplitude::from(est, I * e2 * e2 / (4.0 * PI) * ns_prefactor(bath, r)))
}

/// Cross-term nonstationary flux.
pub fn flux_ns_hr(atom: &AtomParams, bath: &BathSpec, r: f64, t: f64, cfg: &QuadConfig) -> Result<Amplitude> {
    check_inputs(atom, bath, r)?;
    check_retarded(r, t)?;
    let e2 = atom.coupling_sq();
    let temp = bath.temperature;
    let s = t - r;
    let retarded = fourier(
        atom,
        r,
        2.0 * s,
        |w| weight(temp, w) * w * (w + I / r) * chi_retarded_ft(atom, w),
        cfg,
    )?;
    let local = fourier(atom, r, 2.0 * t, |w| weight(temp, w) * w * chi_retarded_ft(atom, w), cfg)?;
    let est = retarded + local * (-I / r);
    Ok(Amplitude::from(est, I * e2 * ns_prefactor(bath, r)))
}

/// Sum of the ω-proportional pieces of both flux parts, regrouped with the
/// dissipation identity.
pub fn flux_ns_combined(
    atom: &AtomParams,
    bath: &BathSpec,
    r: f64,
    t: f64,
    cfg: &QuadConfig,
) -> Result<Amplitude> {
    check_inputs(atom, bath, r)?;
    check_retarded(r, t)?;
    let e2 = atom.coupling_sq();
    let temp = bath.temperature;
    let est = fourier(atom, r, 2.0 * (t - r), |w| weight(temp, w) * w * w * re_phase_chi(atom, w), cfg)?;
    Ok(Amplitude::from(est, I * e2 * ns_prefactor(bath, r)))
}

/// The remaining 1/r pieces, so that rr + hr = combined + this.
pub fn flux_ns_inverse_r(
    atom: &AtomParams,
    bath: &BathSpec,
    r: f64,
    t: f64,
    cfg: &QuadConfig,
) -> Result<Amplitude> {
    check_inputs(atom, bath, r)?;
    check_retarded(r, t)?;
    let e2 = atom.coupling_sq();
    let temp = bath.temperature;
    let retarded = fourier(atom, r, 2.0 * (t - r), |w| weight(temp, w) * w * re_phase_chi(atom, w), cfg)?;
    let local = fourier(atom, r, 2.0 * t, |w| weight(temp, w) * w * chi_retarded_ft(atom, w), cfg)?;
    let est = retarded + local * cplx(-1.0);
    Ok(Amplitude::from(est, cplx(-e2 / r) * ns_prefactor(bath, r)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NonstationaryFlux {
    pub rr: f64,
    pub hr: f64,
    pub combined_leading: f64,
    pub inverse_r: f64,
    pub combined_envelope: f64,
    pub error: f64,
}

pub fn flux_nonstationary(
    atom: &AtomParams,
    bath: &BathSpec,
    r: f64,
    t: f64,
    cfg: &QuadConfig,
) -> Result<NonstationaryFlux> {
    let rr = flux_ns_rr(atom, bath, r, t, cfg)?;
    let hr = flux_ns_hr(atom, bath, r, t, cfg)?;
    let comb = flux_ns_combined(atom, bath, r, t, cfg)?;
    let inv = flux_ns_inverse_r(atom, bath, r, t, cfg)?;
    Ok(NonstationaryFlux {
        rr: rr.value(),
        hr: hr.value(),
        combined_leading: comb.value(),
        inverse_r: inv.value(),
        combined_envelope: comb.envelope(),
        error: rr.error + hr.error + comb.error + inv.error,
    })
}

/// Nonstationary energy density. The retarded and local pieces are each
/// singular like 1/ω at zero frequency at finite temperature; the sum is
/// regular, so the low band is integrated with both phases together.
pub fn density_ns_amplitude(
    atom: &AtomParams,
    bath: &BathSpec,
    r: f64,
    t: f64,
    cfg: &QuadConfig,
) -> Result<Amplitude> {
    check_inputs(atom, bath, r)?;
    check_retarded(r, t)?;
    if bath.eta == 0.0 {
        return Ok(Amplitude { z: cplx(0.0), error: 0.0 });
    }
    let temp = bath.temperature;
    let r2 = r * r;
    let s = t - r;
    let retarded = |w: f64| weight(temp, w) * (w * w + I * w / r - 1.0 / (2.0 * r2)) * re_phase_chi(atom, w);
    let local = |w: f64| weight(temp, w) * chi_retarded_ft(atom, w) / (2.0 * r2);
    let split = 0.25 * atom.omega_r;
    let low = gauss_kronrod(
        |w| {
            retarded(w) * Complex64::from_polar(1.0, -2.0 * s * w)
                + local(w) * Complex64::from_polar(1.0, -2.0 * t * w)
        },
        &[0.0, split],
        cfg,
    )?;
    let cut = frequency_cutoff(atom, r);
    let features = [atom.omega_r];
    let ret_hi = half_line_from(
        |w| retarded(w) * Complex64::from_polar(1.0, -2.0 * s * w),
        split,
        2.0 * s,
        cut,
        &features,
        cfg,
    )?;
    let loc_hi = half_line_from(
        |w| local(w) * Complex64::from_polar(1.0, -2.0 * t * w),
        split,
        2.0 * t,
        cut,
        &features,
        cfg,
    )?;
    Ok(Amplitude::from(low + ret_hi + loc_hi, -I * atom.coupling_sq() * ns_prefactor(bath, r)))
}

pub fn density_nonstationary(
    atom: &AtomParams,
    bath: &BathSpec,
    r: f64,
    t: f64,
    cfg: &QuadConfig,
) -> Result<Scalar> {
    let a = density_ns_amplitude(atom, bath, r, t, cfg)?;
    Ok(Scalar { value: a.value(), error: a.error })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NonstationaryPower {
    pub p_xi_ns: f64,
    pub p_gamma_ns: f64,
    pub error: f64,
}

/// Power delivered by the field fluctuations and power lost to dissipation,
/// nonstationary parts at late time t.
pub fn power_nonstationary(atom: &AtomParams, bath: &BathSpec, t: f64, cfg: &QuadConfig) -> Result<NonstationaryPower> {
    atom.validate()?;
    bath.validate()?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument("time must be positive".into()));
    }
    let e2 = atom.coupling_sq();
    let temp = bath.temperature;
    let cut = 40.0 * atom.omega_r;
    let rot = Complex64::from_polar(bath.sinh2eta(), bath.theta);
    let xi = half_line(
        |w| weight(temp, w) * w * w * chi_retarded_ft(atom, w) * Complex64::from_polar(1.0, -2.0 * t * w),
        2.0 * t,
        cut,
        &[atom.omega_r],
        cfg,
    )?;
    let gam = half_line(
        |w| {
            let g = chi_retarded_ft(atom, w);
            weight(temp, w) * w * w * w * g * g * Complex64::from_polar(1.0, -2.0 * t * w)
        },
        2.0 * t,
        cut,
        &[atom.omega_r],
        cfg,
    )?;
    let xi_pre = e2 / (4.0 * PI * PI);
    let gam_pre = e2 * e2 / (2.0 * PI * 16.0 * PI * PI) * 2.0;
    Ok(NonstationaryPower {
        p_xi_ns: -xi_pre * (rot * xi.value).im,
        p_gamma_ns: -gam_pre * (rot * gam.value).re,
        error: xi_pre * rot.norm() * xi.error + gam_pre * rot.norm() * gam.error,
    })
}

/// Integrand (per dω/2π) of the ω-proportional term of the cross flux,
/// built from the field propagator, without the conjugate partner.
pub fn flux_hr_omega_integrand(atom: &AtomParams, bath: &BathSpec, r: f64, t: f64, w: f64) -> Result<Complex64> {
    let gf = field_retarded_ft(r, w)?;
    let rho = bath.sinh2eta() * weight(bath.temperature, w);
    let phase = Complex64::from_polar(1.0, -2.0 * w * t + bath.theta);
    Ok(I * atom.coupling_sq() * w * rho * chi_retarded_ft(atom, w) * gf * w * gf * phase)
}

/// Integrand (per dω/2π) of the ω³ term of the radiation flux.
pub fn flux_rr_omega_integrand(atom: &AtomParams, bath: &BathSpec, r: f64, t: f64, w: f64) -> Result<Complex64> {
    let gf = field_retarded_ft(r, w)?;
    let e2 = atom.coupling_sq();
    let rho = bath.sinh2eta() * weight(bath.temperature, w);
    let phase = Complex64::from_polar(1.0, -2.0 * w * t + bath.theta);
    let gg = chi_retarded_ft(atom, w) * gf;
    Ok(I * e2 * e2 * w * w / (4.0 * PI) * rho * (I * w) * gg * gg * phase)
}

/// Integrand (per dω/2π) of the fluctuation-power term, without its
/// conjugate partner.
pub fn power_xi_integrand(atom: &AtomParams, bath: &BathSpec, t: f64, w: f64) -> Complex64 {
    let rho = bath.sinh2eta() * weight(bath.temperature, w);
    let phase = Complex64::from_polar(1.0, -2.0 * w * t + bath.theta);
    I * atom.coupling_sq() * w * w / (4.0 * PI) * rho * chi_retarded_ft(atom, w) * phase
}

/// Integrand (per dω/2π) of the dissipated-power term, without its
/// conjugate partner.
pub fn power_gamma_integrand(atom: &AtomParams, bath: &BathSpec, t: f64, w: f64) -> Complex64 {
    let e2 = atom.coupling_sq();
    let rho = bath.sinh2eta() * weight(bath.temperature, w);
    let phase = Complex64::from_polar(1.0, -2.0 * w * t + bath.theta);
    let g = chi_retarded_ft(atom, w);
    -e2 * e2 * w * w * w / (16.0 * PI * PI) * rho * g * g * phase
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContinuityReport {
    pub time_derivative: f64,
    pub divergence: f64,
    pub residual: f64,
    /// |residual| / max(|∂_t T_tt|, |r⁻² ∂_r(r² T_rt)|).
    pub normalized: f64,
    pub degenerate: bool,
}

/// ∂_t T_tt − r⁻² ∂_r (r² T_rt) for the nonstationary parts by central
/// differences.
pub fn continuity_check(
    atom: &AtomParams,
    bath: &BathSpec,
    r: f64,
    t: f64,
    h_r: f64,
    h_t: f64,
    cfg: &QuadConfig,
) -> Result<ContinuityReport> {
    check_inputs(atom, bath, r)?;
    if !(h_r > 0.0 && h_t > 0.0) {
        return Err(Error::InvalidArgument("finite-difference steps must be positive".into()));
    }
    if !(r > h_r) || !(t - r > h_t + h_r) {
        return Err(Error::InvalidArgument("steps too large for the evaluation point".into()));
    }
    if bath.eta == 0.0 {
        return Ok(ContinuityReport {
            time_derivative: 0.0,
            divergence: 0.0,
            residual: 0.0,
            normalized: 0.0,
            degenerate: true,
        });
    }
    let tt = |tt: f64| density_nonstationary(atom, bath, r, tt, cfg).map(|s| s.value);
    let flux = |rr: f64| -> Result<f64> {
        let a = flux_ns_rr(atom, bath, rr, t, cfg)?.value();
        let b = flux_ns_hr(atom, bath, rr, t, cfg)?.value();
        Ok(rr * rr * (a + b))
    };
    let dt = (tt(t + h_t)? - tt(t - h_t)?) / (2.0 * h_t);
    let dr = (flux(r + h_r)? - flux(r - h_r)?) / (2.0 * h_r) / (r * r);
    let residual = dt - dr;
    let scale = dt.abs().max(dr.abs());
    let degenerate = scale == 0.0;
    Ok(ContinuityReport {
        time_derivative: dt,
        divergence: dr,
        residual,
        normalized: if degenerate { 0.0 } else { residual.abs() / scale },
        degenerate,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StressTensorComponents {
    pub r: f64,
    pub t: f64,
    pub tr_st_rr: f64,
    pub tr_st_hr: f64,
    pub tr_ns_rr: f64,
    pub tr_ns_hr: f64,
    pub tt_st_total: f64,
    pub tt_ns_total: f64,
    pub quadrature_error: f64,
}

pub fn stress_tensor(
    atom: &AtomParams,
    bath: &BathSpec,
    r: f64,
    t: f64,
    cfg: &QuadConfig,
) -> Result<StressTensorComponents> {
    let st = flux_stationary(atom, bath, r, cfg)?;
    let rr = flux_ns_rr(atom, bath, r, t, cfg)?;
    let hr = flux_ns_hr(atom, bath, r, t, cfg)?;
    let tts = density_stationary(atom, bath, r, cfg)?;
    let ttn = density_nonstationary(atom, bath, r, t, cfg)?;
    Ok(StressTensorComponents {
        r,
        t,
        tr_st_rr: st.rr,
        tr_st_hr: st.hr,
        tr_ns_rr: rr.value(),
        tr_ns_hr: hr.value(),
        tt_st_total: tts.value,
        tt_ns_total: ttn.value,
        quadrature_error: st.error + rr.error + hr.error + tts.error + ttn.error,
    })
}

/// Least-squares slope of ln(envelope) against time.
pub fn log_envelope_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 || points.iter().any(|&(_, e)| !(e > 0.0)) {
        return Err(Error::InvalidArgument("need at least two positive envelope samples".into()));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1.ln()).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1.ln() - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom() -> AtomParams {
        AtomParams::new(1.0, 0.2, 1.0).unwrap()
    }

    #[test]
    fn zero_squeezing_kills_nonstationary_parts() {
        let b = BathSpec::new(Temperature::Zero, 0.0, 0.0).unwrap();
        let f = flux_nonstationary(&atom(), &b, 10.0, 15.0, &QuadConfig::default()).unwrap();
        assert_eq!((f.rr, f.hr, f.combined_leading), (0.0, 0.0, 0.0));
        let d = density_nonstationary(&atom(), &b, 10.0, 15.0, &QuadConfig::default()).unwrap();
        assert_eq!(d.value, 0.0);
        let p = power_nonstationary(&atom(), &b, 5.0, &QuadConfig::default()).unwrap();
        assert_eq!((p.p_xi_ns, p.p_gamma_ns), (0.0, 0.0));
    }

    #[test]
    fn requires_retarded_time() {
        let b = BathSpec::new(Temperature::Zero, 0.5, 0.0).unwrap();
        assert!(flux_ns_rr(&atom(), &b, 10.0, 9.0, &QuadConfig::default()).is_err());
    }

    #[test]
    fn finite_temperature_density_is_finite() {
        let b = BathSpec::new(Temperature::Finite(2.0), 0.5, 0.0).unwrap();
        let d = density_nonstationary(&atom(), &b, 10.0, 15.0, &QuadConfig::default()).unwrap();
        assert!(d.value.is_finite() && d.value != 0.0);
    }

    #[test]
    fn slope_of_pure_exponential() {
        let pts: Vec<(f64, f64)> = (0..10).map(|k| (f64::from(k), (-0.4 * f64::from(k)).exp())).collect();
        assert!((log_envelope_slope(&pts).unwrap() + 0.4).abs() < 1e-12);
    }
}

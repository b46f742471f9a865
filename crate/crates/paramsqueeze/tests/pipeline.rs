use paramsqueeze::atomfield::{AtomParams, BathSpec, Temperature};
use paramsqueeze::mode_evolution::SolverConfig;
use paramsqueeze::observables::{
    continuity_check, density_nonstationary, power_nonstationary, stress_tensor,
};
use paramsqueeze::profiles::ParametricProfile;
use paramsqueeze::quadrature::QuadConfig;
use paramsqueeze::squeeze::squeeze_at;
use paramsqueeze::sweeps::{run_sweep, spectral_sweep, strictly_decreasing, SweepAxis, SweepSpec};

fn atom() -> AtomParams {
    AtomParams::new(1.0, 0.2, 1.0).unwrap()
}

#[test]
fn linear_ramp_samples() {
    let p = ParametricProfile::piecewise_linear(3.0, 8.0, 10.0, 20.0).unwrap();
    assert_eq!(p.eval_omega_sq(10.0), 9.0);
    assert_eq!(p.eval_omega_sq(15.0), 36.5);
    assert_eq!(p.eval_omega_sq(25.0), 64.0);
}

#[test]
fn equal_frequencies_give_no_squeezing() {
    let p = ParametricProfile::sine_squared(2.0, 2.0, 1.0, 3.0, 1).unwrap();
    let sq = squeeze_at(&p, 5.0, &SolverConfig::default()).unwrap();
    assert_eq!(sq.eta, 0.0);
    assert!(sq.phase_undefined);
}

#[test]
fn sweeps_are_bit_reproducible() {
    let spec = SweepSpec {
        template: ParametricProfile::sine_squared(3.0, 8.0, 10.0, 11.0, 11).unwrap(),
        axis: SweepAxis::EndTime,
        range: (10.5, 19.5),
        samples: 40,
        observation_time: 20.0,
        solver: SolverConfig::default(),
    };
    let a = run_sweep(&spec).unwrap();
    let b = run_sweep(&spec).unwrap();
    assert_eq!(a, b);
    assert!(a.windows(2).all(|w| w[0].axis_value < w[1].axis_value));
    for r in &a {
        assert!(r.residual_hyperbolic <= 1e-7 * r.cosh2eta);
    }
}

#[test]
fn failing_points_stay_in_the_table() {
    // a tiny step budget makes the long transitions fail
    let spec = SweepSpec {
        template: ParametricProfile::sine_squared(3.0, 8.0, 10.0, 11.0, 11).unwrap(),
        axis: SweepAxis::EndTime,
        range: (10.5, 19.5),
        samples: 5,
        observation_time: 20.0,
        solver: SolverConfig { max_steps: 60, ..SolverConfig::default() },
    };
    let rows = run_sweep(&spec).unwrap();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().any(|r| r.error.is_some() && r.eta.is_nan()));
}

#[test]
fn spectrum_falls_off_toward_the_adiabatic_end() {
    let p = ParametricProfile::smooth_septic(1.0, 2.0, 0.0, 2.0).unwrap();
    let rows = spectral_sweep(&p, (2.0, 12.0), 21, &SolverConfig::default()).unwrap();
    let etas: Vec<f64> = rows.iter().map(|r| r.eta).collect();
    assert!(strictly_decreasing(&etas));
    // a C³ transition falls off like a power of ω(t_b − t_a)
    assert!(etas[etas.len() - 1] < 1e-2 * etas[0]);
}

#[test]
fn nonstationary_density_dies_out() {
    let bath = BathSpec::new(Temperature::Zero, 0.7, 0.0).unwrap();
    let cfg = QuadConfig::default();
    let r = 10.0;
    let early = density_nonstationary(&atom(), &bath, r, r + 1.0 / 0.2, &cfg).unwrap().value;
    let late = density_nonstationary(&atom(), &bath, r, r + 40.0, &cfg).unwrap().value;
    assert!(late.abs() < 1e-3 * early.abs(), "{late} vs {early}");
}

#[test]
fn dissipated_power_decays() {
    let bath = BathSpec::new(Temperature::Finite(2.0), 0.7, 0.0).unwrap();
    let cfg = QuadConfig::default();
    let early = power_nonstationary(&atom(), &bath, 5.0, &cfg).unwrap();
    let late = power_nonstationary(&atom(), &bath, 40.0, &cfg).unwrap();
    assert!(late.p_gamma_ns.abs() < 1e-3 * early.p_gamma_ns.abs());
    assert!(late.p_xi_ns.abs() < 1e-3 * early.p_xi_ns.abs());
}

#[test]
fn continuity_without_squeezing_is_flagged() {
    let bath = BathSpec::new(Temperature::Zero, 0.0, 0.0).unwrap();
    let c = continuity_check(&atom(), &bath, 10.0, 25.0, 1e-2, 1e-2, &QuadConfig::default()).unwrap();
    assert!(c.degenerate);
    assert_eq!(c.normalized, 0.0);
}

#[test]
fn continuity_at_finite_temperature() {
    let bath = BathSpec::new(Temperature::Finite(2.0), 0.5, 1.1).unwrap();
    let c = continuity_check(&atom(), &bath, 8.0, 20.0, 1e-2, 1e-2, &QuadConfig::default()).unwrap();
    assert!(c.normalized < 1e-3, "{c:?}");
}

#[test]
fn stress_tensor_row_is_consistent() {
    let bath = BathSpec::new(Temperature::Finite(2.0), 0.5, 0.0).unwrap();
    let row = stress_tensor(&atom(), &bath, 10.0, 20.0, &QuadConfig::default()).unwrap();
    assert!((row.tr_st_rr + row.tr_st_hr).abs() <= row.quadrature_error.max(1e-8 * row.tr_st_rr.abs()));
    assert!(row.tt_ns_total.is_finite() && row.tt_st_total > 0.0);
}

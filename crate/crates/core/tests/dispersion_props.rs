use oscilkit_core::abraham_lorentz::{effective_oscillator, faulty_susceptibility, ALParams};
use oscilkit_core::dispersion::*;
use oscilkit_core::oscillator::*;
use oscilkit_core::Complex64;
use proptest::prelude::*;

fn fig2_params() -> OscillatorParams {
    OscillatorParams::new(1.0, 0.5f64.sqrt(), 0.5).unwrap()
}

fn cfg() -> QuadratureConfig {
    QuadratureConfig::for_scale(1.0, 3.0).unwrap()
}

#[test]
fn static_limit_of_transform() {
    let p = fig2_params();
    let t = kk_transform(|w| susceptibility(&p, w).im, 0.0, &cfg()).unwrap();
    assert!((t.value - 2.0).abs() < 1e-6 * 2.0, "{t:?}");
}

#[test]
fn transform_reproduces_reactive_part() {
    let p = fig2_params();
    let grid: Vec<f64> = (0..=60).map(|k| 0.05 * k as f64).collect();
    let report = kk_check(
        |w| susceptibility(&p, w).re,
        |w| susceptibility(&p, w).im,
        &grid,
        &cfg(),
        1e-3,
    )
    .unwrap();
    assert!(report.passed);
    assert!(
        report.max_abs_dev / p.static_susceptibility() < 1e-6,
        "{report:?}"
    );
}

#[test]
fn faulty_susceptibility_violates_kk() {
    let al = ALParams::from_tau_omega0(1.0, 2.0, 1.0).unwrap();
    let t = kk_transform(|w| faulty_susceptibility(&al, w).im, 0.0, &cfg()).unwrap();
    assert!((t.value - 0.5).abs() < 0.05, "{t:?}");
    assert_eq!(faulty_susceptibility(&al, 0.0).re, 1.0);
    let grid: Vec<f64> = (0..=30).map(|k| 0.1 * k as f64).collect();
    let report = kk_check(
        |w| faulty_susceptibility(&al, w).re,
        |w| faulty_susceptibility(&al, w).im,
        &grid,
        &cfg(),
        1e-3,
    )
    .unwrap();
    assert!(!report.passed);
    assert!(report.max_abs_dev >= 0.4);
}

#[test]
fn exact_al_susceptibility_obeys_kk() {
    let al = ALParams::from_tau_omega0(1.0, 2.0, 1.0).unwrap();
    let eff = effective_oscillator(&al).unwrap();
    assert!((eff.gamma() - 0.5).abs() < 1e-12);
    let grid: Vec<f64> = (0..=30).map(|k| 0.1 * k as f64).collect();
    let report = kk_check(
        |w| susceptibility(&eff.params, w).re,
        |w| susceptibility(&eff.params, w).im,
        &grid,
        &cfg(),
        1e-3,
    )
    .unwrap();
    assert!(report.passed, "{report:?}");
}

#[test]
fn zero_spectrum() {
    let report = kk_check(|_| 0.0, |_| 0.0, &[0.0, 1.0, 2.0], &cfg(), 1e-3).unwrap();
    assert_eq!(report.max_abs_dev, 0.0);
    assert!(report.passed);
    let z = numeric_flt(|_| 0.0, Complex64::new(1.0, 0.5), &cfg()).unwrap();
    assert_eq!(z.value, Complex64::new(0.0, 0.0));
}

#[test]
fn transform_is_linear() {
    let p1 = fig2_params();
    let p2 = OscillatorParams::new(2.0, 1.5, 0.2).unwrap();
    let c = QuadratureConfig::for_scale(0.2, 3.0).unwrap();
    let g1 = |w: f64| susceptibility(&p1, w).im;
    let g2 = |w: f64| susceptibility(&p2, w).im;
    for &w in &[0.0, 0.4, 1.5, 2.2] {
        let t1 = kk_transform(g1, w, &c).unwrap();
        let t2 = kk_transform(g2, w, &c).unwrap();
        let both = kk_transform(|x| 3.0 * g1(x) - 0.5 * g2(x), w, &c).unwrap();
        let expected = 3.0 * t1.value - 0.5 * t2.value;
        let tol = 3.0 * t1.error + 0.5 * t2.error + both.error + 1e-9 * expected.abs();
        assert!((both.value - expected).abs() <= tol, "w={w}");
    }
}

#[test]
fn boundary_values_from_both_half_planes() {
    // f′ ± i f″ as the limit of f̃(ω ± iη), Richardson-extrapolated to
    // second order in η
    let p = OscillatorParams::new(1.0, 1.0, 0.5).unwrap();
    let c = QuadratureConfig::new(1e-2, 200.0, 1e-10, 20000).unwrap();
    let chi_t = |t: f64| response_relaxation(&p, t).unwrap().chi().im;
    let flt = |z: Complex64| Complex64::new(0.0, 1.0) * numeric_flt(chi_t, z, &c).unwrap().value;
    for &w in &[0.3, 1.0, 1.8] {
        let exact = susceptibility(&p, w);
        for sign in [1.0, -1.0] {
            let eta = 2e-3 * sign;
            let f1 = flt(Complex64::new(w, eta));
            let f2 = flt(Complex64::new(w, 0.5 * eta));
            let f4 = flt(Complex64::new(w, 0.25 * eta));
            let limit = (8.0 * f4 - 6.0 * f2 + f1) / 3.0;
            let target = if sign > 0.0 { exact } else { exact.conj() };
            assert!((limit - target).norm() < 1e-5, "w={w} sign={sign}");
        }
    }
}

#[test]
fn sampled_spectrum_transform() {
    let p = fig2_params();
    let grid: Vec<f64> = (0..=3000).map(|k| -30.0 + 0.02 * k as f64).collect();
    let spectrum =
        SampledSpectrum::from_fn(grid, |w| Complex64::new(0.0, susceptibility(&p, w).im)).unwrap();
    let c = QuadratureConfig::for_scale(1.0, 3.0).unwrap();
    let t = kk_transform_sampled(&spectrum, 0.5, &c).unwrap();
    // beyond ±30 the spectrum is cut off: a relative loss of order Γ/30²
    let exact = susceptibility(&p, 0.5).re;
    assert!((t.value.im - exact).abs() < 2e-3 * exact.abs(), "{t:?}");
}

fn params_strategy() -> impl Strategy<Value = OscillatorParams> {
    (0.1f64..10.0, 0.1f64..10.0, 0.01f64..5.0)
        .prop_map(|(m, w, g)| OscillatorParams::new(m, w, g).unwrap())
}

proptest! {
    #[test]
    fn spectral_parities(p in params_strategy(), w in 0.0f64..20.0) {
        let a = susceptibility(&p, w);
        let b = susceptibility(&p, -w);
        prop_assert!((a.im + b.im).abs() <= 1e-10 * a.im.abs().max(f64::MIN_POSITIVE));
        let pa = relaxation_spectrum(&p, w);
        let pb = relaxation_spectrum(&p, -w);
        prop_assert!((pa - pb).abs() <= 1e-10 * pa);
    }

    #[test]
    fn kubo_spectral_identity(p in params_strategy(), w in -20.0f64..20.0) {
        let lhs = susceptibility(&p, w).im;
        let rhs = w * relaxation_spectrum(&p, w) / (p.mass() * p.omega() * p.omega());
        prop_assert!((lhs - rhs).abs() <= 1e-9 * lhs.abs().max(f64::MIN_POSITIVE));
    }

    #[test]
    fn kk_holds_for_random_oscillators(p in params_strategy(), x in 0.0f64..2.0) {
        let w = x * p.omega();
        let c = QuadratureConfig::for_scale(p.gamma().min(p.omega()), 2.0 * p.omega()).unwrap();
        let t = kk_transform_with_breakpoints(
            |v| susceptibility(&p, v).im, w, &c, &[p.omega(), -p.omega()],
        ).unwrap();
        let exact = susceptibility(&p, w).re;
        prop_assert!((t.value - exact).abs() <= 1e-3 * p.static_susceptibility(),
            "{} vs {}", t.value, exact);
    }
}

use core::f64::consts::PI;

use oscilkit_core::abraham_lorentz::effective_oscillator;
use oscilkit_core::cross_sections::*;
use oscilkit_core::dispersion::QuadratureConfig;
use oscilkit_core::oscillator::{absorbed_power, susceptibility, DriveField, OscillatorParams};
use oscilkit_core::quantum::*;
use proptest::prelude::*;

fn electron() -> PhysicalConstants {
    PhysicalConstants::si_electron(1e15).unwrap()
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs())
}

#[test]
fn f_sum_rule_independent_of_split() {
    let c = electron();
    let cfg = QuadratureConfig::new(1e-3, 1.0, 1e-10, 4000).unwrap();
    let g = c.gamma_rad();
    let mut ratios = Vec::new();
    for gp in [0.0, g, 10.0 * g] {
        let split = DampingSplit::radiative(&c, gp).unwrap();
        let check = f_sum_check(&split, &c, &cfg, DampingModel::Constant).unwrap();
        assert!((check.ratio() - 1.0).abs() < 5e-3, "{check:?}");
        ratios.push(check.ratio());
    }
    let spread = ratios
        .iter()
        .fold(0.0f64, |m, r| m.max((r - ratios[0]).abs()));
    assert!(spread < 1e-6, "{ratios:?}");
    // πe²/(2ε₀cm) for the electron
    let split = DampingSplit::radiative(&c, 0.0).unwrap();
    let check = f_sum_check(&split, &c, &cfg, DampingModel::Constant).unwrap();
    assert!(close(check.analytic, 1.67e-5, 0.01));
    let jackson = f_sum_check(&split, &c, &cfg, DampingModel::Jackson).unwrap();
    assert!((jackson.ratio() - 1.0).abs() > 5e-3, "{jackson:?}");
}

#[test]
fn f_sum_rule_independent_of_resonance() {
    for w0 in [1.0, 3.0, 1e15] {
        let c = PhysicalConstants::new(1.0, 1.0, 1e3 * w0, 1.0, 1.0, w0).unwrap();
        let cfg = QuadratureConfig::new(1e-3, 1.0, 1e-10, 4000).unwrap();
        let split = DampingSplit::radiative(&c, 0.05 * w0).unwrap();
        let check = f_sum_check(&split, &c, &cfg, DampingModel::Constant).unwrap();
        assert!((check.ratio() - 1.0).abs() < 5e-3, "w0={w0}: {check:?}");
    }
}

#[test]
fn absorption_matches_power_balance() {
    let c = electron();
    let split = DampingSplit::radiative(&c, 3.0 * c.gamma_rad()).unwrap();
    for x in [0.5, 0.999, 1.0, 1.0001, 2.0] {
        let w = x * c.omega0();
        let direct = sigma_abs(w, c.omega0(), &split, c.lambdabar0());
        let from_p = sigma_abs_from_power(w, &split, &c).unwrap();
        assert!(close(direct, from_p, 1e-10), "x={x}");
    }
}

#[test]
fn scattering_limits() {
    let c = electron();
    let w0 = c.omega0();
    let lb = c.lambdabar0();
    for gp in [0.0, c.gamma_rad()] {
        let split = DampingSplit::radiative(&c, gp).unwrap();
        let th = thomson_cross_section(&c);
        let hi = sigma_sc(100.0 * w0, w0, &split, &c);
        assert!((hi.value / th - 1.0).abs() < 2e-3);
        assert_eq!(hi.regime, Regime::Thomson);
        let peak = sigma_sc(w0, w0, &split, &c);
        let ratio = split.gamma_rad() / split.gamma_total();
        assert!(close(peak.value, 6.0 * PI * lb * lb * ratio * ratio, 1e-12));
        assert_eq!(peak.regime, Regime::Resonant);
        let low = sigma_sc(0.01 * w0, w0, &split, &c);
        assert!((low.value / th / 1e-8 - 1.0).abs() < 0.01);
        assert_eq!(low.regime, Regime::Rayleigh);
        assert_eq!(sigma_sc(2.0 * w0, w0, &split, &c).regime, Regime::Unlabeled);
    }
}

#[test]
fn resonant_forms() {
    let c = electron();
    let g = c.gamma_rad();
    let w0 = c.omega0();
    let none = DampingSplit::radiative(&c, 0.0).unwrap();
    let f = resonant_decomposition(w0 + g, w0, &none, &c);
    assert_eq!(f.sigma_r, 0.0);
    assert_eq!(f.sigma_abs, f.sigma_sc);
    let even = DampingSplit::radiative(&c, g).unwrap();
    let f = resonant_decomposition(w0, w0, &even, &c);
    assert!(close(f.sigma_abs / f.sigma_sc, 2.0, 1e-14));
    assert!(f.valid);
    assert!(!resonant_decomposition(2.0 * w0, w0, &even, &c).valid);
    // near resonance the Lorentzian tracks the full cross section
    let exact = sigma_abs(w0 + 0.5 * g, w0, &even, c.lambdabar0());
    let lorentz = resonant_decomposition(w0 + 0.5 * g, w0, &even, &c).sigma_abs;
    assert!(close(exact, lorentz, 1e-6));
}

#[test]
fn absorption_rate_examples() {
    let c = PhysicalConstants::new(1.0, 1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
    let osc = OscillatorParams::new(1.0, 1.0, 0.1).unwrap();
    let chi_im = susceptibility(&osc, 1.0).im;
    let rate = gamma_abs(1.0, 1.0, chi_im, &c);
    let p = absorbed_power(&osc, &DriveField::new(1.0, 1.0).unwrap());
    assert!(close(rate, p / 1.0, 1e-14));
    assert_eq!(gamma_abs(-1.0, 1.0, chi_im, &c), 0.0);
    let tiny = 1e-9;
    assert!(gamma_abs(tiny, 1.0, susceptibility(&osc, tiny).im, &c) < 1e-8);
}

#[test]
fn dipole_ratio_matches_closed_form() {
    let c = PhysicalConstants::new(1.0, 1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
    let osc = OscillatorParams::new(1.0, 1.0, 0.01).unwrap();
    for w in [0.05, 0.1, 0.5, 0.99, 1.01, 2.0] {
        let r = dipole_potential_and_ratio(w, 0.7, &osc, &c).unwrap();
        assert!(
            close(r.ratio, DipoleRatio::closed_form(w, &osc), 1e-12),
            "w={w}"
        );
    }
    let r = dipole_potential_and_ratio(0.0, 1.0, &osc, &c).unwrap();
    assert_eq!(r.ratio, 0.0);
    let r = dipole_potential_and_ratio(1e-3, 1.0, &osc, &c).unwrap();
    assert!(close(
        r.ratio,
        DipoleRatio::quest_asymptote(1e-3, &osc),
        1e-5
    ));
    let r = dipole_potential_and_ratio(1.0 + 1e-3, 1.0, &osc, &c).unwrap();
    assert!(close(
        r.ratio,
        DipoleRatio::fort_asymptote(1.0 + 1e-3, &osc),
        1e-3
    ));
    assert!(dipole_potential_and_ratio(1.0, 1.0, &osc, &c).unwrap().pole);
}

#[test]
fn faulty_rate_at_low_frequency() {
    let c = electron();
    let al = c.al_params().unwrap();
    let eff = effective_oscillator(&al).unwrap();
    let w = 0.1 * eff.omega();
    let cmp = faulty_rate_comparison(w, 1.0, &al, &eff, &c).unwrap();
    let expected = (eff.omega() / w).powi(2);
    assert!((cmp.rate_factor / expected - 1.0).abs() < 1e-6);
    // the X-based ratio misses about 99% of the true one
    assert!((cmp.faulty_ratio / cmp.true_ratio - 0.01).abs() < 1e-6);
}

#[test]
fn quantum_oscillator_equals_classical_oscillator() {
    let c = electron();
    let model = QuantumOscillatorModel::from_constants(&c).unwrap();
    let table = oscillator_table(&model, &c).unwrap();
    let osc = classical_identification(&table).unwrap();
    let e2 = c.e() * c.e();
    let tr = table.transitions()[0];
    assert!((tr.gamma_n() / 6.3e6 - 1.0).abs() < 0.01);
    for k in 0..100 {
        let t = (k as f64 - 50.0) * 0.37 / c.omega0();
        let q = chi_dd(&table, t, c.hbar());
        let classical = oscilkit_core::oscillator::response_relaxation(&osc, t)
            .unwrap()
            .chi()
            * e2;
        assert!(
            (q - classical).norm() <= 1e-12 * classical.norm().max(1e-300),
            "t={t}"
        );
    }
    for k in 0..=500 {
        let w = 5.0 * c.omega0() * k as f64 / 500.0;
        let q = chi_dd_susceptibility(&table, w, c.hbar());
        let classical = susceptibility(&osc, w) * e2;
        assert!((q - classical).norm() <= 1e-12 * classical.norm(), "w={w}");
        let pq = absorbed_power_qm(&table, 2.0, w, c.hbar());
        let pc = absorbed_power(&osc, &DriveField::new(2.0 * c.e(), w).unwrap());
        assert!((pq - pc).abs() <= 1e-12 * pc.abs().max(f64::MIN_POSITIVE));
    }
}

#[test]
fn quantum_and_radiation_reaction_widths_agree() {
    for a in [1e-8, 1e-4, 1e-2] {
        let c = PhysicalConstants::natural(a).unwrap();
        let model = QuantumOscillatorModel::from_constants(&c).unwrap();
        let table = oscillator_table(&model, &c).unwrap();
        let gq = table.transitions()[0].gamma_n();
        let eff = effective_oscillator(&c.al_params().unwrap()).unwrap();
        let rel = (gq - eff.gamma()).abs() / eff.gamma();
        // Γ = τω₀²[1 - 2(τω₀)² + ...]; allow a few ulps on top
        assert!(
            rel <= 2.0 * a * a * 1.01 + 4.0 * f64::EPSILON,
            "a={a}: {rel}"
        );
    }
}

#[test]
fn stark_shift_and_dipole_potential_agree() {
    let c = electron();
    let model = QuantumOscillatorModel::from_constants(&c).unwrap();
    let table = oscillator_table(&model, &c).unwrap();
    let osc = classical_identification(&table).unwrap();
    let e0 = 1e5;
    let chi0 = chi_dd_susceptibility(&table, 0.0, c.hbar()).re;
    let static_shift = ac_stark_shift(chi0, e0).total;
    let expected = -0.25 * osc.static_susceptibility() * c.e() * c.e() * e0 * e0;
    assert!(close(static_shift, expected, 1e-12));
    for w in [0.0, 0.3 * c.omega0(), 2.0 * c.omega0()] {
        let chi_re = chi_dd_susceptibility(&table, w, c.hbar()).re;
        let shift = ac_stark_shift(chi_re, e0);
        let u = dipole_potential_and_ratio(w, e0, &osc, &c).unwrap().u_dip;
        assert!(close(shift.total, u, 1e-12));
        assert!(close(
            shift.first_order + shift.second_order,
            shift.total,
            1e-15
        ));
    }
}

fn table_strategy() -> impl Strategy<Value = TransitionTable> {
    prop::collection::vec((0.1f64..10.0, 0.0f64..2.0, 0.0f64..1.0), 1..5).prop_filter_map(
        "distinct frequencies",
        |rows| {
            let tr: Vec<Transition> = rows
                .iter()
                .map(|&(w, d, g)| Transition::new(w, d, g).unwrap())
                .collect();
            TransitionTable::new(tr, 1.0, 1.0).ok()
        },
    )
}

proptest! {
    #[test]
    fn chi_dd_is_odd(table in table_strategy(), t in -20.0f64..20.0) {
        let a = chi_dd(&table, t, 1.0);
        let b = chi_dd(&table, -t, 1.0);
        prop_assert_eq!(a, -b);
        prop_assert_eq!(a.re, 0.0);
    }

    #[test]
    fn chi_dd_susceptibility_parities(table in table_strategy(), w in 0.0f64..20.0) {
        let a = chi_dd_susceptibility(&table, w, 1.0);
        let b = chi_dd_susceptibility(&table, -w, 1.0);
        prop_assert!((a.re - b.re).abs() <= 1e-14 * a.re.abs().max(1e-300));
        prop_assert!((a.im + b.im).abs() <= 1e-14 * a.im.abs().max(1e-300));
        prop_assert!(a.im >= 0.0);
    }

    #[test]
    fn cross_sections_nonnegative_and_even(x in -20.0f64..20.0, gp in 0.0f64..1.0) {
        let c = PhysicalConstants::natural(0.01).unwrap();
        let split = DampingSplit::radiative(&c, gp).unwrap();
        let a = sigma_abs(x, 1.0, &split, c.lambdabar0());
        let s = sigma_sc(x, 1.0, &split, &c).value;
        prop_assert!(a >= 0.0 && s >= 0.0);
        prop_assert_eq!(a, sigma_abs(-x, 1.0, &split, c.lambdabar0()));
        prop_assert_eq!(s, sigma_sc(-x, 1.0, &split, &c).value);
    }

    #[test]
    fn thomson_identity(w0 in 1e12f64..1e17) {
        let c = PhysicalConstants::si_electron(w0).unwrap();
        let lb = c.lambdabar0();
        let a = c.tau_omega0();
        prop_assert!(close(thomson_cross_section(&c), 6.0 * PI * lb * lb * a * a, 1e-12));
        prop_assert!(close(c.tau(), 2.0 * c.classical_radius() / (3.0 * c.c()), 1e-12));
    }
}

//! The acceptance checks, run together with a pass/fail report.

use std::f64::consts::PI;
use std::time::Instant;

use oscilkit_core::abraham_lorentz::{
    char_roots, effective_oscillator, susceptibility_error_ratios, unique_solution, ALInitialState,
    ALParams, ValidityMargins,
};
use oscilkit_core::cross_sections::{
    dipole_potential_and_ratio, f_sum_check, faulty_rate_comparison, resonant_decomposition,
    sigma_sc, thomson_cross_section, DampingModel, DampingSplit, DipoleRatio, PhysicalConstants,
};
use oscilkit_core::dispersion::QuadratureConfig;
use oscilkit_core::ode_oracle::{
    al_cutoff, integrate_al, integrate_al_bounded, integrate_forced, IntegratorConfig,
};
use oscilkit_core::oscillator::{
    response_relaxation, steady_state, steady_state_form, susceptibility, DriveField,
    OscillatorParams,
};
use oscilkit_core::quantum::{
    ac_stark_shift, chi_dd, chi_dd_susceptibility, classical_identification, oscillator_table,
    QuantumOscillatorModel,
};
use rayon::prelude::*;

use crate::config::{Command, Grid, RunConfig, RunError, Units};
use crate::figures::{self, Outcome};
use crate::table::{Cell, FigureTable};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub criterion: u8,
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `measured <= bound`.
    fn at_most(criterion: u8, name: &str, measured: f64, bound: f64) -> Self {
        Self {
            criterion,
            name: name.to_owned(),
            measured,
            bound,
            passed: measured <= bound,
        }
    }

    /// Passes when `measured >= bound`.
    fn at_least(criterion: u8, name: &str, measured: f64, bound: f64) -> Self {
        Self {
            passed: measured >= bound,
            ..Self::at_most(criterion, name, measured, bound)
        }
    }
}

/// Options that alter the checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AuditOptions {
    /// Run the f-sum checks with the frequency-dependent damping model.
    pub inject_jackson: bool,
}

fn log_sweep(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    let (l, h) = (lo.ln(), hi.ln());
    (0..n)
        .map(|k| (l + (h - l) * k as f64 / (n - 1) as f64).exp())
        .collect()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn roots() -> Result<Vec<Check>, RunError> {
    let at2 = char_roots(&ALParams::from_tau_omega0(1.0, 2.0, 1.0)?)?;
    let mut residual: f64 = 0.0;
    let mut identity: f64 = 0.0;
    let (mut u_dev, mut v_dev): (f64, f64) = (0.0, 0.0);
    for a in log_sweep(200, 1e-8, 3.0) {
        let al = ALParams::from_tau_omega0(1.0, a, 1.0)?;
        let r = char_roots(&al)?;
        residual = residual.max(r.residual);
        let eff = effective_oscillator(&al)?;
        let g = eff.gamma();
        identity = identity.max(rel(g * g + g / al.tau(), eff.omega_sq()));
        if a <= 0.1 {
            // 5a⁴ plus a few ulps of the value, which dominate below a ~ 1e-4
            let allowance = |x: f64| 5.0 * a * a * a * a + 4.0 * f64::EPSILON * x.abs();
            let (ua, va) = (a * a * a - 0.5 * a, 1.0 - 0.625 * a * a);
            u_dev = u_dev.max((r.u - ua).abs() / allowance(ua));
            v_dev = v_dev.max((r.v - va).abs() / allowance(va));
        }
    }
    Ok(vec![
        Check::at_most(1, "u/w0 at tau_w0=2 vs -0.25", (at2.u + 0.25).abs(), 1e-9),
        Check::at_most(
            1,
            "max cubic residual, 200 points in [1e-8,3]",
            residual,
            1e-12,
        ),
        Check::at_most(
            1,
            "max |u/w0 - (-a/2+a^3)|/(5a^4 + 4 ulp), a<=0.1",
            u_dev,
            1.0,
        ),
        Check::at_most(
            1,
            "max |v/w0 - (1-5a^2/8)|/(5a^4 + 4 ulp), a<=0.1",
            v_dev,
            1.0,
        ),
        Check::at_most(
            2,
            "max rel |Omega^2 - Gamma^2 - Gamma/tau|",
            identity,
            1e-12,
        ),
    ])
}

fn with(cfg: &RunConfig, command: Command, a: f64, grid: Grid) -> RunConfig {
    RunConfig {
        command,
        units: Units::Natural { tau_omega0: a },
        grid,
        ..cfg.clone()
    }
}

fn kk_pair(cfg: &RunConfig) -> Result<Vec<Check>, RunError> {
    let start = Instant::now();
    let out = figures::fig2(&with(
        cfg,
        Command::Fig2,
        2.0,
        Grid::new(0.0, 3.0, 301).unwrap(),
    ))?;
    let elapsed = start.elapsed().as_secs_f64();
    let t = &out.table;
    let re = t.column("chi_re").unwrap();
    let kk = t.column("kk_of_chi_im").unwrap();
    let dev = re
        .iter()
        .zip(&kk)
        .map(|(a, b)| (a - b).abs())
        .fold(
            0.0,
            |m: f64, d| if d.is_nan() { f64::INFINITY } else { m.max(d) },
        );
    let kk_x0 = t.column("kk_of_X_im").unwrap()[0];
    let x_re0 = t.column("X_re").unwrap()[0];
    Ok(vec![
        Check::at_most(3, "max |KK[chi''] - chi'|/chi0 on [0,3w0]", dev, 1e-3),
        Check::at_most(3, "|KK[Im X](0)/X0 - 0.5|", (kk_x0 - 0.5).abs(), 0.05),
        Check::at_least(3, "|Re X(0) - KK[Im X](0)|/X0", (x_re0 - kk_x0).abs(), 0.4),
        Check::at_most(3, "fig2 runtime (s)", elapsed, 60.0),
    ])
}

fn sum_rule(opts: AuditOptions) -> Result<Vec<Check>, RunError> {
    let c = PhysicalConstants::si_electron(1e15)?;
    let quad = QuadratureConfig::new(1e-3, 1.0, 1e-10, 4000)?;
    let g = c.gamma_rad();
    let model = if opts.inject_jackson {
        DampingModel::Jackson
    } else {
        DampingModel::Constant
    };
    let mut checks = [(0.0, "0"), (g, "Gamma"), (10.0 * g, "10 Gamma")]
        .par_iter()
        .map(|&(gp, label)| {
            let split = DampingSplit::radiative(&c, gp)?;
            let r = f_sum_check(&split, &c, &quad, model)?;
            Ok(Check::at_most(
                4,
                &format!("|f-sum ratio - 1|, Gamma'={label}"),
                (r.ratio() - 1.0).abs(),
                5e-3,
            ))
        })
        .collect::<Result<Vec<_>, RunError>>()?;
    let split = DampingSplit::radiative(&c, 0.0)?;
    let jackson = f_sum_check(&split, &c, &quad, DampingModel::Jackson)?;
    checks.push(Check::at_least(
        4,
        "|f-sum ratio - 1| with Jackson damping (must fail the rule)",
        (jackson.ratio() - 1.0).abs(),
        5e-3,
    ));
    Ok(checks)
}

fn cross_section_limits() -> Result<Vec<Check>, RunError> {
    let c = PhysicalConstants::si_electron(1e15)?;
    let w0 = c.omega0();
    let lb = c.lambdabar0();
    let th = thomson_cross_section(&c);
    let none = DampingSplit::radiative(&c, 0.0)?;
    let split = DampingSplit::radiative(&c, c.gamma_rad())?;
    let hi = sigma_sc(100.0 * w0, w0, &none, &c).value / th;
    let peak = sigma_sc(w0, w0, &split, &c).value;
    let q = split.gamma_rad() / split.gamma_total();
    let low = sigma_sc(0.01 * w0, w0, &none, &c).value / th / 1e-8;
    let mut additivity: f64 = 0.0;
    for k in -10..=10 {
        let w = w0 + 0.5 * k as f64 * split.gamma_total();
        let f = resonant_decomposition(w, w0, &split, &c);
        additivity = additivity.max((f.sigma_abs - f.sigma_sc - f.sigma_r).abs() / f.sigma_abs);
    }
    Ok(vec![
        Check::at_most(5, "|sigma_sc(100 w0)/sigma_T - 1|", (hi - 1.0).abs(), 2e-3),
        Check::at_most(
            5,
            "rel |sigma_sc(w0) - 6 pi lb^2 (Gamma/Gamma_t)^2|",
            rel(peak, 6.0 * PI * lb * lb * q * q),
            1e-12,
        ),
        Check::at_most(
            5,
            "|sigma_sc(0.01 w0)/(sigma_T 1e-8) - 1|",
            (low - 1.0).abs(),
            0.01,
        ),
        Check::at_most(
            5,
            "rel |sigma_abs_L - sigma_sc_L - sigma_r_L|",
            additivity,
            1e-14,
        ),
    ])
}

fn error_map(cfg: &RunConfig) -> Result<Vec<Check>, RunError> {
    let al = ALParams::from_tau_omega0(1.0, 1e-8, 1.0)?;
    let eff = effective_oscillator(&al)?;
    let m = ValidityMargins::default();
    let lo = susceptibility_error_ratios(&eff, &al, 0.9, m).im_ratio;
    let hi = susceptibility_error_ratios(&eff, &al, 1.1, m).im_ratio;
    let out = figures::fig3(&with(
        cfg,
        Command::Fig3,
        1e-8,
        Grid::new(0.8, 1.2, 401).unwrap(),
    ))?;
    let w = out.table.column("omega_over_w0").unwrap();
    let re = out.table.column("re_ratio_err").unwrap();
    let worst = w
        .iter()
        .zip(&re)
        .filter(|(w, e)| (*w - 1.0).abs() > 0.005 && e.is_finite())
        .fold(0.0, |m: f64, (_, e)| m.max(e.abs()));
    Ok(vec![
        Check::at_most(6, "|Im X/chi'' at 0.9 w0 - 0.81|", (lo - 0.81).abs(), 1e-4),
        Check::at_most(6, "|Im X/chi'' at 1.1 w0 - 1.21|", (hi - 1.21).abs(), 1e-4),
        Check::at_most(6, "max |Re X/chi' - 1| for |w/w0-1|>0.005", worst, 3e-7),
    ])
}

fn runaway() -> Result<Vec<Check>, RunError> {
    let al = ALParams::from_tau_omega0(1.0, 0.1, 1.0)?;
    let eff = effective_oscillator(&al)?;
    let state = ALInitialState::new(1.0, 0.0, 0.0)?;
    let tight = IntegratorConfig::new(1e-12, 1e-14, f64::INFINITY, 1_000_000)?;
    let tr = integrate_al(&al, |_| 0.0, &state, (0.0, 10.0), &tight);
    let mut dev: f64 = 0.0;
    let mut fit = Vec::new();
    for (&t, y) in tr.times.iter().zip(&tr.states) {
        let exact = unique_solution(&al, &state, |_| 0.0, t, 0.0)?;
        if exact.abs() > 1e6 {
            break;
        }
        dev = dev.max((y[0] - exact).abs() / exact.abs().max(1.0));
    }
    for (&t, y) in tr.times.iter().zip(&tr.states) {
        if y[0].abs() > 1e4 && y[0].abs() <= al_cutoff(1.0) {
            fit.push((t, y[0].abs().ln()));
        }
    }
    // least-squares slope of ln|x| once the run-away term dominates
    let n = fit.len() as f64;
    let (st, sy) = fit.iter().fold((0.0, 0.0), |(a, b), (t, y)| (a + t, b + y));
    let (mt, my) = (st / n, sy / n);
    let (num, den) = fit.iter().fold((0.0, 0.0), |(a, b), (t, y)| {
        (a + (t - mt) * (y - my), b + (t - mt) * (t - mt))
    });
    let rate = if fit.len() >= 3 { num / den } else { f64::NAN };

    let (x0, v0) = (1.0, 0.0);
    let bounded = integrate_al_bounded(
        &al,
        |_| 0.0,
        (x0, v0),
        (0.0, 50.0),
        &IntegratorConfig::default(),
    )?;
    let g = eff.gamma();
    let b = (v0 + 0.5 * g * x0) / eff.omega_tilde;
    let c = (x0 * x0 + b * b).sqrt();
    let envelope = bounded
        .times
        .iter()
        .zip(&bounded.states)
        .map(|(t, y)| y[0].abs() / (c * (-0.5 * g * t).exp()))
        .fold(0.0, f64::max);
    let complete = bounded.times.last() == Some(&50.0) && bounded.diverged_at.is_none();
    Ok(vec![
        Check::at_most(
            7,
            "AL ODE vs unique solution (rel, until |x|=1e6)",
            dev,
            1e-6,
        ),
        Check::at_most(
            7,
            "|fitted growth rate - zeta2|",
            (rate - eff.roots.zeta2).abs(),
            1e-3,
        ),
        Check::at_most(
            7,
            "max |x|/(C e^{-Gamma t/2}) on manifold, t in [0,50]",
            if complete { envelope } else { f64::INFINITY },
            1.01,
        ),
    ])
}

fn steady_state_oracle() -> Result<Vec<Check>, RunError> {
    let p = OscillatorParams::new(1.0, 1.0, 0.5)?;
    let drive = DriveField::new(2.0, 1.3)?;
    // transients fall as e^{-Γt/2}: 40/Γ leaves e^{-20} of the initial offset
    let burn_in = 40.0 / p.gamma();
    let cfg = IntegratorConfig::new(1e-12, 1e-14, 0.05, 1_000_000)?;
    let tr = integrate_forced(
        &p,
        |t| drive.force(t),
        (0.7, -3.0),
        (0.0, burn_in + 60.0),
        &cfg,
    );
    let amp = steady_state_form(&p, &drive).amplitude;
    let worst = tr
        .times
        .iter()
        .zip(&tr.states)
        .filter(|(t, _)| **t > burn_in)
        .map(|(t, y)| (y[0] - steady_state(&p, &drive, *t)).abs())
        .fold(0.0, f64::max);
    Ok(vec![Check::at_most(
        8,
        "max |x - xi(t)|/A after t > 40/Gamma",
        worst / amp,
        1e-6,
    )])
}

fn quantum() -> Result<Vec<Check>, RunError> {
    let c = PhysicalConstants::si_electron(1e15)?;
    let model = QuantumOscillatorModel::from_constants(&c)?;
    let table = oscillator_table(&model, &c)?;
    let osc = classical_identification(&table)?;
    let e2 = c.e() * c.e();
    let mut time_dev: f64 = 0.0;
    for k in 0..100 {
        let t = (k as f64 - 50.0) * 0.37 / c.omega0();
        let q = chi_dd(&table, t, c.hbar());
        let cl = response_relaxation(&osc, t)?.chi() * e2;
        time_dev = time_dev.max((q - cl).norm() / cl.norm().max(f64::MIN_POSITIVE));
    }
    let mut freq_dev: f64 = 0.0;
    for k in 0..=500 {
        let w = 5.0 * c.omega0() * k as f64 / 500.0;
        let q = chi_dd_susceptibility(&table, w, c.hbar());
        let cl = susceptibility(&osc, w) * e2;
        freq_dev = freq_dev.max((q - cl).norm() / cl.norm());
    }
    let width = |c: &PhysicalConstants| -> Result<f64, RunError> {
        let model = QuantumOscillatorModel::from_constants(c)?;
        let g = oscillator_table(&model, c)?.transitions()[0].gamma_n();
        Ok(rel(g, c.tau() * c.omega0() * c.omega0()))
    };
    let tiny = PhysicalConstants::si_electron(1e-8 / c.tau())?;
    Ok(vec![
        Check::at_most(
            9,
            "max rel |chi_DD(t) - e^2 chi(t)|, 100 times",
            time_dev,
            1e-12,
        ),
        Check::at_most(
            9,
            "max rel |chi_DD(w) - e^2 chi(w)| on [0,5w10]",
            freq_dev,
            1e-12,
        ),
        Check::at_most(
            9,
            "rel |Gamma_1 - tau w10^2| at w10=1e15",
            width(&c)?,
            4.0 * f64::EPSILON,
        ),
        Check::at_most(
            9,
            "rel |Gamma_1 - tau w10^2| at tau w10=1e-8",
            width(&tiny)?,
            4.0 * f64::EPSILON,
        ),
        Check::at_most(
            9,
            "|tau/6.3e-24 s - 1|",
            (c.tau() / 6.3e-24 - 1.0).abs(),
            0.01,
        ),
    ])
}

fn stark() -> Result<Vec<Check>, RunError> {
    let c = PhysicalConstants::si_electron(1e15)?;
    let model = QuantumOscillatorModel::from_constants(&c)?;
    let table = oscillator_table(&model, &c)?;
    let osc = classical_identification(&table)?;
    let e0 = 1e5;
    let chi0 = chi_dd_susceptibility(&table, 0.0, c.hbar()).re;
    let shift = ac_stark_shift(chi0, e0).total;
    let expected = -0.25 * osc.static_susceptibility() * c.e() * c.e() * e0 * e0;
    let mut ratio_dev: f64 = 0.0;
    for x in [0.01, 0.1, 0.5, 0.9, 0.99, 1.01, 1.1, 2.0, 10.0] {
        let w = x * osc.omega();
        let r = dipole_potential_and_ratio(w, e0, &osc, &c)?;
        ratio_dev = ratio_dev.max(rel(r.ratio, DipoleRatio::closed_form(w, &osc)));
    }
    let al = c.al_params()?;
    let eff = effective_oscillator(&al)?;
    let w = 0.1 * eff.omega();
    let cmp = faulty_rate_comparison(w, e0, &al, &eff, &c)?;
    let inflation = (eff.omega() / w).powi(2);
    Ok(vec![
        Check::at_most(
            10,
            "rel |shift(0) + chi0 e^2 E0^2/4|",
            rel(shift, expected),
            1e-12,
        ),
        Check::at_most(
            10,
            "max rel |hbar Gamma_abs/U_dip - closed form|",
            ratio_dev,
            1e-12,
        ),
        Check::at_most(
            10,
            "|true/X rate at 0.1 Omega over (Omega/w)^2 - 1|",
            (cmp.rate_factor / inflation - 1.0).abs(),
            1e-6,
        ),
        Check::at_least(
            10,
            "1 - X ratio/true ratio at 0.1 Omega",
            1.0 - cmp.faulty_ratio / cmp.true_ratio,
            0.9,
        ),
    ])
}

/// Every check for criteria 1 to 10, in criterion order.
pub fn checks(cfg: &RunConfig, opts: AuditOptions) -> Result<Vec<Check>, RunError> {
    let mut all = roots()?;
    all.extend(kk_pair(cfg)?);
    all.extend(sum_rule(opts)?);
    all.extend(cross_section_limits()?);
    all.extend(error_map(cfg)?);
    all.extend(runaway()?);
    all.extend(steady_state_oracle()?);
    all.extend(quantum()?);
    all.extend(stark()?);
    Ok(all)
}

pub fn audit(cfg: &RunConfig) -> Result<Outcome, RunError> {
    let opts = AuditOptions {
        inject_jackson: cfg.inject_jackson,
    };
    let list = checks(cfg, opts)?;
    let mut t = FigureTable::new(
        "audit",
        &["criterion", "name", "measured", "bound", "passed"],
    );
    t.meta("inject_jackson", opts.inject_jackson);
    let passed = list.iter().all(|c| c.passed);
    t.meta("checks", list.len());
    t.meta("failed", list.iter().filter(|c| !c.passed).count());
    for c in list {
        t.push(vec![
            Cell::Num(c.criterion as f64),
            Cell::Text(c.name),
            Cell::Num(c.measured),
            Cell::Num(c.bound),
            Cell::from(c.passed),
        ]);
    }
    Ok(Outcome::new(t, passed))
}

//! Data tables behind the figures and the sweep commands.

use oscilkit_core::abraham_lorentz::{
    char_roots, effective_oscillator, faulty_power_peak, faulty_susceptibility,
    susceptibility_error_ratios, ALInitialState, ALParams, RootBranch, ValidityMargins,
};
use oscilkit_core::cross_sections::{
    f_sum_check, resonant_decomposition, sigma_abs, sigma_sc, thomson_cross_section, DampingModel,
    DampingSplit, PhysicalConstants, Regime,
};
use oscilkit_core::dispersion::{kk_transform_with_breakpoints, QuadratureConfig};
use oscilkit_core::ode_oracle::{
    al_cutoff, integrate_al, integrate_al_bounded, integrate_forced, IntegratorConfig,
};
use oscilkit_core::oscillator::{susceptibility, DriveField, OscillatorParams};
use oscilkit_core::quantum::{
    ac_stark_shift, chi_dd_susceptibility, oscillator_table, QuantumOscillatorModel,
    TransitionTable,
};
use rayon::prelude::*;

use crate::config::{RunConfig, RunError, TrajectoryMode, Units};
use crate::table::{Cell, FigureTable};
use crate::transitions::read_table;

/// A table plus the verdict of the checks the command runs on it.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub table: FigureTable,
    pub passed: bool,
}

impl Outcome {
    pub fn new(table: FigureTable, passed: bool) -> Self {
        Self { table, passed }
    }
}

pub fn constants(units: Units) -> Result<PhysicalConstants, RunError> {
    Ok(match units {
        Units::Natural { tau_omega0 } => PhysicalConstants::natural(tau_omega0)?,
        Units::SiElectron { omega0 } => PhysicalConstants::si_electron(omega0)?,
    })
}

fn describe_units(t: &mut FigureTable, units: Units, consts: &PhysicalConstants) {
    match units {
        Units::Natural { .. } => t.meta("units", "m = omega0 = c = eps0 = hbar = 1"),
        Units::SiElectron { .. } => t.meta("units", "SI, electron (CODATA 2018)"),
    };
    t.meta_num("omega0", consts.omega0());
    t.meta_num("tau_omega0", consts.tau_omega0());
}

/// Dimensionless AL parameters (m = ω₀ = 1) at the run's τω₀.
fn unit_al(cfg: &RunConfig) -> Result<ALParams, RunError> {
    let a = constants(cfg.units)?.tau_omega0();
    Ok(ALParams::from_tau_omega0(1.0, a, 1.0)?)
}

fn check(t: &mut FigureTable, name: &str, measured: f64, bound: f64, passed: bool) -> bool {
    t.meta(
        &format!("check.{name}"),
        format!(
            "measured {measured:e}, bound {bound:e}, {}",
            if passed { "pass" } else { "FAIL" }
        ),
    );
    passed
}

pub fn fig1(cfg: &RunConfig) -> Result<Outcome, RunError> {
    let mut t = FigureTable::new(
        "fig1",
        &[
            "tau_w0",
            "u_over_w0",
            "v_over_w0",
            "zeta2_over_w0",
            "u_asymptote",
            "v_asymptote",
            "cubic_residual",
            "branch",
        ],
    );
    t.meta("grid", cfg.grid);
    t.meta("units", "omega0 = 1");
    t.meta("u_asymptote", "-(tau_w0/2 - tau_w0^3)");
    t.meta("v_asymptote", "1 - 5 tau_w0^2/8");
    let rows = cfg
        .grid
        .points()
        .into_par_iter()
        .map(|a| {
            let al = ALParams::from_tau_omega0(1.0, a, 1.0)?;
            let r = char_roots(&al)?;
            let branch = match r.branch {
                RootBranch::Series => "series",
                RootBranch::ClosedFormNewton => "closed-form+newton",
                RootBranch::ClosedForm => "closed-form",
            };
            Ok(vec![
                Cell::Num(a),
                Cell::Num(r.u),
                Cell::Num(r.v),
                Cell::Num(r.zeta2),
                Cell::Num(-(0.5 * a - a * a * a)),
                Cell::Num(1.0 - 0.625 * a * a),
                Cell::Num(r.residual),
                Cell::from(branch),
            ])
        })
        .collect::<Result<Vec<_>, oscilkit_core::Error>>()?;
    for row in rows {
        t.push(row);
    }
    let worst = t
        .column("cubic_residual")
        .unwrap()
        .into_iter()
        .fold(0.0, f64::max);
    let passed = check(&mut t, "max_cubic_residual", worst, 1e-12, worst < 1e-12);
    Ok(Outcome::new(t, passed))
}

/// KK configuration and breakpoints suited to a Lorentzian of width `gamma`
/// at `omega` with grid reaching `max_freq`.
fn kk_setup(gamma: f64, omega: f64, max_freq: f64) -> Result<QuadratureConfig, RunError> {
    let scale = gamma.min(omega).max(1e-12 * omega);
    Ok(QuadratureConfig::for_scale(scale, max_freq.max(omega))?)
}

pub fn fig2(cfg: &RunConfig) -> Result<Outcome, RunError> {
    let al = unit_al(cfg)?;
    let eff = effective_oscillator(&al)?;
    let p = eff.params;
    let chi0 = p.static_susceptibility();
    let x0 = 1.0;
    let w_mx = faulty_power_peak(&al);
    let quad = kk_setup(
        p.gamma(),
        p.omega(),
        cfg.grid.max.abs().max(cfg.grid.min.abs()),
    )?;
    let breaks = [p.omega(), -p.omega(), w_mx, -w_mx, 1.0, -1.0];

    let mut t = FigureTable::new(
        "fig2",
        &[
            "omega",
            "chi_re",
            "omega_chi_im",
            "X_re",
            "omega_X_im",
            "kk_of_chi_im",
            "kk_of_X_im",
            "kk_error",
            "quad_ok",
        ],
    );
    t.meta("grid", cfg.grid);
    t.meta_num("tau_omega0", al.tau_omega0());
    t.meta(
        "units",
        "m = omega0 = 1; chi columns over chi0, X columns over X0",
    );
    t.meta_num("Gamma", p.gamma());
    t.meta_num("Omega", p.omega());
    t.meta_num("omega_m_X", w_mx);
    t.meta_num("chi0", chi0);
    t.meta(
        "grid_lines",
        format!(
            "Omega < omega_m_X < omega0: {}",
            p.omega() < w_mx && w_mx < 1.0
        ),
    );
    t.meta_num("kk.excision_halfwidth", quad.excision_halfwidth);
    t.meta_num("kk.truncation", quad.truncation);
    t.meta_num("kk.rel_tol", quad.rel_tol);
    t.meta("kk.max_subdivisions", quad.max_subdivisions);

    let rows: Vec<(Vec<Cell>, f64)> = cfg
        .grid
        .points()
        .into_par_iter()
        .map(|w| {
            let chi = susceptibility(&p, w);
            let x = faulty_susceptibility(&al, w);
            let kk_chi =
                kk_transform_with_breakpoints(|v| susceptibility(&p, v).im, w, &quad, &breaks);
            let kk_x = kk_transform_with_breakpoints(
                |v| faulty_susceptibility(&al, v).im,
                w,
                &quad,
                &breaks,
            );
            let ok = kk_chi.is_ok() && kk_x.is_ok();
            let (kc, ec) = kk_chi.map_or((f64::NAN, f64::NAN), |r| (r.value, r.error));
            let (kx, ex) = kk_x.map_or((f64::NAN, f64::NAN), |r| (r.value, r.error));
            let dev = (kc - chi.re).abs() / chi0;
            let row = vec![
                Cell::Num(w),
                Cell::Num(chi.re / chi0),
                Cell::Num(w * chi.im / chi0),
                Cell::Num(x.re / x0),
                Cell::Num(w * x.im / x0),
                Cell::Num(kc / chi0),
                Cell::Num(kx / x0),
                Cell::Num((ec / chi0).max(ex / x0)),
                Cell::from(ok),
            ];
            (row, if ok { dev } else { f64::INFINITY })
        })
        .collect();
    let mut worst: f64 = 0.0;
    for (row, dev) in rows {
        worst = worst.max(dev);
        t.push(row);
    }
    let passed = check(&mut t, "max_kk_chi_deviation", worst, 1e-3, worst < 1e-3);
    Ok(Outcome::new(t, passed))
}

pub fn fig3(cfg: &RunConfig) -> Result<Outcome, RunError> {
    let al = unit_al(cfg)?;
    let eff = effective_oscillator(&al)?;
    let margins = ValidityMargins::default();
    let mut t = FigureTable::new(
        "fig3",
        &[
            "omega_over_w0",
            "chi_re",
            "chi_im",
            "re_ratio_err",
            "im_ratio_err",
            "in_validity_range",
        ],
    );
    t.meta("grid", cfg.grid);
    t.meta_num("tau_omega0", al.tau_omega0());
    t.meta("units", "m = omega0 = 1");
    t.meta(
        "plot_scaling",
        "chi_im x1e6; re_ratio_err x1e8 (percent, x1e6); im_ratio_err x1e2 (percent)",
    );
    t.meta(
        "validity_margins",
        format!("upper {}, lower {}", margins.upper, margins.lower),
    );
    let mut worst_re: f64 = 0.0;
    for w in cfg.grid.points() {
        let chi = susceptibility(&eff.params, w);
        let r = susceptibility_error_ratios(&eff, &al, w, margins);
        if (w - 1.0).abs() > 0.005 && !r.pole {
            worst_re = worst_re.max((r.re_ratio - 1.0).abs());
        }
        t.push(vec![
            Cell::Num(w),
            Cell::Num(chi.re),
            Cell::Num(chi.im),
            Cell::Num(r.re_ratio - 1.0),
            Cell::Num(r.im_ratio - 1.0),
            Cell::from(r.in_validity_range),
        ]);
    }
    let passed = check(
        &mut t,
        "max_re_ratio_err_outside_0.005",
        worst_re,
        3e-7,
        worst_re < 3e-7,
    );
    Ok(Outcome::new(t, passed))
}

fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::Rayleigh => "rayleigh",
        Regime::Resonant => "resonant",
        Regime::Thomson => "thomson",
        Regime::Unlabeled => "",
    }
}

pub fn cross_sections(cfg: &RunConfig) -> Result<Outcome, RunError> {
    let c = constants(cfg.units)?;
    let split = DampingSplit::radiative(&c, cfg.gamma_prime)?;
    let w0 = c.omega0();
    let mut t = FigureTable::new(
        "cross-sections",
        &[
            "omega_over_w0",
            "sigma_abs",
            "sigma_sc",
            "sigma_abs_L",
            "sigma_sc_L",
            "sigma_r_L",
            "lorentz_valid",
            "regime",
        ],
    );
    t.meta("grid", cfg.grid);
    describe_units(&mut t, cfg.units, &c);
    t.meta_num("Gamma", split.gamma_rad());
    t.meta_num("Gamma_prime", split.gamma_prime());
    t.meta_num("lambdabar0", c.lambdabar0());
    t.meta_num("sigma_thomson", thomson_cross_section(&c));
    t.meta(
        "regime_thresholds",
        "rayleigh w < 0.1 w0; resonant |w - w0| < 10 Gamma_t; thomson w > 10 w0",
    );
    for x in cfg.grid.points() {
        let w = x * w0;
        let sc = sigma_sc(w, w0, &split, &c);
        let lor = resonant_decomposition(w, w0, &split, &c);
        t.push(vec![
            Cell::Num(x),
            Cell::Num(sigma_abs(w, w0, &split, c.lambdabar0())),
            Cell::Num(sc.value),
            Cell::Num(lor.sigma_abs),
            Cell::Num(lor.sigma_sc),
            Cell::Num(lor.sigma_r),
            Cell::from(lor.valid),
            Cell::from(regime_name(sc.regime)),
        ]);
    }
    Ok(Outcome::new(t, true))
}

/// f-sum rule for Γ′ ∈ {0, Γ, 10Γ} (plus `--gamma-prime` when set), with
/// both damping models.
pub fn sum_rule(cfg: &RunConfig) -> Result<Outcome, RunError> {
    let c = constants(cfg.units)?;
    let g = c.gamma_rad();
    let mut primes = vec![0.0, g, 10.0 * g];
    if cfg.gamma_prime > 0.0 {
        primes.push(cfg.gamma_prime);
    }
    let quad = QuadratureConfig::new(1e-3, 1.0, 1e-10, 4000)?;
    let mut t = FigureTable::new(
        "sum-rule",
        &[
            "gamma_prime",
            "model",
            "numeric",
            "analytic",
            "ratio",
            "tail",
            "quad_error",
            "within_5e-3",
        ],
    );
    describe_units(&mut t, cfg.units, &c);
    t.meta_num("Gamma", g);
    t.meta_num("rel_tol", quad.rel_tol);
    t.meta("cutoff", "1e4 * max(omega0, Gamma_t)");
    let jobs: Vec<(f64, DampingModel)> = primes
        .iter()
        .flat_map(|&gp| [(gp, DampingModel::Constant), (gp, DampingModel::Jackson)])
        .collect();
    let results = jobs
        .par_iter()
        .map(|&(gp, model)| {
            let split = DampingSplit::radiative(&c, gp)?;
            f_sum_check(&split, &c, &quad, model).map(|r| (gp, model, r))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut passed = true;
    for (gp, model, r) in results {
        let ok = (r.ratio() - 1.0).abs() <= 5e-3;
        if model == DampingModel::Constant {
            passed &= ok;
        }
        t.push(vec![
            Cell::Num(gp),
            Cell::from(match model {
                DampingModel::Constant => "constant",
                DampingModel::Jackson => "jackson",
            }),
            Cell::Num(r.numeric),
            Cell::Num(r.analytic),
            Cell::Num(r.ratio()),
            Cell::Num(r.tail),
            Cell::Num(r.quad_error),
            Cell::from(ok),
        ]);
    }
    t.meta("check.constant_model", if passed { "pass" } else { "FAIL" });
    Ok(Outcome::new(t, passed))
}

pub fn trajectory(cfg: &RunConfig) -> Result<Outcome, RunError> {
    let al = unit_al(cfg)?;
    let eff = effective_oscillator(&al)?;
    let (f0, wd) = cfg.drive;
    let drive = DriveField::new(f0, wd)?;
    let force = move |t: f64| drive.force(t);
    let ode = IntegratorConfig::default();
    let times = cfg.grid.points();
    let with_b = cfg.mode != TrajectoryMode::Forced;
    let columns: &[&str] = if with_b {
        &["t", "x", "v", "b"]
    } else {
        &["t", "x", "v"]
    };
    let mut t = FigureTable::new("trajectory", columns);
    t.meta("mode", cfg.mode.name());
    t.meta("grid", cfg.grid);
    t.meta_num("tau_omega0", al.tau_omega0());
    t.meta("units", "m = omega0 = 1");
    t.meta(
        "initial",
        format!(
            "x0 {:e}, v0 {:e}, b0 {:e}",
            cfg.initial.0, cfg.initial.1, cfg.initial.2
        ),
    );
    t.meta("drive", format!("f0 {f0:e}, omega {wd:e}"));
    t.meta_num("rel_tol", ode.rel_tol);
    t.meta_num("abs_tol", ode.abs_tol);

    let (x0, v0, b0) = cfg.initial;
    let mut state = [x0, v0, b0];
    let mut diverged = None;
    match cfg.mode {
        TrajectoryMode::Forced => {
            let p = OscillatorParams::new(1.0, eff.omega(), eff.gamma() + cfg.gamma_prime)?;
            t.meta_num("Gamma", p.gamma());
            t.meta_num("Omega", p.omega());
            t.push(vec![times[0].into(), x0.into(), v0.into()]);
            for w in times.windows(2) {
                let tr = integrate_forced(&p, force, (state[0], state[1]), (w[0], w[1]), &ode);
                if tr.exhausted {
                    return Err(RunError::Numeric(format!(
                        "step limit reached at t = {}",
                        w[0]
                    )));
                }
                let (_, y) = tr.last().expect("trajectory holds its initial point");
                state = [y[0], y[1], 0.0];
                t.push(vec![w[1].into(), y[0].into(), y[1].into()]);
            }
        }
        TrajectoryMode::Al | TrajectoryMode::AlBounded => {
            let bounded = cfg.mode == TrajectoryMode::AlBounded;
            let cutoff = al_cutoff(x0);
            for (k, w) in times.windows(2).enumerate() {
                let tr = if bounded {
                    integrate_al_bounded(&al, force, (state[0], state[1]), (w[0], w[1]), &ode)?
                } else {
                    let init = ALInitialState::new(state[0], state[1], state[2])?;
                    integrate_al(&al, force, &init, (w[0], w[1]), &ode)
                };
                if k == 0 {
                    state = tr.states[0];
                    t.push(state.iter().fold(vec![w[0].into()], |mut r, v| {
                        r.push((*v).into());
                        r
                    }));
                }
                if tr.exhausted {
                    return Err(RunError::Numeric(format!(
                        "step limit reached at t = {}",
                        w[0]
                    )));
                }
                let crossing = tr.diverged_at.or_else(|| {
                    tr.times
                        .iter()
                        .zip(&tr.states)
                        .find(|(_, y)| !(y[0].abs() <= cutoff))
                        .map(|(t, _)| *t)
                });
                if let Some(td) = crossing {
                    diverged = Some(td);
                    break;
                }
                let (_, y) = tr.last().expect("trajectory holds its initial point");
                state = y;
                t.push(vec![w[1].into(), y[0].into(), y[1].into(), y[2].into()]);
            }
        }
    }
    match diverged {
        Some(td) => t.meta("diverged_at", format!("{td:e}")),
        None => t.meta("diverged_at", "none"),
    };
    Ok(Outcome::new(t, true))
}

pub fn stark(cfg: &RunConfig) -> Result<Outcome, RunError> {
    let c = constants(cfg.units)?;
    let (table, hbar, w_ref, source): (TransitionTable, f64, f64, String) = match &cfg.transitions {
        Some(path) => {
            let table = read_table(path)?;
            let w_ref = table
                .transitions()
                .iter()
                .map(|t| t.omega_n0())
                .fold(f64::INFINITY, f64::min);
            let si = PhysicalConstants::si_electron(w_ref)?;
            (table, si.hbar(), w_ref, path.display().to_string())
        }
        None => {
            let model = QuantumOscillatorModel::from_constants(&c)?;
            (
                oscillator_table(&model, &c)?,
                c.hbar(),
                c.omega0(),
                "quantum oscillator".to_owned(),
            )
        }
    };
    let e0 = cfg.field;
    let mut t = FigureTable::new(
        "stark",
        &[
            "omega_over_w0",
            "chi_re",
            "chi_im",
            "shift_first_order",
            "shift_second_order",
            "shift_total",
            "hbar_gamma_abs",
            "ratio",
        ],
    );
    t.meta("grid", cfg.grid);
    t.meta("table", source);
    t.meta("transitions", table.transitions().len());
    t.meta_num("reference_omega", w_ref);
    t.meta_num("hbar", hbar);
    t.meta_num("field", e0);
    if cfg.transitions.is_none() {
        describe_units(&mut t, cfg.units, &c);
    } else {
        t.meta("units", "SI");
    }
    for x in cfg.grid.points() {
        let w = x * w_ref;
        let chi = chi_dd_susceptibility(&table, w, hbar);
        let s = ac_stark_shift(chi.re, e0);
        // ħΓ_abs = P/ω = ½χ″E₀² for ω > 0
        let hga = if w > 0.0 { 0.5 * chi.im * e0 * e0 } else { 0.0 };
        let ratio = if s.total == 0.0 {
            f64::INFINITY
        } else {
            hga / s.total
        };
        t.push(vec![
            Cell::Num(x),
            Cell::Num(chi.re),
            Cell::Num(chi.im),
            Cell::Num(s.first_order),
            Cell::Num(s.second_order),
            Cell::Num(s.total),
            Cell::Num(hga),
            Cell::Num(ratio),
        ]);
    }
    Ok(Outcome::new(t, true))
}

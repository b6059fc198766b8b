//! The Abraham-Lorentz equation `ẍ - τx⃛ + ω₀²x = f/m`.
//!
//! The characteristic cubic `ζ² - τζ³ + ω₀² = 0` has a complex pair
//! `ζ₁,₃ = u ± iv` and a positive run-away root `ζ₂ = 1/τ - 2u`. The pair
//! defines an ordinary damped oscillator with `Γ = -2u`, `Ω² = u² + v²`, and
//! every solution is that oscillator plus a multiple of `e^{ζ₂t}`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::math::{ceil, cos, exp, sin, sqrt, unit_cbrt};
use crate::oscillator::{DriveField, OscillatorParams};
use crate::quadrature::{integrate_panels, Tolerance};
use crate::{Error, Result};

/// Below this τω₀ the roots come from their power series.
pub const SERIES_LIMIT: f64 = 1e-4;
/// Below this τω₀ (and above [`SERIES_LIMIT`]) the closed form gets one
/// Newton step.
pub const NEWTON_LIMIT: f64 = 1e-2;
/// Largest ζ₂(t - t₀) accepted by the analytic solutions.
pub const GROWTH_LIMIT: f64 = 700.0;
/// Relative residual every returned root must meet.
pub const ROOT_RESIDUAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ALParams {
    mass: f64,
    tau: f64,
    omega0: f64,
}

impl ALParams {
    pub fn new(mass: f64, tau: f64, omega0: f64) -> Result<Self> {
        let p = Self {
            mass: Error::check_positive("mass", mass)?,
            tau: Error::check_positive("tau", tau)?,
            omega0: Error::check_positive("omega0", omega0)?,
        };
        Error::check_finite("tau*omega0", tau * omega0)?;
        Ok(p)
    }

    /// Parameters from the dimensionless product τω₀.
    pub fn from_tau_omega0(mass: f64, tau_omega0: f64, omega0: f64) -> Result<Self> {
        Error::check_positive("tau*omega0", tau_omega0)?;
        Error::check_positive("omega0", omega0)?;
        Self::new(mass, tau_omega0 / omega0, omega0)
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn tau_omega0(&self) -> f64 {
        self.tau * self.omega0
    }

    /// ζ² - τζ³ + ω₀² divided by its largest term.
    pub fn relative_residual(&self, z: Complex64) -> f64 {
        let z2 = z * z;
        let z3 = z2 * z * self.tau;
        let w2 = self.omega0 * self.omega0;
        let scale = z2.norm().max(z3.norm()).max(w2);
        (z2 - z3 + w2).norm() / scale
    }
}

/// How [`char_roots`] evaluated the complex pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootBranch {
    Series,
    ClosedFormNewton,
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ALRoots {
    /// Real cube root entering the closed form, in (0, 1].
    pub w: f64,
    pub u: f64,
    pub v: f64,
    pub zeta1: Complex64,
    pub zeta2: f64,
    pub zeta3: Complex64,
    pub branch: RootBranch,
    /// Largest relative cubic residual over the three roots.
    pub residual: f64,
    /// Set when rounding pushed the cube-root argument out of [0, 1].
    pub clamped: bool,
}

/// `(u/ω₀, v/ω₀)` from their expansions in `a = τω₀`.
pub fn root_series(a: f64) -> (f64, f64) {
    let a2 = a * a;
    let u = -0.5 * a * (1.0 - a2 * (2.0 - a2 * (7.0 - 30.0 * a2)));
    let v = 1.0 - a2 * (5.0 / 8.0 - a2 * (231.0 / 128.0 - a2 * 7293.0 / 1024.0));
    (u, v)
}

/// Closed form of the cubic roots, arranged so that neither `w - 1` nor its
/// square is formed by subtraction.
fn closed_form(a: f64) -> (f64, f64, f64, bool) {
    let s = sqrt(12.0 + 81.0 * a * a);
    let denom = 9.0 * a + s;
    let (w, clamped) = unit_cbrt(12.0 / (denom * denom));
    // w³ - 1 = -18a/denom
    let wm1 = (-18.0 * a / denom) / (w * w + w + 1.0);
    let u = -(wm1 * wm1) / (6.0 * a * w);
    let v = -wm1 * (w + 1.0) / (2.0 * sqrt(3.0) * a * w);
    (w, u, v, clamped)
}

pub fn char_roots(al: &ALParams) -> Result<ALRoots> {
    let a = al.tau_omega0();
    let w0 = al.omega0;
    let (w, cu, cv, clamped) = closed_form(a);
    let (branch, u, v) = if a < SERIES_LIMIT {
        let (u, v) = root_series(a);
        (RootBranch::Series, u * w0, v * w0)
    } else if a < NEWTON_LIMIT {
        let z = Complex64::new(cu * w0, cv * w0);
        let p = z * z * (1.0 - al.tau * z) + w0 * w0;
        let dp = z * (2.0 - 3.0 * al.tau * z);
        let z = z - p / dp;
        (RootBranch::ClosedFormNewton, z.re, z.im)
    } else {
        (RootBranch::ClosedForm, cu * w0, cv * w0)
    };
    let zeta1 = Complex64::new(u, v);
    let zeta3 = zeta1.conj();
    let zeta2 = 1.0 / al.tau - 2.0 * u;
    let residual = al
        .relative_residual(zeta1)
        .max(al.relative_residual(Complex64::new(zeta2, 0.0)));
    if !(residual <= ROOT_RESIDUAL_TOL && u.is_finite() && v.is_finite() && zeta2.is_finite()) {
        return Err(Error::Numeric {
            what: "Abraham-Lorentz characteristic roots",
            estimate: u,
            error: residual,
        });
    }
    Ok(ALRoots {
        w,
        u,
        v,
        zeta1,
        zeta2,
        zeta3,
        branch,
        residual,
        clamped,
    })
}

/// The damped oscillator hidden in the bounded part of the AL dynamics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveOscillator {
    pub params: OscillatorParams,
    /// Ω̃ = v.
    pub omega_tilde: f64,
    pub roots: ALRoots,
    tau: f64,
    omega0: f64,
}

impl EffectiveOscillator {
    pub fn gamma(&self) -> f64 {
        self.params.gamma()
    }

    pub fn omega(&self) -> f64 {
        self.params.omega()
    }

    /// Ω² = u² + v².
    pub fn omega_sq(&self) -> f64 {
        self.roots.u * self.roots.u + self.roots.v * self.roots.v
    }

    /// Leading-order expansions `(Γ, Ω) = (τω₀²[1 - 2(τω₀)²], ω₀[1 - (τω₀)²/2])`.
    pub fn series(&self) -> (f64, f64) {
        let a = self.tau * self.omega0;
        (
            self.tau * self.omega0 * self.omega0 * (1.0 - 2.0 * a * a),
            self.omega0 * (1.0 - 0.5 * a * a),
        )
    }
}

pub fn effective_oscillator(al: &ALParams) -> Result<EffectiveOscillator> {
    let roots = char_roots(al)?;
    let gamma = -2.0 * roots.u;
    let omega = sqrt(roots.u * roots.u + roots.v * roots.v);
    Ok(EffectiveOscillator {
        params: OscillatorParams::new(al.mass, omega, gamma)?,
        omega_tilde: roots.v,
        roots,
        tau: al.tau,
        omega0: al.omega0,
    })
}

/// Elongation, velocity and acceleration at `t₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ALInitialState {
    pub x0: f64,
    pub v0: f64,
    pub b0: f64,
}

impl ALInitialState {
    pub fn new(x0: f64, v0: f64, b0: f64) -> Result<Self> {
        Ok(Self {
            x0: Error::check_finite("x0", x0)?,
            v0: Error::check_finite("v0", v0)?,
            b0: Error::check_finite("b0", b0)?,
        })
    }

    /// The state with `b₀` chosen so that the run-away term vanishes.
    pub fn on_manifold(eff: &EffectiveOscillator, x0: f64, v0: f64) -> Result<Self> {
        Self::new(x0, v0, -(eff.gamma() * v0 + eff.omega_sq() * x0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundedCondition {
    /// b₀ + Γv₀ + Ω²x₀.
    pub residual: f64,
    pub is_on_manifold: bool,
}

pub fn bounded_condition(
    eff: &EffectiveOscillator,
    state: &ALInitialState,
    tol: f64,
) -> BoundedCondition {
    let (g, w2) = (eff.gamma(), eff.omega_sq());
    // grouped so that `on_manifold` states give exactly zero
    let residual = state.b0 + (g * state.v0 + w2 * state.x0);
    let scale = state.b0.abs() + g * state.v0.abs() + w2 * state.x0.abs() + f64::EPSILON;
    BoundedCondition {
        residual,
        is_on_manifold: residual.abs() <= tol * scale,
    }
}

/// τ²/(1 + 4Ω̃²τ²), equal to 1/(ζ₂² + Γζ₂ + Ω²).
fn growth_weight(eff: &EffectiveOscillator) -> f64 {
    let tv = eff.tau * eff.omega_tilde;
    eff.tau * eff.tau / (1.0 + 4.0 * tv * tv)
}

/// Coefficient of `e^{ζ₂(t-t₀)}` in the homogeneous solution.
pub fn runaway_coefficient(eff: &EffectiveOscillator, state: &ALInitialState) -> f64 {
    let cond = bounded_condition(eff, state, 0.0);
    cond.residual * growth_weight(eff)
}

fn check_growth(zeta2: f64, dt: f64) -> Result<()> {
    if !(dt >= 0.0) {
        return Err(Error::Domain("the AL solution needs t >= t0"));
    }
    if zeta2 * dt > GROWTH_LIMIT {
        return Err(Error::Range {
            what: "zeta2*(t - t0)",
            value: zeta2 * dt,
            limit: GROWTH_LIMIT,
        });
    }
    Ok(())
}

/// `x` and its first three derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivatives {
    pub x: f64,
    pub v: f64,
    pub b: f64,
    pub jerk: f64,
}

/// Homogeneous solution `t - t₀ = dt` after the initial state, with exact
/// derivatives.
pub fn homogeneous(
    eff: &EffectiveOscillator,
    state: &ALInitialState,
    dt: f64,
) -> Result<Derivatives> {
    let z = eff.roots.zeta2;
    let bk = runaway_coefficient(eff, state);
    if bk != 0.0 {
        check_growth(z, dt)?;
    } else if !(dt >= 0.0) {
        return Err(Error::Domain("the AL solution needs t >= t0"));
    }
    // x = αφ + βC + γe^{ζ₂t}; d/dt maps (α, β, γ) to (β, -Ω²α - Γβ, ζ₂γ).
    let (g, w2) = (eff.gamma(), eff.omega_sq());
    let (c, phi) = eff.params.kernels(dt);
    let e = if bk == 0.0 { 0.0 } else { exp(z * dt) };
    let mut coeff = (state.x0 - bk, state.v0 - bk * z, bk);
    let mut out = [0.0; 4];
    for slot in out.iter_mut() {
        *slot = coeff.0 * phi + coeff.1 * c + coeff.2 * e;
        coeff = (coeff.1, -w2 * coeff.0 - g * coeff.1, z * coeff.2);
    }
    Ok(Derivatives {
        x: out[0],
        v: out[1],
        b: out[2],
        jerk: out[3],
    })
}

const SOLUTION_TOL: Tolerance = Tolerance {
    rel: 1e-12,
    abs: 0.0,
    max_subdivisions: 4000,
};

fn period_edges(end: f64, step: f64) -> Vec<f64> {
    let n = ceil(end / step).clamp(1.0, 4096.0) as usize;
    (0..=n).map(|k| end * k as f64 / n as f64).collect()
}

/// Unique solution `x(t)` for initial state at `t₀` and an arbitrary force.
pub fn unique_solution<F: Fn(f64) -> f64>(
    al: &ALParams,
    state: &ALInitialState,
    force: F,
    t: f64,
    t0: f64,
) -> Result<f64> {
    let eff = effective_oscillator(al)?;
    let dt = t - t0;
    let xh = homogeneous(&eff, state, dt)?.x;
    if dt == 0.0 {
        return Ok(xh);
    }
    let z = eff.roots.zeta2;
    let bounded_step = (PI / eff.omega_tilde).min(1.0 / eff.gamma()).min(dt);
    let bounded = integrate_panels(
        |s: f64| {
            let (c, phi) = eff.params.kernels(s);
            (phi + z * c) * force(t - s)
        },
        &period_edges(dt, bounded_step),
        SOLUTION_TOL,
    )?;
    // ∫₀^dt e^{ζ₂s'} f(t - s') ds' = e^{ζ₂ dt} ∫₀^dt e^{-ζ₂s} f(t₀ + s) ds
    let mut edges = vec_from_zero_geometric(dt, 1.0 / z);
    edges.dedup();
    let growing = integrate_panels(|s: f64| exp(-z * s) * force(t0 + s), &edges, SOLUTION_TOL)?;
    let weight = growth_weight(&eff) / (al.tau * al.mass);
    Ok(xh + weight * (bounded.value - exp(z * dt) * growing.value))
}

fn vec_from_zero_geometric(end: f64, first: f64) -> Vec<f64> {
    let mut edges = Vec::new();
    edges.push(0.0);
    let mut s = first;
    while s < end && edges.len() < 64 {
        edges.push(s);
        s *= 2.0;
    }
    edges.push(end);
    edges
}

/// [`unique_solution`] for `f = f₀cos(ωt)`, with the force integrals done in
/// closed form.
pub fn unique_solution_sinusoidal(
    al: &ALParams,
    state: &ALInitialState,
    drive: &DriveField,
    t: f64,
    t0: f64,
) -> Result<f64> {
    let eff = effective_oscillator(al)?;
    let dt = t - t0;
    let xh = homogeneous(&eff, state, dt)?.x;
    let roots = eff.roots;
    let z = Complex64::new(roots.zeta2, 0.0);
    let (z1, z3) = (roots.zeta1, roots.zeta3);
    // kernel = -e^{ζ₂s} + a₁e^{ζ₁s} + a₃e^{ζ₃s}
    let terms = [
        (Complex64::new(-1.0, 0.0), z),
        ((z - z3) / (z1 - z3), z1),
        ((z1 - z) / (z1 - z3), z3),
    ];
    let iw = Complex64::new(0.0, drive.omega());
    let mut sum = Complex64::new(0.0, 0.0);
    for (a, lambda) in terms {
        let k = lambda - iw;
        sum += a * ((k * dt).exp() - 1.0) / k;
    }
    let phase = Complex64::new(cos(drive.omega() * t), sin(drive.omega() * t));
    let weight = growth_weight(&eff) / (al.tau * al.mass);
    Ok(xh + weight * drive.f0() * (phase * sum).re)
}

/// The particular solution oscillating with the drive frequency. It is not
/// the steady state: no steady state exists.
pub fn oscillatory_particular(al: &ALParams, drive: &DriveField, t: f64) -> Derivatives {
    let w = drive.omega();
    let det = (al.omega0 - w) * (al.omega0 + w);
    let rad = al.tau * w * w * w;
    let scale = drive.f0() / (al.mass * (det * det + rad * rad));
    let (a, b) = (det * scale, rad * scale);
    // x = a cos ωt + b sin ωt
    let (c, s) = (cos(w * t), sin(w * t));
    let x = a * c + b * s;
    let v = w * (b * c - a * s);
    Derivatives {
        x,
        v,
        b: -w * w * x,
        jerk: -w * w * v,
    }
}

/// X(ω) = ω₀²X₀/(ω₀² - ω² - iτω³) with X₀ = 1/(mω₀²).
pub fn faulty_susceptibility(al: &ALParams, omega: f64) -> Complex64 {
    let det = (al.omega0 - omega) * (al.omega0 + omega);
    let rad = al.tau * omega * omega * omega;
    let d = al.mass * (det * det + rad * rad);
    Complex64::new(det / d, rad / d)
}

/// Frequency where ω·Im X(ω) peaks; root of `τ²s³ + 2s - 2 = 0` for
/// `s = ω²/ω₀²` in units ω₀ = 1.
pub fn faulty_power_peak(al: &ALParams) -> f64 {
    let a2 = al.tau_omega0() * al.tau_omega0();
    let g = |s: f64| a2 * s * s * s + 2.0 * s - 2.0;
    // g(0) < 0 <= g(1); g is increasing.
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    al.omega0 * sqrt(0.5 * (lo + hi))
}

/// Margins standing in for "much less than" in `1 ≫ |1 - ω²/ω₀²| ≫ (τω₀)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidityMargins {
    pub upper: f64,
    pub lower: f64,
}

impl Default for ValidityMargins {
    fn default() -> Self {
        Self {
            upper: 10.0,
            lower: 10.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRatios {
    /// Re X / χ′.
    pub re_ratio: f64,
    /// Im X / χ″.
    pub im_ratio: f64,
    pub in_validity_range: bool,
    /// Set when χ′ or χ″ vanished and a ratio was reported as infinite.
    pub pole: bool,
}

pub fn susceptibility_error_ratios(
    eff: &EffectiveOscillator,
    al: &ALParams,
    omega: f64,
    margins: ValidityMargins,
) -> ErrorRatios {
    let x = faulty_susceptibility(al, omega);
    let chi = crate::oscillator::susceptibility(&eff.params, omega);
    let mut pole = false;
    let mut ratio = |num: f64, den: f64| {
        if den == 0.0 {
            pole = true;
            f64::INFINITY
        } else {
            num / den
        }
    };
    let re_ratio = ratio(x.re, chi.re);
    let im_ratio = ratio(x.im, chi.im);
    let detune = ((al.omega0 - omega) * (al.omega0 + omega) / (al.omega0 * al.omega0)).abs();
    let a = al.tau_omega0();
    ErrorRatios {
        re_ratio,
        im_ratio,
        in_validity_range: margins.upper * detune <= 1.0 && detune >= margins.lower * a * a,
        pole,
    }
}

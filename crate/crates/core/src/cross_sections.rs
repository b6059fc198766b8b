//! Physical constants and the optical observables of a radiating oscillator:
//! absorption and scattering cross sections, the f-sum rule, the photon
//! absorption rate and the optical dipole potential.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::abraham_lorentz::{faulty_susceptibility, ALParams, EffectiveOscillator};
use crate::dispersion::QuadratureConfig;
use crate::math::sqrt;
use crate::oscillator::{susceptibility, OscillatorParams};
use crate::quadrature::{integrate_panels, Tolerance};
use crate::{Error, Result};

/// CODATA 2018 values (exact SI definitions for e, c, ħ).
pub mod codata2018 {
    pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
    pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;
    pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
    pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;
    pub const REDUCED_PLANCK: f64 = 1.054_571_817e-34;
}

/// Charge, mass and field constants together with the quantities derived
/// from them for one resonance frequency ω₀.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    e: f64,
    mass: f64,
    c: f64,
    eps0: f64,
    hbar: f64,
    omega0: f64,
}

impl PhysicalConstants {
    pub fn new(e: f64, mass: f64, c: f64, eps0: f64, hbar: f64, omega0: f64) -> Result<Self> {
        Ok(Self {
            e: Error::check_finite("e", e)?,
            mass: Error::check_positive("mass", mass)?,
            c: Error::check_positive("c", c)?,
            eps0: Error::check_positive("eps0", eps0)?,
            hbar: Error::check_positive("hbar", hbar)?,
            omega0: Error::check_positive("omega0", omega0)?,
        })
    }

    /// An electron in SI units bound at frequency ω₀ (rad/s).
    pub fn si_electron(omega0: f64) -> Result<Self> {
        use codata2018::*;
        Self::new(
            ELEMENTARY_CHARGE,
            ELECTRON_MASS,
            SPEED_OF_LIGHT,
            VACUUM_PERMITTIVITY,
            REDUCED_PLANCK,
            omega0,
        )
    }

    /// Units with ω₀ = m = c = ε₀ = ħ = 1 and the charge chosen so that
    /// τ equals the requested τω₀.
    pub fn natural(tau_omega0: f64) -> Result<Self> {
        Error::check_positive("tau*omega0", tau_omega0)?;
        Self::new(sqrt(6.0 * PI * tau_omega0), 1.0, 1.0, 1.0, 1.0, 1.0)
    }

    pub fn e(&self) -> f64 {
        self.e
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn eps0(&self) -> f64 {
        self.eps0
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    /// Classical radius R = e²/(4πε₀mc²).
    pub fn classical_radius(&self) -> f64 {
        self.e * self.e / (4.0 * PI * self.eps0 * self.mass * self.c * self.c)
    }

    /// τ = e²/(6πε₀mc³).
    pub fn tau(&self) -> f64 {
        self.e * self.e / (6.0 * PI * self.eps0 * self.mass * self.c * self.c * self.c)
    }

    /// α = e²/(4πε₀ħc).
    pub fn alpha(&self) -> f64 {
        self.e * self.e / (4.0 * PI * self.eps0 * self.hbar * self.c)
    }

    /// ƛ₀ = c/ω₀.
    pub fn lambdabar0(&self) -> f64 {
        self.c / self.omega0
    }

    pub fn tau_omega0(&self) -> f64 {
        self.tau() * self.omega0
    }

    /// Radiative damping Γ = τω₀².
    pub fn gamma_rad(&self) -> f64 {
        self.tau() * self.omega0 * self.omega0
    }

    pub fn al_params(&self) -> Result<ALParams> {
        ALParams::new(self.mass, self.tau(), self.omega0)
    }
}

/// Radiative, non-radiative and total damping constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampingSplit {
    gamma_rad: f64,
    gamma_prime: f64,
    gamma_total: f64,
}

impl DampingSplit {
    pub fn new(gamma_rad: f64, gamma_prime: f64) -> Result<Self> {
        let gamma_rad = Error::check_nonnegative("gamma_rad", gamma_rad)?;
        let gamma_prime = Error::check_nonnegative("gamma_prime", gamma_prime)?;
        Ok(Self {
            gamma_rad,
            gamma_prime,
            gamma_total: gamma_rad + gamma_prime,
        })
    }

    /// Γ = τω₀² from the constants plus a non-radiative Γ′.
    pub fn radiative(consts: &PhysicalConstants, gamma_prime: f64) -> Result<Self> {
        Self::new(consts.gamma_rad(), gamma_prime)
    }

    pub fn gamma_rad(&self) -> f64 {
        self.gamma_rad
    }

    pub fn gamma_prime(&self) -> f64 {
        self.gamma_prime
    }

    pub fn gamma_total(&self) -> f64 {
        self.gamma_total
    }
}

/// How the total damping depends on frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DampingModel {
    /// Γ_t = Γ + Γ′.
    Constant,
    /// Γ_t(ω) = Γ′ + (ω/ω₀)²Γ, the textbook variant kept for diagnostics.
    Jackson,
}

impl DampingModel {
    pub fn gamma_total(&self, split: &DampingSplit, omega: f64, omega0: f64) -> f64 {
        match self {
            DampingModel::Constant => split.gamma_total,
            DampingModel::Jackson => {
                let r = omega / omega0;
                split.gamma_prime + r * r * split.gamma_rad
            }
        }
    }
}

/// σ_abs = 6πƛ₀²ΓΓ_tω²/[(ω₀² - ω²)² + (ωΓ_t)²].
pub fn sigma_abs(omega: f64, omega0: f64, split: &DampingSplit, lambdabar0: f64) -> f64 {
    sigma_abs_model(omega, omega0, split, lambdabar0, DampingModel::Constant)
}

pub fn sigma_abs_model(
    omega: f64,
    omega0: f64,
    split: &DampingSplit,
    lambdabar0: f64,
    model: DampingModel,
) -> f64 {
    let gt = model.gamma_total(split, omega, omega0);
    let det = (omega0 - omega) * (omega0 + omega);
    let loss = omega * gt;
    let den = det * det + loss * loss;
    if den == 0.0 {
        return 0.0;
    }
    6.0 * PI * lambdabar0 * lambdabar0 * split.gamma_rad * gt * omega * omega / den
}

/// σ_abs as absorbed power over incident intensity ε₀cE₀²/2, with the
/// oscillator (m, Ω = ω₀, Γ_t) driven by f₀ = eE₀.
pub fn sigma_abs_from_power(
    omega: f64,
    split: &DampingSplit,
    consts: &PhysicalConstants,
) -> Result<f64> {
    let osc = OscillatorParams::new(consts.mass, consts.omega0, split.gamma_total)?;
    let chi_im = susceptibility(&osc, omega).im;
    // P/(E₀²) = ½ωχ″e²
    Ok(omega * chi_im * consts.e * consts.e / (consts.eps0 * consts.c))
}

/// Numeric and analytic sides of the f-sum rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FSumCheck {
    pub numeric: f64,
    /// πe²/(2ε₀cm).
    pub analytic: f64,
    pub rel_err: f64,
    /// Integration cutoff Λ.
    pub cutoff: f64,
    /// Contribution above Λ included in `numeric`.
    pub tail: f64,
    pub quad_error: f64,
}

impl FSumCheck {
    pub fn ratio(&self) -> f64 {
        self.numeric / self.analytic
    }
}

/// ∫₀^∞ σ_abs dω. The constant-damping tail above Λ = 10⁴·max(ω₀, Γ_t) is
/// added analytically; the frequency-dependent model has no such closed
/// form and its tail is integrated after the substitution ω = Λ/s.
/// Only the tolerance fields of `cfg` are used.
pub fn f_sum_check(
    split: &DampingSplit,
    consts: &PhysicalConstants,
    cfg: &QuadratureConfig,
    model: DampingModel,
) -> Result<FSumCheck> {
    let w0 = consts.omega0;
    let lb = consts.lambdabar0();
    let gt = split.gamma_total;
    let cutoff = 1e4 * w0.max(gt);
    let mut edges = Vec::new();
    edges.push(0.0);
    edges.push(w0);
    edges.push(cutoff);
    let mut d = gt.max(1e-12 * w0);
    while d < cutoff {
        for e in [w0 - d, w0 + d] {
            if 0.0 < e && e < cutoff {
                edges.push(e);
            }
        }
        d *= 10.0;
    }
    edges.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    edges.dedup();
    let tol = Tolerance::new(cfg.rel_tol, 0.0, cfg.max_subdivisions);
    let body = integrate_panels(|w| sigma_abs_model(w, w0, split, lb, model), &edges, tol)?;
    let (tail, tail_err) = match model {
        DampingModel::Constant => {
            let corr = (2.0 * w0 * w0 - gt * gt) / (3.0 * cutoff * cutoff);
            (
                6.0 * PI * lb * lb * split.gamma_rad * gt / cutoff * (1.0 + corr),
                0.0,
            )
        }
        DampingModel::Jackson => {
            let mut edges = alloc::vec![0.0];
            let mut s = 1e-12;
            while s < 1.0 {
                edges.push(s);
                s *= 10.0;
            }
            edges.push(1.0);
            let est = integrate_panels(
                |s: f64| {
                    if s == 0.0 {
                        0.0
                    } else {
                        let w = cutoff / s;
                        sigma_abs_model(w, w0, split, lb, model) * cutoff / (s * s)
                    }
                },
                &edges,
                tol,
            )?;
            (est.value, est.abs_error)
        }
    };
    let analytic = PI * consts.e * consts.e / (2.0 * consts.eps0 * consts.c * consts.mass);
    let numeric = body.value + tail;
    Ok(FSumCheck {
        numeric,
        analytic,
        rel_err: (numeric - analytic).abs() / analytic,
        cutoff,
        tail,
        quad_error: body.abs_error + tail_err,
    })
}

/// Γ_abs = χ″e²E₀²/(2ħ) for ω > 0, zero otherwise.
pub fn gamma_abs(omega: f64, e0: f64, chi_im: f64, consts: &PhysicalConstants) -> f64 {
    if omega > 0.0 {
        chi_im * consts.e * consts.e * e0 * e0 / (2.0 * consts.hbar)
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Rayleigh,
    Resonant,
    Thomson,
    Unlabeled,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scattering {
    pub value: f64,
    pub regime: Regime,
}

/// σ_sc = (8π/3)R²ω⁴/[(ω₀² - ω²)² + (ωΓ_t)²] with Ω = ω₀.
pub fn sigma_sc(
    omega: f64,
    omega0: f64,
    split: &DampingSplit,
    consts: &PhysicalConstants,
) -> Scattering {
    let gt = split.gamma_total;
    let det = (omega0 - omega) * (omega0 + omega);
    let loss = omega * gt;
    let w2 = omega * omega;
    let r = consts.classical_radius();
    let value = 8.0 * PI / 3.0 * r * r * w2 * w2 / (det * det + loss * loss);
    let regime = if omega.abs() < 0.1 * omega0 {
        Regime::Rayleigh
    } else if (omega - omega0).abs() < 10.0 * gt {
        Regime::Resonant
    } else if omega.abs() > 10.0 * omega0 {
        Regime::Thomson
    } else {
        Regime::Unlabeled
    };
    Scattering { value, regime }
}

/// 8πR²/3.
pub fn thomson_cross_section(consts: &PhysicalConstants) -> f64 {
    let r = consts.classical_radius();
    8.0 * PI / 3.0 * r * r
}

/// Lorentzian line shapes valid near resonance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonantForms {
    pub sigma_abs: f64,
    pub sigma_sc: f64,
    /// Non-radiative (reaction) part.
    pub sigma_r: f64,
    /// |ω - ω₀| < ω₀/10.
    pub valid: bool,
}

pub fn resonant_decomposition(
    omega: f64,
    omega0: f64,
    split: &DampingSplit,
    consts: &PhysicalConstants,
) -> ResonantForms {
    let lb = consts.lambdabar0();
    let d = omega - omega0;
    let hw = 0.5 * split.gamma_total;
    let shape = 6.0 * PI * lb * lb / (4.0 * (d * d + hw * hw));
    let g = split.gamma_rad;
    ResonantForms {
        sigma_abs: shape * g * split.gamma_total,
        sigma_sc: shape * g * g,
        sigma_r: shape * g * split.gamma_prime,
        valid: d.abs() < 0.1 * omega0,
    }
}

/// Optical dipole potential and the ratio ħΓ_abs/U_dip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleRatio {
    /// U_dip = -χ′e²E₀²/4.
    pub u_dip: f64,
    pub hbar_gamma_abs: f64,
    /// ħΓ_abs/U_dip; infinite at the pole ω = Ω.
    pub ratio: f64,
    pub pole: bool,
}

impl DipoleRatio {
    /// 2ωΓ/(ω² - Ω²).
    pub fn closed_form(omega: f64, osc: &OscillatorParams) -> f64 {
        let w = osc.omega();
        2.0 * omega * osc.gamma() / ((omega - w) * (omega + w))
    }

    /// -2ωΓ/Ω², the limit ω ≪ Ω.
    pub fn quest_asymptote(omega: f64, osc: &OscillatorParams) -> f64 {
        -2.0 * omega * osc.gamma() / (osc.omega() * osc.omega())
    }

    /// Γ/Δ with Δ = ω - Ω, the limit |Δ| ≪ Ω.
    pub fn fort_asymptote(omega: f64, osc: &OscillatorParams) -> f64 {
        osc.gamma() / (omega - osc.omega())
    }
}

pub fn dipole_potential_and_ratio(
    omega: f64,
    e0: f64,
    osc: &OscillatorParams,
    consts: &PhysicalConstants,
) -> Result<DipoleRatio> {
    if !(omega >= 0.0) {
        return Err(Error::Domain("dipole potential ratio needs omega >= 0"));
    }
    let chi = susceptibility(osc, omega);
    let u_dip = -0.25 * chi.re * consts.e * consts.e * e0 * e0;
    let hbar_gamma_abs = consts.hbar * gamma_abs(omega, e0, chi.im, consts);
    let pole = u_dip == 0.0;
    Ok(DipoleRatio {
        u_dip,
        hbar_gamma_abs,
        ratio: if pole {
            f64::INFINITY
        } else {
            hbar_gamma_abs / u_dip
        },
        pole,
    })
}

/// Absorption rate and rate/potential ratio from the correct susceptibility
/// and from the faulty X(ω), at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaultyRateComparison {
    pub true_rate: f64,
    pub faulty_rate: f64,
    /// true_rate / faulty_rate, close to (Ω/ω)² for ω ≪ Ω.
    pub rate_factor: f64,
    pub true_ratio: f64,
    pub faulty_ratio: f64,
}

pub fn faulty_rate_comparison(
    omega: f64,
    e0: f64,
    al: &ALParams,
    eff: &EffectiveOscillator,
    consts: &PhysicalConstants,
) -> Result<FaultyRateComparison> {
    let good = dipole_potential_and_ratio(omega, e0, &eff.params, consts)?;
    let x = faulty_susceptibility(al, omega);
    let faulty_rate = gamma_abs(omega, e0, x.im, consts);
    let faulty_u = -0.25 * x.re * consts.e * consts.e * e0 * e0;
    let true_rate = good.hbar_gamma_abs / consts.hbar;
    Ok(FaultyRateComparison {
        true_rate,
        faulty_rate,
        rate_factor: true_rate / faulty_rate,
        true_ratio: good.ratio,
        faulty_ratio: consts.hbar * faulty_rate / faulty_u,
    })
}

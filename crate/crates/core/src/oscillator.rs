//! The classical forced oscillator `m(x'' + Γx' + Ω²x) = f(t)`.
//!
//! All formulas carry the mass explicitly, so SI and dimensionless units use
//! the same code. The response function χ(t) is purely imaginary; internally
//! it is handled through its real surrogate `C(t) = i·m·χ(t)`, which is the
//! solution of the homogeneous equation with `x(0) = 0, x'(0) = 1`.

use num_complex::Complex64;

use crate::math::{atan, atan2, cos, cosh, exp, sin, sinh, sqrt};
use crate::{Error, Result};

/// `|Γ - 2Ω| < CRITICAL_BAND·Ω` is evaluated by the confluent series.
pub const CRITICAL_BAND: f64 = 1e-8;

/// Mass, resonance frequency Ω and damping constant Γ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    mass: f64,
    omega: f64,
    gamma: f64,
}

impl OscillatorParams {
    pub fn new(mass: f64, omega: f64, gamma: f64) -> Result<Self> {
        Ok(Self {
            mass: Error::check_positive("mass", mass)?,
            omega: Error::check_positive("omega", omega)?,
            gamma: Error::check_nonnegative("gamma", gamma)?,
        })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// χ̃₀ = 1/(mΩ²).
    pub fn static_susceptibility(&self) -> f64 {
        1.0 / (self.mass * self.omega * self.omega)
    }

    /// Ω̃² = Ω² - (Γ/2)², factored to keep relative accuracy near critical
    /// damping. Negative in the overdamped regime.
    pub fn omega_tilde_sq(&self) -> f64 {
        let half = 0.5 * self.gamma;
        (self.omega - half) * (self.omega + half)
    }

    pub fn damping(&self) -> Damping {
        let d = self.gamma - 2.0 * self.omega;
        if d.abs() < CRITICAL_BAND * self.omega {
            Damping::Critical
        } else if d < 0.0 {
            Damping::Under
        } else {
            Damping::Over
        }
    }

    /// Returns `(C(t), φ(t))` for `t ≥ 0`.
    pub(crate) fn kernels(&self, t: f64) -> (f64, f64) {
        debug_assert!(t >= 0.0);
        let half = 0.5 * self.gamma;
        let q = self.omega_tilde_sq();
        match self.damping() {
            Damping::Critical => {
                let decay = exp(-half * t);
                if decay == 0.0 {
                    return (0.0, 0.0);
                }
                let (s, c) = confluent_series(q, t);
                (decay * s, decay * (c + half * s))
            }
            Damping::Under => {
                let w = sqrt(q);
                let decay = exp(-half * t);
                let (sn, cs) = (sin(w * t), cos(w * t));
                (decay * sn / w, decay * (cs + half * sn / w))
            }
            Damping::Over => {
                let k = sqrt(-q);
                let kt = k * t;
                if kt < 20.0 {
                    let decay = exp(-half * t);
                    let sh = sinh(kt) / k;
                    (decay * sh, decay * (cosh(kt) + half * sh))
                } else {
                    // e^{-Γt/2}·sinh(kt) without overflowing sinh.
                    let grow = 0.5 * exp((k - half) * t);
                    let fall = 0.5 * exp(-(k + half) * t);
                    let sh = (grow - fall) / k;
                    (sh, grow + fall + half * sh)
                }
            }
        }
    }
}

/// `sin(√q t)/√q` and `cos(√q t)` as power series in `q t²`; valid for either
/// sign of `q` and free of the 0/0 at `q = 0`.
fn confluent_series(q: f64, t: f64) -> (f64, f64) {
    let x = -q * t * t;
    let (mut s_term, mut c_term) = (t, 1.0);
    let (mut s, mut c) = (s_term, c_term);
    for n in 1..60 {
        let n = n as f64;
        s_term *= x / ((2.0 * n) * (2.0 * n + 1.0));
        c_term *= x / ((2.0 * n - 1.0) * (2.0 * n));
        s += s_term;
        c += c_term;
        if s_term.abs() <= 1e-18 * s.abs() && c_term.abs() <= 1e-18 * c.abs() {
            break;
        }
    }
    (s, c)
}

/// Damping regime as selected by [`OscillatorParams::damping`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Damping {
    Under,
    Critical,
    Over,
}

/// Frequencies derived from (Ω, Γ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedFreqs {
    /// Ω̃, real for Γ < 2Ω and positive imaginary otherwise.
    pub omega_tilde: Complex64,
    /// ϑ = arctan(Γ/2Ω̃); only defined while Ω̃ is real.
    pub theta: Option<f64>,
    pub zeta1: Complex64,
    pub zeta2: Complex64,
    /// Frequency of maximum absorbed power, Ω.
    pub omega_r: f64,
    /// Frequency of maximum amplitude; 0 when Γ² ≥ 2Ω² and the amplitude
    /// falls monotonically.
    pub omega_m: f64,
    pub damping: Damping,
}

pub fn characteristic_freqs(params: &OscillatorParams) -> DerivedFreqs {
    let (omega, gamma) = (params.omega, params.gamma);
    let half = 0.5 * gamma;
    let q = params.omega_tilde_sq();
    let (omega_tilde, theta, zeta1, zeta2) = if q > 0.0 {
        let w = sqrt(q);
        (
            Complex64::new(w, 0.0),
            Some(atan(half / w)),
            Complex64::new(-half, w),
            Complex64::new(-half, -w),
        )
    } else {
        let k = sqrt(-q);
        let z2 = -half - k;
        // ζ₁ = Ω²/ζ₂ avoids the cancellation in -Γ/2 + k.
        let z1 = if z2 != 0.0 { omega * omega / z2 } else { 0.0 };
        (
            Complex64::new(0.0, k),
            None,
            Complex64::new(z1, 0.0),
            Complex64::new(z2, 0.0),
        )
    };
    let radicand = 1.0 - gamma * gamma / (2.0 * omega * omega);
    let omega_m = if radicand > 0.0 {
        omega * sqrt(radicand)
    } else {
        0.0
    };
    DerivedFreqs {
        omega_tilde,
        theta,
        zeta1,
        zeta2,
        omega_r: omega,
        omega_m,
        damping: params.damping(),
    }
}

/// Response and relaxation function at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseRelaxation {
    /// `C(t) = i·m·χ(t)`, odd in `t`.
    pub kernel: f64,
    /// φ(t), even in `t`, φ(0) = 1.
    pub relaxation: f64,
    mass: f64,
}

impl ResponseRelaxation {
    /// χ(t) = C(t)/(i m), purely imaginary.
    pub fn chi(&self) -> Complex64 {
        Complex64::new(0.0, -self.kernel / self.mass)
    }

    /// i·χ(t) = C(t)/m, the real kernel of the forced solution.
    pub fn i_chi(&self) -> f64 {
        self.kernel / self.mass
    }
}

/// χ(t) and φ(t) extended to negative `t` by χ(-t) = -χ(t), φ(-t) = φ(t).
pub fn response_relaxation(params: &OscillatorParams, t: f64) -> Result<ResponseRelaxation> {
    if !t.is_finite() {
        return Err(Error::Domain("response/relaxation time must be finite"));
    }
    let (c, phi) = params.kernels(t.abs());
    Ok(ResponseRelaxation {
        kernel: if t < 0.0 { -c } else { c },
        relaxation: phi,
        mass: params.mass,
    })
}

/// χ̃(ω + io) = χ'(ω) + iχ''(ω).
pub fn susceptibility(params: &OscillatorParams, omega: f64) -> Complex64 {
    let detuning = (params.omega - omega) * (params.omega + omega);
    let loss = omega * params.gamma;
    let denom = params.mass * (detuning * detuning + loss * loss);
    Complex64::new(detuning / denom, loss / denom)
}

fn transform_sign(z: Complex64) -> Result<f64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain("transform argument must be finite"));
    }
    if z.im == 0.0 {
        return Err(Error::Domain(
            "Fourier-Laplace transform is undefined on the real axis; use ω ± io",
        ));
    }
    Ok(z.im.signum())
}

/// χ̃(z) = (1/m)/(Ω² - z(z + s·iΓ)) for `z` off the real axis, `s = sign Im z`.
pub fn susceptibility_at(params: &OscillatorParams, z: Complex64) -> Result<Complex64> {
    let s = transform_sign(z)?;
    let denom = params.omega * params.omega - z * (z + Complex64::new(0.0, s * params.gamma));
    Ok(Complex64::new(1.0 / params.mass, 0.0) / denom)
}

/// φ̃(z) = (z + s·iΓ)/(Ω² - z(z + s·iΓ)).
pub fn relaxation_transform_at(params: &OscillatorParams, z: Complex64) -> Result<Complex64> {
    let s = transform_sign(z)?;
    let shifted = z + Complex64::new(0.0, s * params.gamma);
    Ok(shifted / (params.omega * params.omega - z * shifted))
}

/// Spectral function of the relaxation function, φ''(ω) = ΓΩ²/D(ω).
pub fn relaxation_spectrum(params: &OscillatorParams, omega: f64) -> f64 {
    let detuning = (params.omega - omega) * (params.omega + omega);
    let loss = omega * params.gamma;
    params.gamma * params.omega * params.omega / (detuning * detuning + loss * loss)
}

/// Force `f₀ cos(ωt)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveField {
    f0: f64,
    omega: f64,
}

impl DriveField {
    pub fn new(f0: f64, omega: f64) -> Result<Self> {
        Ok(Self {
            f0: Error::check_finite("f0", f0)?,
            omega: Error::check_finite("drive omega", omega)?,
        })
    }

    pub fn f0(&self) -> f64 {
        self.f0
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn force(&self, t: f64) -> f64 {
        self.f0 * cos(self.omega * t)
    }
}

/// Steady state written as `A cos(ωt - φ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyStateForm {
    pub amplitude: f64,
    /// In `[0, π]` for `ω ≥ 0` and `f₀ > 0`.
    pub phase_lag: f64,
    pub chi_re: f64,
    pub chi_im: f64,
}

/// ξ(t) = f₀[χ'(ω) cos ωt + χ''(ω) sin ωt].
pub fn steady_state(params: &OscillatorParams, drive: &DriveField, t: f64) -> f64 {
    let chi = susceptibility(params, drive.omega);
    let wt = drive.omega * t;
    drive.f0 * (chi.re * cos(wt) + chi.im * sin(wt))
}

pub fn steady_state_form(params: &OscillatorParams, drive: &DriveField) -> SteadyStateForm {
    let chi = susceptibility(params, drive.omega);
    let (cr, ci) = (drive.f0 * chi.re, drive.f0 * chi.im);
    SteadyStateForm {
        amplitude: sqrt(cr * cr + ci * ci),
        phase_lag: atan2(ci, cr),
        chi_re: chi.re,
        chi_im: chi.im,
    }
}

/// A_m = f₀/(mΩ̃Γ), the amplitude bound; `None` unless 0 < Γ < 2Ω.
pub fn max_amplitude(params: &OscillatorParams, f0: f64) -> Option<f64> {
    let q = params.omega_tilde_sq();
    (q > 0.0 && params.gamma > 0.0).then(|| f0.abs() / (params.mass * sqrt(q) * params.gamma))
}

/// Average absorbed power P(ω) = ½ ω χ''(ω) f₀².
pub fn absorbed_power(params: &OscillatorParams, drive: &DriveField) -> f64 {
    let chi = susceptibility(params, drive.omega);
    0.5 * drive.omega * chi.im * drive.f0 * drive.f0
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn p(m: f64, omega: f64, gamma: f64) -> OscillatorParams {
        OscillatorParams::new(m, omega, gamma).unwrap()
    }

    #[test]
    fn rejects_invalid_params() {
        assert!(OscillatorParams::new(0.0, 1.0, 0.1).is_err());
        assert!(OscillatorParams::new(1.0, -1.0, 0.1).is_err());
        assert!(OscillatorParams::new(1.0, 1.0, -0.1).is_err());
        assert!(OscillatorParams::new(1.0, f64::NAN, 0.1).is_err());
        assert!(OscillatorParams::new(1.0, 1.0, 0.0).is_ok());
    }

    #[test]
    fn initial_values() {
        let r = response_relaxation(&p(1.0, 1.0, 0.1), 0.0).unwrap();
        assert_eq!(r.chi(), Complex64::new(0.0, 0.0));
        assert_eq!(r.relaxation, 1.0);
    }

    #[test]
    fn parity_at_minus_five() {
        let params = p(1.0, 1.0, 0.1);
        let fwd = response_relaxation(&params, 5.0).unwrap();
        let bwd = response_relaxation(&params, -5.0).unwrap();
        assert_eq!(bwd.chi(), -fwd.chi());
        assert_eq!(bwd.relaxation, fwd.relaxation);
    }

    #[test]
    fn non_finite_time_is_domain_error() {
        assert!(matches!(
            response_relaxation(&p(1.0, 1.0, 0.1), f64::INFINITY),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn trig_form_matches_root_form() {
        // φ = (ζ₁e^{ζ₂t} - ζ₂e^{ζ₁t})/(ζ₁ - ζ₂), C = (e^{ζ₁t} - e^{ζ₂t})/(ζ₁ - ζ₂)
        for params in [p(2.0, 1.3, 0.4), p(1.0, 1.0, 3.0)] {
            let f = characteristic_freqs(&params);
            for &t in &[0.3, 1.7, 4.0] {
                let (e1, e2) = ((f.zeta1 * t).exp(), (f.zeta2 * t).exp());
                let dz = f.zeta1 - f.zeta2;
                let c = (e1 - e2) / dz;
                let phi = (f.zeta1 * e2 - f.zeta2 * e1) / dz;
                let r = response_relaxation(&params, t).unwrap();
                assert!((c.re - r.kernel).abs() < 1e-13 && c.im.abs() < 1e-13);
                assert!((phi.re - r.relaxation).abs() < 1e-13 && phi.im.abs() < 1e-13);
            }
        }
    }

    #[test]
    fn confluent_branch_is_continuous() {
        let exact = p(1.0, 1.0, 2.0);
        assert_eq!(exact.damping(), Damping::Critical);
        for &t in &[0.5, 2.0, 10.0] {
            let r = response_relaxation(&exact, t).unwrap();
            let decay = libm::exp(-t);
            assert!((r.kernel - t * decay).abs() < 1e-15);
            assert!((r.relaxation - (1.0 + t) * decay).abs() < 1e-15);
            for g in [2.0 - 2e-7, 2.0 + 2e-7] {
                let near = response_relaxation(&p(1.0, 1.0, g), t).unwrap();
                assert!((near.kernel - r.kernel).abs() < 1e-6);
                assert!((near.relaxation - r.relaxation).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn overdamped_long_times_do_not_overflow() {
        let params = p(1.0, 1.0, 1e4);
        let r = response_relaxation(&params, 1e6).unwrap();
        assert!(r.kernel.is_finite() && r.relaxation.is_finite());
        // slow root ≈ -Ω²/Γ = -1e-4
        let expected = libm::exp(-1e-4 * 1e6);
        assert!((r.relaxation / expected - 1.0).abs() < 1e-3);
    }

    #[test]
    fn static_and_resonant_susceptibility() {
        let params = p(1.0, 1.0, 0.1);
        assert_eq!(susceptibility(&params, 0.0), Complex64::new(1.0, 0.0));
        let res = susceptibility(&params, 1.0);
        assert_eq!(res.re, 0.0);
        assert!((res.im - 10.0).abs() < 1e-12);
        assert_eq!(params.static_susceptibility(), 1.0);
    }

    #[test]
    fn complex_overload_rejects_real_axis() {
        let params = p(1.0, 1.0, 0.1);
        assert!(susceptibility_at(&params, Complex64::new(0.5, 0.0)).is_err());
        let z = Complex64::new(0.5, 1e-12);
        let boundary = susceptibility_at(&params, z).unwrap();
        assert!((boundary - susceptibility(&params, 0.5)).norm() < 1e-9);
        let below = susceptibility_at(&params, z.conj()).unwrap();
        assert!((below - boundary.conj()).norm() < 1e-9);
    }

    #[test]
    fn characteristic_frequencies() {
        let undamped = characteristic_freqs(&p(1.0, 1.0, 0.0));
        assert_eq!(undamped.omega_tilde, Complex64::new(1.0, 0.0));
        assert_eq!(undamped.theta, Some(0.0));
        assert_eq!(undamped.omega_m, 1.0);
        assert_eq!(undamped.omega_r, 1.0);

        let f = characteristic_freqs(&p(1.0, 1.0, 0.5));
        let (wm, wt) = (libm::sqrt(1.0 - 0.125), libm::sqrt(1.0 - 0.0625));
        assert!((f.omega_m - wm).abs() < 1e-15);
        assert!((f.omega_tilde.re - wt).abs() < 1e-15);
        assert!((f.omega_m - 0.93541).abs() < 1e-5 && (f.omega_tilde.re - 0.96825).abs() < 1e-5);
        assert!(f.omega_m < f.omega_tilde.re && f.omega_tilde.re < f.omega_r);

        let over = characteristic_freqs(&p(1.0, 1.0, 3.0));
        assert_eq!(over.damping, Damping::Over);
        assert_eq!(over.omega_tilde.re, 0.0);
        assert!((over.omega_tilde.im - libm::sqrt(1.25)).abs() < 1e-15);
        assert!(over.theta.is_none());
        assert_eq!(over.omega_m, 0.0);
    }

    #[test]
    fn steady_state_static_and_resonant() {
        let params = p(1.0, 1.0, 0.1);
        let stat = DriveField::new(1.0, 0.0).unwrap();
        for &t in &[-3.0, 0.0, 7.5] {
            assert_eq!(steady_state(&params, &stat, t), 1.0);
        }
        let res = steady_state_form(&params, &DriveField::new(1.0, 1.0).unwrap());
        assert!((res.amplitude - 10.0).abs() < 1e-12);
        assert!((res.phase_lag - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn amplitude_below_bound() {
        let params = p(1.3, 2.0, 0.7);
        let am = max_amplitude(&params, 2.0).unwrap();
        let mut best: f64 = 0.0;
        for k in 0..4000 {
            let w = k as f64 * 1e-3;
            let form = steady_state_form(&params, &DriveField::new(2.0, w).unwrap());
            assert!(form.amplitude <= am * (1.0 + 1e-12));
            assert!((0.0..=PI).contains(&form.phase_lag));
            best = best.max(form.amplitude);
        }
        assert!(best > am * (1.0 - 1e-5));
    }

    #[test]
    fn absorbed_power_values() {
        let params = p(1.0, 1.0, 0.1);
        assert_eq!(
            absorbed_power(&params, &DriveField::new(1.0, 0.0).unwrap()),
            0.0
        );
        let at_res = absorbed_power(&params, &DriveField::new(1.0, 1.0).unwrap());
        assert!((at_res - 5.0).abs() < 1e-12);
    }
}

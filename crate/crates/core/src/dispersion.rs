//! Fourier-Laplace transforms and principal-value Kramers-Kronig integrals.
//!
//! The principal value `(1/π) PV ∫ g(ω̄)/(ω̄ - ω) dω̄` is computed by
//! singularity subtraction: inside a window `[ω - δ, ω + δ]` the integrand
//! is replaced by `(g(ω̄) - g(ω))/(ω̄ - ω)`, which is bounded, and the
//! subtracted part is added back as `g(ω)·ln((ω+δ - ω)/(ω - (ω-δ)))`. The
//! window is split at `ω` so no quadrature node lands on the singularity.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::math::{ceil, exp, ln};
use crate::quadrature::{integrate_panels, Tolerance};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Half-width δ of the subtraction window.
    pub excision_halfwidth: f64,
    /// Λ: frequency cutoff for KK integrals, time cutoff for transforms.
    pub truncation: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl QuadratureConfig {
    pub fn new(
        excision_halfwidth: f64,
        truncation: f64,
        rel_tol: f64,
        max_subdivisions: usize,
    ) -> Result<Self> {
        Error::check_positive("excision_halfwidth", excision_halfwidth)?;
        Error::check_positive("truncation", truncation)?;
        if !(rel_tol > 0.0 && rel_tol <= 1e-2) {
            return Err(Error::InvalidParameter {
                name: "rel_tol",
                value: rel_tol,
            });
        }
        if max_subdivisions == 0 {
            return Err(Error::InvalidParameter {
                name: "max_subdivisions",
                value: 0.0,
            });
        }
        Ok(Self {
            excision_halfwidth,
            truncation,
            rel_tol,
            max_subdivisions,
        })
    }

    /// Λ = 100·max(scale, max_freq), δ = scale/100, rel_tol 1e-9.
    pub fn for_scale(scale: f64, max_freq: f64) -> Result<Self> {
        let scale = Error::check_positive("scale", scale)?;
        Self::new(0.01 * scale, 100.0 * scale.max(max_freq.abs()), 1e-9, 4000)
    }

    fn tolerance(&self) -> Tolerance {
        Tolerance::new(self.rel_tol, 0.0, self.max_subdivisions)
    }
}

/// A transform value and its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transformed<T = f64> {
    pub value: T,
    pub error: f64,
}

/// Edges from `lo` to `hi` refined geometrically towards `omega`, which is
/// itself an edge when it lies inside.
fn singular_edges(omega: f64, lo: f64, hi: f64, delta: f64, extra: &[f64]) -> Vec<f64> {
    let mut edges = Vec::new();
    edges.push(lo);
    edges.push(hi);
    if lo < omega && omega < hi {
        edges.push(omega);
        let mut d = delta;
        while omega - d > lo || omega + d < hi {
            for e in [omega - d, omega + d] {
                if lo < e && e < hi {
                    edges.push(e);
                }
            }
            d *= 2.0;
        }
    }
    edges.extend(extra.iter().copied().filter(|&e| lo < e && e < hi));
    edges.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    edges.dedup();
    edges
}

/// `(1/π) PV ∫_lo^hi g(ω̄)/(ω̄ - ω) dω̄` without any tail treatment.
fn principal_value<G: Fn(f64) -> f64>(
    g: &G,
    omega: f64,
    lo: f64,
    hi: f64,
    delta: f64,
    extra: &[f64],
    tol: Tolerance,
) -> Result<Transformed> {
    if !omega.is_finite() {
        return Err(Error::Domain("Kramers-Kronig frequency must be finite"));
    }
    if omega == lo || omega == hi {
        return Err(Error::Domain(
            "principal value at an integration endpoint diverges",
        ));
    }
    let inside = lo < omega && omega < hi;
    let (wl, wr) = if inside {
        ((omega - delta).max(lo), (omega + delta).min(hi))
    } else {
        (omega, omega)
    };
    let g0 = if inside { g(omega) } else { 0.0 };
    let mut edges = singular_edges(omega, lo, hi, delta, extra);
    for e in [wl, wr] {
        if inside && lo < e && e < hi && !edges.contains(&e) {
            edges.push(e);
        }
    }
    edges.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    let integrand = |x: f64| {
        let num = if inside && wl <= x && x <= wr {
            g(x) - g0
        } else {
            g(x)
        };
        num / (x - omega)
    };
    let est = integrate_panels(integrand, &edges, tol).map_err(|e| match e {
        Error::Numeric {
            estimate, error, ..
        } => Error::Numeric {
            what: "Kramers-Kronig principal value",
            estimate: estimate / PI,
            error: error / PI,
        },
        other => other,
    })?;
    let log_term = if inside {
        g0 * ln((wr - omega) / (omega - wl))
    } else {
        0.0
    };
    Ok(Transformed {
        value: (est.value + log_term) / PI,
        error: est.abs_error / PI,
    })
}

/// `(1/π) PV ∫ g(ω̄)/(ω̄ - ω) dω̄` over `[-Λ, Λ]`, with a bound on the part
/// beyond Λ folded into the error estimate.
pub fn kk_transform<G: Fn(f64) -> f64>(
    spectral: G,
    omega: f64,
    cfg: &QuadratureConfig,
) -> Result<Transformed> {
    kk_transform_with_breakpoints(spectral, omega, cfg, &[])
}

/// [`kk_transform`] with known features of `spectral` (peak positions)
/// supplied as extra panel edges.
pub fn kk_transform_with_breakpoints<G: Fn(f64) -> f64>(
    spectral: G,
    omega: f64,
    cfg: &QuadratureConfig,
    breakpoints: &[f64],
) -> Result<Transformed> {
    let lambda = cfg.truncation;
    if !(omega.abs() + cfg.excision_halfwidth < lambda) {
        return Err(Error::Range {
            what: "|omega| + excision half-width",
            value: omega.abs() + cfg.excision_halfwidth,
            limit: lambda,
        });
    }
    let core = principal_value(
        &spectral,
        omega,
        -lambda,
        lambda,
        cfg.excision_halfwidth,
        breakpoints,
        cfg.tolerance(),
    )?;
    // Spectra decaying like 1/ω̄ or faster contribute at most this beyond Λ.
    let tail =
        (spectral(lambda).abs() + spectral(-lambda).abs()) / PI * lambda / (lambda - omega.abs());
    Ok(Transformed {
        value: core.value,
        error: core.error + tail,
    })
}

/// Outcome of comparing a reactive part with the transform of a dissipative
/// part over a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KKReport {
    pub max_abs_dev: f64,
    /// `max_abs_dev` over the largest `|re_part|` on the grid.
    pub max_rel_dev: f64,
    pub worst_omega: f64,
    pub passed: bool,
    /// Largest quadrature error estimate among the transforms.
    pub max_quad_error: f64,
}

pub fn kk_check<R, I>(
    re_part: R,
    im_part: I,
    grid: &[f64],
    cfg: &QuadratureConfig,
    threshold: f64,
) -> Result<KKReport>
where
    R: Fn(f64) -> f64,
    I: Fn(f64) -> f64,
{
    if grid.is_empty() {
        return Err(Error::Domain("Kramers-Kronig check needs a non-empty grid"));
    }
    let mut max_abs_dev = 0.0;
    let mut worst_omega = grid[0];
    let mut max_re: f64 = 0.0;
    let mut max_quad_error: f64 = 0.0;
    for &w in grid {
        let t = kk_transform(&im_part, w, cfg)?;
        let re = re_part(w);
        let dev = (t.value - re).abs();
        max_re = max_re.max(re.abs());
        max_quad_error = max_quad_error.max(t.error);
        if dev > max_abs_dev {
            max_abs_dev = dev;
            worst_omega = w;
        }
    }
    let max_rel_dev = if max_re > 0.0 {
        max_abs_dev / max_re
    } else {
        max_abs_dev
    };
    Ok(KKReport {
        max_abs_dev,
        max_rel_dev,
        worst_omega,
        passed: max_rel_dev <= threshold,
        max_quad_error,
    })
}

/// f̃(z) = i s ∫₀^T e^{i s t z} f(s t) dt, `s = sign Im z`, with `T` taken
/// from `cfg.truncation`.
pub fn numeric_flt<F: Fn(f64) -> f64>(
    f: F,
    z: Complex64,
    cfg: &QuadratureConfig,
) -> Result<Transformed<Complex64>> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain("transform argument must be finite"));
    }
    if z.im == 0.0 {
        return Err(Error::Domain(
            "Fourier-Laplace transform is undefined on the real axis",
        ));
    }
    let s = z.im.signum();
    let t_max = cfg.truncation;
    let step = PI / z.norm().max(1.0 / t_max);
    let n = ceil(t_max / step).clamp(1.0, 20000.0) as usize;
    let edges: Vec<f64> = (0..=n).map(|k| t_max * k as f64 / n as f64).collect();
    let i_s = Complex64::new(0.0, s);
    let est = integrate_panels(
        |t: f64| (i_s * z * t).exp() * f(s * t),
        &edges,
        cfg.tolerance(),
    )?;
    let value = i_s * est.value;
    // Bound on the discarded tail from the size of f near T.
    let m = (0..8)
        .map(|k| f(s * t_max * (1.0 - 0.01 * k as f64)).abs())
        .fold(0.0, f64::max);
    let tail = m * exp(-t_max * z.im.abs()) / z.im.abs();
    let allowed = cfg.rel_tol * value.norm().max(f64::MIN_POSITIVE);
    if tail > allowed && tail > 0.0 {
        return Err(Error::Numeric {
            what: "Fourier-Laplace truncation",
            estimate: value.norm(),
            error: tail,
        });
    }
    Ok(Transformed {
        value,
        error: est.abs_error + tail,
    })
}

/// Spectral data on a strictly increasing frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSpectrum {
    grid: Vec<f64>,
    values: Vec<Complex64>,
}

impl SampledSpectrum {
    pub fn new(grid: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if grid.len() < 2 || grid.len() != values.len() {
            return Err(Error::Domain(
                "sampled spectrum needs matching grid and values of length >= 2",
            ));
        }
        if grid.iter().any(|w| !w.is_finite()) || grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Domain(
                "sampled grid must be finite and strictly increasing",
            ));
        }
        if values
            .iter()
            .any(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(Error::Domain("sampled values must be finite"));
        }
        Ok(Self { grid, values })
    }

    /// Samples `f` on `grid`.
    pub fn from_fn<F: Fn(f64) -> Complex64>(grid: Vec<f64>, f: F) -> Result<Self> {
        let values = grid.iter().map(|&w| f(w)).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    fn component(&self, imag: bool) -> Vec<f64> {
        self.values
            .iter()
            .map(|v| if imag { v.im } else { v.re })
            .collect()
    }

    /// Monotone piecewise-cubic interpolant; zero outside the grid.
    pub fn interpolate(&self, omega: f64) -> Complex64 {
        let re = Pchip::new(&self.grid, &self.component(false));
        let im = Pchip::new(&self.grid, &self.component(true));
        Complex64::new(re.eval(omega), im.eval(omega))
    }
}

/// Fritsch-Carlson monotone cubic Hermite interpolant.
struct Pchip<'a> {
    x: &'a [f64],
    y: Vec<f64>,
    d: Vec<f64>,
}

impl<'a> Pchip<'a> {
    fn new(x: &'a [f64], y: &[f64]) -> Self {
        let n = x.len();
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
        let mut d = alloc::vec![0.0; n];
        if n == 2 {
            d[0] = delta[0];
            d[1] = delta[0];
        } else {
            for k in 1..n - 1 {
                if delta[k - 1] * delta[k] > 0.0 {
                    let w1 = 2.0 * h[k] + h[k - 1];
                    let w2 = h[k] + 2.0 * h[k - 1];
                    d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
                }
            }
            d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
            d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        }
        Self {
            x,
            y: y.to_vec(),
            d,
        }
    }

    fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        if !(t >= self.x[0] && t <= self.x[n - 1]) {
            return 0.0;
        }
        let k = match self.x.binary_search_by(|p| p.partial_cmp(&t).unwrap()) {
            Ok(k) => return self.y[k],
            Err(k) => k - 1,
        };
        let h = self.x[k + 1] - self.x[k];
        let s = (t - self.x[k]) / h;
        let (s2, s3) = (s * s, s * s * s);
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * self.y[k] + h10 * h * self.d[k] + h01 * self.y[k + 1] + h11 * h * self.d[k + 1]
    }
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d * d0 <= 0.0 {
        0.0
    } else if d0 * d1 <= 0.0 && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}

fn linear(x: &[f64], y: &[f64], t: f64) -> f64 {
    let n = x.len();
    if !(t >= x[0] && t <= x[n - 1]) {
        return 0.0;
    }
    let k = match x.binary_search_by(|p| p.partial_cmp(&t).unwrap()) {
        Ok(k) => return y[k],
        Err(k) => k - 1,
    };
    let s = (t - x[k]) / (x[k + 1] - x[k]);
    y[k] + s * (y[k + 1] - y[k])
}

/// KK transform of sampled data, with the interpolation error estimated
/// as the difference to a piecewise-linear interpolant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampledTransform {
    pub value: Complex64,
    pub quadrature_error: f64,
    pub interpolation_error: f64,
}

/// The spectrum is taken as zero outside its grid; no tail term is added.
pub fn kk_transform_sampled(
    spectrum: &SampledSpectrum,
    omega: f64,
    cfg: &QuadratureConfig,
) -> Result<SampledTransform> {
    let x = spectrum.grid();
    let (lo, hi) = (x[0], x[x.len() - 1]);
    let tol = cfg.tolerance();
    let delta = cfg.excision_halfwidth;
    let mut value = [0.0; 2];
    let mut quad = 0.0;
    let mut interp: f64 = 0.0;
    for (slot, imag) in value.iter_mut().zip([false, true]) {
        let y = spectrum.component(imag);
        let p = Pchip::new(x, &y);
        let cubic = principal_value(&|t| p.eval(t), omega, lo, hi, delta, x, tol)?;
        let lin = principal_value(&|t| linear(x, &y, t), omega, lo, hi, delta, x, tol)?;
        *slot = cubic.value;
        quad += cubic.error;
        interp = interp.max((cubic.value - lin.value).abs());
    }
    Ok(SampledTransform {
        value: Complex64::new(value[0], value[1]),
        quadrature_error: quad,
        interpolation_error: interp,
    })
}

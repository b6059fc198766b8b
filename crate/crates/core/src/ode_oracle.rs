//! Dormand-Prince 5(4) integration of the oscillator and Abraham-Lorentz
//! equations, used as an independent check on the closed forms.

use alloc::vec::Vec;

use crate::abraham_lorentz::{effective_oscillator, ALInitialState, ALParams};
use crate::math::{exp, pow, sqrt};
use crate::oscillator::OscillatorParams;
use crate::quadrature::{integrate_panels, Tolerance};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub max_steps: usize,
}

impl IntegratorConfig {
    pub fn new(rel_tol: f64, abs_tol: f64, max_step: f64, max_steps: usize) -> Result<Self> {
        for (name, v) in [("rel_tol", rel_tol), ("abs_tol", abs_tol)] {
            if !(v > 0.0 && v <= 1e-2) {
                return Err(Error::InvalidParameter { name, value: v });
            }
        }
        if !(max_step > 0.0) {
            return Err(Error::InvalidParameter {
                name: "max_step",
                value: max_step,
            });
        }
        if max_steps == 0 {
            return Err(Error::InvalidParameter {
                name: "max_steps",
                value: 0.0,
            });
        }
        Ok(Self {
            rel_tol,
            abs_tol,
            max_step,
            max_steps,
        })
    }
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: f64::INFINITY,
            max_steps: 1_000_000,
        }
    }
}

/// Accepted steps of one integration. Times are monotone in the direction
/// of integration.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<const N: usize> {
    pub times: Vec<f64>,
    pub states: Vec<[f64; N]>,
    /// First time at which the divergence cutoff was crossed.
    pub diverged_at: Option<f64>,
    /// Set when `max_steps` ran out before the end of the span.
    pub exhausted: bool,
}

impl<const N: usize> Trajectory<N> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<(f64, [f64; N])> {
        Some((*self.times.last()?, *self.states.last()?))
    }

    /// Linear interpolation of the state at `t`; `None` outside the range.
    pub fn interpolate(&self, t: f64) -> Option<[f64; N]> {
        let n = self.times.len();
        if n == 0 {
            return None;
        }
        let forward = self.times[n - 1] >= self.times[0];
        let key = |x: f64| if forward { x } else { -x };
        let pos = self.times.partition_point(|&s| key(s) < key(t));
        if pos == n {
            return (self.times[n - 1] == t).then(|| self.states[n - 1]);
        }
        if self.times[pos] == t {
            return Some(self.states[pos]);
        }
        if pos == 0 {
            return None;
        }
        let (t0, t1) = (self.times[pos - 1], self.times[pos]);
        let s = (t - t0) / (t1 - t0);
        let (a, b) = (self.states[pos - 1], self.states[pos]);
        let mut out = [0.0; N];
        for k in 0..N {
            out[k] = a[k] + s * (b[k] - a[k]);
        }
        Some(out)
    }
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// Fifth-order minus embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// One Dormand-Prince step. Returns the new state, its error estimate and
/// the derivative at the new point (reused as the next first stage).
fn dp_step<const N: usize, F>(
    rhs: &F,
    t: f64,
    y: &[f64; N],
    k0: &[f64; N],
    h: f64,
) -> ([f64; N], [f64; N], [f64; N])
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let mut k = [[0.0; N]; 7];
    k[0] = *k0;
    for s in 1..7 {
        let mut ys = *y;
        for (j, kj) in k.iter().enumerate().take(s) {
            let a = A[s][j];
            if a != 0.0 {
                for i in 0..N {
                    ys[i] += h * a * kj[i];
                }
            }
        }
        k[s] = rhs(t + C[s] * h, &ys);
        if s == 6 {
            let mut err = [0.0; N];
            for i in 0..N {
                err[i] = h * (0..7).map(|j| E[j] * k[j][i]).sum::<f64>();
            }
            return (ys, err, k[6]);
        }
    }
    unreachable!()
}

fn error_norm<const N: usize>(
    err: &[f64; N],
    y0: &[f64; N],
    y1: &[f64; N],
    cfg: &IntegratorConfig,
) -> f64 {
    let mut acc = 0.0;
    for i in 0..N {
        let sc = cfg.abs_tol + cfg.rel_tol * y0[i].abs().max(y1[i].abs());
        let r = err[i] / sc;
        acc += r * r;
    }
    sqrt(acc / N as f64)
}

fn initial_step<const N: usize>(
    y: &[f64; N],
    f: &[f64; N],
    cfg: &IntegratorConfig,
    span: f64,
) -> f64 {
    let scale = |v: &[f64; N]| {
        let mut acc = 0.0;
        for i in 0..N {
            let r = v[i] / (cfg.abs_tol + cfg.rel_tol * y[i].abs());
            acc += r * r;
        }
        sqrt(acc / N as f64)
    };
    let (d0, d1) = (scale(y), scale(f));
    let h = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    h.min(cfg.max_step).min(span.abs())
}

/// Post-step hook: may modify an accepted state in place.
pub trait StepHook<const N: usize> {
    fn after_step(&self, t: f64, y: &mut [f64; N]);
}

struct NoHook;

impl<const N: usize> StepHook<N> for NoHook {
    fn after_step(&self, _: f64, _: &mut [f64; N]) {}
}

/// Adaptive integration of `y' = rhs(t, y)` from `t0` to `t1` (either
/// direction). Stops early when `diverged(y)` becomes true.
pub fn integrate<const N: usize, F, D>(
    rhs: F,
    y0: [f64; N],
    span: (f64, f64),
    cfg: &IntegratorConfig,
    diverged: D,
) -> Trajectory<N>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    D: Fn(&[f64; N]) -> bool,
{
    integrate_hooked(rhs, y0, span, cfg, diverged, &NoHook)
}

fn integrate_hooked<const N: usize, F, D, H>(
    rhs: F,
    y0: [f64; N],
    (t0, t1): (f64, f64),
    cfg: &IntegratorConfig,
    diverged: D,
    hook: &H,
) -> Trajectory<N>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    D: Fn(&[f64; N]) -> bool,
    H: StepHook<N>,
{
    let mut out = Trajectory {
        times: alloc::vec![t0],
        states: alloc::vec![y0],
        diverged_at: None,
        exhausted: false,
    };
    if t1 == t0 {
        return out;
    }
    let dir = if t1 > t0 { 1.0 } else { -1.0 };
    let (mut t, mut y) = (t0, y0);
    let mut k0 = rhs(t, &y);
    let mut h = initial_step(&y, &k0, cfg, t1 - t0);
    let mut steps = 0;
    while dir * (t1 - t) > 0.0 {
        if steps >= cfg.max_steps {
            out.exhausted = true;
            break;
        }
        steps += 1;
        let last = h >= dir * (t1 - t);
        let step = if last { t1 - t } else { dir * h };
        let (y1, err, k1) = dp_step(&rhs, t, &y, &k0, step);
        let en = error_norm(&err, &y, &y1, cfg);
        let factor = if en == 0.0 {
            5.0
        } else {
            (0.9 * pow(en, -0.2)).clamp(0.2, 5.0)
        };
        if en <= 1.0 && y1.iter().all(|v| v.is_finite()) {
            t = if last { t1 } else { t + step };
            y = y1;
            k0 = k1;
            let mut projected = y;
            hook.after_step(t, &mut projected);
            if projected != y {
                y = projected;
                k0 = rhs(t, &y);
            }
            out.times.push(t);
            out.states.push(y);
            if diverged(&y) {
                out.diverged_at = Some(t);
                break;
            }
            h = (h * factor).min(cfg.max_step);
        } else {
            h *= factor.min(1.0);
            if !(h > f64::EPSILON * t.abs().max(1.0)) {
                // Step size collapsed; report as divergence at this time.
                out.diverged_at = Some(t);
                break;
            }
        }
    }
    out
}

/// Integration with a fixed step `h`, no error control.
pub fn integrate_fixed<const N: usize, F>(
    rhs: F,
    y0: [f64; N],
    (t0, t1): (f64, f64),
    steps: usize,
) -> Trajectory<N>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let steps = steps.max(1);
    let h = (t1 - t0) / steps as f64;
    let mut out = Trajectory {
        times: alloc::vec![t0],
        states: alloc::vec![y0],
        diverged_at: None,
        exhausted: false,
    };
    let mut y = y0;
    for k in 1..=steps {
        let t = t0 + (k - 1) as f64 * h;
        let k0 = rhs(t, &y);
        y = dp_step(&rhs, t, &y, &k0, h).0;
        let tk = if k == steps { t1 } else { t0 + k as f64 * h };
        out.times.push(tk);
        out.states.push(y);
        if !y.iter().all(|v| v.is_finite()) {
            out.diverged_at = Some(tk);
            break;
        }
    }
    out
}

/// `m(x'' + Γx' + Ω²x) = f(t)` as the system `(x, v)`.
pub fn integrate_forced<F: Fn(f64) -> f64>(
    params: &OscillatorParams,
    force: F,
    (x0, v0): (f64, f64),
    span: (f64, f64),
    cfg: &IntegratorConfig,
) -> Trajectory<2> {
    let (m, w2, g) = (
        params.mass(),
        params.omega() * params.omega(),
        params.gamma(),
    );
    integrate(
        |t, y: &[f64; 2]| [y[1], force(t) / m - g * y[1] - w2 * y[0]],
        [x0, v0],
        span,
        cfg,
        |_| false,
    )
}

/// Divergence cutoff for AL runs: |x| > 10⁹(|x₀| + 1).
pub fn al_cutoff(x0: f64) -> f64 {
    1e9 * (x0.abs() + 1.0)
}

fn al_rhs<F: Fn(f64) -> f64>(al: &ALParams, force: F) -> impl Fn(f64, &[f64; 3]) -> [f64; 3] {
    let (m, tau, w2) = (al.mass(), al.tau(), al.omega0() * al.omega0());
    move |t, y: &[f64; 3]| [y[1], y[2], (y[2] + w2 * y[0] - force(t) / m) / tau]
}

/// `ẍ - τx⃛ + ω₀²x = f/m` as the system `(x, v, b)`. The step is capped at
/// τ/10, the time scale of the run-away mode.
pub fn integrate_al<F: Fn(f64) -> f64>(
    al: &ALParams,
    force: F,
    init: &ALInitialState,
    span: (f64, f64),
    cfg: &IntegratorConfig,
) -> Trajectory<3> {
    let mut cfg = *cfg;
    cfg.max_step = cfg.max_step.min(0.1 * al.tau());
    let cutoff = al_cutoff(init.x0);
    integrate(
        al_rhs(al, force),
        [init.x0, init.v0, init.b0],
        span,
        &cfg,
        |y| !(y[0].abs() <= cutoff),
    )
}

struct RunawayProjection<F> {
    zeta2: f64,
    gamma: f64,
    omega_sq: f64,
    norm: f64,
    mass_tau: f64,
    force: F,
}

impl<F: Fn(f64) -> f64> RunawayProjection<F> {
    /// Value of `b + Γv + Ω²x` on the bounded solution at time `t`:
    /// (1/(mτ)) ∫₀^∞ e^{-ζ₂s} f(t + s) ds.
    fn target(&self, t: f64) -> f64 {
        let z = self.zeta2;
        let mut edges = alloc::vec![0.0];
        let mut s = 1.0 / z;
        while s < 64.0 / z {
            edges.push(s);
            s *= 2.0;
        }
        edges.push(64.0 / z);
        let tol = Tolerance::new(1e-13, 0.0, 200);
        let est = integrate_panels(|s: f64| exp(-z * s) * (self.force)(t + s), &edges, tol);
        let value = match est {
            Ok(e) => e.value,
            Err(Error::Numeric { estimate, .. }) => estimate,
            Err(_) => 0.0,
        };
        value / self.mass_tau
    }
}

impl<F: Fn(f64) -> f64> StepHook<3> for RunawayProjection<F> {
    fn after_step(&self, t: f64, y: &mut [f64; 3]) {
        let r = y[2] + self.gamma * y[1] + self.omega_sq * y[0] - self.target(t);
        // Remove the component along the run-away eigenvector (1, ζ₂, ζ₂²).
        let c = r / self.norm;
        let z = self.zeta2;
        y[0] -= c;
        y[1] -= c * z;
        y[2] -= c * z * z;
    }
}

/// AL integration restricted to the bounded solution. After every step the
/// run-away component, which rounding errors would otherwise feed at the rate
/// e^{ζ₂t}, is projected out. The initial acceleration is chosen on the
/// bounded solution from `(x₀, v₀)`.
pub fn integrate_al_bounded<F: Fn(f64) -> f64 + Clone>(
    al: &ALParams,
    force: F,
    (x0, v0): (f64, f64),
    span: (f64, f64),
    cfg: &IntegratorConfig,
) -> Result<Trajectory<3>> {
    if span.1 < span.0 {
        return Err(Error::Domain("bounded AL integration runs forward in time"));
    }
    let eff = effective_oscillator(al)?;
    let z = eff.roots.zeta2;
    let hook = RunawayProjection {
        zeta2: z,
        gamma: eff.gamma(),
        omega_sq: eff.omega_sq(),
        norm: z * z + eff.gamma() * z + eff.omega_sq(),
        mass_tau: al.mass() * al.tau(),
        force: force.clone(),
    };
    let b0 = hook.target(span.0) - eff.gamma() * v0 - eff.omega_sq() * x0;
    let mut cfg = *cfg;
    cfg.max_step = cfg.max_step.min(0.1 * al.tau());
    let cutoff = al_cutoff(x0);
    Ok(integrate_hooked(
        al_rhs(al, force),
        [x0, v0, b0],
        span,
        &cfg,
        |y| !(y[0].abs() <= cutoff),
        &hook,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Deviation {
    pub max_abs: f64,
    /// Largest |x - x_ref| over the running maximum of |x_ref|.
    pub max_rel: f64,
    pub worst_time: f64,
}

/// Compares the first state component with `analytic` at every step.
pub fn compare<const N: usize, G: Fn(f64) -> f64>(traj: &Trajectory<N>, analytic: G) -> Deviation {
    let mut dev = Deviation {
        max_abs: 0.0,
        max_rel: 0.0,
        worst_time: traj.times.first().copied().unwrap_or(0.0),
    };
    let mut scale: f64 = 0.0;
    for (&t, y) in traj.times.iter().zip(&traj.states) {
        let reference = analytic(t);
        scale = scale.max(reference.abs());
        let d = (y[0] - reference).abs();
        dev.max_abs = dev.max_abs.max(d);
        let rel = if scale > 0.0 { d / scale } else { d };
        if rel > dev.max_rel {
            dev.max_rel = rel;
            dev.worst_time = t;
        }
    }
    dev
}

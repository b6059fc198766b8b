//! Adaptive Gauss-Kronrod (7, 15) quadrature on a list of panels.
//!
//! Panels are bisected one at a time, always the one with the largest error
//! estimate (first in panel order on ties), until the summed error meets the
//! tolerance. The sum is always taken in panel order so results are
//! bit-identical between runs.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss weights for XGK[1], XGK[3], XGK[5] and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Values the integrator can accumulate: `f64` and `Complex64`.
pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Integral value with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T = f64> {
    pub value: T,
    pub abs_error: f64,
    pub evaluations: usize,
}

/// Tolerances of one adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    pub max_subdivisions: usize,
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64, max_subdivisions: usize) -> Self {
        Self {
            rel,
            abs,
            max_subdivisions,
        }
    }
}

struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
    abs_value: f64,
}

fn gauss_kronrod<T: QuadValue, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> Panel<T> {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_value = fc.magnitude() * WGK[7];
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let f1 = f(centre - dx);
        let f2 = f(centre + dx);
        kronrod = kronrod + (f1 + f2) * w;
        abs_value += (f1.magnitude() + f2.magnitude()) * w;
        if j % 2 == 1 {
            gauss = gauss + (f1 + f2) * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).magnitude();
    Panel {
        a,
        b,
        value,
        error,
        abs_value: abs_value * half.abs(),
    }
}

/// Integrates `f` over `[a, b]`.
pub fn integrate<T, F>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Estimate<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    integrate_panels(f, &[a, b], tol)
}

/// Integrates `f` over the union of consecutive panels `edges[k]..edges[k+1]`.
///
/// `edges` must be monotone (either direction); zero-width panels are
/// dropped. Known features of the integrand (peaks, kinks, oscillation
/// periods) should be passed as edges.
pub fn integrate_panels<T, F>(mut f: F, edges: &[f64], tol: Tolerance) -> Result<Estimate<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    if edges.len() < 2 {
        return Err(Error::Domain("quadrature needs at least two panel edges"));
    }
    if edges.iter().any(|e| !e.is_finite()) {
        return Err(Error::Domain("quadrature panel edges must be finite"));
    }
    let mut panels: Vec<Panel<T>> = Vec::with_capacity(edges.len() + tol.max_subdivisions);
    for w in edges.windows(2) {
        if w[0] != w[1] {
            panels.push(gauss_kronrod(&mut f, w[0], w[1]));
        }
    }
    let mut evaluations = 15 * panels.len();
    if panels.is_empty() {
        return Ok(Estimate {
            value: T::zero(),
            abs_error: 0.0,
            evaluations,
        });
    }

    let mut subdivisions = 0;
    loop {
        let (value, error, abs_value) = totals(&panels);
        let target = tol
            .abs
            .max(tol.rel * value.magnitude())
            .max(50.0 * f64::EPSILON * abs_value);
        if error <= target {
            return Ok(Estimate {
                value,
                abs_error: error,
                evaluations,
            });
        }
        if subdivisions >= tol.max_subdivisions {
            return Err(Error::Numeric {
                what: "adaptive quadrature",
                estimate: value.magnitude(),
                error,
            });
        }
        let worst = panels
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |(bi, be), (i, p)| {
                if p.error > be {
                    (i, p.error)
                } else {
                    (bi, be)
                }
            })
            .0;
        let Panel { a, b, .. } = panels[worst];
        let mid = 0.5 * (a + b);
        if mid == a || mid == b {
            // Panel can no longer be split in floating point.
            return Err(Error::Numeric {
                what: "adaptive quadrature (panel underflow)",
                estimate: value.magnitude(),
                error,
            });
        }
        let left = gauss_kronrod(&mut f, a, mid);
        let right = gauss_kronrod(&mut f, mid, b);
        evaluations += 30;
        panels[worst] = left;
        panels.insert(worst + 1, right);
        subdivisions += 1;
    }
}

fn totals<T: QuadValue>(panels: &[Panel<T>]) -> (T, f64, f64) {
    panels.iter().fold((T::zero(), 0.0, 0.0), |(v, e, a), p| {
        (v + p.value, e + p.error, a + p.abs_value)
    })
}

//! Dipole response of a quantum system in its ground state, with ad-hoc
//! linewidths, and its specialisation to the harmonic oscillator.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::cross_sections::PhysicalConstants;
use crate::math::{exp, sin, sqrt};
use crate::oscillator::OscillatorParams;
use crate::{Error, Result};

/// One excitation `0 → n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    omega_n0: f64,
    dipole_sq: f64,
    gamma_n: f64,
}

impl Transition {
    pub fn new(omega_n0: f64, dipole_sq: f64, gamma_n: f64) -> Result<Self> {
        Ok(Self {
            omega_n0: Error::check_positive("omega_n0", omega_n0)?,
            dipole_sq: Error::check_nonnegative("dipole_sq", dipole_sq)?,
            gamma_n: Error::check_nonnegative("gamma_n", gamma_n)?,
        })
    }

    pub fn omega_n0(&self) -> f64 {
        self.omega_n0
    }

    pub fn dipole_sq(&self) -> f64 {
        self.dipole_sq
    }

    pub fn gamma_n(&self) -> f64 {
        self.gamma_n
    }

    /// Ω_n² = ω_n0² + (Γ_n/2)².
    pub fn omega_sq(&self) -> f64 {
        self.omega_n0 * self.omega_n0 + 0.25 * self.gamma_n * self.gamma_n
    }

    /// e²/(mΩ_n²).
    pub fn static_partial(&self, mass: f64, charge: f64) -> f64 {
        charge * charge / (mass * self.omega_sq())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransitionTable {
    transitions: Vec<Transition>,
    mass: f64,
    charge: f64,
}

impl TransitionTable {
    pub fn new(transitions: Vec<Transition>, mass: f64, charge: f64) -> Result<Self> {
        if transitions.is_empty() {
            return Err(Error::Domain("transition table must not be empty"));
        }
        for (k, a) in transitions.iter().enumerate() {
            if transitions[..k].iter().any(|b| b.omega_n0 == a.omega_n0) {
                return Err(Error::InvalidParameter {
                    name: "omega_n0 (duplicate)",
                    value: a.omega_n0,
                });
            }
        }
        Ok(Self {
            transitions,
            mass: Error::check_positive("mass", mass)?,
            charge: Error::check_finite("charge", charge)?,
        })
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn charge(&self) -> f64 {
        self.charge
    }
}

/// χ_DD(t) = (2/iħ) Σ |D_n0|² sin(ω_n0 t) e^{-Γ_n|t|/2}, purely imaginary.
pub fn chi_dd(table: &TransitionTable, t: f64, hbar: f64) -> Complex64 {
    let sum: f64 = table
        .transitions
        .iter()
        .map(|tr| tr.dipole_sq * sin(tr.omega_n0 * t) * exp(-0.5 * tr.gamma_n * t.abs()))
        .sum();
    Complex64::new(0.0, -2.0 * sum / hbar)
}

/// Σ (2ω_n0/ħ)|D_n0|²/(Ω_n² - ω² - iΓ_nω), the transform of [`chi_dd`] at
/// ω + io.
pub fn chi_dd_susceptibility(table: &TransitionTable, omega: f64, hbar: f64) -> Complex64 {
    table
        .transitions
        .iter()
        .map(|tr| {
            let weight = 2.0 * tr.omega_n0 * tr.dipole_sq / hbar;
            let det = tr.omega_sq() - omega * omega;
            let loss = tr.gamma_n * omega;
            let d = det * det + loss * loss;
            Complex64::new(weight * det / d, weight * loss / d)
        })
        .fold(Complex64::new(0.0, 0.0), |a, b| a + b)
}

/// An energy level and `|⟨level|r|n⟩|²` for the level `n` whose width is
/// wanted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level {
    pub energy: f64,
    pub position_sq: f64,
}

/// Γ_n = (4α/3c²) Σ_{ε_k < ε_n} ω_nk³ |⟨k|r|n⟩|².
pub fn natural_linewidth(levels: &[Level], n: usize, consts: &PhysicalConstants) -> Result<f64> {
    let top = levels
        .get(n)
        .ok_or(Error::Domain("level index out of range"))?
        .energy;
    let c = consts.c();
    let prefactor = 4.0 * consts.alpha() / (3.0 * c * c);
    Ok(levels
        .iter()
        .filter(|l| l.energy < top)
        .map(|l| {
            let w = (top - l.energy) / consts.hbar();
            prefactor * w * w * w * l.position_sq
        })
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumOscillatorModel {
    omega_10: f64,
    mass: f64,
    oscillator_length: f64,
}

impl QuantumOscillatorModel {
    pub fn new(omega_10: f64, mass: f64, hbar: f64) -> Result<Self> {
        let omega_10 = Error::check_positive("omega_10", omega_10)?;
        let mass = Error::check_positive("mass", mass)?;
        let hbar = Error::check_positive("hbar", hbar)?;
        Ok(Self {
            omega_10,
            mass,
            oscillator_length: sqrt(hbar / (2.0 * mass * omega_10)),
        })
    }

    /// The model for the mass and ω₀ stored in `consts`.
    pub fn from_constants(consts: &PhysicalConstants) -> Result<Self> {
        Self::new(consts.omega0(), consts.mass(), consts.hbar())
    }

    pub fn omega_10(&self) -> f64 {
        self.omega_10
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// x₀ = √(ħ/(2mω₁₀)).
    pub fn oscillator_length(&self) -> f64 {
        self.oscillator_length
    }
}

/// The only dipole-allowed excitation of the ground state, `0 → 1`.
pub fn oscillator_table(
    model: &QuantumOscillatorModel,
    consts: &PhysicalConstants,
) -> Result<TransitionTable> {
    let x0_sq = model.oscillator_length * model.oscillator_length;
    let levels = [
        Level {
            energy: 0.0,
            position_sq: x0_sq,
        },
        Level {
            energy: consts.hbar() * model.omega_10,
            position_sq: 0.0,
        },
    ];
    let gamma = natural_linewidth(&levels, 1, consts)?;
    let e = consts.e();
    let tr = Transition::new(model.omega_10, e * e * x0_sq, gamma)?;
    TransitionTable::new(alloc::vec![tr], model.mass, e)
}

/// Classical oscillator with the same response as a single transition:
/// Ω̃ = ω_n0, Γ = Γ_n.
pub fn classical_identification(table: &TransitionTable) -> Result<OscillatorParams> {
    let tr = table.transitions[0];
    OscillatorParams::new(table.mass, sqrt(tr.omega_sq()), tr.gamma_n)
}

/// P = ½ω Im χ̃_DD(ω) E₀².
pub fn absorbed_power_qm(table: &TransitionTable, e0: f64, omega: f64, hbar: f64) -> f64 {
    0.5 * omega * chi_dd_susceptibility(table, omega, hbar).im * e0 * e0
}

/// Energy shift of the ground state in a field `E₀cos(ωt)`, split into its
/// first- and second-order parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarkShift {
    /// -½χ′E₀², the dipole energy of the induced moment.
    pub first_order: f64,
    /// +¼χ′E₀².
    pub second_order: f64,
    pub total: f64,
}

pub fn ac_stark_shift(chi_re: f64, e0: f64) -> StarkShift {
    let s = chi_re * e0 * e0;
    let first_order = -0.5 * s;
    let second_order = 0.25 * s;
    StarkShift {
        first_order,
        second_order,
        total: first_order + second_order,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn two_level() -> TransitionTable {
        TransitionTable::new(
            alloc::vec![
                Transition::new(1.0, 0.3, 0.05).unwrap(),
                Transition::new(2.5, 0.1, 0.2).unwrap(),
            ],
            1.0,
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn table_validation() {
        assert!(TransitionTable::new(alloc::vec![], 1.0, 1.0).is_err());
        let t = Transition::new(1.0, 1.0, 0.0).unwrap();
        assert!(TransitionTable::new(alloc::vec![t, t], 1.0, 1.0).is_err());
        assert!(Transition::new(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn chi_dd_zeros() {
        let t = two_level();
        assert_eq!(chi_dd(&t, 0.0, 1.0), Complex64::new(0.0, 0.0));
        let single = TransitionTable::new(
            alloc::vec![Transition::new(2.0, 1.0, 0.0).unwrap()],
            1.0,
            1.0,
        )
        .unwrap();
        assert!(chi_dd(&single, PI / 2.0, 1.0).norm() < 1e-15);
        let c = chi_dd(&t, 1.3, 1.0);
        assert_eq!(c.re, 0.0);
        assert_eq!(chi_dd(&t, -1.3, 1.0), -c);
    }

    #[test]
    fn susceptibility_is_linear_in_table() {
        let t = two_level();
        let parts: Vec<TransitionTable> = t
            .transitions()
            .iter()
            .map(|&tr| TransitionTable::new(alloc::vec![tr], 1.0, 1.0).unwrap())
            .collect();
        for &w in &[0.0, 0.7, 1.0, 3.0] {
            let whole = chi_dd_susceptibility(&t, w, 1.0);
            let sum =
                chi_dd_susceptibility(&parts[0], w, 1.0) + chi_dd_susceptibility(&parts[1], w, 1.0);
            assert!((whole - sum).norm() < 1e-15 * whole.norm());
        }
        assert_eq!(chi_dd_susceptibility(&t, 0.0, 1.0).im, 0.0);
    }

    #[test]
    fn ground_state_is_stable() {
        let c = PhysicalConstants::natural(1e-3).unwrap();
        let levels = [
            Level {
                energy: 0.0,
                position_sq: 0.0,
            },
            Level {
                energy: 1.0,
                position_sq: 0.5,
            },
        ];
        assert_eq!(natural_linewidth(&levels, 0, &c).unwrap(), 0.0);
        assert!(natural_linewidth(&levels, 5, &c).is_err());
    }

    #[test]
    fn oscillator_linewidth_is_tau_omega_sq() {
        let c = PhysicalConstants::si_electron(1e15).unwrap();
        let m = QuantumOscillatorModel::from_constants(&c).unwrap();
        let x0 = m.oscillator_length();
        assert!((x0 * x0 / (c.hbar() / (2.0 * c.mass() * 1e15)) - 1.0).abs() < 1e-12);
        let t = oscillator_table(&m, &c).unwrap();
        assert_eq!(t.transitions().len(), 1);
        let g = t.transitions()[0].gamma_n();
        assert!((g / (c.tau() * 1e30) - 1.0).abs() < 1e-12);
        assert!((g / 6.3e6 - 1.0).abs() < 0.01);
    }

    #[test]
    fn stark_shift_parts() {
        assert_eq!(ac_stark_shift(3.0, 0.0).total, 0.0);
        let s = ac_stark_shift(2.0, 3.0);
        assert_eq!(s.total, -0.25 * 2.0 * 9.0);
        assert_eq!(s.first_order, -9.0);
        assert_eq!(s.second_order, 4.5);
    }

    #[test]
    fn power_quadratic_in_field() {
        let t = two_level();
        let p1 = absorbed_power_qm(&t, 1.0, 1.1, 1.0);
        let p2 = absorbed_power_qm(&t, 2.0, 1.1, 1.0);
        assert!(p1 > 0.0);
        assert!((p2 - 4.0 * p1).abs() < 1e-15 * p2);
        assert_eq!(absorbed_power_qm(&t, 1.0, 0.0, 1.0), 0.0);
    }
}

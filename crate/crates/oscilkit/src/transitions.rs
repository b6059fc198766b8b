//! JSON transition tables.

use std::path::Path;

use oscilkit_core::quantum::{Transition, TransitionTable};
use serde::{Deserialize, Serialize};

use crate::config::RunError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionRecord {
    /// ω_n0 in rad/s.
    pub omega: f64,
    /// |D_n0|² in (C·m)².
    pub dipole_sq: f64,
    /// Γ_n in 1/s.
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionDocument {
    pub mass: f64,
    pub charge: f64,
    pub transitions: Vec<TransitionRecord>,
}

impl TransitionDocument {
    pub fn into_table(self) -> Result<TransitionTable, RunError> {
        let rows = self
            .transitions
            .iter()
            .map(|r| Transition::new(r.omega, r.dipole_sq, r.gamma))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TransitionTable::new(rows, self.mass, self.charge)?)
    }

    pub fn from_table(table: &TransitionTable) -> Self {
        Self {
            mass: table.mass(),
            charge: table.charge(),
            transitions: table
                .transitions()
                .iter()
                .map(|t| TransitionRecord {
                    omega: t.omega_n0(),
                    dipole_sq: t.dipole_sq(),
                    gamma: t.gamma_n(),
                })
                .collect(),
        }
    }
}

pub fn parse_table(text: &str) -> Result<TransitionTable, RunError> {
    let doc: TransitionDocument = serde_json::from_str(text)
        .map_err(|e| RunError::Usage(format!("transition table: {e}")))?;
    doc.into_table()
}

pub fn read_table(path: &Path) -> Result<TransitionTable, RunError> {
    let text = std::fs::read_to_string(path)?;
    parse_table(&text)
}

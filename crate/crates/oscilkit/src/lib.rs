//! Figure tables, audits and file formats on top of `oscilkit-core`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod audit;
pub mod config;
pub mod figures;
pub mod table;
pub mod transitions;

use std::fs::File;
use std::io::{self, BufWriter, Write};

use config::{Command, RunConfig, RunError};
use figures::Outcome;

pub fn run(cfg: &RunConfig) -> Result<Outcome, RunError> {
    match cfg.command {
        Command::Fig1 => figures::fig1(cfg),
        Command::Fig2 => figures::fig2(cfg),
        Command::Fig3 => figures::fig3(cfg),
        Command::CrossSections => figures::cross_sections(cfg),
        Command::SumRule => figures::sum_rule(cfg),
        Command::Trajectory => figures::trajectory(cfg),
        Command::Stark => figures::stark(cfg),
        Command::Audit => audit::audit(cfg),
    }
}

/// Writes the table to `--out`, or to stdout.
pub fn emit(cfg: &RunConfig, outcome: &Outcome) -> io::Result<()> {
    match &cfg.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            outcome.table.write(&mut w, cfg.format)?;
            w.flush()
        }
        None => {
            let mut w = io::stdout().lock();
            outcome.table.write(&mut w, cfg.format)?;
            w.flush()
        }
    }
}

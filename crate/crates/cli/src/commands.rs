//! The subcommands, as plain functions returning their output.

use plucker_dss::assignment::{format_vectors, DEFAULT_ENUMERATION_BUDGET};
use plucker_dss::codec::encode_store;
use plucker_dss::goodmatrix::build_good_matrix;
use plucker_dss::plucker::pair_count;
use plucker_dss::simnet::{resilience_sweep, run_scenario};
use plucker_dss::Scenario;

use crate::config::Loaded;
use crate::error::{CliError, CliResult};
use crate::snapshot::Snapshot;
use crate::symbols::bytes_to_symbols;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
}

/// Command output and whether every check in it passed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub passed: bool,
}

/// Encodes a raw file onto every node of the assignment.
pub fn cmd_store(loaded: &Loaded, bytes: &[u8]) -> CliResult<Snapshot> {
    let f = &loaded.field;
    let x = bytes_to_symbols(f, bytes, pair_count(loaded.b))?;
    let nodes = encode_store(f, &x, &loaded.assignment.vectors)?;
    Ok(Snapshot::from_nodes(f, loaded.b, &nodes))
}

pub fn cmd_run(loaded: &Loaded, scenario: &str, format: Format) -> CliResult<Outcome> {
    let scenario = Scenario::parse(scenario).map_err(|e| CliError::Core {
        context: "scenario".into(),
        source: e,
    })?;
    let report = run_scenario(loaded.field, &loaded.assignment, &scenario, loaded.seed)?;
    Ok(Outcome {
        output: match format {
            Format::Json => report.to_json(),
            Format::Text => report.to_text(),
        },
        passed: report.passed(),
    })
}

pub fn cmd_goodmatrix(b: usize) -> CliResult<String> {
    Ok(build_good_matrix(b)?.to_grid())
}

pub fn cmd_verify_assignment(loaded: &Loaded, t: usize, format: Format) -> CliResult<Outcome> {
    let report = resilience_sweep(
        loaded.field,
        &loaded.assignment,
        t,
        loaded.seed,
        DEFAULT_ENUMERATION_BUDGET,
    )?;
    Ok(Outcome {
        output: match format {
            Format::Json => report.to_json(),
            Format::Text => report.to_text(),
        },
        passed: report.passed,
    })
}

pub fn cmd_gen_assignment(loaded: &Loaded) -> String {
    let a = &loaded.assignment;
    let mut out = format!("# {} b={} n={}", loaded.field, loaded.b, a.len());
    if let Some(t) = a.claimed_resilience {
        out.push_str(&format!(" resilience={t}"));
    }
    if let Some(l) = a.claimed_locality {
        out.push_str(&format!(" locality={l}"));
    }
    out.push('\n');
    out.push_str(&format_vectors(&loaded.field, &a.vectors));
    out
}

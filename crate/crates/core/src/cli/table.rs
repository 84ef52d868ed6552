//! Flat tables over homogeneous batches.
//!
//! Every table starts with `job`, `command`, `input`, `status` and `checks`,
//! followed by the columns of the batch's command in a fixed order. A row
//! whose job failed carries `ERR:<kind>` in every payload column.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::dispatch::{run_batch, RunOptions};
use super::{Command, JobSpec, ResultEnvelope, Status};
use crate::error::{Error, Result};

pub const BASE_COLUMNS: [&str; 5] = ["job", "command", "input", "status", "checks"];

/// Payload keys shown for a command.
pub fn payload_columns(command_id: &str) -> &'static [&'static str] {
    match command_id {
        "group info" => &["order", "exponent", "invariant_factors"],
        "group aut" => &["order"],
        "group subgroups" => &["count"],
        "quad list" => &["count"],
        "quad info" => &["order", "nondegenerate", "isotropic_count"],
        "quad summary" => &["order", "orthogonal_order", "so_order", "so_index", "lagrangian_count"],
        "orth order" => &["order", "so_order", "index", "det_spectrum"],
        "orth split" => &["brute_force", "formula", "equal"],
        "lagrangian list" => &["count"],
        "lagrangian polarize" => &["count", "lagrangian_count", "verified"],
        "cohomology compute" => &["degree", "coefficients", "invariant_factors"],
        "cohomology em" => &["modulus", "classes", "forms"],
        "cohomology torsor" => &["l", "coefficient_order", "subgroup_order", "torsor_size"],
        "cohomology random" => &["samples", "modulus"],
        "center pointed" => &["modulus", "pointed"],
        "center classify" => &["twist"],
        "clifford pin" => &["gamma_order", "orthogonal_order", "pin_order", "spin_order", "so_order"],
        "clifford spinor" => &["clifford_dim", "rank", "bijective"],
        _ => &[],
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// `key=value` pairs of the command's inputs, in serialization order.
fn input_cell(c: &Command) -> String {
    let v = serde_json::to_value(c).unwrap_or(Value::Null);
    let Value::Object(map) = v else {
        return String::new();
    };
    map.iter()
        .filter(|(k, _)| k.as_str() != "command")
        .map(|(k, v)| format!("{k}={}", cell(v)))
        .collect::<Vec<_>>()
        .join(" ")
}

impl Table {
    pub fn header_only(command_id: Option<&str>) -> Self {
        let mut columns: Vec<String> = BASE_COLUMNS.iter().map(|s| s.to_string()).collect();
        if let Some(id) = command_id {
            columns.extend(payload_columns(id).iter().map(|s| s.to_string()));
        }
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    /// One row per envelope; all envelopes must come from the same command.
    pub fn from_envelopes(envs: &[ResultEnvelope]) -> Result<Self> {
        let id = envs.first().map(|e| e.input.command.id());
        if let Some(id) = id {
            if let Some(e) = envs.iter().find(|e| e.input.command.id() != id) {
                return Err(Error::Parse(format!(
                    "batch mixes {id:?} and {:?}",
                    e.input.command.id()
                )));
            }
        }
        let mut table = Table::header_only(id);
        let keys = id.map(payload_columns).unwrap_or(&[]);
        for (i, e) in envs.iter().enumerate() {
            let passed = e.checks.iter().filter(|c| c.passed).count();
            let mut row = vec![
                i.to_string(),
                e.input.command.id().to_string(),
                input_cell(&e.input.command),
            ];
            match (&e.status, &e.error, &e.payload) {
                (Status::Error, Some(err), _) => {
                    let mark = format!("ERR:{}", err.kind);
                    row.push(mark.clone());
                    row.push(String::new());
                    row.extend(keys.iter().map(|_| mark.clone()));
                }
                (status, _, payload) => {
                    row.push(
                        match status {
                            Status::Ok => "ok",
                            Status::VerificationFailure => "verification_failure",
                            Status::Error => "error",
                        }
                        .to_string(),
                    );
                    row.push(format!("{passed}/{}", e.checks.len()));
                    let empty = Value::Null;
                    let p = payload.as_ref().unwrap_or(&empty);
                    row.extend(keys.iter().map(|k| cell(p.get(*k).unwrap_or(&Value::Null))));
                }
            }
            table.rows.push(row);
        }
        Ok(table)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = self.columns.join("\t");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join("\t"));
            out.push('\n');
        }
        out
    }

    pub fn from_tsv(s: &str) -> Result<Self> {
        let mut lines = s.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty table".into()))?;
        let columns: Vec<String> = header.split('\t').map(str::to_string).collect();
        let mut rows = Vec::new();
        for (i, l) in lines.enumerate() {
            let r: Vec<String> = l.split('\t').map(str::to_string).collect();
            if r.len() != columns.len() {
                return Err(Error::Parse(format!(
                    "row {i} has {} cells, header has {}",
                    r.len(),
                    columns.len()
                )));
            }
            rows.push(r);
        }
        Ok(Table { columns, rows })
    }

    /// Index of a column by name.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

/// Runs a homogeneous batch and tabulates it. Timing is off so the table
/// depends only on the batch.
pub fn emit_table(batch: &[JobSpec]) -> Result<Table> {
    if let Some(first) = batch.first() {
        let id = first.command.id();
        if let Some(s) = batch.iter().find(|s| s.command.id() != id) {
            return Err(Error::Parse(format!("batch mixes {id:?} and {:?}", s.command.id())));
        }
    }
    let envs = run_batch(batch, RunOptions { timing: false }, None)?;
    Table::from_envelopes(&envs)
}

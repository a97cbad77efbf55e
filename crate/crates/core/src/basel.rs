//! Regulatory capital charge from a VaR history:
//! `CC = max(VaR_0, (lambda/60) * sum of the last 60 figures)`.

use crate::{Error, Result};
use std::path::Path;

pub const HISTORY_LEN: usize = 60;

/// Today's VaR, the 60-day history and the regulatory multiplier.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselInput {
    var0: f64,
    history: Vec<f64>,
    multiplier: f64,
}

impl BaselInput {
    pub fn new(var0: f64, history: Vec<f64>, multiplier: f64) -> Result<Self> {
        if history.len() != HISTORY_LEN {
            return Err(Error::Validation(format!(
                "history length {} != {HISTORY_LEN}",
                history.len()
            )));
        }
        if !(var0 > 0.0 && var0.is_finite()) {
            return Err(Error::Validation(format!("positivity: var0 = {var0}")));
        }
        if let Some(bad) = history.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
            return Err(Error::Validation(format!("positivity: history entry {bad}")));
        }
        if !(3.0..=4.0).contains(&multiplier) {
            return Err(Error::Validation(format!(
                "multiplier {multiplier} outside [3, 4]"
            )));
        }
        Ok(BaselInput {
            var0,
            history,
            multiplier,
        })
    }

    pub fn var0(&self) -> f64 {
        self.var0
    }

    pub fn history(&self) -> &[f64] {
        &self.history
    }

    pub fn multiplier(&self) -> f64 {
        self.multiplier
    }
}

/// `max(var0, (lambda/60) * sum(history))`.
pub fn capital_charge(b: &BaselInput) -> f64 {
    let avg_term = b.multiplier / HISTORY_LEN as f64 * b.history.iter().sum::<f64>();
    b.var0.max(avg_term)
}

/// Reads a VaR history CSV with header `day,var`: one `0` row for today's
/// figure and rows for day offsets -1..=-60 in any order.
pub fn ingest_history(path: &Path, multiplier: f64) -> Result<BaselInput> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| Error::Parse {
            line: 0,
            msg: e.to_string(),
        })?;
    {
        let headers = reader.headers().map_err(|e| Error::Parse {
            line: 1,
            msg: e.to_string(),
        })?;
        if headers.iter().collect::<Vec<_>>() != ["day", "var"] {
            return Err(Error::Parse {
                line: 1,
                msg: format!("expected header 'day,var', got '{}'", headers.iter().collect::<Vec<_>>().join(",")),
            });
        }
    }
    let mut var0: Option<f64> = None;
    let mut history = vec![None::<f64>; HISTORY_LEN];
    for (idx, record) in reader.records().enumerate() {
        let line = idx + 2; // header is line 1
        let record = record.map_err(|e| Error::Parse {
            line,
            msg: e.to_string(),
        })?;
        if record.len() != 2 {
            return Err(Error::Parse {
                line,
                msg: format!("expected 2 fields, got {}", record.len()),
            });
        }
        let day: i64 = record[0].trim().parse().map_err(|_| Error::Parse {
            line,
            msg: format!("bad day offset '{}'", &record[0]),
        })?;
        let var: f64 = record[1].trim().parse().map_err(|_| Error::Parse {
            line,
            msg: format!("bad VaR value '{}'", &record[1]),
        })?;
        match day {
            0 => {
                if var0.replace(var).is_some() {
                    return Err(Error::Parse {
                        line,
                        msg: "duplicate day-0 row".into(),
                    });
                }
            }
            d if (-(HISTORY_LEN as i64)..=-1).contains(&d) => {
                let slot = (-d - 1) as usize;
                if history[slot].replace(var).is_some() {
                    return Err(Error::Parse {
                        line,
                        msg: format!("duplicate row for day {d}"),
                    });
                }
            }
            d => {
                return Err(Error::Parse {
                    line,
                    msg: format!("day offset {d} outside 0..=-60"),
                });
            }
        }
    }
    let var0 = var0.ok_or(Error::Validation("history length: missing day-0 row".into()))?;
    let history: Vec<f64> = history
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or(Error::Validation("history length: missing day rows".into()))?;
    BaselInput::new(var0, history, multiplier)
}

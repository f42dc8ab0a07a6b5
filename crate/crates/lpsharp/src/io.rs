//! CSV ingestion and result serialization.
//!
//! Input schema: header `day,value`, one measurement per row. All numeric
//! output uses fixed 6-decimal formatting so reruns are byte-identical.

use crate::error::{Error, Result};
use crate::ica::{ExperimentSeries, LPMap, MapRow, SurprisalRow};
use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

/// Parse a `day,value` file into series grouped by day, days ascending,
/// values kept in file order within each day.
pub fn ingest_csv(path: &Path) -> Result<Vec<ExperimentSeries>> {
    let file = fs::File::open(path)?;
    let mut lines = BufReader::new(file).lines();
    match lines.next() {
        Some(line) => {
            if line?.trim_end_matches('\r') != "day,value" {
                return Err(Error::MissingHeader);
            }
        }
        None => return Err(Error::MissingHeader),
    }
    let mut groups: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
    for (idx, line) in lines.enumerate() {
        let line_no = idx + 2; // header is line 1
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let mut parts = line.splitn(3, ',');
        let (day_str, value_str) = match (parts.next(), parts.next(), parts.next()) {
            (Some(d), Some(v), None) => (d, v),
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("expected two comma-separated fields, got {line:?}"),
                })
            }
        };
        let day: u32 = day_str.trim().parse().map_err(|_| Error::Parse {
            line: line_no,
            msg: format!("invalid day {day_str:?}"),
        })?;
        if day == 0 {
            return Err(Error::Parse {
                line: line_no,
                msg: "day must be a positive integer".into(),
            });
        }
        let value: f64 = value_str.trim().parse().map_err(|_| Error::Parse {
            line: line_no,
            msg: format!("invalid value {value_str:?}"),
        })?;
        if !value.is_finite() {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("non-finite value {value_str:?}"),
            });
        }
        groups.entry(day).or_default().push(value);
    }
    if groups.is_empty() {
        return Err(Error::EmptySeries);
    }
    Ok(groups
        .into_iter()
        .map(|(series_id, values)| ExperimentSeries { series_id, values })
        .collect())
}

pub fn fmt6(v: f64) -> String {
    format!("{v:.6}")
}

/// `day,lp1..lpM,si,location,scale`; degenerate rows keep the day id and
/// leave the numeric fields blank.
pub fn write_lp_map_csv(map: &LPMap, path: &Path) -> Result<()> {
    let mut out = String::new();
    out.push_str("day");
    for j in 1..=map.m_max {
        out.push_str(&format!(",lp{j}"));
    }
    out.push_str(",si,location,scale\n");
    for row in &map.rows {
        match row {
            MapRow::Fitted(r) => {
                out.push_str(&r.series_id.to_string());
                for c in &r.smoothed {
                    out.push(',');
                    out.push_str(&fmt6(*c));
                }
                out.push_str(&format!(
                    ",{},{},{}\n",
                    fmt6(r.surprisal),
                    fmt6(r.location),
                    fmt6(r.scale)
                ));
            }
            MapRow::Degenerate { series_id, .. } => {
                out.push_str(&series_id.to_string());
                out.push_str(&",".repeat(map.m_max + 3));
                out.push('\n');
            }
        }
    }
    write_atomic(path, out.as_bytes())
}

pub fn write_surprisal_csv(table: &[SurprisalRow], path: &Path) -> Result<()> {
    let mut out = String::from("day,si_gauss,si_laplace\n");
    for row in table {
        out.push_str(&format!(
            "{},{},{}\n",
            row.series_id,
            fmt6(row.si_gauss),
            fmt6(row.si_laplace)
        ));
    }
    write_atomic(path, out.as_bytes())
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    let mut f = fs::File::create(path)?;
    f.write_all(bytes)?;
    Ok(())
}

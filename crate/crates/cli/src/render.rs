use std::io::{self, Write};

use dualbound::exactfield::BigFloat;
use dualbound::sdp::serial::float_to_string;
use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::args::Format;
use crate::cache::ARTIFACT_VERSION;
use crate::config::RunConfig;

pub const SCHEMA: &str = "dualbound/v1";

/// A decimal string tagged with the precision it was computed at.
#[derive(Debug, Clone, Serialize)]
pub struct FloatStr {
    pub precision: u32,
    pub value: String,
}

impl From<&BigFloat> for FloatStr {
    fn from(x: &BigFloat) -> Self {
        FloatStr {
            precision: x.prec(),
            value: float_to_string(x),
        }
    }
}

/// Shortest round-trip form of an `f64`.
pub fn dec(x: f64) -> String {
    format!("{x:?}")
}

pub fn ser_f64<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&dec(*x))
}

#[derive(Serialize)]
pub struct Document<'a> {
    pub schema: &'static str,
    pub artifact_version: &'static str,
    pub command: &'a str,
    pub config: &'a RunConfig,
    pub records: &'a [Value],
}

impl<'a> Document<'a> {
    pub fn new(command: &'a str, config: &'a RunConfig, records: &'a [Value]) -> Self {
        Document {
            schema: SCHEMA,
            artifact_version: ARTIFACT_VERSION,
            command,
            config,
            records,
        }
    }
}

/// Header and JSON pointer of each tabular column.
pub fn columns(command: &str) -> Vec<(&'static str, &'static str)> {
    match command {
        "code-bound" => vec![
            ("n", "/n"),
            ("mu", "/mu"),
            ("objective_at_k_minus_1", "/objective_at_k_minus_1"),
            ("verified", "/certificates_verified"),
        ],
        "lattice-bound" | "voa-bound" => vec![
            (if command == "voa-bound" { "c" } else { "n" }, "/parameter"),
            ("N", "/N"),
            ("delta_star", "/delta_star/value"),
            ("feasible", "/bracket/0"),
            ("infeasible", "/bracket/1"),
            ("certificate", "/certificate"),
        ],
        "magic-verify" => vec![
            ("c", "/c"),
            ("passed", "/passed"),
            ("roundtrip_max_err", "/roundtrip_max_err"),
            ("vacuum", "/vacuum/value/value"),
        ],
        _ => vec![("h", "/h"), ("f", "/f/value"), ("error", "/error")],
    }
}

fn cell(record: &Value, pointer: &str, short: bool) -> String {
    match record.pointer(pointer) {
        None | Some(Value::Null) => String::new(),
        // Exact values such as "16" or "8/7" are left alone.
        Some(Value::String(s)) if short && s.contains(['.', 'e']) => {
            s.parse::<f64>().map(short_float).unwrap_or_else(|_| s.clone())
        }
        Some(Value::String(s)) => s.clone(),
        Some(v) => v.to_string(),
    }
}

fn short_float(x: f64) -> String {
    if x == 0.0 || (1e-3..1e6).contains(&x.abs()) {
        format!("{x:.6}")
    } else {
        format!("{x:.4e}")
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn write_output(out: &mut dyn Write, command: &str, cfg: &RunConfig, records: &[Value]) -> io::Result<()> {
    match cfg.output_format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &Document::new(command, cfg, records))?;
            writeln!(out)
        }
        Format::Csv => {
            let cols = columns(command);
            let mut header: Vec<&str> = cols.iter().map(|c| c.0).collect();
            header.extend(["status", "message"]);
            writeln!(out, "{}", header.join(","))?;
            for r in records {
                let mut row: Vec<String> = cols.iter().map(|(_, p)| csv_field(&cell(r, p, false))).collect();
                row.push(cell(r, "/status", false));
                row.push(csv_field(&cell(r, "/error", false)));
                writeln!(out, "{}", row.join(","))?;
            }
            Ok(())
        }
        Format::Text => {
            let cols = columns(command);
            let mut rows: Vec<Vec<String>> =
                vec![cols.iter().map(|c| c.0.to_string()).chain(["status".into()]).collect()];
            for r in records {
                let mut row: Vec<String> = cols.iter().map(|(_, p)| cell(r, p, true)).collect();
                row.push(cell(r, "/status", false));
                rows.push(row);
            }
            let widths: Vec<usize> = (0..rows[0].len())
                .map(|j| rows.iter().map(|r| r[j].chars().count()).max().unwrap_or(0))
                .collect();
            for row in &rows {
                let line: Vec<String> = row.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect();
                writeln!(out, "{}", line.join("  ").trim_end())?;
            }
            for r in records {
                if let Some(e) = r
                    .get("error")
                    .filter(|_| r.get("status").and_then(Value::as_str) == Some("error"))
                {
                    writeln!(
                        out,
                        "error ({}): {}",
                        cell(r, "/parameter", false),
                        e.as_str().unwrap_or_default()
                    )?;
                }
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn cells_follow_pointers() {
        let r = json!({"f": {"value": "1.25e-3", "precision": 256}, "h": "2.5"});
        assert_eq!(cell(&r, "/f/value", false), "1.25e-3");
        assert_eq!(cell(&r, "/f/value", true), "0.001250");
        assert_eq!(cell(&r, "/missing", true), "");
        assert_eq!(cell(&json!({"o": "4096"}), "/o", true), "4096");
        assert_eq!(short_float(3.2e-40), "3.2000e-40");
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("16"), "16");
    }
}

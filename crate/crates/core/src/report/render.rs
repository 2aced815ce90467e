use std::fmt::Write;

use serde_json::Value;

use super::{Command, OutputFormat};
use crate::error::{Error, Result};

/// Renders a report value; CSV is limited to the tabular commands.
pub fn render(command: &Command, report: &Value, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => Ok(format!("{report:#}\n")),
        OutputFormat::Csv => csv(command, &report["result"]),
        OutputFormat::Text => Ok(text(command, report)),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn partition(v: &Value) -> String {
    let parts: Vec<String> = v.as_array().into_iter().flatten().map(scalar).collect();
    format!("({})", parts.join(","))
}

fn rows(v: &Value) -> impl Iterator<Item = &Value> {
    v.as_array().into_iter().flatten()
}

fn csv(command: &Command, result: &Value) -> Result<String> {
    let mut out = String::new();
    match command {
        Command::Catalog => {
            out.push_str("name,dim\n");
            for r in rows(result) {
                let _ = writeln!(out, "{},{}", quote(&scalar(&r["name"])), scalar(&r["dim"]));
            }
        }
        Command::Codim { .. } => {
            out.push_str("n,c_n,certainty,failure_bound\n");
            for r in rows(&result["rows"]) {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    scalar(&r["n"]),
                    scalar(&r["value"]),
                    scalar(&r["certainty"]),
                    scalar(&r["failure_bound"])
                );
            }
        }
        Command::Cocharacter { .. } => {
            out.push_str("n,partition,multiplicity,dim\n");
            for t in rows(&result["tables"]) {
                for r in rows(&t["rows"]) {
                    let _ = writeln!(
                        out,
                        "{},{},{},{}",
                        scalar(&t["n"]),
                        quote(&partition(&r["partition"])),
                        scalar(&r["multiplicity"]),
                        scalar(&r["dim"])
                    );
                }
            }
        }
        Command::Growth => {
            out.push_str("n,c_n,l_n,root,d\n");
            for r in rows(&result["rows"]) {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    scalar(&r["n"]),
                    scalar(&r["codimension"]),
                    scalar(&r["colength"]),
                    scalar(&r["root"]),
                    scalar(&result["d"])
                );
            }
        }
        other => {
            return Err(Error::malformed(format!(
                "csv output is available for catalog, codim, cocharacter and growth, not {}",
                other.name()
            )))
        }
    }
    Ok(out)
}

fn text(command: &Command, report: &Value) -> String {
    let mut out = String::new();
    let _ = write!(out, "{}", command.name());
    if let Some(src) = report["algebra"]["source"].as_str() {
        let _ = write!(out, " {src} (dim {})", scalar(&report["algebra"]["dim"]));
    }
    out.push('\n');
    flatten(&mut out, "", &report["result"]);
    out
}

fn flatten(out: &mut String, path: &str, v: &Value) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                flatten(out, &p, x);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in a.iter().enumerate() {
                flatten(out, &format!("{path}[{i}]"), x);
            }
        }
        leaf => {
            let _ = writeln!(out, "{path}: {}", if leaf.is_array() { leaf.to_string() } else { scalar(leaf) });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn csv_tables() {
        let r = json!({"result": {"tables": [{"n": 3, "rows": [{"partition": [2, 1], "multiplicity": 1, "dim": 2}]}]}});
        let s = render(&Command::Cocharacter { n: Some(3) }, &r, OutputFormat::Csv).unwrap();
        assert_eq!(s, "n,partition,multiplicity,dim\n3,\"(2,1)\",1,2\n");
        assert!(render(&Command::Analyze, &r, OutputFormat::Csv).is_err());
    }

    #[test]
    fn text_flattens() {
        let r = json!({"algebra": {"source": "sl2", "dim": 3}, "result": {"d": 3, "components": [1]}});
        let s = render(&Command::Exponent { checks: false, samples: 0 }, &r, OutputFormat::Text).unwrap();
        assert_eq!(s, "exponent sl2 (dim 3)\ncomponents: [1]\nd: 3\n");
    }
}

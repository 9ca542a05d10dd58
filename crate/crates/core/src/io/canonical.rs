//! Deterministic JSON text: sorted keys, two-space indent, scalar arrays
//! and `[re, im]` rows kept on one line, numbers with 17 significant digits.

use serde_json::Value;

use crate::error::{Error, Result};

/// `%.17g`, with `-0` written as `0`.
pub fn format_number(x: f64) -> Result<String> {
    if !x.is_finite() {
        return Err(Error::Format(format!("cannot write non-finite number {x}")));
    }
    if x == 0.0 {
        return Ok("0".into());
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return Ok(format!("{mantissa}e{sign}{:02}", exp.abs()));
    }
    let decimals = (16 - exp).max(0) as usize;
    Ok(strip_zeros(&format!("{x:.decimals$}")).to_string())
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn depth(v: &Value) -> Option<usize> {
    match v {
        Value::Object(_) => None,
        Value::Array(items) => items.iter().try_fold(1, |d, item| Some(d.max(1 + depth(item)?))),
        _ => Some(0),
    }
}

fn write_value(out: &mut String, v: &Value, indent: usize) -> Result<()> {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => match (n.as_u64(), n.as_i64()) {
            (Some(u), _) => out.push_str(&u.to_string()),
            (None, Some(i)) => out.push_str(&i.to_string()),
            _ => out.push_str(&format_number(n.as_f64().expect("finite JSON number"))?),
        },
        Value::String(s) => out.push_str(&serde_json::to_string(s)?),
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if depth(v).is_some_and(|d| d <= 2) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_value(out, item, indent)?;
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&"  ".repeat(indent + 1));
                write_value(out, item, indent + 1)?;
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, key) in keys.iter().enumerate() {
                out.push_str(&"  ".repeat(indent + 1));
                out.push_str(&serde_json::to_string(key)?);
                out.push_str(": ");
                write_value(out, &map[key.as_str()], indent + 1)?;
                out.push_str(if i + 1 < keys.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push('}');
        }
    }
    Ok(())
}

/// Canonical text of `v`, newline-terminated.
pub fn to_canonical_string(v: &Value) -> Result<String> {
    let mut out = String::new();
    write_value(&mut out, v, 0)?;
    out.push('\n');
    Ok(out)
}

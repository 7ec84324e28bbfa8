//! JSON and CSV rendering.

use serde_json::Value;

use crate::CliError;

/// Formats `x` with 15 significant digits, plain notation for moderate
/// magnitudes and scientific otherwise.
pub fn sig15(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0.00000000000000".into();
    }
    let exponent = x.abs().log10().floor() as i32;
    if (-5..15).contains(&exponent) {
        format!("{:.*}", (14 - exponent) as usize, x)
    } else {
        format!("{x:.14e}")
    }
}

fn cell(v: &Value) -> Result<String, CliError> {
    match v {
        Value::Null => Ok(String::new()),
        Value::Bool(b) => Ok(b.to_string()),
        Value::Number(n) => Ok(match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => i.to_string(),
            (_, Some(u)) => u.to_string(),
            _ => sig15(n.as_f64().unwrap_or(f64::NAN)),
        }),
        Value::String(s) if s.contains([',', '"', '\n']) => Ok(format!("\"{}\"", s.replace('"', "\"\""))),
        Value::String(s) => Ok(s.clone()),
        Value::Array(items) => {
            let parts = items.iter().map(cell).collect::<Result<Vec<_>, _>>()?;
            Ok(format!("\"[{}]\"", parts.join(";")))
        }
        Value::Object(_) => Err(CliError::Input("nested objects cannot be written as CSV".into())),
    }
}

/// An object becomes one header and one row; an array of objects becomes a table.
pub fn to_csv(value: &Value) -> Result<String, CliError> {
    let rows: Vec<&serde_json::Map<String, Value>> = match value {
        Value::Object(map) => vec![map],
        Value::Array(items) => items
            .iter()
            .map(|v| v.as_object().ok_or_else(|| CliError::Input("CSV needs a list of records".into())))
            .collect::<Result<_, _>>()?,
        _ => return Err(CliError::Input("CSV needs a record or a list of records".into())),
    };
    let Some(first) = rows.first() else { return Ok(String::new()) };
    let header: Vec<&String> = first.keys().collect();
    let mut out = header.iter().map(|k| k.as_str()).collect::<Vec<_>>().join(",");
    out.push('\n');
    for row in rows {
        let cells = header
            .iter()
            .map(|k| row.get(*k).map_or(Ok(String::new()), cell))
            .collect::<Result<Vec<_>, _>>()?;
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}

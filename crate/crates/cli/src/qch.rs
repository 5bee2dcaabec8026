//! Channel definition files (`.qch`): JSON with Kraus operators written as
//! nested arrays of `[re, im]` pairs. See `docs/formats.md`.

use std::path::Path;

use qcap::linalg::{c, CMatrix, CVector};
use qcap::quantum::{PureState, QuantumChannel};
use serde_json::Value;

use crate::error::CliError;

#[derive(Debug, Clone)]
pub struct ChannelFile {
    pub name: String,
    pub channel: QuantumChannel,
    pub signals: Option<Vec<PureState>>,
    pub metadata: Option<Value>,
}

pub fn parse_channel(path: &Path) -> Result<ChannelFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
    parse_channel_str(&text).map_err(|e| e.in_file(path))
}

pub fn parse_channel_str(text: &str) -> Result<ChannelFile, CliError> {
    let root: Value = serde_json::from_str(text).map_err(|e| CliError::Syntax {
        file: None,
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let obj = root.as_object().ok_or_else(|| format_err("", "top level must be an object"))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "name" | "dim_in" | "dim_out" | "kraus" | "signals" | "metadata") {
            return Err(format_err(key, "unknown field"));
        }
    }
    let name = match obj.get("name") {
        Some(Value::String(s)) => s.clone(),
        Some(_) => return Err(format_err("name", "expected a string")),
        None => return Err(format_err("name", "missing field")),
    };
    let dim_in = dimension(obj.get("dim_in"), "dim_in")?;
    let dim_out = dimension(obj.get("dim_out"), "dim_out")?;
    let kraus_value = obj.get("kraus").ok_or_else(|| format_err("kraus", "missing field"))?;
    // A single matrix (depth 3) is accepted in place of a one-element list.
    let kraus_list: Vec<&Value> = match depth(kraus_value) {
        3 => vec![kraus_value],
        4 => kraus_value.as_array().expect("depth 4 is an array").iter().collect(),
        d => {
            return Err(format_err(
                "kraus",
                &format!("expected a matrix or a list of matrices of [re, im] entries (nesting depth 3 or 4), found depth {d}"),
            ))
        }
    };
    let mut kraus = Vec::with_capacity(kraus_list.len());
    for (k, m) in kraus_list.iter().enumerate() {
        kraus.push(matrix(m, dim_out, dim_in, &format!("kraus[{k}]"))?);
    }
    let channel = QuantumChannel::new(kraus).map_err(|e| CliError::Invalid(format!("kraus: {e}")))?;

    let signals = match obj.get("signals") {
        None | Some(Value::Null) => None,
        Some(Value::Array(items)) => {
            if items.is_empty() {
                return Err(format_err("signals", "must not be empty"));
            }
            let mut out = Vec::with_capacity(items.len());
            for (i, v) in items.iter().enumerate() {
                let path = format!("signals[{i}]");
                let v = vector(v, dim_in, &path)?;
                out.push(PureState::new(v).map_err(|e| CliError::Invalid(format!("{path}: {e}")))?);
            }
            Some(out)
        }
        Some(_) => return Err(format_err("signals", "expected a list of vectors")),
    };
    Ok(ChannelFile {
        name,
        channel,
        signals,
        metadata: obj.get("metadata").cloned(),
    })
}

fn format_err(path: &str, msg: &str) -> CliError {
    CliError::Format {
        file: None,
        path: path.to_string(),
        message: msg.to_string(),
    }
}

fn dimension(v: Option<&Value>, path: &str) -> Result<usize, CliError> {
    match v.and_then(Value::as_u64) {
        Some(d) if d > 0 => Ok(d as usize),
        Some(_) => Err(format_err(path, "must be positive")),
        None if v.is_none() => Err(format_err(path, "missing field")),
        None => Err(format_err(path, "expected a positive integer")),
    }
}

fn depth(v: &Value) -> usize {
    match v {
        Value::Array(items) => 1 + items.first().map_or(0, depth),
        _ => 0,
    }
}

fn entry(v: &Value, path: &str) -> Result<qcap::linalg::C64, CliError> {
    let pair = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| format_err(path, "expected an [re, im] pair"))?;
    let re = pair[0].as_f64().ok_or_else(|| format_err(path, "real part is not a number"))?;
    let im = pair[1].as_f64().ok_or_else(|| format_err(path, "imaginary part is not a number"))?;
    Ok(c(re, im))
}

fn matrix(v: &Value, rows: usize, cols: usize, path: &str) -> Result<CMatrix, CliError> {
    let r = v.as_array().ok_or_else(|| format_err(path, "expected a list of rows"))?;
    if r.len() != rows {
        return Err(format_err(path, &format!("has {} rows, expected dim_out = {rows}", r.len())));
    }
    let mut m = CMatrix::zeros(rows, cols);
    for (i, row) in r.iter().enumerate() {
        let rp = format!("{path}[{i}]");
        let row = row.as_array().ok_or_else(|| format_err(&rp, "expected a row"))?;
        if row.len() != cols {
            return Err(format_err(&rp, &format!("has {} entries, expected dim_in = {cols}", row.len())));
        }
        for (j, e) in row.iter().enumerate() {
            m[(i, j)] = entry(e, &format!("{rp}[{j}]"))?;
        }
    }
    Ok(m)
}

fn vector(v: &Value, dim: usize, path: &str) -> Result<CVector, CliError> {
    let items = v.as_array().ok_or_else(|| format_err(path, "expected a vector"))?;
    if items.len() != dim {
        return Err(format_err(path, &format!("has {} entries, expected dim_in = {dim}", items.len())));
    }
    let mut out = CVector::zeros(dim);
    for (i, e) in items.iter().enumerate() {
        out[i] = entry(e, &format!("{path}[{i}]"))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_matrix_is_one_kraus_operator() {
        let f = parse_channel_str(r#"{"name": "id", "dim_in": 2, "dim_out": 2, "kraus": [[[1,0],[0,0]],[[0,0],[1,0]]]}"#)
            .unwrap();
        assert_eq!(f.channel, QuantumChannel::identity(2));
        assert!(f.signals.is_none());
    }

    #[test]
    fn syntax_error_has_position() {
        let e = parse_channel_str("{\n  \"name\": \"x\",\n  \"dim_in\": 2,,\n}").unwrap_err();
        match e {
            CliError::Syntax { line, column, .. } => assert_eq!((line, column), (3, 15)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn trace_defect_is_named() {
        let e = parse_channel_str(r#"{"name": "x", "dim_in": 1, "dim_out": 1, "kraus": [[[[1,0]]], [[[1,0]]]]}"#).unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("trace preserving") && msg.contains("1e0"), "{msg}");
    }

    #[test]
    fn shape_and_signal_errors() {
        let e = parse_channel_str(r#"{"name": "x", "dim_in": 2, "dim_out": 2, "kraus": [[[1,0],[0,0]]]}"#).unwrap_err();
        assert!(e.to_string().contains("kraus[0]"), "{e}");
        let e = parse_channel_str(
            r#"{"name": "x", "dim_in": 1, "dim_out": 1, "kraus": [[[1,0]]], "signals": [[[2,0]]]}"#,
        )
        .unwrap_err();
        assert!(e.to_string().contains("signals[0]"), "{e}");
        let e = parse_channel_str(r#"{"name": "x", "dim_in": 1, "dim_out": 1, "kraus": [[[1,0]]], "extra": 1}"#)
            .unwrap_err();
        assert!(e.to_string().contains("extra"), "{e}");
        let e = parse_channel_str(r#"{"dim_in": 1, "dim_out": 1, "kraus": [[[1,0]]]}"#).unwrap_err();
        assert!(e.to_string().contains("name"), "{e}");
    }
}

//! `edge,value` CSV for step functions.
//!
//! ```text
//! edge,value
//! 0,
//! 1.0000000000000000e0,3.0000000000000000e0
//! ```
//! Row `k + 1` carries edge `r_k` and the value on `(r_{k-1}, r_k]`.

use std::io::{Read, Write};
use std::path::Path;

use super::StepFunction;
use crate::error::{HardyError, Result};

pub fn step_function_to_csv(f: &StepFunction) -> String {
    let mut out = String::from("edge,value\n0,\n");
    for (e, v) in f.edges()[1..].iter().zip(f.values()) {
        out.push_str(&format!("{e:.16e},{v:.16e}\n"));
    }
    out
}

pub fn step_function_from_csv<R: Read>(reader: R) -> Result<StepFunction> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| HardyError::MalformedCsv(e.to_string()))?
        .clone();
    if headers.len() != 2 || &headers[0] != "edge" || &headers[1] != "value" {
        return Err(HardyError::MalformedCsv(format!(
            "expected header `edge,value`, got `{}`",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut edges = Vec::new();
    let mut values = Vec::new();
    for (row, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| HardyError::MalformedCsv(e.to_string()))?;
        if record.len() != 2 {
            return Err(HardyError::MalformedCsv(format!(
                "row {}: expected 2 fields, got {}",
                row + 2,
                record.len()
            )));
        }
        let edge: f64 = record[0].parse().map_err(|_| {
            HardyError::MalformedCsv(format!("row {}: bad edge `{}`", row + 2, &record[0]))
        })?;
        if row == 0 {
            if edge != 0.0 || !record[1].is_empty() {
                return Err(HardyError::MalformedCsv(
                    "first data row must be `0,` (edge 0, empty value)".into(),
                ));
            }
        } else {
            let value: f64 = record[1].parse().map_err(|_| {
                HardyError::MalformedCsv(format!("row {}: bad value `{}`", row + 2, &record[1]))
            })?;
            values.push(value);
        }
        edges.push(edge);
    }
    StepFunction::from_edges(edges, values).map_err(|e| HardyError::MalformedCsv(e.to_string()))
}

pub fn read_step_function(path: impl AsRef<Path>) -> Result<StepFunction> {
    let file = std::fs::File::open(path)?;
    step_function_from_csv(file)
}

pub fn write_step_function(path: impl AsRef<Path>, f: &StepFunction) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    file.write_all(step_function_to_csv(f).as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let f = StepFunction::from_edges(
            vec![0.0, 0.1, 1.0 / 3.0, 2.5],
            vec![-1.0 / 7.0, 3.0, 1e-300],
        )
        .unwrap();
        let text = step_function_to_csv(&f);
        assert!(text.starts_with("edge,value\n0,\n"));
        let back = step_function_from_csv(text.as_bytes()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in [
            "edge,val\n0,\n1,1\n",
            "edge,value\n0,1\n1,1\n",
            "edge,value\n0,\n1,abc\n",
            "edge,value\n0,\n1,1\n0.5,1\n",
            "edge,value\n0,\n",
            "edge,value\n0,\n1,1,2\n",
        ] {
            assert!(
                matches!(
                    step_function_from_csv(bad.as_bytes()),
                    Err(HardyError::MalformedCsv(_))
                ),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn accepts_plain_decimals() {
        let f = step_function_from_csv("edge,value\n0,\n1,1\n2,3\n".as_bytes()).unwrap();
        assert_eq!(f.values(), &[1.0, 3.0]);
        assert_eq!(f.edges(), &[0.0, 1.0, 2.0]);
    }
}

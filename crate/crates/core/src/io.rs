//! Dataset and phase-sample file formats.
//!
//! Paired data: a univariate dataset is a CSV with header `x,y`. A
//! multivariate one starts with a `# dims: k,m` comment line followed by the
//! header `x1,..,xk,y1,..,ym`. Phases: a single column `theta_rad`.
//! Values are written with the shortest representation that parses back to
//! the same `f64`, so files round-trip bit-exactly.

use std::fs;
use std::path::Path;

use crate::data::{PairedDataset, PhaseSample};
use crate::error::{Error, Result};

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn parse_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse(msg.into()))
}

fn expected_header(k: usize, m: usize, univariate: bool) -> Vec<String> {
    if univariate {
        return vec!["x".into(), "y".into()];
    }
    (1..=k).map(|i| format!("x{i}")).chain((1..=m).map(|i| format!("y{i}"))).collect()
}

fn parse_dims(line: &str) -> Result<(usize, usize)> {
    let rest = line.trim_start_matches('#').trim();
    let Some(spec) = rest.strip_prefix("dims:") else {
        return parse_err(format!("expected '# dims: k,m', got '{line}'"));
    };
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [k, m] => match (k.parse::<usize>(), m.parse::<usize>()) {
            (Ok(k), Ok(m)) if k > 0 && m > 0 => Ok((k, m)),
            _ => parse_err(format!("bad dimensions in '{line}'")),
        },
        _ => parse_err(format!("bad dimensions in '{line}'")),
    }
}

fn parse_value(field: &str, row: usize) -> Result<f64> {
    field.trim().parse::<f64>().map_err(|_| Error::Parse(format!("row {row}: '{field}' is not a number")))
}

/// Parses a paired dataset from CSV text.
pub fn parse_dataset(text: &str) -> Result<PairedDataset> {
    let (dims, body) = match text.strip_prefix('#') {
        Some(_) => {
            let (first, rest) = text.split_once('\n').unwrap_or((text, ""));
            (Some(parse_dims(first.trim_end_matches('\r'))?), rest)
        }
        None => (None, text),
    };
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(body.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(String::from).collect();
    let (k, m) = dims.unwrap_or((1, 1));
    let want = expected_header(k, m, dims.is_none());
    if header != want {
        return parse_err(format!("expected header '{}', got '{}'", want.join(","), header.join(",")));
    }
    let (mut x, mut y) = (Vec::new(), Vec::new());
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        let row = i + 1;
        if rec.len() != k + m {
            return parse_err(format!("row {row}: expected {} fields, got {}", k + m, rec.len()));
        }
        for (j, field) in rec.iter().enumerate() {
            let v = parse_value(field, row)?;
            if j < k {
                x.push(v)
            } else {
                y.push(v)
            }
        }
    }
    if x.is_empty() {
        return parse_err("dataset has no rows");
    }
    PairedDataset::from_flat(x, y, k, m).map_err(|e| Error::Parse(e.to_string()))
}

/// Formats a dataset as CSV text; see the module docs for the layout.
pub fn format_dataset(data: &PairedDataset) -> String {
    let (k, m) = (data.dim_x(), data.dim_y());
    let univariate = k == 1 && m == 1;
    let mut out = String::new();
    if !univariate {
        out.push_str(&format!("# dims: {k},{m}\n"));
    }
    out.push_str(&expected_header(k, m, univariate).join(","));
    out.push('\n');
    for (x, y) in data.rows() {
        let fields: Vec<String> = x.iter().chain(y).map(f64::to_string).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn read_dataset(path: &Path) -> Result<PairedDataset> {
    parse_dataset(&read_text(path)?)
}

pub fn write_dataset(data: &PairedDataset, path: &Path) -> Result<()> {
    Ok(fs::write(path, format_dataset(data))?)
}

pub fn parse_phases(text: &str) -> Result<PhaseSample> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(String::from).collect();
    if header != ["theta_rad"] {
        return parse_err(format!("expected header 'theta_rad', got '{}'", header.join(",")));
    }
    let mut theta = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        if rec.len() != 1 {
            return parse_err(format!("row {}: expected 1 field, got {}", i + 1, rec.len()));
        }
        theta.push(parse_value(&rec[0], i + 1)?);
    }
    if theta.is_empty() {
        return parse_err("phase file has no rows");
    }
    PhaseSample::new(theta).map_err(|e| Error::Parse(e.to_string()))
}

pub fn format_phases(sample: &PhaseSample) -> String {
    let mut out = String::from("theta_rad\n");
    for t in sample.theta() {
        out.push_str(&t.to_string());
        out.push('\n');
    }
    out
}

pub fn read_phases(path: &Path) -> Result<PhaseSample> {
    parse_phases(&read_text(path)?)
}

pub fn write_phases(sample: &PhaseSample, path: &Path) -> Result<()> {
    Ok(fs::write(path, format_phases(sample))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn univariate_layout() {
        let d = PairedDataset::univariate(vec![1.0, -0.5], vec![0.25, 3.0]).unwrap();
        assert_eq!(format_dataset(&d), "x,y\n1,0.25\n-0.5,3\n");
        assert_eq!(parse_dataset("x,y\n1,0.25\n-0.5,3\n").unwrap(), d);
    }

    #[test]
    fn multivariate_layout() {
        let d = PairedDataset::from_flat(vec![1.0, 2.0, 3.0, 4.0], vec![5.0, 6.0], 2, 1).unwrap();
        let text = format_dataset(&d);
        assert_eq!(text, "# dims: 2,1\nx1,x2,y1\n1,2,5\n3,4,6\n");
        assert_eq!(parse_dataset(&text).unwrap(), d);
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(parse_dataset("u,v\n1,2\n"), Err(Error::Parse(m)) if m.contains("header")));
        assert!(matches!(parse_dataset("x,y\n1,abc\n"), Err(Error::Parse(m)) if m.contains("abc")));
        assert!(matches!(parse_dataset("x,y\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_dataset("# dims: 0,1\nx1\n"), Err(Error::Parse(_))));
        assert!(parse_dataset("x,y\n1,2,3\n").is_err());
        assert!(matches!(parse_phases("theta\n1\n"), Err(Error::Parse(_))));
    }

    #[test]
    fn phases_round_trip() {
        let p = PhaseSample::new(vec![0.0, 1.5, 6.0]).unwrap();
        assert_eq!(parse_phases(&format_phases(&p)).unwrap(), p);
    }

    proptest! {
        #[test]
        fn dataset_round_trips_bit_exactly(
            rows in prop::collection::vec((any::<f64>(), any::<f64>(), any::<f64>()), 1..30),
            multi in any::<bool>(),
        ) {
            prop_assume!(rows.iter().all(|(a, b, c)| a.is_finite() && b.is_finite() && c.is_finite()));
            let d = if multi {
                let x: Vec<f64> = rows.iter().flat_map(|r| [r.0, r.1]).collect();
                PairedDataset::from_flat(x, rows.iter().map(|r| r.2).collect(), 2, 1).unwrap()
            } else {
                PairedDataset::univariate(rows.iter().map(|r| r.0).collect(), rows.iter().map(|r| r.1).collect()).unwrap()
            };
            let back = parse_dataset(&format_dataset(&d)).unwrap();
            let bits = |v: &[f64]| v.iter().map(|f| f.to_bits()).collect::<Vec<_>>();
            prop_assert_eq!(bits(back.x_flat()), bits(d.x_flat()));
            prop_assert_eq!(bits(back.y_flat()), bits(d.y_flat()));
        }
    }
}

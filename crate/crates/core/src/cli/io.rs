//! File formats: driver JSON, welding and trace CSV, JSON reports.
//!
//! Floats are written with 17 significant digits so every value survives a
//! round trip. Files are written to a temporary sibling and renamed into
//! place, so a failed run never leaves a partial artifact.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::driver::DrivingTerm;
use crate::error::{Error, Result};
use crate::loewner::TraceSample;
use crate::welding::{WeldPair, Welding};

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn number_array(obj: &serde_json::Map<String, Value>, field: &str) -> Result<Vec<f64>> {
    let arr = obj
        .get(field)
        .ok_or_else(|| Error::Validation(format!("missing field `{field}`")))?
        .as_array()
        .ok_or_else(|| Error::Validation(format!("field `{field}` is not an array")))?;
    arr.iter()
        .enumerate()
        .map(|(i, v)| {
            v.as_f64()
                .ok_or_else(|| Error::Validation(format!("{field}[{i}] is not a number")))
        })
        .collect()
}

/// Parse a driver from `{"T": .., "grid": [..], "sigma": [..]}`.
pub fn parse_driver(text: &str) -> Result<DrivingTerm> {
    let v: Value = serde_json::from_str(text)?;
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Validation("driver file must hold a JSON object".into()))?;
    let horizon = obj
        .get("T")
        .ok_or_else(|| Error::Validation("missing field `T`".into()))?
        .as_f64()
        .ok_or_else(|| Error::Validation("field `T` is not a number".into()))?;
    let grid = number_array(obj, "grid")?;
    let sigma = number_array(obj, "sigma")?;
    DrivingTerm::with_horizon(horizon, grid, sigma)
}

pub fn load_driver(path: &Path) -> Result<DrivingTerm> {
    parse_driver(&std::fs::read_to_string(path)?)
}

pub fn driver_json(d: &DrivingTerm) -> Value {
    serde_json::json!({ "T": d.horizon(), "grid": d.grid(), "sigma": d.sigma() })
}

pub fn read_welding(path: &Path) -> Result<Welding> {
    let mut rdr = csv::Reader::from_path(path)?;
    let headers = rdr.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["t", "theta_plus", "theta_minus"] {
        return Err(Error::Validation(format!(
            "welding header must be `t,theta_plus,theta_minus`, found `{}`",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let pairs = rdr
        .deserialize::<WeldPair>()
        .enumerate()
        .map(|(i, r)| r.map_err(|e| Error::Validation(format!("welding row {i}: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    Welding::new(pairs)
}

/// Write `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, write: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    {
        let mut buf = std::io::BufWriter::new(tmp.as_file_mut());
        write(&mut buf)?;
        buf.flush()?;
    }
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file().set_permissions(std::fs::Permissions::from_mode(0o644))?;
    }
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn write_rows(out: &mut dyn Write, header: &[&str], rows: impl Iterator<Item = Vec<f64>>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.into_iter().map(fmt_f64))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_welding(path: &Path, w: &Welding) -> Result<()> {
    write_atomic(path, |out| {
        write_rows(
            out,
            &["t", "theta_plus", "theta_minus"],
            w.pairs().iter().map(|p| vec![p.t, p.theta_plus, p.theta_minus]),
        )
    })
}

pub fn write_trace(path: &Path, samples: &[TraceSample]) -> Result<()> {
    write_atomic(path, |out| {
        write_rows(
            out,
            &["t", "x", "y"],
            samples.iter().map(|s| vec![s.t, s.tip.re, s.tip.im]),
        )
    })
}

/// All columns of a numeric CSV file, with its header.
pub fn read_columns(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut rdr = csv::Reader::from_path(path)?;
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    let mut cols = vec![Vec::new(); header.len()];
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        for (k, field) in rec.iter().enumerate() {
            let v: f64 = field.trim().parse().map_err(|_| {
                Error::Validation(format!("row {i}, column `{}` is not a number", header[k]))
            })?;
            cols[k].push(v);
        }
    }
    Ok((header, cols))
}

/// serde_json formatter writing every float with 17 significant digits.
struct FixedDigits;

impl serde_json::ser::Formatter for FixedDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        if value.is_finite() {
            writer.write_all(fmt_f64(value).as_bytes())
        } else {
            writer.write_all(b"null")
        }
    }
}

pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedDigits);
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = to_json_string(value)?;
    write_atomic(path, |out| Ok(out.write_all(text.as_bytes())?))
}

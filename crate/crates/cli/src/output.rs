//! Serialisation of datasets. Reals are written with 17 significant digits
//! in CSV and as shortest round-trip decimals in JSON, so reruns are
//! byte-identical.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use bopshox::analysis::{Cell, Dataset};
use serde_json::{Map, Number, Value};

use crate::args::Format;

pub fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}

fn cell_text(c: &Cell) -> String {
    match *c {
        Cell::Int(v) => v.to_string(),
        Cell::Real(v) => format_real(v),
    }
}

pub fn to_csv(ds: &Dataset) -> Result<Vec<u8>, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(ds.columns.iter().map(|c| c.name.as_str()))?;
    for row in &ds.rows {
        w.write_record(row.iter().map(cell_text))?;
    }
    w.into_inner().map_err(|e| e.into_error().into())
}

pub fn to_json(ds: &Dataset) -> Vec<u8> {
    let rows: Vec<Value> = ds
        .rows
        .iter()
        .map(|row| {
            let obj: Map<String, Value> = ds
                .columns
                .iter()
                .zip(row)
                .map(|(col, cell)| {
                    let v = match *cell {
                        Cell::Int(i) => Value::from(i),
                        // validated finite before writing
                        Cell::Real(x) => Value::Number(Number::from_f64(x).expect("finite")),
                    };
                    (col.name.clone(), v)
                })
                .collect();
            Value::Object(obj)
        })
        .collect();
    let mut bytes = serde_json::to_vec_pretty(&Value::Array(rows)).expect("in-memory JSON");
    bytes.push(b'\n');
    bytes
}

/// Writes `ds` to `<dir>/<name>.<ext>` and returns the path.
pub fn write_dataset(ds: &Dataset, dir: &Path, format: Format) -> std::io::Result<PathBuf> {
    let path = dir.join(format!("{}.{}", ds.name, format.extension()));
    let bytes = match format {
        Format::Csv => to_csv(ds).map_err(std::io::Error::other)?,
        Format::Json => to_json(ds),
    };
    let mut f = fs::File::create(&path)?;
    f.write_all(&bytes)?;
    Ok(path)
}

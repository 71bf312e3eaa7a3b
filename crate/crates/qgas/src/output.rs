//! CSV and JSON artifacts. Every float is written with 17 significant digits
//! so a reload reproduces the stored double exactly.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use qgas_core::SystemSpec;
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{json, Map, Value};
use tempfile::NamedTempFile;

use crate::config::Format;
use crate::error::CliResult;

pub const SCHEMA: u64 = 1;

pub fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> CliResult<Vec<u8>> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.columns).map_err(io::Error::from)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| match c {
                Cell::Num(x) => sci(*x),
                Cell::Text(s) => s.clone(),
            }))
            .map_err(io::Error::from)?;
        }
        w.into_inner().map_err(|e| e.into_error().into())
    }

    pub fn to_json(&self) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                Value::Array(
                    row.iter()
                        .map(|c| match c {
                            Cell::Num(x) => num(*x),
                            Cell::Text(s) => Value::String(s.clone()),
                        })
                        .collect(),
                )
            })
            .collect();
        json!({ "columns": self.columns, "rows": Value::Array(rows) })
    }
}

/// A finite float as a JSON number; non-finite values become `null`.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

/// Integral values as JSON integers, anything else as [`num`].
pub fn count_or_num(x: f64) -> Value {
    if x >= 0.0 && x.fract() == 0.0 && x < 9.0e15 {
        Value::from(x as u64)
    } else {
        num(x)
    }
}

/// Pretty JSON whose floats keep 17 significant digits.
struct SciFormatter<'a>(PrettyFormatter<'a>);

impl Formatter for SciFormatter<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(sci(value).as_bytes())
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json_bytes(value: &Value) -> CliResult<Vec<u8>> {
    let mut out = Vec::new();
    let mut ser =
        serde_json::Serializer::with_formatter(&mut out, SciFormatter(PrettyFormatter::new()));
    value.serialize(&mut ser).map_err(io::Error::from)?;
    out.push(b'\n');
    Ok(out)
}

/// Write through a temporary file in the same directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir)?;
    let mut tmp = NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub fn system_json(spec: &SystemSpec) -> Value {
    json!({
        "eps": spec.eps().iter().map(|&e| num(e)).collect::<Vec<_>>(),
        "particles": spec.particles(),
        "q": num(spec.q().get()),
        "hbar": num(spec.hbar()),
    })
}

/// Schema-versioned run metadata.
#[derive(Debug, Clone)]
pub struct Meta {
    pub system: Value,
    pub method: String,
    pub counts: Map<String, Value>,
    pub warnings: Vec<String>,
    /// Command-specific sections, merged at the top level.
    pub extra: Map<String, Value>,
}

impl Meta {
    pub fn new(spec: &SystemSpec, method: &str) -> Self {
        Self {
            system: system_json(spec),
            method: method.to_owned(),
            counts: Map::new(),
            warnings: Vec::new(),
            extra: Map::new(),
        }
    }

    pub fn count(&mut self, key: &str, value: impl Into<Value>) {
        self.counts.insert(key.to_owned(), value.into());
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.extra.insert(key.to_owned(), value.into());
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("schema".into(), SCHEMA.into());
        m.insert("system".into(), self.system.clone());
        m.insert("method".into(), self.method.clone().into());
        m.insert("counts".into(), Value::Object(self.counts.clone()));
        m.insert("warnings".into(), self.warnings.clone().into());
        for (k, v) in &self.extra {
            m.insert(k.clone(), v.clone());
        }
        Value::Object(m)
    }
}

/// Write `table` and `meta` under `dir/stem`: `stem.csv` + `stem.meta.json`, or
/// a single `stem.json` holding the meta fields and the rows.
pub fn write_table(
    dir: &Path,
    stem: &str,
    format: Format,
    table: &Table,
    meta: &Meta,
) -> CliResult<Vec<PathBuf>> {
    match format {
        Format::Csv => {
            let data = dir.join(format!("{stem}.csv"));
            let meta_path = dir.join(format!("{stem}.meta.json"));
            write_atomic(&data, &table.to_csv()?)?;
            write_atomic(&meta_path, &to_json_bytes(&meta.to_json())?)?;
            Ok(vec![data, meta_path])
        }
        Format::Json => {
            let mut doc = meta.to_json();
            if let (Value::Object(m), Value::Object(t)) = (&mut doc, table.to_json()) {
                m.extend(t);
            }
            let path = dir.join(format!("{stem}.json"));
            write_atomic(&path, &to_json_bytes(&doc)?)?;
            Ok(vec![path])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE] {
            let s = sci(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let mantissa = s.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17);
        }
    }

    #[test]
    fn csv_has_header_and_lf() {
        let mut t = Table::new(&["a", "kind"]);
        t.push(vec![0.5.into(), "fisher".into()]);
        let text = String::from_utf8(t.to_csv().unwrap()).unwrap();
        assert_eq!(text, "a,kind\n5.0000000000000000e-1,fisher\n");
    }

    #[test]
    fn json_floats_keep_full_precision() {
        let bytes = to_json_bytes(&json!({ "x": num(0.1), "n": 3, "bad": num(f64::NAN) })).unwrap();
        let text = String::from_utf8(bytes).unwrap();
        assert!(text.contains("1.0000000000000001e-1"), "{text}");
        assert!(text.contains("\"n\": 3"));
        assert!(text.contains("null"));
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["x"].as_f64(), Some(0.1));
    }

    #[test]
    fn meta_has_schema_fields() {
        let spec = SystemSpec::new(
            vec![1.0, 0.0],
            2,
            qgas_core::DeformationParam::new(2.0).unwrap(),
            1.0,
        )
        .unwrap();
        let mut meta = Meta::new(&spec, "aberth");
        meta.count("fisher", 3);
        let v = meta.to_json();
        for key in ["schema", "system", "method", "counts", "warnings"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["schema"], 1);
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sub/x.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(fs::read(&p).unwrap(), b"two");
    }
}

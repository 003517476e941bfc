//! Atomic file output (temp file in the target directory, then rename).

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

pub fn write_atomic(path: &Path, body: impl FnOnce(&mut dyn Write) -> CliResult<()>) -> CliResult<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir)?;
    let tmp = tempfile::NamedTempFile::new_in(dir)?;
    {
        let mut w = BufWriter::new(tmp.as_file());
        body(&mut w)?;
        w.flush()?;
    }
    tmp.persist(path)?;
    Ok(())
}

pub fn write_csv(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> CliResult<()> {
    write_atomic(path, |w| {
        let mut c = csv::Writer::from_writer(w);
        c.write_record(header)?;
        for r in rows {
            c.write_record(&r)?;
        }
        c.flush()?;
        Ok(())
    })
}

/// JSON object holding `schema_version`, `config` and the given `fields`.
pub fn write_json(path: &Path, config: &impl Serialize, fields: Value) -> CliResult<()> {
    let mut m = Map::new();
    m.insert("schema_version".into(), SCHEMA_VERSION.into());
    m.insert("config".into(), serde_json::to_value(config)?);
    match fields {
        Value::Object(o) => m.extend(o),
        Value::Null => {}
        other => return Err(CliError::Io(format!("summary must be an object, got {other}"))),
    }
    write_atomic(path, |w| {
        serde_json::to_writer_pretty(&mut *w, &Value::Object(m))?;
        writeln!(w)?;
        Ok(())
    })
}

pub fn num(x: f64) -> String {
    x.to_string()
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

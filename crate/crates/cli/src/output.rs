use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use serde::Serialize;

/// 17 significant digits, '.' separator.
pub fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

pub fn opt_num(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

/// Serde tag of a unit enum variant.
pub fn tag<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        _ => String::new(),
    }
}

pub fn path_with(stem: &str, suffix: &str) -> PathBuf {
    PathBuf::from(format!("{stem}{suffix}"))
}

pub fn sink(stem: Option<&str>, suffix: &str) -> io::Result<Box<dyn Write>> {
    Ok(match stem {
        Some(s) => Box::new(io::BufWriter::new(File::create(path_with(s, suffix))?)),
        None => Box::new(io::stdout().lock()),
    })
}

pub fn write_json<T: Serialize>(mut w: impl Write, v: &T) -> anyhow::Result<()> {
    serde_json::to_writer_pretty(&mut w, v)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

pub fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().from_writer(w)
}

//! Curve files: JSON lines (`{"id": ..., "points": [[x, y], ...]}`) or CSV
//! rows `curve_id,seq,x1,...,xd`. Numbers are written with 17 significant
//! digits so a write/read cycle is lossless.

use crate::curve::Curve;
use crate::error::{Error, Result};
use serde::Deserialize;
use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    JsonLines,
    Csv,
}

impl Format {
    /// `.csv` is CSV; `.jsonl`, `.json` and `.ndjson` are JSON lines.
    pub fn from_path(path: &Path) -> Result<Format> {
        let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("").to_ascii_lowercase();
        match ext.as_str() {
            "csv" => Ok(Format::Csv),
            "jsonl" | "json" | "ndjson" => Ok(Format::JsonLines),
            _ => Err(Error::param(format!("cannot infer curve format of {}", path.display()))),
        }
    }
}

/// 17 significant digits, scientific notation.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Deserialize)]
struct Record {
    id: serde_json::Value,
    points: Vec<Vec<f64>>,
}

fn id_text(v: serde_json::Value, line: usize) -> Result<String> {
    match v {
        serde_json::Value::String(s) => Ok(s),
        serde_json::Value::Number(n) => Ok(n.to_string()),
        _ => Err(Error::data(format!("line {line}: id must be a string or number"))),
    }
}

fn check_file_dims(curves: &[Curve]) -> Result<()> {
    if let Some(first) = curves.first() {
        for c in curves {
            if c.dim() != first.dim() {
                return Err(Error::DimensionMismatch { expected: first.dim(), found: c.dim() });
            }
        }
    }
    Ok(())
}

fn check_unique(curves: &[Curve]) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for c in curves {
        if !seen.insert(c.id()) {
            return Err(Error::data(format!("duplicate curve id {:?}", c.id())));
        }
    }
    Ok(())
}

pub fn read_jsonl(reader: impl Read) -> Result<Vec<Curve>> {
    let mut out = Vec::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: Record = serde_json::from_str(&line).map_err(|e| Error::data(format!("line {}: {e}", i + 1)))?;
        let id = id_text(rec.id, i + 1)?;
        let c = Curve::from_points(id, &rec.points).map_err(|e| Error::data(format!("line {}: {e}", i + 1)))?;
        out.push(c);
    }
    check_file_dims(&out)?;
    check_unique(&out)?;
    Ok(out)
}

pub fn write_jsonl(mut writer: impl Write, curves: &[Curve]) -> Result<()> {
    for c in curves {
        let id = serde_json::to_string(c.id()).map_err(|e| Error::Io(e.to_string()))?;
        let pts: Vec<String> = c
            .vertices()
            .map(|p| format!("[{}]", p.iter().map(|&v| fmt_f64(v)).collect::<Vec<_>>().join(",")))
            .collect();
        writeln!(writer, "{{\"id\":{id},\"points\":[{}]}}", pts.join(","))?;
    }
    Ok(())
}

/// Reads CSV rows `curve_id,seq,x1,...,xd`; a header row is optional.
/// Curves appear in order of first occurrence.
pub fn read_csv(reader: impl Read) -> Result<Vec<Curve>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).flexible(true).from_reader(reader);
    let mut order: Vec<String> = Vec::new();
    let mut rows: HashMap<String, Vec<(i64, Vec<f64>)>> = HashMap::new();
    let mut dim = None;
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::data(e.to_string()))?;
        let line = i + 1;
        if rec.len() < 3 {
            return Err(Error::data(format!("row {line}: expected curve_id,seq,x1,...")));
        }
        let seq = match rec[1].parse::<i64>() {
            Ok(s) => s,
            Err(_) if i == 0 => continue,
            Err(_) => return Err(Error::data(format!("row {line}: bad sequence number {:?}", &rec[1]))),
        };
        let coords = rec
            .iter()
            .skip(2)
            .map(|f| f.parse::<f64>().map_err(|_| Error::data(format!("row {line}: bad coordinate {f:?}"))))
            .collect::<Result<Vec<f64>>>()?;
        match dim {
            None => dim = Some(coords.len()),
            Some(d) if d != coords.len() => return Err(Error::DimensionMismatch { expected: d, found: coords.len() }),
            _ => {}
        }
        let id = rec[0].to_string();
        let entry = rows.entry(id.clone()).or_insert_with(|| {
            order.push(id.clone());
            Vec::new()
        });
        if let Some((last, _)) = entry.last() {
            if seq <= *last {
                return Err(Error::data(format!("row {line}: seq must increase within curve {id:?}")));
            }
        }
        entry.push((seq, coords));
    }
    order
        .into_iter()
        .map(|id| {
            let pts: Vec<Vec<f64>> = rows.remove(&id).unwrap().into_iter().map(|r| r.1).collect();
            Curve::from_points(id, &pts)
        })
        .collect()
}

pub fn write_csv(mut writer: impl Write, curves: &[Curve]) -> Result<()> {
    let dim = curves.first().map_or(0, |c| c.dim());
    let mut header = String::from("curve_id,seq");
    for k in 1..=dim {
        header.push_str(&format!(",x{k}"));
    }
    let mut w = csv::WriterBuilder::new().from_writer(&mut writer);
    w.write_record(header.split(',')).map_err(|e| Error::Io(e.to_string()))?;
    for c in curves {
        for (s, p) in c.vertices().enumerate() {
            let mut row = vec![c.id().to_string(), s.to_string()];
            row.extend(p.iter().map(|&v| fmt_f64(v)));
            w.write_record(&row).map_err(|e| Error::Io(e.to_string()))?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_curves(path: impl AsRef<Path>) -> Result<Vec<Curve>> {
    let path = path.as_ref();
    let format = Format::from_path(path)?;
    let f = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let curves = match format {
        Format::JsonLines => read_jsonl(f)?,
        Format::Csv => read_csv(f)?,
    };
    if curves.is_empty() {
        return Err(Error::data(format!("{} holds no curves", path.display())));
    }
    check_file_dims(&curves)?;
    check_unique(&curves)?;
    Ok(curves)
}

pub fn write_curves(path: impl AsRef<Path>, curves: &[Curve]) -> Result<()> {
    let path = path.as_ref();
    let format = Format::from_path(path)?;
    let mut f = BufWriter::new(File::create(path)?);
    match format {
        Format::JsonLines => write_jsonl(&mut f, curves)?,
        Format::Csv => write_csv(&mut f, curves)?,
    }
    f.flush()?;
    Ok(())
}

//! CSV tables with a `# key = value` header block, and the flat binary
//! grid format.
//!
//! Binary grid layout (little-endian):
//!
//! ```text
//! magic   8 bytes  "HSGRID01"
//! nx      u64
//! ny      u64
//! nframes u64
//! x_min x_max y_min y_max   f64 x 4
//! per frame: t (f64), then ny * nx values (f64, row-major, y outer)
//! ```

use std::io::{BufRead, BufReader, Read, Write};

use crate::error::{Error, Result};
use crate::fields::{FieldGrid, GridSpec};

pub const GRID_MAGIC: &[u8; 8] = b"HSGRID01";

/// Shortest round-trip text for a float; exponent form outside
/// [1e-4, 1e15).
pub fn format_f64(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || !v.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            meta: Vec::new(),
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.meta.push((key.into(), value.to_string()));
        self
    }

    pub fn push(&mut self, row: &[f64]) {
        self.rows.push(row.iter().map(|&v| format_f64(v)).collect());
    }

    pub fn push_raw(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn meta_value(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    fn index(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|c| c == name || c.split(" [").next() == Some(name))
            .ok_or_else(|| Error::Parse(format!("no column `{name}`")))
    }

    /// Column parsed as floats. Matches the full header or the name before
    /// the unit bracket.
    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let j = self.index(name)?;
        self.rows
            .iter()
            .map(|r| {
                r[j].parse::<f64>()
                    .map_err(|e| Error::Parse(format!("column `{name}`: {e}")))
            })
            .collect()
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        for (k, v) in &self.meta {
            writeln!(w, "# {k} = {v}")?;
        }
        let mut cw = csv::Writer::from_writer(w);
        cw.write_record(&self.columns)?;
        for r in &self.rows {
            cw.write_record(r)?;
        }
        cw.flush()?;
        Ok(())
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut buf = Vec::new();
        self.write_to(&mut buf)?;
        Ok(buf)
    }

    pub fn read_from<R: Read>(r: R) -> Result<Self> {
        let mut text = String::new();
        BufReader::new(r).read_to_string(&mut text)?;
        let mut meta = Vec::new();
        for line in text.lines() {
            let Some(rest) = line.strip_prefix('#') else { break };
            if let Some((k, v)) = rest.split_once('=') {
                meta.push((k.trim().to_string(), v.trim().to_string()));
            }
        }
        let mut cr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let columns = cr.headers()?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for rec in cr.records() {
            rows.push(rec?.iter().map(str::to_string).collect());
        }
        Ok(Table { meta, columns, rows })
    }
}

fn put_u64<W: Write>(w: &mut W, v: u64) -> Result<()> {
    w.write_all(&v.to_le_bytes())?;
    Ok(())
}

fn put_f64<W: Write>(w: &mut W, v: f64) -> Result<()> {
    w.write_all(&v.to_le_bytes())?;
    Ok(())
}

fn get_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn get_f64<R: Read>(r: &mut R) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

pub fn write_grid_binary<W: Write>(mut w: W, g: &FieldGrid) -> Result<()> {
    if g.x.len() < 2 || g.y.len() < 2 {
        return Err(Error::param("grid", "need at least 2 x 2 samples"));
    }
    w.write_all(GRID_MAGIC)?;
    put_u64(&mut w, g.x.len() as u64)?;
    put_u64(&mut w, g.y.len() as u64)?;
    put_u64(&mut w, g.frames.len() as u64)?;
    for v in [g.x[0], g.x[g.x.len() - 1], g.y[0], g.y[g.y.len() - 1]] {
        put_f64(&mut w, v)?;
    }
    for (t, f) in g.times.iter().zip(&g.frames) {
        put_f64(&mut w, *t)?;
        for &v in f {
            put_f64(&mut w, v)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_grid_binary<R: Read>(r: R) -> Result<FieldGrid> {
    let mut r = BufReader::new(r);
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != GRID_MAGIC {
        return Err(Error::Parse("not a grid file (bad magic)".into()));
    }
    let nx = get_u64(&mut r)? as usize;
    let ny = get_u64(&mut r)? as usize;
    let nf = get_u64(&mut r)? as usize;
    let spec = GridSpec {
        x_min: get_f64(&mut r)?,
        x_max: get_f64(&mut r)?,
        y_min: get_f64(&mut r)?,
        y_max: get_f64(&mut r)?,
        nx,
        ny,
    };
    spec.validate()?;
    let mut times = Vec::with_capacity(nf);
    let mut frames = Vec::with_capacity(nf);
    for _ in 0..nf {
        times.push(get_f64(&mut r)?);
        let mut f = Vec::with_capacity(nx * ny);
        for _ in 0..nx * ny {
            f.push(get_f64(&mut r)?);
        }
        frames.push(f);
    }
    if !r.fill_buf()?.is_empty() {
        return Err(Error::Parse("trailing bytes after the last frame".into()));
    }
    Ok(FieldGrid {
        x: spec.xs(),
        y: spec.ys(),
        times,
        frames,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_switches_to_exponent() {
        assert_eq!(format_f64(0.0), "0");
        assert_eq!(format_f64(1.5), "1.5");
        assert_eq!(format_f64(1e-5), "1e-5");
        assert_eq!(format_f64(-2.5e20), "-2.5e20");
        assert_eq!(format_f64(f64::NAN), "NaN");
    }

    #[test]
    fn table_round_trip() {
        let mut t = Table::new(["t [tau]", "b2_alpha"]);
        t.meta("command", "two-atom").meta("seed", 7);
        t.push(&[0.1, 1.0 / 3.0]);
        t.push(&[1e-300, f64::MAX]);
        let back = Table::read_from(t.to_bytes().unwrap().as_slice()).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.column("t").unwrap()[1], 1e-300);
        assert_eq!(back.meta_value("seed"), Some("7"));
    }

    #[test]
    fn bad_magic_rejected() {
        assert!(read_grid_binary(&b"NOTAGRID"[..]).is_err());
    }
}

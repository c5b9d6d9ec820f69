//! Point-set files.
//!
//! CSV: a comment line `#compass-nav-pointset v1 <json header>`, a header row
//! `x,y`, then one row per point.
//!
//! Binary (little endian): magic `CNPS`, `u32` version, `u32` header length,
//! the JSON header, `u64` point count, then `count` pairs of `f64`.

use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use super::{PointSet, SampleMeta};
use crate::error::{Error, Result};
use crate::geometry::Point;

pub const FORMAT_VERSION: u32 = 1;
const CSV_TAG: &str = "#compass-nav-pointset";
const MAGIC: &[u8; 4] = b"CNPS";

pub fn write_csv<W: Write>(ps: &PointSet, mut out: W) -> Result<()> {
    let header = serde_json::to_string(ps.meta())?;
    writeln!(out, "{CSV_TAG} v{FORMAT_VERSION} {header}")?;
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["x", "y"])?;
    for p in ps.points() {
        writer.serialize((p.x, p.y))?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<PointSet> {
    let mut input = BufReader::new(input);
    let mut first = String::new();
    input.read_line(&mut first)?;
    let rest = first
        .trim_end()
        .strip_prefix(CSV_TAG)
        .ok_or_else(|| Error::Parse("missing point-set header line".into()))?;
    let (version, json) = rest
        .trim_start()
        .split_once(' ')
        .ok_or_else(|| Error::Parse("malformed point-set header line".into()))?;
    if version != format!("v{FORMAT_VERSION}") {
        return Err(Error::Parse(format!("unsupported point-set version `{version}`")));
    }
    let meta: SampleMeta = serde_json::from_str(json)?;
    let mut reader = csv::Reader::from_reader(input);
    let headers = reader.headers()?;
    if headers.len() != 2 || &headers[0] != "x" || &headers[1] != "y" {
        return Err(Error::Parse("expected the column header `x,y`".into()));
    }
    let mut points = Vec::new();
    for row in reader.deserialize::<(f64, f64)>() {
        let (x, y) = row?;
        points.push(Point::new(x, y));
    }
    PointSet::from_parts(points, meta)
}

pub fn write_binary<W: Write>(ps: &PointSet, mut out: W) -> Result<()> {
    let header = serde_json::to_vec(ps.meta())?;
    let header_len = u32::try_from(header.len())
        .map_err(|_| Error::InvalidParameter("header too large".into()))?;
    out.write_all(MAGIC)?;
    out.write_all(&FORMAT_VERSION.to_le_bytes())?;
    out.write_all(&header_len.to_le_bytes())?;
    out.write_all(&header)?;
    out.write_all(&(ps.len() as u64).to_le_bytes())?;
    for p in ps.points() {
        out.write_all(&p.x.to_le_bytes())?;
        out.write_all(&p.y.to_le_bytes())?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_binary(bytes: &[u8]) -> Result<PointSet> {
    let mut cur = Cursor(bytes);
    if cur.take(4)? != MAGIC {
        return Err(Error::Parse("not a binary point-set file".into()));
    }
    let version = u32::from_le_bytes(cur.array()?);
    if version != FORMAT_VERSION {
        return Err(Error::Parse(format!("unsupported point-set version {version}")));
    }
    let header_len = u32::from_le_bytes(cur.array()?) as usize;
    let meta: SampleMeta = serde_json::from_slice(cur.take(header_len)?)?;
    let count = u64::from_le_bytes(cur.array()?);
    let expected = count.checked_mul(16).filter(|&b| b == cur.0.len() as u64);
    if expected.is_none() {
        return Err(Error::Parse(format!(
            "point count {count} does not match the {} remaining bytes",
            cur.0.len()
        )));
    }
    let points = cur
        .0
        .chunks_exact(16)
        .map(|c| {
            let x = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
            let y = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
            Point::new(x, y)
        })
        .collect();
    PointSet::from_parts(points, meta)
}

struct Cursor<'a>(&'a [u8]);

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.0.len() < n {
            return Err(Error::Parse("truncated point-set file".into()));
        }
        let (head, tail) = self.0.split_at(n);
        self.0 = tail;
        Ok(head)
    }

    fn array<const N: usize>(&mut self) -> Result<[u8; N]> {
        Ok(self.take(N)?.try_into().expect("length checked"))
    }
}

/// Writes CSV when the extension is `.csv`, the binary format otherwise.
pub fn save(ps: &PointSet, path: &Path) -> Result<()> {
    let file = std::io::BufWriter::new(fs::File::create(path)?);
    if is_csv(path) {
        write_csv(ps, file)
    } else {
        write_binary(ps, file)
    }
}

pub fn load(path: &Path) -> Result<PointSet> {
    if is_csv(path) {
        read_csv(fs::File::open(path)?)
    } else {
        read_binary(&fs::read(path)?)
    }
}

fn is_csv(path: &Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

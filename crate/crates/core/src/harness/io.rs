//! CSV and JSON formats.
//!
//! Floats are written in shortest round-trip form, so reading a file back
//! gives the exact values that were written.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Dataset, Domain, Interpolant, PointId, SparseGrid};
use crate::refinement::RankedCandidate;
use crate::surrogate::HybridDataset;

pub const MODEL_FORMAT_VERSION: &str = "1";

fn csv_error(what: &str, e: csv::Error) -> Error {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(source) => Error::io(what, source),
            other => Error::parse(what, format!("{other:?}")),
        }
    } else {
        Error::parse(what, e)
    }
}

/// `x1, ..., xd`.
pub fn coordinate_header(dimension: usize) -> Vec<String> {
    (1..=dimension).map(|k| format!("x{k}")).collect()
}

fn push_coords(record: &mut Vec<String>, coords: &[f64]) {
    record.extend(coords.iter().map(|v| v.to_string()));
}

/// `point_id,x1..xd` in canonical order.
pub fn write_grid_csv<W: Write>(out: W, grid: &SparseGrid<f64>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["point_id".to_string()];
    header.extend(coordinate_header(grid.dimension()));
    w.write_record(&header).map_err(|e| csv_error("grid csv", e))?;
    for p in grid.points() {
        let mut record = vec![p.id.to_string()];
        push_coords(&mut record, &p.coords);
        w.write_record(&record).map_err(|e| csv_error("grid csv", e))?;
    }
    w.flush().map_err(|e| Error::io("grid csv", e))
}

/// `point_id,x1..xd,value` over the grid.
pub fn write_dataset_csv<W: Write>(out: W, grid: &SparseGrid<f64>, data: &Dataset<f64>) -> Result<()> {
    data.check_covers(grid)?;
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["point_id".to_string()];
    header.extend(coordinate_header(grid.dimension()));
    header.push("value".into());
    w.write_record(&header).map_err(|e| csv_error("dataset csv", e))?;
    for p in grid.points() {
        let mut record = vec![p.id.to_string()];
        push_coords(&mut record, &p.coords);
        record.push(data.get(&p.id).expect("covered").to_string());
        w.write_record(&record).map_err(|e| csv_error("dataset csv", e))?;
    }
    w.flush().map_err(|e| Error::io("dataset csv", e))
}

/// The dataset format plus a `provenance` column.
pub fn write_hybrid_csv<W: Write>(out: W, grid: &SparseGrid<f64>, hybrid: &HybridDataset<f64>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["point_id".to_string()];
    header.extend(coordinate_header(grid.dimension()));
    header.push("value".into());
    header.push("provenance".into());
    w.write_record(&header).map_err(|e| csv_error("hybrid csv", e))?;
    for p in grid.points() {
        let value = hybrid
            .values()
            .get(&p.id)
            .ok_or_else(|| Error::IncompleteDataset(p.id.to_string()))?;
        let mut record = vec![p.id.to_string()];
        push_coords(&mut record, &p.coords);
        record.push(value.to_string());
        record.push(hybrid.provenance(&p.id).expect("tagged").to_string());
        w.write_record(&record).map_err(|e| csv_error("hybrid csv", e))?;
    }
    w.flush().map_err(|e| Error::io("hybrid csv", e))
}

/// `rank,point_id,x1..xd,delta,eta,selected`; the first `n_selected` ranks
/// are flagged.
pub fn write_ranked_csv<W: Write>(out: W, ranked: &[RankedCandidate<f64>], n_selected: usize) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let dimension = ranked.first().map_or(0, |c| c.point.coords.len());
    let mut header = vec!["rank".to_string(), "point_id".to_string()];
    header.extend(coordinate_header(dimension));
    header.extend(["delta", "eta", "selected"].map(String::from));
    w.write_record(&header).map_err(|e| csv_error("ranked csv", e))?;
    for c in ranked {
        let mut record = vec![c.rank.to_string(), c.point.id.to_string()];
        push_coords(&mut record, &c.point.coords);
        record.push(c.delta.to_string());
        record.push(c.eta.to_string());
        record.push(if c.rank <= n_selected { "1" } else { "0" }.into());
        w.write_record(&record).map_err(|e| csv_error("ranked csv", e))?;
    }
    w.flush().map_err(|e| Error::io("ranked csv", e))
}

fn column(headers: &csv::StringRecord, name: &str, what: &str) -> Result<usize> {
    headers
        .iter()
        .position(|h| h.trim() == name)
        .ok_or_else(|| Error::parse(what, format!("missing column {name:?}")))
}

fn parse_f64(field: &str, what: &str, line: u64) -> Result<f64> {
    field
        .trim()
        .parse()
        .map_err(|e| Error::parse(what, format!("line {line}: {field:?}: {e}")))
}

/// Reads `point_id` and `value` columns; any other columns are ignored.
pub fn read_dataset_csv<R: Read>(input: R, what: &str) -> Result<Dataset<f64>> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers().map_err(|e| csv_error(what, e))?.clone();
    let id_col = column(&headers, "point_id", what)?;
    let value_col = column(&headers, "value", what)?;
    let mut data = Dataset::new();
    for record in r.records() {
        let record = record.map_err(|e| csv_error(what, e))?;
        let line = record.position().map_or(0, |p| p.line());
        let id: PointId = record[id_col].trim().parse()?;
        let value = parse_f64(&record[value_col], what, line)?;
        if data.insert(id.clone(), value).is_some() {
            return Err(Error::parse(what, format!("line {line}: duplicate point id {id}")));
        }
    }
    Ok(data)
}

/// Reads the `x1..xd` columns.
pub fn read_points_csv<R: Read>(input: R, dimension: usize) -> Result<Vec<Vec<f64>>> {
    let what = "points csv";
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers().map_err(|e| csv_error(what, e))?.clone();
    let cols = coordinate_header(dimension)
        .iter()
        .map(|name| column(&headers, name, what))
        .collect::<Result<Vec<_>>>()?;
    r.records()
        .map(|record| {
            let record = record.map_err(|e| csv_error(what, e))?;
            let line = record.position().map_or(0, |p| p.line());
            cols.iter().map(|&c| parse_f64(&record[c], what, line)).collect()
        })
        .collect()
}

/// Persisted interpolant: grid description plus nodal values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub format_version: String,
    pub dimension: usize,
    pub level: usize,
    pub domain: Vec<(f64, f64)>,
    pub values: BTreeMap<String, f64>,
}

impl ModelFile {
    pub fn from_interpolant(model: &Interpolant<f64>) -> Self {
        Self {
            format_version: MODEL_FORMAT_VERSION.to_string(),
            dimension: model.dimension(),
            level: model.level(),
            domain: model.grid().domain().intervals().to_vec(),
            values: model.data().iter().map(|(id, v)| (id.to_string(), v)).collect(),
        }
    }

    /// Rebuilds the interpolant. Every value must belong to the grid and
    /// every grid point must have a value.
    pub fn into_interpolant(self) -> Result<Interpolant<f64>> {
        if self.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::parse(
                "model json",
                format!("unsupported format_version {:?}", self.format_version),
            ));
        }
        let domain = Domain::new(self.domain)?;
        if domain.dimension() != self.dimension {
            return Err(Error::parse(
                "model json",
                format!("{} domain intervals for dimension {}", domain.dimension(), self.dimension),
            ));
        }
        let grid = SparseGrid::build(self.dimension, self.level, domain)?;
        let mut data = Dataset::new();
        for (key, value) in self.values {
            let id: PointId = key.parse()?;
            if !grid.contains(&id) {
                return Err(Error::UnknownPoint(id.to_string()));
            }
            data.insert(id, value);
        }
        Interpolant::new(grid, &data)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse("model json", e))
    }
}

/// Creates `path` and hands a buffered writer to `write`.
pub fn write_path(path: &Path, write: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    write(&mut out)?;
    out.flush().map_err(|e| Error::io(path, e))
}

pub fn open_path(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::io(path, e))
}

pub fn save_model(path: &Path, model: &Interpolant<f64>) -> Result<()> {
    let text = ModelFile::from_interpolant(model).to_json();
    write_path(path, |out| {
        out.write_all(text.as_bytes())
            .and_then(|_| out.write_all(b"\n"))
            .map_err(|e| Error::io(path, e))
    })
}

pub fn load_model(path: &Path) -> Result<Interpolant<f64>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    ModelFile::from_json(&text)?.into_interpolant()
}

//! Loading score tables and preparing the two clustering features.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::point::Point;

/// Inclusive bounds every score value must fall within.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreRange {
    pub min: f64,
    pub max: f64,
}

impl Default for ScoreRange {
    fn default() -> Self {
        ScoreRange {
            min: 0.0,
            max: 100.0,
        }
    }
}

impl ScoreRange {
    pub fn contains(&self, v: f64) -> bool {
        v >= self.min && v <= self.max
    }
}

/// One object (student) of the table.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    /// 1-based object number.
    pub index: usize,
    pub scores: BTreeMap<String, f64>,
    pub categorical: BTreeMap<String, String>,
}

impl Record {
    pub fn score(&self, column: &str) -> Option<f64> {
        self.scores.get(column).copied()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    header: Vec<String>,
    score_columns: Vec<String>,
    records: Vec<Record>,
}

impl Dataset {
    /// Parses CSV text from `reader`. The first row is the header; the listed
    /// `score_columns` are read as numbers, everything else is kept as text.
    pub fn from_reader<R: Read>(
        reader: R,
        score_columns: &[&str],
        range: ScoreRange,
    ) -> Result<Dataset> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(false)
            .from_reader(reader);
        let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();

        let mut score_pos = Vec::with_capacity(score_columns.len());
        for &name in score_columns {
            let pos = header
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::Schema {
                    column: name.to_owned(),
                })?;
            score_pos.push(pos);
        }

        let mut records = Vec::new();
        for (row, result) in rdr.records().enumerate() {
            let row = row + 1;
            let rec = result?;
            let mut scores = BTreeMap::new();
            let mut categorical = BTreeMap::new();
            for (pos, (name, cell)) in header.iter().zip(rec.iter()).enumerate() {
                if score_pos.contains(&pos) {
                    let value = parse_score(cell, row, name)?;
                    if !range.contains(value) {
                        return Err(Error::OutOfRange {
                            row,
                            column: name.clone(),
                            value,
                            min: range.min,
                            max: range.max,
                        });
                    }
                    scores.insert(name.clone(), value);
                } else {
                    categorical.insert(name.clone(), cell.to_owned());
                }
            }
            records.push(Record {
                index: row,
                scores,
                categorical,
            });
        }

        if records.is_empty() {
            return Err(Error::EmptyInput);
        }

        Ok(Dataset {
            header,
            score_columns: score_columns.iter().map(|s| (*s).to_owned()).collect(),
            records,
        })
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    /// Number of objects, `Q`.
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Number of numeric parameters, `D`.
    pub fn num_parameters(&self) -> usize {
        self.score_columns.len()
    }

    pub fn score_columns(&self) -> &[String] {
        &self.score_columns
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        if !self.score_columns.iter().any(|c| c == name) {
            return Err(Error::Schema {
                column: name.to_owned(),
            });
        }
        Ok(self.records.iter().map(|r| r.scores[name]).collect())
    }

    /// Writes the table back as CSV with the original column order.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        wtr.write_record(&self.header)?;
        for rec in &self.records {
            let row: Vec<String> = self
                .header
                .iter()
                .map(|h| match rec.scores.get(h) {
                    Some(v) => v.to_string(),
                    None => rec.categorical.get(h).cloned().unwrap_or_default(),
                })
                .collect();
            wtr.write_record(&row)?;
        }
        wtr.flush().map_err(|e| Error::Csv(e.into()))?;
        Ok(())
    }
}

fn parse_score(cell: &str, row: usize, column: &str) -> Result<f64> {
    let trimmed = cell.trim();
    if trimmed.is_empty() {
        return Err(Error::MissingValue {
            row,
            column: column.to_owned(),
        });
    }
    match trimmed.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::Parse {
            row,
            column: column.to_owned(),
            value: cell.to_owned(),
        }),
    }
}

/// Reads a CSV file with the default 0..=100 score range.
pub fn load_csv(path: impl AsRef<Path>, score_columns: &[&str]) -> Result<Dataset> {
    load_csv_with_range(path, score_columns, ScoreRange::default())
}

pub fn load_csv_with_range(
    path: impl AsRef<Path>,
    score_columns: &[&str],
    range: ScoreRange,
) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    Dataset::from_reader(file, score_columns, range)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScaledAxis {
    X,
    Y,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingReport {
    pub applied: bool,
    pub scaled_axis: ScaledAxis,
    pub factor: f64,
    /// Column ranges (max - min) before any scaling.
    pub original_ranges: (f64, f64),
}

impl ScalingReport {
    fn identity(ranges: (f64, f64)) -> Self {
        ScalingReport {
            applied: false,
            scaled_axis: ScaledAxis::None,
            factor: 1.0,
            original_ranges: ranges,
        }
    }
}

/// The two selected features, possibly with one axis rescaled.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureView {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub x_name: String,
    pub y_name: String,
    pub scaling: ScalingReport,
}

impl FeatureView {
    /// Builds an unscaled view from raw columns.
    pub fn from_columns(
        x_name: impl Into<String>,
        y_name: impl Into<String>,
        x: Vec<f64>,
        y: Vec<f64>,
    ) -> Result<FeatureView> {
        if x.len() != y.len() {
            return Err(Error::argument(format!(
                "feature columns differ in length ({} vs {})",
                x.len(),
                y.len()
            )));
        }
        if x.is_empty() {
            return Err(Error::EmptyInput);
        }
        if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            return Err(Error::argument("feature values must be finite"));
        }
        let ranges = (range_of(&x), range_of(&y));
        Ok(FeatureView {
            x,
            y,
            x_name: x_name.into(),
            y_name: y_name.into(),
            scaling: ScalingReport::identity(ranges),
        })
    }

    pub fn from_points(points: &[Point]) -> Result<FeatureView> {
        FeatureView::from_columns(
            "x",
            "y",
            points.iter().map(|p| p.x).collect(),
            points.iter().map(|p| p.y).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// The 0-based `i`th object as a point.
    pub fn point(&self, i: usize) -> Point {
        Point::new(self.x[i], self.y[i])
    }

    pub fn points(&self) -> Vec<Point> {
        self.x
            .iter()
            .zip(&self.y)
            .map(|(&x, &y)| Point::new(x, y))
            .collect()
    }

    pub fn ranges(&self) -> (f64, f64) {
        (range_of(&self.x), range_of(&self.y))
    }

    /// Maps a point of this view back to the units of the source columns.
    pub fn to_original(&self, p: Point) -> Point {
        match self.scaling.scaled_axis {
            ScaledAxis::X => Point::new(p.x / self.scaling.factor, p.y),
            ScaledAxis::Y => Point::new(p.x, p.y / self.scaling.factor),
            ScaledAxis::None => p,
        }
    }

    /// Equalizes the axis ranges when they differ by more than an order of
    /// magnitude. A view that needs no scaling is returned unchanged.
    pub fn scaled(&self) -> FeatureView {
        let (rx, ry) = self.ranges();
        let (ex, ey) = (effective_range(rx), effective_range(ry));
        let ratio = ex.max(ey) / ex.min(ey);
        // a constant column keeps range 0 under any factor
        let smaller_is_constant = if ex < ey { rx == 0.0 } else { ry == 0.0 };
        if ratio <= 10.0 || smaller_is_constant {
            return self.clone();
        }

        let mut out = self.clone();
        let factor = ratio;
        let axis = if ex < ey {
            out.x.iter_mut().for_each(|v| *v *= factor);
            ScaledAxis::X
        } else {
            out.y.iter_mut().for_each(|v| *v *= factor);
            ScaledAxis::Y
        };
        out.scaling = ScalingReport {
            applied: true,
            scaled_axis: axis,
            factor,
            original_ranges: (rx, ry),
        };
        out
    }
}

fn range_of(values: &[f64]) -> f64 {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    if values.is_empty() {
        0.0
    } else {
        hi - lo
    }
}

fn effective_range(r: f64) -> f64 {
    if r == 0.0 {
        1.0
    } else {
        r
    }
}

/// Picks the `x` and `y` columns out of a dataset, unscaled.
pub fn select_features(d: &Dataset, x_name: &str, y_name: &str) -> Result<FeatureView> {
    if x_name == y_name {
        return Err(Error::argument(format!(
            "x and y must be different columns (both are `{x_name}`)"
        )));
    }
    let x = d.column(x_name)?;
    let y = d.column(y_name)?;
    FeatureView::from_columns(x_name, y_name, x, y)
}

pub fn scale_features(v: &FeatureView) -> FeatureView {
    v.scaled()
}

//! Bundled sample data.

use crate::dataset::{Dataset, ScoreRange};
use crate::error::Result;
use crate::point::Point;

/// The 31-student fragment shipped with the crate (three score columns and
/// the parental education field).
pub const TABLE1_CSV: &str = include_str!("../data/table1_fragment.csv");

pub const SCORE_COLUMNS: [&str; 3] = ["math score", "reading score", "writing score"];

pub fn table1() -> Result<Dataset> {
    Dataset::from_reader(TABLE1_CSV.as_bytes(), &SCORE_COLUMNS, ScoreRange::default())
}

/// Four tight, nearly equilateral triples of points about 100 units apart.
/// Splitting any triple leaves its remaining pair at full triangle side, so
/// the intra/inter distance ratio is smallest at exactly four clusters.
pub fn four_triangles() -> Vec<Point> {
    [
        (2.0, 0.0),
        (-1.0, 1.732),
        (-1.0, -1.732),
        (101.911, 0.591),
        (98.533, 1.359),
        (99.557, -1.95),
        (1.651, 101.129),
        (-1.803, 100.865),
        (0.153, 98.006),
        (101.243, 101.567),
        (98.022, 100.293),
        (100.735, 98.14),
    ]
    .into_iter()
    .map(Point::from)
    .collect()
}

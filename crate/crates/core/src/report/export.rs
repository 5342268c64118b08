use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

use super::format::{round_json, sig6};
use super::RunReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Json,
    Csv,
}

impl RunReport {
    /// Pretty JSON with sorted keys and six significant digits.
    pub fn to_json(&self) -> Result<String> {
        let mut value = serde_json::to_value(self)?;
        round_json(&mut value);
        let mut s = serde_json::to_string_pretty(&value)?;
        s.push('\n');
        Ok(s)
    }

    /// One row per object: coordinates, assigned cluster, `mu_xy` for every
    /// cluster and the recommended levels.
    pub fn to_csv(&self) -> String {
        let k = self.clusters.len();
        let mut out = String::from("object,x,y,cluster");
        for c in 1..=k {
            let _ = write!(out, ",mu_xy_{c}");
        }
        out.push_str(",primary_level,supplementary_levels\n");
        for row in &self.objects {
            let _ = write!(
                out,
                "{},{},{},{}",
                row.object,
                sig6(row.point.x),
                sig6(row.point.y),
                row.cluster
            );
            for &m in &row.mu_xy {
                let _ = write!(out, ",{}", sig6(m));
            }
            let extra: Vec<String> = row
                .recommendation
                .supplementary_levels
                .iter()
                .map(usize::to_string)
                .collect();
            let _ = writeln!(
                out,
                ",{},{}",
                row.recommendation.primary_level,
                extra.join(";")
            );
        }
        out
    }
}

pub fn export_report(r: &RunReport, format: ExportFormat, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let body = match format {
        ExportFormat::Json => r.to_json()?,
        ExportFormat::Csv => r.to_csv(),
    };
    fs::write(path, body).map_err(|e| Error::io(path, e))
}

//! Fitting a range of cluster counts and picking the one with the lowest
//! intra/inter distance ratio.

use std::ops::RangeInclusive;

use serde::Serialize;

use crate::dataset::FeatureView;
use crate::error::{Error, Result};
use crate::kmeans::{kmeans_fit, ClusterModel, KMeansConfig};
use crate::quality::QualityMetrics;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepEntry {
    pub k: usize,
    pub quality: QualityMetrics,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub entries: Vec<SweepEntry>,
    pub selected: usize,
    /// The fitted model for `selected`.
    pub model: ClusterModel,
}

/// Fits every `k` in `range`. Entries whose ratio is undefined are reported
/// but never selected; on equal ratios the smaller `k` wins.
pub fn sweep_k(
    v: &FeatureView,
    range: RangeInclusive<usize>,
    cfg: &KMeansConfig,
) -> Result<SweepResult> {
    let (lo, hi) = (*range.start(), *range.end());
    if lo < 2 || hi > v.len() || lo > hi {
        return Err(Error::argument(format!(
            "sweep range {lo}..={hi} must lie within 2..={}",
            v.len()
        )));
    }

    let mut entries = Vec::with_capacity(hi - lo + 1);
    let mut best: Option<(f64, ClusterModel)> = None;
    for k in range {
        let model = kmeans_fit(v, &KMeansConfig { k, ..cfg.clone() })?;
        entries.push(SweepEntry {
            k,
            quality: model.quality,
        });
        if let Some(ratio) = model.quality.ratio {
            if best.as_ref().is_none_or(|(r, _)| ratio < *r) {
                best = Some((ratio, model));
            }
        }
    }

    let (_, model) = best.ok_or(Error::UndefinedMetric(
        "no cluster count in the sweep has a defined ratio",
    ))?;
    Ok(SweepResult {
        selected: model.k(),
        entries,
        model,
    })
}

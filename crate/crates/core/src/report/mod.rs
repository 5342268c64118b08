//! Cluster summaries, difficulty recommendations and their exports.
//!
//! Everything user-facing here numbers clusters from 1, in centroid order, so
//! cluster `k` doubles as task difficulty level `k`.

mod export;
pub mod format;
pub mod svg;

use serde::Serialize;

use crate::dataset::ScalingReport;
use crate::error::Result;
use crate::fuzzy::{evaluate_membership, ClusterMembership, MembershipProfile, Radii};
use crate::pipeline::Analysis;
use crate::point::Point;
use crate::quality::QualityMetrics;
use crate::sweep::SweepEntry;

pub use export::{export_report, ExportFormat};
pub use svg::{
    membership_curve, plot_membership_functions, render_scatter_svg, MembershipCurve,
    MembershipFamily, SvgOptions,
};

pub const DEFAULT_THETA: f64 = 0.5;

const FOUR_LEVELS: [&str; 4] = ["low", "below average", "average", "high"];

/// Names for `k` clusters in centroid order.
pub fn cluster_labels(k: usize) -> Vec<String> {
    if k == FOUR_LEVELS.len() {
        FOUR_LEVELS.iter().map(|s| (*s).to_owned()).collect()
    } else {
        (1..=k).map(|i| format!("level {i}")).collect()
    }
}

pub fn label_clusters(m: &crate::kmeans::ClusterModel) -> Vec<String> {
    cluster_labels(m.k())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DifficultyRecommendation {
    /// Level (1-based cluster) with the largest `mu_xy`.
    pub primary_level: usize,
    /// Other levels with `mu_xy >= theta`, strongest first.
    pub supplementary_levels: Vec<usize>,
    pub theta: f64,
}

/// Lowest index wins ties for the primary level.
pub fn recommend_difficulty(p: &MembershipProfile, theta: f64) -> DifficultyRecommendation {
    let mu = p.mu_xy();
    let mut primary = 0;
    for (k, &v) in mu.iter().enumerate() {
        if v > mu[primary] {
            primary = k;
        }
    }
    let mut extra: Vec<usize> = (0..mu.len())
        .filter(|&k| k != primary && mu[k] >= theta)
        .collect();
    extra.sort_by(|&a, &b| mu[b].total_cmp(&mu[a]).then(a.cmp(&b)));
    DifficultyRecommendation {
        primary_level: primary + 1,
        supplementary_levels: extra.into_iter().map(|k| k + 1).collect(),
        theta,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterSummary {
    pub cluster: usize,
    pub label: String,
    /// Centroid in the units of the source columns.
    pub centroid: Point,
    pub count: usize,
    /// Radii in clustering (possibly rescaled) units.
    pub radii: Radii,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterMembershipReport {
    pub cluster: usize,
    pub label: String,
    #[serde(flatten)]
    pub membership: ClusterMembership,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileReport {
    pub object: usize,
    /// Object coordinates in source units.
    pub point: Point,
    pub assigned_cluster: usize,
    pub clusters: Vec<ClusterMembershipReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObjectRecommendation {
    pub object: usize,
    #[serde(flatten)]
    pub recommendation: DifficultyRecommendation,
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectRow {
    pub object: usize,
    pub point: Point,
    pub cluster: usize,
    pub mu_xy: Vec<f64>,
    pub recommendation: DifficultyRecommendation,
}

/// Settings echoed into the report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub input: String,
    pub x_col: String,
    pub y_col: String,
    pub k: usize,
    pub sweep: Option<(usize, usize)>,
    pub k_r: f64,
    pub theta: f64,
    pub seed: u64,
    pub n_restarts: usize,
    pub max_iter: usize,
    pub tol: f64,
    pub queries: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub config: ConfigEcho,
    pub provenance: Provenance,
    pub scaling: ScalingReport,
    pub quality: QualityMetrics,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Vec<SweepEntry>>,
    pub clusters: Vec<ClusterSummary>,
    pub profiles: Vec<ProfileReport>,
    pub recommendations: Vec<ObjectRecommendation>,
    #[serde(skip)]
    pub objects: Vec<ObjectRow>,
}

impl RunReport {
    /// Summarizes an analysis. `queries` are 1-based object numbers that get
    /// full membership profiles and recommendations.
    pub fn build(
        config: ConfigEcho,
        analysis: &Analysis,
        theta: f64,
        queries: &[usize],
    ) -> Result<RunReport> {
        let Analysis {
            view,
            model,
            radii,
            fuzzy,
            ..
        } = analysis;
        let labels = label_clusters(model);

        let clusters = model
            .centroids
            .iter()
            .zip(radii.iter())
            .enumerate()
            .map(|(k, (&c, r))| ClusterSummary {
                cluster: k + 1,
                label: labels[k].clone(),
                centroid: view.to_original(c),
                count: model.counts[k],
                radii: *r,
            })
            .collect();

        let mut profiles = Vec::with_capacity(queries.len());
        let mut recommendations = Vec::with_capacity(queries.len());
        for &q in queries {
            let p = evaluate_membership(q, view, model, radii, fuzzy)?;
            recommendations.push(ObjectRecommendation {
                object: q,
                recommendation: recommend_difficulty(&p, theta),
            });
            profiles.push(ProfileReport {
                object: q,
                point: view.to_original(p.point),
                assigned_cluster: p.assigned + 1,
                clusters: p
                    .clusters
                    .iter()
                    .enumerate()
                    .map(|(k, c)| ClusterMembershipReport {
                        cluster: k + 1,
                        label: labels[k].clone(),
                        membership: *c,
                    })
                    .collect(),
            });
        }

        let objects = (1..=view.len())
            .map(|i| {
                let p = evaluate_membership(i, view, model, radii, fuzzy)?;
                Ok(ObjectRow {
                    object: i,
                    point: view.to_original(p.point),
                    cluster: p.assigned + 1,
                    mu_xy: p.mu_xy(),
                    recommendation: recommend_difficulty(&p, theta),
                })
            })
            .collect::<Result<Vec<_>>>()?;

        Ok(RunReport {
            provenance: Provenance {
                tool: env!("CARGO_PKG_NAME").to_owned(),
                version: env!("CARGO_PKG_VERSION").to_owned(),
                seed: config.seed,
            },
            config,
            scaling: view.scaling.clone(),
            quality: model.quality,
            sweep: analysis.sweep.clone(),
            clusters,
            profiles,
            recommendations,
            objects,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzy::ClusterMembership;

    fn profile(mu: &[f64]) -> MembershipProfile {
        let blank = ClusterMembership {
            dx: 0.0,
            x_side: None,
            dy: 0.0,
            y_side: None,
            rho: 0.0,
            mu_rho: 0.0,
            mu_x: 0.0,
            mu_y: 0.0,
            mu_xy: 0.0,
        };
        MembershipProfile {
            object: 1,
            point: Point::default(),
            assigned: 0,
            clusters: mu
                .iter()
                .map(|&m| ClusterMembership { mu_xy: m, ..blank })
                .collect(),
        }
    }

    #[test]
    fn four_named_levels() {
        assert_eq!(
            cluster_labels(4),
            ["low", "below average", "average", "high"]
        );
    }

    #[test]
    fn other_counts_get_neutral_names() {
        assert_eq!(cluster_labels(1), ["level 1"]);
        assert_eq!(
            cluster_labels(6),
            ["level 1", "level 2", "level 3", "level 4", "level 5", "level 6"]
        );
    }

    #[test]
    fn worked_example_recommendation() {
        let r = recommend_difficulty(&profile(&[0.10, 0.63, 0.83, 0.20]), 0.5);
        assert_eq!(r.primary_level, 3);
        assert_eq!(r.supplementary_levels, vec![2]);
    }

    #[test]
    fn single_dominant_level() {
        let r = recommend_difficulty(&profile(&[0.0, 0.0, 1.0, 0.0]), 0.5);
        assert_eq!(r.primary_level, 3);
        assert!(r.supplementary_levels.is_empty());
    }

    #[test]
    fn weak_memberships_still_name_a_primary() {
        let r = recommend_difficulty(&profile(&[0.1, 0.3, 0.2]), 0.5);
        assert_eq!(r.primary_level, 2);
        assert!(r.supplementary_levels.is_empty());
    }

    #[test]
    fn ties_and_ordering() {
        let r = recommend_difficulty(&profile(&[0.7, 0.9, 0.9, 0.8]), 0.5);
        assert_eq!(r.primary_level, 2);
        assert_eq!(r.supplementary_levels, vec![3, 4, 1]);
    }
}

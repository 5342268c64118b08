//! Clustering of tabular score data with from-scratch K-Means, described
//! afterwards by asymmetric triangular fuzzy membership functions.
//!
//! The flow mirrors the command-line tool: [`dataset`] loads and scales two
//! features, [`kmeans`] partitions them, [`fuzzy`] measures each cluster's
//! extents and evaluates memberships, and [`report`] turns the result into
//! summaries, recommendations, JSON/CSV and SVG.

pub mod dataset;
pub mod error;
pub mod fixtures;
pub mod fuzzy;
pub mod kmeans;
pub mod pipeline;
mod point;
pub mod quality;
pub mod report;
pub mod sweep;

pub use dataset::{
    load_csv, scale_features, select_features, Dataset, FeatureView, Record, ScalingReport,
};
pub use error::{Error, Result};
pub use fuzzy::{
    compute_radii, evaluate_membership, mu_rho, mu_x, mu_xy, mu_y, ClusterRadii, FuzzyConfig,
    MembershipProfile, Radii, XSide, YSide,
};
pub use kmeans::{kmeans_fit, ClusterModel, KMeansConfig};
pub use pipeline::{analyze, run, Analysis, ClusterCount, OutputFormat, RunConfig, RunOutput};
pub use point::{euclidean_distance, Point};
pub use quality::{inter_cluster_f1, intra_cluster_f0, quality_ratio, QualityMetrics};
pub use report::{label_clusters, recommend_difficulty, DifficultyRecommendation, RunReport};
pub use sweep::{sweep_k, SweepResult};

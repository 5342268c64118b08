//! Average intra- and inter-cluster distances and their ratio.

use serde::Serialize;

use crate::dataset::FeatureView;
use crate::error::{Error, Result};
use crate::kmeans::ClusterModel;
use crate::point::Point;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QualityMetrics {
    /// Mean distance over pairs sharing a cluster (0 when there are none).
    pub f0: f64,
    /// Mean distance over pairs in different clusters; `None` for one cluster.
    pub f1: Option<f64>,
    /// `f0 / f1`, when `f1` is defined and positive.
    pub ratio: Option<f64>,
}

impl QualityMetrics {
    pub(crate) fn compute(points: &[Point], assignments: &[usize], k: usize) -> Self {
        let groups = group(points, assignments, k);
        let f0 = intra_mean(&groups);
        let f1 = inter_mean(&groups);
        QualityMetrics {
            f0,
            f1,
            ratio: f1.and_then(|f1| quality_ratio(f0, f1).ok()),
        }
    }
}

fn group(points: &[Point], assignments: &[usize], k: usize) -> Vec<Vec<Point>> {
    let mut groups = vec![Vec::new(); k];
    for (p, &a) in points.iter().zip(assignments) {
        groups[a].push(*p);
    }
    groups
}

fn intra_mean(groups: &[Vec<Point>]) -> f64 {
    let mut sum = 0.0;
    let mut pairs = 0usize;
    for g in groups {
        for (i, a) in g.iter().enumerate() {
            for b in &g[i + 1..] {
                sum += a.distance(b);
            }
        }
        pairs += g.len() * g.len().saturating_sub(1) / 2;
    }
    if pairs == 0 {
        0.0
    } else {
        sum / pairs as f64
    }
}

fn inter_mean(groups: &[Vec<Point>]) -> Option<f64> {
    let mut sum = 0.0;
    let mut pairs = 0usize;
    for (i, ga) in groups.iter().enumerate() {
        for gb in &groups[i + 1..] {
            for a in ga {
                for b in gb {
                    sum += a.distance(b);
                }
            }
            pairs += ga.len() * gb.len();
        }
    }
    (pairs > 0).then(|| sum / pairs as f64)
}

pub fn intra_cluster_f0(v: &FeatureView, m: &ClusterModel) -> f64 {
    intra_mean(&group(&v.points(), &m.assignments, m.k()))
}

pub fn inter_cluster_f1(v: &FeatureView, m: &ClusterModel) -> Result<f64> {
    if m.k() < 2 {
        return Err(Error::UndefinedMetric(
            "inter-cluster distance needs at least two clusters",
        ));
    }
    inter_mean(&group(&v.points(), &m.assignments, m.k())).ok_or(Error::UndefinedMetric(
        "inter-cluster distance needs points in two clusters",
    ))
}

pub fn quality_ratio(f0: f64, f1: f64) -> Result<f64> {
    if f1 > 0.0 {
        Ok(f0 / f1)
    } else {
        Err(Error::UndefinedMetric(
            "ratio is undefined when the inter-cluster distance is zero",
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn two_and_one() -> (FeatureView, ClusterModel) {
        let pts = [
            Point::new(0.0, 0.0),
            Point::new(0.0, 2.0),
            Point::new(10.0, 0.0),
        ];
        let v = FeatureView::from_points(&pts).unwrap();
        let m = ClusterModel::from_assignments(&pts, vec![0, 0, 1], 2).unwrap();
        (v, m)
    }

    #[test]
    fn single_intra_pair() {
        let (v, m) = two_and_one();
        assert_eq!(intra_cluster_f0(&v, &m), 2.0);
    }

    #[test]
    fn two_cross_pairs() {
        let (v, m) = two_and_one();
        let f1 = inter_cluster_f1(&v, &m).unwrap();
        assert_relative_eq!(f1, (10.0 + 104f64.sqrt()) / 2.0, epsilon = 1e-12);
        assert_relative_eq!(f1, 10.0990, epsilon = 1e-4);
    }

    #[test]
    fn ratio_of_the_example() {
        let (v, m) = two_and_one();
        let r = quality_ratio(intra_cluster_f0(&v, &m), inter_cluster_f1(&v, &m).unwrap()).unwrap();
        assert_relative_eq!(r, 0.1980, epsilon = 1e-4);
        assert_eq!(m.quality.ratio, Some(r));
    }

    #[test]
    fn coincident_points_have_zero_f0() {
        let pts = [Point::new(1.0, 1.0); 4];
        let v = FeatureView::from_points(&pts).unwrap();
        let m = ClusterModel::from_assignments(&pts, vec![0; 4], 1).unwrap();
        assert_eq!(intra_cluster_f0(&v, &m), 0.0);
    }

    #[test]
    fn singletons_have_zero_f0() {
        let pts = [Point::new(0.0, 0.0), Point::new(3.0, 3.0)];
        let v = FeatureView::from_points(&pts).unwrap();
        let m = ClusterModel::from_assignments(&pts, vec![0, 1], 2).unwrap();
        assert_eq!(intra_cluster_f0(&v, &m), 0.0);
    }

    #[test]
    fn coincident_singletons_have_zero_f1() {
        let pts = [Point::new(4.0, 4.0); 2];
        let v = FeatureView::from_points(&pts).unwrap();
        let m = ClusterModel::from_assignments(&pts, vec![0, 1], 2).unwrap();
        assert_eq!(inter_cluster_f1(&v, &m).unwrap(), 0.0);
        assert_eq!(m.quality.ratio, None);
    }

    #[test]
    fn one_cluster_has_no_f1() {
        let pts = [Point::new(0.0, 0.0), Point::new(1.0, 0.0)];
        let v = FeatureView::from_points(&pts).unwrap();
        let m = ClusterModel::from_assignments(&pts, vec![0, 0], 1).unwrap();
        assert!(matches!(
            inter_cluster_f1(&v, &m),
            Err(Error::UndefinedMetric(_))
        ));
    }

    #[test]
    fn ratio_edge_cases() {
        assert_eq!(quality_ratio(0.0, 3.5).unwrap(), 0.0);
        assert!(matches!(
            quality_ratio(1.0, 0.0),
            Err(Error::UndefinedMetric(_))
        ));
    }
}

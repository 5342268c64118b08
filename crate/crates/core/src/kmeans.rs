//! Lloyd's K-Means in the two-feature plane with k-means++ seeding.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dataset::FeatureView;
use crate::error::{Error, Result};
use crate::point::Point;
use crate::quality::QualityMetrics;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KMeansConfig {
    /// Number of clusters `Q_k`.
    pub k: usize,
    pub seed: u64,
    pub n_restarts: usize,
    pub max_iter: usize,
    /// Largest centroid displacement still counted as converged.
    pub tol: f64,
}

impl Default for KMeansConfig {
    fn default() -> Self {
        KMeansConfig {
            k: 4,
            seed: 0,
            n_restarts: 10,
            max_iter: 300,
            tol: 1e-6,
        }
    }
}

impl KMeansConfig {
    pub fn new(k: usize) -> Self {
        KMeansConfig {
            k,
            ..Default::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.k == 0 {
            return Err(Error::argument("cluster count must be at least 1"));
        }
        if self.k > n {
            return Err(Error::argument(format!(
                "cluster count {} exceeds the number of objects {n}",
                self.k
            )));
        }
        if self.n_restarts == 0 || self.max_iter == 0 {
            return Err(Error::argument("n_restarts and max_iter must be positive"));
        }
        if self.tol.is_nan() || self.tol < 0.0 {
            return Err(Error::argument("tol must be non-negative"));
        }
        Ok(())
    }
}

/// Outcome of a single Lloyd run from one initialization.
#[derive(Debug, Clone, PartialEq)]
pub struct LloydRun {
    pub centroids: Vec<Point>,
    pub assignments: Vec<usize>,
    pub wcss: f64,
    /// Within-cluster sum of squares after every update step.
    pub wcss_history: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
}

/// A fitted partition. Cluster indices are 0-based here and ordered by
/// ascending `cx + cy` of their centroids.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterModel {
    pub centroids: Vec<Point>,
    pub assignments: Vec<usize>,
    pub counts: Vec<usize>,
    pub quality: QualityMetrics,
    pub wcss: f64,
    pub converged: bool,
    pub iterations: usize,
}

impl ClusterModel {
    /// Builds a model from a known partition. Centroids are the member means.
    pub fn from_assignments(points: &[Point], assignments: Vec<usize>, k: usize) -> Result<Self> {
        if points.len() != assignments.len() {
            return Err(Error::argument("one assignment per point is required"));
        }
        if let Some(&bad) = assignments.iter().find(|&&a| a >= k) {
            return Err(Error::argument(format!("cluster index {bad} out of range")));
        }
        let counts = counts(&assignments, k);
        if counts.contains(&0) {
            return Err(Error::argument("every cluster needs at least one member"));
        }
        let centroids = means(points, &assignments, k);
        Ok(Self::assemble(points, centroids, assignments, false, 0))
    }

    fn assemble(
        points: &[Point],
        centroids: Vec<Point>,
        assignments: Vec<usize>,
        converged: bool,
        iterations: usize,
    ) -> Self {
        let k = centroids.len();
        let quality = QualityMetrics::compute(points, &assignments, k);
        ClusterModel {
            wcss: wcss(points, &centroids, &assignments),
            counts: counts(&assignments, k),
            centroids,
            assignments,
            quality,
            converged,
            iterations,
        }
    }

    /// Number of clusters.
    pub fn k(&self) -> usize {
        self.centroids.len()
    }

    pub fn members(&self, cluster: usize) -> impl Iterator<Item = usize> + '_ {
        self.assignments
            .iter()
            .enumerate()
            .filter(move |(_, &a)| a == cluster)
            .map(|(i, _)| i)
    }
}

/// k-means++ seeding: the first centre uniformly, then each next centre with
/// probability proportional to its squared distance from the nearest chosen one.
pub fn kmeans_plus_plus<R: Rng + ?Sized>(points: &[Point], k: usize, rng: &mut R) -> Vec<Point> {
    let n = points.len();
    let mut centroids = Vec::with_capacity(k);
    if k == 0 || n == 0 {
        return centroids;
    }
    centroids.push(points[rng.random_range(0..n)]);
    let mut nearest: Vec<f64> = points
        .iter()
        .map(|p| p.squared_distance(&centroids[0]))
        .collect();

    while centroids.len() < k {
        let total: f64 = nearest.iter().sum();
        let pick = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut chosen = None;
            for (i, &w) in nearest.iter().enumerate() {
                if w == 0.0 {
                    continue;
                }
                acc += w;
                chosen = Some(i);
                if acc > target {
                    break;
                }
            }
            chosen.expect("positive total implies a positive weight")
        } else {
            rng.random_range(0..n)
        };
        let c = points[pick];
        for (d, p) in nearest.iter_mut().zip(points) {
            *d = d.min(p.squared_distance(&c));
        }
        centroids.push(c);
    }
    centroids
}

fn nearest_centroid(p: &Point, centroids: &[Point]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (j, c) in centroids.iter().enumerate() {
        let d = p.squared_distance(c);
        if d < best_d {
            best_d = d;
            best = j;
        }
    }
    best
}

fn assign(points: &[Point], centroids: &[Point], assignments: &mut [usize]) {
    for (a, p) in assignments.iter_mut().zip(points) {
        *a = nearest_centroid(p, centroids);
    }
}

fn counts(assignments: &[usize], k: usize) -> Vec<usize> {
    let mut c = vec![0; k];
    for &a in assignments {
        c[a] += 1;
    }
    c
}

fn means(points: &[Point], assignments: &[usize], k: usize) -> Vec<Point> {
    let mut sums = vec![(0.0, 0.0, 0usize); k];
    for (p, &a) in points.iter().zip(assignments) {
        let s = &mut sums[a];
        s.0 += p.x;
        s.1 += p.y;
        s.2 += 1;
    }
    sums.into_iter()
        .map(|(sx, sy, n)| Point::new(sx / n as f64, sy / n as f64))
        .collect()
}

fn wcss(points: &[Point], centroids: &[Point], assignments: &[usize]) -> f64 {
    points
        .iter()
        .zip(assignments)
        .map(|(p, &a)| p.squared_distance(&centroids[a]))
        .sum()
}

/// Gives every empty cluster the point lying farthest from its own centroid,
/// taken only from clusters that can spare a member.
fn reseed_empty(points: &[Point], centroids: &mut [Point], assignments: &mut [usize]) -> bool {
    let k = centroids.len();
    let mut sizes = counts(assignments, k);
    let mut changed = false;
    for empty in 0..k {
        if sizes[empty] != 0 {
            continue;
        }
        let mut donor = None;
        let mut far = f64::NEG_INFINITY;
        for (i, p) in points.iter().enumerate() {
            let a = assignments[i];
            if sizes[a] < 2 {
                continue;
            }
            let d = p.squared_distance(&centroids[a]);
            if d > far {
                far = d;
                donor = Some(i);
            }
        }
        let Some(i) = donor else { break };
        sizes[assignments[i]] -= 1;
        assignments[i] = empty;
        sizes[empty] = 1;
        centroids[empty] = points[i];
        changed = true;
    }
    changed
}

/// Runs Lloyd iterations from the given initial centroids.
pub fn lloyd(points: &[Point], init: Vec<Point>, max_iter: usize, tol: f64) -> LloydRun {
    let k = init.len();
    let mut centroids = init;
    let mut assignments = vec![0; points.len()];
    let mut history = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    for it in 1..=max_iter {
        iterations = it;
        assign(points, &centroids, &mut assignments);
        reseed_empty(points, &mut centroids, &mut assignments);
        let updated = means(points, &assignments, k);
        let shift = updated
            .iter()
            .zip(&centroids)
            .map(|(a, b)| a.distance(b))
            .fold(0.0, f64::max);
        centroids = updated;
        history.push(wcss(points, &centroids, &assignments));

        if shift <= tol {
            let mut check = assignments.clone();
            assign(points, &centroids, &mut check);
            if check == assignments {
                converged = true;
                break;
            }
        }
    }

    LloydRun {
        wcss: history.last().copied().unwrap_or(0.0),
        centroids,
        assignments,
        wcss_history: history,
        converged,
        iterations,
    }
}

/// All restarts for `cfg`, in restart order. Restart `r` draws its seeding
/// from stream `r` of a ChaCha generator keyed by `cfg.seed`.
pub fn fit_runs(v: &FeatureView, cfg: &KMeansConfig) -> Result<Vec<LloydRun>> {
    cfg.validate(v.len())?;
    let points = v.points();
    Ok((0..cfg.n_restarts)
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(r as u64);
            let init = kmeans_plus_plus(&points, cfg.k, &mut rng);
            lloyd(&points, init, cfg.max_iter, cfg.tol)
        })
        .collect())
}

/// Fits `cfg.k` clusters, keeping the restart with the smallest WCSS.
pub fn kmeans_fit(v: &FeatureView, cfg: &KMeansConfig) -> Result<ClusterModel> {
    let runs = fit_runs(v, cfg)?;
    let best = runs
        .into_iter()
        .reduce(|best, run| if run.wcss < best.wcss { run } else { best })
        .expect("at least one restart");
    let points = v.points();
    let (centroids, assignments) = canonicalize(best.centroids, best.assignments);
    Ok(ClusterModel::assemble(
        &points,
        centroids,
        assignments,
        best.converged,
        best.iterations,
    ))
}

fn canonicalize(centroids: Vec<Point>, assignments: Vec<usize>) -> (Vec<Point>, Vec<usize>) {
    let mut order: Vec<usize> = (0..centroids.len()).collect();
    order.sort_by(|&a, &b| {
        let (ca, cb) = (centroids[a], centroids[b]);
        (ca.x + ca.y)
            .total_cmp(&(cb.x + cb.y))
            .then(ca.x.total_cmp(&cb.x))
    });
    let mut rank = vec![0; centroids.len()];
    for (new, &old) in order.iter().enumerate() {
        rank[old] = new;
    }
    let sorted = order.iter().map(|&old| centroids[old]).collect();
    let relabeled = assignments.into_iter().map(|a| rank[a]).collect();
    (sorted, relabeled)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn view(pts: &[(f64, f64)]) -> FeatureView {
        let pts: Vec<Point> = pts.iter().map(|&p| p.into()).collect();
        FeatureView::from_points(&pts).unwrap()
    }

    #[test]
    fn two_pairs() {
        let v = view(&[(0.0, 0.0), (0.0, 1.0), (10.0, 0.0), (10.0, 1.0)]);
        let m = kmeans_fit(&v, &KMeansConfig::new(2)).unwrap();
        assert_eq!(
            m.centroids,
            vec![Point::new(0.0, 0.5), Point::new(10.0, 0.5)]
        );
        assert_eq!(m.counts, vec![2, 2]);
        assert_eq!(m.assignments, vec![0, 0, 1, 1]);
        assert!(m.converged);
    }

    #[test]
    fn identical_points_single_cluster() {
        let v = view(&[(3.0, 4.0); 6]);
        let m = kmeans_fit(&v, &KMeansConfig::new(1)).unwrap();
        assert_eq!(m.centroids, vec![Point::new(3.0, 4.0)]);
        assert_eq!(m.quality.f0, 0.0);
        assert_eq!(m.quality.f1, None);
    }

    #[test]
    fn every_point_its_own_cluster() {
        let v = view(&[(0.0, 0.0), (5.0, 1.0), (2.0, 9.0)]);
        let m = kmeans_fit(&v, &KMeansConfig::new(3)).unwrap();
        assert_eq!(m.counts, vec![1, 1, 1]);
        assert_eq!(m.quality.f0, 0.0);
        assert_eq!(m.wcss, 0.0);
    }

    #[test]
    fn duplicates_still_fill_every_cluster() {
        let v = view(&[(1.0, 1.0), (1.0, 1.0), (1.0, 1.0), (8.0, 8.0)]);
        let m = kmeans_fit(&v, &KMeansConfig::new(3)).unwrap();
        assert!(m.counts.iter().all(|&c| c > 0));
        assert_eq!(m.counts.iter().sum::<usize>(), 4);
    }

    #[test]
    fn rejects_bad_cluster_counts() {
        let v = view(&[(0.0, 0.0), (1.0, 1.0)]);
        assert!(matches!(
            kmeans_fit(&v, &KMeansConfig::new(0)),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            kmeans_fit(&v, &KMeansConfig::new(3)),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn reseed_moves_the_farthest_point() {
        let pts = [
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(9.0, 0.0),
        ];
        let mut centroids = vec![Point::new(0.5, 0.0), Point::new(100.0, 100.0)];
        let mut a = vec![0, 0, 0];
        assert!(reseed_empty(&pts, &mut centroids, &mut a));
        assert_eq!(a, vec![0, 0, 1]);
        assert_eq!(centroids[1], Point::new(9.0, 0.0));
    }

    #[test]
    fn table1_fit_is_stable() {
        let d = crate::fixtures::table1().unwrap();
        let v = crate::dataset::select_features(&d, "math score", "reading score").unwrap();
        let m = kmeans_fit(&v, &KMeansConfig::new(4)).unwrap();
        assert_eq!(m.counts.iter().sum::<usize>(), 31);
        // the (18, 32) student is far enough from everyone to sit alone
        assert_eq!(m.counts[0], 1);
        assert_eq!(m.centroids[0], Point::new(18.0, 32.0));
        assert_relative_eq!(m.wcss, 1990.888889, epsilon = 1e-5);
        assert_eq!(m.counts, vec![1, 9, 18, 3]);

        // more restarts find the slightly better split of the top two bands
        let wide = KMeansConfig {
            n_restarts: 100,
            ..KMeansConfig::new(4)
        };
        let best = kmeans_fit(&v, &wide).unwrap();
        assert_relative_eq!(best.wcss, 1981.605, epsilon = 1e-3);
        assert_eq!(best.counts, vec![1, 9, 17, 4]);
    }

    fn cloud() -> impl Strategy<Value = (Vec<Point>, usize, u64)> {
        (2usize..25).prop_flat_map(|n| {
            (
                proptest::collection::vec((-50f64..50.0, -50f64..50.0), n)
                    .prop_map(|v| v.into_iter().map(Point::from).collect::<Vec<_>>()),
                1..=n.min(5),
                any::<u64>(),
            )
        })
    }

    proptest! {
        #[test]
        fn fitted_model_invariants((pts, k, seed) in cloud()) {
            let v = FeatureView::from_points(&pts).unwrap();
            let cfg = KMeansConfig::new(k).with_seed(seed);
            let m = kmeans_fit(&v, &cfg).unwrap();

            prop_assert_eq!(m.counts.iter().sum::<usize>(), pts.len());
            prop_assert!(m.counts.iter().all(|&c| c > 0));

            for w in m.centroids.windows(2) {
                prop_assert!(w[0].x + w[0].y <= w[1].x + w[1].y);
            }

            if m.converged {
                let recomputed = means(&pts, &m.assignments, k);
                for (a, b) in recomputed.iter().zip(&m.centroids) {
                    prop_assert!(a.distance(b) <= cfg.tol);
                }
                for (p, &a) in pts.iter().zip(&m.assignments) {
                    let own = p.distance(&m.centroids[a]);
                    for c in &m.centroids {
                        prop_assert!(p.distance(c) >= own);
                    }
                }
            }

            prop_assert_eq!(kmeans_fit(&v, &cfg).unwrap(), m);
        }

        #[test]
        fn lloyd_never_increases_wcss((pts, k, seed) in cloud()) {
            let v = FeatureView::from_points(&pts).unwrap();
            let cfg = KMeansConfig { n_restarts: 3, ..KMeansConfig::new(k).with_seed(seed) };
            for run in fit_runs(&v, &cfg).unwrap() {
                for w in run.wcss_history.windows(2) {
                    prop_assert!(w[1] <= w[0] * (1.0 + 1e-12) + 1e-12);
                }
            }
        }
    }
}

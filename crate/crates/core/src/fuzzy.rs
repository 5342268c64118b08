//! Triangular fuzzy memberships built from per-cluster asymmetric radii.
//!
//! Every cluster gets a Euclidean radius and four half-axis radii (left, right,
//! down, up), each the largest extent of its members from the centroid in that
//! direction. A membership decays linearly from 1 at the centroid to 0 at
//! `k_R` times the relevant radius.

use serde::Serialize;

use crate::dataset::FeatureView;
use crate::error::{Error, Result};
use crate::kmeans::ClusterModel;
use crate::point::Point;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FuzzyConfig {
    /// Radius change factor; larger values widen every membership support.
    pub k_r: f64,
}

impl Default for FuzzyConfig {
    fn default() -> Self {
        FuzzyConfig { k_r: 1.5 }
    }
}

impl FuzzyConfig {
    pub fn new(k_r: f64) -> Result<Self> {
        if k_r > 0.0 && k_r.is_finite() {
            Ok(FuzzyConfig { k_r })
        } else {
            Err(Error::argument(format!(
                "radius factor must be positive, got {k_r}"
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum XSide {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum YSide {
    Down,
    Up,
}

/// Extents of one cluster around its centroid.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Radii {
    pub r_c: f64,
    pub x_left: f64,
    pub x_right: f64,
    pub y_down: f64,
    pub y_up: f64,
}

impl Radii {
    /// Radii of `members` measured from `centroid`.
    pub fn about<I: IntoIterator<Item = Point>>(members: I, centroid: Point) -> Radii {
        let mut r = Radii::default();
        for p in members {
            r.r_c = r.r_c.max(p.distance(&centroid));
            if p.x < centroid.x {
                r.x_left = r.x_left.max(centroid.x - p.x);
            } else if p.x > centroid.x {
                r.x_right = r.x_right.max(p.x - centroid.x);
            }
            if p.y < centroid.y {
                r.y_down = r.y_down.max(centroid.y - p.y);
            } else if p.y > centroid.y {
                r.y_up = r.y_up.max(p.y - centroid.y);
            }
        }
        r
    }

    pub fn x(&self, side: XSide) -> f64 {
        match side {
            XSide::Left => self.x_left,
            XSide::Right => self.x_right,
        }
    }

    pub fn y(&self, side: YSide) -> f64 {
        match side {
            YSide::Down => self.y_down,
            YSide::Up => self.y_up,
        }
    }

    pub fn mu_rho(&self, rho: f64, cfg: &FuzzyConfig) -> f64 {
        triangular(rho, self.r_c, cfg.k_r)
    }

    pub fn mu_x(&self, dx: f64, side: XSide, cfg: &FuzzyConfig) -> f64 {
        triangular(dx, self.x(side), cfg.k_r)
    }

    pub fn mu_y(&self, dy: f64, side: YSide, cfg: &FuzzyConfig) -> f64 {
        triangular(dy, self.y(side), cfg.k_r)
    }
}

/// Radii for every cluster of a model, indexed like its centroids.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ClusterRadii(pub Vec<Radii>);

impl ClusterRadii {
    pub fn get(&self, cluster: usize) -> Result<&Radii> {
        self.0.get(cluster).ok_or_else(|| {
            Error::argument(format!(
                "cluster {} does not exist (model has {})",
                cluster + 1,
                self.0.len()
            ))
        })
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Radii> {
        self.0.iter()
    }
}

pub fn compute_radii(v: &FeatureView, m: &ClusterModel) -> ClusterRadii {
    ClusterRadii(
        m.centroids
            .iter()
            .enumerate()
            .map(|(k, &c)| Radii::about(m.members(k).map(|i| v.point(i)), c))
            .collect(),
    )
}

/// Linear decay from 1 at distance 0 to 0 at `radius * k_r`, clamped to
/// `[0, 1]`. A zero radius gives 1 at distance 0 and 0 anywhere else.
pub fn triangular(distance: f64, radius: f64, k_r: f64) -> f64 {
    if distance <= 0.0 {
        return 1.0;
    }
    let support = radius * k_r;
    if distance >= support {
        0.0
    } else {
        1.0 - distance / support
    }
}

pub fn mu_rho(radii: &ClusterRadii, cluster: usize, rho: f64, cfg: &FuzzyConfig) -> Result<f64> {
    Ok(radii.get(cluster)?.mu_rho(rho, cfg))
}

pub fn mu_x(
    radii: &ClusterRadii,
    cluster: usize,
    dx: f64,
    side: XSide,
    cfg: &FuzzyConfig,
) -> Result<f64> {
    Ok(radii.get(cluster)?.mu_x(dx, side, cfg))
}

pub fn mu_y(
    radii: &ClusterRadii,
    cluster: usize,
    dy: f64,
    side: YSide,
    cfg: &FuzzyConfig,
) -> Result<f64> {
    Ok(radii.get(cluster)?.mu_y(dy, side, cfg))
}

/// Root-mean-square of the two axis memberships.
pub fn mu_xy(mu_x: f64, mu_y: f64) -> f64 {
    ((mu_x * mu_x + mu_y * mu_y) / 2.0).sqrt()
}

/// Memberships of one object in one cluster, plus the offsets they came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClusterMembership {
    pub dx: f64,
    /// `None` when the object lies exactly on the centroid's x.
    pub x_side: Option<XSide>,
    pub dy: f64,
    pub y_side: Option<YSide>,
    pub rho: f64,
    pub mu_rho: f64,
    pub mu_x: f64,
    pub mu_y: f64,
    pub mu_xy: f64,
}

impl ClusterMembership {
    pub fn evaluate(p: Point, centroid: Point, radii: &Radii, cfg: &FuzzyConfig) -> Self {
        let x_side = if p.x < centroid.x {
            Some(XSide::Left)
        } else if p.x > centroid.x {
            Some(XSide::Right)
        } else {
            None
        };
        let y_side = if p.y < centroid.y {
            Some(YSide::Down)
        } else if p.y > centroid.y {
            Some(YSide::Up)
        } else {
            None
        };
        let dx = (p.x - centroid.x).abs();
        let dy = (p.y - centroid.y).abs();
        let rho = p.distance(&centroid);
        let mu_x = x_side.map_or(1.0, |s| radii.mu_x(dx, s, cfg));
        let mu_y = y_side.map_or(1.0, |s| radii.mu_y(dy, s, cfg));
        ClusterMembership {
            dx,
            x_side,
            dy,
            y_side,
            rho,
            mu_rho: radii.mu_rho(rho, cfg),
            mu_x,
            mu_y,
            mu_xy: mu_xy(mu_x, mu_y),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipProfile {
    /// 1-based object number.
    pub object: usize,
    pub point: Point,
    /// 0-based cluster the object was assigned to by K-Means.
    pub assigned: usize,
    /// One entry per cluster, in cluster order.
    pub clusters: Vec<ClusterMembership>,
}

impl MembershipProfile {
    pub fn mu_xy(&self) -> Vec<f64> {
        self.clusters.iter().map(|c| c.mu_xy).collect()
    }
}

/// Memberships of an arbitrary point in every cluster.
pub fn membership_at(
    p: Point,
    m: &ClusterModel,
    radii: &ClusterRadii,
    cfg: &FuzzyConfig,
) -> Vec<ClusterMembership> {
    m.centroids
        .iter()
        .zip(radii.iter())
        .map(|(&c, r)| ClusterMembership::evaluate(p, c, r, cfg))
        .collect()
}

/// Profile of the object numbered `object` (1-based).
pub fn evaluate_membership(
    object: usize,
    v: &FeatureView,
    m: &ClusterModel,
    radii: &ClusterRadii,
    cfg: &FuzzyConfig,
) -> Result<MembershipProfile> {
    if object == 0 || object > v.len() {
        return Err(Error::argument(format!(
            "object {object} is outside 1..={}",
            v.len()
        )));
    }
    let i = object - 1;
    let p = v.point(i);
    Ok(MembershipProfile {
        object,
        point: p,
        assigned: m.assignments[i],
        clusters: membership_at(p, m, radii, cfg),
    })
}

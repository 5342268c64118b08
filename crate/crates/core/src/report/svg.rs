//! SVG 1.1 scatter plots and membership-function plots.
//!
//! Output depends only on the inputs: fixed canvas, fixed palette, numbers
//! printed through [`sig6`](super::format::sig6).

use std::fmt::Write as _;

use crate::dataset::FeatureView;
use crate::error::{Error, Result};
use crate::fuzzy::{triangular, ClusterRadii, FuzzyConfig};
use crate::kmeans::ClusterModel;

use super::format::sig6;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];
const MARGIN: f64 = 50.0;

fn color(k: usize) -> &'static str {
    PALETTE[k % PALETTE.len()]
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvgOptions {
    pub width: f64,
    pub height: f64,
    /// Draw quadrant arcs at the cluster radii times this factor.
    pub arcs: Option<f64>,
    pub title: Option<String>,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions {
            width: 640.0,
            height: 480.0,
            arcs: None,
            title: None,
        }
    }
}

/// Linear map from data space onto the plot area, y pointing up.
struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    width: f64,
    height: f64,
}

impl Frame {
    fn new(mut x0: f64, mut x1: f64, mut y0: f64, mut y1: f64, width: f64, height: f64) -> Self {
        if x1 - x0 <= 0.0 {
            x0 -= 1.0;
            x1 += 1.0;
        }
        if y1 - y0 <= 0.0 {
            y0 -= 1.0;
            y1 += 1.0;
        }
        let (px, py) = ((x1 - x0) * 0.05, (y1 - y0) * 0.05);
        Frame {
            x0: x0 - px,
            x1: x1 + px,
            y0: y0 - py,
            y1: y1 + py,
            width,
            height,
        }
    }

    fn sx(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * (self.width - 2.0 * MARGIN)
    }

    fn sy(&self, y: f64) -> f64 {
        self.height - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (self.height - 2.0 * MARGIN)
    }

    fn scale_x(&self, d: f64) -> f64 {
        d / (self.x1 - self.x0) * (self.width - 2.0 * MARGIN)
    }

    fn scale_y(&self, d: f64) -> f64 {
        d / (self.y1 - self.y0) * (self.height - 2.0 * MARGIN)
    }

    fn axes(&self, out: &mut String, x_label: &str, y_label: &str) {
        let (l, r) = (MARGIN, self.width - MARGIN);
        let (t, b) = (MARGIN, self.height - MARGIN);
        let _ = writeln!(
            out,
            r##"<rect class="frame" x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#444"/>"##,
            sig6(l),
            sig6(t),
            sig6(r - l),
            sig6(b - t)
        );
        for i in 0..=4 {
            let f = i as f64 / 4.0;
            let xv = self.x0 + f * (self.x1 - self.x0);
            let yv = self.y0 + f * (self.y1 - self.y0);
            let _ = writeln!(
                out,
                r#"<text class="tick" x="{}" y="{}" font-size="10" text-anchor="middle">{}</text>"#,
                sig6(self.sx(xv)),
                sig6(b + 14.0),
                sig6(round_tick(xv))
            );
            let _ = writeln!(
                out,
                r#"<text class="tick" x="{}" y="{}" font-size="10" text-anchor="end">{}</text>"#,
                sig6(l - 4.0),
                sig6(self.sy(yv) + 3.0),
                sig6(round_tick(yv))
            );
        }
        let _ = writeln!(
            out,
            r#"<text class="label" x="{}" y="{}" font-size="12" text-anchor="middle">{}</text>"#,
            sig6(self.width / 2.0),
            sig6(self.height - 12.0),
            escape(x_label)
        );
        let _ = writeln!(
            out,
            r#"<text class="label" x="14" y="{}" font-size="12" text-anchor="middle" transform="rotate(-90 14 {})">{}</text>"#,
            sig6(self.height / 2.0),
            sig6(self.height / 2.0),
            escape(y_label)
        );
    }
}

fn round_tick(v: f64) -> f64 {
    (v * 100.0).round() / 100.0
}

fn open(out: &mut String, width: f64, height: f64, title: Option<&str>) {
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = sig6(width),
        h = sig6(height)
    );
    let _ = writeln!(
        out,
        r#"<rect width="{}" height="{}" fill="white"/>"#,
        sig6(width),
        sig6(height)
    );
    if let Some(t) = title {
        let _ = writeln!(
            out,
            r#"<text class="title" x="{}" y="24" font-size="14" text-anchor="middle">{}</text>"#,
            sig6(width / 2.0),
            escape(t)
        );
    }
}

/// Scatter plot of the clustered objects: one circle per object coloured by
/// cluster, a cross per centroid and, when requested, the four quadrant arcs.
pub fn render_scatter_svg(
    v: &FeatureView,
    m: &ClusterModel,
    radii: &ClusterRadii,
    options: &SvgOptions,
) -> String {
    let mut xs: Vec<f64> = v.x.clone();
    let mut ys: Vec<f64> = v.y.clone();
    if let Some(f) = options.arcs {
        for (c, r) in m.centroids.iter().zip(radii.iter()) {
            xs.extend([c.x - r.x_left * f, c.x + r.x_right * f]);
            ys.extend([c.y - r.y_down * f, c.y + r.y_up * f]);
        }
    }
    let lo_hi = |vals: &[f64]| {
        vals.iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| {
                (a.min(x), b.max(x))
            })
    };
    let (x0, x1) = lo_hi(&xs);
    let (y0, y1) = lo_hi(&ys);
    let frame = Frame::new(x0, x1, y0, y1, options.width, options.height);

    let mut out = String::new();
    open(
        &mut out,
        options.width,
        options.height,
        options.title.as_deref(),
    );
    frame.axes(&mut out, &v.x_name, &v.y_name);

    for i in 0..v.len() {
        let p = v.point(i);
        let _ = writeln!(
            out,
            r#"<circle class="point" data-object="{}" data-cluster="{}" cx="{}" cy="{}" r="3" fill="{}" fill-opacity="0.8"/>"#,
            i + 1,
            m.assignments[i] + 1,
            sig6(frame.sx(p.x)),
            sig6(frame.sy(p.y)),
            color(m.assignments[i])
        );
    }

    if let Some(f) = options.arcs {
        for (k, (c, r)) in m.centroids.iter().zip(radii.iter()).enumerate() {
            let (cx, cy) = (frame.sx(c.x), frame.sy(c.y));
            let right = frame.scale_x(r.x_right * f);
            let left = frame.scale_x(r.x_left * f);
            let up = frame.scale_y(r.y_up * f);
            let down = frame.scale_y(r.y_down * f);
            // counter-clockwise from the positive x half-axis
            let quadrants = [
                ((cx + right, cy), (cx, cy - up), right, up),
                ((cx, cy - up), (cx - left, cy), left, up),
                ((cx - left, cy), (cx, cy + down), left, down),
                ((cx, cy + down), (cx + right, cy), right, down),
            ];
            for ((sx, sy), (ex, ey), rx, ry) in quadrants {
                if rx <= 0.0 || ry <= 0.0 {
                    continue;
                }
                let _ = writeln!(
                    out,
                    r#"<path class="arc" data-cluster="{}" d="M {} {} A {} {} 0 0 0 {} {}" fill="none" stroke="{}" stroke-dasharray="4 2"/>"#,
                    k + 1,
                    sig6(sx),
                    sig6(sy),
                    sig6(rx),
                    sig6(ry),
                    sig6(ex),
                    sig6(ey),
                    color(k)
                );
            }
        }
    }

    for (k, c) in m.centroids.iter().enumerate() {
        let (cx, cy) = (frame.sx(c.x), frame.sy(c.y));
        let _ = writeln!(
            out,
            r#"<path class="centroid" data-cluster="{}" d="M {} {} L {} {} M {} {} L {} {}" stroke="black" stroke-width="2"/>"#,
            k + 1,
            sig6(cx - 6.0),
            sig6(cy - 6.0),
            sig6(cx + 6.0),
            sig6(cy + 6.0),
            sig6(cx - 6.0),
            sig6(cy + 6.0),
            sig6(cx + 6.0),
            sig6(cy - 6.0)
        );
    }

    out.push_str("</svg>\n");
    out
}

/// Which membership function a plot shows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MembershipFamily {
    /// Euclidean distance, plotted over `0..=k_R * R_c`.
    Rho,
    /// Signed x offset: negative to the left of the centroid.
    X,
    /// Signed y offset: negative below the centroid.
    Y,
}

impl MembershipFamily {
    pub fn name(self) -> &'static str {
        match self {
            MembershipFamily::Rho => "rho",
            MembershipFamily::X => "x",
            MembershipFamily::Y => "y",
        }
    }
}

/// A piecewise-linear membership function ready for plotting.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipCurve {
    /// 1-based cluster number.
    pub cluster: usize,
    pub family: MembershipFamily,
    /// `(offset, mu)` vertices in increasing offset order.
    pub vertices: Vec<(f64, f64)>,
    pub marker: Option<(f64, f64)>,
    k_r: f64,
    lower: f64,
    upper: f64,
}

impl MembershipCurve {
    /// Membership at a (signed, for the axis families) offset.
    pub fn value_at(&self, offset: f64) -> f64 {
        match self.family {
            MembershipFamily::Rho => triangular(offset, self.upper, self.k_r),
            _ if offset < 0.0 => triangular(-offset, self.lower, self.k_r),
            _ => triangular(offset, self.upper, self.k_r),
        }
    }

    /// Adds a vertical marker at `offset`, e.g. a queried object's distance.
    pub fn with_marker(mut self, offset: f64) -> Self {
        self.marker = Some((offset, self.value_at(offset)));
        self
    }

    pub fn render_svg(&self) -> String {
        let (width, height) = (480.0, 320.0);
        let mut lo = self.vertices.first().map_or(0.0, |v| v.0);
        let mut hi = self.vertices.last().map_or(0.0, |v| v.0);
        if let Some((m, _)) = self.marker {
            lo = lo.min(m);
            hi = hi.max(m);
        }
        let frame = Frame::new(lo, hi, 0.0, 1.0, width, height);
        let mut out = String::new();
        let title = format!(
            "cluster {} membership by {}",
            self.cluster,
            self.family.name()
        );
        open(&mut out, width, height, Some(&title));
        let x_label = match self.family {
            MembershipFamily::Rho => "distance to centroid",
            MembershipFamily::X => "x offset from centroid",
            MembershipFamily::Y => "y offset from centroid",
        };
        frame.axes(&mut out, x_label, "membership");

        let pts: Vec<String> = self
            .vertices
            .iter()
            .map(|&(x, y)| format!("{},{}", sig6(frame.sx(x)), sig6(frame.sy(y))))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline class="curve" points="{}" fill="none" stroke="{}" stroke-width="2"/>"#,
            pts.join(" "),
            color(self.cluster - 1)
        );
        if let Some((x, y)) = self.marker {
            let _ = writeln!(
                out,
                r#"<line class="marker" x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="black" stroke-dasharray="3 3"/>"#,
                sig6(frame.sy(0.0)),
                sig6(frame.sy(1.0)),
                x = sig6(frame.sx(x))
            );
            let _ = writeln!(
                out,
                r#"<circle class="marker-hit" cx="{}" cy="{}" r="4" fill="black" data-mu="{}"/>"#,
                sig6(frame.sx(x)),
                sig6(frame.sy(y)),
                sig6(y)
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

/// Builds the curve of one membership family for the 1-based `cluster`.
pub fn membership_curve(
    radii: &ClusterRadii,
    cfg: &FuzzyConfig,
    cluster: usize,
    family: MembershipFamily,
) -> Result<MembershipCurve> {
    if cluster == 0 || cluster > radii.len() {
        return Err(Error::argument(format!(
            "cluster {cluster} is outside 1..={}",
            radii.len()
        )));
    }
    let r = radii.get(cluster - 1)?;
    let k_r = cfg.k_r;
    let (lower, upper, vertices) = match family {
        MembershipFamily::Rho => (0.0, r.r_c, vec![(0.0, 1.0), (r.r_c * k_r, 0.0)]),
        MembershipFamily::X => (
            r.x_left,
            r.x_right,
            vec![(-r.x_left * k_r, 0.0), (0.0, 1.0), (r.x_right * k_r, 0.0)],
        ),
        MembershipFamily::Y => (
            r.y_down,
            r.y_up,
            vec![(-r.y_down * k_r, 0.0), (0.0, 1.0), (r.y_up * k_r, 0.0)],
        ),
    };
    Ok(MembershipCurve {
        cluster,
        family,
        vertices,
        marker: None,
        k_r,
        lower,
        upper,
    })
}

/// Membership plot as an SVG document, with an optional marker offset.
pub fn plot_membership_functions(
    radii: &ClusterRadii,
    cfg: &FuzzyConfig,
    cluster: usize,
    family: MembershipFamily,
    marker: Option<f64>,
) -> Result<String> {
    let mut curve = membership_curve(radii, cfg, cluster, family)?;
    if let Some(m) = marker {
        curve = curve.with_marker(m);
    }
    Ok(curve.render_svg())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzy::{compute_radii, Radii};
    use crate::kmeans::{kmeans_fit, KMeansConfig};
    use crate::point::Point;

    fn three_points() -> (FeatureView, ClusterModel, ClusterRadii) {
        let pts = [(0.0, 0.0), (4.0, 1.0), (1.0, 3.0)].map(Point::from);
        let v = FeatureView::from_points(&pts).unwrap();
        let m = kmeans_fit(&v, &KMeansConfig::new(1)).unwrap();
        let r = compute_radii(&v, &m);
        (v, m, r)
    }

    #[test]
    fn one_circle_per_object_and_one_cross_per_centroid() {
        let (v, m, r) = three_points();
        let svg = render_scatter_svg(&v, &m, &r, &SvgOptions::default());
        assert_eq!(svg.matches(r#"class="point""#).count(), 3);
        assert_eq!(svg.matches(r#"class="centroid""#).count(), 1);
        assert_eq!(svg.matches(r#"class="arc""#).count(), 0);
        assert!(svg.starts_with("<?xml"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn arcs_on_request() {
        let (v, m, r) = three_points();
        let opts = SvgOptions {
            arcs: Some(1.5),
            ..Default::default()
        };
        let svg = render_scatter_svg(&v, &m, &r, &opts);
        assert_eq!(svg.matches(r#"class="arc""#).count(), 4);
    }

    #[test]
    fn scatter_is_deterministic() {
        let (v, m, r) = three_points();
        let opts = SvgOptions {
            arcs: Some(1.0),
            title: Some("a < b & c".into()),
            ..Default::default()
        };
        let a = render_scatter_svg(&v, &m, &r, &opts);
        assert_eq!(a, render_scatter_svg(&v, &m, &r, &opts));
        assert!(a.contains("a &lt; b &amp; c"));
    }

    fn ten() -> ClusterRadii {
        ClusterRadii(vec![Radii {
            r_c: 10.0,
            x_left: 4.0,
            x_right: 2.0,
            y_down: 1.0,
            y_up: 3.0,
        }])
    }

    #[test]
    fn rho_curve_endpoints() {
        let c =
            membership_curve(&ten(), &FuzzyConfig::default(), 1, MembershipFamily::Rho).unwrap();
        assert_eq!(c.vertices, vec![(0.0, 1.0), (15.0, 0.0)]);
    }

    #[test]
    fn marker_meets_the_curve() {
        let c = membership_curve(&ten(), &FuzzyConfig::default(), 1, MembershipFamily::Rho)
            .unwrap()
            .with_marker(7.5);
        assert_eq!(c.marker, Some((7.5, 0.5)));
        let svg = c.render_svg();
        assert!(svg.contains(r#"data-mu="0.5""#));
        assert_eq!(svg.matches(r#"class="marker""#).count(), 1);
    }

    #[test]
    fn axis_curve_is_asymmetric() {
        let c = membership_curve(&ten(), &FuzzyConfig::default(), 1, MembershipFamily::X).unwrap();
        assert_eq!(c.vertices, vec![(-6.0, 0.0), (0.0, 1.0), (3.0, 0.0)]);
        assert_eq!(c.value_at(-3.0), 0.5);
        assert_eq!(c.value_at(1.5), 0.5);
    }

    #[test]
    fn unknown_cluster() {
        let cfg = FuzzyConfig::default();
        assert!(membership_curve(&ten(), &cfg, 0, MembershipFamily::Rho).is_err());
        assert!(membership_curve(&ten(), &cfg, 2, MembershipFamily::Y).is_err());
        assert!(plot_membership_functions(&ten(), &cfg, 2, MembershipFamily::Y, None).is_err());
    }
}

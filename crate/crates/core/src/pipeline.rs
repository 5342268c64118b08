//! End-to-end run: load, select, scale, cluster, measure, report, write.

use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use crate::dataset::{load_csv, select_features, Dataset, FeatureView};
use crate::error::{Error, Result};
use crate::fuzzy::{compute_radii, evaluate_membership, ClusterRadii, FuzzyConfig};
use crate::kmeans::{kmeans_fit, ClusterModel, KMeansConfig};
use crate::report::{
    export_report, plot_membership_functions, render_scatter_svg, ConfigEcho, ExportFormat,
    MembershipFamily, RunReport, SvgOptions,
};
use crate::sweep::{sweep_k, SweepEntry};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClusterCount {
    Fixed(usize),
    Sweep(RangeInclusive<usize>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OutputFormat {
    Json,
    Csv,
    Svg,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "svg" => Ok(OutputFormat::Svg),
            other => Err(Error::argument(format!("unknown output format `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: PathBuf,
    pub x_col: String,
    pub y_col: String,
    pub clusters: ClusterCount,
    pub k_r: f64,
    pub theta: f64,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub formats: Vec<OutputFormat>,
    /// 1-based objects to profile.
    pub queries: Vec<usize>,
}

impl RunConfig {
    pub fn new(input: impl Into<PathBuf>, clusters: ClusterCount) -> Self {
        RunConfig {
            input: input.into(),
            x_col: "math score".to_owned(),
            y_col: "reading score".to_owned(),
            clusters,
            k_r: 1.5,
            theta: crate::report::DEFAULT_THETA,
            seed: 0,
            out_dir: PathBuf::from("out"),
            formats: vec![OutputFormat::Json, OutputFormat::Csv, OutputFormat::Svg],
            queries: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        FuzzyConfig::new(self.k_r)?;
        if !(0.0..=1.0).contains(&self.theta) {
            return Err(Error::argument(format!(
                "theta must lie in [0, 1], got {}",
                self.theta
            )));
        }
        match &self.clusters {
            ClusterCount::Fixed(0) => Err(Error::argument("cluster count must be at least 1")),
            ClusterCount::Sweep(r) if *r.start() < 2 || r.start() > r.end() => Err(
                Error::argument(format!("invalid sweep range {}..{}", r.start(), r.end())),
            ),
            _ => Ok(()),
        }
    }

    fn kmeans(&self) -> KMeansConfig {
        KMeansConfig {
            seed: self.seed,
            ..KMeansConfig::default()
        }
    }

    fn echo(&self, k: usize) -> ConfigEcho {
        let kcfg = self.kmeans();
        ConfigEcho {
            input: self.input.display().to_string(),
            x_col: self.x_col.clone(),
            y_col: self.y_col.clone(),
            k,
            sweep: match &self.clusters {
                ClusterCount::Sweep(r) => Some((*r.start(), *r.end())),
                ClusterCount::Fixed(_) => None,
            },
            k_r: self.k_r,
            theta: self.theta,
            seed: self.seed,
            n_restarts: kcfg.n_restarts,
            max_iter: kcfg.max_iter,
            tol: kcfg.tol,
            queries: self.queries.clone(),
        }
    }
}

/// A fitted model together with everything derived from it.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub view: FeatureView,
    pub model: ClusterModel,
    pub radii: ClusterRadii,
    pub fuzzy: FuzzyConfig,
    pub sweep: Option<Vec<SweepEntry>>,
}

/// Scales `view`, clusters it and measures the cluster radii.
pub fn analyze(
    view: FeatureView,
    clusters: &ClusterCount,
    kcfg: &KMeansConfig,
    fuzzy: FuzzyConfig,
) -> Result<Analysis> {
    let view = view.scaled();
    let (model, sweep) = match clusters {
        ClusterCount::Fixed(k) => (
            kmeans_fit(
                &view,
                &KMeansConfig {
                    k: *k,
                    ..kcfg.clone()
                },
            )?,
            None,
        ),
        ClusterCount::Sweep(range) => {
            let s = sweep_k(&view, range.clone(), kcfg)?;
            (s.model, Some(s.entries))
        }
    };
    let radii = compute_radii(&view, &model);
    Ok(Analysis {
        view,
        model,
        radii,
        fuzzy,
        sweep,
    })
}

#[derive(Debug)]
pub struct RunOutput {
    pub dataset: Dataset,
    pub analysis: Analysis,
    pub report: RunReport,
    pub written: Vec<PathBuf>,
}

pub fn run(cfg: &RunConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let fuzzy = FuzzyConfig::new(cfg.k_r)?;
    let dataset = load_csv(&cfg.input, &[cfg.x_col.as_str(), cfg.y_col.as_str()])?;
    let view = select_features(&dataset, &cfg.x_col, &cfg.y_col)?;
    for &q in &cfg.queries {
        if q == 0 || q > view.len() {
            return Err(Error::argument(format!(
                "queried object {q} is outside 1..={}",
                view.len()
            )));
        }
    }
    let analysis = analyze(view, &cfg.clusters, &cfg.kmeans(), fuzzy)?;
    let report = RunReport::build(
        cfg.echo(analysis.model.k()),
        &analysis,
        cfg.theta,
        &cfg.queries,
    )?;
    let written = write_outputs(cfg, &analysis, &report)?;
    Ok(RunOutput {
        dataset,
        analysis,
        report,
        written,
    })
}

fn write_outputs(cfg: &RunConfig, a: &Analysis, report: &RunReport) -> Result<Vec<PathBuf>> {
    let dir = &cfg.out_dir;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    let mut formats = cfg.formats.clone();
    formats.sort();
    formats.dedup();

    for fmt in formats {
        match fmt {
            OutputFormat::Json => {
                let p = dir.join("report.json");
                export_report(report, ExportFormat::Json, &p)?;
                written.push(p);
            }
            OutputFormat::Csv => {
                let p = dir.join("report.csv");
                export_report(report, ExportFormat::Csv, &p)?;
                written.push(p);
            }
            OutputFormat::Svg => written.extend(write_svgs(dir, cfg, a)?),
        }
    }
    Ok(written)
}

fn write_svgs(dir: &Path, cfg: &RunConfig, a: &Analysis) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    let mut put = |name: String, body: String| -> Result<()> {
        let p = dir.join(name);
        fs::write(&p, body).map_err(|e| Error::io(&p, e))?;
        written.push(p);
        Ok(())
    };

    let title = format!(
        "{} clusters: {} vs {}",
        a.model.k(),
        a.view.x_name,
        a.view.y_name
    );
    put(
        "clusters.svg".into(),
        render_scatter_svg(
            &a.view,
            &a.model,
            &a.radii,
            &SvgOptions {
                title: Some(title.clone()),
                ..Default::default()
            },
        ),
    )?;
    put(
        "clusters_arcs.svg".into(),
        render_scatter_svg(
            &a.view,
            &a.model,
            &a.radii,
            &SvgOptions {
                title: Some(title),
                arcs: Some(a.fuzzy.k_r),
                ..Default::default()
            },
        ),
    )?;

    for &q in &cfg.queries {
        let profile = evaluate_membership(q, &a.view, &a.model, &a.radii, &a.fuzzy)?;
        for (k, c) in profile.clusters.iter().enumerate() {
            let signed = |d: f64, negative: bool| if negative { -d } else { d };
            let markers = [
                (MembershipFamily::Rho, c.rho),
                (
                    MembershipFamily::X,
                    signed(c.dx, c.x_side == Some(crate::fuzzy::XSide::Left)),
                ),
                (
                    MembershipFamily::Y,
                    signed(c.dy, c.y_side == Some(crate::fuzzy::YSide::Down)),
                ),
            ];
            for (family, offset) in markers {
                let svg =
                    plot_membership_functions(&a.radii, &a.fuzzy, k + 1, family, Some(offset))?;
                put(
                    format!("membership_{q}_{}_k{}.svg", family.name(), k + 1),
                    svg,
                )?;
            }
        }
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let ok = RunConfig::new("d.csv", ClusterCount::Fixed(4));
        assert!(ok.validate().is_ok());
        assert!(RunConfig {
            k_r: -1.0,
            ..ok.clone()
        }
        .validate()
        .is_err());
        assert!(RunConfig {
            theta: 1.5,
            ..ok.clone()
        }
        .validate()
        .is_err());
        assert!(RunConfig {
            clusters: ClusterCount::Sweep(1..=3),
            ..ok.clone()
        }
        .validate()
        .is_err());
        assert!(RunConfig {
            clusters: ClusterCount::Fixed(0),
            ..ok
        }
        .validate()
        .is_err());
    }

    #[test]
    fn format_names() {
        assert_eq!("JSON".parse::<OutputFormat>().unwrap(), OutputFormat::Json);
        assert!("png".parse::<OutputFormat>().is_err());
    }
}

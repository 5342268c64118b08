//! Argument parsing and console output for the `fuzzband` binary.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{ArgGroup, Parser};
use fuzzband::report::format::sig6;
use fuzzband::report::{cluster_labels, recommend_difficulty};
use fuzzband::{evaluate_membership, ClusterCount, Error, OutputFormat, RunConfig, RunOutput};

/// Cluster score records with K-Means and report fuzzy cluster memberships.
#[derive(Debug, Parser)]
#[command(name = "fuzzband", version)]
#[command(group(ArgGroup::new("clusters").required(true).args(["k", "sweep"])))]
pub struct Args {
    /// CSV file with a header row.
    #[arg(long)]
    pub input: PathBuf,

    /// Column used as the x feature.
    #[arg(long = "x-col", default_value = "math score")]
    pub x_col: String,

    /// Column used as the y feature.
    #[arg(long = "y-col", default_value = "reading score")]
    pub y_col: String,

    /// Number of clusters.
    #[arg(long)]
    pub k: Option<usize>,

    /// Try every cluster count in A..B and keep the best F0/F1 ratio.
    #[arg(long, value_name = "A..B", value_parser = parse_range)]
    pub sweep: Option<(usize, usize)>,

    /// Radius change factor of the membership functions.
    #[arg(long = "kr", default_value_t = 1.5, allow_negative_numbers = true)]
    pub k_r: f64,

    /// Threshold for supplementary difficulty levels.
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub theta: f64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Output directory.
    #[arg(long, env = "FUZZBAND_OUT", default_value = "out")]
    pub out: PathBuf,

    /// Comma-separated subset of json,csv,svg.
    #[arg(long, value_delimiter = ',', default_value = "json,csv,svg")]
    pub formats: Vec<String>,

    /// 1-based object number to profile; may be repeated.
    #[arg(long = "query")]
    pub query: Vec<usize>,
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected A..B, got `{s}`"))?;
    let a = a
        .trim()
        .parse()
        .map_err(|_| format!("bad range start `{a}`"))?;
    let b = b
        .trim()
        .parse()
        .map_err(|_| format!("bad range end `{b}`"))?;
    Ok((a, b))
}

#[derive(Debug)]
pub enum CliError {
    Usage(clap::Error),
    Run(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Run(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(e) if !e.use_stderr() => 0,
            CliError::Usage(_) => 2,
            CliError::Run(e) => match e {
                Error::Schema { .. } => 3,
                Error::Parse { .. } => 4,
                Error::MissingValue { .. } => 5,
                Error::OutOfRange { .. } => 6,
                Error::EmptyInput => 7,
                Error::Csv(_) => 8,
                Error::Io { .. } => 9,
                Error::Argument(_) => 10,
                Error::UndefinedMetric(_) => 11,
                Error::Serialize(_) => 12,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(e) => write!(f, "{e}"),
            CliError::Run(e) => write!(f, "error: {e}"),
        }
    }
}

pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = Args::try_parse_from(argv).map_err(CliError::Usage)?;
    let clusters = match (args.k, args.sweep) {
        (Some(k), None) => ClusterCount::Fixed(k),
        (None, Some((a, b))) => ClusterCount::Sweep(a..=b),
        _ => unreachable!("clap enforces exactly one of --k / --sweep"),
    };
    let formats = args
        .formats
        .iter()
        .map(|f| f.parse::<OutputFormat>())
        .collect::<Result<Vec<_>, _>>()?;
    let cfg = RunConfig {
        input: args.input,
        x_col: args.x_col,
        y_col: args.y_col,
        clusters,
        k_r: args.k_r,
        theta: args.theta,
        seed: args.seed,
        out_dir: args.out,
        formats,
        queries: args.query,
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Console summary: optional sweep table, clusters, quality, then one block
/// per queried object.
pub fn summary(out: &RunOutput) -> String {
    let a = &out.analysis;
    let m = &a.model;
    let labels = cluster_labels(m.k());
    let mut s = String::new();

    if let Some(entries) = &a.sweep {
        let _ = writeln!(s, "k sweep (F0/F1, lower is better):");
        for e in entries {
            let ratio = e.quality.ratio.map_or("undefined".into(), sig6);
            let mark = if e.k == m.k() { "  <- selected" } else { "" };
            let _ = writeln!(s, "  k={:<3} ratio={ratio}{mark}", e.k);
        }
        let _ = writeln!(s);
    }

    let _ = writeln!(
        s,
        "{} objects, {} clusters on ({}, {})",
        a.view.len(),
        m.k(),
        a.view.x_name,
        a.view.y_name
    );
    if a.view.scaling.applied {
        let _ = writeln!(
            s,
            "scaled {:?} axis by {}",
            a.view.scaling.scaled_axis,
            sig6(a.view.scaling.factor)
        );
    }
    let _ = writeln!(
        s,
        "{:>3}  {:<14} {:>10} {:>10} {:>6}",
        "k", "label", "cx", "cy", "C_q"
    );
    for c in &out.report.clusters {
        let _ = writeln!(
            s,
            "{:>3}  {:<14} {:>10} {:>10} {:>6}",
            c.cluster,
            c.label,
            sig6(c.centroid.x),
            sig6(c.centroid.y),
            c.count
        );
    }
    let q = &m.quality;
    let _ = writeln!(
        s,
        "F0 = {}  F1 = {}  F0/F1 = {}",
        sig6(q.f0),
        q.f1.map_or("undefined".into(), sig6),
        q.ratio.map_or("undefined".into(), sig6)
    );

    for &obj in &out.report.config.queries {
        let Ok(p) = evaluate_membership(obj, &a.view, m, &a.radii, &a.fuzzy) else {
            continue;
        };
        let orig = a.view.to_original(p.point);
        let _ = writeln!(
            s,
            "\nobject {obj} at ({}, {}), assigned to cluster {}",
            sig6(orig.x),
            sig6(orig.y),
            p.assigned + 1
        );
        let _ = writeln!(
            s,
            "{:>3}  {:<14} {:>8} {:>8} {:>8} {:>8}",
            "k", "label", "mu_rho", "mu_x", "mu_y", "mu_xy"
        );
        for (k, c) in p.clusters.iter().enumerate() {
            let _ = writeln!(
                s,
                "{:>3}  {:<14} {:>8} {:>8} {:>8} {:>8}",
                k + 1,
                labels[k],
                sig6(c.mu_rho),
                sig6(c.mu_x),
                sig6(c.mu_y),
                sig6(c.mu_xy)
            );
        }
        let r = recommend_difficulty(&p, out.report.config.theta);
        let extra = if r.supplementary_levels.is_empty() {
            "none".to_owned()
        } else {
            r.supplementary_levels
                .iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        };
        let _ = writeln!(
            s,
            "recommended difficulty: level {} (supplementary: {extra})",
            r.primary_level
        );
    }

    if !out.written.is_empty() {
        let _ = writeln!(
            s,
            "\nwrote {} file(s) to {}",
            out.written.len(),
            out_dir(out)
        );
    }
    s
}

fn out_dir(out: &RunOutput) -> String {
    out.written
        .first()
        .and_then(|p| p.parent())
        .map_or_else(String::new, |p| p.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn argv(extra: &[&str]) -> Vec<String> {
        std::iter::once("fuzzband")
            .chain(extra.iter().copied())
            .map(str::to_owned)
            .collect()
    }

    #[test]
    fn defaults_are_filled_in() {
        let cfg = parse_args(argv(&[
            "--input",
            "d.csv",
            "--x-col",
            "math score",
            "--y-col",
            "reading score",
            "--k",
            "4",
        ]))
        .unwrap();
        assert_eq!(cfg.clusters, ClusterCount::Fixed(4));
        assert_eq!(cfg.k_r, 1.5);
        assert_eq!(cfg.theta, 0.5);
        assert_eq!(cfg.seed, 0);
        assert_eq!(cfg.x_col, "math score");
        assert_eq!(
            cfg.formats,
            vec![OutputFormat::Json, OutputFormat::Csv, OutputFormat::Svg]
        );
        assert!(cfg.queries.is_empty());
    }

    #[test]
    fn k_and_sweep_are_exclusive() {
        let err =
            parse_args(argv(&["--input", "d.csv", "--k", "4", "--sweep", "2..6"])).unwrap_err();
        assert!(matches!(err, CliError::Usage(_)));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn one_of_k_or_sweep_is_required() {
        assert!(matches!(
            parse_args(argv(&["--input", "d.csv"])),
            Err(CliError::Usage(_))
        ));
    }

    #[test]
    fn negative_radius_factor_is_rejected() {
        let err = parse_args(argv(&["--input", "d.csv", "--k", "4", "--kr", "-1"])).unwrap_err();
        assert!(matches!(err, CliError::Run(Error::Argument(_))));
    }

    #[test]
    fn unknown_flag_is_usage_error() {
        assert!(matches!(
            parse_args(argv(&["--input", "d.csv", "--k", "4", "--bogus"])),
            Err(CliError::Usage(_))
        ));
    }

    #[test]
    fn sweep_and_queries() {
        let cfg = parse_args(argv(&[
            "--input",
            "d.csv",
            "--sweep",
            "2..6",
            "--query",
            "12",
            "--query",
            "3",
            "--formats",
            "json,svg",
        ]))
        .unwrap();
        assert_eq!(cfg.clusters, ClusterCount::Sweep(2..=6));
        assert_eq!(cfg.queries, vec![12, 3]);
        assert_eq!(cfg.formats, vec![OutputFormat::Json, OutputFormat::Svg]);
    }

    #[test]
    fn bad_sweep_syntax() {
        assert!(parse_args(argv(&["--input", "d.csv", "--sweep", "2-6"])).is_err());
        assert!(parse_args(argv(&["--input", "d.csv", "--sweep", "1..6"])).is_err());
    }
}

//! `curvedepth` command line tool.
//!
//! Exit codes: 0 success, 2 usage error, 3 data error, 4 numeric failure.
//! Errors are reported as one JSON line on stderr.

use clap::{Args, Parser, Subcommand, ValueEnum};
use curvedepth::analysis::{dd_plot, outlier_partition, wilcoxon_depth_test, OutlierRule};
use curvedepth::clustering::{ddclust, Acceptance, ClusterOptions, Init};
use curvedepth::generators::{claeskens_mean, cuevas_mean, generate_spec, Scheme, SchemeSpec};
use curvedepth::io::{read_curves, write_curves, write_jsonl};
use curvedepth::point_depth::{default_delta, point_depth, DEFAULT_ALPHA};
use curvedepth::registration::{register, RegisterOptions};
use curvedepth::rng::{substream, Role};
use curvedepth::{
    curve_depth, curve_distance_matrix, curve_distance_with, depth_all_with, svg, Curve, DepthConfig, DistanceOptions,
    Error, Method, PointSample,
};
use serde_json::json;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "curvedepth", version, about = "Depth, distance, registration and clustering of curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct DepthArgs {
    /// Points drawn per curve.
    #[arg(long, default_value_t = 100)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Admissibility threshold on the query-curve mass of a halfspace.
    #[arg(long, conflicts_with = "delta_alpha")]
    delta: Option<f64>,
    /// Threshold 1 / (10 m^alpha) (default alpha 1/8).
    #[arg(long)]
    delta_alpha: Option<f64>,
    /// `exact` or `random:K`.
    #[arg(long, default_value = "exact")]
    method: String,
}

impl DepthArgs {
    fn config(&self) -> Result<DepthConfig, Error> {
        self.config_for(self.m)
    }

    fn config_for(&self, m: usize) -> Result<DepthConfig, Error> {
        if m == 0 {
            return Err(Error::Parameter("m must be at least 1".into()));
        }
        let method = parse_method(&self.method)?;
        let delta = match (self.delta, self.delta_alpha) {
            (Some(d), _) => d,
            (None, a) => default_delta(m, a.unwrap_or(DEFAULT_ALPHA)),
        };
        DepthConfig::new(delta, method)
    }
}

fn parse_method(s: &str) -> Result<Method, Error> {
    if s == "exact" {
        return Ok(Method::Exact);
    }
    if let Some(k) = s.strip_prefix("random:") {
        if let Ok(k) = k.parse::<usize>() {
            if k > 0 {
                return Ok(Method::Random(k));
            }
        }
    }
    Err(Error::Parameter(format!("method must be exact or random:K, got {s:?}")))
}

#[derive(Args, Clone)]
struct DistanceArgs {
    /// Resample curves to this many vertices equally spaced in arc length.
    #[arg(long)]
    resample: Option<usize>,
    /// Ignore traversal direction.
    #[arg(long)]
    orientation_free: bool,
}

impl DistanceArgs {
    fn options(&self) -> Result<DistanceOptions, Error> {
        if self.resample == Some(0) {
            return Err(Error::Parameter("resample count must be positive".into()));
        }
        Ok(DistanceOptions { resample: self.resample, orientation_free: self.orientation_free })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AcceptanceArg {
    Decaying,
    Verbatim,
}

#[derive(Clone, Copy, ValueEnum)]
enum InitArg {
    Medoids,
    Random,
}

#[derive(Subcommand)]
enum Command {
    /// Depth of every curve (or of each query curve) against a sample; CSV curve_id,depth.
    Depth {
        #[arg(long)]
        curves: PathBuf,
        #[arg(long)]
        query: Option<PathBuf>,
        #[command(flatten)]
        depth: DepthArgs,
        /// Score each sample curve against the others only.
        #[arg(long, conflicts_with = "query")]
        leave_one_out: bool,
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Also draw the scored curves coloured by depth.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Point depth of one point; the vertices of the files are the two point samples.
    Pointdepth {
        /// Comma-separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        /// Points standing for the query curve's measure.
        #[arg(long)]
        mu: PathBuf,
        /// Points standing for the reference measure.
        #[arg(long)]
        q: PathBuf,
        #[command(flatten)]
        depth: DepthArgs,
    },
    /// Distance between the single curves of two files.
    Distance {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[command(flatten)]
        dist: DistanceArgs,
    },
    /// Pairwise distance matrix as CSV.
    Distmatrix {
        #[arg(long)]
        curves: PathBuf,
        #[command(flatten)]
        dist: DistanceArgs,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Rigid registration of a curve onto another; JSON transform and distances.
    Register {
        #[arg(long)]
        moving: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long, default_value_t = 10)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        resample: usize,
        /// Write the moved curve here.
        #[arg(long)]
        registered: Option<PathBuf>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Depth-and-silhouette clustering; CSV curve_id,cluster (1-based).
    Cluster {
        #[arg(long)]
        curves: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0.5)]
        lambda: f64,
        /// Cost threshold below which curves may move.
        #[arg(long = "t", default_value_t = 0.0, allow_hyphen_values = true)]
        threshold: f64,
        #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
        beta0: f64,
        #[arg(long, default_value_t = 100)]
        max_iter: usize,
        /// Consecutive unchanged iterations before stopping.
        #[arg(long, default_value_t = 5)]
        patience: usize,
        #[arg(long, value_enum, default_value = "decaying")]
        acceptance: AcceptanceArg,
        #[arg(long, value_enum, default_value = "medoids")]
        init: InitArg,
        #[arg(long, default_value_t = 100)]
        resample: usize,
        #[command(flatten)]
        depth: DepthArgs,
        /// Cost report (JSON).
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// DD-plot of two samples; CSV curve_id,label,d0,d1.
    Ddplot {
        #[arg(long)]
        s0: PathBuf,
        #[arg(long)]
        s1: PathBuf,
        #[command(flatten)]
        depth: DepthArgs,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Depth-based rank-sum test; JSON {W, z, p}.
    Wilcoxon {
        #[arg(long = "ref")]
        reference: PathBuf,
        #[arg(long)]
        s0: PathBuf,
        #[arg(long)]
        s1: PathBuf,
        #[command(flatten)]
        depth: DepthArgs,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Depth-ranked groups; CSV curve_id,depth,group.
    Outliers {
        #[arg(long)]
        curves: PathBuf,
        /// Group sizes from least to most deep, e.g. 15,35,49,1.
        #[arg(long, value_delimiter = ',', conflicts_with = "threshold", required_unless_present = "threshold")]
        sizes: Option<Vec<usize>>,
        /// Curves below this depth are outliers.
        #[arg(long)]
        threshold: Option<f64>,
        #[command(flatten)]
        depth: DepthArgs,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Draw a simulated sample; JSON lines on stdout or a file chosen by extension.
    Simulate {
        #[arg(long)]
        scheme: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Append the scheme's mean curve (claeskens, cuevas).
        #[arg(long)]
        with_mean: bool,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parameter(_) | Error::Unsupported(_) => 2,
        Error::Data(_) | Error::DimensionMismatch { .. } | Error::Io(_) => 3,
        Error::Numeric(_) => 4,
    }
}

fn kind(e: &Error) -> &'static str {
    match e {
        Error::Parameter(_) | Error::Unsupported(_) => "usage",
        Error::Data(_) | Error::DimensionMismatch { .. } => "data",
        Error::Io(_) => "io",
        Error::Numeric(_) => "numeric",
    }
}

fn report_error(kind: &str, message: &str) {
    let line = json!({ "error": kind, "message": message.trim() });
    eprintln!("{line}");
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Error> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn single(path: &Path) -> Result<Curve, Error> {
    let mut c = read_curves(path)?;
    if c.len() != 1 {
        return Err(Error::Data(format!("{} must hold exactly one curve, found {}", path.display(), c.len())));
    }
    Ok(c.remove(0))
}

fn points_of(path: &Path) -> Result<PointSample, Error> {
    let curves = read_curves(path)?;
    let dim = curves[0].dim();
    let coords: Vec<f64> = curves.iter().flat_map(|c| c.coords().to_vec()).collect();
    PointSample::from_coords(dim, coords)
}

fn run(cmd: Command) -> Result<(), Error> {
    match cmd {
        Command::Depth { curves, query, depth, leave_one_out, output, svg: svg_path } => {
            let sample = read_curves(&curves)?;
            let cfg = depth.config()?;
            let (scored, depths): (Vec<Curve>, Vec<f64>) = match query {
                Some(q) => {
                    let queries = read_curves(&q)?;
                    let d = queries
                        .iter()
                        .map(|c| curve_depth(c, &sample, depth.m, &cfg, depth.seed).map(|r| r.depth))
                        .collect::<Result<Vec<_>, _>>()?;
                    (queries, d)
                }
                None => {
                    let r = depth_all_with(&sample, depth.m, &cfg, depth.seed, leave_one_out)?;
                    (sample, r.iter().map(|r| r.depth).collect())
                }
            };
            let mut text = String::from("curve_id,depth\n");
            for (c, d) in scored.iter().zip(&depths) {
                text.push_str(&format!("{},{d}\n", csv_field(c.id())));
            }
            if let Some(p) = svg_path {
                write_file(&p, &svg::depth_polylines(&scored, &depths))?;
            }
            emit(&output, &text)
        }
        Command::Pointdepth { x, mu, q, depth } => {
            let x: Vec<f64> = x
                .split(',')
                .map(|v| v.trim().parse::<f64>().map_err(|_| Error::Parameter(format!("bad coordinate {v:?}"))))
                .collect::<Result<_, _>>()?;
            let (mu, q) = (points_of(&mu)?, points_of(&q)?);
            if mu.dim() != x.len() {
                return Err(Error::DimensionMismatch { expected: mu.dim(), found: x.len() });
            }
            let cfg = depth.config_for(mu.len())?;
            let mut rng = substream(depth.seed, Role::Directions, &[]);
            let d = point_depth(&x, &mu, &q, &cfg, &mut rng)?;
            emit(&None, &format!("{d}\n"))
        }
        Command::Distance { a, b, dist } => {
            let d = curve_distance_with(&single(&a)?, &single(&b)?, &dist.options()?)?;
            emit(&None, &format!("{d}\n"))
        }
        Command::Distmatrix { curves, dist, output } => {
            let sample = read_curves(&curves)?;
            let m = curve_distance_matrix(&sample, &dist.options()?)?;
            let mut text = String::from("curve_id");
            for c in &sample {
                text.push(',');
                text.push_str(&csv_field(c.id()));
            }
            text.push('\n');
            for (c, row) in sample.iter().zip(&m) {
                text.push_str(&csv_field(c.id()));
                for v in row {
                    text.push_str(&format!(",{v}"));
                }
                text.push('\n');
            }
            emit(&output, &text)
        }
        Command::Register { moving, target, restarts, seed, resample, registered, output } => {
            if restarts == 0 || resample == 0 {
                return Err(Error::Parameter("restarts and resample must be positive".into()));
            }
            let moving = single(&moving)?;
            let target = single(&target)?;
            let opts = RegisterOptions { restarts, distance: DistanceOptions::resampled(resample), ..Default::default() };
            let r = register(&moving, &target, &opts, seed)?;
            if let Some(p) = registered {
                write_curves(&p, &[r.transform.apply(&moving)?])?;
            }
            let t = &r.transform;
            let body = json!({
                "rotation": t.rotation,
                "translation": t.translation,
                "center": t.center,
                "initial_distance": r.initial_distance,
                "distance": r.distance,
            });
            emit(&output, &format!("{body}\n"))
        }
        Command::Cluster {
            curves,
            k,
            lambda,
            threshold,
            beta0,
            max_iter,
            patience,
            acceptance,
            init,
            resample,
            depth,
            report,
            output,
        } => {
            if resample == 0 {
                return Err(Error::Parameter("resample count must be positive".into()));
            }
            let sample = read_curves(&curves)?;
            let opts = ClusterOptions {
                k,
                lambda,
                threshold,
                beta0,
                max_iter,
                patience,
                m: depth.m,
                acceptance: match acceptance {
                    AcceptanceArg::Decaying => Acceptance::Decaying,
                    AcceptanceArg::Verbatim => Acceptance::Verbatim,
                },
                init: match init {
                    InitArg::Medoids => Init::Medoids,
                    InitArg::Random => Init::Random,
                },
                distance: DistanceOptions::resampled(resample),
            };
            let p = ddclust(&sample, &opts, &depth.config()?, depth.seed)?;
            let mut text = String::from("curve_id,cluster\n");
            for (c, a) in sample.iter().zip(&p.assignment) {
                text.push_str(&format!("{},{}\n", csv_field(c.id()), a + 1));
            }
            if let Some(path) = report {
                let per_curve: Vec<_> = sample
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        json!({
                            "id": c.id(),
                            "cluster": p.assignment[i] + 1,
                            "relative_depth": p.relative_depth[i],
                            "silhouette": p.silhouette[i],
                            "cost": p.cost[i],
                        })
                    })
                    .collect();
                let body = json!({ "k": p.k, "total_cost": p.total_cost, "iterations": p.iterations, "curves": per_curve });
                write_file(&path, &format!("{body}\n"))?;
            }
            emit(&output, &text)
        }
        Command::Ddplot { s0, s1, depth, svg: svg_path, output } => {
            let (a, b) = (read_curves(&s0)?, read_curves(&s1)?);
            let pts = dd_plot(&a, &b, depth.m, &depth.config()?, depth.seed)?;
            let mut text = String::from("curve_id,label,d0,d1\n");
            for p in &pts {
                text.push_str(&format!("{},{},{},{}\n", csv_field(&p.id), p.label, p.d0, p.d1));
            }
            if let Some(path) = svg_path {
                write_file(&path, &svg::dd_scatter(&pts))?;
            }
            emit(&output, &text)
        }
        Command::Wilcoxon { reference, s0, s1, depth, output } => {
            let r = read_curves(&reference)?;
            let (a, b) = (read_curves(&s0)?, read_curves(&s1)?);
            let res = wilcoxon_depth_test(&r, &a, &b, depth.m, &depth.config()?, depth.seed)?;
            emit(&output, &format!("{}\n", json!({ "W": res.w, "z": res.z, "p": res.p })))
        }
        Command::Outliers { curves, sizes, threshold, depth, svg: svg_path, output } => {
            let sample = read_curves(&curves)?;
            let rule = match (sizes, threshold) {
                (Some(s), None) => OutlierRule::Sizes(s),
                (None, Some(t)) => OutlierRule::Threshold(t),
                _ => return Err(Error::Parameter("give exactly one of --sizes and --threshold".into())),
            };
            let reports = depth_all_with(&sample, depth.m, &depth.config()?, depth.seed, false)?;
            let part = outlier_partition(&reports, &rule)?;
            let names = ["outlier", "outer", "central", "deepest"];
            let mut text = String::from("curve_id,depth,group\n");
            for &i in &part.order {
                let g = part.group[i];
                let name = if part.sizes.len() == 4 { names[g].to_string() } else { (g + 1).to_string() };
                text.push_str(&format!("{},{},{name}\n", csv_field(sample[i].id()), reports[i].depth));
            }
            if let Some(path) = svg_path {
                let d: Vec<f64> = reports.iter().map(|r| r.depth).collect();
                write_file(&path, &svg::depth_polylines(&sample, &d))?;
            }
            emit(&output, &text)
        }
        Command::Simulate { scheme, n, seed, with_mean, output } => {
            let scheme: Scheme = scheme.parse()?;
            let mut curves = generate_spec(&SchemeSpec::new(scheme, n), seed)?;
            if with_mean {
                match scheme {
                    Scheme::Claeskens => curves.push(claeskens_mean(200)),
                    Scheme::Cuevas => curves.push(cuevas_mean(200)),
                    _ => return Err(Error::Parameter(format!("{} has no mean curve", scheme.name()))),
                }
            }
            match output {
                Some(p) => write_curves(&p, &curves),
                None => {
                    let mut buf = Vec::new();
                    write_jsonl(&mut buf, &curves)?;
                    emit(&None, &String::from_utf8(buf).expect("utf-8"))
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            report_error("usage", first);
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            report_error(kind(&e), &e.to_string());
            ExitCode::from(exit_code(&e))
        }
    }
}

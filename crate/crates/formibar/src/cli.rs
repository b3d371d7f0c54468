//! The `formibar` command line: load inputs, run the clustering pipeline,
//! compare, and render.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::base::io::{barcode_from_json, barcode_to_json, json_kind, timeline_from_json};
use crate::base::{
    block_label, validate, Barcode, DynamicDigraph, DynamicGraph, Ext, Formigram, Rat,
};
use crate::clustering::{cluster_ddg, pi0_dg, Functor};
use crate::dms::{
    dms_from_json, dms_from_trajectories, dms_to_json, drop_boundary_bars, rips_dg, Dms,
    TrajectorySet,
};
use crate::error::{Error, Result};
use crate::fixtures::three_regime_trajectories;
use crate::metrics::{
    bottleneck, interleaving_ddg_exact, interleaving_dg_exact, interleaving_dms_exact,
    interleaving_formigram_exact, stability_lower_bound,
};
use crate::reeb::{export_dot, reeb_of_formigram, reeb_to_json, ReebGraph};
use crate::smoothing::{smooth_ddg, smooth_dg, smooth_formigram};
use crate::zigzag::barcode_of_formigram;

#[derive(Parser, Debug)]
#[command(
    name = "formibar",
    version,
    about = "Clustering barcodes and interleaving distances for dynamic data"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute the clustering barcode of one input.
    Barcode(BarcodeArgs),
    /// Pairwise distance matrix of several inputs, as CSV.
    Compare(CompareArgs),
    /// Export the Reeb graph of an input over a time window.
    Reeb(ReebArgs),
    /// Write synthetic example inputs.
    Generate(GenerateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Formigram,
    Dg,
    Ddg,
    Dms,
    Trajectories,
    Barcode,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FunctorArg {
    Weak,
    Reciprocal,
    Nonreciprocal,
}

impl From<FunctorArg> for Functor {
    fn from(f: FunctorArg) -> Functor {
        match f {
            FunctorArg::Weak => Functor::Weak,
            FunctorArg::Reciprocal => Functor::Reciprocal,
            FunctorArg::Nonreciprocal => Functor::Nonreciprocal,
        }
    }
}

fn rat(s: &str) -> std::result::Result<Rat, String> {
    Rat::parse(s).map_err(|e| e.to_string())
}

fn nonneg(s: &str) -> std::result::Result<Rat, String> {
    let r = rat(s)?;
    if r.is_negative() {
        return Err(format!("`{s}` is negative"));
    }
    Ok(r)
}

/// How an input becomes a formigram.
#[derive(Args, Debug, Clone)]
pub struct Pipeline {
    /// Input kind; guessed from the `kind` field of JSON files or a `.csv` extension.
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
    /// Rips scale for metric inputs.
    #[arg(long, value_parser = nonneg)]
    pub delta: Option<Rat>,
    /// Clustering functor for dynamic digraphs.
    #[arg(long, value_enum, default_value = "weak")]
    pub functor: FunctorArg,
    /// Smooth by this amount before taking the barcode.
    #[arg(long, value_parser = nonneg)]
    pub smooth: Option<Rat>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BarcodeFormat {
    Json,
    Text,
    Svg,
}

#[derive(Args, Debug)]
pub struct BarcodeArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub pipeline: Pipeline,
    #[arg(long, value_enum, default_value = "json")]
    pub format: BarcodeFormat,
    /// Also write an SVG rendering here.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Bottleneck,
    LowerBound,
    ExactInterleaving,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[arg(required = true, num_args = 2..)]
    pub inputs: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "lower-bound")]
    pub mode: Mode,
    #[command(flatten)]
    pub pipeline: Pipeline,
    /// Slack for exact interleaving of metric inputs.
    #[arg(long, value_parser = nonneg, default_value = "0")]
    pub lambda: Rat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReebFormat {
    Dot,
    Json,
    Svg,
}

#[derive(Args, Debug)]
pub struct ReebArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub pipeline: Pipeline,
    /// Window ends; a window with A > B is empty.
    #[arg(long, num_args = 2, value_names = ["A", "B"], value_parser = rat, allow_negative_numbers = true, required = true)]
    pub window: Vec<Rat>,
    #[arg(long, value_enum, default_value = "dot")]
    pub format: ReebFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Example {
    /// Trajectory CSVs of flocking, scattered and periodically meeting groups.
    Regimes,
    /// The two sampled cosine dynamic metric spaces, as DMS JSON.
    Cosine,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(value_enum)]
    pub example: Example,
    /// Directory to write into; created if missing.
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Samples per regime.
    #[arg(long, default_value_t = 3)]
    pub per_regime: usize,
    /// Phase shift of the second cosine space.
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4)]
    pub tau: f64,
    /// Sampling step of the cosine curves is `2^-step`.
    #[arg(long, default_value_t = 8)]
    pub step: u32,
    #[arg(long, default_value_t = 3)]
    pub periods: u32,
}

/// A loaded input.
#[derive(Clone, Debug)]
pub enum Input {
    Formigram(Formigram),
    Dg(DynamicGraph),
    Ddg(DynamicDigraph),
    Dms(Dms),
    Barcode(Barcode),
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn detect(path: &Path, text: &str) -> Result<Kind> {
    if path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
    {
        return Ok(Kind::Trajectories);
    }
    match json_kind(text)?.as_deref() {
        Some("formigram") => Ok(Kind::Formigram),
        Some("dg") => Ok(Kind::Dg),
        Some("ddg") => Ok(Kind::Ddg),
        Some("dms") => Ok(Kind::Dms),
        Some("barcode") => Ok(Kind::Barcode),
        Some(k) => Err(Error::Parse(format!(
            "{}: unsupported kind `{k}`",
            path.display()
        ))),
        None => Err(Error::Parse(format!(
            "{}: no `kind` field; pass --kind",
            path.display()
        ))),
    }
}

pub fn load(path: &Path, kind: Option<Kind>) -> Result<Input> {
    let text = read(path)?;
    let kind = match kind {
        Some(k) => k,
        None => detect(path, &text)?,
    };
    let checked =
        |r: Result<Input>| r.map_err(|e| Error::Invalid(format!("{}: {e}", path.display())));
    checked(match kind {
        Kind::Formigram => timeline_from_json(&text).and_then(|t: Formigram| {
            validate(&t).into_result()?;
            Ok(Input::Formigram(t))
        }),
        Kind::Dg => timeline_from_json(&text).and_then(|t: DynamicGraph| {
            validate(&t).into_result()?;
            Ok(Input::Dg(t))
        }),
        Kind::Ddg => timeline_from_json(&text).and_then(|t: DynamicDigraph| {
            validate(&t).into_result()?;
            Ok(Input::Ddg(t))
        }),
        Kind::Dms => dms_from_json(&text).map(Input::Dms),
        Kind::Trajectories => TrajectorySet::from_csv_str(&text)
            .and_then(|t| dms_from_trajectories(&t))
            .map(Input::Dms),
        Kind::Barcode => barcode_from_json(&text).map(Input::Barcode),
    })
}

/// The formigram an input stands for under the pipeline options.
pub fn to_formigram(input: &Input, p: &Pipeline) -> Result<Formigram> {
    let f = match input {
        Input::Formigram(f) => f.clone(),
        Input::Dg(g) => pi0_dg(g)?,
        Input::Ddg(g) => cluster_ddg(g, p.functor.into())?,
        Input::Dms(d) => {
            let delta = p
                .delta
                .as_ref()
                .ok_or_else(|| Error::Precondition("metric input needs --delta".into()))?;
            pi0_dg(&rips_dg(d, delta)?)?
        }
        Input::Barcode(_) => return Err(Error::Precondition("a barcode has no formigram".into())),
    };
    match &p.smooth {
        Some(e) => smooth_formigram(&f, e),
        None => Ok(f),
    }
}

/// Barcode of an input. Windows of periodic metric spaces lose the bars cut
/// off by the window ends.
pub fn to_barcode(input: &Input, p: &Pipeline) -> Result<Barcode> {
    match input {
        Input::Barcode(b) => Ok(b.clone()),
        Input::Dms(d) if d.period.is_some() => Ok(drop_boundary_bars(&barcode_of_formigram(
            &to_formigram(input, p)?,
        )?)),
        other => barcode_of_formigram(&to_formigram(other, p)?),
    }
}

fn exact(a: &Input, b: &Input, p: &Pipeline, lambda: &Rat) -> Result<Ext> {
    let s = p.smooth.as_ref();
    match (a, b) {
        (Input::Dg(x), Input::Dg(y)) => match s {
            Some(e) => interleaving_dg_exact(&smooth_dg(x, e)?, &smooth_dg(y, e)?),
            None => interleaving_dg_exact(x, y),
        },
        (Input::Ddg(x), Input::Ddg(y)) => match s {
            Some(e) => interleaving_ddg_exact(&smooth_ddg(x, e)?, &smooth_ddg(y, e)?),
            None => interleaving_ddg_exact(x, y),
        },
        (Input::Dms(x), Input::Dms(y)) => {
            if s.is_some() {
                return Err(Error::Precondition(
                    "--smooth does not apply to metric inputs in exact mode".into(),
                ));
            }
            interleaving_dms_exact(x, y, lambda)
        }
        (Input::Barcode(_), _) | (_, Input::Barcode(_)) => Err(Error::Precondition(
            "exact interleaving needs formigrams, graphs or metric spaces".into(),
        )),
        (Input::Formigram(_), Input::Formigram(_)) => {
            interleaving_formigram_exact(&to_formigram(a, p)?, &to_formigram(b, p)?)
        }
        _ => Err(Error::Precondition(
            "exact interleaving compares inputs of the same kind".into(),
        )),
    }
}

fn name_of(path: &Path) -> String {
    path.file_stem().map_or_else(
        || path.display().to_string(),
        |s| s.to_string_lossy().into_owned(),
    )
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// The symmetric distance matrix as CSV with fraction entries.
pub fn compare(args: &CompareArgs) -> Result<String> {
    let inputs = args
        .inputs
        .iter()
        .map(|p| load(p, args.pipeline.kind))
        .collect::<Result<Vec<_>>>()?;
    let n = inputs.len();
    let barcodes: Option<Vec<Barcode>> = match args.mode {
        Mode::ExactInterleaving => None,
        _ => Some(
            inputs
                .par_iter()
                .map(|i| to_barcode(i, &args.pipeline))
                .collect::<Result<Vec<_>>>()?,
        ),
    };
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let values = pairs
        .par_iter()
        .map(|&(i, j)| {
            let d = match (&barcodes, args.mode) {
                (Some(b), Mode::Bottleneck) => Ok(bottleneck(&b[i], &b[j])),
                (Some(b), _) => Ok(stability_lower_bound(&b[i], &b[j])),
                (None, _) => exact(&inputs[i], &inputs[j], &args.pipeline, &args.lambda),
            };
            d.map_err(|e| {
                Error::Precondition(format!(
                    "pair ({}, {}): {e}",
                    args.inputs[i].display(),
                    args.inputs[j].display()
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut m = vec![vec![Ext::Fin(Rat::zero()); n]; n];
    for (&(i, j), d) in pairs.iter().zip(values) {
        m[i][j] = d.clone();
        m[j][i] = d;
    }
    let names: Vec<String> = args.inputs.iter().map(|p| csv_field(&name_of(p))).collect();
    let mut out = String::new();
    let _ = writeln!(out, ",{}", names.join(","));
    for (name, row) in names.iter().zip(&m) {
        let cells: Vec<String> = row.iter().map(Ext::to_fraction_string).collect();
        let _ = writeln!(out, "{name},{}", cells.join(","));
    }
    Ok(out)
}

pub fn barcode_text(b: &Barcode) -> String {
    b.intervals().iter().map(|iv| format!("{iv}\n")).collect()
}

fn f(x: f64) -> String {
    format!("{x:.2}")
}

/// Bars stacked top to bottom. Closed ends get square caps with a bracket,
/// open ends round caps, point bars a dot; infinite ends run to the border
/// and end in an arrowhead.
pub fn barcode_svg(b: &Barcode) -> String {
    let bars = b.intervals();
    let ends: Vec<f64> = bars
        .iter()
        .flat_map(|iv| {
            [
                iv.left.fin().map(Rat::to_f64),
                iv.right.fin().map(Rat::to_f64),
            ]
        })
        .flatten()
        .collect();
    let (lo, hi) = match (
        ends.iter().cloned().reduce(f64::min),
        ends.iter().cloned().reduce(f64::max),
    ) {
        (Some(a), Some(b)) if b > a => (a, b),
        (Some(a), _) => (a - 1.0, a + 1.0),
        _ => (-1.0, 1.0),
    };
    let pad = (hi - lo) * 0.08;
    let (lo, hi) = (lo - pad, hi + pad);
    let (width, margin, row) = (640.0, 40.0, 18.0);
    let height = 2.0 * margin + row * bars.len().max(1) as f64;
    let x = |t: f64| margin + (t - lo) / (hi - lo) * (width - 2.0 * margin);
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        f(width),
        f(height),
        f(width),
        f(height)
    );
    let _ = writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    let axis_y = height - margin / 2.0;
    let _ = writeln!(
        s,
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#888\"/>",
        f(margin),
        f(axis_y),
        f(width - margin),
        f(axis_y)
    );
    for t in [lo + pad, hi - pad] {
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" font-size=\"10\" text-anchor=\"middle\">{}</text>",
            f(x(t)),
            f(axis_y + 12.0),
            f(t)
        );
    }
    for (k, iv) in bars.iter().enumerate() {
        let y = margin + row * (k as f64 + 0.5);
        let _ = writeln!(s, "<g><title>{iv}</title>");
        let l = iv.left.fin().map_or(margin / 2.0, |v| x(v.to_f64()));
        let r = iv
            .right
            .fin()
            .map_or(width - margin / 2.0, |v| x(v.to_f64()));
        if iv.left == iv.right {
            let _ = writeln!(
                s,
                "<circle cx=\"{}\" cy=\"{}\" r=\"3.5\" fill=\"black\"/>",
                f(l),
                f(y)
            );
            let _ = writeln!(s, "</g>");
            continue;
        }
        let _ = writeln!(
            s,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" stroke-width=\"4\" stroke-linecap=\"butt\"/>",
            f(l),
            f(y),
            f(r),
            f(y)
        );
        for (end, at, closed, dir) in [
            (&iv.left, l, iv.left_closed, -1.0),
            (&iv.right, r, iv.right_closed, 1.0),
        ] {
            if !end.is_finite() {
                let _ = writeln!(
                    s,
                    "<polygon points=\"{},{} {},{} {},{}\" fill=\"black\"/>",
                    f(at + dir * 6.0),
                    f(y),
                    f(at),
                    f(y - 5.0),
                    f(at),
                    f(y + 5.0)
                );
            } else if closed {
                let _ = writeln!(
                    s,
                    "<rect x=\"{}\" y=\"{}\" width=\"4\" height=\"4\" fill=\"black\"/>",
                    f(at - 2.0 + dir * 2.0),
                    f(y - 2.0)
                );
                let _ = writeln!(
                    s,
                    "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{}</text>",
                    f(at + dir * 8.0),
                    f(y + 4.0),
                    if dir < 0.0 { '[' } else { ']' }
                );
            } else {
                let _ = writeln!(
                    s,
                    "<circle cx=\"{}\" cy=\"{}\" r=\"2\" fill=\"black\"/>",
                    f(at),
                    f(y)
                );
            }
        }
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    s
}

/// Vertices placed by time, stacked per time; edges as straight segments.
pub fn reeb_svg(r: &ReebGraph) -> String {
    let (width, margin, row) = (640.0, 40.0, 36.0);
    let per_time: Vec<usize> = r
        .times
        .iter()
        .map(|t| r.vertices.iter().filter(|v| &v.time == t).count())
        .collect();
    let rows = per_time.iter().copied().max().unwrap_or(0).max(1);
    let height = 2.0 * margin + row * rows as f64;
    let (lo, hi) = (r.window.0.to_f64(), r.window.1.to_f64());
    let span = if hi > lo { hi - lo } else { 1.0 };
    let x = |t: f64| margin + (t - lo) / span * (width - 2.0 * margin);
    let mut pos = Vec::with_capacity(r.vertices.len());
    let mut seen = vec![0usize; r.times.len()];
    for v in &r.vertices {
        let k = r.times.binary_search(&v.time).unwrap_or(0);
        pos.push((x(v.time.to_f64()), margin + row * (seen[k] as f64 + 0.5)));
        seen[k] += 1;
    }
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        f(width),
        f(height),
        f(width),
        f(height)
    );
    let _ = writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    for e in &r.edges {
        let (a, b) = (pos[e.source], pos[e.target]);
        let _ = writeln!(
            s,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"><title>{}</title></line>",
            f(a.0),
            f(a.1),
            f(b.0),
            f(b.1),
            xml_escape(&block_label(&r.universe, &e.label))
        );
    }
    for (v, p) in r.vertices.iter().zip(&pos) {
        let _ = writeln!(
            s,
            "<circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"black\"><title>t={} {}</title></circle>",
            f(p.0),
            f(p.1),
            v.time,
            xml_escape(&block_label(&r.universe, &v.label))
        );
    }
    s.push_str("</svg>\n");
    s
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn write_out(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => {
            fs::write(p, text).map_err(|e| Error::Precondition(format!("{}: {e}", p.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn reeb(args: &ReebArgs) -> Result<String> {
    let input = load(&args.input, args.pipeline.kind)?;
    let theta = to_formigram(&input, &args.pipeline)?;
    let (a, b) = (&args.window[0], &args.window[1]);
    let g = if a > b {
        ReebGraph {
            universe: theta.universe().clone(),
            window: (a.clone(), b.clone()),
            times: Vec::new(),
            vertices: Vec::new(),
            edges: Vec::new(),
            covers_all: false,
        }
    } else {
        reeb_of_formigram(&theta, a, b)?
    };
    Ok(match args.format {
        ReebFormat::Dot => export_dot(&g),
        ReebFormat::Json => reeb_to_json(&g) + "\n",
        ReebFormat::Svg => reeb_svg(&g),
    })
}

fn generate(args: &GenerateArgs) -> Result<Vec<PathBuf>> {
    let dir = &args.out_dir;
    fs::create_dir_all(dir).map_err(|e| Error::Precondition(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<(PathBuf, String)> = Vec::new();
    match args.example {
        Example::Regimes => {
            for s in three_regime_trajectories(args.seed, args.per_regime) {
                files.push((dir.join(format!("{}.csv", s.name)), s.set.to_csv()));
            }
        }
        Example::Cosine => {
            if args.periods < 3 {
                return Err(Error::Precondition(
                    "the cosine example needs at least 3 periods".into(),
                ));
            }
            let c = crate::dms::cosine_pair(args.tau, args.step, args.periods);
            files.push((dir.join("cosine0.json"), dms_to_json(&c.x0)));
            files.push((dir.join("cosine1.json"), dms_to_json(&c.x1)));
        }
    }
    for (p, text) in &files {
        fs::write(p, text).map_err(|e| Error::Precondition(format!("{}: {e}", p.display())))?;
    }
    Ok(files.into_iter().map(|f| f.0).collect())
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Barcode(a) => {
            let b = to_barcode(&load(&a.input, a.pipeline.kind)?, &a.pipeline)?;
            if let Some(p) = &a.svg {
                write_out(Some(p), &barcode_svg(&b))?;
            }
            let text = match a.format {
                BarcodeFormat::Json => barcode_to_json(&b),
                BarcodeFormat::Text => barcode_text(&b),
                BarcodeFormat::Svg => barcode_svg(&b),
            };
            write_out(a.out.as_deref(), &text)
        }
        Command::Compare(a) => write_out(a.out.as_deref(), &compare(&a)?),
        Command::Reeb(a) => write_out(a.out.as_deref(), &reeb(&a)?),
        Command::Generate(a) => {
            for p in generate(&a)? {
                eprintln!("wrote {}", p.display());
            }
            Ok(())
        }
    }
}

pub fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("formibar: {e}");
            ExitCode::FAILURE
        }
    }
}

//! Command-line front end: map loading, analyses, datasets and figures.

pub mod svg;

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use risp_dyn::analysis::{
    self, multiplier_profile, q_alpha, rim_fixed_data, rotation_belts, trace_fixed_curves, BeltReport, CurveTrace,
    MultiplierProfile, QPoly,
};
use risp_dyn::io::{self as rio, write_curves_csv, write_orbit_csv, write_orbit_jsonl, SCHEMA};
use risp_dyn::iterate::{iterate_grid, GridOptions, OrbitDataset};
use risp_dyn::roots::{all_roots, CircleRootSet, RootSet};
use risp_dyn::{catalog, tol, Risp, RispKind};

use svg::{split_at_gaps, SvgFigure};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] risp_dyn::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    /// 3 for numerical failures, 2 for everything the user can fix.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_numeric() => 3,
            _ => 2,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Debug, Parser)]
#[command(name = "risp-dyn", version, about = "Analyze and iterate rational inner skew-products on the bidisk")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Q_alpha, rotation belts, SF-points and traced fixed curves.
    Analyze,
    /// Push vertical lines forward and draw the frames.
    Iterate,
    /// |psi| of both fixed-point branches along the circle.
    BranchProfile,
    /// Fixed-point polynomials of the mapping viewed as a general map.
    RimCheck,
    /// Parse and validate the input only.
    Validate,
}

#[derive(Debug, Clone, Args)]
pub struct Opts {
    /// Map definition (JSON).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Built-in map instead of --input.
    #[arg(long, global = true, value_parser = clap::builder::PossibleValuesParser::new(catalog::IDS))]
    pub example: Option<String>,
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Samples of the circle for curve tracing.
    #[arg(long, global = true, default_value_t = tol::N_SAMPLES)]
    pub samples: usize,
    /// Iterations; defaults to the last requested frame.
    #[arg(long, global = true)]
    pub iters: Option<usize>,
    /// Vertical lines t1 = a*pi of seeds, each a in (-1, 1).
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true,
          default_value = "-0.9,-0.6,-0.3,0.3,0.6,0.9")]
    pub seed_lines: Vec<f64>,
    #[arg(long, global = true, default_value_t = 720)]
    pub points_per_line: usize,
    /// Frames to draw.
    #[arg(long, global = true, value_delimiter = ',', default_value = "1,2,3,4,5")]
    pub frames: Vec<usize>,
    /// Draw parabolic fibers and rotation belts on the frames.
    #[arg(long, global = true)]
    pub overlay_belts: bool,
    /// Also write roots.json.
    #[arg(long, global = true)]
    pub dump_roots: bool,
    #[arg(long, global = true, default_value_t = tol::TORUS)]
    pub tolerance_torus: f64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Canvas size in pixels.
    #[arg(long, global = true, default_value_t = 720)]
    pub canvas: u32,
    #[arg(long, global = true, default_value_t = 0.8)]
    pub point_radius: f64,
}

/// Validated options.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub input: Source,
    pub out: PathBuf,
    pub n_samples: usize,
    pub n_iters: usize,
    pub seed_lines: Vec<f64>,
    pub points_per_line: usize,
    pub frames: Vec<usize>,
    pub overlay_belts: bool,
    pub dump_roots: bool,
    pub tolerance_torus: f64,
    pub threads: Option<usize>,
    pub canvas: u32,
    pub point_radius: f64,
}

#[derive(Debug, Clone)]
pub enum Source {
    File(PathBuf),
    Example(String),
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self> {
        let o = &cli.opts;
        let input = match (&o.input, &o.example) {
            (Some(p), None) => Source::File(p.clone()),
            (None, Some(id)) => Source::Example(id.clone()),
            (Some(_), Some(_)) => return Err(CliError::Usage("give either --input or --example, not both".into())),
            (None, None) => return Err(CliError::Usage("an input map is required (--input or --example)".into())),
        };
        let positive = |name: &str, v: usize| {
            if v == 0 {
                Err(CliError::Usage(format!("--{name} must be positive")))
            } else {
                Ok(())
            }
        };
        positive("samples", o.samples)?;
        positive("points-per-line", o.points_per_line)?;
        if let Some(t) = o.threads {
            positive("threads", t)?;
        }
        if o.canvas < 100 {
            return Err(CliError::Usage("--canvas must be at least 100".into()));
        }
        if !(o.point_radius > 0.0 && o.point_radius.is_finite()) {
            return Err(CliError::Usage("--point-radius must be positive".into()));
        }
        if !(o.tolerance_torus > 0.0 && o.tolerance_torus < 1.0) {
            return Err(CliError::Usage("--tolerance-torus must lie in (0, 1)".into()));
        }
        if let Some(a) = o.seed_lines.iter().find(|a| !(a.abs() < 1.0)) {
            return Err(CliError::Usage(format!("seed line {a} is outside (-1, 1)")));
        }
        if o.seed_lines.is_empty() {
            return Err(CliError::Usage("--seed-lines is empty".into()));
        }
        let mut frames = o.frames.clone();
        frames.sort_unstable();
        frames.dedup();
        if frames.first() == Some(&0) {
            return Err(CliError::Usage("frames are numbered from 1".into()));
        }
        let last = frames.last().copied().unwrap_or(1);
        let n_iters = o.iters.unwrap_or(last);
        positive("iters", n_iters)?;
        if n_iters < last {
            return Err(CliError::Usage(format!("--iters {n_iters} is below the last frame {last}")));
        }
        Ok(RunConfig {
            command: cli.command,
            input,
            out: o.out.clone(),
            n_samples: o.samples,
            n_iters,
            seed_lines: o.seed_lines.clone(),
            points_per_line: o.points_per_line,
            frames,
            overlay_belts: o.overlay_belts,
            dump_roots: o.dump_roots,
            tolerance_torus: o.tolerance_torus,
            threads: o.threads,
            canvas: o.canvas,
            point_radius: o.point_radius,
        })
    }
}

/// Loads the map and its id.
pub fn load(source: &Source) -> Result<(String, Risp)> {
    match source {
        Source::Example(id) => catalog::by_id(id)
            .map(|r| (id.clone(), r))
            .ok_or_else(|| CliError::Usage(format!("unknown example {id}"))),
        Source::File(path) => {
            let text = fs::read_to_string(path).map_err(io_err(path))?;
            let (id, r) = rio::load_risp(&text)?;
            let id = id.unwrap_or_else(|| {
                path.file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| "map".into())
            });
            Ok((id, r))
        }
    }
}

/// Files produced by a command, written together at the end.
#[derive(Default)]
pub struct Outputs {
    files: Vec<(String, Vec<u8>)>,
}

impl Outputs {
    pub fn add(&mut self, name: impl Into<String>, bytes: impl Into<Vec<u8>>) {
        self.files.push((name.into(), bytes.into()));
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut s = serde_json::to_string_pretty(value).map_err(risp_dyn::Error::from)?;
        s.push('\n');
        self.add(name, s);
        Ok(())
    }

    pub fn names(&self) -> Vec<&str> {
        self.files.iter().map(|(n, _)| n.as_str()).collect()
    }

    /// Writes into a staging directory, then renames each file into `dir`.
    pub fn commit(self, dir: &Path) -> Result<()> {
        let parent = match dir.parent() {
            Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
            _ => PathBuf::from("."),
        };
        let name = dir.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into());
        let staging = parent.join(format!(".{name}.staging-{}", std::process::id()));
        fs::create_dir_all(&staging).map_err(io_err(&staging))?;
        let result = (|| {
            for (n, bytes) in &self.files {
                let p = staging.join(n);
                fs::write(&p, bytes).map_err(io_err(&p))?;
            }
            fs::create_dir_all(dir).map_err(io_err(dir))?;
            for (n, _) in &self.files {
                let to = dir.join(n);
                fs::rename(staging.join(n), &to).map_err(io_err(&to))?;
            }
            Ok(())
        })();
        let _ = fs::remove_dir_all(&staging);
        result
    }
}

/// Runs a command; outputs are returned in memory and written by [`run`].
pub fn execute(cfg: &RunConfig) -> Result<Outputs> {
    let (id, map) = load(&cfg.input)?;
    let mut out = Outputs::default();
    match cfg.command {
        Command::Validate => {
            out.json("validate.json", &validate_summary(&id, &map))?;
        }
        Command::Analyze => analyze(cfg, &id, &map, &mut out)?,
        Command::Iterate => iterate(cfg, &id, &map, &mut out)?,
        Command::BranchProfile => branch_profile(cfg, &id, &map, &mut out)?,
        Command::RimCheck => rim_check(&id, &map, &mut out)?,
    }
    Ok(out)
}

pub fn run(cfg: &RunConfig) -> Result<Vec<String>> {
    let work = || -> Result<Vec<String>> {
        let outputs = execute(cfg)?;
        let names = outputs.names().iter().map(|s| s.to_string()).collect();
        outputs.commit(&cfg.out)?;
        Ok(names)
    };
    match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    }
}

#[derive(Serialize)]
struct ValidateSummary<'a> {
    schema: &'a str,
    map_id: &'a str,
    kind: RispKind,
    bidegree: (usize, usize),
    alpha: f64,
    beta: (usize, usize),
    lambda_flat: Option<&'a CircleRootSet>,
    lambda_sharp: Option<&'a CircleRootSet>,
}

fn validate_summary<'a>(id: &'a str, map: &'a Risp) -> ValidateSummary<'a> {
    let f = map.fibers().ok();
    ValidateSummary {
        schema: SCHEMA,
        map_id: id,
        kind: map.kind(),
        bidegree: map.phi().bidegree(),
        alpha: map.alpha(),
        beta: map.phi().beta(),
        lambda_flat: f.map(|f| &f.lambda_flat),
        lambda_sharp: f.map(|f| &f.lambda_sharp),
    }
}

fn require_simple(map: &Risp, what: &str) -> Result<()> {
    if map.kind() == RispKind::Simple {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "{what} needs a simple skew-product; {:?} maps support iterate and rim-check only",
            map.kind()
        )))
    }
}

#[derive(Serialize)]
struct QAlphaFile<'a> {
    schema: &'a str,
    map_id: &'a str,
    alpha: f64,
    #[serde(flatten)]
    q: &'a QPoly,
    symmetry_defect: f64,
    lambda_flat: &'a CircleRootSet,
    lambda_sharp: &'a CircleRootSet,
}

#[derive(Serialize)]
struct BeltsFile<'a> {
    schema: &'a str,
    map_id: &'a str,
    q_identically_zero: bool,
    #[serde(flatten)]
    report: &'a BeltReport,
}

#[derive(Serialize)]
struct SfFile<'a> {
    schema: &'a str,
    map_id: &'a str,
    sf_points: &'a [risp_dyn::rif::SfPoint],
}

#[derive(Serialize)]
struct MultipliersFile<'a> {
    schema: &'a str,
    map_id: &'a str,
    profiles: &'a [MultiplierProfile],
}

#[derive(Serialize)]
struct RootsFile<'a> {
    schema: &'a str,
    map_id: &'a str,
    q_alpha: Option<RootSet>,
    degeneracy: RootSet,
    p2: Option<RootSet>,
}

fn analyze(cfg: &RunConfig, id: &str, map: &Risp, out: &mut Outputs) -> Result<()> {
    require_simple(map, "analyze")?;
    let f = map.fibers()?;
    let n = map.phi().bidegree().1;
    let q = q_alpha(map)?;
    out.json(
        "qalpha.json",
        &QAlphaFile {
            schema: SCHEMA,
            map_id: id,
            alpha: map.alpha(),
            q: &q,
            symmetry_defect: q.symmetry_defect(map.alpha(), n),
            lambda_flat: &f.lambda_flat,
            lambda_sharp: &f.lambda_sharp,
        },
    )?;

    let (report, trace) = if q.is_identically_zero {
        let report = BeltReport {
            belts: Vec::new(),
            qa_circle_root_count_excl_flat: 0,
            bound: 0,
            bound_satisfied: true,
            notes: vec![
                "Q_alpha vanishes identically: every fiber is parabolic or collapsing, so there are no belts and the fixed set is a union of lines"
                    .into(),
            ],
        };
        (report, None)
    } else {
        (rotation_belts(map)?, Some(trace_fixed_curves(map, cfg.n_samples)?))
    };
    out.json(
        "belts.json",
        &BeltsFile {
            schema: SCHEMA,
            map_id: id,
            q_identically_zero: q.is_identically_zero,
            report: &report,
        },
    )?;

    let sf = map.sf_points()?;
    out.json(
        "sfpoints.json",
        &SfFile {
            schema: SCHEMA,
            map_id: id,
            sf_points: &sf,
        },
    )?;

    let mut csv = Vec::new();
    write_curves_csv(trace.as_ref(), &mut csv).map_err(io_err(Path::new("curves.csv")))?;
    out.add("curves.csv", csv);

    let profiles = match &trace {
        Some(t) => t
            .branches
            .iter()
            .map(|b| multiplier_profile(map, b))
            .collect::<risp_dyn::Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    out.json(
        "multipliers.json",
        &MultipliersFile {
            schema: SCHEMA,
            map_id: id,
            profiles: &profiles,
        },
    )?;

    if cfg.dump_roots {
        let roots = RootsFile {
            schema: SCHEMA,
            map_id: id,
            q_alpha: if q.is_identically_zero || q.q.degree() == Some(0) {
                None
            } else {
                Some(all_roots(&q.q)?)
            },
            degeneracy: all_roots(&f.degeneracy)?,
            p2: if f.p2.degree().unwrap_or(0) == 0 {
                None
            } else {
                Some(all_roots(&f.p2)?)
            },
        };
        out.json("roots.json", &roots)?;
    }
    Ok(())
}

const FRAME_COLORS: [&str; 6] = ["#1f4e9c", "#c0392b", "#1e8449", "#7d3c98", "#b9770e", "#117a65"];
const FLAG_COLOR: &str = "#888888";
const PARABOLIC_COLOR: &str = "#ff69b4";

struct Overlay {
    parabolic: Vec<f64>,
    belts: Vec<(f64, f64)>,
    curves: Option<CurveTrace>,
}

fn overlay(cfg: &RunConfig, map: &Risp) -> Result<Option<Overlay>> {
    if !cfg.overlay_belts {
        return Ok(None);
    }
    if map.kind() != RispKind::Simple {
        eprintln!("note: --overlay-belts ignored for {:?} maps (iteration only)", map.kind());
        return Ok(None);
    }
    let q = q_alpha(map)?;
    if q.is_identically_zero {
        return Ok(Some(Overlay {
            parabolic: Vec::new(),
            belts: Vec::new(),
            curves: None,
        }));
    }
    let flat = &map.fibers()?.lambda_flat;
    let parabolic = q
        .circle_roots
        .angles
        .iter()
        .filter(|c| !flat.contains_angle(c.angle, 1e-7))
        .map(|c| c.angle)
        .collect();
    let belts = rotation_belts(map)?.belts.iter().map(|b| (b.start_angle, b.end_angle)).collect();
    let curves = Some(trace_fixed_curves(map, cfg.n_samples)?);
    Ok(Some(Overlay {
        parabolic,
        belts,
        curves,
    }))
}

fn render_frame(cfg: &RunConfig, id: &str, ds: &OrbitDataset, k: usize, ov: Option<&Overlay>) -> String {
    let mut fig = SvgFigure::torus(cfg.canvas).title(format!("{id}: iterate {k}"));
    if let Some(ov) = ov {
        for &(a, b) in &ov.belts {
            if a < b {
                fig.band(a, b, "#f4c2d7", 0.35);
            } else {
                fig.band(a, PI, "#f4c2d7", 0.35);
                fig.band(-PI, b, "#f4c2d7", 0.35);
            }
        }
        if let Some(tr) = &ov.curves {
            for b in &tr.branches {
                let pts: Vec<(f64, f64)> = b
                    .samples
                    .iter()
                    .filter(|s| s.on_torus)
                    .map(|s| (s.z1.arg(), s.lambda_angle))
                    .collect();
                fig.points(pts, 0.6, "#000000");
            }
        }
        for &t in &ov.parabolic {
            fig.hline(t, 1.5, PARABOLIC_COLOR);
        }
    }
    let frame = &ds.frames[k - 1];
    let flags = &ds.flags[k - 1];
    let per_line = cfg.points_per_line;
    for (line, chunk) in frame.chunks(per_line).enumerate() {
        let fl = &flags[line * per_line..line * per_line + chunk.len()];
        let ok: Vec<(f64, f64)> = chunk.iter().zip(fl).filter(|(_, f)| !**f).map(|(p, _)| *p).collect();
        fig.points(ok, cfg.point_radius, FRAME_COLORS[line % FRAME_COLORS.len()]);
    }
    let bad: Vec<(f64, f64)> = frame.iter().zip(flags).filter(|(_, f)| **f).map(|(p, _)| *p).collect();
    fig.points(bad, cfg.point_radius, FLAG_COLOR);
    fig.render()
}

fn iterate(cfg: &RunConfig, id: &str, map: &Risp, out: &mut Outputs) -> Result<()> {
    let opts = GridOptions {
        torus_tolerance: cfg.tolerance_torus,
        keep_raw: false,
    };
    let ds = iterate_grid(map, id, &cfg.seed_lines, cfg.points_per_line, cfg.n_iters, opts)?;
    let mut jsonl = Vec::new();
    write_orbit_jsonl(&ds, &mut jsonl).map_err(io_err(Path::new("orbit.jsonl")))?;
    out.add("orbit.jsonl", jsonl);
    let mut csv = Vec::new();
    write_orbit_csv(&ds, &mut csv).map_err(io_err(Path::new("orbit.csv")))?;
    out.add("orbit.csv", csv);

    let ov = overlay(cfg, map)?;
    let svgs: Vec<(usize, String)> = cfg
        .frames
        .par_iter()
        .map(|&k| (k, render_frame(cfg, id, &ds, k, ov.as_ref())))
        .collect();
    for (k, s) in svgs {
        out.add(format!("frame_{k}.svg"), s);
    }
    Ok(())
}

fn branch_profile(cfg: &RunConfig, id: &str, map: &Risp, out: &mut Outputs) -> Result<()> {
    require_simple(map, "branch-profile")?;
    let tr = analysis::trace_fixed_curves(map, cfg.n_samples)?;
    let mut csv = String::from("t2,abs_psi1,abs_psi2\n");
    for &(t, a, b) in &tr.modulus_profile {
        csv.push_str(&format!("{t:?},{a:?},{b:?}\n"));
    }
    out.add("psi_modulus.csv", csv);

    let y_max = 3.0;
    let mut fig = SvgFigure::new(cfg.canvas, (-PI, PI), (0.0, y_max))
        .title(format!("{id}: |psi1|, |psi2| on the circle"))
        .labels("t2", "|psi|")
        .pi_x_ticks()
        .y_ticks((0..=3).map(|k| (k as f64, k.to_string())).collect());
    fig.dashed(vec![(-PI, 1.0), (PI, 1.0)], 1.0, "#999999");
    for &t in &tr.branch_events {
        fig.dashed(vec![(t, 0.0), (t, y_max)], 1.0, PARABOLIC_COLOR);
    }
    let gap = 1.5 * std::f64::consts::TAU / cfg.n_samples as f64;
    for (sel, color) in [(1usize, "#1f4e9c"), (2, "#c0392b")] {
        let pts: Vec<(f64, f64)> = tr
            .modulus_profile
            .iter()
            .map(|&(t, a, b)| (t, if sel == 1 { a } else { b }))
            .collect();
        for run in split_at_gaps(&pts, gap) {
            fig.polyline(run, 1.5, color);
        }
    }
    out.add("psi_modulus.svg", fig.render());
    Ok(())
}

#[derive(Serialize)]
struct RimFile<'a> {
    schema: &'a str,
    map_id: &'a str,
    p1_poly: risp_dyn::poly::BiPolyJson,
    p2_poly: risp_dyn::poly::BiPolyJson,
    #[serde(flatten)]
    data: &'a analysis::RimFixedData,
}

fn rim_check(id: &str, map: &Risp, out: &mut Outputs) -> Result<()> {
    let identity = catalog::identity_z2();
    let second = map.second().unwrap_or(&identity);
    let data = rim_fixed_data(map.phi(), second)?;
    out.json(
        "rim.json",
        &RimFile {
            schema: SCHEMA,
            map_id: id,
            p1_poly: data.p1.to_json(),
            p2_poly: data.p2.to_json(),
            data: &data,
        },
    )
}

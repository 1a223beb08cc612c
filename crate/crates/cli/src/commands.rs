use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Serialize, Serializer};

use ptperm::invariance::{
    run_antidiagonal_sequence, run_lemma, run_pair, run_sequence, run_unitary, search_3mode_with,
    InvarianceReport, Search3Report, DEFAULT_REARRANGEMENTS,
};
use ptperm::{
    compose_geometry, extract_features, perm2, two_photon, visibility_curves, visibility_map,
    visibility_partial, AxisRange, CouplerParams, Cplx, CurveSet, Features, Geometry,
    VisibilityGrid, DEFAULT_KAPPA, DEFAULT_TOL,
};

use crate::error::CliError;
use crate::manifest::RunManifest;
use crate::svg;

#[derive(Debug, Parser)]
#[command(
    name = "ptperm",
    version,
    about = "Two-photon interference in passive PT couplers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
#[allow(clippy::large_enum_variant)]
pub enum Command {
    /// Transfer matrix and two-photon statistics of one geometry.
    #[command(args_override_self = true)]
    Simulate(SimulateArgs),
    /// Visibility map over (κl, γ/κ) or visibility curves over length.
    #[command(args_override_self = true)]
    Sweep(SweepArgs),
    /// Seeded property run of a permanent-invariance statement.
    #[command(args_override_self = true)]
    Invariance(InvarianceArgs),
    /// Three-mode order-invariance search.
    #[command(args_override_self = true)]
    Search3(Search3Args),
}

/// One geometry or all four.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeometrySel {
    One(Geometry),
    Each,
}

impl GeometrySel {
    fn list(self) -> Vec<Geometry> {
        match self {
            GeometrySel::One(g) => vec![g],
            GeometrySel::Each => Geometry::ALL.to_vec(),
        }
    }
}

impl FromStr for GeometrySel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "each" {
            return Ok(GeometrySel::Each);
        }
        s.parse()
            .map(GeometrySel::One)
            .map_err(|e: ptperm::Error| format!("{e}; expected m-xmtx, m-mt, mt-m, xmtx-m or each"))
    }
}

impl Serialize for GeometrySel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            GeometrySel::One(g) => s.serialize_str(g.name()),
            GeometrySel::Each => s.serialize_str("each"),
        }
    }
}

fn parse_geometry(s: &str) -> Result<Geometry, String> {
    s.parse().map_err(|e: ptperm::Error| e.to_string())
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    #[arg(long, value_parser = parse_geometry)]
    pub geometry: Geometry,
    #[arg(long)]
    pub kappa: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma_re: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub gamma_im: f64,
    #[arg(long)]
    pub length: f64,
    #[arg(long, default_value_t = 1.0)]
    pub indist: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    /// A geometry name, or `each` for all four.
    #[arg(long)]
    pub geometry: GeometrySel,
    /// Coupling constant for curve mode.
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub kl_min: Option<f64>,
    #[arg(long)]
    pub kl_max: Option<f64>,
    #[arg(long)]
    pub kl_steps: Option<usize>,
    #[arg(long)]
    pub gok_min: Option<f64>,
    #[arg(long)]
    pub gok_max: Option<f64>,
    #[arg(long)]
    pub gok_steps: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub gok_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gok_im: Option<f64>,
    #[arg(long)]
    pub len_min: Option<f64>,
    #[arg(long)]
    pub len_max: Option<f64>,
    #[arg(long)]
    pub len_steps: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    pub indist: f64,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InvarianceMode {
    Pair,
    Sequence,
    Lemma,
    Unitary,
    AntidiagSeq,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct InvarianceArgs {
    #[arg(long, value_enum)]
    pub mode: InvarianceMode,
    #[arg(long)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Longest sequence for the sequence modes.
    #[arg(long, default_value_t = 10)]
    pub max_len: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Search3Args {
    #[arg(long)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Non-PMP arrangements drawn per trial.
    #[arg(long, default_value_t = DEFAULT_REARRANGEMENTS)]
    pub rearrangements: usize,
}

pub(crate) fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Simulate(a) => simulate(&a, out),
        Command::Sweep(a) => sweep(&a),
        Command::Invariance(a) => invariance(&a, out),
        Command::Search3(a) => search3(&a, out),
    }
}

fn emit<T: Serialize>(value: &T, out: &mut dyn Write) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::Io(format!("cannot write output: {e}")))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

#[derive(Serialize)]
struct SimulateOutput {
    geometry: Geometry,
    kappa: f64,
    gamma: Cplx,
    length: f64,
    indistinguishability: f64,
    /// Row-major `[re, im]` pairs.
    matrix: [[Cplx; 2]; 2],
    perm: Cplx,
    p_indist: f64,
    p_dist: f64,
    visibility: Option<f64>,
    visibility_partial: Option<f64>,
    manifest: RunManifest,
}

fn simulate(a: &SimulateArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let gamma = Cplx::new(a.gamma_re, a.gamma_im);
    let p = CouplerParams::new(a.kappa, gamma, a.length)?;
    let t = compose_geometry(a.geometry, &p);
    let stats = two_photon(&t);
    let report = SimulateOutput {
        geometry: a.geometry,
        kappa: a.kappa,
        gamma,
        length: a.length,
        indistinguishability: a.indist,
        matrix: [[t.m11, t.m12], [t.m21, t.m22]],
        perm: perm2(&t),
        p_indist: stats.p_indist,
        p_dist: stats.p_dist,
        visibility: stats.visibility,
        visibility_partial: visibility_partial(&t, a.indist)?,
        manifest: RunManifest::new("simulate", a, None)?,
    };
    emit(&report, out)?;
    Ok(crate::EXIT_OK)
}

fn fmt_value(v: Option<f64>) -> String {
    v.map_or_else(|| "nan".to_string(), |x| x.to_string())
}

fn axis(min: Option<f64>, max: Option<f64>, steps: Option<usize>, default: AxisRange) -> AxisRange {
    AxisRange {
        min: min.unwrap_or(default.min),
        max: max.unwrap_or(default.max),
        steps: steps.unwrap_or(default.steps),
    }
}

#[derive(Serialize)]
struct MapOutput<'a> {
    grids: &'a [VisibilityGrid],
    manifest: &'a RunManifest,
}

#[derive(Serialize)]
struct CurveFeatures {
    geometry: Geometry,
    features: Option<Features>,
}

#[derive(Serialize)]
struct CurveOutput<'a> {
    curves: &'a CurveSet,
    features: Vec<CurveFeatures>,
    manifest: &'a RunManifest,
}

fn sweep(a: &SweepArgs) -> Result<i32, CliError> {
    let curve_mode = a.gok_re.is_some()
        || a.gok_im.is_some()
        || a.len_min.is_some()
        || a.len_max.is_some()
        || a.len_steps.is_some();
    let map_flags = [a.kl_min, a.kl_max, a.gok_min, a.gok_max]
        .iter()
        .any(Option::is_some)
        || a.kl_steps.is_some()
        || a.gok_steps.is_some();
    if curve_mode && map_flags {
        return Err(CliError::Usage(
            "map flags (--kl-*, --gok-min/max/steps) and curve flags (--gok-re/im, --len-*) are exclusive"
                .into(),
        ));
    }
    if !curve_mode && a.kappa.is_some() {
        return Err(CliError::Usage(
            "--kappa applies to curve mode only; maps use κ = 1".into(),
        ));
    }
    let manifest = RunManifest::new("sweep", a, None)?;
    let geometries = a.geometry.list();
    let each = a.geometry == GeometrySel::Each;

    let (csv, svg_text, json) = if curve_mode {
        let len = axis(
            a.len_min,
            a.len_max,
            a.len_steps,
            AxisRange {
                min: 0.0,
                max: 8.0,
                steps: 400,
            },
        );
        len.validate()?;
        let lengths = len.values();
        let gok = Cplx::new(a.gok_re.unwrap_or(0.0), a.gok_im.unwrap_or(0.0));
        let kappa = a.kappa.unwrap_or(DEFAULT_KAPPA);
        let set = visibility_curves(&geometries, kappa, gok, &lengths, a.indist)?;

        let mut csv = manifest.csv_header()?;
        csv.push_str(if each {
            "length,visibility,geometry\n"
        } else {
            "length,visibility\n"
        });
        for (g, values) in set.configs.iter().zip(&set.values) {
            for (l, v) in lengths.iter().zip(values) {
                let _ = write!(csv, "{l},{}", fmt_value(*v));
                if each {
                    let _ = write!(csv, ",{g}");
                }
                csv.push('\n');
            }
        }
        let features = set
            .configs
            .iter()
            .zip(&set.values)
            .map(|(g, v)| CurveFeatures {
                geometry: *g,
                features: extract_features(&lengths, v).ok(),
            })
            .collect();
        let json = serde_json::to_string_pretty(&CurveOutput {
            curves: &set,
            features,
            manifest: &manifest,
        })?;
        (csv, svg::curves(&set), json)
    } else {
        let kl = axis(
            a.kl_min,
            a.kl_max,
            a.kl_steps,
            AxisRange {
                min: 0.0,
                max: 2.0 * std::f64::consts::PI,
                steps: 400,
            },
        );
        let gok = axis(
            a.gok_min,
            a.gok_max,
            a.gok_steps,
            AxisRange {
                min: 0.0,
                max: 4.0,
                steps: 400,
            },
        );
        let grids = geometries
            .iter()
            .map(|&g| visibility_map(g, kl, gok, a.indist))
            .collect::<ptperm::Result<Vec<_>>>()?;

        let mut csv = manifest.csv_header()?;
        csv.push_str(if each {
            "kl,gok_re,gok_im,visibility,geometry\n"
        } else {
            "kl,gok_re,gok_im,visibility\n"
        });
        for grid in &grids {
            let n = grid.kl_axis.len();
            for (idx, v) in grid.values.iter().enumerate() {
                let g = grid.gok_axis[idx / n];
                let _ = write!(
                    csv,
                    "{},{},{},{}",
                    grid.kl_axis[idx % n],
                    g.re,
                    g.im,
                    fmt_value(*v)
                );
                if each {
                    let _ = write!(csv, ",{}", grid.config);
                }
                csv.push('\n');
            }
        }
        let json = serde_json::to_string_pretty(&MapOutput {
            grids: &grids,
            manifest: &manifest,
        })?;
        (csv, svg::heatmaps(&grids), json)
    };

    write_file(&a.out, &csv)?;
    if let Some(p) = &a.svg {
        write_file(p, &svg_text)?;
    }
    if let Some(p) = &a.json {
        write_file(p, &(json + "\n"))?;
    }
    Ok(crate::EXIT_OK)
}

#[derive(Serialize)]
struct InvarianceOutput {
    passed: bool,
    report: InvarianceReport,
    manifest: RunManifest,
}

fn invariance(a: &InvarianceArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let report = match a.mode {
        InvarianceMode::Pair => run_pair(a.trials, a.seed, a.tol),
        InvarianceMode::Sequence => run_sequence(a.trials, a.max_len, a.seed, a.tol),
        InvarianceMode::Lemma => run_lemma(a.trials, a.seed, a.tol),
        InvarianceMode::Unitary => run_unitary(a.trials, a.seed, a.tol),
        InvarianceMode::AntidiagSeq => {
            run_antidiagonal_sequence(a.trials, a.max_len, a.seed, a.tol)
        }
    }?;
    let passed = report.passed();
    emit(
        &InvarianceOutput {
            passed,
            report,
            manifest: RunManifest::new("invariance", a, Some(a.seed))?,
        },
        out,
    )?;
    Ok(if passed {
        crate::EXIT_OK
    } else {
        crate::EXIT_PROPERTY
    })
}

#[derive(Serialize)]
struct Search3Output {
    passed: bool,
    report: Search3Report,
    manifest: RunManifest,
}

fn search3(a: &Search3Args, out: &mut dyn Write) -> Result<i32, CliError> {
    let report = search_3mode_with(a.trials, a.seed, a.tol, a.rearrangements)?;
    let passed = report.pmp.passed();
    emit(
        &Search3Output {
            passed,
            report,
            manifest: RunManifest::new("search3", a, Some(a.seed))?,
        },
        out,
    )?;
    Ok(if passed {
        crate::EXIT_OK
    } else {
        crate::EXIT_PROPERTY
    })
}

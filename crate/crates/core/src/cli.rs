//! Command-line driver. Every subcommand reads a JSON state file (or flags) and writes JSON or CSV.
//!
//! Exit codes: 0 success, 1 domain error, 2 usage error (bad flags, unreadable or malformed input).

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::catalysis::{
    c_plus_vertices, catalytic_condition, dim_bound, qubit_window, search_qubit_catalyst, CatalysableRegions,
    TangentSide,
};
use crate::cones::{future_cone_vertices, ConeVertices};
use crate::cooling::{critical_hot_beta, linearised_critical_beta, m_index, optimal_cooling, Boundary};
use crate::curve::{beta_order, compare, tm_curve, Relation};
use crate::embedding::oracle_check;
use crate::entanglement::{entanglement_report, volume_ratio_cn_tn, TwoQubitConfig, DEFAULT_CN_SAMPLES};
use crate::error::Error;
use crate::io::{csv_num, to_csv, to_json, StateFile};
use crate::state::{Dist, EnergySpectrum};
use crate::volume::{isovolume_grid, mc_volume, Region, DEFAULT_SAMPLES};

pub const DEFAULT_SEED: u64 = 20_240_917;
pub const THREADS_ENV: &str = "THERMOCONE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "thermocone", version, about = "Thermal cones and catalysable regions of energy-incoherent states")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Seed for every Monte-Carlo estimate.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Monte-Carlo sample count (subcommand default when omitted).
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Overrides the inverse temperature of the input file.
    #[arg(long, global = true)]
    pub beta: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct InputArg {
    /// JSON state file.
    #[arg(long, short)]
    pub input: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Beta-order, slopes and elbows of the thermomajorisation curve.
    Curve(InputArg),
    /// Relation between `state` and `target`.
    Compare(InputArg),
    /// Extreme points of the future thermal cone.
    Cone {
        #[command(flatten)]
        input: InputArg,
        /// Extreme points of the future cone joined with the catalysable future instead.
        #[arg(long)]
        catalytic: bool,
    },
    /// Membership of `target` in the catalysable regions of `state`.
    Catalysable(InputArg),
    /// Catalyst dimension bound for an incomparable pair.
    Dimbound(InputArg),
    /// Admissible populations of a qubit catalyst.
    QubitWindow {
        #[command(flatten)]
        input: InputArg,
        /// Excited Gibbs weight of the catalyst (file value, else 1/2).
        #[arg(long)]
        gibbs_r: Option<f64>,
    },
    /// Grid search for qubit catalysts.
    SearchCatalyst {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, default_value_t = 200)]
        grid: usize,
        #[arg(long)]
        gibbs_r: Option<f64>,
    },
    /// Curve comparison against classical majorisation of the rational embedding.
    OracleCheck {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, default_value_t = 1000)]
        max_denominator: u64,
    },
    /// Monte-Carlo relative volume of a region.
    Volume {
        #[command(flatten)]
        input: InputArg,
        /// One of C+, C-, T+, T-, T0.
        #[arg(long, default_value = "C+", allow_hyphen_values = true)]
        region: String,
    },
    /// Catalysable-future volume over a grid of qutrit states.
    Isovolume {
        /// File providing energies and beta; the state field is ignored.
        #[arg(long, short)]
        input: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.0, 1.0, 2.0])]
        energies: Vec<f64>,
        #[arg(long, default_value_t = 20)]
        resolution: usize,
    },
    /// Entanglability report for a two-qubit state.
    Entangle(InputArg),
    /// Volumes of the non-entanglable sets over inverse temperatures.
    EntangleVolumes {
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.0, 0.25, 0.5, 1.0, 2.0])]
        betas: Vec<f64>,
    },
    /// Optimal heat extraction with and without a catalyst.
    Cooling(InputArg),
    /// Critical hot inverse temperatures of an equidistant ladder.
    CoolingCritical {
        #[arg(long, value_delimiter = ',', default_values_t = vec![3, 4, 5])]
        dims: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.5, 1.0, 2.0])]
        betas: Vec<f64>,
        /// Closed-form small-beta approximations instead of bisection.
        #[arg(long)]
        linearised: bool,
        /// Level index of the population bound.
        #[arg(long, default_value_t = 1)]
        j: usize,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn load(path: &PathBuf) -> Outcome<StateFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    StateFile::parse(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

struct Loaded {
    spec: EnergySpectrum,
    state: Dist,
    target: Option<Dist>,
    catalyst_gibbs: Option<f64>,
}

impl Loaded {
    fn target(&self) -> Outcome<&Dist> {
        self.target.as_ref().ok_or_else(|| Failure::Usage("input is missing the `target` field".into()))
    }
}

fn load_state(input: &InputArg, g: &GlobalOpts) -> Outcome<Loaded> {
    let f = load(&input.input)?;
    let raw = f.state.clone().ok_or_else(|| Failure::Usage("input is missing the `state` field".into()))?;
    let spec = f.spectrum(g.beta)?;
    let state = Dist::new(raw)?;
    spec.check_dim(state.len())?;
    let target = f.target.clone().map(Dist::new).transpose()?;
    if let Some(t) = &target {
        spec.check_dim(t.len())?;
    }
    Ok(Loaded { spec, state, target, catalyst_gibbs: f.catalyst_gibbs })
}

#[derive(Serialize)]
struct CurveOut {
    order: crate::state::Permutation,
    slopes: Vec<f64>,
    elbows: crate::curve::TMCurve,
}

#[derive(Serialize)]
struct CompareOut {
    relation: Relation,
}

#[derive(Serialize)]
struct VertexOut<'a> {
    order: &'a crate::state::Permutation,
    state: &'a Dist,
}

#[derive(Serialize)]
struct ConeOut<'a> {
    count: usize,
    vertices: Vec<VertexOut<'a>>,
}

#[derive(Serialize)]
struct CatalysableOut {
    relation: Relation,
    catalytic_condition: bool,
    in_t1: bool,
    in_td: bool,
    catalysable_future: bool,
    catalysable_past: bool,
}

#[derive(Serialize)]
struct SearchOut {
    catalyst_gibbs: f64,
    grid_n: usize,
    hits: Vec<f64>,
    window: Option<crate::catalysis::QubitWindows>,
}

#[derive(Serialize)]
struct VolumeOut {
    region: Region,
    #[serde(flatten)]
    estimate: crate::volume::VolumeEstimate,
}

fn cone_json(cv: &ConeVertices) -> String {
    to_json(&ConeOut {
        count: cv.len(),
        vertices: cv.vertices.iter().map(|(order, state)| VertexOut { order, state }).collect(),
    })
}

fn cone_csv(cv: &ConeVertices, d: usize) -> String {
    let mut header = vec!["order".to_string()];
    header.extend((1..=d).map(|i| format!("p{i}")));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows: Vec<Vec<String>> = cv
        .vertices
        .iter()
        .map(|(pi, v)| {
            let mut row = vec![format!("\"{pi}\"")];
            row.extend(v.as_slice().iter().map(|&x| csv_num(x)));
            row
        })
        .collect();
    to_csv(&header, &rows)
}

fn execute(cli: &Cli) -> Outcome<String> {
    let g = &cli.global;
    let fmt = |default: Format| g.format.unwrap_or(default);
    let json_only = |name: &str| -> Outcome<()> {
        if g.format == Some(Format::Csv) {
            return Err(Failure::Usage(format!("`{name}` has no CSV output")));
        }
        Ok(())
    };
    match &cli.command {
        Command::Curve(input) => {
            let l = load_state(input, g)?;
            let sv = beta_order(&l.state, &l.spec)?;
            let c = tm_curve(&l.state, &l.spec)?;
            Ok(match fmt(Format::Json) {
                Format::Json => to_json(&CurveOut { order: sv.order, slopes: sv.slopes, elbows: c }),
                Format::Csv => to_csv(
                    &["x", "y"],
                    &c.elbows().iter().map(|(x, y)| vec![csv_num(*x), csv_num(*y)]).collect::<Vec<_>>(),
                ),
            })
        }
        Command::Compare(input) => {
            json_only("compare")?;
            let l = load_state(input, g)?;
            Ok(to_json(&CompareOut { relation: compare(&l.state, l.target()?, &l.spec)? }))
        }
        Command::Cone { input, catalytic } => {
            let l = load_state(input, g)?;
            let cv = if *catalytic {
                c_plus_vertices(&l.state, &l.spec)?
            } else {
                future_cone_vertices(&l.state, &l.spec)?
            };
            Ok(match fmt(Format::Json) {
                Format::Json => cone_json(&cv),
                Format::Csv => cone_csv(&cv, l.state.len()),
            })
        }
        Command::Catalysable(input) => {
            json_only("catalysable")?;
            let l = load_state(input, g)?;
            let q = l.target()?;
            let regions = CatalysableRegions::new(&l.state, &l.spec)?;
            Ok(to_json(&CatalysableOut {
                relation: regions.relation(q)?,
                catalytic_condition: catalytic_condition(&l.state, q, &l.spec)?,
                in_t1: regions.in_tangent_region(q, TangentSide::First)?,
                in_td: regions.in_tangent_region(q, TangentSide::Last)?,
                catalysable_future: regions.future_member(q)?,
                catalysable_past: regions.past_member(q)?,
            }))
        }
        Command::Dimbound(input) => {
            json_only("dimbound")?;
            let l = load_state(input, g)?;
            Ok(to_json(&dim_bound(&l.state, l.target()?, &l.spec)?))
        }
        Command::QubitWindow { input, gibbs_r } => {
            json_only("qubit-window")?;
            let l = load_state(input, g)?;
            let gr = gibbs_r.or(l.catalyst_gibbs).unwrap_or(0.5);
            Ok(to_json(&qubit_window(&l.state, l.target()?, &l.spec, gr)?))
        }
        Command::SearchCatalyst { input, grid, gibbs_r } => {
            let l = load_state(input, g)?;
            let q = l.target()?;
            let gr = gibbs_r.or(l.catalyst_gibbs).unwrap_or(0.5);
            let hits = search_qubit_catalyst(&l.state, q, &l.spec, gr, *grid)?;
            Ok(match fmt(Format::Json) {
                Format::Json => {
                    let window = qubit_window(&l.state, q, &l.spec, gr).ok();
                    to_json(&SearchOut { catalyst_gibbs: gr, grid_n: *grid, hits, window })
                }
                Format::Csv => to_csv(&["t"], &hits.iter().map(|&t| vec![csv_num(t)]).collect::<Vec<_>>()),
            })
        }
        Command::OracleCheck { input, max_denominator } => {
            json_only("oracle-check")?;
            let l = load_state(input, g)?;
            Ok(to_json(&oracle_check(&l.state, l.target()?, &l.spec, *max_denominator)?))
        }
        Command::Volume { input, region } => {
            json_only("volume")?;
            let region: Region = region.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
            let l = load_state(input, g)?;
            let samples = g.samples.unwrap_or(DEFAULT_SAMPLES);
            Ok(to_json(&VolumeOut { region, estimate: mc_volume(&l.state, &l.spec, region, samples, g.seed)? }))
        }
        Command::Isovolume { input, energies, resolution } => {
            let spec = match input {
                Some(path) => load(path)?.spectrum(g.beta)?,
                None => EnergySpectrum::new(
                    energies.clone(),
                    g.beta.ok_or_else(|| Failure::Usage("isovolume needs --beta or --input".into()))?,
                )?,
            };
            let samples = g.samples.unwrap_or(10_000);
            let grid = isovolume_grid(&spec, *resolution, samples, g.seed)?;
            Ok(match fmt(Format::Csv) {
                Format::Csv => to_csv(
                    &["x", "y", "relative_volume"],
                    &grid
                        .iter()
                        .map(|p| vec![csv_num(p.x), csv_num(p.y), csv_num(p.relative_volume)])
                        .collect::<Vec<_>>(),
                ),
                Format::Json => to_json(&grid),
            })
        }
        Command::Entangle(input) => {
            json_only("entangle")?;
            let l = load_state(input, g)?;
            if l.spec.energies() != [0.0, 1.0, 1.0, 2.0] {
                return Err(Failure::Domain(Error::InvalidSpectrum(
                    "entanglement analysis needs the two-qubit spectrum [0, 1, 1, 2]".into(),
                )));
            }
            let cfg = TwoQubitConfig::new(l.spec.beta())?;
            let samples = g.samples.unwrap_or(DEFAULT_CN_SAMPLES);
            Ok(to_json(&entanglement_report(&l.state, &cfg, samples, g.seed)?))
        }
        Command::EntangleVolumes { betas } => {
            let samples = g.samples.unwrap_or(DEFAULT_SAMPLES);
            let rows: Vec<(f64, crate::volume::VolumeEstimate, crate::volume::VolumeEstimate, f64)> = betas
                .iter()
                .map(|&b| volume_ratio_cn_tn(b, samples, g.seed).map(|(tn, cn, r)| (b, tn, cn, r)))
                .collect::<crate::error::Result<_>>()?;
            Ok(match fmt(Format::Csv) {
                Format::Csv => to_csv(
                    &["beta", "v_tn", "v_cn", "ratio"],
                    &rows
                        .iter()
                        .map(|(b, tn, cn, r)| vec![csv_num(*b), csv_num(tn.value), csv_num(cn.value), csv_num(*r)])
                        .collect::<Vec<_>>(),
                ),
                Format::Json => {
                    #[derive(Serialize)]
                    struct Row {
                        beta: f64,
                        v_tn: crate::volume::VolumeEstimate,
                        v_cn: crate::volume::VolumeEstimate,
                        ratio: f64,
                    }
                    to_json(&rows.iter().map(|&(beta, v_tn, v_cn, ratio)| Row { beta, v_tn, v_cn, ratio }).collect::<Vec<_>>())
                }
            })
        }
        Command::Cooling(input) => {
            json_only("cooling")?;
            let l = load_state(input, g)?;
            Ok(to_json(&optimal_cooling(&l.state, &l.spec)?))
        }
        Command::CoolingCritical { dims, betas, linearised, j } => {
            #[derive(Serialize)]
            struct Row {
                d: usize,
                beta: f64,
                m: usize,
                beta_down: Option<f64>,
                beta_up: Option<f64>,
            }
            let mut rows = Vec::new();
            for &d in dims {
                for &beta in betas {
                    let m = m_index(*j, &EnergySpectrum::equidistant(d, beta)?)?;
                    let solve = |b: Boundary| -> Outcome<Option<f64>> {
                        if *linearised {
                            return Ok(Some(linearised_critical_beta(b, d, beta, m)));
                        }
                        match critical_hot_beta(b, d, beta, *j) {
                            Ok(x) => Ok(Some(x)),
                            Err(Error::NoRoot(_)) => Ok(None),
                            Err(e) => Err(e.into()),
                        }
                    };
                    rows.push(Row { d, beta, m, beta_down: solve(Boundary::Down)?, beta_up: solve(Boundary::Up)? });
                }
            }
            Ok(match fmt(Format::Csv) {
                Format::Csv => to_csv(
                    &["d", "beta", "m", "beta_down", "beta_up"],
                    &rows
                        .iter()
                        .map(|r| {
                            let cell = |x: Option<f64>| x.map(csv_num).unwrap_or_default();
                            vec![r.d.to_string(), csv_num(r.beta), r.m.to_string(), cell(r.beta_down), cell(r.beta_up)]
                        })
                        .collect::<Vec<_>>(),
                ),
                Format::Json => to_json(&rows),
            })
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Runs the CLI, writing results to `stdout` (or `--out`) and diagnostics to `stderr`.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(stderr, "{e}") } else { write!(stdout, "{e}") };
            return code;
        }
    };
    configure_threads();
    let mut text = match execute(&cli) {
        Ok(t) => t,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            return 2;
        }
        Err(Failure::Domain(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            return 1;
        }
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &cli.global.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                return 2;
            }
        }
        None => {
            if stdout.write_all(text.as_bytes()).is_err() {
                return 1;
            }
        }
    }
    0
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

//! Command-line front end: `region`, `maximize`, `map`, `gains` and
//! `oracle` subcommands with reproducible, file-based input and output.
//!
//! Every subcommand accepts its parameters as flags, or as a scenario JSON
//! file via `--scenario` whose fields override the flags.  Outputs are
//! deterministic: fixed iteration orders, no timestamps, `.` decimal
//! separator, rates printed with six decimals.  In `--json` mode stdout
//! carries exactly one JSON document.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::channel::ChannelGains;
use crate::error::{Error, Result};
use crate::individual::maximize_individual_fixed_alpha;
use crate::oracle::{oracle_individual, oracle_sum, OracleConfig, OracleObjective};
use crate::phase::{
    grid_search_individual, grid_search_sum, interpolate_individual, interpolate_sum,
    PhaseSearchResult, SearchMethod,
};
use crate::planner::{
    individual_scheme_map, sum_scheme_map, PhaseConfig, SchemeMap, Topology,
};
use crate::region::{
    classical_mac_region, envelope_region, outer_bound_region, write_frontier_csv,
};
use crate::sum::{gain_vs_mac, maximize_sum_fixed_alphas};

/// Scenario file: mirrors the command-line flags; any present field
/// overrides the corresponding flag.  Exactly one of `gains` and
/// `topology` must be present after merging.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub gains: Option<ChannelGains>,
    pub topology: Option<Topology>,
    /// Budgets used with `topology` (with `gains` they live inside it).
    pub p1: Option<f64>,
    pub p2: Option<f64>,
    pub objective: Option<String>,
    pub alpha1: Option<f64>,
    pub alpha2: Option<f64>,
    pub search: Option<String>,
    pub step: Option<f64>,
    pub coarse_points: Option<usize>,
    pub alpha_step: Option<f64>,
    pub power_grid_points: Option<usize>,
    pub grid_points: Option<usize>,
    pub refine_rounds: Option<usize>,
    pub bounds: Option<(f64, f64, f64, f64)>,
    pub resolution: Option<usize>,
    pub out_prefix: Option<String>,
}

impl Scenario {
    pub fn from_file(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| {
            Error::InvalidParameter(format!("cannot open scenario {}: {e}", path.display()))
        })?;
        Ok(serde_json::from_reader(file)?)
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "mactc",
    about = "Rate optimization and planning for the half-duplex cooperative multiple-access channel",
    version
)]
pub struct Cli {
    /// Cap the worker thread count (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Print a single JSON result on stdout.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Achievable-rate frontier, classical-MAC region and outer bound.
    Region(RegionArgs),
    /// Maximize the individual or sum rate.
    Maximize(MaximizeArgs),
    /// Scheme-region map over destination positions.
    Map(MapArgs),
    /// Cooperation gains over the classical MAC.
    Gains(GainsArgs),
    /// Brute-force verification of an optimizer.
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ChannelArgs {
    #[arg(long)]
    pub g12: Option<f64>,
    #[arg(long)]
    pub g21: Option<f64>,
    #[arg(long)]
    pub g10: Option<f64>,
    #[arg(long)]
    pub g20: Option<f64>,
    #[arg(long)]
    pub p1: Option<f64>,
    #[arg(long)]
    pub p2: Option<f64>,
}

impl ChannelArgs {
    fn resolve(&self, sc: &Scenario) -> Result<ChannelGains> {
        if let Some(t) = &sc.topology {
            if sc.gains.is_some() {
                return Err(Error::InvalidParameter(
                    "scenario must contain exactly one of `gains` and `topology`".into(),
                ));
            }
            let p1 = sc.p1.or(self.p1).unwrap_or(1.0);
            let p2 = sc.p2.or(self.p2).unwrap_or(1.0);
            return crate::planner::gains_from_topology(t, p1, p2);
        }
        if let Some(g) = &sc.gains {
            let mut g = *g;
            if let Some(p1) = sc.p1 {
                g.p1 = p1;
            }
            if let Some(p2) = sc.p2 {
                g.p2 = p2;
            }
            g.validate()?;
            return Ok(g);
        }
        let missing = || Error::InvalidParameter(
            "channel gains are required: pass --g12 --g21 --g10 --g20 --p1 --p2 or a scenario".into(),
        );
        ChannelGains::new(
            self.g12.ok_or_else(missing)?,
            self.g21.ok_or_else(missing)?,
            self.g10.ok_or_else(missing)?,
            self.g20.ok_or_else(missing)?,
            self.p1.ok_or_else(missing)?,
            self.p2.ok_or_else(missing)?,
        )
    }
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    /// Phase-duration grid step for the envelope.
    #[arg(long, default_value_t = 0.05)]
    pub alpha_step: f64,
    /// Power grid points per free dimension.
    #[arg(long, default_value_t = 16)]
    pub power_grid_points: usize,
    #[arg(long, default_value = "mactc")]
    pub out_prefix: String,
    #[arg(long)]
    pub scenario: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MaximizeArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    /// `individual` or `sum`.
    #[arg(long, default_value = "sum")]
    pub objective: String,
    /// `fixed`, `grid` or `interp`.
    #[arg(long, default_value = "fixed")]
    pub search: String,
    #[arg(long, default_value_t = 0.0)]
    pub alpha1: f64,
    #[arg(long, default_value_t = 0.0)]
    pub alpha2: f64,
    /// Grid step for `--search grid`.
    #[arg(long, default_value_t = 0.01)]
    pub step: f64,
    /// Coarse samples per axis for `--search interp`.
    #[arg(long, default_value_t = 8)]
    pub coarse_points: usize,
    #[arg(long, default_value = "mactc")]
    pub out_prefix: String,
    #[arg(long)]
    pub scenario: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MapArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    /// `individual` or `sum`.
    #[arg(long, default_value = "sum")]
    pub objective: String,
    #[arg(long, default_value_t = 0.2)]
    pub alpha1: f64,
    #[arg(long, default_value_t = 0.2)]
    pub alpha2: f64,
    /// Optimize phase durations per cell by interpolation with this many
    /// coarse points (0 keeps them fixed).
    #[arg(long, default_value_t = 0)]
    pub optimize_alpha: usize,
    /// Map bounds `x_min,x_max,y_min,y_max`.
    #[arg(long, num_args = 4, value_delimiter = ',', default_values_t = [-2.0, 2.0, -2.0, 2.0])]
    pub bounds: Vec<f64>,
    #[arg(long, default_value_t = 101)]
    pub resolution: usize,
    /// User positions `x1,y1,x2,y2` (pathloss model).
    #[arg(long, num_args = 4, value_delimiter = ',', default_values_t = [-0.5, 0.0, 0.5, 0.0])]
    pub users: Vec<f64>,
    /// Pathloss exponent.
    #[arg(long, default_value_t = 2.4)]
    pub gamma: f64,
    #[arg(long, default_value = "mactc")]
    pub out_prefix: String,
    #[arg(long)]
    pub scenario: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GainsArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(long, default_value = "mactc")]
    pub out_prefix: String,
    #[arg(long)]
    pub scenario: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    /// `individual` or `sum`.
    #[arg(long, default_value = "sum")]
    pub objective: String,
    #[arg(long, default_value_t = 0.2)]
    pub alpha1: f64,
    #[arg(long, default_value_t = 0.2)]
    pub alpha2: f64,
    #[arg(long, default_value_t = 64)]
    pub grid_points: usize,
    #[arg(long, default_value_t = 5)]
    pub refine_rounds: usize,
    #[arg(long, default_value = "mactc")]
    pub out_prefix: String,
    #[arg(long)]
    pub scenario: Option<PathBuf>,
}

/// Entry point used by the binary; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints its own message; usage problems are input errors.
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if let Some(n) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn load_scenario(path: &Option<PathBuf>) -> Result<Scenario> {
    match path {
        Some(p) => Scenario::from_file(p),
        None => Ok(Scenario::default()),
    }
}

fn dispatch(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Region(args) => cmd_region(args, cli.json),
        Command::Maximize(args) => cmd_maximize(args, cli.json),
        Command::Map(args) => cmd_map(args, cli.json),
        Command::Gains(args) => cmd_gains(args, cli.json),
        Command::Oracle(args) => cmd_oracle(args, cli.json),
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let file = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(file, value)?;
    Ok(())
}

fn emit<T: Serialize>(json_mode: bool, value: &T, human: impl FnOnce()) -> Result<()> {
    if json_mode {
        println!("{}", serde_json::to_string_pretty(value)?);
    } else {
        human();
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// region
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct RegionOutput {
    channel: ChannelGains,
    mac_region: crate::region::RateRegion,
    frontier_csv: String,
    outer_csv: String,
    region_json: String,
    frontier_points: usize,
    sum_apex: f64,
}

fn cmd_region(args: &RegionArgs, json_mode: bool) -> Result<()> {
    let sc = load_scenario(&args.scenario)?;
    let ch = args.channel.resolve(&sc)?;
    let alpha_step = sc.alpha_step.unwrap_or(args.alpha_step);
    let grid = sc.power_grid_points.unwrap_or(args.power_grid_points);
    let prefix = sc.out_prefix.clone().unwrap_or_else(|| args.out_prefix.clone());

    let mac = classical_mac_region(&ch);
    let frontier = envelope_region(&ch, alpha_step, grid)?;
    let outer = outer_bound_region(&ch, alpha_step, grid)?;

    let frontier_csv = format!("{prefix}_frontier.csv");
    let outer_csv = format!("{prefix}_outer.csv");
    let region_json = format!("{prefix}_region.json");
    write_frontier_csv(BufWriter::new(File::create(&frontier_csv)?), &frontier)?;
    write_frontier_csv(BufWriter::new(File::create(&outer_csv)?), &outer)?;
    write_json(Path::new(&region_json), &mac)?;

    let out = RegionOutput {
        channel: ch,
        sum_apex: crate::region::frontier_sum_apex(&frontier),
        frontier_points: frontier.len(),
        mac_region: mac,
        frontier_csv,
        outer_csv,
        region_json,
    };
    emit(json_mode, &out, || {
        println!("wrote {}", out.frontier_csv);
        println!("wrote {}", out.outer_csv);
        println!("wrote {}", out.region_json);
        println!("frontier sum apex: {:.6} bits/s/Hz", out.sum_apex);
    })
}

// ---------------------------------------------------------------------------
// maximize
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct MaximizeOutput {
    channel: ChannelGains,
    objective: String,
    method: String,
    case_id: String,
    case: String,
    rate: f64,
    alphas: crate::channel::PhaseDurations,
    allocation: crate::channel::PowerAllocation,
    kkt_residual: f64,
    used_fallback: bool,
    result_json: String,
}

fn search_alphas(
    ch: &ChannelGains,
    objective: &str,
    search: &str,
    args: &MaximizeArgs,
    sc: &Scenario,
) -> Result<(f64, f64, String)> {
    let step = sc.step.unwrap_or(args.step);
    let coarse = sc.coarse_points.unwrap_or(args.coarse_points);
    let a1 = sc.alpha1.unwrap_or(args.alpha1);
    let a2 = sc.alpha2.unwrap_or(args.alpha2);
    match (objective, search) {
        (_, "fixed") => Ok((a1, a2, "fixed".into())),
        ("individual", "grid") => {
            let res = grid_search_individual(ch, step)?;
            Ok((res.best_alphas.alpha1, 0.0, method_name(&res)))
        }
        ("individual", "interp") => {
            let res = interpolate_individual(ch, coarse)?;
            Ok((res.best_alphas.alpha1, 0.0, method_name(&res)))
        }
        ("sum", "grid") => {
            let res = grid_search_sum(ch, step)?;
            Ok((res.best_alphas.alpha1, res.best_alphas.alpha2, method_name(&res)))
        }
        ("sum", "interp") => {
            let res = interpolate_sum(ch, coarse, coarse)?;
            Ok((res.best_alphas.alpha1, res.best_alphas.alpha2, method_name(&res)))
        }
        _ => Err(Error::InvalidParameter(format!(
            "unknown search `{search}` (expected fixed, grid or interp)"
        ))),
    }
}

fn method_name(res: &PhaseSearchResult) -> String {
    match res.method {
        SearchMethod::Grid => "grid".into(),
        SearchMethod::Interpolated => "interpolated".into(),
    }
}

fn cmd_maximize(args: &MaximizeArgs, json_mode: bool) -> Result<()> {
    let sc = load_scenario(&args.scenario)?;
    let ch = args.channel.resolve(&sc)?;
    let objective = sc.objective.clone().unwrap_or_else(|| args.objective.clone());
    let search = sc.search.clone().unwrap_or_else(|| args.search.clone());
    let prefix = sc.out_prefix.clone().unwrap_or_else(|| args.out_prefix.clone());

    let (a1, a2, method) = search_alphas(&ch, &objective, &search, args, &sc)?;
    let out = match objective.as_str() {
        "individual" => {
            let sol = maximize_individual_fixed_alpha(&ch, a1)?;
            MaximizeOutput {
                channel: ch,
                objective,
                method,
                case_id: sol.case.label().into(),
                case: sol.case.to_string(),
                rate: sol.rate,
                alphas: sol.phases,
                allocation: sol.allocation,
                kkt_residual: sol.kkt_residual,
                used_fallback: sol.used_fallback,
                result_json: format!("{prefix}_result.json"),
            }
        }
        "sum" => {
            let sol = maximize_sum_fixed_alphas(&ch, a1, a2)?;
            MaximizeOutput {
                channel: ch,
                objective,
                method,
                case_id: sol.case.label().into(),
                case: sol.case.to_string(),
                rate: sol.sum_rate,
                alphas: sol.phases,
                allocation: sol.allocation,
                kkt_residual: sol.kkt_residual,
                used_fallback: sol.used_fallback,
                result_json: format!("{prefix}_result.json"),
            }
        }
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown objective `{other}` (expected individual or sum)"
            )))
        }
    };
    write_json(Path::new(&out.result_json), &out)?;
    emit(json_mode, &out, || {
        println!("case {} ({})", out.case, out.case_id);
        println!("rate {:.6} bits/s/Hz", out.rate);
        println!(
            "alphas ({:.6}, {:.6}, {:.6})",
            out.alphas.alpha1, out.alphas.alpha2, out.alphas.alpha3
        );
        println!("wrote {}", out.result_json);
    })
}

// ---------------------------------------------------------------------------
// map
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct MapOutput {
    objective: String,
    bounds: (f64, f64, f64, f64),
    resolution: usize,
    histogram: std::collections::BTreeMap<String, usize>,
    map_csv: String,
    summary_json: String,
}

fn cmd_map(args: &MapArgs, json_mode: bool) -> Result<()> {
    let sc = load_scenario(&args.scenario)?;
    let objective = sc.objective.clone().unwrap_or_else(|| args.objective.clone());
    let prefix = sc.out_prefix.clone().unwrap_or_else(|| args.out_prefix.clone());
    let resolution = sc.resolution.unwrap_or(args.resolution);
    let bounds = sc.bounds.unwrap_or((args.bounds[0], args.bounds[1], args.bounds[2], args.bounds[3]));
    let a1 = sc.alpha1.unwrap_or(args.alpha1);
    let a2 = sc.alpha2.unwrap_or(args.alpha2);
    let topo = sc.topology.unwrap_or(Topology {
        user1_pos: (args.users[0], args.users[1]),
        user2_pos: (args.users[2], args.users[3]),
        dest_pos: (0.0, 1.0),
        gamma: args.gamma,
    });
    let p1 = sc.p1.or(args.channel.p1).unwrap_or(2.0);
    let p2 = sc.p2.or(args.channel.p2).unwrap_or(2.0);
    let phases = if args.optimize_alpha > 0 {
        PhaseConfig::Interpolated { coarse_points: args.optimize_alpha }
    } else {
        PhaseConfig::Fixed { alpha1: a1, alpha2: a2 }
    };

    let map: SchemeMap = match objective.as_str() {
        "individual" => individual_scheme_map(&topo, phases, bounds, resolution, p1, p2)?,
        "sum" => sum_scheme_map(&topo, phases, bounds, resolution, p1, p2)?,
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown objective `{other}` (expected individual or sum)"
            )))
        }
    };
    let map_csv = format!("{prefix}_map.csv");
    let summary_json = format!("{prefix}_summary.json");
    map.write_csv(BufWriter::new(File::create(&map_csv)?))?;
    let out = MapOutput {
        objective,
        bounds,
        resolution,
        histogram: map.histogram(),
        map_csv,
        summary_json,
    };
    write_json(Path::new(&out.summary_json), &out)?;
    emit(json_mode, &out, || {
        println!("wrote {}", out.map_csv);
        println!("wrote {}", out.summary_json);
        for (scheme, count) in &out.histogram {
            println!("{scheme}: {count}");
        }
    })
}

// ---------------------------------------------------------------------------
// gains
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct GainsOutput {
    channel: ChannelGains,
    delta_r1: f64,
    delta_r2: f64,
    delta_sum: f64,
    finite_delta_r1: f64,
    finite_delta_r2: f64,
    finite_delta_sum: f64,
    gains_json: String,
}

fn cmd_gains(args: &GainsArgs, json_mode: bool) -> Result<()> {
    let sc = load_scenario(&args.scenario)?;
    let ch = args.channel.resolve(&sc)?;
    let prefix = sc.out_prefix.clone().unwrap_or_else(|| args.out_prefix.clone());
    let g = gain_vs_mac(&ch)?;
    let out = GainsOutput {
        channel: ch,
        delta_r1: g.delta_r1,
        delta_r2: g.delta_r2,
        delta_sum: g.delta_sum,
        finite_delta_r1: g.finite_delta_r1,
        finite_delta_r2: g.finite_delta_r2,
        finite_delta_sum: g.finite_delta_sum,
        gains_json: format!("{prefix}_gains.json"),
    };
    write_json(Path::new(&out.gains_json), &out)?;
    emit(json_mode, &out, || {
        println!("asymptotic gains: R1 {:.6}, R2 {:.6}, sum {:.6}", out.delta_r1, out.delta_r2, out.delta_sum);
        println!(
            "finite-power gains: R1 {:.6}, R2 {:.6}, sum {:.6}",
            out.finite_delta_r1, out.finite_delta_r2, out.finite_delta_sum
        );
        println!("wrote {}", out.gains_json);
    })
}

// ---------------------------------------------------------------------------
// oracle
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct OracleOutput {
    scenario: ScenarioEcho,
    rate: f64,
    allocation: crate::channel::PowerAllocation,
    config: OracleConfig,
    digest: String,
    oracle_json: String,
}

#[derive(Serialize)]
struct ScenarioEcho {
    channel: ChannelGains,
    objective: String,
    alpha1: f64,
    alpha2: f64,
}

fn cmd_oracle(args: &OracleArgs, json_mode: bool) -> Result<()> {
    let sc = load_scenario(&args.scenario)?;
    let ch = args.channel.resolve(&sc)?;
    let objective = sc.objective.clone().unwrap_or_else(|| args.objective.clone());
    let prefix = sc.out_prefix.clone().unwrap_or_else(|| args.out_prefix.clone());
    let a1 = sc.alpha1.unwrap_or(args.alpha1);
    let a2 = sc.alpha2.unwrap_or(args.alpha2);
    let grid = sc.grid_points.unwrap_or(args.grid_points);

    let obj = match objective.as_str() {
        "individual" => OracleObjective::IndividualR1,
        "sum" => OracleObjective::SumRate,
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown objective `{other}` (expected individual or sum)"
            )))
        }
    };
    let mut config = OracleConfig::new(grid, 0.05, obj)?;
    config.refine_rounds = sc.refine_rounds.unwrap_or(args.refine_rounds);
    let (rate, allocation) = match obj {
        OracleObjective::IndividualR1 => oracle_individual(&ch, a1, &config)?,
        OracleObjective::SumRate => oracle_sum(&ch, a1, a2, &config)?,
    };

    let echo = ScenarioEcho { channel: ch, objective, alpha1: a1, alpha2: a2 };
    let payload = serde_json::to_string(&(&echo, rate, &allocation, &config))?;
    let digest = format!("{:x}", Sha256::digest(payload.as_bytes()));
    let out = OracleOutput {
        scenario: echo,
        rate,
        allocation,
        config,
        digest,
        oracle_json: format!("{prefix}_oracle.json"),
    };
    write_json(Path::new(&out.oracle_json), &out)?;
    emit(json_mode, &out, || {
        println!("oracle rate {:.6} bits/s/Hz", out.rate);
        println!("digest {}", out.digest);
        println!("wrote {}", out.oracle_json);
    })
}

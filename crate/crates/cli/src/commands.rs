//! Subcommand definitions and dispatch.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qbclab_core::channels::{build_net, verify_net, CompoundSet, NetConfig};
use qbclab_core::codesim::{
    covering_check, run_universal_experiment, BernoulliDiagonal, CoveringConfig, DecoderMethod, ExperimentConfig,
    ExperimentReport, LayoutPolicy,
};
use qbclab_core::regions::{evaluate_corner, optimize_region, FactorizedInput, OptimizerConfig, RateRegion, Scenario};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::output::{canonical_json, float, optional_float, prepare_dir, write_csv, write_text, Report};
use crate::spec::{compound_to_json, load_compound, load_family, load_input};

#[derive(Debug, Parser)]
#[command(name = "qbclab", version, about = "Rate regions and code simulations for compound cqq wiretap channels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Common and confidential message rate region.
    RegionBcc(RegionArgs),
    /// Public and confidential message rate region.
    RegionTpc(RegionArgs),
    /// Simulate superposition wiretap codes over a grid of block lengths.
    Simulate(SimulateArgs),
    /// Build and verify a tau-net of a channel family.
    Net(NetArgs),
    /// Monte Carlo check of operator concentration for Bernoulli diagonals.
    Covering(CoveringArgs),
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    /// Channel, compound or net file.
    #[arg(long)]
    pub channels: PathBuf,
    /// Evaluate this input distribution instead of optimising.
    #[arg(long)]
    pub input_dist: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Scalarisation weights on the public rate.
    #[arg(long, value_delimiter = ',')]
    pub weights: Option<Vec<f64>>,
    /// Letters per input block.
    #[arg(long, default_value_t = 1)]
    pub block: usize,
    /// Auxiliary alphabet size (defaults to the channel alphabet size).
    #[arg(long)]
    pub u_size: Option<usize>,
    /// Randomisation alphabet size (defaults to the channel alphabet size).
    #[arg(long)]
    pub y_size: Option<usize>,
    #[arg(long, default_value_t = 6)]
    pub restarts: usize,
    #[arg(long, default_value_t = 60)]
    pub iterations: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ScenarioArg {
    Bcc,
    Tpc,
}

impl From<ScenarioArg> for Scenario {
    fn from(s: ScenarioArg) -> Self {
        match s {
            ScenarioArg::Bcc => Scenario::Bcc,
            ScenarioArg::Tpc => Scenario::Tpc,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum MethodArg {
    Pgm,
    Hn,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub channels: PathBuf,
    /// Input distribution; defaults to a trivial auxiliary, uniform
    /// randomisation letters and the identity map to channel inputs.
    #[arg(long)]
    pub input_dist: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    /// First seed; seeds `seed, seed+1, ...` are used.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub seeds: u64,
    #[arg(long, value_delimiter = ',', default_value = "4,6,8")]
    pub n_grid: Vec<usize>,
    #[arg(long, value_enum, default_value_t = ScenarioArg::Bcc)]
    pub scenario: ScenarioArg,
    /// Relative rate margin of the template layout.
    #[arg(long, default_value_t = 0.15)]
    pub margin: f64,
    /// Fixed layout `M0,J,L` overriding the template.
    #[arg(long, value_delimiter = ',')]
    pub layout: Option<Vec<usize>>,
    /// Typicality slack of the codebook laws.
    #[arg(long, default_value_t = 0.25)]
    pub delta: f64,
    #[arg(long, value_enum, default_value_t = MethodArg::Pgm)]
    pub method: MethodArg,
    /// Threshold of the thresholded square-root decoder.
    #[arg(long, default_value_t = 1.0)]
    pub hn_threshold: f64,
}

#[derive(Debug, Args)]
pub struct NetArgs {
    /// Family file.
    #[arg(long)]
    pub channels: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub tau: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Fresh samples used to verify the finished net.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    /// Family samples the builder may draw.
    #[arg(long, default_value_t = 8192)]
    pub budget: usize,
    #[arg(long, default_value_t = 512)]
    pub batch: usize,
}

#[derive(Debug, Args)]
pub struct CoveringArgs {
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Diagonal Bernoulli probabilities; the dimension is their count.
    #[arg(long, value_delimiter = ',', default_value = "0.5,0.5")]
    pub probs: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub mu: f64,
    #[arg(long, default_value_t = 0.2)]
    pub epsilon: f64,
    #[arg(long, value_delimiter = ',', default_value = "10,100,1000")]
    pub sample_counts: Vec<usize>,
    #[arg(long, default_value_t = 2000)]
    pub trials: usize,
}

/// Result of a command that ran far enough to write a report.
pub struct Outcome {
    pub report: Report,
    pub out: PathBuf,
}

impl Outcome {
    pub fn failed(&self) -> bool {
        self.report.error.is_some()
    }
}

/// Runs a parsed command. Errors before the output directory is prepared
/// are returned; later failures are recorded in the written report.
pub fn run(command: &Command) -> CliResult<Outcome> {
    let start = Instant::now();
    let (out, mut report) = match command {
        Command::RegionBcc(args) => region(args, Scenario::Bcc)?,
        Command::RegionTpc(args) => region(args, Scenario::Tpc)?,
        Command::Simulate(args) => simulate(args)?,
        Command::Net(args) => net(args)?,
        Command::Covering(args) => covering(args)?,
    };
    report.wall_clock_secs = start.elapsed().as_secs_f64();
    write_text(&out.join("report.json"), &canonical_json(&report))?;
    Ok(Outcome { report, out })
}

fn record<T>(report: &mut Report, result: CliResult<T>) -> Option<T> {
    match result {
        Ok(v) => Some(v),
        Err(e) => {
            report.partial = true;
            report.error = Some(e.to_string());
            None
        }
    }
}

fn path_string(p: &Path) -> String {
    p.display().to_string()
}

fn region(args: &RegionArgs, scenario: Scenario) -> CliResult<(PathBuf, Report)> {
    let compound = load_compound(&args.channels)?;
    let input = args.input_dist.as_deref().map(load_input).transpose()?;
    let out = prepare_dir(&args.out)?;
    let mut config = OptimizerConfig {
        seed: args.seed,
        restarts: args.restarts,
        iterations: args.iterations,
        ..OptimizerConfig::default()
    };
    if let Some(w) = &args.weights {
        config.weights = w.clone();
    }
    let sizes = (
        args.u_size.unwrap_or(compound.alphabet_size()),
        args.y_size.unwrap_or(compound.alphabet_size()),
    );
    let mut report = Report::new(
        if scenario == Scenario::Bcc { "region-bcc" } else { "region-tpc" },
        vec![args.seed],
        json!({
            "block": args.block,
            "u_size": sizes.0,
            "y_size": sizes.1,
            "optimizer": config,
            "members": compound.len(),
            "tau": compound.tau(),
        }),
    );
    report.inputs.insert("channels".into(), path_string(&args.channels));
    if let Some(p) = &args.input_dist {
        report.inputs.insert("input_dist".into(), path_string(p));
    }
    let result = match &input {
        Some(input) => fixed_corner(&compound, input, scenario, &out),
        None => optimised_region(&compound, scenario, sizes, args.block, &config, &out),
    };
    if let Some(v) = record(&mut report, result) {
        report.result = v;
    }
    Ok((out, report))
}

const CORNER_HEADER: [&str; 7] = ["weight", "r_pub", "r_c", "r_c_unclamped", "slack", "objective", "converged"];

fn fixed_corner(compound: &CompoundSet, input: &FactorizedInput, scenario: Scenario, out: &Path) -> CliResult<Value> {
    let corner = evaluate_corner(compound, input, scenario)?;
    let row = vec![
        String::new(),
        float(corner.r_pub),
        float(corner.r_c),
        float(corner.r_c_unclamped),
        float(corner.slack),
        String::new(),
        String::new(),
    ];
    write_csv(&out.join("corners.csv"), &CORNER_HEADER, &[row])?;
    write_csv(
        &out.join("frontier.csv"),
        &["r_pub", "r_c"],
        &[vec![float(corner.r_pub), float(corner.r_c)]],
    )?;
    Ok(serde_json::to_value(corner).expect("corner serialises"))
}

fn optimised_region(
    compound: &CompoundSet,
    scenario: Scenario,
    sizes: (usize, usize),
    block: usize,
    config: &OptimizerConfig,
    out: &Path,
) -> CliResult<Value> {
    let region: RateRegion = optimize_region(compound, scenario, sizes, block, config)?;
    let rows: Vec<Vec<String>> = region
        .corners
        .iter()
        .map(|w| {
            vec![
                float(w.weight),
                float(w.corner.r_pub),
                float(w.corner.r_c),
                float(w.corner.r_c_unclamped),
                float(w.corner.slack),
                float(w.objective),
                w.converged.to_string(),
            ]
        })
        .collect();
    write_csv(&out.join("corners.csv"), &CORNER_HEADER, &rows)?;
    let frontier: Vec<Vec<String>> = region.frontier.iter().map(|&(a, b)| vec![float(a), float(b)]).collect();
    write_csv(&out.join("frontier.csv"), &["r_pub", "r_c"], &frontier)?;
    Ok(json!({
        "max_public": region.max_public(),
        "max_confidential": region.max_confidential(),
        "frontier": region.frontier,
        "corners": region.corners,
    }))
}

fn default_input(compound: &CompoundSet) -> CliResult<FactorizedInput> {
    let x = compound.alphabet_size();
    let identity = (0..x)
        .map(|i| (0..x).map(|k| if i == k { 1.0 } else { 0.0 }).collect())
        .collect();
    Ok(FactorizedInput::new(1, vec![1.0], vec![vec![1.0 / x as f64; x]], identity)?)
}

fn simulate(args: &SimulateArgs) -> CliResult<(PathBuf, Report)> {
    let compound = load_compound(&args.channels)?;
    let input = match &args.input_dist {
        Some(p) => load_input(p)?,
        None => default_input(&compound)?,
    };
    if args.seeds == 0 || args.n_grid.is_empty() {
        return Err(CliError::Usage("need at least one seed and one block length".into()));
    }
    let policy = match args.layout.as_deref() {
        Some(&[m0, j, l]) => LayoutPolicy::Fixed { m0, j, l },
        Some(_) => return Err(CliError::Usage("--layout takes three sizes M0,J,L".into())),
        None => LayoutPolicy::Template { margin: args.margin },
    };
    let method = match args.method {
        MethodArg::Pgm => DecoderMethod::Pgm,
        MethodArg::Hn => DecoderMethod::HayashiNagaoka {
            threshold: args.hn_threshold,
        },
    };
    let seeds: Vec<u64> = (0..args.seeds).map(|k| args.seed.wrapping_add(k)).collect();
    let config = ExperimentConfig {
        scenario: args.scenario.into(),
        input,
        policy,
        n_grid: args.n_grid.clone(),
        seeds: seeds.clone(),
        delta: args.delta,
        method,
    };
    let out = prepare_dir(&args.out)?;
    let mut report = Report::new(
        "simulate",
        seeds,
        json!({ "experiment": config, "members": compound.len(), "tau": compound.tau() }),
    );
    report.inputs.insert("channels".into(), path_string(&args.channels));
    if let Some(p) = &args.input_dist {
        report.inputs.insert("input_dist".into(), path_string(p));
    }

    // One block length at a time so that completed lengths survive a
    // failure later in the grid.
    let mut parts: Vec<ExperimentReport> = Vec::new();
    for &n in &config.n_grid {
        let single = ExperimentConfig {
            n_grid: vec![n],
            ..config.clone()
        };
        match run_universal_experiment(&compound, &single) {
            Ok(part) => parts.push(part),
            Err(e) => {
                record::<()>(&mut report, Err(e.into()));
                break;
            }
        }
    }
    let rows: Vec<Vec<String>> = parts
        .iter()
        .flat_map(|p| {
            let layout = p.summaries[0].layout;
            p.rows.iter().map(move |r| {
                vec![
                    r.n.to_string(),
                    r.seed.to_string(),
                    r.member.to_string(),
                    layout.m0.to_string(),
                    layout.j.to_string(),
                    layout.l.to_string(),
                    float(r.e_bob),
                    optional_float(r.e_eve),
                    float(r.leakage),
                ]
            })
        })
        .collect();
    write_csv(
        &out.join("simulate.csv"),
        &["n", "seed", "member", "m0", "j", "l", "e_bob", "e_eve", "leakage"],
        &rows,
    )?;
    let summaries: Vec<Vec<String>> = parts
        .iter()
        .map(|p| {
            let s = &p.summaries[0];
            vec![
                s.n.to_string(),
                float(s.mean_max_e_bob),
                optional_float(s.mean_max_e_eve),
                float(s.mean_max_leakage),
                float(s.max_leakage_rate),
                optional_float(p.slack[0]),
            ]
        })
        .collect();
    write_csv(
        &out.join("summary.csv"),
        &["n", "mean_max_e_bob", "mean_max_e_eve", "mean_max_leakage", "max_leakage_rate", "slack"],
        &summaries,
    )?;
    report.result = json!({
        "summaries": parts.iter().map(|p| &p.summaries[0]).collect::<Vec<_>>(),
        "slack": parts.iter().map(|p| p.slack[0]).collect::<Vec<_>>(),
        "completed_block_lengths": parts.iter().map(|p| p.summaries[0].n).collect::<Vec<_>>(),
    });
    Ok((out, report))
}

fn net(args: &NetArgs) -> CliResult<(PathBuf, Report)> {
    let family = load_family(&args.channels)?;
    let out = prepare_dir(&args.out)?;
    let config = NetConfig {
        tau: args.tau,
        seed: args.seed,
        sample_budget: args.budget,
        batch_size: args.batch,
    };
    let mut report = Report::new(
        "net",
        vec![args.seed, args.seed.wrapping_add(1)],
        json!({ "net": config, "verification_samples": args.samples, "family": family.family().id() }),
    );
    report.inputs.insert("channels".into(), path_string(&args.channels));
    let built = build_net(family.family(), &config).map_err(CliError::from);
    let Some(outcome) = record(&mut report, built) else {
        return Ok((out, report));
    };
    write_text(&out.join("net.json"), &compound_to_json(&outcome.net))?;
    let verified = verify_net(
        &outcome.net,
        family.family(),
        args.tau,
        args.samples,
        args.seed.wrapping_add(1),
    )
    .map_err(CliError::from);
    let mut result = json!({
        "size": outcome.net.len(),
        "holdout_radius": outcome.holdout_radius,
        "samples_used": outcome.samples_used,
        "log2_cardinality_bound": outcome.log2_cardinality_bound,
    });
    if let Some(v) = record(&mut report, verified) {
        let mut rows = vec![vec![
            "radius".to_string(),
            "1".to_string(),
            float(v.max_distance),
            float(v.tau),
            (v.max_distance <= v.tau).to_string(),
        ]];
        rows.extend(v.block_checks.iter().map(|b| {
            vec![
                "block".to_string(),
                b.n.to_string(),
                float(b.max_distance),
                float(b.bound),
                b.pass.to_string(),
            ]
        }));
        write_csv(&out.join("net.csv"), &["check", "n", "max_distance", "bound", "pass"], &rows)?;
        result["verification"] = serde_json::to_value(&v).expect("verification serialises");
        result["size_within_bound"] = json!((outcome.net.len() as f64).log2() <= outcome.log2_cardinality_bound);
        if !v.pass {
            report.error = Some(format!(
                "net verification failed: radius {} against tau {}",
                v.max_distance, v.tau
            ));
        }
    }
    report.result = result;
    Ok((out, report))
}

fn covering(args: &CoveringArgs) -> CliResult<(PathBuf, Report)> {
    let out = prepare_dir(&args.out)?;
    let config = CoveringConfig::new(args.mu, args.epsilon, args.sample_counts.clone(), args.trials, args.seed);
    let mut report = Report::new("covering", vec![args.seed], json!({ "covering": config, "probs": args.probs }));
    let sampler = BernoulliDiagonal {
        probs: args.probs.clone(),
    };
    let checked = covering_check(&sampler, &config).map_err(CliError::from);
    if let Some(r) = record(&mut report, checked) {
        let rows: Vec<Vec<String>> = r
            .points
            .iter()
            .map(|p| {
                vec![
                    p.samples.to_string(),
                    p.trials.to_string(),
                    p.violations.to_string(),
                    float(p.rate),
                    float(p.bound),
                    float(p.sigma),
                    p.pass.to_string(),
                ]
            })
            .collect();
        write_csv(
            &out.join("covering.csv"),
            &["samples", "trials", "violations", "rate", "bound", "sigma", "pass"],
            &rows,
        )?;
        report.result = serde_json::to_value(&r).expect("covering report serialises");
    }
    Ok((out, report))
}

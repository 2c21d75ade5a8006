use std::fs;
use std::io::Read as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use discfactor::{
    brute_force_oracle, concentration_experiment, count_switchers, decompose_high_discrepancy,
    decompose_unbalanced, multicolor_decompose, round_robin, verify_result, BoostStatus,
    CensusMode, PipelineConfig, PipelineResult, SignedCompleteGraph, SigningSpec, TupleFamily,
    TupleSigning,
};
use serde::Deserialize;

#[derive(Parser)]
#[command(
    name = "discfactor",
    about = "High-discrepancy 1-factor decompositions of edge-signed complete graphs",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Paper,
    Desk,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Strategy {
    C4k4,
    MatchingPairs,
    Auto,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SpecKind {
    AllPlus,
    PBiased,
    ExactCount,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a signing and print it as JSON.
    Gen {
        #[arg(long)]
        num_vertices: usize,
        #[arg(long, value_enum, default_value = "p-biased")]
        spec: SpecKind,
        /// Probability of +1 for p-biased signings.
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        /// Number of positive edges for exact-count signings.
        #[arg(long)]
        positive: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Emit the compact "+-" string form instead of the edge list form.
        #[arg(long)]
        compact: bool,
    },
    /// Discrepancy and degree statistics of a signing.
    Disc {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Switcher census (exact, or sampled with --samples).
    Switchers {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Hit-count concentration experiment for a matching orientation family.
    Montecarlo {
        #[command(flatten)]
        input: InputArg,
        /// Round-robin matching to build the k=2 family from.
        #[arg(long, default_value_t = 0)]
        matching: usize,
        #[arg(long, default_value_t = 200)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Run the full decomposition pipeline.
    Decompose {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        pipeline: PipelineArgs,
    },
    /// Re-centered variant: push matchings away from the global discrepancy.
    Unbalanced {
        #[command(flatten)]
        input: InputArg,
        /// Upper bound on |disc(K)| accepted by the variant.
        #[arg(long, default_value_t = 0.99)]
        p0: f64,
        #[command(flatten)]
        pipeline: PipelineArgs,
    },
    /// Multicolor variant on a k-colored edge set.
    Multicolor {
        /// JSON file {"num_vertices": N, "k": K, "colors": [c_0, ...]} with
        /// one color in [1, k] per edge index.
        #[arg(long)]
        colors: PathBuf,
        #[command(flatten)]
        pipeline: PipelineArgs,
    },
    /// Exhaustive optimum over all 1-factorizations (up to 8 vertices).
    Oracle {
        #[command(flatten)]
        input: InputArg,
    },
    /// Re-verify a pipeline result from raw edges.
    Verify {
        #[command(flatten)]
        input: InputArg,
        /// Pipeline result JSON produced by decompose/unbalanced.
        #[arg(long)]
        result: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        claimed_min: f64,
    },
}

#[derive(Args)]
struct InputArg {
    /// Signing JSON file, or "-" for stdin.
    #[arg(long, default_value = "-")]
    input: String,
}

#[derive(Args)]
struct PipelineArgs {
    #[arg(long, value_enum, default_value = "desk")]
    mode: Mode,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Boost targets as "primary,final".
    #[arg(long)]
    targets: Option<String>,
    #[arg(long, value_enum, default_value = "auto")]
    strategy: Strategy,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Print each swap's before/after signed sums to stderr.
    #[arg(long)]
    explain: bool,
}

impl PipelineArgs {
    fn build(&self) -> Result<PipelineConfig, String> {
        let mut config = match self.mode {
            Mode::Desk => PipelineConfig::desk(self.seed),
            Mode::Paper => PipelineConfig::paper(self.seed),
        };
        config.seed = self.seed;
        if let Some(g) = self.gamma {
            config.gamma = g;
        }
        if let Some(e) = self.epsilon {
            config.epsilon = e;
        }
        if let Some(t) = &self.targets {
            let parts: Vec<&str> = t.split(',').collect();
            if parts.len() != 2 {
                return Err("--targets expects \"primary,final\"".into());
            }
            config.primary_target = parts[0].trim().parse().map_err(|e| format!("{e}"))?;
            config.final_target = parts[1].trim().parse().map_err(|e| format!("{e}"))?;
        }
        config.strategy = match self.strategy {
            Strategy::C4k4 => discfactor::DecompositionStrategy::C4K4,
            Strategy::MatchingPairs => discfactor::DecompositionStrategy::MatchingPairs,
            Strategy::Auto => discfactor::DecompositionStrategy::Auto,
        };
        Ok(config)
    }
}

fn read_input(arg: &InputArg) -> Result<String, String> {
    if arg.input == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| e.to_string())?;
        Ok(buf)
    } else {
        fs::read_to_string(&arg.input).map_err(|e| format!("{}: {e}", arg.input))
    }
}

fn read_graph(arg: &InputArg) -> Result<SignedCompleteGraph, String> {
    SignedCompleteGraph::from_json(&read_input(arg)?).map_err(|e| e.to_string())
}

fn explain(result: &PipelineResult) {
    for (f, log) in result.swap_logs.iter().enumerate() {
        for r in &log.records {
            eprintln!(
                "factor {f}: swap cycle {:?}: S ({}, {}) -> ({}, {})",
                r.cycle.vertices, r.before.0, r.before.1, r.after.0, r.after.1
            );
        }
    }
}

fn emit_pipeline_result(result: &PipelineResult, explain_flag: bool) -> Result<u8, String> {
    if explain_flag {
        explain(result);
    }
    println!(
        "{}",
        result.to_canonical_json().map_err(|e| e.to_string())?
    );
    Ok(match &result.status {
        BoostStatus::Met => 0,
        BoostStatus::BestEffort(_) => 2,
    })
}

#[derive(Deserialize)]
struct ColorFile {
    num_vertices: usize,
    k: usize,
    colors: Vec<usize>,
}

fn run() -> Result<u8, String> {
    let cli = Cli::parse();
    match cli.command {
        Command::Gen {
            num_vertices,
            spec,
            p,
            positive,
            seed,
            compact,
        } => {
            let spec = match spec {
                SpecKind::AllPlus => SigningSpec::AllPlus,
                SpecKind::PBiased => SigningSpec::PBiased { p },
                SpecKind::ExactCount => SigningSpec::ExactCount {
                    positive: positive.ok_or("--positive is required for exact-count")?,
                },
            };
            let g = SignedCompleteGraph::generate(num_vertices, &spec, seed)
                .map_err(|e| e.to_string())?;
            println!("{}", if compact { g.to_json_compact() } else { g.to_json() });
            Ok(0)
        }
        Command::Disc { input, format } => {
            let g = read_graph(&input)?;
            let nv = g.num_vertices();
            let disc = g.global_disc_signed();
            let rows = [
                ("num_vertices", nv as f64),
                ("positive_edges", g.positive_edge_count() as f64),
                ("disc_signed", ratio_f64(disc)),
                ("disc_abs", ratio_f64(disc).abs()),
            ];
            match format {
                Format::Csv => {
                    println!("stat,value");
                    for (k, v) in rows {
                        println!("{k},{v}");
                    }
                }
                Format::Json => {
                    let map: serde_json::Map<String, serde_json::Value> = rows
                        .into_iter()
                        .map(|(k, v)| (k.to_string(), serde_json::json!(v)))
                        .collect();
                    println!("{}", serde_json::Value::Object(map));
                }
            }
            Ok(0)
        }
        Command::Switchers {
            input,
            samples,
            seed,
            format,
        } => {
            let g = read_graph(&input)?;
            let mode = match samples {
                Some(samples) => CensusMode::Sampled { samples, seed },
                None => CensusMode::Exact,
            };
            let census = count_switchers(&g, mode).map_err(|e| e.to_string())?;
            match format {
                Format::Csv => {
                    println!("type,count");
                    for (ty, count) in &census.counts_by_type {
                        println!("{ty},{count}");
                    }
                    println!("total_c4,{}", census.total_c4);
                    println!("switchers,{}", census.switcher_count);
                }
                Format::Json => println!(
                    "{}",
                    serde_json::to_string(&census).map_err(|e| e.to_string())?
                ),
            }
            Ok(0)
        }
        Command::Montecarlo {
            input,
            matching,
            trials,
            seed,
            format,
        } => {
            let g = read_graph(&input)?;
            let rr = round_robin(g.num_vertices()).map_err(|e| e.to_string())?;
            let m = rr
                .matchings
                .get(matching)
                .ok_or_else(|| format!("no round-robin matching {matching}"))?;
            let family = TupleFamily::matching_orientations(m).map_err(|e| e.to_string())?;
            let signing = TupleSigning::edge_lift(&g);
            let report = concentration_experiment(&family, &signing, trials, seed)
                .map_err(|e| e.to_string())?;
            match format {
                Format::Csv => {
                    println!("t,empirical,chebyshev,talagrand");
                    for row in &report.tail {
                        println!(
                            "{},{},{},{}",
                            row.t, row.empirical, row.chebyshev, row.talagrand
                        );
                    }
                }
                Format::Json => println!(
                    "{}",
                    serde_json::to_string(&report).map_err(|e| e.to_string())?
                ),
            }
            Ok(0)
        }
        Command::Decompose { input, pipeline } => {
            let g = read_graph(&input)?;
            let config = pipeline.build()?;
            let result = decompose_high_discrepancy(&g, &config).map_err(|e| e.to_string())?;
            emit_pipeline_result(&result, pipeline.explain)
        }
        Command::Unbalanced {
            input,
            p0,
            pipeline,
        } => {
            let g = read_graph(&input)?;
            let config = pipeline.build()?;
            let result = decompose_unbalanced(&g, &config, p0).map_err(|e| e.to_string())?;
            emit_pipeline_result(&result, pipeline.explain)
        }
        Command::Multicolor { colors, pipeline } => {
            let text = fs::read_to_string(&colors).map_err(|e| e.to_string())?;
            let file: ColorFile = serde_json::from_str(&text).map_err(|e| e.to_string())?;
            let config = pipeline.build()?;
            let (result, reports) =
                multicolor_decompose(file.num_vertices, &file.colors, file.k, &config)
                    .map_err(|e| e.to_string())?;
            if pipeline.explain {
                explain(&result);
            }
            let payload = serde_json::json!({
                "result": result,
                "per_matching_colors": reports,
            });
            println!("{payload}");
            Ok(match &result.status {
                BoostStatus::Met => 0,
                BoostStatus::BestEffort(_) => 2,
            })
        }
        Command::Oracle { input } => {
            let g = read_graph(&input)?;
            let r = brute_force_oracle(&g).map_err(|e| e.to_string())?;
            println!("{}", serde_json::to_string(&r).map_err(|e| e.to_string())?);
            Ok(0)
        }
        Command::Verify {
            input,
            result,
            claimed_min,
        } => {
            let g = read_graph(&input)?;
            let text = fs::read_to_string(&result).map_err(|e| e.to_string())?;
            let parsed: PipelineResult = serde_json::from_str(&text).map_err(|e| e.to_string())?;
            let check = verify_result(&g, &parsed, claimed_min);
            println!(
                "{}",
                serde_json::to_string(&check).map_err(|e| e.to_string())?
            );
            Ok(if check.passes { 0 } else { 1 })
        }
    }
}

fn ratio_f64(r: num_rational::Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

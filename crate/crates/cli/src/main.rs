use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ssum_cli::config::PresetName;
use ssum_cli::experiment::{entropy_report, run_experiment_with, sample_lists, SuiteParams};
use ssum_cli::{generate_instance, run_solve, Algorithm, CliError, ExperimentConfig, Format, InstanceKind, Overrides, Suite};
use ssum_core::ov::{build_cover, cover_validity, measure_sparsity, SparsityReport};
use ssum_core::p4::{build_p4_graph, dump_edge_list};
use ssum_core::{Rng, SubsetSumInstance};

/// Exact Subset Sum solvers and their experiment harness.
#[derive(Parser)]
#[command(name = "ssum", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = PresetName::Desk)]
    preset: PresetName,
    /// Repetitions R for solvers, rows for experiments.
    #[arg(long, global = true)]
    trials: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Source {
    /// Instance file: `n t` on the first line, then the weights.
    #[arg(long, conflicts_with = "kind")]
    input: Option<PathBuf>,
    /// Generate the instance from the seed instead.
    #[arg(long, value_enum)]
    kind: Option<InstanceKind>,
    #[arg(long, default_value_t = 16)]
    n: usize,
    #[arg(long, default_value_t = 20)]
    bits: u32,
}

#[derive(Args)]
struct Tuning {
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    lambda0: Option<f64>,
    #[arg(long)]
    eps0: Option<f64>,
    /// Block count c of the sparsity OV engine.
    #[arg(long, short = 'c')]
    blocks: Option<usize>,
    #[arg(long)]
    crossover: Option<usize>,
    /// Cross-product cap of weighted OV cells.
    #[arg(long)]
    cap: Option<usize>,
    #[arg(long)]
    prime_scale: Option<f64>,
    #[arg(long)]
    residue_trials: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Ov,
    Entropy,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance and print its result record.
    Solve {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t = Algorithm::Rep)]
        algo: Algorithm,
        /// Space budget exponent for `--algo budget`.
        #[arg(long)]
        budget: Option<f64>,
        /// Record wall time (output is then not reproducible).
        #[arg(long)]
        timing: bool,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Print a generated instance.
    Gen {
        #[arg(long, value_enum)]
        kind: InstanceKind,
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        bits: u32,
    },
    /// Run one experiment suite as CSV.
    Experiment {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Grid checks of the OV runtime and entropy inequalities.
    VerifyIneq {
        #[arg(long, value_enum, default_value_t = Family::All)]
        family: Family,
    },
    /// Build one random 1-cover and report its sparsity.
    Cover {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        /// Certificate size; picked automatically when absent.
        #[arg(long)]
        x: Option<usize>,
    },
    /// Edge list of the P4 graph for one draw of mixers and residues.
    P4Dump {
        #[command(flatten)]
        source: Source,
        /// Guess of the solution size, default n/2.
        #[arg(long)]
        size: Option<usize>,
        #[command(flatten)]
        tuning: Tuning,
    },
}

impl Tuning {
    fn overrides(&self) -> Overrides {
        Overrides {
            mu: self.mu,
            lambda0: self.lambda0,
            eps0: self.eps0,
            blocks: self.blocks,
            crossover: self.crossover,
            product_cap: self.cap,
            prime_scale: self.prime_scale,
            residue_trials: self.residue_trials,
        }
    }
}

impl Source {
    fn load(&self, seed: u64) -> Result<SubsetSumInstance, CliError> {
        match (&self.input, self.kind) {
            (Some(path), _) => Ok(SubsetSumInstance::parse(&std::fs::read_to_string(path)?)?),
            (None, Some(kind)) => generate_instance(&mut Rng::new(seed), kind, self.n, self.bits),
            (None, None) => Err(CliError::Usage("give --input FILE or --kind KIND".into())),
        }
    }
}

fn base_config(common: &Common) -> ExperimentConfig {
    ExperimentConfig { seed: common.seed, trials: common.trials, preset: common.preset, format: common.format, ..Default::default() }
}

fn run(cli: Cli) -> Result<String, CliError> {
    let common = &cli.common;
    let mut config = base_config(common);
    match cli.command {
        Command::Solve { source, algo, budget, timing, tuning } => {
            config.algorithm = algo;
            config.budget_exponent = budget;
            config.timing = timing;
            config.overrides = tuning.overrides();
            config.solver_config()?;
            let inst = source.load(common.seed)?;
            Ok(run_solve(&config, &inst)?.render(common.format))
        }
        Command::Gen { kind, n, bits } => {
            let inst = generate_instance(&mut Rng::new(common.seed), kind, n, bits)?;
            Ok(match common.format {
                Format::Text => inst.to_text(),
                Format::Json => {
                    let v = serde_json::json!({ "n": inst.n(), "target": inst.target(), "weights": inst.weights() });
                    serde_json::to_string_pretty(&v).expect("serializes") + "\n"
                }
                Format::Csv => {
                    let ws: Vec<String> = inst.weights().iter().map(u64::to_string).collect();
                    format!("n,target,weights\n{},{},{}\n", inst.n(), inst.target(), ws.join(";"))
                }
            })
        }
        Command::Experiment { suite, n, d, tuning } => {
            config.overrides = tuning.overrides();
            run_experiment_with(&config, suite, SuiteParams { n, d })
        }
        Command::VerifyIneq { family } => {
            let ov = || run_experiment_with(&config, Suite::OvInequality, SuiteParams::default());
            Ok(match family {
                Family::Ov => ov()?,
                Family::Entropy => entropy_report(),
                Family::All => format!("{}\n{}", ov()?, entropy_report()),
            })
        }
        Command::Cover { d, p, q, x } => {
            let mut rng = Rng::new(common.seed);
            let cover = build_cover(&mut rng, d, p, q, x)?;
            let rep = measure_sparsity(&cover);
            let valid = if d <= 16 { cover_validity(&cover)?.to_string() } else { "unchecked".into() };
            Ok(match common.format {
                Format::Json => {
                    let v = serde_json::json!({
                        "seed": common.seed, "d": rep.d, "p": rep.p, "q": rep.q, "x": rep.x, "z": rep.z,
                        "sparsity": rep.sparsity, "analytic_bound": rep.bound, "floor_value": rep.floor,
                        "ratio": rep.sparsity / rep.bound, "valid": valid,
                    });
                    serde_json::to_string_pretty(&v).expect("serializes") + "\n"
                }
                _ => format!("seed,{},valid\n{},{},{valid}\n", SparsityReport::CSV_HEADER, common.seed, rep.csv_row()),
            })
        }
        Command::P4Dump { source, size, tuning } => {
            config.overrides = tuning.overrides();
            let cfg = config.solver_config()?;
            let inst = source.load(common.seed)?;
            let mut rng = Rng::new(common.seed);
            let lists = sample_lists(&mut rng, &inst, &cfg, size.unwrap_or(inst.n() / 2))?;
            Ok(dump_edge_list(&build_p4_graph(&lists)?))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.common.out.clone();
    let result = run(cli).and_then(|text| match &out {
        Some(path) => std::fs::write(path, text).map_err(CliError::from),
        None => {
            print!("{text}");
            Ok(())
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ssum: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

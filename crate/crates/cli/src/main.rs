use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use fairdiv_cli::{
    dump_csv, per_instance_csv, plot_table, read_instance, run_experiment, summary_csv,
    summary_path, write_instance_set, write_text, CliResult,
};
use fairdiv_core::generate::{GeneratorConfig, Model};
use fairdiv_core::sequences::Sequence;
use fairdiv_core::{Allocation, DEFAULT_BUDGET};

#[derive(Parser)]
#[command(
    name = "fairdiv",
    version,
    about = "Classify allocations of indivisible goods on exact fairness and efficiency scales"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Uniform,
    SinglePeaked,
}

impl From<ModelArg> for Model {
    fn from(value: ModelArg) -> Model {
        match value {
            ModelArg::Uniform => Model::Uniform,
            ModelArg::SinglePeaked => Model::SinglePeaked,
        }
    }
}

#[derive(clap::Args)]
struct GenArgs {
    /// Weight generation model
    #[arg(long, value_enum, default_value_t = ModelArg::Uniform)]
    model: ModelArg,
    /// Number of agents
    #[arg(long)]
    agents: usize,
    /// Number of objects
    #[arg(long)]
    objects: usize,
    /// Number of instances to generate
    #[arg(long)]
    count: usize,
    /// Master seed; every output is a pure function of the flags
    #[arg(long)]
    seed: u64,
    /// Weights are drawn uniformly from 0..=weight-cap
    #[arg(long, default_value_t = 100)]
    weight_cap: u32,
}

impl GenArgs {
    fn config(&self) -> GeneratorConfig {
        GeneratorConfig {
            model: self.model.into(),
            agents: self.agents,
            objects: self.objects,
            weight_cap: self.weight_cap,
            seed: self.seed,
            count: self.count,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate random instances into a directory
    Gen {
        #[command(flatten)]
        gen: GenArgs,
        /// Output directory (created if missing)
        #[arg(long)]
        out: PathBuf,
    },
    /// Full report on one allocation: utilities, levels, certificates
    Analyze {
        /// Instance file
        instance: PathBuf,
        /// Allocation, e.g. 1,4|2|3
        allocation: String,
        /// Cap on exhaustive enumeration (n^m allocations, n*2^m constraints)
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Execute a sequence, or find a sequence generating an allocation
    Sequence {
        /// Instance file
        instance: PathBuf,
        /// Sequence to execute, e.g. 2,1,2
        #[arg(long, conflicts_with = "allocation", required_unless_present = "allocation")]
        sequence: Option<String>,
        /// Allocation to sequence, e.g. 1,2|3
        #[arg(long)]
        allocation: Option<String>,
    },
    /// One-line fairness and efficiency classification of an allocation
    Classify {
        /// Instance file
        instance: PathBuf,
        /// Allocation, e.g. 1,4|2|3
        allocation: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Classify all n^m allocations of generated instances and emit CSVs
    Experiment {
        #[command(flatten)]
        gen: GenArgs,
        /// Per-instance cell counts CSV; the cross-instance summary goes to
        /// <csv>-summary.<ext>
        #[arg(long)]
        csv: PathBuf,
        /// Whitespace-separated table for plotting tools
        #[arg(long)]
        plot: PathBuf,
        /// Optional per-allocation classification dump
        #[arg(long)]
        dump: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Gen { gen, out } => {
            let paths = write_instance_set(&gen.config(), &out)?;
            println!("wrote {} instances to {}", paths.len(), out.display());
        }
        Command::Analyze {
            instance,
            allocation,
            budget,
        } => {
            let inst = read_instance(&instance)?;
            let alloc = Allocation::parse_full(&allocation, inst.n(), inst.m())?;
            print!("{}", fairdiv_cli::report::analyze_report(&inst, &alloc, budget)?);
        }
        Command::Sequence {
            instance,
            sequence,
            allocation,
        } => {
            let inst = read_instance(&instance)?;
            if let Some(text) = sequence {
                let seq = Sequence::parse(&text, inst.n())?;
                if seq.len() != inst.m() {
                    return Err(fairdiv_core::Error::Parse(format!(
                        "sequence `{text}` has {} picks, expected {}",
                        seq.len(),
                        inst.m()
                    ))
                    .into());
                }
                print!("{}", fairdiv_cli::report::sequence_executions(&inst, &seq));
            } else if let Some(text) = allocation {
                let alloc = Allocation::parse_full(&text, inst.n(), inst.m())?;
                print!("{}", fairdiv_cli::report::sequence_verdict(&inst, &alloc));
            }
        }
        Command::Classify {
            instance,
            allocation,
            budget,
        } => {
            let inst = read_instance(&instance)?;
            let alloc = Allocation::parse_full(&allocation, inst.n(), inst.m())?;
            println!("{}", fairdiv_cli::report::classify_line(&inst, &alloc, budget)?);
        }
        Command::Experiment {
            gen,
            csv,
            plot,
            dump,
            budget,
        } => {
            let config = gen.config();
            let (summary, records) = run_experiment(&config, budget, dump.is_some())?;
            write_text(&csv, &per_instance_csv(&summary))?;
            write_text(&summary_path(&csv), &summary_csv(&summary))?;
            write_text(&plot, &plot_table(&summary))?;
            if let Some(dump_path) = dump {
                write_text(&dump_path, &dump_csv(&records))?;
            }
            println!(
                "classified {} instances ({} allocations each)",
                summary.matrices.len(),
                summary.matrices.first().map_or(0, |m| m.total())
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

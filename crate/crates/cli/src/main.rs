//! Command-line front end for the projection/embedding experiment
//! pipeline.

mod commands;
mod config;
mod pipeline;

use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand, ValueEnum};
use ontoproj_core::eval::EvalMode;
use ontoproj_core::kge::{EarlyStop, ModelTag, Norm, TrainConfig};
use ontoproj_core::ontology::SplitPattern;
use ontoproj_core::projection::Method;

use config::{build_method, ExperimentConfig};

#[derive(Parser)]
#[command(
    name = "ontoproj",
    version,
    about = "Project ontologies into graphs, embed them, and rank candidate axioms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodName {
    Taxonomy,
    Owl2vecstar,
    Rdf,
    Patterns,
}

impl MethodName {
    fn as_str(&self) -> &'static str {
        match self {
            MethodName::Taxonomy => "taxonomy",
            MethodName::Owl2vecstar => "owl2vecstar",
            MethodName::Rdf => "rdf",
            MethodName::Patterns => "patterns",
        }
    }
}

#[derive(Args, Clone)]
struct MethodArgs {
    /// Projection method
    #[arg(long, value_enum)]
    method: MethodName,
    /// Relational pattern file (patterns method; built-in defaults
    /// otherwise)
    #[arg(long)]
    patterns_file: Option<PathBuf>,
    /// Do not emit subclassof⁻¹ / type⁻¹ mirror edges (owl2vecstar)
    #[arg(long)]
    no_inverse_edges: bool,
    /// Project ∃ and ∀ onto the same edge (patterns method)
    #[arg(long)]
    conflate_quantifiers: bool,
}

impl MethodArgs {
    fn build(&self) -> Result<Method> {
        build_method(
            self.method.as_str(),
            self.patterns_file.as_deref(),
            !self.no_inverse_edges,
            self.conflate_quantifiers,
        )
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse an ontology and report its signature
    Parse {
        ontology: PathBuf,
        /// Write the canonical serialization here
        #[arg(long)]
        out: Option<PathBuf>,
        /// Verify that serialize ∘ parse is the identity on every axiom
        #[arg(long)]
        check_roundtrip: bool,
    },
    /// Compute the EL deductive closure as a TSV of sub/ex facts
    Reason {
        ontology: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Remove a seeded random fraction of sub or ex axioms
    Split {
        ontology: PathBuf,
        #[arg(long)]
        pattern: SplitPattern,
        #[arg(long)]
        fraction: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out_reduced: PathBuf,
        #[arg(long)]
        out_removed: PathBuf,
    },
    /// Project an ontology into a relational graph directory
    Project {
        ontology: PathBuf,
        #[command(flatten)]
        method: MethodArgs,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Train a translational embedding on a graph directory
    Train {
        #[arg(long)]
        graph_dir: PathBuf,
        #[arg(long, default_value = "transe")]
        model: ModelTag,
        #[arg(long, default_value = "l2")]
        norm: Norm,
        #[arg(long, default_value_t = 64)]
        dimension: usize,
        #[arg(long, default_value_t = 0.4)]
        margin: f64,
        #[arg(long, default_value_t = 0.0)]
        l2: f64,
        #[arg(long, default_value_t = 4096)]
        batch_size: usize,
        #[arg(long, default_value_t = 0.01)]
        learning_rate: f64,
        #[arg(long, default_value_t = 1000)]
        epochs: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        negatives: usize,
        /// Also corrupt heads when sampling negatives
        #[arg(long)]
        corrupt_heads: bool,
        /// Reject negatives that exist as graph edges
        #[arg(long)]
        filtered_negatives: bool,
        /// Disable the loss-plateau early stop
        #[arg(long)]
        no_early_stop: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score a single axiom against a trained model
    Score {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        graph_dir: PathBuf,
        #[command(flatten)]
        method: MethodArgs,
        /// Axiom in functional syntax, e.g. 'SubClassOf(:A :B)'
        #[arg(long)]
        axiom: String,
    },
    /// Rank a test set and report MR / Hits@k / AUC, raw and filtered
    Evaluate {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        graph_dir: PathBuf,
        #[command(flatten)]
        method: MethodArgs,
        /// Test axioms, one per line in functional syntax
        #[arg(long)]
        test: PathBuf,
        /// Ontology providing the candidate class pool
        #[arg(long)]
        ontology: PathBuf,
        /// Closure TSV used for filtered metrics
        #[arg(long)]
        closure: PathBuf,
        #[arg(long, default_value = "a")]
        mode: EvalMode,
        /// Rank ties optimistically instead of pessimistically
        #[arg(long)]
        optimistic_ties: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full pipeline from a config file (both regimes)
    Run {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        overrides: RunOverrides,
    },
    /// Sweep the hyperparameter grid and select by validation mean rank
    Grid {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        overrides: RunOverrides,
    },
    /// Report projection properties and edge statistics
    Analyze {
        ontology: PathBuf,
        #[command(flatten)]
        method: MethodArgs,
        /// Second method to intersect edges with
        #[arg(long, value_enum)]
        compare: Option<MethodName>,
    },
}

/// Command-line overrides for config-driven commands.
#[derive(Args, Clone, Default)]
struct RunOverrides {
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    ontology: Option<PathBuf>,
    #[arg(long, value_enum)]
    method: Option<MethodName>,
    #[arg(long)]
    split_pattern: Option<SplitPattern>,
    #[arg(long)]
    fraction: Option<f64>,
    #[arg(long)]
    model: Option<ModelTag>,
    #[arg(long)]
    norm: Option<Norm>,
    #[arg(long)]
    dimension: Option<usize>,
    #[arg(long)]
    margin: Option<f64>,
    #[arg(long)]
    l2: Option<f64>,
    #[arg(long)]
    batch_size: Option<usize>,
    #[arg(long)]
    learning_rate: Option<f64>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    mode: Option<EvalMode>,
}

impl RunOverrides {
    fn apply(&self, config: &mut ExperimentConfig) {
        if let Some(dir) = &self.out_dir {
            config.output_dir = dir.clone();
        }
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(path) = &self.ontology {
            config.ontology = path.clone();
        }
        if let Some(method) = self.method {
            config.projection.method = method.as_str().to_owned();
        }
        if let Some(pattern) = self.split_pattern {
            config.split.pattern = pattern.as_str().to_owned();
        }
        if let Some(fraction) = self.fraction {
            config.split.fraction = fraction;
        }
        if let Some(model) = self.model {
            config.train.model = model.to_string();
        }
        if let Some(norm) = self.norm {
            config.train.norm = norm.to_string();
        }
        if let Some(dimension) = self.dimension {
            config.train.dimension = dimension;
        }
        if let Some(margin) = self.margin {
            config.train.margin = margin;
        }
        if let Some(l2) = self.l2 {
            config.train.l2 = l2;
        }
        if let Some(batch_size) = self.batch_size {
            config.train.batch_size = batch_size;
        }
        if let Some(learning_rate) = self.learning_rate {
            config.train.learning_rate = learning_rate;
        }
        if let Some(epochs) = self.epochs {
            config.train.epochs = epochs;
        }
        if let Some(mode) = self.mode {
            config.evaluation.mode = mode.to_string();
        }
    }
}

fn main() {
    if let Err(err) = run() {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

fn run() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Parse { ontology, out, check_roundtrip } => {
            commands::cmd_parse(&ontology, out.as_deref(), check_roundtrip)
        }
        Command::Reason { ontology, out } => commands::cmd_reason(&ontology, &out),
        Command::Split { ontology, pattern, fraction, seed, out_reduced, out_removed } => {
            commands::cmd_split(&ontology, pattern, fraction, seed, &out_reduced, &out_removed)
        }
        Command::Project { ontology, method, out_dir } => {
            commands::cmd_project(&ontology, &method.build()?, &out_dir)
        }
        Command::Train {
            graph_dir,
            model,
            norm,
            dimension,
            margin,
            l2,
            batch_size,
            learning_rate,
            epochs,
            seed,
            negatives,
            corrupt_heads,
            filtered_negatives,
            no_early_stop,
            out,
        } => {
            let config = TrainConfig {
                model,
                norm,
                dimension,
                margin,
                l2,
                batch_size,
                learning_rate,
                epochs,
                seed,
                negatives_per_positive: negatives,
                corrupt_heads,
                filtered_negatives,
                early_stop: (!no_early_stop).then(EarlyStop::default),
            };
            commands::cmd_train(&graph_dir, config, &out)
        }
        Command::Score { model, graph_dir, method, axiom } => {
            commands::cmd_score(&model, &graph_dir, &method.build()?, &axiom)
        }
        Command::Evaluate {
            model,
            graph_dir,
            method,
            test,
            ontology,
            closure,
            mode,
            optimistic_ties,
            out,
        } => commands::cmd_evaluate(
            &model,
            &graph_dir,
            &method.build()?,
            &test,
            &ontology,
            &closure,
            mode,
            optimistic_ties,
            out.as_deref(),
        ),
        Command::Run { config, overrides } => {
            let mut config = ExperimentConfig::load(&config)?;
            overrides.apply(&mut config);
            config.validate()?;
            pipeline::cmd_run(&config)
        }
        Command::Grid { config, overrides } => {
            let mut config = ExperimentConfig::load(&config)?;
            overrides.apply(&mut config);
            config.validate()?;
            let grid = config.grid.clone().unwrap_or_default();
            pipeline::cmd_grid(&config, &grid)
        }
        Command::Analyze { ontology, method, compare } => {
            let compare_method = match compare {
                Some(name) => Some(build_method(name.as_str(), None, true, false)?),
                None => None,
            };
            commands::cmd_analyze(&ontology, &method.build()?, compare_method.as_ref())
        }
    }
}

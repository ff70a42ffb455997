use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use flowids::linear::Penalty;
use flowids::pipeline::{self, EvalSource, ModelKind, PipelineConfig, PipelineError};
use flowids::preprocess::UnknownPolicy;

#[derive(Parser)]
#[command(
    name = "flowids",
    version,
    about = "Train and evaluate network-flow intrusion classifiers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a model and write model.json and manifest.json
    Train(ConfigArgs),
    /// Score a saved model and write metrics.json
    Evaluate(EvaluateArgs),
    /// Render figures for a saved model
    Report(ReportArgs),
    /// Train, evaluate and report both models
    RunAll(ConfigArgs),
}

#[derive(Args)]
struct ConfigArgs {
    /// TOML or JSON config; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    data: Option<PathBuf>,
    /// Columns to drop (comma separated)
    #[arg(long, value_delimiter = ',')]
    drop: Option<Vec<String>>,
    /// Categorical columns (comma separated)
    #[arg(long, value_delimiter = ',')]
    categorical: Option<Vec<String>>,
    #[arg(long)]
    label: Option<String>,
    #[arg(long)]
    test_fraction: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// logreg or rf
    #[arg(long)]
    model: Option<ModelKind>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    trees: Option<usize>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// none, l1 or l2
    #[arg(long)]
    penalty: Option<Penalty>,
    #[arg(long)]
    lambda: Option<f64>,
}

impl ConfigArgs {
    fn resolve(self) -> flowids::Result<PipelineConfig> {
        let mut c = match &self.config {
            Some(path) => PipelineConfig::from_file(path)?,
            None => PipelineConfig::default(),
        };
        if let Some(v) = self.data {
            c.data = v;
        }
        if let Some(v) = self.drop {
            c.drop = v.into_iter().filter(|s| !s.is_empty()).collect();
        }
        if let Some(v) = self.categorical {
            c.categorical = v.into_iter().filter(|s| !s.is_empty()).collect();
        }
        if let Some(v) = self.label {
            c.label = v;
        }
        if let Some(v) = self.test_fraction {
            c.test_fraction = v;
        }
        if let Some(v) = self.seed {
            c.seed = v;
        }
        if let Some(v) = self.model {
            c.model = v;
        }
        if let Some(v) = self.out {
            c.out = v;
        }
        if let Some(v) = self.trees {
            c.forest.n_trees = v;
        }
        if let Some(v) = self.max_iter {
            c.logistic.max_iterations = v;
        }
        if let Some(v) = self.penalty {
            c.logistic.penalty = v;
        }
        if let Some(v) = self.lambda {
            c.logistic.lambda = Some(v);
        }
        Ok(c)
    }
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    model: PathBuf,
    /// Evaluate on the test rows recorded at training time
    #[arg(long, required_unless_present = "data")]
    manifest: Option<PathBuf>,
    /// Evaluate on every row of this CSV (or override the manifest's data path)
    #[arg(long)]
    data: Option<PathBuf>,
    /// Treat unseen categories as all-zero blocks instead of failing
    #[arg(long)]
    allow_unknown: bool,
    /// Output directory (defaults to the model's directory)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    metrics: PathBuf,
    /// Data for the correlation heatmap (defaults to the training data)
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parent_dir(path: &std::path::Path) -> PathBuf {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    }
}

fn config_error(e: flowids::Error) -> PipelineError {
    PipelineError {
        stage: pipeline::Stage::Config,
        source: e,
    }
}

fn run(command: Command) -> Result<(), PipelineError> {
    match command {
        Command::Train(args) => {
            let config = args.resolve().map_err(config_error)?;
            let outcome = pipeline::train(&config)?;
            print!("{}", outcome.evaluation);
            println!("wrote {}", outcome.model_path.display());
            println!("wrote {}", outcome.manifest_path.display());
        }
        Command::Evaluate(args) => {
            let source = match args.manifest {
                Some(path) => EvalSource::Manifest { path, data: args.data },
                None => EvalSource::Data(args.data.expect("clap enforces --data")),
            };
            let policy = args.allow_unknown.then_some(UnknownPolicy::AllZeros);
            let out = args.out.unwrap_or_else(|| parent_dir(&args.model));
            let evaluation = pipeline::evaluate(&args.model, &source, policy, &out)?;
            print!("{evaluation}");
            println!("wrote {}", out.join("metrics.json").display());
        }
        Command::Report(args) => {
            let out = args.out.unwrap_or_else(|| parent_dir(&args.model));
            let outcome = pipeline::report(&args.model, &args.metrics, &out, args.data.as_deref())?;
            for w in &outcome.warnings {
                eprintln!("warning: {w}");
            }
            for p in &outcome.written {
                println!("wrote {}", p.display());
            }
        }
        Command::RunAll(args) => {
            let config = args.resolve().map_err(config_error)?;
            for outcome in pipeline::run_all(&config)? {
                print!("{}", outcome.evaluation);
                for w in &outcome.report.warnings {
                    eprintln!("warning: {w}");
                }
                println!("outputs in {}", outcome.dir.display());
                println!();
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

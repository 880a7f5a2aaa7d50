use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// KMS, trace and ground-state analysis of generalized gauge actions on
/// finite graph C*-algebras.
#[derive(Parser, Debug)]
#[command(name = "graphkms", version, about)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct Global {
    /// Graph document (text or JSON); defaults to the bundled example graph
    #[arg(long, global = true)]
    pub graph: Option<PathBuf>,

    /// Weight profile to apply; the document's base weights if omitted
    #[arg(long, global = true)]
    pub profile: Option<String>,

    /// Write the output to a file in this directory instead of stdout
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Components, closures, sign profiles and critical temperatures
    Analyze,

    /// Classify components and sinks, and list the extremal KMS states at β
    Classify {
        #[arg(long, allow_negative_numbers = true)]
        beta: f64,
    },

    /// Where each sink and component contributes KMS states (β ≠ 0)
    Spectrum {
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
    },

    /// Evaluate a KMS state given by its convex decomposition on S_μ S_ν*
    StateEval {
        #[arg(long, allow_negative_numbers = true)]
        beta: f64,
        /// JSON file with the state's terms
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        word: WordArgs,
    },

    /// Evaluate the non-gauge-invariant state of a zero-weight circular component
    Omega {
        /// Component label, e.g. C3
        #[arg(long)]
        component: String,
        /// Unit complex number as RE,IM
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, allow_negative_numbers = true)]
        beta: f64,
        #[command(flatten)]
        word: WordArgs,
    },

    /// Structure of the trace states (β = 0)
    Trace,

    /// Potentials, tight subgraph and ground-state census
    Ground,

    /// Dump the loaded graph document as JSON or text
    Export {
        #[arg(long, value_enum, default_value_t = ExportFormat::Json)]
        format: ExportFormat,
    },

    /// Check the KMS condition on random word pairs for every extremal state
    KmsCheck {
        #[arg(long, default_value_t = 2015)]
        seed: u64,
        /// Word pairs per state
        #[arg(long, default_value_t = 200)]
        pairs: usize,
        /// Maximum path length in sampled words
        #[arg(long, default_value_t = 6)]
        max_len: usize,
    },
}

#[derive(Args, Debug)]
pub struct WordArgs {
    /// Edge ids `e1,e2,...`, or `@v` for the vertex projection
    #[arg(long)]
    pub mu: String,
    #[arg(long)]
    pub nu: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Ascii,
    Svg,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Json,
    Text,
}

impl Command {
    /// Base name of the output file under `--out-dir`.
    pub fn name(&self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Classify { .. } => "classify",
            Command::Spectrum { .. } => "spectrum",
            Command::StateEval { .. } => "state-eval",
            Command::Omega { .. } => "omega",
            Command::Trace => "trace",
            Command::Ground => "ground",
            Command::Export { .. } => "export",
            Command::KmsCheck { .. } => "kms-check",
        }
    }
}

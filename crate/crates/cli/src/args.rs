//! Command-line surface. Values that also appear in the config file are
//! optional here; flags override file values.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "softskill",
    version,
    about = "Detect soft-skill phrases in job-market text and decide whether they describe the candidate"
)]
pub struct Cli {
    /// RNG seed for anything stochastic (embedding init, shuffling, dropout).
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// TOML config file; flags override file values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Suppress progress output on stderr.
    #[arg(long, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print phrase/cluster counts and the phrase-length histogram.
    LexiconStats {
        #[arg(long)]
        lexicon: Option<PathBuf>,
    },

    /// Print the normalized token sequence of a text (debugging aid).
    Preprocess {
        #[arg(long)]
        text: String,
    },

    /// Find skill occurrences in a corpus and write context snippets.
    Match {
        #[arg(long)]
        lexicon: Option<PathBuf>,
        /// Corpus file: plain text (one document per line) or CSV.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Context tokens kept on each side of a match.
        #[arg(long)]
        window: Option<usize>,
        /// `plain` or `csv`.
        #[arg(long)]
        format: Option<String>,
        /// Text column name (CSV input).
        #[arg(long)]
        text_column: Option<String>,
    },

    /// Turn snippets into classifier inputs under a representation.
    Transform {
        /// unmodified | masked | masked-embed | tagged
        #[arg(long)]
        mode: Option<String>,
        #[arg(long, value_name = "SNIPPETS_JSONL")]
        r#in: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Word vector file (required for masked-embed).
        #[arg(long)]
        embeddings: Option<PathBuf>,
        /// Vector dimensionality.
        #[arg(long)]
        dim: Option<usize>,
    },

    /// Build weakly-labeled training data from annotation votes.
    Augment {
        #[arg(long)]
        annotations: PathBuf,
        #[arg(long)]
        corpus_snippets: PathBuf,
        /// Non-candidate vote fraction above which a skill seeds negatives.
        #[arg(long)]
        neg_ratio: Option<f64>,
        /// Maximum snippets mined per polarity.
        #[arg(long)]
        limit: Option<usize>,
        /// Context phrases that disqualify a snippet from negative mining
        /// (repeatable; defaults to "candidate", "individual", "looking for").
        #[arg(long = "exclude")]
        exclusions: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },

    /// Train a classifier on labeled represented inputs.
    Train {
        /// mean-logistic | cnn | lstm
        #[arg(long)]
        model: Option<String>,
        /// unmodified | masked | masked-embed | tagged
        #[arg(long)]
        mode: Option<String>,
        #[arg(long, value_name = "INPUTS_JSONL")]
        train: PathBuf,
        #[arg(long)]
        embeddings: Option<PathBuf>,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        learning_rate: Option<f64>,
        #[arg(long)]
        batch_size: Option<usize>,
        #[arg(long)]
        max_epochs: Option<usize>,
        #[arg(long)]
        patience: Option<usize>,
        #[arg(long)]
        dropout: Option<f64>,
        #[arg(long)]
        hidden_size: Option<usize>,
        #[arg(long)]
        max_doc_len: Option<usize>,
        /// CNN filter widths, e.g. --filter-widths 2,3,4
        #[arg(long, value_delimiter = ',')]
        filter_widths: Option<Vec<usize>>,
        #[arg(long)]
        filters_per_width: Option<usize>,
    },

    /// Calibrate a threshold and report metrics on a labeled test set.
    Evaluate {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_name = "INPUTS_JSONL")]
        test: PathBuf,
        #[arg(long)]
        target_precision: Option<f64>,
        /// Also write the report as a machine-readable record.
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Find the decision threshold meeting a precision target.
    Calibrate {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_name = "INPUTS_JSONL")]
        data: PathBuf,
        #[arg(long)]
        target_precision: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Match a corpus and annotate every occurrence with the model's
    /// probability and a keep/drop decision.
    Disambiguate {
        #[arg(long)]
        lexicon: Option<PathBuf>,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        threshold: Option<f64>,
        #[arg(long)]
        embeddings: Option<PathBuf>,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        window: Option<usize>,
        #[arg(long)]
        format: Option<String>,
        #[arg(long)]
        text_column: Option<String>,
    },

    /// Per-skill raw vs. post-filter occurrence counts (TSV).
    FilterReport {
        #[arg(long)]
        lexicon: Option<PathBuf>,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        threshold: Option<f64>,
        #[arg(long)]
        embeddings: Option<PathBuf>,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        window: Option<usize>,
        #[arg(long)]
        format: Option<String>,
        #[arg(long)]
        text_column: Option<String>,
    },

    /// Verify backpropagation against finite differences (deterministic;
    /// runs a pinned small-model configuration).
    GradientCheck {
        /// all | mean-logistic | cnn | lstm
        #[arg(long, default_value = "all")]
        kind: String,
    },
}

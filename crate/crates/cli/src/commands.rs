//! Subcommand implementations: each one wires library stages together,
//! embeds run provenance into its output artifacts, and reports a short
//! summary on stderr.

use std::io::Write;
use std::path::{Path, PathBuf};

use softskill::augment::{
    mine_weak_labels, select_seed_skills, AnnotationRecord, DEFAULT_EXCLUSION_PHRASES,
};
use softskill::embed::{load_embeddings, EmbeddingTable};
use softskill::eval::{calibrate_threshold, evaluate, filter_report};
use softskill::lexicon::{compute_stats, load_lexicon, SkillLexicon};
use softskill::matcher::{build_index, extract_snippet, find_matches, MatchIndex, Snippet};
use softskill::model::{gradient_check, load_model, save_model, train, ModelKind, TrainConfig};
use softskill::preprocess::normalize;
use softskill::records::{read_jsonl, write_jsonl, SnippetRecord};
use softskill::represent::{represent, Label, RepresentationMode, RepresentedInput};
use softskill::Error;

use crate::args::{Cli, Command};
use crate::config::{
    pick, require, FileConfig, Provenance, DEFAULT_EMBED_DIM, DEFAULT_SEED,
    DEFAULT_TARGET_PRECISION, DEFAULT_THRESHOLD,
};
use crate::error::CliError;
use crate::ingest::{ingest_corpus, CorpusFormat};

pub fn run(cli: Cli) -> Result<(), CliError> {
    let file = FileConfig::load(cli.config.as_deref())?;
    let seed = pick(cli.seed, file.seed, DEFAULT_SEED);
    let quiet = cli.quiet;
    match cli.command {
        Command::LexiconStats { lexicon } => lexicon_stats(lexicon, &file),
        Command::Preprocess { text } => {
            for token in normalize(&text) {
                println!("{token}");
            }
            Ok(())
        }
        Command::Match { lexicon, input, out, window, format, text_column } => match_cmd(
            MatchArgs { lexicon, input, out, window, format, text_column },
            &file,
            seed,
            quiet,
        ),
        Command::Transform { mode, r#in, out, embeddings, dim } => {
            transform(mode, r#in, out, embeddings, dim, &file, seed, quiet)
        }
        Command::Augment { annotations, corpus_snippets, neg_ratio, limit, exclusions, out } => {
            augment_cmd(annotations, corpus_snippets, neg_ratio, limit, exclusions, out, &file, seed, quiet)
        }
        Command::Train {
            model, mode, train, embeddings, dim, out,
            learning_rate, batch_size, max_epochs, patience, dropout,
            hidden_size, max_doc_len, filter_widths, filters_per_width,
        } => train_cmd(
            TrainArgs {
                model, mode, train, embeddings, dim, out,
                learning_rate, batch_size, max_epochs, patience, dropout,
                hidden_size, max_doc_len, filter_widths, filters_per_width,
            },
            &file,
            seed,
            quiet,
        ),
        Command::Evaluate { model, test, target_precision, out } => {
            evaluate_cmd(model, test, target_precision, out, &file, seed)
        }
        Command::Calibrate { model, data, target_precision, out } => {
            calibrate_cmd(model, data, target_precision, out, &file, seed)
        }
        Command::Disambiguate {
            lexicon, model, input, out, threshold, embeddings, dim, window, format, text_column,
        } => disambiguate(
            ScoreCorpusArgs { lexicon, model, corpus: input, out, threshold, embeddings, dim, window, format, text_column },
            &file,
            seed,
            quiet,
        ),
        Command::FilterReport {
            lexicon, model, corpus, out, threshold, embeddings, dim, window, format, text_column,
        } => filter_report_cmd(
            ScoreCorpusArgs { lexicon, model, corpus, out, threshold, embeddings, dim, window, format, text_column },
            &file,
            seed,
            quiet,
        ),
        Command::GradientCheck { kind } => gradient_check_cmd(&kind),
    }
}

fn progress(quiet: bool, message: std::fmt::Arguments<'_>) {
    if !quiet {
        eprintln!("{message}");
    }
}

fn lexicon_stats(lexicon: Option<PathBuf>, file: &FileConfig) -> Result<(), CliError> {
    let path = require(lexicon, file.lexicon.clone(), "--lexicon")?;
    let lexicon = load_lexicon(&path)?;
    let stats = compute_stats(&lexicon);
    println!("phrase_count: {}", stats.phrase_count);
    println!("cluster_count: {}", stats.cluster_count);
    println!("one_word_count: {}", stats.one_word_count);
    println!("max_length: {}", stats.max_length);
    println!("duplicates_collapsed: {}", lexicon.duplicate_count);
    println!("empty_skipped: {}", lexicon.empty_count);
    println!("length_histogram:");
    for (length, count) in &stats.length_histogram {
        println!("  {length}: {count}");
    }
    Ok(())
}

struct MatchArgs {
    lexicon: Option<PathBuf>,
    input: Option<PathBuf>,
    out: PathBuf,
    window: Option<usize>,
    format: Option<String>,
    text_column: Option<String>,
}

/// Matches every ingested unit, returning snippets in input order. Units
/// containing reserved tokens cannot be matched unambiguously and are
/// skipped with a warning.
fn match_units(
    units: &[(String, String)],
    index: &MatchIndex,
    window: usize,
) -> Result<(Vec<Snippet>, usize), CliError> {
    let mut snippets = Vec::new();
    let mut skipped = 0;
    for (source_id, text) in units {
        let tokens = normalize(text);
        let matches = match find_matches(&tokens, index) {
            Ok(matches) => matches,
            Err(Error::ReservedToken { token, .. }) => {
                log::warn!("skipping unit {source_id}: contains reserved token `{token}`");
                skipped += 1;
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        for m in matches {
            snippets.push(extract_snippet(&tokens, &m, window, source_id)?);
        }
    }
    Ok((snippets, skipped))
}

struct CorpusSetup {
    lexicon: SkillLexicon,
    units: Vec<(String, String)>,
    lexicon_path: PathBuf,
    corpus_path: PathBuf,
}

fn corpus_setup(
    lexicon: Option<PathBuf>,
    corpus: Option<PathBuf>,
    format: Option<String>,
    text_column: Option<String>,
    file: &FileConfig,
) -> Result<CorpusSetup, CliError> {
    let lexicon_path = require(lexicon, file.lexicon.clone(), "--lexicon")?;
    let corpus_path = require(corpus, file.corpus.clone(), "--input/--corpus")?;
    let format = CorpusFormat::parse(&pick(format, file.format.clone(), "plain".to_string()))?;
    let text_column = text_column.or_else(|| file.text_column.clone());
    let lexicon = load_lexicon(&lexicon_path)?;
    let units = ingest_corpus(&corpus_path, format, text_column.as_deref())?;
    Ok(CorpusSetup {
        lexicon,
        units,
        lexicon_path,
        corpus_path,
    })
}

fn match_cmd(args: MatchArgs, file: &FileConfig, seed: u64, quiet: bool) -> Result<(), CliError> {
    let window = pick(args.window, file.window, softskill::matcher::DEFAULT_WINDOW);
    let setup = corpus_setup(args.lexicon, args.input, args.format, args.text_column, file)?;
    let index = build_index(&setup.lexicon);
    let (snippets, skipped) = match_units(&setup.units, &index, window)?;
    let records: Vec<SnippetRecord> = snippets
        .iter()
        .map(|s| SnippetRecord::from_snippet(s, None))
        .collect();

    let mut provenance = Provenance::new("match", seed);
    provenance
        .set("lexicon", setup.lexicon_path.display().to_string())
        .set("input", setup.corpus_path.display().to_string())
        .set("window", window);
    write_jsonl(&args.out, Some(&provenance.meta()), &records)?;
    progress(
        quiet,
        format_args!(
            "matched {} snippet(s) across {} unit(s){}",
            records.len(),
            setup.units.len(),
            if skipped > 0 { format!(", {skipped} skipped") } else { String::new() }
        ),
    );
    Ok(())
}

fn load_table(
    embeddings: Option<PathBuf>,
    dim: Option<usize>,
    file: &FileConfig,
    seed: u64,
) -> Result<Option<(EmbeddingTable, PathBuf, usize)>, CliError> {
    let path = embeddings.or_else(|| file.embeddings.clone());
    let Some(path) = path else { return Ok(None) };
    let dim = pick(dim, file.embedding_dim, DEFAULT_EMBED_DIM);
    let table = load_embeddings(&path, dim, seed)?;
    Ok(Some((table, path, dim)))
}

#[allow(clippy::too_many_arguments)]
fn transform(
    mode: Option<String>,
    input: PathBuf,
    out: PathBuf,
    embeddings: Option<PathBuf>,
    dim: Option<usize>,
    file: &FileConfig,
    seed: u64,
    quiet: bool,
) -> Result<(), CliError> {
    let mode = RepresentationMode::parse(&require(mode, file.mode.clone(), "--mode")?)?;
    let table = load_table(embeddings, dim, file, seed)?;
    let records: Vec<SnippetRecord> = read_jsonl(&input)?;
    let inputs: Vec<RepresentedInput> = records
        .iter()
        .map(|record| {
            let mut represented =
                represent(&record.to_snippet(), mode, table.as_ref().map(|(t, _, _)| t))?;
            represented.label = record.label;
            Ok(represented)
        })
        .collect::<Result<_, Error>>()?;

    let mut provenance = Provenance::new("transform", seed);
    provenance
        .set("mode", mode.as_str())
        .set("in", input.display().to_string());
    if let Some((_, path, dim)) = &table {
        provenance
            .set("embeddings", path.display().to_string())
            .set("dim", dim);
    }
    write_jsonl(&out, Some(&provenance.meta()), &inputs)?;
    progress(quiet, format_args!("transformed {} snippet(s) to mode {mode}", inputs.len()));
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn augment_cmd(
    annotations: PathBuf,
    corpus_snippets: PathBuf,
    neg_ratio: Option<f64>,
    limit: Option<usize>,
    exclusions: Vec<String>,
    out: PathBuf,
    file: &FileConfig,
    seed: u64,
    quiet: bool,
) -> Result<(), CliError> {
    let neg_ratio = pick(neg_ratio, file.neg_ratio, softskill::augment::DEFAULT_NEG_RATIO);
    let limit = pick(limit, file.limit, 15_000);
    let exclusions: Vec<String> = if exclusions.is_empty() {
        DEFAULT_EXCLUSION_PHRASES.iter().map(|s| s.to_string()).collect()
    } else {
        exclusions
    };
    let votes: Vec<AnnotationRecord> = read_jsonl(&annotations)?;
    let snippet_records: Vec<SnippetRecord> = read_jsonl(&corpus_snippets)?;
    let snippets: Vec<Snippet> = snippet_records.iter().map(|r| r.to_snippet()).collect();

    let seeds = select_seed_skills(&votes, neg_ratio);
    let negatives = mine_weak_labels(&snippets, &seeds.negative, Label::Negative, &exclusions, limit);
    let positives = mine_weak_labels(&snippets, &seeds.positive, Label::Positive, &exclusions, limit);

    let records: Vec<SnippetRecord> = negatives
        .iter()
        .chain(positives.iter())
        .map(|labeled| SnippetRecord::from_snippet(&labeled.snippet, Some(labeled.label)))
        .collect();

    let mut provenance = Provenance::new("augment", seed);
    provenance
        .set("annotations", annotations.display().to_string())
        .set("corpus_snippets", corpus_snippets.display().to_string())
        .set("neg_ratio", neg_ratio)
        .set("limit", limit)
        .set("exclusions", &exclusions);
    write_jsonl(&out, Some(&provenance.meta()), &records)?;
    progress(
        quiet,
        format_args!(
            "seeds: {} negative, {} positive; mined {} negative and {} positive snippet(s)",
            seeds.negative.len(),
            seeds.positive.len(),
            negatives.len(),
            positives.len()
        ),
    );
    Ok(())
}

struct TrainArgs {
    model: Option<String>,
    mode: Option<String>,
    train: PathBuf,
    embeddings: Option<PathBuf>,
    dim: Option<usize>,
    out: PathBuf,
    learning_rate: Option<f64>,
    batch_size: Option<usize>,
    max_epochs: Option<usize>,
    patience: Option<usize>,
    dropout: Option<f64>,
    hidden_size: Option<usize>,
    max_doc_len: Option<usize>,
    filter_widths: Option<Vec<usize>>,
    filters_per_width: Option<usize>,
}

fn train_cmd(args: TrainArgs, file: &FileConfig, seed: u64, quiet: bool) -> Result<(), CliError> {
    let kind = ModelKind::parse(&require(args.model, file.model.clone(), "--model")?)?;
    let mode = RepresentationMode::parse(&require(args.mode, file.mode.clone(), "--mode")?)?;
    let (table, embeddings_path, dim) = load_table(args.embeddings, args.dim, file, seed)?
        .ok_or_else(|| CliError::Usage("missing required value: --embeddings".to_string()))?;

    let defaults = TrainConfig::new(kind, mode);
    let t = &file.train;
    let config = TrainConfig {
        model_kind: kind,
        mode,
        learning_rate: pick(args.learning_rate, t.learning_rate, defaults.learning_rate),
        batch_size: pick(args.batch_size, t.batch_size, defaults.batch_size),
        max_epochs: pick(args.max_epochs, t.max_epochs, defaults.max_epochs),
        patience: pick(args.patience, t.patience, defaults.patience),
        seed,
        dropout: args.dropout.or(t.dropout),
        max_doc_len: pick(args.max_doc_len, t.max_doc_len, defaults.max_doc_len),
        hidden_size: pick(args.hidden_size, t.hidden_size, defaults.hidden_size),
        filter_widths: pick(args.filter_widths, t.filter_widths.clone(), defaults.filter_widths),
        filters_per_width: pick(args.filters_per_width, t.filters_per_width, defaults.filters_per_width),
    };

    let dataset: Vec<RepresentedInput> = read_jsonl(&args.train)?;
    let (model, log) = train(&dataset, &table, &config)?;
    if !quiet {
        for stats in &log.epochs {
            eprintln!(
                "epoch {:>3}: loss {:.4}  val f1w {:.4}  val acc {:.4}",
                stats.epoch, stats.train_loss, stats.val_f1_weighted, stats.val_accuracy
            );
        }
    }

    let mut provenance = Provenance::new("train", seed);
    provenance
        .set("model", kind.as_str())
        .set("mode", mode.as_str())
        .set("train", args.train.display().to_string())
        .set("embeddings", embeddings_path.display().to_string())
        .set("dim", dim)
        .set("learning_rate", config.learning_rate)
        .set("batch_size", config.batch_size)
        .set("max_epochs", config.max_epochs)
        .set("patience", config.patience)
        .set("dropout", config.effective_dropout())
        .set("hidden_size", config.hidden_size)
        .set("max_doc_len", config.max_doc_len)
        .set("filter_widths", &config.filter_widths)
        .set("filters_per_width", config.filters_per_width);
    save_model(&model, &args.out, Some(&provenance.meta()))?;
    progress(
        quiet,
        format_args!(
            "kept epoch {} (val f1w {:.4}, val acc {:.4}); checkpoint written to {}",
            log.best_epoch,
            log.best_val_f1_weighted,
            log.best_val_accuracy,
            args.out.display()
        ),
    );
    Ok(())
}

fn read_labeled_inputs(path: &Path) -> Result<(Vec<RepresentedInput>, Vec<Label>), CliError> {
    let inputs: Vec<RepresentedInput> = read_jsonl(path)?;
    let labels: Vec<Label> = inputs
        .iter()
        .map(|input| {
            input.label.ok_or_else(|| {
                CliError::Data(format!("{}: every record needs a label", path.display()))
            })
        })
        .collect::<Result<_, _>>()?;
    if labels.is_empty() {
        return Err(Error::EmptyDataset.into());
    }
    Ok((inputs, labels))
}

fn evaluate_cmd(
    model_path: PathBuf,
    test: PathBuf,
    target_precision: Option<f64>,
    out: Option<PathBuf>,
    file: &FileConfig,
    seed: u64,
) -> Result<(), CliError> {
    let target = pick(target_precision, file.target_precision, DEFAULT_TARGET_PRECISION);
    let (model, _) = load_model(&model_path)?;
    let (inputs, labels) = read_labeled_inputs(&test)?;
    let scores = model.scores(&inputs)?;
    let report = evaluate(&scores, &labels, target)?;
    print!("{}", report.render_text());
    if let Some(out) = out {
        let mut provenance = Provenance::new("evaluate", seed);
        provenance
            .set("model", model_path.display().to_string())
            .set("test", test.display().to_string())
            .set("target_precision", target);
        write_jsonl(&out, Some(&provenance.meta()), &[report])?;
    }
    Ok(())
}

fn calibrate_cmd(
    model_path: PathBuf,
    data: PathBuf,
    target_precision: Option<f64>,
    out: Option<PathBuf>,
    file: &FileConfig,
    seed: u64,
) -> Result<(), CliError> {
    let target = pick(target_precision, file.target_precision, DEFAULT_TARGET_PRECISION);
    let (model, _) = load_model(&model_path)?;
    let (inputs, labels) = read_labeled_inputs(&data)?;
    let scores = model.scores(&inputs)?;
    let calibration = calibrate_threshold(&scores, &labels, target)?;
    println!("threshold: {:.6}", calibration.threshold);
    println!("precision: {:.2}%", calibration.precision * 100.0);
    println!("recall: {:.2}%", calibration.recall * 100.0);
    println!("target_unattained: {}", calibration.target_unattained);
    if let Some(out) = out {
        let mut provenance = Provenance::new("calibrate", seed);
        provenance
            .set("model", model_path.display().to_string())
            .set("data", data.display().to_string())
            .set("target_precision", target);
        write_jsonl(&out, Some(&provenance.meta()), &[calibration])?;
    }
    Ok(())
}

struct ScoreCorpusArgs {
    lexicon: Option<PathBuf>,
    model: PathBuf,
    corpus: Option<PathBuf>,
    out: PathBuf,
    threshold: Option<f64>,
    embeddings: Option<PathBuf>,
    dim: Option<usize>,
    window: Option<usize>,
    format: Option<String>,
    text_column: Option<String>,
}

struct ScoredCorpus {
    lexicon: SkillLexicon,
    scored: Vec<(Snippet, f64)>,
    skipped_units: usize,
    provenance: Provenance,
}

/// Shared front half of `disambiguate` and `filter-report`: match the
/// corpus and score every snippet with the model.
fn score_corpus(
    args: &ScoreCorpusArgs,
    file: &FileConfig,
    seed: u64,
) -> Result<ScoredCorpus, CliError> {
    let window = pick(args.window, file.window, softskill::matcher::DEFAULT_WINDOW);
    let (model, _) = load_model(&args.model)?;
    let setup = corpus_setup(
        args.lexicon.clone(),
        args.corpus.clone(),
        args.format.clone(),
        args.text_column.clone(),
        file,
    )?;
    let table = if model.mode().uses_skill_vector() {
        let path = args
            .embeddings
            .clone()
            .or_else(|| file.embeddings.clone())
            .ok_or(Error::MissingEmbeddings)?;
        let dim = model.skill_dim();
        let requested = pick(args.dim, file.embedding_dim, dim);
        if requested != dim {
            return Err(CliError::Usage(format!(
                "--dim {requested} does not match the model's embedding dimension {dim}"
            )));
        }
        Some(load_embeddings(&path, dim, seed)?)
    } else {
        None
    };

    let index = build_index(&setup.lexicon);
    let (snippets, skipped_units) = match_units(&setup.units, &index, window)?;
    let mut scored = Vec::with_capacity(snippets.len());
    for snippet in snippets {
        let input = represent(&snippet, model.mode(), table.as_ref())?;
        let prediction = model.predict(&input)?;
        scored.push((snippet, prediction.probability_positive));
    }

    let mut provenance = Provenance::new("score-corpus", seed);
    provenance
        .set("lexicon", setup.lexicon_path.display().to_string())
        .set("corpus", setup.corpus_path.display().to_string())
        .set("model", args.model.display().to_string())
        .set("window", window);
    Ok(ScoredCorpus {
        lexicon: setup.lexicon,
        scored,
        skipped_units,
        provenance,
    })
}

#[derive(serde::Serialize)]
struct DisambiguationRecord {
    source_id: String,
    skill_id: u32,
    skill_text: String,
    probability: f64,
    keep: bool,
}

fn disambiguate(
    args: ScoreCorpusArgs,
    file: &FileConfig,
    seed: u64,
    quiet: bool,
) -> Result<(), CliError> {
    let threshold = pick(args.threshold, file.threshold, DEFAULT_THRESHOLD);
    let mut result = score_corpus(&args, file, seed)?;
    result.provenance.set("threshold", threshold);
    let records: Vec<DisambiguationRecord> = result
        .scored
        .iter()
        .map(|(snippet, probability)| DisambiguationRecord {
            source_id: snippet.source_id.clone(),
            skill_id: snippet.skill_id,
            skill_text: snippet.skill.join(" "),
            probability: *probability,
            keep: *probability >= threshold,
        })
        .collect();
    let kept = records.iter().filter(|r| r.keep).count();
    write_jsonl(&args.out, Some(&result.provenance.meta()), &records)?;
    progress(
        quiet,
        format_args!(
            "{} match(es), {} kept at threshold {threshold}{}",
            records.len(),
            kept,
            if result.skipped_units > 0 {
                format!(", {} unit(s) skipped", result.skipped_units)
            } else {
                String::new()
            }
        ),
    );
    Ok(())
}

fn filter_report_cmd(
    args: ScoreCorpusArgs,
    file: &FileConfig,
    seed: u64,
    quiet: bool,
) -> Result<(), CliError> {
    let threshold = pick(args.threshold, file.threshold, DEFAULT_THRESHOLD);
    let mut result = score_corpus(&args, file, seed)?;
    result.provenance.set("threshold", threshold);
    let pairs: Vec<(u32, f64)> = result.scored.iter().map(|(s, p)| (s.skill_id, *p)).collect();
    let report = filter_report(&pairs, threshold);
    let texts = result.lexicon.phrase_texts();

    let meta = result.provenance.meta();
    let out = std::fs::File::create(&args.out).map_err(|e| CliError::Io {
        path: args.out.display().to_string(),
        source: e,
    })?;
    let mut out = std::io::BufWriter::new(out);
    let io_err = |e: std::io::Error| CliError::Io {
        path: args.out.display().to_string(),
        source: e,
    };
    writeln!(
        out,
        "# seed={} config_sha256={}",
        meta.seed.unwrap_or_default(),
        meta.config_sha256.unwrap_or_default()
    )
    .map_err(io_err)?;
    writeln!(out, "skill_id\tskill_text\traw_count\tfiltered_count\tdifference").map_err(io_err)?;
    for record in &report.records {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            record.skill_id,
            texts.get(&record.skill_id).map(String::as_str).unwrap_or("?"),
            record.raw_count,
            record.filtered_count,
            record.raw_count - record.filtered_count
        )
        .map_err(io_err)?;
    }
    out.flush().map_err(io_err)?;
    progress(
        quiet,
        format_args!("{} skill(s) reported to {}", report.records.len(), args.out.display()),
    );
    Ok(())
}

/// Runs the pinned verification configuration. The seed is fixed: with a
/// free seed, a parameter whose true gradient happens to land near the
/// 1e-8 relative-error floor can make the verdict noise-dominated even
/// though backpropagation is correct.
fn gradient_check_cmd(kind: &str) -> Result<(), CliError> {
    const CHECK_SEED: u64 = 42;
    let checks: Vec<(ModelKind, RepresentationMode, f64)> = match kind {
        "all" => vec![
            (ModelKind::MeanLogistic, RepresentationMode::Unmodified, 1e-6),
            (ModelKind::Lstm, RepresentationMode::Tagged, 1e-4),
            (ModelKind::Cnn, RepresentationMode::Masked, 1e-4),
        ],
        "mean-logistic" => vec![(ModelKind::MeanLogistic, RepresentationMode::Unmodified, 1e-6)],
        "lstm" => vec![(ModelKind::Lstm, RepresentationMode::Tagged, 1e-4)],
        "cnn" => vec![(ModelKind::Cnn, RepresentationMode::Masked, 1e-4)],
        other => {
            return Err(CliError::Usage(format!(
                "unknown kind `{other}` (expected all, mean-logistic, cnn, or lstm)"
            )))
        }
    };
    let mut failed = false;
    for (kind, mode, threshold) in checks {
        let report = gradient_check(kind, mode, CHECK_SEED);
        let ok = report.max_relative_error < threshold;
        failed |= !ok;
        println!(
            "{} / {}: max relative error {:.3e} over {} parameters (threshold {threshold:.0e}) {}",
            kind,
            mode,
            report.max_relative_error,
            report.checked_parameters,
            if ok { "PASS" } else { "FAIL" }
        );
        if !ok {
            println!(
                "  worst parameter in `{}`: analytic {:.6e}, finite-difference {:.6e}",
                report.worst_tensor, report.worst_analytic, report.worst_numeric
            );
        }
    }
    if failed {
        return Err(CliError::Internal("gradient check failed".to_string()));
    }
    Ok(())
}

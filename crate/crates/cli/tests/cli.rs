//! End-to-end tests of the `softskill` binary: the full pipeline on the
//! shipped demo data, output determinism, and the exit-code contract.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_softskill"))
}

fn testdata(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../testdata")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    binary().args(args).output().expect("binary runs")
}

fn assert_success(output: &Output, context: &str) {
    assert!(
        output.status.success(),
        "{context} failed\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
}

fn path_str(dir: &tempfile::TempDir, name: &str) -> String {
    dir.path().join(name).display().to_string()
}

#[test]
fn lexicon_stats_reports_counts_and_histogram() {
    let output = run(&["lexicon-stats", "--lexicon", &testdata("lexicon.tsv")]);
    assert_success(&output, "lexicon-stats");
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("phrase_count: 11"), "stdout: {stdout}");
    assert!(stdout.contains("cluster_count: 10"));
    assert!(stdout.contains("one_word_count: 6"));
    assert!(stdout.contains("max_length: 2"));
    assert!(stdout.contains("length_histogram:"));
    assert!(stdout.contains("  1: 6"));
    assert!(stdout.contains("  2: 5"));
}

#[test]
fn preprocess_prints_normalized_tokens() {
    let output = run(&["preprocess", "--text", "Polite Manners, required..."]);
    assert_success(&output, "preprocess");
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert_eq!(stdout, "polite\nmanner\n,\nrequired\n");
}

/// Runs every pipeline stage on the shipped demo files.
#[test]
fn full_pipeline_on_demo_data() {
    let dir = tempfile::tempdir().unwrap();
    let snippets = path_str(&dir, "snippets.jsonl");
    let labeled = path_str(&dir, "labeled.jsonl");
    let inputs = path_str(&dir, "inputs.jsonl");
    let ckpt = path_str(&dir, "model.ckpt");
    let report = path_str(&dir, "report.jsonl");
    let annotated = path_str(&dir, "annotated.jsonl");
    let filter_tsv = path_str(&dir, "filter.tsv");

    let output = run(&[
        "match",
        "--lexicon", &testdata("lexicon.tsv"),
        "--input", &testdata("corpus.txt"),
        "--out", &snippets,
    ]);
    assert_success(&output, "match");
    let text = std::fs::read_to_string(&snippets).unwrap();
    assert!(text.lines().next().unwrap().contains("_meta"));
    assert!(text.lines().count() > 10, "expected a meta line plus matches");
    assert!(text.contains("\"skill_text\":\"team player\""));
    assert!(text.contains("\"skill_text\":\"tolerant\""));

    let output = run(&[
        "augment",
        "--annotations", &testdata("annotations.jsonl"),
        "--corpus-snippets", &snippets,
        "--out", &labeled,
    ]);
    assert_success(&output, "augment");
    let text = std::fs::read_to_string(&labeled).unwrap();
    assert!(text.contains("\"label\":\"negative\""));
    assert!(text.contains("\"label\":\"positive\""));

    let output = run(&[
        "transform",
        "--mode", "tagged",
        "--in", &labeled,
        "--out", &inputs,
    ]);
    assert_success(&output, "transform");
    let text = std::fs::read_to_string(&inputs).unwrap();
    assert!(text.contains("\"<begin>\""));
    assert!(text.contains("\"mode\":\"tagged\""));

    let output = run(&[
        "train",
        "--model", "mean-logistic",
        "--mode", "tagged",
        "--train", &inputs,
        "--embeddings", &testdata("vectors.txt"),
        "--dim", "8",
        "--max-epochs", "10",
        "--seed", "7",
        "--out", &ckpt,
    ]);
    assert_success(&output, "train");
    assert!(std::fs::metadata(&ckpt).unwrap().len() > 0);

    let output = run(&[
        "evaluate",
        "--model", &ckpt,
        "--test", &inputs,
        "--target-precision", "0.9",
        "--out", &report,
    ]);
    assert_success(&output, "evaluate");
    let stdout = String::from_utf8_lossy(&output.stdout);
    for key in ["precision:", "recall:", "f1_weighted:", "threshold:", "confusion:", "naive_precision:"] {
        assert!(stdout.contains(key), "missing {key} in:\n{stdout}");
    }
    assert!(std::fs::read_to_string(&report).unwrap().contains("\"f1_weighted\""));

    let output = run(&[
        "calibrate",
        "--model", &ckpt,
        "--data", &inputs,
        "--target-precision", "0.9",
    ]);
    assert_success(&output, "calibrate");
    assert!(String::from_utf8_lossy(&output.stdout).contains("threshold:"));

    let output = run(&[
        "disambiguate",
        "--lexicon", &testdata("lexicon.tsv"),
        "--model", &ckpt,
        "--input", &testdata("corpus.txt"),
        "--threshold", "0.5",
        "--out", &annotated,
    ]);
    assert_success(&output, "disambiguate");
    let text = std::fs::read_to_string(&annotated).unwrap();
    assert!(text.contains("\"probability\":"));
    assert!(text.contains("\"keep\":"));

    let output = run(&[
        "filter-report",
        "--lexicon", &testdata("lexicon.tsv"),
        "--model", &ckpt,
        "--corpus", &testdata("corpus.txt"),
        "--threshold", "0.5",
        "--out", &filter_tsv,
    ]);
    assert_success(&output, "filter-report");
    let text = std::fs::read_to_string(&filter_tsv).unwrap();
    assert!(text.starts_with("# seed=42 config_sha256="), "missing provenance header: {text}");
    assert!(text.contains("skill_id\tskill_text\traw_count\tfiltered_count\tdifference"));
    assert!(text.contains("friendly"));
}

#[test]
fn identical_runs_produce_byte_identical_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let snippets = path_str(&dir, "snippets.jsonl");
    let inputs = path_str(&dir, "inputs.jsonl");
    let ckpt = path_str(&dir, "model.ckpt");

    let match_args = [
        "match",
        "--lexicon", &testdata("lexicon.tsv"),
        "--input", &testdata("corpus.txt"),
        "--out", &snippets,
    ];
    assert_success(&run(&match_args), "match 1");
    let snippets_first = std::fs::read(&snippets).unwrap();
    assert_success(&run(&match_args), "match 2");
    assert_eq!(snippets_first, std::fs::read(&snippets).unwrap());

    // labels for training: augment against the shipped annotations
    let labeled = path_str(&dir, "labeled.jsonl");
    assert_success(
        &run(&[
            "augment",
            "--annotations", &testdata("annotations.jsonl"),
            "--corpus-snippets", &snippets,
            "--out", &labeled,
        ]),
        "augment",
    );
    assert_success(
        &run(&["transform", "--mode", "masked", "--in", &labeled, "--out", &inputs]),
        "transform",
    );

    let train_args = [
        "train",
        "--model", "lstm",
        "--mode", "masked",
        "--train", &inputs,
        "--embeddings", &testdata("vectors.txt"),
        "--dim", "8",
        "--hidden-size", "6",
        "--max-epochs", "3",
        "--seed", "11",
        "--out", &ckpt,
    ];
    assert_success(&run(&train_args), "train 1");
    let ckpt_first = std::fs::read(&ckpt).unwrap();
    assert_success(&run(&train_args), "train 2");
    assert_eq!(ckpt_first, std::fs::read(&ckpt).unwrap(), "checkpoints differ between runs");
}

#[test]
fn config_file_supplies_values_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.toml");
    std::fs::write(
        &config,
        format!("lexicon = {:?}\n", testdata("lexicon.tsv")),
    )
    .unwrap();
    let output = run(&["lexicon-stats", "--config", &config.display().to_string()]);
    assert_success(&output, "lexicon-stats via config");
    assert!(String::from_utf8_lossy(&output.stdout).contains("phrase_count: 11"));

    // flag wins over a bogus config value
    std::fs::write(&config, "lexicon = \"/nonexistent.tsv\"\n").unwrap();
    let output = run(&[
        "lexicon-stats",
        "--config", &config.display().to_string(),
        "--lexicon", &testdata("lexicon.tsv"),
    ]);
    assert_success(&output, "flag overrides config");
}

#[test]
fn exit_codes_follow_the_contract() {
    // usage errors -> 1
    let output = run(&["match", "--lexicon"]);
    assert_eq!(output.status.code(), Some(1));
    let output = run(&["no-such-command"]);
    assert_eq!(output.status.code(), Some(1));
    let output = run(&["lexicon-stats"]); // missing required value
    assert_eq!(output.status.code(), Some(1));
    let output = run(&["gradient-check", "--kind", "bogus"]);
    assert_eq!(output.status.code(), Some(1));

    // data errors -> 2
    let output = run(&["lexicon-stats", "--lexicon", "/nonexistent/lexicon.tsv"]);
    assert_eq!(output.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.tsv");
    std::fs::write(&bad, "no tab on this line\n").unwrap();
    let output = run(&["lexicon-stats", "--lexicon", &bad.display().to_string()]);
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("line 1"));

    // configuration errors -> 1 (masked-embed without an embedding table)
    let snippets = dir.path().join("snippets.jsonl");
    std::fs::write(
        &snippets,
        "{\"source_id\":\"0:0\",\"skill_id\":0,\"skill_text\":\"polite\",\"left\":[],\"right\":[]}\n",
    )
    .unwrap();
    let output = run(&[
        "transform",
        "--mode", "masked-embed",
        "--in", &snippets.display().to_string(),
        "--out", &dir.path().join("out.jsonl").display().to_string(),
    ]);
    assert_eq!(output.status.code(), Some(1), "stderr: {}", String::from_utf8_lossy(&output.stderr));

    // --help and --version exit 0
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn gradient_check_subcommand_passes() {
    let output = run(&["gradient-check", "--kind", "mean-logistic"]);
    assert_success(&output, "gradient-check");
    assert!(String::from_utf8_lossy(&output.stdout).contains("PASS"));
}

#[test]
fn quiet_suppresses_progress_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = path_str(&dir, "snippets.jsonl");
    let output = run(&[
        "--quiet",
        "match",
        "--lexicon", &testdata("lexicon.tsv"),
        "--input", &testdata("corpus.txt"),
        "--out", &out,
    ]);
    assert_success(&output, "quiet match");
    assert!(output.stderr.is_empty(), "stderr: {}", String::from_utf8_lossy(&output.stderr));
}

#[test]
fn outputs_embed_seed_and_config_hash() {
    let dir = tempfile::tempdir().unwrap();
    let out = PathBuf::from(path_str(&dir, "snippets.jsonl"));
    assert_success(
        &run(&[
            "match",
            "--seed", "99",
            "--lexicon", &testdata("lexicon.tsv"),
            "--input", &testdata("corpus.txt"),
            "--out", &out.display().to_string(),
        ]),
        "match",
    );
    let first_line = std::fs::read_to_string(&out).unwrap().lines().next().unwrap().to_string();
    assert!(first_line.contains("\"seed\":99"), "{first_line}");
    assert!(first_line.contains("config_sha256"), "{first_line}");
}

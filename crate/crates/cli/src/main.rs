use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use artex::synthetic::{generate, SyntheticConfig};
use artex::{
    benchmark, run_corpus, select, BenchConfig, CompressionSpec, CorpusLayout, CorpusSpec,
    EvalPreprocessor, Language, NormalizationMode, Pipeline, RawDocument, RunConfig, StopList,
    System,
};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "artex",
    version,
    about = "Extractive summarization and reference-free evaluation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Summarize one document and print the summary
    Summarize {
        file: PathBuf,
        #[arg(long, default_value = "en")]
        lang: Language,
        #[arg(long, default_value = "fix:1")]
        norm: NormalizationMode,
        #[arg(long, default_value = "ratio:0.2")]
        budget: CompressionSpec,
        /// Tab-separated `word<TAB>lemma` file, required for `--norm lemma`
        #[arg(long)]
        lemma_dict: Option<PathBuf>,
        /// One stop word per line; replaces the built-in list
        #[arg(long)]
        stoplist: Option<PathBuf>,
        /// Also print per-sentence scores as a tab-separated table
        #[arg(long)]
        scores: bool,
    },
    /// Summarize and evaluate every document of a corpus
    Batch {
        corpus: PathBuf,
        #[arg(long, default_value = "flat")]
        layout: CorpusLayout,
        #[arg(long, value_delimiter = ',', default_value = "artex")]
        systems: Vec<System>,
        #[arg(long, default_value = "en")]
        lang: Language,
        #[arg(long, default_value = "fix:1")]
        norm: NormalizationMode,
        #[arg(long, default_value = "ratio:0.2")]
        budget: CompressionSpec,
        #[arg(long)]
        out: PathBuf,
        /// Seed for the random baseline
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write timings.csv (runs single-threaded)
        #[arg(long)]
        timing: bool,
        /// Worker threads (default: available parallelism)
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        lemma_dict: Option<PathBuf>,
        #[arg(long)]
        stoplist: Option<PathBuf>,
    },
    /// Compare a summary with its source and print the divergence report as JSON
    Eval {
        source: PathBuf,
        summary: PathBuf,
        #[arg(long, default_value = "en")]
        lang: Language,
        #[arg(long)]
        stoplist: Option<PathBuf>,
    },
    /// Time the summarizer per normalization mode
    Bench {
        corpus: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "lemma,stem,fix:1")]
        modes: Vec<NormalizationMode>,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "flat")]
        layout: CorpusLayout,
        #[arg(long, default_value = "en")]
        lang: Language,
        #[arg(long, default_value = "ratio:0.2")]
        budget: CompressionSpec,
        #[arg(long)]
        lemma_dict: Option<PathBuf>,
        #[arg(long)]
        stoplist: Option<PathBuf>,
    },
    /// Write the synthetic English corpus and its lemma dictionary
    Synth {
        out: PathBuf,
        #[arg(long, default_value_t = 100)]
        documents: usize,
        #[arg(long, default_value_t = 2000)]
        words: usize,
        #[arg(long, default_value_t = 2012)]
        seed: u64,
    },
}

fn exit_code(e: &artex::Error) -> u8 {
    use artex::Error::*;
    match e {
        InvalidBudget(_)
        | InvalidNormalization(_)
        | InvalidLanguage(_)
        | InvalidConfig(_)
        | MissingDictionary => 1,
        Io { .. }
        | NotUtf8 { .. }
        | CorpusEmpty(_)
        | DictionaryFormat { .. }
        | Csv(_)
        | Json(_) => 2,
        EmptyDocument | EmptyVocabulary | EmptySource | NoResults => 3,
    }
}

fn stdout_error(e: std::io::Error) -> artex::Error {
    artex::Error::Io {
        path: PathBuf::from("<stdout>"),
        source: e,
    }
}

fn summarize(
    file: &Path,
    pipeline: &Pipeline,
    budget: CompressionSpec,
    scores: bool,
) -> artex::Result<()> {
    let doc = RawDocument::from_file(file, pipeline.language)?;
    let analysis = pipeline.analyze(std::slice::from_ref(&doc))?;
    let sv = analysis.scores();
    let summary = select(&sv, &analysis.sentences, budget);

    let mut out = std::io::stdout().lock();
    writeln!(out, "{}", summary.text).map_err(stdout_error)?;
    if scores {
        writeln!(out, "\nindex\traw\tnormalized\tselected").map_err(stdout_error)?;
        for i in 0..sv.len() {
            let chosen = summary.selected.binary_search(&i).is_ok();
            writeln!(
                out,
                "{i}\t{:e}\t{:.6}\t{}",
                sv.raw[i],
                sv.normalized[i],
                u8::from(chosen)
            )
            .map_err(stdout_error)?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> artex::Result<()> {
    match cli.command {
        Command::Summarize {
            file,
            lang,
            norm,
            budget,
            lemma_dict,
            stoplist,
            scores,
        } => {
            let pipeline =
                Pipeline::from_paths(lang, norm, stoplist.as_deref(), lemma_dict.as_deref())?;
            summarize(&file, &pipeline, budget.validate()?, scores)
        }
        Command::Batch {
            corpus,
            layout,
            systems,
            lang,
            norm,
            budget,
            out,
            seed,
            timing,
            workers,
            lemma_dict,
            stoplist,
        } => {
            let spec = CorpusSpec {
                root: corpus,
                layout,
                language: lang,
            };
            let mut cfg = RunConfig::new(out);
            cfg.normalization = norm;
            cfg.budget = budget;
            cfg.systems = systems;
            cfg.seed = seed;
            cfg.timing = timing;
            cfg.workers = workers;
            cfg.lemma_dict = lemma_dict;
            cfg.stoplist = stoplist;
            let outputs = run_corpus(&spec, &cfg)?;
            log::info!(
                "{} summaries written to {}",
                outputs.len(),
                cfg.output.display()
            );
            Ok(())
        }
        Command::Eval {
            source,
            summary,
            lang,
            stoplist,
        } => {
            let stoplist = match stoplist {
                Some(p) => StopList::load(lang, &p)?,
                None => StopList::builtin(lang),
            };
            let evaluator = EvalPreprocessor::new(lang, stoplist);
            let source = RawDocument::from_file(&source, lang)?;
            let summary = RawDocument::from_file(&summary, lang)?;
            let report = evaluator.report(&source.text, &summary.text)?;
            println!("{}", serde_json::to_string(&report)?);
            Ok(())
        }
        Command::Bench {
            corpus,
            modes,
            reps,
            out,
            layout,
            lang,
            budget,
            lemma_dict,
            stoplist,
        } => {
            let spec = CorpusSpec {
                root: corpus,
                layout,
                language: lang,
            };
            let mut cfg = BenchConfig::new(modes, reps);
            cfg.budget = budget;
            cfg.lemma_dict = lemma_dict;
            cfg.stoplist = stoplist;
            let report = benchmark(&spec, &cfg)?;
            report.write_to(&out)?;
            println!("mode\tmedian_secs\tmin_secs\tmax_secs\tvocabulary");
            for m in &report.modes {
                println!(
                    "{}\t{:.4}\t{:.4}\t{:.4}\t{}",
                    m.normalization, m.median_secs, m.min_secs, m.max_secs, m.vocabulary
                );
            }
            Ok(())
        }
        Command::Synth {
            out,
            documents,
            words,
            seed,
        } => {
            let corpus = generate(&SyntheticConfig {
                documents,
                words_per_doc: words,
                seed,
                ..SyntheticConfig::default()
            });
            corpus.write_to(&out)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

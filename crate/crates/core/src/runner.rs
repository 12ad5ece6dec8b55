//! Corpus ingestion, batch summarization and the normalization benchmark.
//!
//! Output layout of a batch run:
//!
//! ```text
//! <out>/<system>/<normalization>/<doc-id>.summary.txt
//! <out>/report.jsonl
//! <out>/timings.csv        (only when timing is enabled)
//! ```

use std::fmt;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::baselines::{lead_baseline, random_baseline};
use crate::error::{Error, Result};
use crate::eval::{fresa_report, DivergenceReport, EvalPreprocessor};
use crate::preprocess::{
    read_utf8, split_text, Language, LemmaDictionary, NormalizationMode, Normalizer, Preprocessor,
    RawDocument, Sentence, StopList,
};
use crate::scorer::{pseudo_vectors, score, select, CompressionSpec, ScoreVector, Summary};
use crate::vsm::{vectorize, SentenceTermMatrix, Vocabulary};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusLayout {
    /// One document per file directly under the root.
    Flat,
    /// One directory per cluster; member files are concatenated in file
    /// name order and summarized as a single document.
    Clusters,
}

impl FromStr for CorpusLayout {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "flat" => Ok(CorpusLayout::Flat),
            "clusters" => Ok(CorpusLayout::Clusters),
            _ => Err(Error::InvalidConfig(format!("unknown corpus layout {s:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CorpusSpec {
    pub root: PathBuf,
    pub layout: CorpusLayout,
    pub language: Language,
}

/// One summarization unit: a single file, or every file of a cluster.
#[derive(Debug, Clone)]
pub struct CorpusDocument {
    pub id: String,
    pub parts: Vec<RawDocument>,
}

fn sorted_entries(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut entries: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            !p.file_name()
                .and_then(|n| n.to_str())
                .is_some_and(|n| n.starts_with('.'))
        })
        .collect();
    entries.sort();
    Ok(entries)
}

fn file_id(path: &Path) -> String {
    path.file_stem()
        .or_else(|| path.file_name())
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn read_document(path: &Path, language: Language) -> Option<RawDocument> {
    match read_utf8(path) {
        Ok(text) if !text.trim().is_empty() => {
            Some(RawDocument::new(file_id(path), text, language))
        }
        Ok(_) => {
            log::warn!("{}: empty file, skipped", path.display());
            None
        }
        Err(e) => {
            log::warn!("{e}; skipped");
            None
        }
    }
}

/// Reads every admissible document under the corpus root, in name order.
pub fn load_corpus(spec: &CorpusSpec) -> Result<Vec<CorpusDocument>> {
    let mut docs = Vec::new();
    for entry in sorted_entries(&spec.root)? {
        match spec.layout {
            CorpusLayout::Flat if entry.is_file() => {
                if let Some(doc) = read_document(&entry, spec.language) {
                    docs.push(CorpusDocument {
                        id: doc.id.clone(),
                        parts: vec![doc],
                    });
                }
            }
            CorpusLayout::Clusters if entry.is_dir() => {
                let parts: Vec<RawDocument> = sorted_entries(&entry)?
                    .into_iter()
                    .filter(|p| p.is_file())
                    .filter_map(|p| read_document(&p, spec.language))
                    .collect();
                if parts.is_empty() {
                    log::warn!(
                        "{}: cluster has no readable documents, skipped",
                        entry.display()
                    );
                    continue;
                }
                docs.push(CorpusDocument {
                    id: entry
                        .file_name()
                        .map(|s| s.to_string_lossy().into_owned())
                        .unwrap_or_default(),
                    parts,
                });
            }
            _ => {}
        }
    }
    if docs.is_empty() {
        return Err(Error::CorpusEmpty(spec.root.clone()));
    }
    Ok(docs)
}

/// A preprocessed document ready for scoring.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub sentences: Vec<Sentence>,
    pub vocabulary: Vocabulary,
    pub matrix: SentenceTermMatrix,
}

impl Analysis {
    pub fn scores(&self) -> ScoreVector {
        score(&self.matrix, &pseudo_vectors(&self.matrix))
    }
}

/// Language resources for one normalization mode.
#[derive(Debug)]
pub struct Pipeline {
    pub language: Language,
    preprocessor: Preprocessor,
    evaluator: EvalPreprocessor,
}

impl Pipeline {
    pub fn new(
        language: Language,
        mode: NormalizationMode,
        stoplist: StopList,
        dictionary: Option<Arc<LemmaDictionary>>,
    ) -> Result<Self> {
        let normalizer = Normalizer::new(mode, language, dictionary)?;
        Ok(Self {
            language,
            evaluator: EvalPreprocessor::new(language, stoplist.clone()),
            preprocessor: Preprocessor::new(stoplist, normalizer),
        })
    }

    /// Built-in stop-list, no lemma dictionary.
    pub fn builtin(language: Language, mode: NormalizationMode) -> Result<Self> {
        Self::new(language, mode, StopList::builtin(language), None)
    }

    /// Loads an optional stop-list file (built-in list otherwise) and an
    /// optional lemma dictionary. The dictionary is only read when `mode`
    /// needs it.
    pub fn from_paths(
        language: Language,
        mode: NormalizationMode,
        stoplist: Option<&Path>,
        lemma_dict: Option<&Path>,
    ) -> Result<Self> {
        let stoplist = match stoplist {
            Some(p) => StopList::load(language, p)?,
            None => StopList::builtin(language),
        };
        let dictionary = match (mode, lemma_dict) {
            (NormalizationMode::Lemmatize, Some(p)) => Some(Arc::new(LemmaDictionary::load(p)?)),
            _ => None,
        };
        Self::new(language, mode, stoplist, dictionary)
    }

    pub fn mode(&self) -> NormalizationMode {
        self.preprocessor.normalizer.mode()
    }

    /// Splits each part and numbers the sentences consecutively across parts.
    pub fn split(&self, parts: &[RawDocument]) -> Result<Vec<Sentence>> {
        let mut sentences = Vec::new();
        for part in parts {
            match split_text(&part.text) {
                Ok(split) => sentences.extend(split),
                Err(Error::EmptyDocument) if parts.len() > 1 => {
                    log::warn!("{}: no sentences, skipped within cluster", part.id)
                }
                Err(e) => return Err(e),
            }
        }
        if sentences.is_empty() {
            return Err(Error::EmptyDocument);
        }
        for (i, s) in sentences.iter_mut().enumerate() {
            s.index = i;
        }
        Ok(sentences)
    }

    /// Filters, normalizes and vectorizes already split sentences.
    pub fn analyze_sentences(&self, sentences: &[Sentence]) -> Result<Analysis> {
        let sentences = self.preprocessor.process(sentences);
        let (vocabulary, matrix) = vectorize(&sentences)?;
        Ok(Analysis {
            sentences,
            vocabulary,
            matrix,
        })
    }

    pub fn analyze(&self, parts: &[RawDocument]) -> Result<Analysis> {
        self.analyze_sentences(&self.split(parts)?)
    }

    pub fn summarize(&self, doc: &RawDocument, budget: CompressionSpec) -> Result<Summary> {
        let analysis = self.analyze(std::slice::from_ref(doc))?;
        Ok(select(&analysis.scores(), &analysis.sentences, budget))
    }

    /// Evaluates `summary_text` against the concatenated parts.
    pub fn evaluate(&self, parts: &[RawDocument], summary_text: &str) -> Result<DivergenceReport> {
        let source: Vec<Vec<String>> = parts
            .iter()
            .flat_map(|p| self.evaluator.segments(&p.text))
            .collect();
        fresa_report(&source, &self.evaluator.segments(summary_text))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum System {
    Artex,
    Lead,
    Random,
}

impl System {
    pub fn name(self) -> &'static str {
        match self {
            System::Artex => "artex",
            System::Lead => "lead",
            System::Random => "random",
        }
    }

    /// Parses a comma-separated list such as `artex,lead`.
    pub fn parse_list(s: &str) -> Result<Vec<System>> {
        let mut out = Vec::new();
        for name in s.split(',').map(str::trim).filter(|n| !n.is_empty()) {
            let sys: System = name.parse()?;
            if !out.contains(&sys) {
                out.push(sys);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for System {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "artex" => Ok(System::Artex),
            "lead" => Ok(System::Lead),
            "random" => Ok(System::Random),
            _ => Err(Error::InvalidConfig(format!("unknown system {s:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub normalization: NormalizationMode,
    pub budget: CompressionSpec,
    pub systems: Vec<System>,
    pub seed: u64,
    pub output: PathBuf,
    pub timing: bool,
    /// Worker threads; `None` uses the available parallelism. Forced to 1
    /// when timing is enabled.
    pub workers: Option<usize>,
    pub stoplist: Option<PathBuf>,
    pub lemma_dict: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(output: impl Into<PathBuf>) -> Self {
        Self {
            normalization: NormalizationMode::UltraStem(std::num::NonZeroUsize::MIN),
            budget: CompressionSpec::default(),
            systems: vec![System::Artex],
            seed: 0,
            output: output.into(),
            timing: false,
            workers: None,
            stoplist: None,
            lemma_dict: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.systems.is_empty() {
            return Err(Error::InvalidConfig(
                "at least one system is required".into(),
            ));
        }
        self.budget.validate()?;
        Ok(())
    }

    fn pipeline(&self, language: Language) -> Result<Pipeline> {
        Pipeline::from_paths(
            language,
            self.normalization,
            self.stoplist.as_deref(),
            self.lemma_dict.as_deref(),
        )
    }
}

/// Wall-clock timing of one unit of work. Durations are in seconds and
/// `total = preprocess + scoring`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimingRecord {
    pub system: String,
    pub normalization: String,
    /// Document id for batch runs, corpus id for benchmark repetitions.
    pub unit: String,
    pub repetition: usize,
    pub preprocess_secs: f64,
    pub scoring_secs: f64,
    pub total_secs: f64,
    /// Vocabulary size N (summed over documents for corpus-level records).
    pub vocabulary: usize,
}

impl TimingRecord {
    fn new(
        system: System,
        mode: NormalizationMode,
        unit: &str,
        repetition: usize,
        preprocess: Duration,
        scoring: Duration,
        vocabulary: usize,
    ) -> Self {
        let (p, s) = (preprocess.as_secs_f64(), scoring.as_secs_f64());
        Self {
            system: system.to_string(),
            normalization: mode.to_string(),
            unit: unit.to_owned(),
            repetition,
            preprocess_secs: p,
            scoring_secs: s,
            total_secs: p + s,
            vocabulary,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub document: String,
    pub system: System,
    pub summary: Summary,
    pub report: DivergenceReport,
    pub timing: TimingRecord,
}

#[derive(Serialize)]
struct ReportLine<'a> {
    document: &'a str,
    system: &'a str,
    normalization: String,
    #[serde(flatten)]
    report: &'a DivergenceReport,
}

fn summarize_document(
    pipeline: &Pipeline,
    doc: &CorpusDocument,
    cfg: &RunConfig,
) -> Result<Vec<RunOutput>> {
    let mode = pipeline.mode();
    let mut outputs = Vec::with_capacity(cfg.systems.len());
    for &system in &cfg.systems {
        let start = Instant::now();
        let sentences = pipeline.split(&doc.parts)?;
        let (summary, preprocess, scoring, vocabulary) = match system {
            System::Artex => {
                let analysis = pipeline.analyze_sentences(&sentences)?;
                let mid = Instant::now();
                let summary = select(&analysis.scores(), &analysis.sentences, cfg.budget);
                let end = Instant::now();
                (summary, mid - start, end - mid, analysis.vocabulary.len())
            }
            System::Lead | System::Random => {
                let mid = Instant::now();
                let summary = if system == System::Lead {
                    lead_baseline(&sentences, cfg.budget)
                } else {
                    random_baseline(&sentences, cfg.budget, cfg.seed)
                };
                let end = Instant::now();
                (summary, mid - start, end - mid, 0)
            }
        };
        let report = pipeline.evaluate(&doc.parts, &summary.text)?;
        outputs.push(RunOutput {
            document: doc.id.clone(),
            system,
            summary,
            report,
            timing: TimingRecord::new(system, mode, &doc.id, 0, preprocess, scoring, vocabulary),
        });
    }
    Ok(outputs)
}

fn create_file(path: &Path) -> Result<BufWriter<fs::File>> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    Ok(BufWriter::new(
        fs::File::create(path).map_err(|e| Error::io(path, e))?,
    ))
}

fn write_outputs(outputs: &[RunOutput], cfg: &RunConfig) -> Result<()> {
    let norm = cfg.normalization.to_string();
    for out in outputs {
        let path = cfg
            .output
            .join(out.system.name())
            .join(&norm)
            .join(format!("{}.summary.txt", out.document));
        let mut f = create_file(&path)?;
        writeln!(f, "{}", out.summary.text).map_err(|e| Error::io(&path, e))?;
        f.flush().map_err(|e| Error::io(&path, e))?;
    }

    let path = cfg.output.join("report.jsonl");
    let mut f = create_file(&path)?;
    for out in outputs {
        let line = ReportLine {
            document: &out.document,
            system: out.system.name(),
            normalization: norm.clone(),
            report: &out.report,
        };
        serde_json::to_writer(&mut f, &line)?;
        writeln!(f).map_err(|e| Error::io(&path, e))?;
    }
    f.flush().map_err(|e| Error::io(&path, e))?;

    if cfg.timing {
        let path = cfg.output.join("timings.csv");
        let mut w = csv::Writer::from_writer(create_file(&path)?);
        for out in outputs {
            w.serialize(&out.timing)?;
        }
        w.flush().map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}

/// Summarizes every corpus document with every configured system,
/// evaluates each summary against its source and writes the results.
///
/// Documents that fail are logged and skipped. Results come back in
/// corpus order regardless of the worker count.
pub fn run_corpus(corpus: &CorpusSpec, cfg: &RunConfig) -> Result<Vec<RunOutput>> {
    cfg.validate()?;
    fs::create_dir_all(&cfg.output).map_err(|e| Error::io(&cfg.output, e))?;
    let docs = load_corpus(corpus)?;
    let pipeline = cfg.pipeline(corpus.language)?;

    let workers = if cfg.timing {
        1
    } else {
        cfg.workers.unwrap_or(0)
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let results: Vec<Result<Vec<RunOutput>>> = pool.install(|| {
        docs.par_iter()
            .map(|doc| summarize_document(&pipeline, doc, cfg))
            .collect()
    });

    let mut outputs = Vec::new();
    for (doc, result) in docs.iter().zip(results) {
        match result {
            Ok(out) => outputs.extend(out),
            Err(e) => log::warn!("{}: {e}; skipped", doc.id),
        }
    }
    if outputs.is_empty() {
        return Err(Error::NoResults);
    }
    write_outputs(&outputs, cfg)?;
    Ok(outputs)
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub modes: Vec<NormalizationMode>,
    pub repetitions: usize,
    pub budget: CompressionSpec,
    pub stoplist: Option<PathBuf>,
    pub lemma_dict: Option<PathBuf>,
}

impl BenchConfig {
    pub fn new(modes: Vec<NormalizationMode>, repetitions: usize) -> Self {
        Self {
            modes,
            repetitions,
            budget: CompressionSpec::default(),
            stoplist: None,
            lemma_dict: None,
        }
    }
}

/// Median, spread and vocabulary size of one mode's repetitions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeSummary {
    pub normalization: String,
    pub repetitions: usize,
    pub median_secs: f64,
    pub min_secs: f64,
    pub max_secs: f64,
    pub vocabulary: usize,
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub records: Vec<TimingRecord>,
    pub modes: Vec<ModeSummary>,
}

impl BenchReport {
    pub fn mode(&self, mode: NormalizationMode) -> Option<&ModeSummary> {
        let name = mode.to_string();
        self.modes.iter().find(|m| m.normalization == name)
    }

    /// Writes `bench.csv` (one row per repetition) and `bench_summary.csv`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let path = dir.join("bench.csv");
        let mut w = csv::Writer::from_writer(create_file(&path)?);
        for r in &self.records {
            w.serialize(r)?;
        }
        w.flush().map_err(|e| Error::io(&path, e))?;
        let path = dir.join("bench_summary.csv");
        let mut w = csv::Writer::from_writer(create_file(&path)?);
        for m in &self.modes {
            w.serialize(m)?;
        }
        w.flush().map_err(|e| Error::io(&path, e))?;
        Ok(())
    }
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

/// Times the full summarization pipeline over the corpus, once per mode
/// per repetition, on a single thread.
///
/// Each repetition builds its pipeline from scratch, so loading the
/// stop-list and (for lemmatization) the dictionary counts towards the
/// preprocessing time. Repetitions are interleaved across modes. Reading
/// the corpus from disk happens once, outside the timed region.
pub fn benchmark(corpus: &CorpusSpec, cfg: &BenchConfig) -> Result<BenchReport> {
    if cfg.repetitions < 3 {
        return Err(Error::InvalidConfig(
            "benchmark needs at least 3 repetitions".into(),
        ));
    }
    if cfg.modes.is_empty() {
        return Err(Error::InvalidConfig(
            "benchmark needs at least one mode".into(),
        ));
    }
    cfg.budget.validate()?;
    let docs = load_corpus(corpus)?;
    let corpus_id = corpus
        .root
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| corpus.root.display().to_string());

    let mut records = Vec::with_capacity(cfg.modes.len() * cfg.repetitions);
    for rep in 0..cfg.repetitions {
        for &mode in &cfg.modes {
            let mut preprocess = Duration::ZERO;
            let mut scoring = Duration::ZERO;
            let mut vocabulary = 0;

            let start = Instant::now();
            let pipeline = Pipeline::from_paths(
                corpus.language,
                mode,
                cfg.stoplist.as_deref(),
                cfg.lemma_dict.as_deref(),
            )?;
            preprocess += start.elapsed();

            for doc in &docs {
                let start = Instant::now();
                let analysis = match pipeline.analyze(&doc.parts) {
                    Ok(a) => a,
                    Err(e) => {
                        log::warn!("{}: {e}; skipped", doc.id);
                        continue;
                    }
                };
                let mid = Instant::now();
                let summary = select(&analysis.scores(), &analysis.sentences, cfg.budget);
                let end = Instant::now();
                std::hint::black_box(&summary);
                preprocess += mid - start;
                scoring += end - mid;
                vocabulary += analysis.vocabulary.len();
            }
            records.push(TimingRecord::new(
                System::Artex,
                mode,
                &corpus_id,
                rep,
                preprocess,
                scoring,
                vocabulary,
            ));
        }
    }

    let modes = cfg
        .modes
        .iter()
        .map(|&mode| {
            let name = mode.to_string();
            let runs: Vec<&TimingRecord> =
                records.iter().filter(|r| r.normalization == name).collect();
            let mut totals: Vec<f64> = runs.iter().map(|r| r.total_secs).collect();
            totals.sort_by(f64::total_cmp);
            ModeSummary {
                normalization: name,
                repetitions: totals.len(),
                median_secs: median(&totals),
                min_secs: totals[0],
                max_secs: totals[totals.len() - 1],
                vocabulary: runs[0].vocabulary,
            }
        })
        .collect();
    Ok(BenchReport { records, modes })
}

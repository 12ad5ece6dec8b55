//! Extractive summarization in a vector space model.
//!
//! Each sentence is scored by the inner product of its term-count vector
//! with the "global topic" (the average sentence, `b`) weighted by its
//! "lexical weight" (the average term count of the sentence, `a`). The
//! highest scoring sentences are emitted in source order.
//!
//! The crate also provides a reference-free content evaluator comparing
//! n-gram distributions of a summary and its source, two baseline
//! summarizers, a deterministic synthetic corpus generator, and the batch
//! runner used by the `artex` command line tool.
//!
//! ```
//! use artex::{CompressionSpec, Language, NormalizationMode, Pipeline, RawDocument};
//!
//! let text = "Cats chase mice. Dogs chase cats and mice. Birds sing. \
//!             Mice fear cats. Cats and dogs chase birds.";
//! let doc = RawDocument::new("toy", text, Language::En);
//! let pipeline = Pipeline::builtin(Language::En, NormalizationMode::Raw).unwrap();
//! let summary = pipeline
//!     .summarize(&doc, CompressionSpec::Sentences(2))
//!     .unwrap();
//! assert_eq!(summary.selected.len(), 2);
//! assert!(summary.selected.windows(2).all(|w| w[0] < w[1]));
//! ```

pub mod baselines;
mod error;
pub mod eval;
pub mod preprocess;
pub mod runner;
pub mod scorer;
pub mod synthetic;
pub mod vsm;

pub use baselines::{lead_baseline, random_baseline};
pub use error::{Error, Result};
pub use eval::{
    divergence, fresa_report, DivergenceReport, EvalPreprocessor, NgramOrder, NgramProfile,
};
pub use preprocess::{
    filter_sentence, split_sentences, Language, LemmaDictionary, NormalizationMode, Normalizer,
    RawDocument, Sentence, StopList,
};
pub use runner::{
    benchmark, run_corpus, BenchConfig, BenchReport, CorpusLayout, CorpusSpec, Pipeline, RunConfig,
    System, TimingRecord,
};
pub use scorer::{
    pseudo_vectors, score, score_normalized, select, CompressionSpec, PseudoVectors, ScoreVector,
    Summary, TopicVector,
};
pub use vsm::{binarize, vectorize, SentenceTermMatrix, Vocabulary};

//! Reference-free content evaluation.
//!
//! A summary is compared to its source through n-gram distributions:
//!
//! ```text
//! D(T||S) = Σ_{t ∈ T} | ln(C_t^T / |T| + 1) − ln(C_t^S / |S| + 1) |
//! ```
//!
//! summed over the source's n-gram types. Each divergence is mapped to a
//! score in [0, 1] by `f = 1 − D / D_empty`, where `D_empty` is the
//! divergence of an empty summary, and the three orders (unigrams,
//! bigrams, skip-bigrams with gap up to 4) are averaged.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::preprocess::{clean_token, split_text, Language, StopList};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum NgramOrder {
    Unigram,
    Bigram,
    /// Ordered pairs `(t_i, t_{i+g})` with `1 <= g <= max_gap`.
    SkipBigram(usize),
}

impl NgramOrder {
    pub const SU4: NgramOrder = NgramOrder::SkipBigram(4);
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gram {
    Uni(String),
    Pair(String, String),
}

/// N-gram counts of one token stream.
///
/// Grams never span segment (sentence) boundaries. `total` is the number
/// of extracted grams, counting repeats.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NgramProfile {
    pub order: NgramOrder,
    counts: BTreeMap<Gram, u64>,
    total: u64,
}

impl NgramProfile {
    pub fn from_segments<S: AsRef<[String]>>(segments: &[S], order: NgramOrder) -> Self {
        let mut counts = BTreeMap::new();
        let mut total = 0;
        let mut add = |g: Gram| {
            *counts.entry(g).or_insert(0) += 1;
            total += 1;
        };
        for seg in segments {
            let toks = seg.as_ref();
            match order {
                NgramOrder::Unigram => toks.iter().for_each(|t| add(Gram::Uni(t.clone()))),
                NgramOrder::Bigram => toks
                    .windows(2)
                    .for_each(|w| add(Gram::Pair(w[0].clone(), w[1].clone()))),
                NgramOrder::SkipBigram(max_gap) => {
                    for (i, first) in toks.iter().enumerate() {
                        for second in toks.iter().skip(i + 1).take(max_gap) {
                            add(Gram::Pair(first.clone(), second.clone()));
                        }
                    }
                }
            }
        }
        Self {
            order,
            counts,
            total,
        }
    }

    pub fn count(&self, gram: &Gram) -> u64 {
        self.counts.get(gram).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn types(&self) -> usize {
        self.counts.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Gram, u64)> {
        self.counts.iter().map(|(g, &c)| (g, c))
    }
}

/// Profile of a single unsegmented token stream.
pub fn ngram_profile(tokens: &[String], order: NgramOrder) -> NgramProfile {
    NgramProfile::from_segments(&[tokens], order)
}

/// Smoothed absolute log-difference divergence of `summary` from `source`.
pub fn divergence(source: &NgramProfile, summary: &NgramProfile) -> Result<f64> {
    debug_assert_eq!(source.order, summary.order);
    if source.total == 0 {
        return Err(Error::EmptySource);
    }
    let t_total = source.total as f64;
    let s_total = summary.total as f64;
    Ok(source
        .iter()
        .map(|(gram, c_t)| {
            let p = c_t as f64 / t_total;
            let q = if summary.total == 0 {
                0.0
            } else {
                summary.count(gram) as f64 / s_total
            };
            (p.ln_1p() - q.ln_1p()).abs()
        })
        .sum())
}

/// Raw divergences and normalized scores for the three n-gram orders.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DivergenceReport {
    pub d1: f64,
    pub d2: f64,
    pub d_su4: f64,
    pub f1: f64,
    pub f2: f64,
    pub f_su4: f64,
    pub f_avg: f64,
}

fn normalized(source: &NgramProfile, summary: &NgramProfile) -> Result<(f64, f64)> {
    let d = divergence(source, summary)?;
    let empty = NgramProfile {
        order: source.order,
        counts: BTreeMap::new(),
        total: 0,
    };
    let d_empty = divergence(source, &empty)?;
    Ok((d, (1.0 - d / d_empty).clamp(0.0, 1.0)))
}

/// Evaluates sentence-segmented summary tokens against the source's.
pub fn fresa_report<S: AsRef<[String]>, U: AsRef<[String]>>(
    source: &[S],
    summary: &[U],
) -> Result<DivergenceReport> {
    let mut out = [(0.0, 0.0); 3];
    for (slot, order) in
        out.iter_mut()
            .zip([NgramOrder::Unigram, NgramOrder::Bigram, NgramOrder::SU4])
    {
        let src = NgramProfile::from_segments(source, order);
        let sum = NgramProfile::from_segments(summary, order);
        *slot = normalized(&src, &sum)?;
    }
    let [(d1, f1), (d2, f2), (d_su4, f_su4)] = out;
    Ok(DivergenceReport {
        d1,
        d2,
        d_su4,
        f1,
        f2,
        f_su4,
        f_avg: (f1 + f2 + f_su4) / 3.0,
    })
}

/// Tokenization used for evaluation: sentence split, clean, drop stop-list
/// members, Snowball stem. No hapax filtering.
pub struct EvalPreprocessor {
    stoplist: StopList,
    stemmer: rust_stemmers::Stemmer,
}

impl std::fmt::Debug for EvalPreprocessor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EvalPreprocessor")
            .field("stoplist", &self.stoplist.len())
            .finish()
    }
}

impl EvalPreprocessor {
    pub fn new(language: Language, stoplist: StopList) -> Self {
        let algorithm = match language {
            Language::En => rust_stemmers::Algorithm::English,
            Language::Es => rust_stemmers::Algorithm::Spanish,
            Language::Fr => rust_stemmers::Algorithm::French,
        };
        Self {
            stoplist,
            stemmer: rust_stemmers::Stemmer::create(algorithm),
        }
    }

    pub fn builtin(language: Language) -> Self {
        Self::new(language, StopList::builtin(language))
    }

    /// Stemmed token streams, one per sentence. Text without any
    /// alphabetic sentence yields no segments.
    pub fn segments(&self, text: &str) -> Vec<Vec<String>> {
        let Ok(sentences) = split_text(text) else {
            return Vec::new();
        };
        sentences
            .iter()
            .map(|s| {
                s.tokens
                    .iter()
                    .filter_map(|t| clean_token(t))
                    .filter(|t| !self.stoplist.contains(t))
                    .map(|t| self.stemmer.stem(&t).into_owned())
                    .filter(|t| !t.is_empty())
                    .collect()
            })
            .collect()
    }

    pub fn report(&self, source_text: &str, summary_text: &str) -> Result<DivergenceReport> {
        fresa_report(&self.segments(source_text), &self.segments(summary_text))
    }
}

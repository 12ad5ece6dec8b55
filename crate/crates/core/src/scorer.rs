//! Sentence scoring and extractive summary assembly.
//!
//! For a P × N count matrix `S`:
//!
//! * `a_i = (1/N) Σ_j s_ij` is the lexical weight of sentence `i`,
//! * `b_j = (1/P) Σ_i s_ij` is the global topic,
//! * `score_i = (1/(N·P)) · (Σ_j s_ij · b_j) · a_i`.
//!
//! The hypersphere variant replaces `1/(N·P)` with `1/√(N⁵·P³)`. The two
//! differ by a positive constant, so they rank sentences identically.
//!
//! Every score is a positive multiple of the integer
//! `K_i = (Σ_j s_ij · Σ_k s_kj) · Σ_j s_ij`. Rankings are taken on `K`
//! itself, so rounding in the reported values never reorders sentences.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::preprocess::Sentence;
use crate::vsm::SentenceTermMatrix;

/// Lexical weight `a` (length P) and global topic `b` (length N).
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoVectors {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

pub fn pseudo_vectors(matrix: &SentenceTermMatrix) -> PseudoVectors {
    let n = matrix.n_cols() as f64;
    let p = matrix.n_rows() as f64;
    let a = (0..matrix.n_rows())
        .map(|i| matrix.row_sum(i) as f64 / n)
        .collect();
    let b = matrix
        .column_sums()
        .into_iter()
        .map(|c| c as f64 / p)
        .collect();
    PseudoVectors { a, b }
}

/// Per-sentence scores: `raw` as computed, `normalized` divided by the
/// maximum raw score (all zeros when every raw score is zero).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreVector {
    pub raw: Vec<f64>,
    pub normalized: Vec<f64>,
    #[serde(skip)]
    order: Vec<usize>,
}

impl ScoreVector {
    /// Ranks by the raw values themselves.
    pub fn from_raw(raw: Vec<f64>) -> Self {
        let mut order: Vec<usize> = (0..raw.len()).collect();
        order.sort_by(|&x, &y| raw[y].total_cmp(&raw[x]).then(x.cmp(&y)));
        Self::with_order(raw, order)
    }

    fn from_key(raw: Vec<f64>, key: &[u128]) -> Self {
        let mut order: Vec<usize> = (0..raw.len()).collect();
        order.sort_by(|&x, &y| key[y].cmp(&key[x]).then(x.cmp(&y)));
        Self::with_order(raw, order)
    }

    fn with_order(raw: Vec<f64>, order: Vec<usize>) -> Self {
        let max = raw.iter().copied().fold(0.0f64, f64::max);
        let normalized = if max > 0.0 {
            raw.iter().map(|r| r / max).collect()
        } else {
            vec![0.0; raw.len()]
        };
        Self {
            raw,
            normalized,
            order,
        }
    }

    pub fn len(&self) -> usize {
        self.raw.len()
    }

    pub fn is_empty(&self) -> bool {
        self.raw.is_empty()
    }

    /// Sentence indices by decreasing score, earlier index first on ties.
    pub fn ranking(&self) -> Vec<usize> {
        self.order.clone()
    }
}

/// How the topic term of the inner product is formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TopicVector {
    /// Column means `b_j`, in floating point.
    Mean,
    /// Column sums `b'_j = P·b_j` in exact integer arithmetic, rescaled to
    /// the mean-based value at the end.
    #[default]
    ColumnSum,
}

fn integer_products(matrix: &SentenceTermMatrix) -> Vec<u128> {
    let col = matrix.column_sums();
    (0..matrix.n_rows())
        .map(|i| {
            let dot: u128 = matrix
                .row(i)
                .iter()
                .map(|&(j, c)| u128::from(c) * u128::from(col[j]))
                .sum();
            dot * u128::from(matrix.row_sum(i))
        })
        .collect()
}

// (Σ_j s_ij·b_j)·a_i per row.
fn topic_products(matrix: &SentenceTermMatrix, pv: &PseudoVectors) -> Vec<f64> {
    matrix
        .rows()
        .zip(&pv.a)
        .map(|(row, &a)| {
            let dot: f64 = row.iter().map(|&(j, c)| f64::from(c) * pv.b[j]).sum();
            dot * a
        })
        .collect()
}

fn scaled(
    matrix: &SentenceTermMatrix,
    pv: &PseudoVectors,
    topic: TopicVector,
    scale: f64,
) -> ScoreVector {
    let key = integer_products(matrix);
    let np = (matrix.n_cols() * matrix.n_rows()) as f64;
    let raw = match topic {
        TopicVector::Mean => topic_products(matrix, pv)
            .into_iter()
            .map(|x| x / scale)
            .collect(),
        // (Σ_j s_ij·b_j)·a_i = K_i / (N·P)
        TopicVector::ColumnSum => key.iter().map(|&k| k as f64 / (np * scale)).collect(),
    };
    ScoreVector::from_key(raw, &key)
}

/// Scores per sentence with the default topic route.
///
/// `pv` must come from [`pseudo_vectors`] on the same matrix.
pub fn score(matrix: &SentenceTermMatrix, pv: &PseudoVectors) -> ScoreVector {
    score_with(matrix, pv, TopicVector::default())
}

pub fn score_with(
    matrix: &SentenceTermMatrix,
    pv: &PseudoVectors,
    topic: TopicVector,
) -> ScoreVector {
    let np = (matrix.n_cols() * matrix.n_rows()) as f64;
    scaled(matrix, pv, topic, np)
}

/// Scores with the vectors projected onto unit hyperspheres, using the
/// binary-matrix norms |a| = N√P, |b| = √N·P and |s_i| = N.
pub fn score_normalized(matrix: &SentenceTermMatrix, pv: &PseudoVectors) -> ScoreVector {
    let scale = normalized_scale(matrix.n_cols(), matrix.n_rows());
    scaled(matrix, pv, TopicVector::default(), scale)
}

/// √(N⁵·P³), computed as N²·P·√(N·P).
pub fn normalized_scale(n_cols: usize, n_rows: usize) -> f64 {
    let (n, p) = (n_cols as f64, n_rows as f64);
    n * n * p * (n * p).sqrt()
}

/// Target summary size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "unit", content = "value", rename_all = "lowercase")]
pub enum CompressionSpec {
    /// Exactly `k` sentences (clamped to what is available).
    Sentences(usize),
    /// At least this fraction of the source's words, in (0, 1].
    WordRatio(f64),
}

impl Default for CompressionSpec {
    fn default() -> Self {
        CompressionSpec::WordRatio(0.2)
    }
}

impl CompressionSpec {
    pub fn validate(self) -> Result<Self> {
        match self {
            CompressionSpec::Sentences(0) => Err(Error::InvalidBudget(
                "sentence budget must be at least 1".into(),
            )),
            CompressionSpec::WordRatio(r) if !(r > 0.0 && r <= 1.0) => Err(Error::InvalidBudget(
                format!("word ratio {r} outside (0, 1]"),
            )),
            ok => Ok(ok),
        }
    }
}

impl fmt::Display for CompressionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompressionSpec::Sentences(k) => write!(f, "k:{k}"),
            CompressionSpec::WordRatio(r) => write!(f, "ratio:{r}"),
        }
    }
}

impl FromStr for CompressionSpec {
    type Err = Error;

    /// `k:INT` or `ratio:FLOAT`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidBudget(s.to_owned());
        let (unit, value) = s.split_once(':').ok_or_else(bad)?;
        let spec = match unit.trim() {
            "k" => CompressionSpec::Sentences(value.trim().parse().map_err(|_| bad())?),
            "ratio" => CompressionSpec::WordRatio(value.trim().parse().map_err(|_| bad())?),
            _ => return Err(bad()),
        };
        spec.validate()
    }
}

/// An extractive summary: selected indices in source order and their text.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub selected: Vec<usize>,
    pub text: String,
    pub budget: CompressionSpec,
}

impl Summary {
    /// Sorts `selected` and joins the chosen surfaces with single spaces.
    pub fn assemble(
        mut selected: Vec<usize>,
        sentences: &[Sentence],
        budget: CompressionSpec,
    ) -> Self {
        selected.sort_unstable();
        selected.dedup();
        let text = selected
            .iter()
            .map(|&i| sentences[i].surface.as_str())
            .collect::<Vec<_>>()
            .join(" ");
        Self {
            selected,
            text,
            budget,
        }
    }
}

/// Number of words a ratio budget asks for: ⌈ρ·W⌉, at least 1.
pub(crate) fn word_target(ratio: f64, total_words: usize) -> usize {
    // the epsilon absorbs representation error such as 0.3 * 10 = 3.0000000000000004
    ((ratio * total_words as f64 - 1e-9).ceil() as usize).max(1)
}

/// Takes sentences from `order` until the budget is met.
pub(crate) fn take_budget(
    order: &[usize],
    sentences: &[Sentence],
    budget: CompressionSpec,
) -> Vec<usize> {
    match budget {
        CompressionSpec::Sentences(k) => {
            if k > order.len() {
                log::warn!(
                    "budget of {k} sentences exceeds the {} available; clamping",
                    order.len()
                );
            }
            order.iter().copied().take(k).collect()
        }
        CompressionSpec::WordRatio(ratio) => {
            let total: usize = sentences.iter().map(Sentence::word_count).sum();
            let target = word_target(ratio, total);
            let mut taken = Vec::new();
            let mut words = 0;
            for &i in order {
                if words >= target {
                    break;
                }
                taken.push(i);
                words += sentences[i].word_count();
            }
            taken
        }
    }
}

/// Picks the highest-scoring sentences within `budget`, ties going to the
/// earlier sentence, and returns them in source order.
///
/// Sentences left without tokens by filtering are never candidates unless
/// no other sentence exists.
pub fn select(scores: &ScoreVector, sentences: &[Sentence], budget: CompressionSpec) -> Summary {
    assert_eq!(scores.len(), sentences.len(), "one score per sentence");
    let ranking = scores.ranking();
    let mut order: Vec<usize> = ranking
        .iter()
        .copied()
        .filter(|&i| !sentences[i].tokens.is_empty())
        .collect();
    if order.is_empty() {
        order = ranking;
    }
    Summary::assemble(take_budget(&order, sentences, budget), sentences, budget)
}

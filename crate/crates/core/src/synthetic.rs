//! Deterministic synthetic corpus with planted topical redundancy.
//!
//! Words are pronounceable pseudo-words built from consonant–vowel
//! syllables. Every base word comes with inflected forms, and the
//! generator emits a matching `form<TAB>base` lemma dictionary covering
//! the whole pseudo-vocabulary.
//!
//! Each document draws its content words from its own distribution: a few
//! topic words and a shared domain vocabulary, both Zipf-weighted. Most
//! sentences sample that distribution independently and mix in rare
//! filler words. A minority of "core" sentences restate the document:
//! their content words are a systematic (low-variance) sample of the same
//! distribution, without filler. Those core sentences are the planted
//! redundancy a good extractive summary should find.

use std::collections::HashSet;
use std::io::Write;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::preprocess::{Language, LemmaDictionary, RawDocument, StopList};

const ONSETS: &[&str] = &[
    "b", "c", "d", "f", "g", "h", "j", "k", "l", "m", "n", "p", "r", "s", "t", "v", "w", "z", "br",
    "st", "tr", "pl", "gr", "ch",
];
const VOWELS: &[&str] = &["a", "e", "i", "o", "u"];
const CODAS: &[&str] = &["", "", "", "n", "r", "l", "m"];
const SUFFIXES: &[&str] = &["", "s", "ed", "ing", "er"];

#[derive(Debug, Clone)]
pub struct SyntheticConfig {
    pub documents: usize,
    /// Approximate number of words per document.
    pub words_per_doc: usize,
    /// Number of base words; the lemma dictionary holds about five times as
    /// many entries.
    pub base_vocabulary: usize,
    pub topic_words: usize,
    pub domain_words: usize,
    /// Fraction of sentences that restate the document's content.
    pub core_share: f64,
    /// Fraction of content words in ordinary sentences that are rare filler.
    pub filler_rate: f64,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            documents: 100,
            words_per_doc: 2000,
            base_vocabulary: 40_000,
            topic_words: 12,
            domain_words: 60,
            core_share: 0.15,
            filler_rate: 0.15,
            seed: 2012,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    pub documents: Vec<RawDocument>,
    /// `(form, base)` pairs, in generation order.
    pub lemmas: Vec<(String, String)>,
}

impl SyntheticCorpus {
    pub fn dictionary(&self) -> LemmaDictionary {
        LemmaDictionary::from_pairs(self.lemmas.iter().cloned())
    }

    /// Writes `docs/<id>.txt` for every document and `lemmas.tsv` under `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        let docs = dir.join("docs");
        std::fs::create_dir_all(&docs).map_err(|e| Error::io(&docs, e))?;
        for d in &self.documents {
            let path = docs.join(format!("{}.txt", d.id));
            std::fs::write(&path, &d.text).map_err(|e| Error::io(&path, e))?;
        }
        let path = dir.join("lemmas.tsv");
        let file = std::fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
        let mut out = std::io::BufWriter::new(file);
        for (form, base) in &self.lemmas {
            writeln!(out, "{form}\t{base}").map_err(|e| Error::io(&path, e))?;
        }
        out.flush().map_err(|e| Error::io(&path, e))?;
        Ok(())
    }
}

fn pseudo_word(rng: &mut ChaCha8Rng) -> String {
    let syllables = rng.gen_range(2..=3);
    let mut w = String::new();
    for _ in 0..syllables {
        w.push_str(ONSETS.choose(rng).unwrap());
        w.push_str(VOWELS.choose(rng).unwrap());
        w.push_str(CODAS.choose(rng).unwrap());
    }
    w
}

fn inflect(base: &str, rng: &mut ChaCha8Rng) -> String {
    format!("{base}{}", SUFFIXES.choose(rng).unwrap())
}

/// Zipf-weighted (1/rank) distribution over a word list, as a CDF.
struct ContentDistribution {
    words: Vec<String>,
    cdf: Vec<f64>,
}

impl ContentDistribution {
    fn new(parts: &[(&[String], f64)]) -> Self {
        let mut words = Vec::new();
        let mut weights = Vec::new();
        for &(list, share) in parts {
            let norm: f64 = (1..=list.len()).map(|k| 1.0 / k as f64).sum();
            for (k, w) in list.iter().enumerate() {
                words.push(w.clone());
                weights.push(share / (norm * (k + 1) as f64));
            }
        }
        let total: f64 = weights.iter().sum();
        let mut acc = 0.0;
        let cdf = weights
            .iter()
            .map(|w| {
                acc += w / total;
                acc
            })
            .collect();
        Self { words, cdf }
    }

    fn at(&self, u: f64) -> &str {
        let k = self.cdf.partition_point(|&c| c < u);
        &self.words[k.min(self.words.len() - 1)]
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> &str {
        self.at(rng.gen())
    }

    /// `n` draws spaced evenly over the CDF from a random offset.
    fn systematic(&self, n: usize, rng: &mut ChaCha8Rng) -> Vec<&str> {
        let offset: f64 = rng.gen();
        (0..n)
            .map(|k| self.at((k as f64 + offset) / n as f64))
            .collect()
    }
}

fn finish_sentence(
    mut content: Vec<String>,
    function_words: &[&str],
    rng: &mut ChaCha8Rng,
) -> String {
    content.shuffle(rng);
    let mut words = Vec::with_capacity(content.len() * 3 / 2);
    for w in content {
        if rng.gen_bool(0.4) {
            words.push(function_words.choose(rng).unwrap().to_string());
        }
        words.push(w);
    }
    let mut text = words.join(" ");
    if let Some(first) = text.get(..1) {
        let upper = first.to_uppercase();
        text.replace_range(..1, &upper);
    }
    text.push(match rng.gen_range(0..20) {
        0 => '?',
        1 => '!',
        _ => '.',
    });
    text
}

pub fn generate(cfg: &SyntheticConfig) -> SyntheticCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let stop = StopList::builtin(Language::En);
    let function_words: Vec<&str> = vec![
        "the", "of", "and", "a", "in", "to", "is", "was", "for", "with", "on", "by", "that", "as",
        "from", "this", "it", "at", "which", "their",
    ];

    let mut seen = HashSet::new();
    let mut bases = Vec::with_capacity(cfg.base_vocabulary);
    while bases.len() < cfg.base_vocabulary {
        let w = pseudo_word(&mut rng);
        if !stop.contains(&w) && seen.insert(w.clone()) {
            bases.push(w);
        }
    }

    let mut forms = HashSet::new();
    let mut lemmas = Vec::with_capacity(bases.len() * SUFFIXES.len());
    for base in &bases {
        for suffix in SUFFIXES {
            let form = format!("{base}{suffix}");
            if forms.insert(form.clone()) {
                lemmas.push((form, base.clone()));
            }
        }
    }

    let domain: Vec<String> = bases
        .choose_multiple(&mut rng, cfg.domain_words)
        .cloned()
        .collect();

    let documents = (0..cfg.documents)
        .map(|d| {
            let topic: Vec<String> = bases
                .choose_multiple(&mut rng, cfg.topic_words)
                .cloned()
                .collect();
            let dist = ContentDistribution::new(&[(&topic, 0.6), (&domain, 0.4)]);
            let mut sentences = Vec::new();
            let mut words = 0;
            while words < cfg.words_per_doc {
                let content: Vec<String> = if rng.gen_bool(cfg.core_share) {
                    let n = rng.gen_range(14..=20);
                    dist.systematic(n, &mut rng)
                        .into_iter()
                        .map(|w| inflect(w, &mut rng))
                        .collect()
                } else {
                    let n = rng.gen_range(6..=13);
                    (0..n)
                        .map(|_| {
                            if rng.gen_bool(cfg.filler_rate) {
                                inflect(bases.choose(&mut rng).unwrap(), &mut rng)
                            } else {
                                let w = dist.sample(&mut rng).to_owned();
                                inflect(&w, &mut rng)
                            }
                        })
                        .collect()
                };
                let sentence = finish_sentence(content, &function_words, &mut rng);
                words += sentence.split_whitespace().count();
                sentences.push(sentence);
            }
            RawDocument::new(format!("doc{d:03}"), sentences.join(" "), Language::En)
        })
        .collect();

    SyntheticCorpus { documents, lemmas }
}

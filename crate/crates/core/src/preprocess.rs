//! Sentence splitting, token filtering and word normalization.
//!
//! The pipeline follows a fixed order: split on terminal punctuation,
//! lowercase and strip edge punctuation, drop stop-list members, drop
//! document hapaxes, then map each survivor to its canonical form.

use std::borrow::Cow;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::num::NonZeroUsize;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    En,
    Es,
    Fr,
}

impl Language {
    pub fn code(self) -> &'static str {
        match self {
            Language::En => "en",
            Language::Es => "es",
            Language::Fr => "fr",
        }
    }

    fn snowball(self) -> rust_stemmers::Algorithm {
        match self {
            Language::En => rust_stemmers::Algorithm::English,
            Language::Es => rust_stemmers::Algorithm::Spanish,
            Language::Fr => rust_stemmers::Algorithm::French,
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Language {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "en" => Ok(Language::En),
            "es" => Ok(Language::Es),
            "fr" => Ok(Language::Fr),
            _ => Err(Error::InvalidLanguage(s.to_owned())),
        }
    }
}

/// A source document as read from disk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawDocument {
    pub id: String,
    pub text: String,
    pub language: Language,
}

impl RawDocument {
    pub fn new(id: impl Into<String>, text: impl Into<String>, language: Language) -> Self {
        Self {
            id: id.into(),
            text: text.into(),
            language,
        }
    }

    /// Reads a UTF-8 file; the id is the file name without its extension.
    pub fn from_file(path: &Path, language: Language) -> Result<Self> {
        let id = path.file_stem().map_or_else(
            || path.display().to_string(),
            |s| s.to_string_lossy().into_owned(),
        );
        Ok(Self::new(id, read_utf8(path)?, language))
    }
}

/// One sentence of a document.
///
/// `surface` is the untouched source text used for summary assembly;
/// `tokens` starts as the whitespace-separated words of the surface and is
/// replaced by the filtered, normalized stream as the pipeline proceeds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub index: usize,
    pub surface: String,
    pub tokens: Vec<String>,
}

impl Sentence {
    pub fn new(index: usize, surface: impl Into<String>) -> Self {
        let surface = surface.into();
        let tokens = surface.split_whitespace().map(str::to_owned).collect();
        Self {
            index,
            surface,
            tokens,
        }
    }

    /// Number of whitespace-separated words in the surface form.
    pub fn word_count(&self) -> usize {
        self.surface.split_whitespace().count()
    }
}

fn is_terminator(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

// Closing marks that belong to the sentence they follow.
fn is_closer(c: char) -> bool {
    matches!(c, '"' | '\'' | ')' | ']' | '}' | '»' | '”' | '’')
}

/// Splits a document into sentences at `.`, `!` and `?`.
///
/// Runs of terminators (`?!`, `...`) and closing quotes or brackets that
/// follow them stay with the sentence they end. A period with a digit on
/// both sides (`3.14`) does not split. Abbreviations are not special-cased.
/// A trailing run without a terminator becomes the final sentence.
pub fn split_sentences(doc: &RawDocument) -> Result<Vec<Sentence>> {
    split_text(&doc.text)
}

pub(crate) fn split_text(text: &str) -> Result<Vec<Sentence>> {
    let mut sentences = Vec::new();
    let mut start = 0usize;
    let mut prev: Option<char> = None;
    let mut chars = text.char_indices().peekable();

    let push = |from: usize, to: usize, out: &mut Vec<Sentence>| {
        let surface = text[from..to].trim();
        if !surface.is_empty() {
            out.push(Sentence::new(out.len(), surface));
        }
    };

    while let Some((_, c)) = chars.next() {
        let decimal = c == '.'
            && prev.is_some_and(|p| p.is_ascii_digit())
            && chars.peek().is_some_and(|&(_, n)| n.is_ascii_digit());
        prev = Some(c);
        if !is_terminator(c) || decimal {
            continue;
        }
        while chars.next_if(|&(_, n)| is_terminator(n)).is_some() {}
        while chars.next_if(|&(_, n)| is_closer(n)).is_some() {}
        let end = chars.peek().map_or(text.len(), |&(b, _)| b);
        push(start, end, &mut sentences);
        start = end;
    }
    push(start, text.len(), &mut sentences);

    if !sentences
        .iter()
        .any(|s| s.surface.chars().any(char::is_alphabetic))
    {
        return Err(Error::EmptyDocument);
    }
    Ok(sentences)
}

/// Lowercases a raw word and strips leading and trailing non-alphanumeric
/// characters. Returns `None` when nothing is left.
pub fn clean_token(raw: &str) -> Option<String> {
    clean(raw).map(Cow::into_owned)
}

fn clean(raw: &str) -> Option<Cow<'_, str>> {
    let trimmed = raw.trim_matches(|c: char| !c.is_alphanumeric());
    if trimmed.is_empty() {
        None
    } else if trimmed
        .bytes()
        .all(|b| b.is_ascii() && !b.is_ascii_uppercase())
    {
        Some(Cow::Borrowed(trimmed))
    } else {
        Some(Cow::Owned(trimmed.to_lowercase()))
    }
}

/// Small per-language list of function words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StopList {
    pub language: Language,
    words: HashSet<String>,
}

impl StopList {
    /// The stop-list shipped with the crate for `language`.
    pub fn builtin(language: Language) -> Self {
        let source = match language {
            Language::En => include_str!("../resources/stoplists/en.txt"),
            Language::Es => include_str!("../resources/stoplists/es.txt"),
            Language::Fr => include_str!("../resources/stoplists/fr.txt"),
        };
        Self::parse(language, source)
    }

    /// Parses one word per line; blank lines and `#` comments are ignored.
    pub fn parse(language: Language, source: &str) -> Self {
        let words = source
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_lowercase)
            .collect();
        Self { language, words }
    }

    pub fn load(language: Language, path: &Path) -> Result<Self> {
        let source = read_utf8(path)?;
        Ok(Self::parse(language, &source))
    }

    pub fn from_words<I, S>(language: Language, words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Self {
            language,
            words: words
                .into_iter()
                .map(|w| w.as_ref().to_lowercase())
                .collect(),
        }
    }

    pub fn empty(language: Language) -> Self {
        Self {
            language,
            words: HashSet::new(),
        }
    }

    pub fn contains(&self, token: &str) -> bool {
        self.words.contains(token)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

pub(crate) fn read_utf8(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    String::from_utf8(bytes).map_err(|_| Error::NotUtf8 {
        path: path.to_owned(),
    })
}

/// Counts cleaned, non-stop-list tokens over every sentence of a document.
pub fn document_frequencies(sentences: &[Sentence], stoplist: &StopList) -> HashMap<String, usize> {
    let mut freq = HashMap::new();
    for token in sentences
        .iter()
        .flat_map(|s| s.tokens.iter())
        .filter_map(|t| clean_token(t))
        .filter(|t| !stoplist.contains(t))
    {
        *freq.entry(token).or_insert(0) += 1;
    }
    freq
}

/// Cleans a sentence's tokens, then drops stop-list members and tokens
/// occurring fewer than twice in the document. Survivors keep their order.
pub fn filter_sentence(
    sentence: &Sentence,
    stoplist: &StopList,
    doc_frequencies: &HashMap<String, usize>,
) -> Sentence {
    let tokens = sentence
        .tokens
        .iter()
        .filter_map(|t| clean_token(t))
        .filter(|t| !stoplist.contains(t))
        .filter(|t| doc_frequencies.get(t).copied().unwrap_or(0) >= 2)
        .collect();
    Sentence {
        index: sentence.index,
        surface: sentence.surface.clone(),
        tokens,
    }
}

/// Canonical-form mapping applied after filtering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormalizationMode {
    Raw,
    Lemmatize,
    Stem,
    /// Keep only the first `n` characters (Fix_n).
    UltraStem(NonZeroUsize),
}

impl NormalizationMode {
    pub fn ultra_stem(n: usize) -> Result<Self> {
        NonZeroUsize::new(n)
            .map(NormalizationMode::UltraStem)
            .ok_or_else(|| Error::InvalidNormalization("fix:N requires N >= 1".into()))
    }
}

impl fmt::Display for NormalizationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormalizationMode::Raw => f.write_str("raw"),
            NormalizationMode::Lemmatize => f.write_str("lemma"),
            NormalizationMode::Stem => f.write_str("stem"),
            NormalizationMode::UltraStem(n) => write!(f, "fix{n}"),
        }
    }
}

impl FromStr for NormalizationMode {
    type Err = Error;

    /// Accepts `raw`, `lemma`, `stem`, `fix:N` (and `fixN`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "raw" => Ok(NormalizationMode::Raw),
            "lemma" | "lemmatize" => Ok(NormalizationMode::Lemmatize),
            "stem" => Ok(NormalizationMode::Stem),
            _ => {
                let n = s
                    .strip_prefix("fix:")
                    .or_else(|| s.strip_prefix("fix"))
                    .ok_or_else(|| Error::InvalidNormalization(s.clone()))?;
                let n: usize = n
                    .parse()
                    .map_err(|_| Error::InvalidNormalization(s.clone()))?;
                NormalizationMode::ultra_stem(n)
            }
        }
    }
}

/// Word → lemma table loaded from a `word<TAB>lemma` file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LemmaDictionary {
    entries: HashMap<String, String>,
}

impl LemmaDictionary {
    /// Later entries override earlier ones for the same word.
    pub fn parse(source: &str) -> Result<Self> {
        let mut entries = HashMap::new();
        for (n, line) in source.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (word, lemma) = line
                .split_once('\t')
                .ok_or_else(|| Error::DictionaryFormat {
                    line: n + 1,
                    content: line.to_owned(),
                })?;
            let (word, lemma) = (word.trim(), lemma.trim());
            if word.is_empty() || lemma.is_empty() {
                return Err(Error::DictionaryFormat {
                    line: n + 1,
                    content: line.to_owned(),
                });
            }
            entries.insert(word.to_lowercase(), lemma.to_lowercase());
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&read_utf8(path)?)
    }

    pub fn from_pairs<I, S, T>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, T)>,
        S: Into<String>,
        T: Into<String>,
    {
        Self {
            entries: pairs
                .into_iter()
                .map(|(w, l)| (w.into(), l.into()))
                .collect(),
        }
    }

    pub fn lookup(&self, word: &str) -> Option<&str> {
        self.entries.get(word).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// The first `n` characters of `token` (the whole token if shorter).
pub fn ultra_stem(token: &str, n: usize) -> &str {
    match token.char_indices().nth(n) {
        Some((byte, _)) => &token[..byte],
        None => token,
    }
}

/// Applies one [`NormalizationMode`] to lowercase tokens.
pub struct Normalizer {
    mode: NormalizationMode,
    stemmer: Option<rust_stemmers::Stemmer>,
    dictionary: Option<Arc<LemmaDictionary>>,
}

impl fmt::Debug for Normalizer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Normalizer")
            .field("mode", &self.mode)
            .field(
                "dictionary_entries",
                &self.dictionary.as_ref().map(|d| d.len()),
            )
            .finish()
    }
}

impl Normalizer {
    pub fn new(
        mode: NormalizationMode,
        language: Language,
        dictionary: Option<Arc<LemmaDictionary>>,
    ) -> Result<Self> {
        if mode == NormalizationMode::Lemmatize && dictionary.is_none() {
            return Err(Error::MissingDictionary);
        }
        let stemmer = (mode == NormalizationMode::Stem)
            .then(|| rust_stemmers::Stemmer::create(language.snowball()));
        Ok(Self {
            mode,
            stemmer,
            dictionary,
        })
    }

    pub fn mode(&self) -> NormalizationMode {
        self.mode
    }

    pub fn normalize(&self, token: &str) -> String {
        match self.mode {
            NormalizationMode::Raw => token.to_owned(),
            NormalizationMode::Lemmatize => self
                .dictionary
                .as_ref()
                .and_then(|d| d.lookup(token))
                .unwrap_or(token)
                .to_owned(),
            NormalizationMode::Stem => {
                let stemmer = self.stemmer.as_ref().expect("stemmer built for Stem mode");
                let stem = stemmer.stem(token);
                if stem.is_empty() {
                    token.to_owned()
                } else {
                    stem.into_owned()
                }
            }
            NormalizationMode::UltraStem(n) => ultra_stem(token, n.get()).to_owned(),
        }
    }
}

/// Stop-list filtering, hapax removal and normalization for one language.
#[derive(Debug)]
pub struct Preprocessor {
    pub stoplist: StopList,
    pub normalizer: Normalizer,
}

impl Preprocessor {
    pub fn new(stoplist: StopList, normalizer: Normalizer) -> Self {
        Self {
            stoplist,
            normalizer,
        }
    }

    /// Filters every sentence against document-level counts, then
    /// normalizes the surviving tokens. Empty sentences are kept.
    pub fn process(&self, sentences: &[Sentence]) -> Vec<Sentence> {
        // same steps as filter_sentence, with each token cleaned only once
        let cleaned: Vec<Vec<Cow<str>>> = sentences
            .iter()
            .map(|s| {
                s.tokens
                    .iter()
                    .filter_map(|t| clean(t))
                    .filter(|t| !self.stoplist.contains(t))
                    .collect()
            })
            .collect();
        let mut freq: HashMap<&str, usize> = HashMap::new();
        for t in cleaned.iter().flatten() {
            *freq.entry(t).or_insert(0) += 1;
        }
        let mut forms: HashMap<&str, String> = HashMap::new();
        let tokens: Vec<Vec<String>> = cleaned
            .iter()
            .map(|ts| {
                ts.iter()
                    .filter(|t| freq[t.as_ref()] >= 2)
                    .map(|t| {
                        forms
                            .entry(t.as_ref())
                            .or_insert_with(|| self.normalizer.normalize(t))
                            .clone()
                    })
                    .collect()
            })
            .collect();
        sentences
            .iter()
            .zip(tokens)
            .map(|(s, tokens)| Sentence {
                index: s.index,
                surface: s.surface.clone(),
                tokens,
            })
            .collect()
    }
}

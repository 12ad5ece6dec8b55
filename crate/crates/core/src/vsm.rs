//! Sentence × term occurrence matrix.

use std::collections::HashMap;
use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::preprocess::Sentence;

/// Term → column mapping in first-occurrence order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    terms: Vec<String>,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    fn intern(&mut self, term: &str) -> usize {
        if let Some(&j) = self.index.get(term) {
            return j;
        }
        let j = self.terms.len();
        self.terms.push(term.to_owned());
        self.index.insert(term.to_owned(), j);
        j
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn column(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn term(&self, column: usize) -> Option<&str> {
        self.terms.get(column).map(String::as_str)
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }
}

/// Sparse P × N count matrix, stored row-major.
///
/// Each row holds `(column, count)` pairs sorted by column with
/// `count >= 1`; absent pairs are zero. Rows for sentences that lost every
/// token during filtering are present and empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentenceTermMatrix {
    n_cols: usize,
    rows: Vec<Vec<(usize, u32)>>,
}

impl SentenceTermMatrix {
    pub fn new(n_cols: usize, n_rows: usize) -> Self {
        Self {
            n_cols,
            rows: vec![Vec::new(); n_rows],
        }
    }

    /// Builds a matrix from dense rows; every row must have `n_cols` entries.
    pub fn from_dense(n_cols: usize, dense: &[Vec<u32>]) -> Self {
        let rows = dense
            .iter()
            .map(|r| {
                assert_eq!(r.len(), n_cols, "ragged dense matrix");
                r.iter()
                    .enumerate()
                    .filter(|(_, &c)| c > 0)
                    .map(|(j, &c)| (j, c))
                    .collect()
            })
            .collect();
        Self { n_cols, rows }
    }

    pub fn to_dense(&self) -> Vec<Vec<u32>> {
        self.rows
            .iter()
            .map(|r| {
                let mut dense = vec![0; self.n_cols];
                for &(j, c) in r {
                    dense[j] = c;
                }
                dense
            })
            .collect()
    }

    /// P, the number of sentences.
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    /// N, the number of terms.
    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn row(&self, i: usize) -> &[(usize, u32)] {
        &self.rows[i]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[(usize, u32)]> {
        self.rows.iter().map(Vec::as_slice)
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.rows[i]
            .binary_search_by_key(&j, |&(col, _)| col)
            .map_or(0, |k| self.rows[i][k].1)
    }

    /// Number of stored (nonzero) entries.
    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn row_sum(&self, i: usize) -> u64 {
        self.rows[i].iter().map(|&(_, c)| u64::from(c)).sum()
    }

    pub fn column_sums(&self) -> Vec<u64> {
        let mut sums = vec![0u64; self.n_cols];
        for &(j, c) in self.rows.iter().flatten() {
            sums[j] += u64::from(c);
        }
        sums
    }

    /// Sum of all entries.
    pub fn total(&self) -> u64 {
        (0..self.n_rows()).map(|i| self.row_sum(i)).sum()
    }

    /// Writes one `i j count` line per stored entry.
    pub fn write_coo<W: Write>(&self, mut out: W) -> io::Result<()> {
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, c) in row {
                writeln!(out, "{i} {j} {c}")?;
            }
        }
        Ok(())
    }
}

/// Counts occurrences of every normalized token per sentence.
pub fn vectorize(sentences: &[Sentence]) -> Result<(Vocabulary, SentenceTermMatrix)> {
    let mut vocab = Vocabulary::default();
    let mut rows = Vec::with_capacity(sentences.len());
    for s in sentences {
        let mut cols: Vec<usize> = s.tokens.iter().map(|t| vocab.intern(t)).collect();
        cols.sort_unstable();
        let mut row: Vec<(usize, u32)> = Vec::new();
        for j in cols {
            match row.last_mut() {
                Some((last, c)) if *last == j => *c += 1,
                _ => row.push((j, 1)),
            }
        }
        rows.push(row);
    }
    if vocab.is_empty() {
        return Err(Error::EmptyVocabulary);
    }
    let matrix = SentenceTermMatrix {
        n_cols: vocab.len(),
        rows,
    };
    Ok((vocab, matrix))
}

/// Replaces every positive count by 1.
pub fn binarize(matrix: &SentenceTermMatrix) -> SentenceTermMatrix {
    SentenceTermMatrix {
        n_cols: matrix.n_cols,
        rows: matrix
            .rows
            .iter()
            .map(|r| r.iter().map(|&(j, _)| (j, 1)).collect())
            .collect(),
    }
}

//! Criterion benchmarks for the summarization pipeline live in `benches/`.

//! Criterion benchmarks for grouplab live in `benches/`.

//! Criterion benchmarks for the table engines live in `benches/`.

//! Criterion benchmarks for the repair searches; see `benches/`.

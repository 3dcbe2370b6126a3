//! Criterion benchmarks for `selfext-core`; see `benches/`.

//! Criterion benchmarks for `unidissect`; see `benches/`.

//! Criterion benchmarks for laqc-core live in `benches/`.

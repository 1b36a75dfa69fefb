//! Criterion benchmarks for the sumset pipeline live in `benches/`.

//! Criterion benchmarks for `desinc`; see `benches/`.

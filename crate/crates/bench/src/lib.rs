//! Criterion benchmarks for psdual-core live in `benches/`.

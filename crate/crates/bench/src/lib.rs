//! Criterion benchmarks for `fermat-lab`; see `benches/`.

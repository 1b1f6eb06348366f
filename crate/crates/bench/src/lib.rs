//! Criterion benchmarks for `jeqp`; see `benches/`.

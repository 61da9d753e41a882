//! Criterion benchmarks for the shiftq engines; see `benches/engines.rs`.

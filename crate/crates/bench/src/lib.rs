//! Criterion benchmarks for the lab; see `benches/lab.rs`.

//! Criterion benchmarks for `bosonic-core`; see `benches/core_ops.rs`.

//! Criterion benchmarks for the exact and mod-p kernels; see `benches/kernels.rs`.

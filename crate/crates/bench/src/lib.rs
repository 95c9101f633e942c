//! Criterion benchmarks for the polyqudit pipeline; see `benches/pipeline.rs`.
//!
//! Run with `cargo bench -p polyqudit-bench`.

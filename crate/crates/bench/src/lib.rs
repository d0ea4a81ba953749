//! Benchmark-only crate; see `benches/classify.rs`.

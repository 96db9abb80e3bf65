//! Benchmark-only crate; see `benches/screens.rs`.

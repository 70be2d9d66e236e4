//! Criterion benchmarks for the docsynth pipeline; see `benches/pipeline.rs`.

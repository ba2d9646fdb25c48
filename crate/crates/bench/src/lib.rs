//! Benchmark-only crate; all benchmarks live under `benches/`.

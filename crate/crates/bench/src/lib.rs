//! Benchmark-only crate; the measurements live in `benches/benchmarks.rs`.
//! Run them with `cargo bench -p caputo-bench`.

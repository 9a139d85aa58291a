//! Benchmarks for the devbound kernels live in `benches/`.

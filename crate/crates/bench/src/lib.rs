//! Benchmarks for the frobkp kernels; see `benches/`.

//! Criterion benchmarks for `pauli-estimation`; see `benches/`.

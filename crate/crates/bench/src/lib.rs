//! Criterion benchmarks for `cstar-ideal`; see `benches/verdicts.rs`.

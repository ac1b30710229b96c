//! Benchmark-only crate; scenario builders live in stcell-core.

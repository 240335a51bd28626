//! IO companion to `vchc-core`: the instance file format, result and trace
//! serialization, LP text exporters, and the benchmark harness behind the
//! `vchc` binary.

pub mod bench;
pub mod format;
pub mod lp;
pub mod report;

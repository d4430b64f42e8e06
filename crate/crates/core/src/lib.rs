//! Concurrency-defect toolchain for Go codebases.
//!
//! The crate has three independent pillars:
//!
//! * [`syntax`] + [`checks`] — a tolerant Go front end and the GR01–GR11
//!   static checks for race-prone idioms (loop-variable capture, named
//!   returns, mutex-by-value, writes under read locks, ...).
//! * [`racelog`] + [`triage`] + [`store`] — parsing of Go race-detector
//!   stderr blocks, canonical signature hashing for deduplication,
//!   assignee selection from ownership metadata, and an append-only
//!   defect store with outstanding/created-vs-resolved series.
//! * [`trace`] — a vector-clock happens-before engine and an advisory
//!   Eraser-style lockset analysis over recorded synthetic traces.
//!
//! All analyses are pure functions over immutable inputs; the only
//! stateful component is the single-writer [`store::DefectStore`].

pub mod checks;
pub mod racelog;
pub mod store;
pub mod syntax;
pub mod trace;
pub mod triage;

//! Fast-and-frugal decision heuristics over bibliometric indicators.
//!
//! The crate is organised around the objects a research evaluator works with:
//!
//! - [`indicators`]: publications, reference corpora, candidate profiles and the
//!   top-p% highly-cited-paper indicator.
//! - [`heuristics`]: one-cue screening, one-reason (lexicographic) choice,
//!   take-the-best, minimalist, tallying, weighted-linear and recognition, all
//!   with auditable decision traces.
//! - [`ecology`]: task environments, synthetic environment generators, the
//!   least-squares baseline and the out-of-sample benchmark harness.
//! - [`careers`]: synthetic careers with planted hot streaks and a hot-streak
//!   detector.
//! - [`io`]: the delimiter-separated file formats used for corpora, candidates,
//!   environments and careers.

pub mod careers;
pub mod ecology;
mod error;
pub mod heuristics;
pub mod indicators;
pub mod io;
pub mod seed;

pub use error::{Error, Result};

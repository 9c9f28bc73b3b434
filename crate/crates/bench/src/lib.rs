//! Benchmark harness for the `csrecon` solvers.
//!
//! Covers image ingestion (8-bit grayscale PGM/PNG), the mask and
//! measurement interchange formats, benchmark plans, and Table-style
//! reports with relative error, PSNR, time, iterations and FFT counts.

pub mod cli;
pub mod error;
pub mod io;
pub mod plan;
pub mod report;
pub mod runner;

pub use error::{BenchError, Result};
pub use plan::BenchPlan;
pub use report::BenchRecord;

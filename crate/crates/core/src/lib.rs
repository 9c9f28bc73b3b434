//! Compressed-sensing reconstruction of images from partial Fourier data.
//!
//! The measurement model is `y = M ∘ F x`: a unitary 2D DFT of a real image
//! followed by a k-space sampling mask. Three TV-regularized solvers recover
//! `x` from `y`: TwIST, RecPF and SALSA (see [`solvers`]).
//!
//! ```
//! use csrecon::{fourier::{FftCounter, PartialFourierOp}, phantom, sampling, solvers};
//!
//! let truth = phantom::shepp_logan(32, 32).unwrap();
//! let mask = sampling::radial_mask(32, 32, 12).unwrap();
//! let op = PartialFourierOp::new(mask);
//! let y = op.apply(&truth, &mut FftCounter::new()).unwrap();
//! let cfg = solvers::SolverConfig::with_tv_weight(solvers::SolverKind::Salsa, 1e-3);
//! let rec = solvers::reconstruct_salsa(&y, &op, &cfg).unwrap();
//! assert!(rec.report.iterations <= cfg.max_iter);
//! ```

pub mod error;
pub mod fourier;
pub mod grid;
pub mod metrics;
pub mod phantom;
pub mod sampling;
pub mod solvers;
pub mod tv;

pub use error::{Error, Result};
pub use grid::{inner_product, l1_norm, l2_norm, Image, L2Norm, Measurements, SamplingMask, SpectrumGrid};

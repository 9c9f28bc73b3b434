//! TV-regularized reconstruction from partial Fourier data.
//!
//! Three solvers share one measurement operator and one instrumentation
//! format:
//!
//! * [`reconstruct_twist`]: two-step iterative shrinkage/thresholding with a
//!   Chambolle TV prox and a monotone safeguard.
//! * [`reconstruct_recpf`]: gradient splitting with isotropic shrinkage and a
//!   closed-form Fourier-domain x-update (2 FFTs per iteration).
//! * [`reconstruct_salsa`]: ADMM on the split `v = x` with a Fourier-domain
//!   x-update and a Chambolle v-update.
//!
//! # λ conventions
//!
//! TwIST and SALSA minimize `½‖Kx − y‖² + λ·TV(x)`. RecPF minimizes
//! `TV(x) + (λ/2)‖Kx − y‖²`, so `λ_recpf ≈ 1/λ_twist`.
//! [`SolverConfig::with_tv_weight`] performs this translation.

mod recpf;
mod salsa;
mod twist;

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use num_complex::Complex64;

pub use recpf::{reconstruct_recpf, RecpfSystem};
pub use salsa::{reconstruct_salsa, SalsaSystem};
pub use twist::{reconstruct_twist, twist_auto_parameters};

use crate::error::{invalid, Error, Result};
use crate::fourier::{FftCounter, PartialFourierOp};
use crate::grid::{Image, L2Norm, Measurements, SpectrumGrid};
use crate::tv::{tv_value, BoundaryRule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverKind {
    Twist,
    Recpf,
    Salsa,
}

impl SolverKind {
    pub const ALL: [SolverKind; 3] = [SolverKind::Twist, SolverKind::Recpf, SolverKind::Salsa];

    pub fn name(&self) -> &'static str {
        match self {
            SolverKind::Twist => "twist",
            SolverKind::Recpf => "recpf",
            SolverKind::Salsa => "salsa",
        }
    }

    /// Converts a weight on TV (data term weighted ½) into this solver's λ.
    pub fn lambda_for_tv_weight(&self, tv_weight: f64) -> f64 {
        match self {
            SolverKind::Twist | SolverKind::Salsa => tv_weight,
            SolverKind::Recpf => 1.0 / tv_weight,
        }
    }

    /// Inverse of [`lambda_for_tv_weight`](Self::lambda_for_tv_weight).
    pub fn tv_weight_for_lambda(&self, lambda: f64) -> f64 {
        // the map is an involution for both conventions
        self.lambda_for_tv_weight(lambda)
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "twist" => Ok(SolverKind::Twist),
            "recpf" => Ok(SolverKind::Recpf),
            "salsa" => Ok(SolverKind::Salsa),
            other => Err(invalid("solver", format!("unknown solver `{other}`"))),
        }
    }
}

pub const DEFAULT_TV_WEIGHT: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Regularization weight in the solver's own convention (see module docs).
    pub lambda: f64,
    pub max_iter: usize,
    /// Relative-change (TwIST, RecPF) or primal-residual (SALSA) threshold.
    pub tol: f64,
    /// Chambolle iterations per outer iteration (TwIST, SALSA).
    pub inner_prox_iters: usize,
    /// `None` selects the spectral-bound default.
    pub twist_alpha: Option<f64>,
    pub twist_beta: Option<f64>,
    /// Initial splitting penalty for RecPF.
    pub recpf_beta: f64,
    /// Initial augmented-Lagrangian penalty for SALSA.
    pub salsa_mu: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            lambda: DEFAULT_TV_WEIGHT,
            max_iter: 100,
            tol: 1e-4,
            inner_prox_iters: 40,
            twist_alpha: None,
            twist_beta: None,
            recpf_beta: 10.0,
            salsa_mu: 1.0,
        }
    }
}

impl SolverConfig {
    /// Defaults with λ set from a TV weight, translated for `kind`.
    pub fn with_tv_weight(kind: SolverKind, tv_weight: f64) -> Self {
        Self {
            lambda: kind.lambda_for_tv_weight(tv_weight),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        fn positive(name: &'static str, v: f64) -> Result<()> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(invalid(name, format!("{v} must be positive and finite")))
            }
        }
        positive("lambda", self.lambda)?;
        positive("tol", self.tol)?;
        if self.tol >= 1.0 {
            return Err(invalid("tol", format!("{} must be below 1", self.tol)));
        }
        positive("recpf_beta", self.recpf_beta)?;
        positive("salsa_mu", self.salsa_mu)?;
        if let Some(a) = self.twist_alpha {
            positive("twist_alpha", a)?;
        }
        if let Some(b) = self.twist_beta {
            positive("twist_beta", b)?;
        }
        if self.max_iter == 0 {
            return Err(invalid("max_iter", "must be at least 1"));
        }
        if self.inner_prox_iters == 0 {
            return Err(invalid("inner_prox_iters", "must be at least 1"));
        }
        Ok(())
    }
}

/// Per-run instrumentation.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverReport {
    pub solver: SolverKind,
    pub config: SolverConfig,
    pub iterations: usize,
    pub fft_count: u64,
    /// FFTs spent before the first iteration.
    pub setup_ffts: u64,
    /// `½‖Kx − y‖² + w·TV(x)` after each iteration, with `w` the TV weight
    /// equivalent of `config.lambda`.
    pub objective_trace: Vec<f64>,
    /// Stopping quantity after each iteration: relative change of the
    /// iterate for TwIST and RecPF, relative primal residual for SALSA.
    pub relative_change_trace: Vec<f64>,
    pub wall_time: Duration,
    pub achieved_mask_fraction: f64,
}

impl SolverReport {
    pub fn wall_seconds(&self) -> f64 {
        self.wall_time.as_secs_f64()
    }

    /// FFTs spent inside iterations.
    pub fn iteration_ffts(&self) -> u64 {
        self.fft_count - self.setup_ffts
    }

    /// Whether the two-FFTs-per-iteration accounting holds exactly.
    pub fn fft_accounting_holds(&self) -> bool {
        self.fft_count == self.setup_ffts + 2 * self.iterations as u64
    }
}

/// Solver output: the clamped image plus the raw final iterate.
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    /// Final iterate clamped to `[0, 1]`.
    pub image: Image,
    /// Final iterate before clamping.
    pub iterate: Image,
    pub report: SolverReport,
}

impl Reconstruction {
    pub fn into_parts(self) -> (Image, SolverReport) {
        (self.image, self.report)
    }
}

/// Runs the solver named by `kind`.
pub fn reconstruct(
    kind: SolverKind,
    y: &Measurements,
    op: &PartialFourierOp,
    cfg: &SolverConfig,
) -> Result<Reconstruction> {
    match kind {
        SolverKind::Twist => reconstruct_twist(y, op, cfg),
        SolverKind::Recpf => reconstruct_recpf(y, op, cfg),
        SolverKind::Salsa => reconstruct_salsa(y, op, cfg),
    }
}

/// `½‖y − Kx‖² + λ·TV(x)` with Neumann TV.
pub fn objective_tv(x: &Image, y: &Measurements, op: &PartialFourierOp, lambda: f64) -> Result<f64> {
    op.check_measurements(y)?;
    let kx = op.apply(x, &mut FftCounter::new())?;
    Ok(data_misfit(y.data(), kx.data()) + lambda * tv_value(x, BoundaryRule::Neumann))
}

/// `Kᴴ y` clamped to `[0, 1]`.
pub fn zero_fill_baseline(y: &Measurements, op: &PartialFourierOp) -> Result<Image> {
    Ok(op.adjoint(y, &mut FftCounter::new())?.clamped(0.0, 1.0))
}

/// `½‖y − kx‖²` over the full grid.
pub(crate) fn data_misfit(y: &SpectrumGrid, kx: &SpectrumGrid) -> f64 {
    0.5 * y
        .values()
        .iter()
        .zip(kx.values())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
}

/// `½‖y − M·x̂‖²` from a full spectrum `x̂` without forming the masked copy.
pub(crate) fn masked_misfit(y: &Measurements, x_hat: &[Complex64]) -> f64 {
    0.5 * y
        .data()
        .values()
        .iter()
        .zip(x_hat)
        .zip(y.mask().selected())
        .map(|((a, b), &s)| if s { (a - b).norm_sqr() } else { a.norm_sqr() })
        .sum::<f64>()
}

/// `‖new − old‖ / ‖old‖`, with 0/0 read as 0.
pub(crate) fn relative_change(new: &Image, old: &Image) -> f64 {
    let diff = new
        .values()
        .iter()
        .zip(old.values())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    ratio(diff, old.l2_norm())
}

pub(crate) fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else if num == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

pub(crate) fn ensure_finite(x: &Image, solver: SolverKind, iteration: usize) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFiniteIterate {
            solver: solver.name(),
            iteration,
        })
    }
}

/// Symbol of the periodic `∇ᵀ∇` on the DFT grid: `Σ 2 − 2cos(2πk/n)`.
pub(crate) fn periodic_laplacian_symbol(width: usize, height: usize) -> Vec<f64> {
    let tau = 2.0 * std::f64::consts::PI;
    let cx: Vec<f64> = (0..width)
        .map(|k| 2.0 - 2.0 * (tau * k as f64 / width as f64).cos())
        .collect();
    let cy: Vec<f64> = (0..height)
        .map(|k| 2.0 - 2.0 * (tau * k as f64 / height as f64).cos())
        .collect();
    cy.iter().flat_map(|&y| cx.iter().map(move |&x| y + x)).collect()
}

use std::ops::{Add, Mul};
use std::time::Instant;

use crate::error::Result;
use crate::fourier::{FftCounter, PartialFourierOp};
use crate::grid::{Image, Measurements, SpectrumGrid};
use crate::sampling::mask_fraction;
use crate::tv::{tv_value, BoundaryRule, ChambolleParams, ChambolleSolver};

use super::{data_misfit, ensure_finite, relative_change, Reconstruction, SolverConfig, SolverKind, SolverReport};

/// Smallest eigenvalue surrogate for `Kᴴ K`, whose true spectrum is `{0, 1}`.
const XI_MIN: f64 = 1e-3;
const XI_MAX: f64 = 1.0;

/// Two-step parameters `(α, β)` from the spectral bounds of `Kᴴ K`.
pub fn twist_auto_parameters() -> (f64, f64) {
    let kappa = XI_MIN / XI_MAX;
    let rho = (1.0 - kappa.sqrt()) / (1.0 + kappa.sqrt());
    let alpha = rho * rho + 1.0;
    let beta = 2.0 * alpha / (XI_MAX + XI_MIN);
    (alpha, beta)
}

/// `Σ cᵢ·vᵢ` over the terms with nonzero coefficient.
fn combine<T>(terms: &[(f64, &[T])]) -> Vec<T>
where
    T: Copy + Mul<f64, Output = T> + Add<Output = T>,
{
    let active: Vec<&(f64, &[T])> = terms.iter().filter(|(c, _)| *c != 0.0).collect();
    let n = terms[0].1.len();
    (0..n)
        .map(|i| {
            let (c0, v0) = active[0];
            let mut acc = v0[i] * *c0;
            for (c, v) in &active[1..] {
                acc = acc + v[i] * *c;
            }
            acc
        })
        .collect()
}

struct Iterate {
    x: Image,
    kx: Measurements,
    objective: f64,
}

/// TwIST over `½‖Kx − y‖² + λ·TV(x)`.
///
/// `x₁` is a plain IST step from the zero-filled start; afterwards
/// `x_{t+1} = (1−α)x_{t−1} + (α−β)x_t + β·Ψ(x_t + Kᴴ(y − Kx_t))` where `Ψ` is
/// the TV prox of weight λ. A two-step candidate that raises the objective is
/// replaced by the IST step; if that also raises it the run stops at `x_t`.
///
/// `K` of every candidate is obtained from `KΨ` by linearity, so each
/// iteration costs exactly one adjoint and one forward FFT.
pub fn reconstruct_twist(y: &Measurements, op: &PartialFourierOp, cfg: &SolverConfig) -> Result<Reconstruction> {
    op.check_measurements(y)?;
    cfg.validate()?;
    let start = Instant::now();
    let kind = SolverKind::Twist;
    let lambda = cfg.lambda;
    let (auto_alpha, auto_beta) = twist_auto_parameters();
    let alpha = cfg.twist_alpha.unwrap_or(auto_alpha);
    let beta = cfg.twist_beta.unwrap_or(auto_beta);
    let (w, h) = op.dims();

    let objective = |x: &Image, kx: &Measurements| data_misfit(y.data(), kx.data()) + lambda * tv_value(x, BoundaryRule::Neumann);

    let mut fft = FftCounter::new();
    let x0 = op.adjoint(y, &mut fft)?;
    let kx0 = op.apply(&x0, &mut fft)?;
    let setup_ffts = fft.count();
    let f0 = objective(&x0, &kx0);

    let mut prox = ChambolleSolver::new(w, h, ChambolleParams::inner(cfg.inner_prox_iters));
    let mut prev: Option<Iterate> = None;
    let mut cur = Iterate { x: x0, kx: kx0, objective: f0 };
    let mut objective_trace = Vec::new();
    let mut relative_change_trace = Vec::new();
    let mut iterations = 0;

    for t in 1..=cfg.max_iter {
        iterations = t;
        let residual = y.data().sub(cur.kx.data())?;
        let back = op.inverse_spectrum(&residual, &mut fft).real_part();
        let eps = cur.x.add(&back)?;
        let psi = prox.prox(&eps, lambda)?;
        ensure_finite(&psi, kind, t)?;
        let kpsi = op.apply(&psi, &mut fft)?;

        let two_step = match &prev {
            Some(p) => {
                let c_prev = 1.0 - alpha;
                let c_cur = alpha - beta;
                let x = Image::from_raw(
                    w,
                    h,
                    combine(&[(c_prev, p.x.values()), (c_cur, cur.x.values()), (beta, psi.values())]),
                );
                let kx = Measurements::from_raw(
                    op.mask().clone(),
                    SpectrumGrid::from_raw(
                        w,
                        h,
                        combine(&[(c_prev, p.kx.data().values()), (c_cur, cur.kx.data().values()), (beta, kpsi.data().values())]),
                    ),
                );
                ensure_finite(&x, kind, t)?;
                let f = objective(&x, &kx);
                (f <= cur.objective).then_some(Iterate { x, kx, objective: f })
            }
            None => None,
        };

        let next = match two_step {
            Some(it) => it,
            None => {
                let f = objective(&psi, &kpsi);
                if f > cur.objective {
                    // the prox is inexact; no descent is left at this accuracy
                    objective_trace.push(cur.objective);
                    relative_change_trace.push(0.0);
                    break;
                }
                Iterate { x: psi, kx: kpsi, objective: f }
            }
        };

        let change = relative_change(&next.x, &cur.x);
        objective_trace.push(next.objective);
        relative_change_trace.push(change);
        prev = Some(std::mem::replace(&mut cur, next));
        if change < cfg.tol {
            break;
        }
    }

    let report = SolverReport {
        solver: kind,
        config: *cfg,
        iterations,
        fft_count: fft.count(),
        setup_ffts,
        objective_trace,
        relative_change_trace,
        wall_time: start.elapsed(),
        achieved_mask_fraction: mask_fraction(op.mask()),
    };
    Ok(Reconstruction {
        image: cur.x.clamped(0.0, 1.0),
        iterate: cur.x,
        report,
    })
}

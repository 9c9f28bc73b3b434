use std::time::Instant;

use crate::error::Result;
use crate::fourier::{FftCounter, PartialFourierOp};
use crate::grid::{ensure_same_dims, Image, Measurements, SpectrumGrid};
use crate::sampling::mask_fraction;
use crate::tv::{tv_value, BoundaryRule, ChambolleParams, ChambolleSolver};

use super::{ensure_finite, masked_misfit, ratio, Reconstruction, SolverConfig, SolverKind, SolverReport};

/// μ stays fixed for this many iterations before doubling...
const MU_BLOCK: usize = 10;
/// ...up to this multiple of its initial value.
const MU_MAX_FACTOR: f64 = 256.0;

/// Closed-form x-update of SALSA: `(Kᴴ K + μI) x = rhs` over real images.
///
/// The real part of `Kᴴ K` is diagonal in k-space with the symmetrized mask
/// as its symbol, so the solve is one forward FFT, a per-bin division by
/// `m_sym + μ`, and one inverse FFT.
#[derive(Debug, Clone)]
pub struct SalsaSystem {
    op: PartialFourierOp,
    mask_sym: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct SalsaStep {
    pub x: Image,
    /// `½‖M·F x − y‖²`.
    pub misfit: f64,
}

impl SalsaSystem {
    pub fn new(op: &PartialFourierOp) -> Self {
        Self {
            op: op.clone(),
            mask_sym: op.symmetrized_mask(),
        }
    }

    /// Solves `(Kᴴ K + μI) x = rhs`. Two FFTs.
    pub fn x_update(&self, rhs: &Image, y: &Measurements, mu: f64, fft: &mut FftCounter) -> Result<SalsaStep> {
        ensure_same_dims(self.op.dims(), rhs.dims())?;
        self.op.check_measurements(y)?;
        let mut spec = self.op.forward_image(rhs, fft).into_values();
        for (v, &m) in spec.iter_mut().zip(&self.mask_sym) {
            *v /= m + mu;
        }
        let misfit = masked_misfit(y, &spec);
        let (w, h) = self.op.dims();
        let x = self.op.inverse_spectrum(&SpectrumGrid::from_raw(w, h, spec), fft).real_part();
        Ok(SalsaStep { x, misfit })
    }
}

/// SALSA (ADMM) over `½‖Kx − y‖² + λ·TV(x)` with the split `v = x`.
///
/// Per iteration: `x ← (KᴴK + μI)⁻¹(Kᴴy + μ(v − d))`,
/// `v ← prox_{(λ/μ)TV}(x + d)`, `d ← d + x − v`. μ is held for blocks of
/// 10 iterations and then doubled (the scaled dual `d` is halved with it),
/// up to 2⁸ times its initial value. Stops when `‖x − v‖/‖x‖ < tol`.
pub fn reconstruct_salsa(y: &Measurements, op: &PartialFourierOp, cfg: &SolverConfig) -> Result<Reconstruction> {
    op.check_measurements(y)?;
    cfg.validate()?;
    let start = Instant::now();
    let kind = SolverKind::Salsa;
    let lambda = cfg.lambda;
    let (w, h) = op.dims();

    let mut fft = FftCounter::new();
    let khy = op.adjoint(y, &mut fft)?;
    let setup_ffts = fft.count();
    let system = SalsaSystem::new(op);
    let mut prox = ChambolleSolver::new(w, h, ChambolleParams::inner(cfg.inner_prox_iters));

    let mu_cap = cfg.salsa_mu * MU_MAX_FACTOR;
    let mut mu = cfg.salsa_mu;
    let mut x = khy.clone();
    let mut v = khy.clone();
    let mut d = vec![0.0; w * h];
    let mut objective_trace = Vec::new();
    let mut relative_change_trace = Vec::new();
    let mut iterations = 0;

    for t in 1..=cfg.max_iter {
        iterations = t;
        if t > 1 && (t - 1) % MU_BLOCK == 0 && mu < mu_cap {
            let next = (mu * 2.0).min(mu_cap);
            let rescale = mu / next;
            d.iter_mut().for_each(|di| *di *= rescale);
            mu = next;
        }

        let rhs = Image::from_raw(
            w,
            h,
            khy.values()
                .iter()
                .zip(v.values())
                .zip(&d)
                .map(|((&k, &vi), &di)| k + mu * (vi - di))
                .collect(),
        );
        let step = system.x_update(&rhs, y, mu, &mut fft)?;
        x = step.x;
        ensure_finite(&x, kind, t)?;

        let shifted = Image::from_raw(w, h, x.values().iter().zip(&d).map(|(a, b)| a + b).collect());
        v = prox.prox(&shifted, lambda / mu)?;
        ensure_finite(&v, kind, t)?;

        let mut primal_sq = 0.0;
        for ((di, &xi), &vi) in d.iter_mut().zip(x.values()).zip(v.values()) {
            let r = xi - vi;
            *di += r;
            primal_sq += r * r;
        }
        let primal = ratio(primal_sq.sqrt(), crate::grid::l2_norm(&x));

        objective_trace.push(step.misfit + lambda * tv_value(&x, BoundaryRule::Neumann));
        relative_change_trace.push(primal);
        if primal < cfg.tol {
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
        image: x.clamped(0.0, 1.0),
        iterate: x,
        report,
    })
}

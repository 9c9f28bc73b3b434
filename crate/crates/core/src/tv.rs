//! Discrete isotropic total variation.

use crate::error::{invalid, Result};
use crate::grid::{ensure_same_dims, Image};

/// How forward differences treat the last row and column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryRule {
    /// Differences across the edge are zero.
    Neumann,
    /// Indices wrap around, making the difference operators circulant.
    Periodic,
}

/// Per-pixel pair of horizontal (`dx`) and vertical (`dy`) components.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    width: usize,
    height: usize,
    dx: Vec<f64>,
    dy: Vec<f64>,
}

impl VectorField {
    pub fn new(width: usize, height: usize, dx: Vec<f64>, dy: Vec<f64>) -> Result<Self> {
        let n = width * height;
        if width == 0 || height == 0 {
            return Err(crate::Error::EmptyGrid { width, height });
        }
        for comp in [&dx, &dy] {
            if comp.len() != n {
                return Err(crate::Error::LengthMismatch {
                    expected: n,
                    found: comp.len(),
                });
            }
            if let Some(index) = comp.iter().position(|v| !v.is_finite()) {
                return Err(crate::Error::NonFinite { index });
            }
        }
        Ok(Self {
            width,
            height,
            dx,
            dy,
        })
    }

    pub fn zeros(width: usize, height: usize) -> Result<Self> {
        Self::new(width, height, vec![0.0; width * height], vec![0.0; width * height])
    }

    pub(crate) fn from_raw(width: usize, height: usize, dx: Vec<f64>, dy: Vec<f64>) -> Self {
        Self {
            width,
            height,
            dx,
            dy,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn dx(&self) -> &[f64] {
        &self.dx
    }

    pub fn dy(&self) -> &[f64] {
        &self.dy
    }

    /// Per-pixel Euclidean magnitude.
    pub fn magnitudes(&self) -> Vec<f64> {
        self.dx.iter().zip(&self.dy).map(|(a, b)| a.hypot(*b)).collect()
    }

    /// `Σ dxᵢ·qxᵢ + dyᵢ·qyᵢ`.
    pub fn dot(&self, other: &VectorField) -> Result<f64> {
        ensure_same_dims(self.dims(), other.dims())?;
        let sx: f64 = self.dx.iter().zip(&other.dx).map(|(a, b)| a * b).sum();
        let sy: f64 = self.dy.iter().zip(&other.dy).map(|(a, b)| a * b).sum();
        Ok(sx + sy)
    }
}

fn gradient_into(x: &[f64], w: usize, h: usize, b: BoundaryRule, dx: &mut [f64], dy: &mut [f64]) {
    for r in 0..h {
        let row = &x[r * w..(r + 1) * w];
        for c in 0..w {
            let i = r * w + c;
            dx[i] = if c + 1 < w {
                row[c + 1] - row[c]
            } else {
                match b {
                    BoundaryRule::Neumann => 0.0,
                    BoundaryRule::Periodic => row[0] - row[c],
                }
            };
            dy[i] = if r + 1 < h {
                x[i + w] - x[i]
            } else {
                match b {
                    BoundaryRule::Neumann => 0.0,
                    BoundaryRule::Periodic => x[c] - x[i],
                }
            };
        }
    }
}

fn divergence_into(dx: &[f64], dy: &[f64], w: usize, h: usize, b: BoundaryRule, out: &mut [f64]) {
    match b {
        BoundaryRule::Neumann => {
            for r in 0..h {
                for c in 0..w {
                    let i = r * w + c;
                    let mut d = 0.0;
                    if c + 1 < w {
                        d += dx[i];
                    }
                    if c > 0 {
                        d -= dx[i - 1];
                    }
                    if r + 1 < h {
                        d += dy[i];
                    }
                    if r > 0 {
                        d -= dy[i - w];
                    }
                    out[i] = d;
                }
            }
        }
        BoundaryRule::Periodic => {
            for r in 0..h {
                let r_prev = if r == 0 { h - 1 } else { r - 1 };
                for c in 0..w {
                    let c_prev = if c == 0 { w - 1 } else { c - 1 };
                    let i = r * w + c;
                    out[i] = dx[i] - dx[r * w + c_prev] + dy[i] - dy[r_prev * w + c];
                }
            }
        }
    }
}

/// Forward differences.
pub fn gradient(x: &Image, b: BoundaryRule) -> VectorField {
    let (w, h) = x.dims();
    let mut dx = vec![0.0; w * h];
    let mut dy = vec![0.0; w * h];
    gradient_into(x.values(), w, h, b, &mut dx, &mut dy);
    VectorField::from_raw(w, h, dx, dy)
}

/// Negative adjoint of [`gradient`] under the same boundary rule.
pub fn divergence(p: &VectorField, b: BoundaryRule) -> Image {
    let (w, h) = p.dims();
    let mut out = vec![0.0; w * h];
    divergence_into(&p.dx, &p.dy, w, h, b, &mut out);
    Image::from_raw(w, h, out)
}

/// Isotropic TV: sum of per-pixel gradient magnitudes.
pub fn tv_value(x: &Image, b: BoundaryRule) -> f64 {
    gradient(x, b).magnitudes().iter().sum()
}

/// Per-pixel vector shrinkage: magnitude `m` becomes `max(m − t, 0)`.
pub fn soft_threshold_field(g: &VectorField, t: f64) -> Result<VectorField> {
    if !(t >= 0.0) {
        return Err(invalid("t", format!("threshold {t} must be non-negative")));
    }
    Ok(shrink(g, t))
}

pub(crate) fn shrink(g: &VectorField, t: f64) -> VectorField {
    let n = g.dx.len();
    let mut dx = vec![0.0; n];
    let mut dy = vec![0.0; n];
    for i in 0..n {
        let m = g.dx[i].hypot(g.dy[i]);
        if m > t {
            let k = (m - t) / m;
            dx[i] = g.dx[i] * k;
            dy[i] = g.dy[i] * k;
        }
    }
    VectorField::from_raw(g.width, g.height, dx, dy)
}

/// Default dual step for Chambolle's iteration.
pub const CHAMBOLLE_TAU: f64 = 0.248;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChambolleParams {
    pub tau: f64,
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for ChambolleParams {
    fn default() -> Self {
        Self {
            tau: CHAMBOLLE_TAU,
            max_iter: 1000,
            tol: 1e-4,
        }
    }
}

impl ChambolleParams {
    /// Loose settings used inside the outer solvers.
    pub fn inner(max_iter: usize) -> Self {
        Self {
            max_iter,
            ..Self::default()
        }
    }
}

/// Chambolle's dual fixed-point solver for
/// `argmin_x weight·TV(x) + ½‖x − v‖²` (Neumann boundary).
///
/// Keeps the dual field between calls so that repeated proxes of slowly
/// changing inputs start from the previous solution.
#[derive(Debug, Clone)]
pub struct ChambolleSolver {
    width: usize,
    height: usize,
    params: ChambolleParams,
    px: Vec<f64>,
    py: Vec<f64>,
    div: Vec<f64>,
    gx: Vec<f64>,
    gy: Vec<f64>,
    last_iterations: usize,
}

impl ChambolleSolver {
    pub fn new(width: usize, height: usize, params: ChambolleParams) -> Self {
        let n = width * height;
        Self {
            width,
            height,
            params,
            px: vec![0.0; n],
            py: vec![0.0; n],
            div: vec![0.0; n],
            gx: vec![0.0; n],
            gy: vec![0.0; n],
            last_iterations: 0,
        }
    }

    pub fn params(&self) -> &ChambolleParams {
        &self.params
    }

    /// Inner iterations used by the most recent call.
    pub fn last_iterations(&self) -> usize {
        self.last_iterations
    }

    pub fn reset(&mut self) {
        self.px.iter_mut().for_each(|v| *v = 0.0);
        self.py.iter_mut().for_each(|v| *v = 0.0);
    }

    /// Current dual field.
    pub fn dual(&self) -> VectorField {
        VectorField::from_raw(self.width, self.height, self.px.clone(), self.py.clone())
    }

    pub fn prox(&mut self, v: &Image, weight: f64) -> Result<Image> {
        ensure_same_dims((self.width, self.height), v.dims())?;
        if !(weight > 0.0) {
            return Err(invalid("weight", format!("{weight} must be positive")));
        }
        let (w, h) = (self.width, self.height);
        let vals = v.values();
        let inv_weight = 1.0 / weight;
        let tau = self.params.tau;

        let mut iterations = 0;
        for _ in 0..self.params.max_iter {
            iterations += 1;
            divergence_into(&self.px, &self.py, w, h, BoundaryRule::Neumann, &mut self.div);
            for (d, &x) in self.div.iter_mut().zip(vals) {
                *d -= x * inv_weight;
            }
            gradient_into(&self.div, w, h, BoundaryRule::Neumann, &mut self.gx, &mut self.gy);

            let mut max_change: f64 = 0.0;
            for i in 0..w * h {
                let (gx, gy) = (self.gx[i], self.gy[i]);
                let denom = 1.0 + tau * gx.hypot(gy);
                let nx = (self.px[i] + tau * gx) / denom;
                let ny = (self.py[i] + tau * gy) / denom;
                max_change = max_change
                    .max((nx - self.px[i]).abs())
                    .max((ny - self.py[i]).abs());
                self.px[i] = nx;
                self.py[i] = ny;
            }
            if max_change < self.params.tol {
                break;
            }
        }
        self.last_iterations = iterations;

        divergence_into(&self.px, &self.py, w, h, BoundaryRule::Neumann, &mut self.div);
        let out = vals
            .iter()
            .zip(&self.div)
            .map(|(&x, &d)| x - weight * d)
            .collect();
        Ok(Image::from_raw(w, h, out))
    }
}

/// Standalone TV prox from a zero dual start.
pub fn chambolle_prox(v: &Image, weight: f64, max_iter: usize, tol: f64) -> Result<Image> {
    if max_iter == 0 {
        return Err(invalid("max_iter", "must be at least 1"));
    }
    if !(tol > 0.0) {
        return Err(invalid("tol", format!("{tol} must be positive")));
    }
    let params = ChambolleParams {
        max_iter,
        tol,
        ..ChambolleParams::default()
    };
    ChambolleSolver::new(v.width(), v.height(), params).prox(v, weight)
}

/// `weight·TV(x) + ½‖x − v‖²` with Neumann TV.
pub fn prox_objective(x: &Image, v: &Image, weight: f64) -> f64 {
    let fit: f64 = x
        .values()
        .iter()
        .zip(v.values())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    weight * tv_value(x, BoundaryRule::Neumann) + 0.5 * fit
}

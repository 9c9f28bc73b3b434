//! k-space undersampling masks.
//!
//! Masks are generated on a centered grid (DC at `(h/2, w/2)`) and then
//! index-shifted so that DC lands on `(0, 0)`, the canonical layout.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::grid::SamplingMask;

/// Range of centered offsets along an axis of length `n`.
fn offset_range(n: usize) -> (isize, isize) {
    let lo = -((n / 2) as isize);
    let hi = (n - 1 - n / 2) as isize;
    (lo, hi)
}

/// Index in the unshifted layout for a centered offset.
fn unshift(offset: isize, n: usize) -> usize {
    offset.rem_euclid(n as isize) as usize
}

/// Nearest integer, with exact halves going toward zero. Odd-symmetric,
/// which keeps radial masks point-symmetric.
fn round_half_toward_zero(x: f64) -> isize {
    let t = x.trunc();
    if (x - t).abs() == 0.5 {
        t as isize
    } else {
        x.round() as isize
    }
}

fn check_dims(width: usize, height: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::EmptyGrid { width, height });
    }
    Ok(())
}

fn check_fraction(target_fraction: f64) -> Result<()> {
    if !(target_fraction > 0.0 && target_fraction <= 1.0) {
        return Err(invalid(
            "target_fraction",
            format!("{target_fraction} is outside (0, 1]"),
        ));
    }
    Ok(())
}

/// Rasterizes one line through the centered origin at angle `theta`
/// (radians, measured from the +column axis toward +row) into `selected`.
fn draw_line(selected: &mut [bool], width: usize, height: usize, theta: f64) {
    let (s, c) = theta.sin_cos();
    let (col_lo, col_hi) = offset_range(width);
    let (row_lo, row_hi) = offset_range(height);
    if c.abs() >= s.abs() {
        let slope = s / c;
        for u in col_lo..=col_hi {
            let v = round_half_toward_zero(u as f64 * slope);
            if (row_lo..=row_hi).contains(&v) {
                selected[unshift(v, height) * width + unshift(u, width)] = true;
            }
        }
    } else {
        let slope = c / s;
        for v in row_lo..=row_hi {
            let u = round_half_toward_zero(v as f64 * slope);
            if (col_lo..=col_hi).contains(&u) {
                selected[unshift(v, height) * width + unshift(u, width)] = true;
            }
        }
    }
}

/// Union of `num_lines` digital lines through k-space center at angles
/// `k·π/num_lines`. Each line runs boundary to boundary; along its major
/// axis every step selects the nearest pixel on the minor axis.
pub fn radial_mask(width: usize, height: usize, num_lines: usize) -> Result<SamplingMask> {
    check_dims(width, height)?;
    if num_lines == 0 {
        return Err(invalid("num_lines", "must be at least 1"));
    }
    let mut selected = vec![false; width * height];
    for k in 0..num_lines {
        let theta = k as f64 * PI / num_lines as f64;
        draw_line(&mut selected, width, height, theta);
    }
    selected[0] = true;
    SamplingMask::new(width, height, selected)
}

/// Result of a fraction-targeted radial construction.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialFit {
    pub mask: SamplingMask,
    /// `None` when the target saturated to a full mask.
    pub num_lines: Option<usize>,
    pub achieved_fraction: f64,
}

/// Smallest radial line count whose coverage reaches `target_fraction − tol`.
pub fn radial_mask_for_fraction(
    width: usize,
    height: usize,
    target_fraction: f64,
    tol: f64,
) -> Result<RadialFit> {
    check_dims(width, height)?;
    check_fraction(target_fraction)?;
    if !(tol > 0.0) {
        return Err(invalid("tol", format!("{tol} must be positive")));
    }
    if target_fraction >= 1.0 {
        return Ok(RadialFit {
            mask: SamplingMask::full(width, height)?,
            num_lines: None,
            achieved_fraction: 1.0,
        });
    }

    let fraction_of = |lines: usize| -> Result<(SamplingMask, f64)> {
        let m = radial_mask(width, height, lines)?;
        let f = mask_fraction(&m);
        Ok((m, f))
    };

    let floor = target_fraction - tol;
    let (single, single_fraction) = fraction_of(1)?;
    if single_fraction > target_fraction + tol {
        return Err(Error::UnreachableFraction {
            target: target_fraction,
            minimum: single_fraction,
        });
    }
    if single_fraction >= floor {
        return Ok(RadialFit {
            mask: single,
            num_lines: Some(1),
            achieved_fraction: single_fraction,
        });
    }

    // Grow the bracket until it reaches the floor; past 4·(w+h) lines every
    // boundary pixel has its own angle and coverage stops improving.
    let cap = 4 * (width + height);
    let mut lo = 1;
    let mut hi = 2;
    loop {
        let (_, f) = fraction_of(hi)?;
        if f >= floor {
            break;
        }
        if hi >= cap {
            return Ok(RadialFit {
                mask: SamplingMask::full(width, height)?,
                num_lines: None,
                achieved_fraction: 1.0,
            });
        }
        lo = hi;
        hi = (hi * 2).min(cap);
    }
    // invariant: f(lo) < floor <= f(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fraction_of(mid)?.1 >= floor {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let (mask, achieved_fraction) = fraction_of(hi)?;
    Ok(RadialFit {
        mask,
        num_lines: Some(hi),
        achieved_fraction,
    })
}

/// Per-bin selection probabilities for the variable-density law
/// `p(r) ∝ (1 + r)^(−decay)`, clipped at 1 and rescaled so the mean equals
/// `target_fraction`. Layout is unshifted (DC at index 0).
pub fn variable_density_probabilities(
    width: usize,
    height: usize,
    target_fraction: f64,
    decay: f64,
) -> Result<Vec<f64>> {
    check_dims(width, height)?;
    check_fraction(target_fraction)?;
    if !(decay > 0.0 && decay.is_finite()) {
        return Err(invalid("decay", format!("{decay} must be positive")));
    }
    let n = width * height;
    let half_w = (width / 2).max(1) as f64;
    let half_h = (height / 2).max(1) as f64;
    let (col_lo, col_hi) = offset_range(width);
    let (row_lo, row_hi) = offset_range(height);

    let mut radius = vec![0.0; n];
    for v in row_lo..=row_hi {
        for u in col_lo..=col_hi {
            let r = (u as f64 / half_w).hypot(v as f64 / half_h);
            radius[unshift(v, height) * width + unshift(u, width)] = r;
        }
    }
    let r_max = radius.iter().cloned().fold(0.0, f64::max);
    let weight: Vec<f64> = radius
        .iter()
        .map(|&r| {
            let r = if r_max > 0.0 { r / r_max } else { 0.0 };
            (1.0 + r).powf(-decay)
        })
        .collect();

    // Clip-and-respread: bins whose scaled weight reaches 1 are pinned and the
    // remaining mass is spread over the rest until nothing new clips.
    let budget = target_fraction * n as f64;
    let mut clipped = vec![false; n];
    let mut scale;
    loop {
        let pinned = clipped.iter().filter(|&&c| c).count() as f64;
        let free_mass: f64 = weight
            .iter()
            .zip(&clipped)
            .filter(|(_, &c)| !c)
            .map(|(w, _)| w)
            .sum();
        if free_mass <= 0.0 {
            scale = f64::INFINITY;
            break;
        }
        scale = (budget - pinned) / free_mass;
        let mut changed = false;
        for (c, &w) in clipped.iter_mut().zip(&weight) {
            if !*c && scale * w >= 1.0 {
                *c = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(weight
        .iter()
        .zip(&clipped)
        .map(|(&w, &c)| if c { 1.0 } else { (scale * w).min(1.0) })
        .collect())
}

/// Random mask denser near the k-space center. Deterministic for a given seed.
pub fn variable_density_mask(
    width: usize,
    height: usize,
    target_fraction: f64,
    decay: f64,
    seed: u64,
) -> Result<SamplingMask> {
    let probs = variable_density_probabilities(width, height, target_fraction, decay)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut selected: Vec<bool> = probs.iter().map(|&p| rng.gen::<f64>() < p).collect();
    selected[0] = true;
    SamplingMask::new(width, height, selected)
}

/// `count / (width·height)`.
pub fn mask_fraction(mask: &SamplingMask) -> f64 {
    mask.count() as f64 / mask.len() as f64
}

/// How radial line count is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadialLines {
    Count(usize),
    Fraction { target: f64, tol: f64 },
}

/// Declarative mask description, as accepted by the benchmark harness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MaskSpec {
    Full {
        width: usize,
        height: usize,
    },
    Radial {
        width: usize,
        height: usize,
        lines: RadialLines,
    },
    VariableDensity {
        width: usize,
        height: usize,
        target_fraction: f64,
        decay: f64,
        seed: u64,
    },
}

impl MaskSpec {
    pub fn dims(&self) -> (usize, usize) {
        match *self {
            MaskSpec::Full { width, height }
            | MaskSpec::Radial { width, height, .. }
            | MaskSpec::VariableDensity { width, height, .. } => (width, height),
        }
    }

    /// Same spec at a different grid size.
    pub fn with_dims(self, width: usize, height: usize) -> Self {
        match self {
            MaskSpec::Full { .. } => MaskSpec::Full { width, height },
            MaskSpec::Radial { lines, .. } => MaskSpec::Radial {
                width,
                height,
                lines,
            },
            MaskSpec::VariableDensity {
                target_fraction,
                decay,
                seed,
                ..
            } => MaskSpec::VariableDensity {
                width,
                height,
                target_fraction,
                decay,
                seed,
            },
        }
    }

    pub fn build(&self) -> Result<SamplingMask> {
        match *self {
            MaskSpec::Full { width, height } => SamplingMask::full(width, height),
            MaskSpec::Radial {
                width,
                height,
                lines: RadialLines::Count(n),
            } => radial_mask(width, height, n),
            MaskSpec::Radial {
                width,
                height,
                lines: RadialLines::Fraction { target, tol },
            } => Ok(radial_mask_for_fraction(width, height, target, tol)?.mask),
            MaskSpec::VariableDensity {
                width,
                height,
                target_fraction,
                decay,
                seed,
            } => variable_density_mask(width, height, target_fraction, decay, seed),
        }
    }
}

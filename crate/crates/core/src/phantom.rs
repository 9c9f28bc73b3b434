//! Piecewise-constant ellipse phantom (modified Shepp–Logan).
//!
//! Stands in for clinical MR images in tests and benchmarks.

use crate::error::{Error, Result};
use crate::grid::Image;

/// `(intensity, semi-axis a, semi-axis b, center x, center y, rotation in degrees)`
const ELLIPSES: [(f64, f64, f64, f64, f64, f64); 10] = [
    (1.0, 0.69, 0.92, 0.0, 0.0, 0.0),
    (-0.8, 0.6624, 0.874, 0.0, -0.0184, 0.0),
    (-0.2, 0.11, 0.31, 0.22, 0.0, -18.0),
    (-0.2, 0.16, 0.41, -0.22, 0.0, 18.0),
    (0.1, 0.21, 0.25, 0.0, 0.35, 0.0),
    (0.1, 0.046, 0.046, 0.0, 0.1, 0.0),
    (0.1, 0.046, 0.046, 0.0, -0.1, 0.0),
    (0.1, 0.046, 0.023, -0.08, -0.605, 0.0),
    (0.1, 0.023, 0.023, 0.0, -0.606, 0.0),
    (0.1, 0.023, 0.046, 0.06, -0.605, 0.0),
];

/// Modified Shepp–Logan phantom sampled at pixel centers, values in `[0, 1]`.
pub fn shepp_logan(width: usize, height: usize) -> Result<Image> {
    if width == 0 || height == 0 {
        return Err(Error::EmptyGrid { width, height });
    }
    let mut values = vec![0.0; width * height];
    for r in 0..height {
        // y points up in phantom coordinates
        let y = 1.0 - 2.0 * (r as f64 + 0.5) / height as f64;
        for c in 0..width {
            let x = 2.0 * (c as f64 + 0.5) / width as f64 - 1.0;
            let mut v = 0.0;
            for &(intensity, a, b, x0, y0, deg) in &ELLIPSES {
                let (s, co) = deg.to_radians().sin_cos();
                let dx = x - x0;
                let dy = y - y0;
                let xr = dx * co + dy * s;
                let yr = -dx * s + dy * co;
                if (xr / a).powi(2) + (yr / b).powi(2) <= 1.0 {
                    v += intensity;
                }
            }
            values[r * width + c] = v.clamp(0.0, 1.0);
        }
    }
    Image::new(width, height, values)
}

//! Unitary 2D DFT and the partial-Fourier measurement operator.
//!
//! Both directions are scaled by `1/√(width·height)`, so the transform is
//! unitary and `Kᴴ K` is a 0/1 projector in k-space.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::{ensure_same_dims, Image, Measurements, SamplingMask, SpectrumGrid};

/// Number of 2D transforms performed during a run.
///
/// Owned by whoever drives the computation; never shared between runs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FftCounter(u64);

impl FftCounter {
    pub fn new() -> Self {
        Self(0)
    }

    pub fn count(&self) -> u64 {
        self.0
    }

    pub(crate) fn tick(&mut self) {
        self.0 += 1;
    }
}

/// Planned 2D transform for a fixed grid size.
#[derive(Clone)]
pub struct Dft2 {
    width: usize,
    height: usize,
    row_fwd: Arc<dyn Fft<f64>>,
    row_inv: Arc<dyn Fft<f64>>,
    col_fwd: Arc<dyn Fft<f64>>,
    col_inv: Arc<dyn Fft<f64>>,
    scale: f64,
}

impl fmt::Debug for Dft2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Dft2")
            .field("width", &self.width)
            .field("height", &self.height)
            .finish()
    }
}

impl Dft2 {
    pub fn new(width: usize, height: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            width,
            height,
            row_fwd: planner.plan_fft_forward(width),
            row_inv: planner.plan_fft_inverse(width),
            col_fwd: planner.plan_fft_forward(height),
            col_inv: planner.plan_fft_inverse(height),
            scale: 1.0 / ((width * height) as f64).sqrt(),
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn forward_in_place(&self, data: &mut [Complex64]) {
        self.transform(data, &self.row_fwd, &self.col_fwd);
    }

    pub fn inverse_in_place(&self, data: &mut [Complex64]) {
        self.transform(data, &self.row_inv, &self.col_inv);
    }

    fn transform(&self, data: &mut [Complex64], rows: &Arc<dyn Fft<f64>>, cols: &Arc<dyn Fft<f64>>) {
        let (w, h) = (self.width, self.height);
        assert_eq!(data.len(), w * h, "buffer does not match planned size");

        rows.process(data);

        let mut transposed = vec![Complex64::new(0.0, 0.0); w * h];
        for r in 0..h {
            for c in 0..w {
                transposed[c * h + r] = data[r * w + c];
            }
        }
        cols.process(&mut transposed);
        for c in 0..w {
            for r in 0..h {
                data[r * w + c] = transposed[c * h + r] * self.scale;
            }
        }
    }

    pub fn forward(&self, x: &SpectrumGrid) -> SpectrumGrid {
        let mut values = x.values().to_vec();
        self.forward_in_place(&mut values);
        SpectrumGrid::from_raw(x.width(), x.height(), values)
    }

    pub fn inverse(&self, s: &SpectrumGrid) -> SpectrumGrid {
        let mut values = s.values().to_vec();
        self.inverse_in_place(&mut values);
        SpectrumGrid::from_raw(s.width(), s.height(), values)
    }
}

/// Unitary forward 2D DFT.
pub fn dft2_forward(x: &SpectrumGrid) -> SpectrumGrid {
    Dft2::new(x.width(), x.height()).forward(x)
}

/// Unitary inverse 2D DFT.
pub fn dft2_inverse(s: &SpectrumGrid) -> SpectrumGrid {
    Dft2::new(s.width(), s.height()).inverse(s)
}

/// The measurement operator `K = M ∘ F`: a unitary DFT followed by masking.
#[derive(Debug, Clone)]
pub struct PartialFourierOp {
    mask: SamplingMask,
    dft: Dft2,
}

impl PartialFourierOp {
    pub fn new(mask: SamplingMask) -> Self {
        let dft = Dft2::new(mask.width(), mask.height());
        Self { mask, dft }
    }

    pub fn mask(&self) -> &SamplingMask {
        &self.mask
    }

    pub fn dims(&self) -> (usize, usize) {
        self.mask.dims()
    }

    pub fn dft(&self) -> &Dft2 {
        &self.dft
    }

    pub(crate) fn check_measurements(&self, y: &Measurements) -> Result<()> {
        if y.mask() != &self.mask {
            return Err(Error::MaskMismatch);
        }
        Ok(())
    }

    /// `y = mask ∘ F x`. One FFT.
    pub fn apply(&self, x: &Image, fft: &mut FftCounter) -> Result<Measurements> {
        ensure_same_dims(self.dims(), x.dims())?;
        let mut spectrum = self.forward_image(x, fft);
        self.mask.apply_to(&mut spectrum)?;
        Ok(Measurements::from_raw(self.mask.clone(), spectrum))
    }

    /// Complex adjoint `Kᴴ y = F⁻¹(y)`. One FFT.
    pub fn adjoint_complex(&self, y: &Measurements, fft: &mut FftCounter) -> Result<SpectrumGrid> {
        self.check_measurements(y)?;
        Ok(self.inverse_spectrum(y.data(), fft))
    }

    /// Real part of the complex adjoint. One FFT.
    pub fn adjoint(&self, y: &Measurements, fft: &mut FftCounter) -> Result<Image> {
        Ok(self.adjoint_complex(y, fft)?.real_part())
    }

    /// Full (unmasked) forward transform of a real image. One FFT.
    pub(crate) fn forward_image(&self, x: &Image, fft: &mut FftCounter) -> SpectrumGrid {
        let mut values: Vec<Complex64> = x.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.dft.forward_in_place(&mut values);
        fft.tick();
        SpectrumGrid::from_raw(x.width(), x.height(), values)
    }

    /// Full inverse transform. One FFT.
    pub(crate) fn inverse_spectrum(&self, s: &SpectrumGrid, fft: &mut FftCounter) -> SpectrumGrid {
        let out = self.dft.inverse(s);
        fft.tick();
        out
    }

    /// Mask averaged with its point reflection `k → −k`.
    ///
    /// For real images `Re(Fᴴ M F x) = Fᴴ M_sym F x`, so this is the
    /// k-space diagonal of the real-restricted normal operator `Kᴴ K`.
    /// Entries are 0, ½ or 1.
    pub fn symmetrized_mask(&self) -> Vec<f64> {
        let (w, h) = self.dims();
        let sel = self.mask.selected();
        let mut out = vec![0.0; w * h];
        for r in 0..h {
            let rr = (h - r) % h;
            for c in 0..w {
                let cc = (w - c) % w;
                let a = sel[r * w + c] as u8 as f64;
                let b = sel[rr * w + cc] as u8 as f64;
                out[r * w + c] = 0.5 * (a + b);
            }
        }
        out
    }
}

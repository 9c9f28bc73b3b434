//! Grid value types shared by every other module.
//!
//! All grids are row-major: the value at `(row, col)` lives at index
//! `row * width + col`. Spectra put the zero-frequency bin at `(0, 0)`.

use num_complex::Complex64;

use crate::error::{Error, Result};

fn check_dims(width: usize, height: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::EmptyGrid { width, height });
    }
    Ok(())
}

fn check_len(width: usize, height: usize, len: usize) -> Result<()> {
    check_dims(width, height)?;
    if len != width * height {
        return Err(Error::LengthMismatch {
            expected: width * height,
            found: len,
        });
    }
    Ok(())
}

/// Real-valued image, nominally normalized to `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

impl Image {
    pub fn new(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        check_len(width, height, values.len())?;
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self {
            width,
            height,
            values,
        })
    }

    pub fn zeros(width: usize, height: usize) -> Result<Self> {
        Self::filled(width, height, 0.0)
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self> {
        check_dims(width, height)?;
        Self::new(width, height, vec![value; width * height])
    }

    /// Builds an image without validating finiteness. Solvers check their
    /// iterates explicitly and report the failing iteration instead.
    pub(crate) fn from_raw(width: usize, height: usize, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), width * height);
        Self {
            width,
            height,
            values,
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

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.width + col]
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn scaled(&self, factor: f64) -> Image {
        Image::from_raw(
            self.width,
            self.height,
            self.values.iter().map(|v| v * factor).collect(),
        )
    }

    /// Elementwise `self + other`.
    pub fn add(&self, other: &Image) -> Result<Image> {
        self.zip_with(other, |a, b| a + b)
    }

    /// Elementwise `self - other`.
    pub fn sub(&self, other: &Image) -> Result<Image> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Image, f: impl Fn(f64, f64) -> f64) -> Result<Image> {
        ensure_same_dims(self.dims(), other.dims())?;
        Ok(Image::from_raw(
            self.width,
            self.height,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        ))
    }

    pub fn clamped(&self, lo: f64, hi: f64) -> Image {
        Image::from_raw(
            self.width,
            self.height,
            self.values.iter().map(|v| v.clamp(lo, hi)).collect(),
        )
    }

    /// Real inner product `Σ aᵢ bᵢ`.
    pub fn dot(&self, other: &Image) -> Result<f64> {
        ensure_same_dims(self.dims(), other.dims())?;
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum())
    }
}

/// Complex-valued grid holding a k-space spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumGrid {
    width: usize,
    height: usize,
    values: Vec<Complex64>,
}

impl SpectrumGrid {
    pub fn new(width: usize, height: usize, values: Vec<Complex64>) -> Result<Self> {
        check_len(width, height, values.len())?;
        if let Some(index) = values
            .iter()
            .position(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(Error::NonFinite { index });
        }
        Ok(Self {
            width,
            height,
            values,
        })
    }

    pub fn zeros(width: usize, height: usize) -> Result<Self> {
        check_dims(width, height)?;
        Ok(Self::from_raw(
            width,
            height,
            vec![Complex64::new(0.0, 0.0); width * height],
        ))
    }

    pub(crate) fn from_raw(width: usize, height: usize, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), width * height);
        Self {
            width,
            height,
            values,
        }
    }

    pub fn from_image(image: &Image) -> Self {
        Self::from_raw(
            image.width,
            image.height,
            image
                .values
                .iter()
                .map(|&v| Complex64::new(v, 0.0))
                .collect(),
        )
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

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.values[row * self.width + col]
    }

    pub fn real_part(&self) -> Image {
        Image::from_raw(
            self.width,
            self.height,
            self.values.iter().map(|v| v.re).collect(),
        )
    }

    /// Elementwise `self - other`.
    pub fn sub(&self, other: &SpectrumGrid) -> Result<SpectrumGrid> {
        ensure_same_dims(self.dims(), other.dims())?;
        Ok(SpectrumGrid::from_raw(
            self.width,
            self.height,
            self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn scaled(&self, factor: f64) -> SpectrumGrid {
        SpectrumGrid::from_raw(
            self.width,
            self.height,
            self.values.iter().map(|v| v * factor).collect(),
        )
    }
}

/// Boolean selection of acquired k-space bins.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SamplingMask {
    width: usize,
    height: usize,
    selected: Vec<bool>,
    count: usize,
}

impl SamplingMask {
    pub fn new(width: usize, height: usize, selected: Vec<bool>) -> Result<Self> {
        check_len(width, height, selected.len())?;
        let count = selected.iter().filter(|&&s| s).count();
        if count == 0 {
            return Err(Error::EmptyMask);
        }
        Ok(Self {
            width,
            height,
            selected,
            count,
        })
    }

    pub fn full(width: usize, height: usize) -> Result<Self> {
        check_dims(width, height)?;
        Self::new(width, height, vec![true; width * height])
    }

    /// Mask selecting only the zero-frequency bin.
    pub fn dc_only(width: usize, height: usize) -> Result<Self> {
        check_dims(width, height)?;
        let mut selected = vec![false; width * height];
        selected[0] = true;
        Self::new(width, height, selected)
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

    pub fn len(&self) -> usize {
        self.selected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.selected.is_empty()
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn selected(&self) -> &[bool] {
        &self.selected
    }

    pub fn is_selected(&self, row: usize, col: usize) -> bool {
        self.selected[row * self.width + col]
    }

    pub fn is_full(&self) -> bool {
        self.count == self.selected.len()
    }

    /// Zeroes every unselected bin of `spectrum`.
    pub fn apply_to(&self, spectrum: &mut SpectrumGrid) -> Result<()> {
        ensure_same_dims(self.dims(), spectrum.dims())?;
        for (v, &s) in spectrum.values_mut().iter_mut().zip(&self.selected) {
            if !s {
                *v = Complex64::new(0.0, 0.0);
            }
        }
        Ok(())
    }
}

/// Acquired k-space samples stored on the full grid, zero where unsampled.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurements {
    mask: SamplingMask,
    data: SpectrumGrid,
}

impl Measurements {
    pub fn new(mask: SamplingMask, data: SpectrumGrid) -> Result<Self> {
        ensure_same_dims(mask.dims(), data.dims())?;
        let stray = data
            .values()
            .iter()
            .zip(mask.selected())
            .position(|(v, &s)| !s && (v.re != 0.0 || v.im != 0.0));
        if let Some(index) = stray {
            return Err(Error::UnmaskedData { index });
        }
        Ok(Self { mask, data })
    }

    pub(crate) fn from_raw(mask: SamplingMask, data: SpectrumGrid) -> Self {
        Self { mask, data }
    }

    pub fn mask(&self) -> &SamplingMask {
        &self.mask
    }

    pub fn data(&self) -> &SpectrumGrid {
        &self.data
    }

    pub fn dims(&self) -> (usize, usize) {
        self.data.dims()
    }

    pub fn scaled(&self, factor: f64) -> Measurements {
        Measurements::from_raw(self.mask.clone(), self.data.scaled(factor))
    }
}

pub(crate) fn ensure_same_dims(expected: (usize, usize), found: (usize, usize)) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Sum of absolute values.
pub fn l1_norm(v: &Image) -> f64 {
    v.values().iter().map(|x| x.abs()).sum()
}

/// Euclidean norm over real or complex grids.
pub trait L2Norm {
    fn l2_norm(&self) -> f64;
}

impl L2Norm for Image {
    fn l2_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

impl L2Norm for SpectrumGrid {
    fn l2_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }
}

pub fn l2_norm<G: L2Norm + ?Sized>(v: &G) -> f64 {
    v.l2_norm()
}

/// `Σ aᵢ · conj(bᵢ)`.
pub fn inner_product(a: &SpectrumGrid, b: &SpectrumGrid) -> Result<Complex64> {
    ensure_same_dims(a.dims(), b.dims())?;
    Ok(a.values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| x * y.conj())
        .sum())
}

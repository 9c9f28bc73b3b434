//! Image ingestion and the mask / measurement interchange formats.
//!
//! Mask file: the ASCII header `CSMASK <width> <height>\n` followed by
//! `width·height` bytes, each 0 or 1, row-major.
//!
//! Measurements file: magic `CSKS`, width and height as little-endian `u32`,
//! the headerless mask block, then `width·height` complex values as
//! interleaved little-endian `f64` pairs `(re, im)`, row-major, zero at
//! unselected bins.

use std::fs;
use std::io::Cursor;
use std::path::Path;

use csrecon::{Image, Measurements, SamplingMask, SpectrumGrid};
use image::codecs::png::PngEncoder;
use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::{DynamicImage, ExtendedColorType, ImageEncoder, ImageReader};
use num_complex::Complex64;

use crate::error::{BenchError, Result};

const MASK_MAGIC: &str = "CSMASK";
const KSPACE_MAGIC: &[u8; 4] = b"CSKS";

/// Reads an 8-bit grayscale PGM or PNG and normalizes it to `[0, 1]`.
///
/// Color, alpha and 16-bit images are rejected rather than converted.
pub fn read_image(path: &Path) -> Result<Image> {
    let bytes = fs::read(path).map_err(|e| BenchError::io(path, e))?;
    decode_image(&bytes).map_err(|e| match e {
        BenchError::Format { reason, .. } => BenchError::format(path.display().to_string(), reason),
        other => other,
    })
}

pub fn decode_image(bytes: &[u8]) -> Result<Image> {
    let reader = ImageReader::new(Cursor::new(bytes))
        .with_guessed_format()
        .map_err(|e| BenchError::format("image", e.to_string()))?;
    if reader.format().is_none() {
        return Err(BenchError::format("image", "not a PGM or PNG file"));
    }
    let decoded = reader.decode().map_err(|e| BenchError::format("image", e.to_string()))?;
    let gray = match decoded {
        DynamicImage::ImageLuma8(buf) => buf,
        other => {
            return Err(BenchError::format(
                "image",
                format!("expected 8-bit grayscale, found {:?}", other.color()),
            ))
        }
    };
    let (w, h) = gray.dimensions();
    let values = gray.into_raw().into_iter().map(|b| f64::from(b) / 255.0).collect();
    Ok(Image::new(w as usize, h as usize, values)?)
}

/// `[0, 1]` intensities to bytes: ×255, rounded half-up, saturated.
pub fn quantize(image: &Image) -> Vec<u8> {
    image
        .values()
        .iter()
        .map(|&v| (v * 255.0 + 0.5).floor().clamp(0.0, 255.0) as u8)
        .collect()
}

/// Writes PNG for a `.png` extension and binary PGM (P5) otherwise.
pub fn write_image(path: &Path, image: &Image) -> Result<()> {
    let bytes = encode_image(image, is_png(path))?;
    fs::write(path, bytes).map_err(|e| BenchError::io(path, e))
}

fn is_png(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("png"))
}

pub fn encode_image(image: &Image, png: bool) -> Result<Vec<u8>> {
    let data = quantize(image);
    let (w, h) = (image.width() as u32, image.height() as u32);
    let mut out = Vec::new();
    let res = if png {
        PngEncoder::new(&mut out).write_image(&data, w, h, ExtendedColorType::L8)
    } else {
        PnmEncoder::new(&mut out)
            .with_subtype(PnmSubtype::Graymap(SampleEncoding::Binary))
            .write_image(&data, w, h, ExtendedColorType::L8)
    };
    res.map_err(|e| BenchError::format("image encoding", e.to_string()))?;
    Ok(out)
}

pub fn encode_mask(mask: &SamplingMask) -> Vec<u8> {
    let mut out = format!("{MASK_MAGIC} {} {}\n", mask.width(), mask.height()).into_bytes();
    out.extend(mask.selected().iter().map(|&s| u8::from(s)));
    out
}

fn mask_from_bits(width: usize, height: usize, bits: &[u8], context: &str) -> Result<SamplingMask> {
    let selected = bits
        .iter()
        .enumerate()
        .map(|(i, &b)| match b {
            0 => Ok(false),
            1 => Ok(true),
            other => Err(BenchError::format(context, format!("mask byte {i} is {other}, expected 0 or 1"))),
        })
        .collect::<Result<Vec<bool>>>()?;
    Ok(SamplingMask::new(width, height, selected)?)
}

pub fn decode_mask(bytes: &[u8]) -> Result<SamplingMask> {
    let ctx = "mask file";
    let newline = bytes
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| BenchError::format(ctx, "missing header line"))?;
    let header = std::str::from_utf8(&bytes[..newline]).map_err(|_| BenchError::format(ctx, "header is not ASCII"))?;
    let fields: Vec<&str> = header.split(' ').collect();
    let [magic, w, h] = fields[..] else {
        return Err(BenchError::format(ctx, format!("malformed header `{header}`")));
    };
    if magic != MASK_MAGIC {
        return Err(BenchError::format(ctx, format!("bad magic `{magic}`")));
    }
    let parse = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| BenchError::format(ctx, format!("bad dimension `{s}`")))
    };
    let (width, height) = (parse(w)?, parse(h)?);
    let body = &bytes[newline + 1..];
    let expected = width
        .checked_mul(height)
        .ok_or_else(|| BenchError::format(ctx, "dimensions overflow"))?;
    if body.len() != expected {
        return Err(BenchError::format(
            ctx,
            format!("expected {expected} mask bytes, found {}", body.len()),
        ));
    }
    mask_from_bits(width, height, body, ctx)
}

pub fn encode_measurements(y: &Measurements) -> Vec<u8> {
    let (w, h) = y.dims();
    let mut out = Vec::with_capacity(12 + w * h * 17);
    out.extend_from_slice(KSPACE_MAGIC);
    out.extend_from_slice(&(w as u32).to_le_bytes());
    out.extend_from_slice(&(h as u32).to_le_bytes());
    out.extend(y.mask().selected().iter().map(|&s| u8::from(s)));
    for v in y.data().values() {
        out.extend_from_slice(&v.re.to_le_bytes());
        out.extend_from_slice(&v.im.to_le_bytes());
    }
    out
}

pub fn decode_measurements(bytes: &[u8]) -> Result<Measurements> {
    let ctx = "measurements file";
    if bytes.len() < 12 || &bytes[..4] != KSPACE_MAGIC {
        return Err(BenchError::format(ctx, "missing CSKS header"));
    }
    let width = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    let height = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let n = width * height;
    let expected = 12 + n * 17;
    if bytes.len() != expected {
        return Err(BenchError::format(
            ctx,
            format!("{width}x{height} needs {expected} bytes, found {}", bytes.len()),
        ));
    }
    let mask = mask_from_bits(width, height, &bytes[12..12 + n], ctx)?;
    let values = bytes[12 + n..]
        .chunks_exact(16)
        .map(|c| {
            Complex64::new(
                f64::from_le_bytes(c[..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..].try_into().unwrap()),
            )
        })
        .collect();
    let data = SpectrumGrid::new(width, height, values)?;
    Ok(Measurements::new(mask, data)?)
}

pub fn read_mask(path: &Path) -> Result<SamplingMask> {
    let bytes = fs::read(path).map_err(|e| BenchError::io(path, e))?;
    decode_mask(&bytes)
}

pub fn write_mask(path: &Path, mask: &SamplingMask) -> Result<()> {
    fs::write(path, encode_mask(mask)).map_err(|e| BenchError::io(path, e))
}

pub fn read_measurements(path: &Path) -> Result<Measurements> {
    let bytes = fs::read(path).map_err(|e| BenchError::io(path, e))?;
    decode_measurements(&bytes)
}

pub fn write_measurements(path: &Path, y: &Measurements) -> Result<()> {
    fs::write(path, encode_measurements(y)).map_err(|e| BenchError::io(path, e))
}

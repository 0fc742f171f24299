//! File formats: PFM float maps, PNG/PGM input, 8-bit grayscale heatmaps.
//!
//! PFM is written as a single-channel little-endian map (`Pf`, scale `-1.0`)
//! with rows stored bottom-to-top, as the format prescribes.

use std::fs;
use std::path::Path;

use image::imageops::FilterType;
use image::{DynamicImage, GrayImage};

use crate::error::{Error, Result};
use crate::field::{ColorImage, Field, Image2D, InputImage};

/// Serialize a field as a little-endian single-channel PFM.
pub fn encode_pfm(field: &Field) -> Vec<u8> {
    let (h, w) = field.shape();
    let mut out = format!("Pf\n{w} {h}\n-1.0\n").into_bytes();
    out.reserve(4 * h * w);
    for r in (0..h).rev() {
        for c in 0..w {
            out.extend_from_slice(&(field.get(r, c) as f32).to_le_bytes());
        }
    }
    out
}

fn format_err(path: &Path, message: impl Into<String>) -> Error {
    Error::Format {
        path: path.to_path_buf(),
        message: message.into(),
    }
}

/// Parse a single-channel PFM of either endianness.
pub fn decode_pfm(bytes: &[u8], path: &Path) -> Result<Field> {
    let mut tokens = Vec::with_capacity(4);
    let mut pos = 0;
    while tokens.len() < 4 {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(format_err(path, "truncated header"));
        }
        tokens.push(
            std::str::from_utf8(&bytes[start..pos]).map_err(|_| format_err(path, "bad header"))?,
        );
    }
    // exactly one whitespace byte separates the header from the data
    pos += 1;
    match tokens[0] {
        "Pf" => {}
        "PF" => return Err(format_err(path, "three-channel PFM is not supported")),
        other => return Err(format_err(path, format!("bad magic `{other}`"))),
    }
    let parse = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| format_err(path, format!("bad dimension `{s}`")))
    };
    let (w, h) = (parse(tokens[1])?, parse(tokens[2])?);
    let scale: f64 = tokens[3]
        .parse()
        .map_err(|_| format_err(path, format!("bad scale `{}`", tokens[3])))?;
    if scale == 0.0 {
        return Err(format_err(path, "zero scale"));
    }
    let little = scale < 0.0;
    let data = bytes.get(pos..).unwrap_or_default();
    if data.len() != 4 * w * h {
        return Err(format_err(
            path,
            format!("expected {} data bytes, found {}", 4 * w * h, data.len()),
        ));
    }
    let mut field = Field::zeros(h.max(1), w.max(1));
    for (i, chunk) in data.chunks_exact(4).enumerate() {
        let raw = [chunk[0], chunk[1], chunk[2], chunk[3]];
        let v = if little {
            f32::from_le_bytes(raw)
        } else {
            f32::from_be_bytes(raw)
        };
        field.set(h - 1 - i / w, i % w, v as f64);
    }
    Ok(field)
}

pub fn write_pfm(path: &Path, field: &Field) -> Result<()> {
    fs::write(path, encode_pfm(field))?;
    Ok(())
}

pub fn read_pfm(path: &Path) -> Result<Field> {
    decode_pfm(&fs::read(path)?, path)
}

/// Values in [0, 1] scaled to 8 bits.
pub fn heatmap(field: &Field) -> GrayImage {
    let (h, w) = field.shape();
    GrayImage::from_fn(w as u32, h as u32, |x, y| {
        image::Luma([(field.get(y as usize, x as usize).clamp(0.0, 1.0) * 255.0).round() as u8])
    })
}

pub fn write_heatmap_png(path: &Path, field: &Field) -> Result<()> {
    heatmap(field).save_with_format(path, image::ImageFormat::Png)?;
    Ok(())
}

fn plane(h: usize, w: usize, data: Vec<f64>) -> Image2D {
    Image2D::new(h, w, data).expect("8-bit samples are in range")
}

/// Convert a decoded image to [0, 1] planes: gray stays gray, anything with
/// colour becomes RGB.
pub fn to_input_image(img: DynamicImage) -> Result<InputImage> {
    let (w, h) = (img.width() as usize, img.height() as usize);
    if w < 2 || h < 2 {
        return Err(Error::Shape(format!(
            "image must be at least 2x2, got {h}x{w}"
        )));
    }
    Ok(if img.color().has_color() {
        let rgb = img.to_rgb8();
        let mut planes = [vec![0.0; w * h], vec![0.0; w * h], vec![0.0; w * h]];
        for (i, px) in rgb.pixels().enumerate() {
            for ch in 0..3 {
                planes[ch][i] = px[ch] as f64 / 255.0;
            }
        }
        let [r, g, b] = planes;
        InputImage::Color(ColorImage::new(
            plane(h, w, r),
            plane(h, w, g),
            plane(h, w, b),
        )?)
    } else {
        let gray = img.to_luma8();
        InputImage::Gray(plane(
            h,
            w,
            gray.pixels().map(|p| p[0] as f64 / 255.0).collect(),
        ))
    })
}

/// Load a PNG or PGM, optionally resized to `(width, height)`.
pub fn load_image(path: &Path, resize: Option<(u32, u32)>) -> Result<InputImage> {
    let mut img = image::ImageReader::open(path)?
        .with_guessed_format()?
        .decode()?;
    if let Some((w, h)) = resize {
        img = img.resize_exact(w, h, FilterType::Triangle);
    }
    to_input_image(img)
}

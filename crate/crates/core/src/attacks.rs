//! Robustness attacks and the extraction-resilience matrix.
//!
//! Every attack preserves image dimensions so the non-blind extractor stays
//! aligned; geometric attacks therefore fill or displace in place. Stochastic
//! attacks take an explicit seed and the seed appears in the attack's
//! description, so every report is reproducible.

use std::fmt;
use std::str::FromStr;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::color;
use crate::error::{Error, Result};
use crate::image::ImageBuffer;
use crate::invisible::{
    extract_watermark_with_threshold, AuthDecision, BinaryWatermark, WatermarkKey,
};

/// Which corner a crop removes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corner {
    TopLeft,
    TopRight,
    BottomLeft,
    BottomRight,
}

impl Corner {
    pub fn name(&self) -> &'static str {
        match self {
            Corner::TopLeft => "top-left",
            Corner::TopRight => "top-right",
            Corner::BottomLeft => "bottom-left",
            Corner::BottomRight => "bottom-right",
        }
    }
}

impl fmt::Display for Corner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Corner {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "top-left" => Ok(Corner::TopLeft),
            "top-right" => Ok(Corner::TopRight),
            "bottom-left" => Ok(Corner::BottomLeft),
            "bottom-right" => Ok(Corner::BottomRight),
            _ => Err(Error::Parse(format!(
                "unknown corner {s:?}; expected top-left, top-right, \
                 bottom-left, or bottom-right"
            ))),
        }
    }
}

/// One attack with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum AttackSpec {
    /// JPEG encode/decode at the given quality (1..=100).
    Jpeg { quality: u8 },
    /// Convert to gray, uniform-quantize to 16 or 256 levels, re-expand to
    /// three channels.
    GrayQuantize { levels: u16 },
    /// Gaussian blur; sigma is half the radius, kernel reach is 3 sigma.
    Blur { radius: f64 },
    /// Replace a corner region holding `fraction` of the area with mid-gray,
    /// keeping the canvas size.
    Crop { fraction: f64, corner: Corner },
    /// Sliding-window median filter with an odd window size.
    Median { window: u32 },
    /// Displace every pixel by an independent uniform offset of at most
    /// `displacement` in each axis, sampled from a seeded generator.
    Jitter { displacement: u32, seed: u64 },
    /// Sequential application; an empty list is the identity.
    Composite(Vec<AttackSpec>),
}

impl AttackSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            AttackSpec::Jpeg { quality } => {
                if !(1..=100).contains(quality) {
                    return Err(Error::InvalidConfig(format!(
                        "jpeg quality must lie in 1..=100, got {quality}"
                    )));
                }
            }
            AttackSpec::GrayQuantize { levels } => {
                if *levels != 16 && *levels != 256 {
                    return Err(Error::InvalidConfig(format!(
                        "gray-quantize levels must be 16 or 256, got {levels}"
                    )));
                }
            }
            AttackSpec::Blur { radius } => {
                if !radius.is_finite() || *radius <= 0.0 {
                    return Err(Error::InvalidConfig(format!(
                        "blur radius must be positive, got {radius}"
                    )));
                }
            }
            AttackSpec::Crop { fraction, .. } => {
                if !(*fraction > 0.0 && *fraction <= 1.0) {
                    return Err(Error::InvalidConfig(format!(
                        "crop fraction must lie in (0, 1], got {fraction}"
                    )));
                }
            }
            AttackSpec::Median { window } => {
                if *window % 2 == 0 || *window == 0 {
                    return Err(Error::InvalidConfig(format!(
                        "median window must be odd, got {window}"
                    )));
                }
            }
            AttackSpec::Jitter { .. } => {}
            AttackSpec::Composite(steps) => {
                for s in steps {
                    s.validate()?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for AttackSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttackSpec::Jpeg { quality } => write!(f, "jpeg quality={quality}"),
            AttackSpec::GrayQuantize { levels } => write!(f, "gray-quantize levels={levels}"),
            AttackSpec::Blur { radius } => write!(f, "blur radius={radius}"),
            AttackSpec::Crop { fraction, corner } => {
                write!(f, "crop fraction={fraction} corner={corner}")
            }
            AttackSpec::Median { window } => write!(f, "median window={window}"),
            AttackSpec::Jitter { displacement, seed } => {
                write!(f, "jitter displacement={displacement} seed={seed}")
            }
            AttackSpec::Composite(steps) => {
                write!(f, "composite[")?;
                for (i, s) in steps.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{s}")?;
                }
                write!(f, "]")
            }
        }
    }
}

/// Applies an attack, yielding an image with the same dimensions.
pub fn attack(img: &ImageBuffer, spec: &AttackSpec) -> Result<ImageBuffer> {
    spec.validate()?;
    let out = match spec {
        AttackSpec::Jpeg { quality } => jpeg_round_trip(img, *quality)?,
        AttackSpec::GrayQuantize { levels } => gray_quantize(img, *levels)?,
        AttackSpec::Blur { radius } => gaussian_blur(img, *radius)?,
        AttackSpec::Crop { fraction, corner } => crop_fill(img, *fraction, *corner)?,
        AttackSpec::Median { window } => median_filter(img, *window as usize)?,
        AttackSpec::Jitter { displacement, seed } => jitter(img, *displacement, *seed)?,
        AttackSpec::Composite(steps) => {
            let mut cur = img.clone();
            for s in steps {
                cur = attack(&cur, s)?;
            }
            cur
        }
    };
    debug_assert_eq!((out.width(), out.height()), (img.width(), img.height()));
    Ok(out)
}

fn jpeg_round_trip(img: &ImageBuffer, quality: u8) -> Result<ImageBuffer> {
    let mut encoded = Vec::new();
    let mut cursor = std::io::Cursor::new(&mut encoded);
    let encoder = image::codecs::jpeg::JpegEncoder::new_with_quality(&mut cursor, quality);
    let color = match img.channels() {
        1 => image::ExtendedColorType::L8,
        _ => image::ExtendedColorType::Rgb8,
    };
    use image::ImageEncoder;
    encoder
        .write_image(img.data(), img.width(), img.height(), color)
        .map_err(|e| Error::InvalidConfig(format!("jpeg encoding failed: {e}")))?;
    ImageBuffer::decode(&encoded)
}

/// Uniform quantizer to `levels` gray values: bin floor plus half a step, so
/// 256 levels is the identity on the gray image.
fn gray_quantize(img: &ImageBuffer, levels: u16) -> Result<ImageBuffer> {
    let gray = color::to_gray(img)?;
    let step = (256 / levels as u32) as u8;
    let data: Vec<u8> = gray
        .data()
        .iter()
        .flat_map(|&v| {
            let q = if step == 1 {
                v
            } else {
                v / step * step + step / 2
            };
            [q, q, q]
        })
        .collect();
    ImageBuffer::new(img.width(), img.height(), 3, data)
}

fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let half = (3.0 * sigma).ceil().max(1.0) as i64;
    let mut k: Vec<f64> = (-half..=half)
        .map(|i| (-((i * i) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = k.iter().sum();
    for v in &mut k {
        *v /= sum;
    }
    k
}

/// Separable Gaussian blur with border clamping; `sigma = radius / 2`.
fn gaussian_blur(img: &ImageBuffer, radius: f64) -> Result<ImageBuffer> {
    let sigma = radius / 2.0;
    let kernel = gaussian_kernel(sigma);
    let half = (kernel.len() / 2) as i64;
    let (w, h, ch) = (
        img.width() as i64,
        img.height() as i64,
        img.channels() as usize,
    );

    // Horizontal pass in floats, vertical pass, then one final rounding.
    let mut tmp = vec![0.0f64; (w * h) as usize * ch];
    for y in 0..h {
        for x in 0..w {
            for c in 0..ch {
                let mut acc = 0.0;
                for (i, &kv) in kernel.iter().enumerate() {
                    let sx = (x + i as i64 - half).clamp(0, w - 1);
                    acc += kv * img.sample(sx as u32, y as u32, c as u8) as f64;
                }
                tmp[((y * w + x) as usize) * ch + c] = acc;
            }
        }
    }
    let mut data = vec![0u8; tmp.len()];
    for y in 0..h {
        for x in 0..w {
            for c in 0..ch {
                let mut acc = 0.0;
                for (i, &kv) in kernel.iter().enumerate() {
                    let sy = (y + i as i64 - half).clamp(0, h - 1);
                    acc += kv * tmp[((sy * w + x) as usize) * ch + c];
                }
                data[((y * w + x) as usize) * ch + c] = crate::image::quantize_sample(acc);
            }
        }
    }
    ImageBuffer::new(img.width(), img.height(), img.channels(), data)
}

/// Fills a corner region covering `fraction` of the area (side length scales
/// with sqrt(fraction)) with mid-gray 128. Canvas size is preserved.
fn crop_fill(img: &ImageBuffer, fraction: f64, corner: Corner) -> Result<ImageBuffer> {
    let side = fraction.sqrt();
    let rw = ((img.width() as f64 * side).round() as u32).min(img.width());
    let rh = ((img.height() as f64 * side).round() as u32).min(img.height());
    let (x0, y0) = match corner {
        Corner::TopLeft => (0, 0),
        Corner::TopRight => (img.width() - rw, 0),
        Corner::BottomLeft => (0, img.height() - rh),
        Corner::BottomRight => (img.width() - rw, img.height() - rh),
    };
    let mut out = img.clone();
    for y in y0..y0 + rh {
        for x in x0..x0 + rw {
            for c in 0..img.channels() {
                out.set_sample(x, y, c, 128);
            }
        }
    }
    Ok(out)
}

/// Sliding median with an odd window, border samples clamped, per channel.
fn median_filter(img: &ImageBuffer, window: usize) -> Result<ImageBuffer> {
    let half = (window / 2) as i64;
    let (w, h) = (img.width() as i64, img.height() as i64);
    let mut out = img.clone();
    let mut neighborhood = Vec::with_capacity(window * window);
    for y in 0..h {
        for x in 0..w {
            for c in 0..img.channels() {
                neighborhood.clear();
                for dy in -half..=half {
                    for dx in -half..=half {
                        let sx = (x + dx).clamp(0, w - 1) as u32;
                        let sy = (y + dy).clamp(0, h - 1) as u32;
                        neighborhood.push(img.sample(sx, sy, c));
                    }
                }
                neighborhood.sort_unstable();
                out.set_sample(x as u32, y as u32, c, neighborhood[neighborhood.len() / 2]);
            }
        }
    }
    Ok(out)
}

/// Displaces each pixel by uniform offsets in `[-d, d]` per axis. Offsets are
/// drawn in raster order, x then y, from ChaCha8 seeded with `seed`; all
/// channels of a pixel move together.
fn jitter(img: &ImageBuffer, displacement: u32, seed: u64) -> Result<ImageBuffer> {
    let d = displacement as i64;
    let span = 2 * d + 1;
    let (w, h) = (img.width() as i64, img.height() as i64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = img.clone();
    for y in 0..h {
        for x in 0..w {
            let dx = rng.next_u32() as i64 % span - d;
            let dy = rng.next_u32() as i64 % span - d;
            let sx = (x + dx).clamp(0, w - 1) as u32;
            let sy = (y + dy).clamp(0, h - 1) as u32;
            for c in 0..img.channels() {
                out.set_sample(x as u32, y as u32, c, img.sample(sx, sy, c));
            }
        }
    }
    Ok(out)
}

/// One row of an attack-resilience report.
#[derive(Debug, Clone)]
pub struct MatrixRow {
    pub label: String,
    pub attack: String,
    pub decision: AuthDecision,
}

/// Applies each attack to the watermarked image and re-extracts the payload.
/// "Survived" means the verdict stayed authentic.
pub fn run_attack_matrix(
    watermarked: &ImageBuffer,
    original: &ImageBuffer,
    wm: &BinaryWatermark,
    key: &WatermarkKey,
    threshold: f64,
    suite: &[(String, AttackSpec)],
) -> Result<Vec<MatrixRow>> {
    let mut rows = Vec::with_capacity(suite.len());
    for (label, spec) in suite {
        let attacked = attack(watermarked, spec)?;
        let decision = extract_watermark_with_threshold(&attacked, original, wm, key, threshold)?;
        rows.push(MatrixRow {
            label: label.clone(),
            attack: spec.to_string(),
            decision,
        });
    }
    Ok(rows)
}

/// The stock robustness suite used by reports and benchmarks.
pub fn default_suite() -> Vec<(String, AttackSpec)> {
    vec![
        ("jpeg-75".into(), AttackSpec::Jpeg { quality: 75 }),
        (
            "gray-quantize-16".into(),
            AttackSpec::GrayQuantize { levels: 16 },
        ),
        (
            "gray-256-jpeg-75".into(),
            AttackSpec::Composite(vec![
                AttackSpec::GrayQuantize { levels: 256 },
                AttackSpec::Jpeg { quality: 75 },
            ]),
        ),
        (
            "blur-1-jpeg-75".into(),
            AttackSpec::Composite(vec![
                AttackSpec::Blur { radius: 1.0 },
                AttackSpec::Jpeg { quality: 75 },
            ]),
        ),
        (
            "crop-25".into(),
            AttackSpec::Crop {
                fraction: 0.25,
                corner: Corner::TopLeft,
            },
        ),
        ("median-3".into(), AttackSpec::Median { window: 3 }),
        (
            "jitter-1".into(),
            AttackSpec::Jitter {
                displacement: 1,
                seed: 1,
            },
        ),
    ]
}

/// Parses a single attack description such as `jpeg quality=75` or
/// `crop fraction=0.25 corner=top-left`: a kind name followed by
/// space-separated `key=value` parameters. Omitted parameters take the
/// defaults of the stock suite.
pub fn parse_attack(s: &str) -> Result<AttackSpec> {
    let mut parts = s.split_whitespace();
    let kind = parts
        .next()
        .ok_or_else(|| Error::Parse("empty attack description".into()))?;
    let mut params = Vec::new();
    for p in parts {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got {p:?}")))?;
        params.push((k, v));
    }
    build_attack(kind, &params)
}

fn build_attack(kind: &str, params: &[(&str, &str)]) -> Result<AttackSpec> {
    fn get<T: FromStr>(params: &[(&str, &str)], key: &str, default: T) -> Result<T> {
        for (k, v) in params {
            if *k == key {
                return v
                    .parse::<T>()
                    .map_err(|_| Error::Parse(format!("invalid value {v:?} for parameter {key}")));
            }
        }
        Ok(default)
    }
    fn reject_unknown(params: &[(&str, &str)], allowed: &[&str]) -> Result<()> {
        for (k, _) in params {
            if !allowed.contains(k) {
                return Err(Error::Parse(format!("unknown parameter {k:?}")));
            }
        }
        Ok(())
    }

    let spec = match kind {
        "jpeg" => {
            reject_unknown(params, &["quality"])?;
            AttackSpec::Jpeg {
                quality: get(params, "quality", 75u8)?,
            }
        }
        "gray-quantize" => {
            reject_unknown(params, &["levels"])?;
            AttackSpec::GrayQuantize {
                levels: get(params, "levels", 16u16)?,
            }
        }
        "blur" => {
            reject_unknown(params, &["radius"])?;
            AttackSpec::Blur {
                radius: get(params, "radius", 1.0f64)?,
            }
        }
        "crop" => {
            reject_unknown(params, &["fraction", "corner"])?;
            AttackSpec::Crop {
                fraction: get(params, "fraction", 0.25f64)?,
                corner: get(params, "corner", Corner::TopLeft)?,
            }
        }
        "median" => {
            reject_unknown(params, &["window"])?;
            AttackSpec::Median {
                window: get(params, "window", 3u32)?,
            }
        }
        "jitter" => {
            reject_unknown(params, &["displacement", "seed"])?;
            AttackSpec::Jitter {
                displacement: get(params, "displacement", 1u32)?,
                seed: get(params, "seed", 1u64)?,
            }
        }
        other => {
            return Err(Error::Parse(format!(
                "unknown attack kind {other:?}; expected jpeg, gray-quantize, \
                 blur, crop, median, or jitter"
            )))
        }
    };
    spec.validate()?;
    Ok(spec)
}

/// Parses a comma-separated list of attack descriptions into a composite.
pub fn parse_steps(s: &str) -> Result<AttackSpec> {
    let steps = s
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(parse_attack)
        .collect::<Result<Vec<_>>>()?;
    Ok(AttackSpec::Composite(steps))
}

/// Parses a suite file: blocks of `key = value` lines separated by blank
/// lines, one attack per block. Each block needs a `kind`; `label` is
/// optional; `kind = composite` takes its steps from a `steps` value holding
/// a comma-separated attack list. Lines starting with `#` are comments.
pub fn parse_suite(text: &str) -> Result<Vec<(String, AttackSpec)>> {
    let mut suite = Vec::new();
    for (block_no, block) in text.split("\n\n").enumerate() {
        let mut kind = None;
        let mut label = None;
        let mut params: Vec<(String, String)> = Vec::new();
        for line in block.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::Parse(format!(
                    "suite block {}: expected key = value, got {line:?}",
                    block_no + 1
                ))
            })?;
            let (k, v) = (k.trim(), v.trim());
            match k {
                "kind" => kind = Some(v.to_string()),
                "label" => label = Some(v.to_string()),
                _ => params.push((k.to_string(), v.to_string())),
            }
        }
        let Some(kind) = kind else {
            if params.is_empty() && label.is_none() {
                continue; // stray blank block
            }
            return Err(Error::Parse(format!(
                "suite block {} has no kind",
                block_no + 1
            )));
        };
        let spec = if kind == "composite" {
            let steps = params
                .iter()
                .find(|(k, _)| k == "steps")
                .map(|(_, v)| v.as_str())
                .ok_or_else(|| {
                    Error::Parse(format!(
                        "suite block {}: composite needs steps",
                        block_no + 1
                    ))
                })?;
            if params.iter().any(|(k, _)| k != "steps") {
                return Err(Error::Parse(format!(
                    "suite block {}: composite takes only steps",
                    block_no + 1
                )));
            }
            parse_steps(steps)?
        } else {
            let borrowed: Vec<(&str, &str)> = params
                .iter()
                .map(|(k, v)| (k.as_str(), v.as_str()))
                .collect();
            build_attack(&kind, &borrowed)?
        };
        let label = label.unwrap_or_else(|| spec.to_string());
        suite.push((label, spec));
    }
    if suite.is_empty() {
        return Err(Error::Parse("suite file defines no attacks".into()));
    }
    Ok(suite)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics;

    fn textured_rgb(w: u32, h: u32) -> ImageBuffer {
        let mut data = Vec::with_capacity((w * h * 3) as usize);
        for i in 0..(w * h) as usize {
            data.push((40 + i % 170) as u8);
            data.push((90 + i % 111) as u8);
            data.push((25 + i % 200) as u8);
        }
        ImageBuffer::new(w, h, 3, data).unwrap()
    }

    #[test]
    fn all_attacks_preserve_dimensions() {
        let img = textured_rgb(40, 24);
        for (_, spec) in default_suite() {
            let out = attack(&img, &spec).unwrap();
            assert_eq!((out.width(), out.height()), (40, 24), "{spec}");
        }
    }

    #[test]
    fn jpeg_q100_on_flat_image_is_near_identity() {
        let img = ImageBuffer::filled(32, 32, 3, 127).unwrap();
        let out = attack(&img, &AttackSpec::Jpeg { quality: 100 }).unwrap();
        assert!(metrics::mse(&img, &out).unwrap() < 1.0);
    }

    #[test]
    fn jpeg_quality_is_range_checked() {
        let img = textured_rgb(16, 16);
        assert!(attack(&img, &AttackSpec::Jpeg { quality: 0 }).is_err());
        assert!(attack(&img, &AttackSpec::Jpeg { quality: 100 }).is_ok());
    }

    #[test]
    fn gray_quantize_16_bin_centers() {
        // floor(200 / 16) * 16 + 8 = 200: the value sits on a bin center.
        let img = ImageBuffer::filled(8, 8, 1, 200).unwrap();
        let out = attack(&img, &AttackSpec::GrayQuantize { levels: 16 }).unwrap();
        assert_eq!(out.channels(), 3);
        assert_eq!(out.sample(0, 0, 0), 200);
        // 100 maps to floor(100 / 16) * 16 + 8 = 104.
        let img = ImageBuffer::filled(8, 8, 1, 100).unwrap();
        let out = attack(&img, &AttackSpec::GrayQuantize { levels: 16 }).unwrap();
        assert_eq!(out.sample(0, 0, 0), 104);
    }

    #[test]
    fn gray_quantize_256_is_identity_on_gray_input() {
        let img = ImageBuffer::new(4, 4, 1, (0..16).map(|i| i * 16).collect()).unwrap();
        let out = attack(&img, &AttackSpec::GrayQuantize { levels: 256 }).unwrap();
        for i in 0..16u32 {
            let (x, y) = (i % 4, i / 4);
            assert_eq!(out.sample(x, y, 0), img.sample(x, y, 0));
            assert_eq!(out.sample(x, y, 1), img.sample(x, y, 0));
        }
        assert!(attack(&img, &AttackSpec::GrayQuantize { levels: 64 }).is_err());
    }

    #[test]
    fn blur_preserves_constant_images_and_smooths_edges() {
        let img = ImageBuffer::filled(24, 24, 1, 77).unwrap();
        let out = attack(&img, &AttackSpec::Blur { radius: 1.0 }).unwrap();
        assert_eq!(out, img);

        let mut step = ImageBuffer::filled(24, 24, 1, 0).unwrap();
        for y in 0..24 {
            for x in 12..24 {
                step.set_sample(x, y, 0, 200);
            }
        }
        let out = attack(&step, &AttackSpec::Blur { radius: 2.0 }).unwrap();
        let v = out.sample(11, 12, 0);
        assert!(v > 0 && v < 200, "boundary not smoothed: {v}");
        // Far from the edge the plateau is intact.
        assert_eq!(out.sample(0, 12, 0), 0);
        assert_eq!(out.sample(23, 12, 0), 200);
    }

    #[test]
    fn crop_quarter_covers_half_each_side() {
        let img = textured_rgb(512, 512);
        let out = attack(
            &img,
            &AttackSpec::Crop {
                fraction: 0.25,
                corner: Corner::TopLeft,
            },
        )
        .unwrap();
        for (x, y) in [(0u32, 0u32), (255, 255), (0, 255), (255, 0)] {
            assert_eq!(out.sample(x, y, 0), 128);
        }
        assert_eq!(out.sample(256, 0, 0), img.sample(256, 0, 0));
        assert_eq!(out.sample(0, 256, 0), img.sample(0, 256, 0));
    }

    #[test]
    fn crop_corners_land_where_stated() {
        let img = textured_rgb(16, 16);
        let out = attack(
            &img,
            &AttackSpec::Crop {
                fraction: 0.25,
                corner: Corner::BottomRight,
            },
        )
        .unwrap();
        assert_eq!(out.sample(15, 15, 0), 128);
        assert_eq!(out.sample(0, 0, 0), img.sample(0, 0, 0));
    }

    #[test]
    fn median_flattens_isolated_specks() {
        let mut img = ImageBuffer::filled(16, 16, 1, 50).unwrap();
        img.set_sample(8, 8, 0, 255);
        let out = attack(&img, &AttackSpec::Median { window: 3 }).unwrap();
        assert_eq!(out.sample(8, 8, 0), 50);
        assert!(attack(&img, &AttackSpec::Median { window: 4 }).is_err());
    }

    #[test]
    fn jitter_is_seeded_and_zero_displacement_is_identity() {
        let img = textured_rgb(32, 32);
        let a = attack(
            &img,
            &AttackSpec::Jitter {
                displacement: 1,
                seed: 9,
            },
        )
        .unwrap();
        let b = attack(
            &img,
            &AttackSpec::Jitter {
                displacement: 1,
                seed: 9,
            },
        )
        .unwrap();
        let c = attack(
            &img,
            &AttackSpec::Jitter {
                displacement: 1,
                seed: 10,
            },
        )
        .unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        let id = attack(
            &img,
            &AttackSpec::Jitter {
                displacement: 0,
                seed: 9,
            },
        )
        .unwrap();
        assert_eq!(id, img);
    }

    #[test]
    fn empty_composite_is_identity() {
        let img = textured_rgb(20, 20);
        assert_eq!(attack(&img, &AttackSpec::Composite(vec![])).unwrap(), img);
    }

    #[test]
    fn parse_attack_round_trips_descriptions() {
        for (_, spec) in default_suite() {
            if let AttackSpec::Composite(_) = spec {
                continue; // composites print with brackets, parsed via steps
            }
            assert_eq!(parse_attack(&spec.to_string()).unwrap(), spec);
        }
        assert!(parse_attack("warp strength=2").is_err());
        assert!(parse_attack("jpeg quality=0").is_err());
        assert!(parse_attack("jpeg quality").is_err());
        assert!(parse_attack("jpeg speed=9").is_err());
    }

    #[test]
    fn parse_steps_builds_composites() {
        let spec = parse_steps("blur radius=1, jpeg quality=75").unwrap();
        assert_eq!(
            spec,
            AttackSpec::Composite(vec![
                AttackSpec::Blur { radius: 1.0 },
                AttackSpec::Jpeg { quality: 75 },
            ])
        );
    }

    #[test]
    fn parse_suite_blocks() {
        let text = "\
# robustness suite
kind = jpeg
quality = 50

label = squeeze
kind = composite
steps = gray-quantize levels=256, jpeg quality=75

kind = jitter
displacement = 2
seed = 42
";
        let suite = parse_suite(text).unwrap();
        assert_eq!(suite.len(), 3);
        assert_eq!(suite[0].0, "jpeg quality=50");
        assert_eq!(suite[0].1, AttackSpec::Jpeg { quality: 50 });
        assert_eq!(suite[1].0, "squeeze");
        assert_eq!(
            suite[2].1,
            AttackSpec::Jitter {
                displacement: 2,
                seed: 42
            }
        );
        assert!(parse_suite("quality = 10\n").is_err());
        assert!(parse_suite("").is_err());
    }

    #[test]
    fn matrix_reports_one_row_per_attack() {
        use crate::invisible::{embed_invisible, AlphaConfig};
        // Quadrant-structured blocks keep the marked coefficients far above
        // rounding noise, so the unattacked row extracts essentially exactly.
        let mut cover = ImageBuffer::filled(64, 64, 3, 0).unwrap();
        for y in 0..64 {
            for x in 0..64 {
                let m = 100 + 10 * ((x / 8 + y / 8) % 5) as i32;
                let sx = if x % 8 < 4 { 1 } else { -1 };
                let sy = if y % 8 < 4 { 1 } else { -1 };
                let v = (m + 8 * (sx + sy + sx * sy)) as u8;
                for c in 0..3 {
                    cover.set_sample(x, y, c, v);
                }
            }
        }
        let wm = BinaryWatermark::from_bits(8, 8, vec![1; 64]).unwrap();
        let key = WatermarkKey::new("matrix key").unwrap();
        let marked = embed_invisible(&cover, &wm, &key, &AlphaConfig::default()).unwrap();
        let suite = vec![
            ("none".to_string(), AttackSpec::Composite(vec![])),
            ("jpeg".to_string(), AttackSpec::Jpeg { quality: 90 }),
        ];
        let rows = run_attack_matrix(&marked, &cover, &wm, &key, 0.85, &suite).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].label, "none");
        assert!(rows[0].decision.match_fraction >= 0.99);

        let empty = run_attack_matrix(&marked, &cover, &wm, &key, 0.85, &[]).unwrap();
        assert!(empty.is_empty());
    }
}

//! Invisible watermarking: keyed encryption of a binary payload,
//! multiplicative embedding into low-frequency DCT coefficients, and
//! non-blind extraction with an authentication verdict.
//!
//! Each 8x8 block of the cover's luma plane carries four payload bits at
//! coefficients (0,0), (0,1), (1,0), (1,1). A bit of 1 scales the coefficient
//! by `1 + alpha`, a bit of 0 by `1 - alpha`, so the payload raises some
//! coefficient magnitudes and lowers others and the image mean stays put.
//! Extraction compares the suspect image against the original cover:
//! magnitude grew means 1, otherwise 0.

use sha2::{Digest, Sha256};

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::color;
use crate::error::{Error, Result};
use crate::image::{ImageBuffer, ImagePlane};

/// Coefficients with magnitude below this carry no recoverable payload; they
/// are left unchanged at embedding and skipped at extraction.
pub const TAU_SKIP: f64 = 0.5;
/// Minimum number of reliable positions for a meaningful verdict.
pub const MIN_RELIABLE: usize = 64;
/// Default match-fraction threshold: clean extraction sits near 1.0, a wrong
/// key near 0.5, and 0.85 leaves headroom for surviving attacked images.
pub const DEFAULT_THRESHOLD: f64 = 0.85;

/// A binary payload; `bits` are row-major values in `{0, 1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryWatermark {
    width: usize,
    height: usize,
    bits: Vec<u8>,
}

impl BinaryWatermark {
    pub fn from_bits(width: usize, height: usize, bits: Vec<u8>) -> Result<Self> {
        if bits.len() != width * height {
            return Err(Error::InvalidGeometry(format!(
                "{} bits for a {width}x{height} watermark",
                bits.len()
            )));
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::InvalidGeometry(
                "watermark bits must be 0 or 1".into(),
            ));
        }
        Ok(Self {
            width,
            height,
            bits,
        })
    }

    /// Binarizes an image at the mid-scale threshold: luma >= 128 is a 1.
    pub fn from_image(img: &ImageBuffer) -> Result<Self> {
        let luma = color::luma_plane(img)?;
        let bits = luma.data().iter().map(|&v| (v >= 128.0) as u8).collect();
        Self::from_bits(img.width() as usize, img.height() as usize, bits)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    #[inline]
    pub fn bit(&self, x: usize, y: usize) -> u8 {
        self.bits[y * self.width + x]
    }

    /// Pads with zeros to the capacity grid of a cover with the given block
    /// counts (two bits per block axis), placing this payload at the top-left.
    fn padded_to(&self, blocks_x: usize, blocks_y: usize) -> Result<Self> {
        let cap_w = 2 * blocks_x;
        let cap_h = 2 * blocks_y;
        if self.width > cap_w || self.height > cap_h {
            return Err(Error::CapacityExceeded {
                wm_width: self.width,
                wm_height: self.height,
                max_width: cap_w,
                max_height: cap_h,
                max_bits: cap_w * cap_h,
            });
        }
        let mut bits = vec![0u8; cap_w * cap_h];
        for y in 0..self.height {
            bits[y * cap_w..y * cap_w + self.width]
                .copy_from_slice(&self.bits[y * self.width..(y + 1) * self.width]);
        }
        Ok(Self {
            width: cap_w,
            height: cap_h,
            bits,
        })
    }
}

/// A user passphrase of 6 to 56 characters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WatermarkKey {
    passphrase: String,
}

impl WatermarkKey {
    pub fn new(passphrase: impl Into<String>) -> Result<Self> {
        let passphrase = passphrase.into();
        let len = passphrase.chars().count();
        if !(6..=56).contains(&len) {
            return Err(Error::KeyLength { len });
        }
        Ok(Self { passphrase })
    }

    pub fn passphrase(&self) -> &str {
        &self.passphrase
    }
}

/// Embedding strengths for the DC and the three low-frequency AC positions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaConfig {
    pub alpha_dc: f64,
    pub alpha_ac: f64,
}

impl Default for AlphaConfig {
    fn default() -> Self {
        Self {
            alpha_dc: 0.02,
            alpha_ac: 0.1,
        }
    }
}

impl AlphaConfig {
    pub fn validate(&self) -> Result<()> {
        let in_range = |v: f64| 0.0 < v && v < 1.0;
        if in_range(self.alpha_dc) && in_range(self.alpha_ac) {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!(
                "alpha_dc and alpha_ac must lie in (0, 1), got {} and {}",
                self.alpha_dc, self.alpha_ac
            )))
        }
    }
}

/// Outcome of an extraction run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Authentic,
    NotAuthentic,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Authentic => "authentic",
            Verdict::NotAuthentic => "not-authentic",
        })
    }
}

/// Extraction result: the verdict is authentic exactly when `match_fraction
/// >= threshold` and at least [`MIN_RELIABLE`] positions were usable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuthDecision {
    pub match_fraction: f64,
    pub reliable_count: usize,
    pub threshold: f64,
    pub verdict: Verdict,
}

impl AuthDecision {
    fn decide(matches: usize, reliable_count: usize, threshold: f64) -> Self {
        let match_fraction = if reliable_count == 0 {
            0.0
        } else {
            matches as f64 / reliable_count as f64
        };
        let verdict = if match_fraction >= threshold && reliable_count >= MIN_RELIABLE {
            Verdict::Authentic
        } else {
            Verdict::NotAuthentic
        };
        Self {
            match_fraction,
            reliable_count,
            threshold,
            verdict,
        }
    }
}

/// Deterministic keystream bits for a key: SHA-256 of the passphrase seeds a
/// ChaCha20 stream cipher, whose output is taken MSB-first per byte.
pub fn keystream_bits(key: &WatermarkKey, nbits: usize) -> Vec<u8> {
    let digest = Sha256::digest(key.passphrase().as_bytes());
    let mut seed = [0u8; 32];
    seed.copy_from_slice(&digest);
    let mut rng = ChaCha20Rng::from_seed(seed);
    let mut bytes = vec![0u8; nbits.div_ceil(8)];
    rng.fill_bytes(&mut bytes);
    let mut bits = Vec::with_capacity(nbits);
    for i in 0..nbits {
        bits.push((bytes[i / 8] >> (7 - i % 8)) & 1);
    }
    bits
}

/// XORs the payload with the key's keystream. Self-inverse: applying it twice
/// with the same key restores the input.
pub fn encrypt_watermark(wm: &BinaryWatermark, key: &WatermarkKey) -> BinaryWatermark {
    let ks = keystream_bits(key, wm.bits.len());
    let bits = wm.bits.iter().zip(&ks).map(|(&b, &k)| b ^ k).collect();
    BinaryWatermark {
        width: wm.width,
        height: wm.height,
        bits,
    }
}

/// The four payload positions per block, DC first.
const POSITIONS: [(usize, usize); 4] = [(0, 0), (0, 1), (1, 0), (1, 1)];

/// Extracts the working luma plane: Y for color covers, intensity for gray.
fn working_plane(img: &ImageBuffer) -> Result<ImagePlane> {
    color::luma_plane(img)
}

/// Embeds an encrypted binary watermark into the cover's luma plane.
///
/// The payload is padded to the full capacity grid (2x2 bits per block) and
/// encrypted as a whole, so every block of the cover carries keystream-mixed
/// bits and additions and subtractions balance out statistically.
pub fn embed_invisible(
    cover: &ImageBuffer,
    wm: &BinaryWatermark,
    key: &WatermarkKey,
    cfg: &AlphaConfig,
) -> Result<ImageBuffer> {
    cfg.validate()?;
    let (w, h) = (cover.width() as usize, cover.height() as usize);

    let plane = working_plane(cover)?;
    let ext = plane.extended();
    let mut grid = ext.partition()?.to_dct();
    let padded = wm.padded_to(grid.blocks_x(), grid.blocks_y())?;
    let enc = encrypt_watermark(&padded, key);

    let blocks_x = grid.blocks_x();
    for (n, block) in grid.blocks_mut().iter_mut().enumerate() {
        let bx = n % blocks_x;
        let by = n / blocks_x;
        for &(i, j) in &POSITIONS {
            let c = block[i][j];
            if c.abs() < TAU_SKIP {
                continue;
            }
            let alpha = if (i, j) == (0, 0) {
                cfg.alpha_dc
            } else {
                cfg.alpha_ac
            };
            let bit = enc.bit(2 * bx + j, 2 * by + i);
            block[i][j] = if bit == 1 {
                c * (1.0 + alpha)
            } else {
                c * (1.0 - alpha)
            };
        }
    }

    let marked = grid.to_spatial().assemble().cropped(w, h)?;
    if cover.channels() == 1 {
        marked.to_gray_image()
    } else {
        let (_, cb, cr) = color::rgb_to_ycbcr(cover)?;
        color::ycbcr_to_rgb(&marked, &cb, &cr)
    }
}

/// Non-blind extraction at the default threshold.
pub fn extract_watermark(
    suspect: &ImageBuffer,
    original: &ImageBuffer,
    expected_wm: &BinaryWatermark,
    key: &WatermarkKey,
) -> Result<AuthDecision> {
    extract_watermark_with_threshold(suspect, original, expected_wm, key, DEFAULT_THRESHOLD)
}

/// Non-blind extraction: decomposes suspect and original identically, reads a
/// 1 wherever a coefficient's magnitude grew, and compares against the
/// encrypted expected payload over all reliable positions.
///
/// The suspect must match the original's pixel dimensions; attacked images
/// are not re-registered. Channel counts may differ (some attacks change
/// them) because each image contributes only its luma plane.
pub fn extract_watermark_with_threshold(
    suspect: &ImageBuffer,
    original: &ImageBuffer,
    expected_wm: &BinaryWatermark,
    key: &WatermarkKey,
    threshold: f64,
) -> Result<AuthDecision> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::InvalidConfig(format!(
            "threshold must lie in [0, 1], got {threshold}"
        )));
    }
    if suspect.width() != original.width() || suspect.height() != original.height() {
        return Err(Error::DimensionMismatch(format!(
            "suspect {}x{} vs original {}x{}",
            suspect.width(),
            suspect.height(),
            original.width(),
            original.height()
        )));
    }

    let suspect_grid = working_plane(suspect)?.extended().partition()?.to_dct();
    let original_grid = working_plane(original)?.extended().partition()?.to_dct();
    let padded = expected_wm.padded_to(original_grid.blocks_x(), original_grid.blocks_y())?;
    let expected = encrypt_watermark(&padded, key);

    let blocks_x = original_grid.blocks_x();
    let mut reliable = 0usize;
    let mut matches = 0usize;
    for (n, (orig, susp)) in original_grid
        .blocks()
        .iter()
        .zip(suspect_grid.blocks())
        .enumerate()
    {
        let bx = n % blocks_x;
        let by = n / blocks_x;
        for &(i, j) in &POSITIONS {
            let c = orig[i][j];
            if c.abs() < TAU_SKIP {
                continue;
            }
            reliable += 1;
            let grew = (susp[i][j] - c) * c.signum() > 0.0;
            let expected_bit = expected.bit(2 * bx + j, 2 * by + i) == 1;
            if grew == expected_bit {
                matches += 1;
            }
        }
    }
    Ok(AuthDecision::decide(matches, reliable, threshold))
}

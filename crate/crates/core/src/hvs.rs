//! Perceptual block statistics and the per-block embedding-factor model.
//!
//! For each 8x8 DCT block the model derives a normalized mean (from the DC
//! coefficient), a normalized log variance of the 63 AC coefficients, and an
//! edge flag (Sobel). Visible embedding then scales the cover by `alpha_n` and
//! the watermark by `beta_n`, where smooth mid-luminance blocks tolerate the
//! least distortion (high alpha, low beta) and busy or extreme blocks absorb
//! more watermark energy.

use crate::error::{Error, Result};
use crate::image::{BlockGrid, ImagePlane};

/// Lower end of the normalization range for means and log variances.
const NORM_LO: f64 = 0.1;
/// Upper end of the normalization range.
const NORM_HI: f64 = 1.0;
/// Substituted for a zero AC variance inside the logarithm.
const EPS_VAR: f64 = 1e-12;

/// Per-block statistics, normalized against the whole plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockStats {
    /// Normalized block mean in `[0.1, 1.0]` (from the DC coefficient).
    pub mu_prime: f64,
    /// Log variance of the 63 AC coefficients.
    pub sigma: f64,
    /// Normalized log variance in `[0.1, 1.0]`.
    pub sigma_prime: f64,
    /// Mean of the 63 AC coefficients.
    pub mu_ac: f64,
    /// Whether the block carries strong contours.
    pub is_edge: bool,
}

/// Plane-wide aggregates backing the normalizations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlobalStats {
    /// Mean of the normalized block means.
    pub mu_prime: f64,
    pub c00_min: f64,
    pub c00_max: f64,
    pub sigma_min: f64,
    pub sigma_max: f64,
}

/// Bounds for the visible-embedding factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorConfig {
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub beta_min: f64,
    pub beta_max: f64,
}

impl Default for FactorConfig {
    fn default() -> Self {
        Self {
            alpha_min: 0.95,
            alpha_max: 0.98,
            beta_min: 0.05,
            beta_max: 0.17,
        }
    }
}

impl FactorConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = 0.0 < self.alpha_min
            && self.alpha_min <= self.alpha_max
            && self.alpha_max <= 1.0
            && 0.0 <= self.beta_min
            && self.beta_min <= self.beta_max;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!(
                "factor bounds need 0 < alpha_min <= alpha_max <= 1 and \
                 0 <= beta_min <= beta_max, got alpha [{}, {}], beta [{}, {}]",
                self.alpha_min, self.alpha_max, self.beta_min, self.beta_max
            )))
        }
    }
}

/// Sobel edge-block classification parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeConfig {
    /// Gradient-magnitude threshold on the 8-bit scale.
    pub threshold: f64,
    /// A block is an edge block when more than this fraction of its pixels
    /// exceed the threshold.
    pub min_fraction: f64,
}

impl Default for EdgeConfig {
    fn default() -> Self {
        Self {
            threshold: 100.0,
            min_fraction: 0.15,
        }
    }
}

impl EdgeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.threshold >= 0.0 && (0.0..=1.0).contains(&self.min_fraction) {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!(
                "edge detector needs threshold >= 0 and fraction in [0, 1], \
                 got {} and {}",
                self.threshold, self.min_fraction
            )))
        }
    }
}

/// The per-block embedding weights for visible fusion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmbedFactors {
    pub alpha: f64,
    pub beta: f64,
}

/// Maps values onto `[0.1, 1.0]`; a degenerate spread (max == min) maps
/// everything to 1.0 because a constant-statistics plane has no contrast to
/// adapt to.
#[inline]
fn normalize(v: f64, min: f64, max: f64) -> f64 {
    if max > min {
        NORM_LO + (NORM_HI - NORM_LO) * (v - min) / (max - min)
    } else {
        NORM_HI
    }
}

/// Computes per-block statistics and plane-wide aggregates from a DCT grid.
/// `edge_mask` must hold one flag per block, as produced by
/// [`detect_edge_blocks`] on the matching spatial plane.
pub fn compute_stats(
    dct_grid: &BlockGrid,
    edge_mask: &[bool],
) -> Result<(Vec<BlockStats>, GlobalStats)> {
    if dct_grid.is_empty() {
        return Err(Error::InvalidGeometry("empty block grid".into()));
    }
    if edge_mask.len() != dct_grid.len() {
        return Err(Error::InvalidGeometry(format!(
            "edge mask has {} entries for {} blocks",
            edge_mask.len(),
            dct_grid.len()
        )));
    }

    let mut c00s = Vec::with_capacity(dct_grid.len());
    let mut mu_acs = Vec::with_capacity(dct_grid.len());
    let mut sigmas = Vec::with_capacity(dct_grid.len());
    for block in dct_grid.blocks() {
        let c00 = block[0][0];
        let ac_sum: f64 = block.iter().flatten().sum::<f64>() - c00;
        let mu_ac = ac_sum / 63.0;
        let mut var = 0.0;
        for (i, row) in block.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                if (i, j) != (0, 0) {
                    let d = c - mu_ac;
                    var += d * d;
                }
            }
        }
        var /= 63.0;
        c00s.push(c00);
        mu_acs.push(mu_ac);
        sigmas.push(var.max(EPS_VAR).ln());
    }

    let fold = |acc: (f64, f64), &v: &f64| (acc.0.min(v), acc.1.max(v));
    let (c00_min, c00_max) = c00s.iter().fold((f64::INFINITY, f64::NEG_INFINITY), fold);
    let (sigma_min, sigma_max) = sigmas.iter().fold((f64::INFINITY, f64::NEG_INFINITY), fold);

    let mut stats = Vec::with_capacity(dct_grid.len());
    let mut mu_prime_sum = 0.0;
    for n in 0..dct_grid.len() {
        let mu_prime = normalize(c00s[n], c00_min, c00_max);
        mu_prime_sum += mu_prime;
        stats.push(BlockStats {
            mu_prime,
            sigma: sigmas[n],
            sigma_prime: normalize(sigmas[n], sigma_min, sigma_max),
            mu_ac: mu_acs[n],
            is_edge: edge_mask[n],
        });
    }

    let global = GlobalStats {
        mu_prime: mu_prime_sum / dct_grid.len() as f64,
        c00_min,
        c00_max,
        sigma_min,
        sigma_max,
    };
    Ok((stats, global))
}

/// Sobel gradient magnitude per pixel (3x3 kernels, border samples clamped),
/// reduced to one flag per 8x8 block: flagged when the fraction of pixels
/// with magnitude above `cfg.threshold` exceeds `cfg.min_fraction`.
pub fn detect_edge_blocks(plane: &ImagePlane, cfg: &EdgeConfig) -> Result<Vec<bool>> {
    cfg.validate()?;
    let (w, h) = (plane.width(), plane.height());
    if w % 8 != 0 || h % 8 != 0 {
        return Err(Error::UnalignedPlane {
            width: w,
            height: h,
        });
    }
    let blocks_x = w / 8;
    let blocks_y = h / 8;
    let mut counts = vec![0u32; blocks_x * blocks_y];

    let at = |x: isize, y: isize| -> f64 {
        let x = x.clamp(0, w as isize - 1) as usize;
        let y = y.clamp(0, h as isize - 1) as usize;
        plane.get(x, y)
    };
    let threshold_sq = cfg.threshold * cfg.threshold;
    for y in 0..h as isize {
        for x in 0..w as isize {
            let gx = at(x + 1, y - 1) + 2.0 * at(x + 1, y) + at(x + 1, y + 1)
                - at(x - 1, y - 1)
                - 2.0 * at(x - 1, y)
                - at(x - 1, y + 1);
            let gy = at(x - 1, y + 1) + 2.0 * at(x, y + 1) + at(x + 1, y + 1)
                - at(x - 1, y - 1)
                - 2.0 * at(x, y - 1)
                - at(x + 1, y - 1);
            if gx * gx + gy * gy > threshold_sq {
                counts[(y as usize / 8) * blocks_x + x as usize / 8] += 1;
            }
        }
    }
    Ok(counts
        .into_iter()
        .map(|c| c as f64 / 64.0 > cfg.min_fraction)
        .collect())
}

/// Evaluates one (alpha, beta) pair. Edge blocks get the fixed extreme pair;
/// other blocks follow the texture/luminance model, clamped into the
/// configured ranges (the `1 / sigma_prime` term can overshoot `beta_max` by
/// up to a factor of ten).
pub fn factors_for(stats: &BlockStats, global: &GlobalStats, cfg: &FactorConfig) -> EmbedFactors {
    if stats.is_edge {
        return EmbedFactors {
            alpha: cfg.alpha_max,
            beta: cfg.beta_min,
        };
    }
    let d = stats.mu_prime - global.mu_prime;
    let bell = (-d * d).exp();
    let alpha = cfg.alpha_min + (cfg.alpha_max - cfg.alpha_min) * stats.sigma_prime * bell;
    let beta =
        cfg.beta_min + (cfg.beta_max - cfg.beta_min) * (1.0 / stats.sigma_prime) * (1.0 - bell);
    EmbedFactors {
        alpha: alpha.clamp(cfg.alpha_min, cfg.alpha_max),
        beta: beta.clamp(cfg.beta_min, cfg.beta_max),
    }
}

/// Per-block factors for a whole plane.
pub fn compute_factors(
    stats: &[BlockStats],
    global: &GlobalStats,
    cfg: &FactorConfig,
) -> Result<Vec<EmbedFactors>> {
    cfg.validate()?;
    Ok(stats.iter().map(|s| factors_for(s, global, cfg)).collect())
}

//! Block-DCT image watermarking: perceptually weighted visible overlays and
//! key-encrypted invisible payloads, plus the quality metrics and robustness
//! attacks used to evaluate them.
//!
//! The pipeline works on 8x8 discrete cosine transform blocks of the
//! luminance plane. Visible embedding fuses watermark coefficients into the
//! cover with per-block strength factors derived from local brightness,
//! texture, and edge content, so the overlay stays legible without wrecking
//! busy or smooth regions. Invisible embedding modulates low-frequency
//! coefficients with an encrypted binary payload that a holder of the
//! original image and passphrase can extract and verify.
//!
//! Entry points:
//!
//! * [`embed_visible`] / [`PlacementSpec`]: translucent logo overlay.
//! * [`embed_invisible`] / [`extract_watermark`]: payload round trip.
//! * [`quality`]: distortion metrics between two images.
//! * [`attack`] / [`run_attack_matrix`]: robustness evaluation.

pub mod attacks;
pub mod color;
pub mod dct;
pub mod error;
pub mod hvs;
pub mod image;
pub mod invisible;
pub mod metrics;
pub mod visible;

pub use attacks::{
    attack, default_suite, parse_attack, parse_suite, run_attack_matrix, AttackSpec, Corner,
    MatrixRow,
};
pub use error::{Error, Result};
pub use hvs::{EdgeConfig, FactorConfig};
pub use image::{ImageBuffer, ImagePlane};
pub use invisible::{
    embed_invisible, extract_watermark, extract_watermark_with_threshold, AlphaConfig,
    AuthDecision, BinaryWatermark, Verdict, WatermarkKey,
};
pub use metrics::{mse, psnr, quality, QualityReport};
pub use visible::{embed_visible, Anchor, PlacementSpec};

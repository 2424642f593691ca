//! Error type shared by every module in the crate.

use std::path::PathBuf;

/// All failure modes of the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A file could not be read or decoded as an image.
    #[error("unreadable image {path:?}: {reason}")]
    Unreadable { path: PathBuf, reason: String },

    /// A file could not be written.
    #[error("cannot write {path:?}: {reason}")]
    Unwritable { path: PathBuf, reason: String },

    /// Raw sample data is inconsistent with the stated geometry.
    #[error("invalid image geometry: {0}")]
    InvalidGeometry(String),

    /// Two images that must agree in size (and channel layout where stated) do not.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// An operation that needs a color image was given a grayscale one;
    /// the caller should use the intensity plane directly.
    #[error("image is grayscale; use the intensity plane directly")]
    NotColor,

    /// Plane dimensions must be multiples of 8 before block partitioning.
    #[error("plane {width}x{height} is not aligned to 8x8 blocks")]
    UnalignedPlane { width: usize, height: usize },

    /// A configuration value is outside its documented range.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Key passphrases must be 6..=56 characters long.
    #[error("key must be 6..=56 characters, got {len}")]
    KeyLength { len: usize },

    /// The binary watermark does not fit the cover's embedding capacity.
    #[error(
        "watermark of {wm_width}x{wm_height} bits exceeds capacity \
         {max_width}x{max_height} ({max_bits} bits total)"
    )]
    CapacityExceeded {
        wm_width: usize,
        wm_height: usize,
        max_width: usize,
        max_height: usize,
        max_bits: usize,
    },

    /// An attack spec, suite file, or config file could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

//! C interface for the watermarking library.
//!
//! Conventions, mirrored in the generated `include/dctmark.h`:
//!
//! * Every fallible function returns a [`WmStatus`]; out-parameters are
//!   written only on `WM_STATUS_OK`.
//! * On failure a message is stored per thread; [`wm_last_error`] returns it
//!   and the pointer stays valid until the next failure on the same thread.
//! * Images are opaque [`WmImage`] handles created by `wm_image_load` or
//!   `wm_image_new` and released with `wm_image_free`. Pixel data is 8-bit,
//!   row-major, channel-interleaved (1 or 3 channels).
//! * Strings are NUL-terminated UTF-8.

// The safety contract is the same for every function and stated once above:
// pointer arguments must be valid (or null, which is reported) and handles
// must come from this interface.
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fmt::Display;

use dctmark::attacks::parse_steps;
use dctmark::hvs::{EdgeConfig, FactorConfig};
use dctmark::image::ImageBuffer;
use dctmark::invisible::DEFAULT_THRESHOLD;
use dctmark::visible::Anchor;
use dctmark::{
    attack, embed_invisible, embed_visible, extract_watermark_with_threshold, quality, AlphaConfig,
    BinaryWatermark, Error, PlacementSpec, Verdict, WatermarkKey,
};

/// Result code of every fallible call in this interface.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WmStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// A file could not be read, decoded, or written.
    Io = 3,
    /// An argument value is outside its documented range or could not be parsed.
    InvalidArgument = 4,
    /// Two images that must agree in size or channel layout do not.
    DimensionMismatch = 5,
    /// The watermark payload exceeds the cover image's capacity.
    CapacityExceeded = 6,
}

/// Placement anchor for the visible overlay.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WmAnchor {
    TopLeft = 0,
    TopCenter,
    TopRight,
    MiddleLeft,
    MiddleCenter,
    MiddleRight,
    BottomLeft,
    BottomCenter,
    BottomRight,
}

impl From<WmAnchor> for Anchor {
    fn from(a: WmAnchor) -> Self {
        match a {
            WmAnchor::TopLeft => Anchor::TopLeft,
            WmAnchor::TopCenter => Anchor::TopCenter,
            WmAnchor::TopRight => Anchor::TopRight,
            WmAnchor::MiddleLeft => Anchor::MiddleLeft,
            WmAnchor::MiddleCenter => Anchor::MiddleCenter,
            WmAnchor::MiddleRight => Anchor::MiddleRight,
            WmAnchor::BottomLeft => Anchor::BottomLeft,
            WmAnchor::BottomCenter => Anchor::BottomCenter,
            WmAnchor::BottomRight => Anchor::BottomRight,
        }
    }
}

/// Bounds for the adaptive visible-embedding factors. Pass null where a
/// `*const WmFactorConfig` is accepted to use the built-in defaults
/// (0.95, 0.98, 0.05, 0.17).
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct WmFactorConfig {
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub beta_min: f64,
    pub beta_max: f64,
}

/// Outcome of an authentication run.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct WmAuthResult {
    /// Fraction of reliable embedding positions whose extracted bit matched.
    pub match_fraction: f64,
    /// Number of reliable positions that contributed to the fraction.
    pub reliable_count: u64,
    /// Threshold the verdict was taken against.
    pub threshold: f64,
    /// True when the suspect image carries the expected watermark.
    pub authentic: bool,
}

/// Distortion between two images of equal geometry.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct WmQuality {
    /// Mean squared error over all samples.
    pub mse: f64,
    /// Peak signal-to-noise ratio in dB; +infinity for identical images.
    pub psnr_db: f64,
}

/// Opaque image handle.
pub struct WmImage(ImageBuffer);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn fail(status: WmStatus, msg: impl Display) -> WmStatus {
    // Interior NULs cannot come from our own messages, but don't panic if
    // one ever does; the message is best-effort diagnostics.
    let text = msg.to_string().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).unwrap_or_default());
    status
}

fn fail_with(e: Error) -> WmStatus {
    let status = match &e {
        Error::Unreadable { .. } | Error::Unwritable { .. } => WmStatus::Io,
        Error::DimensionMismatch(_) | Error::NotColor => WmStatus::DimensionMismatch,
        Error::CapacityExceeded { .. } => WmStatus::CapacityExceeded,
        _ => WmStatus::InvalidArgument,
    };
    fail(status, e)
}

/// Returns the message of the most recent failure on the calling thread, or
/// an empty string when there has been none.
#[no_mangle]
pub extern "C" fn wm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

unsafe fn utf8_arg<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, WmStatus> {
    if ptr.is_null() {
        return Err(fail(WmStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| fail(WmStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn image_arg<'a>(ptr: *const WmImage, what: &str) -> Result<&'a ImageBuffer, WmStatus> {
    match ptr.as_ref() {
        Some(img) => Ok(&img.0),
        None => Err(fail(WmStatus::NullPointer, format!("{what} is null"))),
    }
}

unsafe fn emit_image(out: *mut *mut WmImage, img: ImageBuffer) -> WmStatus {
    if out.is_null() {
        return fail(WmStatus::NullPointer, "out is null");
    }
    out.write(Box::into_raw(Box::new(WmImage(img))));
    WmStatus::Ok
}

/// Decodes a PNG, JPEG, or BMP file into a new image handle.
#[no_mangle]
pub unsafe extern "C" fn wm_image_load(path: *const c_char, out: *mut *mut WmImage) -> WmStatus {
    let path = match utf8_arg(path, "path") {
        Ok(p) => p,
        Err(s) => return s,
    };
    match ImageBuffer::load(path) {
        Ok(img) => emit_image(out, img),
        Err(e) => fail_with(e),
    }
}

/// Creates a constant-filled image with 1 (gray) or 3 (RGB) channels.
#[no_mangle]
pub unsafe extern "C" fn wm_image_new(
    width: u32,
    height: u32,
    channels: u32,
    fill: u8,
    out: *mut *mut WmImage,
) -> WmStatus {
    if channels > u8::MAX as u32 {
        return fail(WmStatus::InvalidArgument, format!("{channels} channels"));
    }
    match ImageBuffer::filled(width, height, channels as u8, fill) {
        Ok(img) => emit_image(out, img),
        Err(e) => fail_with(e),
    }
}

/// Writes the image as a PNG file, whatever the path's extension.
#[no_mangle]
pub unsafe extern "C" fn wm_image_save(img: *const WmImage, path: *const c_char) -> WmStatus {
    let img = match image_arg(img, "img") {
        Ok(i) => i,
        Err(s) => return s,
    };
    let path = match utf8_arg(path, "path") {
        Ok(p) => p,
        Err(s) => return s,
    };
    match img.save(path) {
        Ok(()) => WmStatus::Ok,
        Err(e) => fail_with(e),
    }
}

/// Width in pixels; 0 when the handle is null.
#[no_mangle]
pub unsafe extern "C" fn wm_image_width(img: *const WmImage) -> u32 {
    img.as_ref().map_or(0, |i| i.0.width())
}

/// Height in pixels; 0 when the handle is null.
#[no_mangle]
pub unsafe extern "C" fn wm_image_height(img: *const WmImage) -> u32 {
    img.as_ref().map_or(0, |i| i.0.height())
}

/// Samples per pixel (1 or 3); 0 when the handle is null.
#[no_mangle]
pub unsafe extern "C" fn wm_image_channels(img: *const WmImage) -> u32 {
    img.as_ref().map_or(0, |i| u32::from(i.0.channels()))
}

/// Total number of samples (width * height * channels).
#[no_mangle]
pub unsafe extern "C" fn wm_image_sample_count(img: *const WmImage) -> u64 {
    img.as_ref().map_or(0, |i| i.0.data().len() as u64)
}

/// Read-only pointer to the sample data, valid until the handle is freed or
/// mutated; null when the handle is null.
#[no_mangle]
pub unsafe extern "C" fn wm_image_samples(img: *const WmImage) -> *const u8 {
    img.as_ref()
        .map_or(std::ptr::null(), |i| i.0.data().as_ptr())
}

/// Mutable pointer to the sample data; null when the handle is null.
#[no_mangle]
pub unsafe extern "C" fn wm_image_samples_mut(img: *mut WmImage) -> *mut u8 {
    img.as_mut()
        .map_or(std::ptr::null_mut(), |i| i.0.data_mut().as_mut_ptr())
}

/// Releases an image handle; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn wm_image_free(img: *mut WmImage) {
    if !img.is_null() {
        drop(Box::from_raw(img));
    }
}

/// Overlays a translucent watermark on the cover with per-block adaptive
/// strength. `target_width`/`target_height` of 0 keep the watermark's natural
/// size (it is always shrunk to fit the cover); `intensity` runs 1 (faint) to
/// 100 (strong); `factors` may be null for the defaults.
#[no_mangle]
pub unsafe extern "C" fn wm_embed_visible(
    cover: *const WmImage,
    watermark: *const WmImage,
    anchor: WmAnchor,
    target_width: u32,
    target_height: u32,
    intensity: u32,
    factors: *const WmFactorConfig,
    out: *mut *mut WmImage,
) -> WmStatus {
    let cover = match image_arg(cover, "cover") {
        Ok(i) => i,
        Err(s) => return s,
    };
    let watermark = match image_arg(watermark, "watermark") {
        Ok(i) => i,
        Err(s) => return s,
    };
    let spec = PlacementSpec {
        anchor: anchor.into(),
        target_width: if target_width == 0 {
            watermark.width()
        } else {
            target_width
        },
        target_height: if target_height == 0 {
            watermark.height()
        } else {
            target_height
        },
        intensity,
    };
    let config = match factors.as_ref() {
        Some(f) => FactorConfig {
            alpha_min: f.alpha_min,
            alpha_max: f.alpha_max,
            beta_min: f.beta_min,
            beta_max: f.beta_max,
        },
        None => FactorConfig::default(),
    };
    match embed_visible(cover, watermark, &spec, &config, &EdgeConfig::default()) {
        Ok(img) => emit_image(out, img),
        Err(e) => fail_with(e),
    }
}

/// Hides `watermark` (binarized at intensity 128) in the cover under `key`.
/// Pass 0 for `alpha_dc` or `alpha_ac` to use the defaults (0.02 and 0.1).
#[no_mangle]
pub unsafe extern "C" fn wm_embed_invisible(
    cover: *const WmImage,
    watermark: *const WmImage,
    key: *const c_char,
    alpha_dc: f64,
    alpha_ac: f64,
    out: *mut *mut WmImage,
) -> WmStatus {
    let cover = match image_arg(cover, "cover") {
        Ok(i) => i,
        Err(s) => return s,
    };
    let watermark = match image_arg(watermark, "watermark") {
        Ok(i) => i,
        Err(s) => return s,
    };
    let key = match utf8_arg(key, "key") {
        Ok(k) => k,
        Err(s) => return s,
    };
    let defaults = AlphaConfig::default();
    let config = AlphaConfig {
        alpha_dc: if alpha_dc == 0.0 {
            defaults.alpha_dc
        } else {
            alpha_dc
        },
        alpha_ac: if alpha_ac == 0.0 {
            defaults.alpha_ac
        } else {
            alpha_ac
        },
    };
    let result = WatermarkKey::new(key).and_then(|key| {
        let mark = BinaryWatermark::from_image(watermark)?;
        embed_invisible(cover, &mark, &key, &config)
    });
    match result {
        Ok(img) => emit_image(out, img),
        Err(e) => fail_with(e),
    }
}

/// Checks whether `suspect` carries `watermark` embedded under `key`, given
/// the unwatermarked `original`. Pass 0 for `threshold` to use the default
/// (0.85). The verdict lands in `result`.
#[no_mangle]
pub unsafe extern "C" fn wm_authenticate(
    suspect: *const WmImage,
    original: *const WmImage,
    watermark: *const WmImage,
    key: *const c_char,
    threshold: f64,
    result: *mut WmAuthResult,
) -> WmStatus {
    let suspect = match image_arg(suspect, "suspect") {
        Ok(i) => i,
        Err(s) => return s,
    };
    let original = match image_arg(original, "original") {
        Ok(i) => i,
        Err(s) => return s,
    };
    let watermark = match image_arg(watermark, "watermark") {
        Ok(i) => i,
        Err(s) => return s,
    };
    let key = match utf8_arg(key, "key") {
        Ok(k) => k,
        Err(s) => return s,
    };
    if result.is_null() {
        return fail(WmStatus::NullPointer, "result is null");
    }
    let threshold = if threshold == 0.0 {
        DEFAULT_THRESHOLD
    } else {
        threshold
    };
    let decision = WatermarkKey::new(key).and_then(|key| {
        let mark = BinaryWatermark::from_image(watermark)?;
        extract_watermark_with_threshold(suspect, original, &mark, &key, threshold)
    });
    match decision {
        Ok(d) => {
            result.write(WmAuthResult {
                match_fraction: d.match_fraction,
                reliable_count: d.reliable_count as u64,
                threshold: d.threshold,
                authentic: d.verdict == Verdict::Authentic,
            });
            WmStatus::Ok
        }
        Err(e) => fail_with(e),
    }
}

/// Mean squared error and PSNR between two images of equal geometry.
#[no_mangle]
pub unsafe extern "C" fn wm_quality(
    a: *const WmImage,
    b: *const WmImage,
    result: *mut WmQuality,
) -> WmStatus {
    let a = match image_arg(a, "a") {
        Ok(i) => i,
        Err(s) => return s,
    };
    let b = match image_arg(b, "b") {
        Ok(i) => i,
        Err(s) => return s,
    };
    if result.is_null() {
        return fail(WmStatus::NullPointer, "result is null");
    }
    match quality(a, b, 8) {
        Ok(q) => {
            result.write(WmQuality {
                mse: q.mse,
                psnr_db: q.psnr_db.unwrap_or(f64::INFINITY),
            });
            WmStatus::Ok
        }
        Err(e) => fail_with(e),
    }
}

/// Applies a robustness attack described the same way as on the command
/// line: `"<kind> key=value ..."`, with comma-separated steps forming a
/// composite, e.g. `"jpeg quality=75"` or `"blur radius=1, jpeg quality=75"`.
#[no_mangle]
pub unsafe extern "C" fn wm_attack(
    img: *const WmImage,
    spec: *const c_char,
    out: *mut *mut WmImage,
) -> WmStatus {
    let img = match image_arg(img, "img") {
        Ok(i) => i,
        Err(s) => return s,
    };
    let spec = match utf8_arg(spec, "spec") {
        Ok(s) => s,
        Err(s) => return s,
    };
    let result = parse_steps(spec).and_then(|steps| attack(img, &steps));
    match result {
        Ok(attacked) => emit_image(out, attacked),
        Err(e) => fail_with(e),
    }
}

//! Full-range BT.601 color conversion (the JPEG YCbCr convention).
//!
//! Forward planes are kept as unclamped reals so no precision is lost before
//! the transform stages; only the final inverse back to 8-bit rounds and
//! clamps. The inverse reconstructs G algebraically from the forward weights,
//! which makes a float round trip exact and an 8-bit round trip off by at
//! most one per channel.

use crate::error::{Error, Result};
use crate::image::{quantize_sample, ImageBuffer, ImagePlane};

const KR: f64 = 0.299;
const KG: f64 = 0.587;
const KB: f64 = 0.114;

/// Luma of one RGB triple.
#[inline]
pub fn luma(r: f64, g: f64, b: f64) -> f64 {
    KR * r + KG * g + KB * b
}

/// Forward conversion of an RGB image into unclamped Y, Cb, Cr planes.
/// Grayscale input is an error; its intensity plane already is the luma.
pub fn rgb_to_ycbcr(img: &ImageBuffer) -> Result<(ImagePlane, ImagePlane, ImagePlane)> {
    if img.channels() != 3 {
        return Err(Error::NotColor);
    }
    let (w, h) = (img.width() as usize, img.height() as usize);
    let n = w * h;
    let mut y = Vec::with_capacity(n);
    let mut cb = Vec::with_capacity(n);
    let mut cr = Vec::with_capacity(n);
    for px in img.data().chunks_exact(3) {
        let (r, g, b) = (px[0] as f64, px[1] as f64, px[2] as f64);
        let yy = luma(r, g, b);
        y.push(yy);
        cb.push(128.0 + (b - yy) / (2.0 * (1.0 - KB)));
        cr.push(128.0 + (r - yy) / (2.0 * (1.0 - KR)));
    }
    Ok((
        ImagePlane::new(w, h, y)?,
        ImagePlane::new(w, h, cb)?,
        ImagePlane::new(w, h, cr)?,
    ))
}

/// Inverse conversion; rounds half-up and clamps each channel to `[0, 255]`.
pub fn ycbcr_to_rgb(y: &ImagePlane, cb: &ImagePlane, cr: &ImagePlane) -> Result<ImageBuffer> {
    if y.width() != cb.width()
        || y.width() != cr.width()
        || y.height() != cb.height()
        || y.height() != cr.height()
    {
        return Err(Error::DimensionMismatch(format!(
            "Y {}x{}, Cb {}x{}, Cr {}x{}",
            y.width(),
            y.height(),
            cb.width(),
            cb.height(),
            cr.width(),
            cr.height()
        )));
    }
    let mut data = Vec::with_capacity(y.data().len() * 3);
    for ((&yy, &cbv), &crv) in y.data().iter().zip(cb.data()).zip(cr.data()) {
        let (r, g, b) = ycbcr_to_rgb_real(yy, cbv, crv);
        data.push(quantize_sample(r));
        data.push(quantize_sample(g));
        data.push(quantize_sample(b));
    }
    ImageBuffer::new(y.width() as u32, y.height() as u32, 3, data)
}

/// Inverse of one YCbCr triple, unrounded.
#[inline]
pub fn ycbcr_to_rgb_real(y: f64, cb: f64, cr: f64) -> (f64, f64, f64) {
    let r = y + 2.0 * (1.0 - KR) * (cr - 128.0);
    let b = y + 2.0 * (1.0 - KB) * (cb - 128.0);
    let g = (y - KR * r - KB * b) / KG;
    (r, g, b)
}

/// Luma plane of any supported image: the Y plane of an RGB image, or the
/// intensity plane of a grayscale one.
pub fn luma_plane(img: &ImageBuffer) -> Result<ImagePlane> {
    if img.channels() == 1 {
        img.intensity_plane()
    } else {
        Ok(rgb_to_ycbcr(img)?.0)
    }
}

/// Grayscale version of any supported image (BT.601 luma, rounded).
pub fn to_gray(img: &ImageBuffer) -> Result<ImageBuffer> {
    luma_plane(img)?.to_gray_image()
}

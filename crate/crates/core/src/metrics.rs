//! Mean squared error and peak signal-to-noise ratio.

use std::fmt;

use crate::error::{Error, Result};
use crate::image::ImageBuffer;

/// MSE and PSNR of a pair of images at a given bit depth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QualityReport {
    pub mse: f64,
    /// `None` means the images are identical (infinite PSNR); infinity is a
    /// distinguished state, never a floating-point overflow.
    pub psnr_db: Option<f64>,
    pub bit_depth: u8,
}

impl fmt::Display for QualityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.psnr_db {
            Some(db) => write!(f, "MSE {}, PSNR {:.2} dB", self.mse, db),
            None => write!(f, "MSE {}, PSNR inf", self.mse),
        }
    }
}

fn check_same_shape(a: &ImageBuffer, b: &ImageBuffer) -> Result<()> {
    if a.width() != b.width() || a.height() != b.height() || a.channels() != b.channels() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{}x{} vs {}x{}x{}",
            a.width(),
            a.height(),
            a.channels(),
            b.width(),
            b.height(),
            b.channels()
        )));
    }
    Ok(())
}

/// Mean of squared per-sample differences over all `width * height * channels`
/// samples.
pub fn mse(a: &ImageBuffer, b: &ImageBuffer) -> Result<f64> {
    check_same_shape(a, b)?;
    let sum: f64 = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(&x, &y)| {
            let d = x as f64 - y as f64;
            d * d
        })
        .sum();
    Ok(sum / a.data().len() as f64)
}

/// `10 * log10(peak^2 / MSE)` with `peak = 2^bit_depth - 1`; `None` when the
/// images are identical.
pub fn psnr(a: &ImageBuffer, b: &ImageBuffer, bit_depth: u8) -> Result<Option<f64>> {
    let mse = mse(a, b)?;
    Ok(psnr_from_mse(mse, bit_depth))
}

/// PSNR from a precomputed MSE.
pub fn psnr_from_mse(mse: f64, bit_depth: u8) -> Option<f64> {
    if mse == 0.0 {
        return None;
    }
    let peak = (1u64 << bit_depth) as f64 - 1.0;
    Some(10.0 * (peak * peak / mse).log10())
}

/// MSE and PSNR in one pass.
pub fn quality(a: &ImageBuffer, b: &ImageBuffer, bit_depth: u8) -> Result<QualityReport> {
    let mse = mse(a, b)?;
    Ok(QualityReport {
        mse,
        psnr_db: psnr_from_mse(mse, bit_depth),
        bit_depth,
    })
}

/// Mean signed difference `mean(a - b)` over all samples; near zero for a
/// well-balanced invisible watermark.
pub fn mean_signed_diff(a: &ImageBuffer, b: &ImageBuffer) -> Result<f64> {
    check_same_shape(a, b)?;
    let sum: f64 = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(&x, &y)| x as f64 - y as f64)
        .sum();
    Ok(sum / a.data().len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_images_have_zero_mse_and_infinite_psnr() {
        let a = ImageBuffer::filled(4, 4, 3, 90).unwrap();
        assert_eq!(mse(&a, &a).unwrap(), 0.0);
        assert_eq!(psnr(&a, &a, 8).unwrap(), None);
        assert_eq!(quality(&a, &a, 8).unwrap().to_string(), "MSE 0, PSNR inf");
    }

    #[test]
    fn single_full_scale_difference() {
        // 2x2 RGB pair differing by 255 in one sample: MSE = 255^2 / 12.
        let a = ImageBuffer::filled(2, 2, 3, 0).unwrap();
        let mut b = a.clone();
        b.set_sample(0, 0, 0, 255);
        let m = mse(&a, &b).unwrap();
        assert_eq!(m, 5418.75);
        // 65025 / 5418.75 = 12 exactly.
        let db = psnr(&a, &b, 8).unwrap().unwrap();
        assert!((db - 10.0 * 12.0f64.log10()).abs() < 1e-12);
        assert!((db - 10.791_812_46).abs() < 1e-6);
        assert_eq!(
            format!("{}", quality(&a, &b, 8).unwrap()),
            "MSE 5418.75, PSNR 10.79 dB"
        );
    }

    #[test]
    fn uniform_offset_of_one_gives_unit_mse() {
        let a = ImageBuffer::filled(3, 5, 1, 10).unwrap();
        let b = ImageBuffer::filled(3, 5, 1, 11).unwrap();
        assert_eq!(mse(&a, &b).unwrap(), 1.0);
        assert_eq!(mean_signed_diff(&a, &b).unwrap(), -1.0);
    }

    #[test]
    fn mse_equal_to_peak_squared_gives_zero_db() {
        let a = ImageBuffer::filled(2, 2, 1, 0).unwrap();
        let b = ImageBuffer::filled(2, 2, 1, 255).unwrap();
        assert_eq!(psnr(&a, &b, 8).unwrap(), Some(0.0));
    }

    #[test]
    fn mse_is_symmetric() {
        let a = ImageBuffer::new(2, 1, 1, vec![10, 200]).unwrap();
        let b = ImageBuffer::new(2, 1, 1, vec![30, 100]).unwrap();
        assert_eq!(mse(&a, &b).unwrap(), mse(&b, &a).unwrap());
    }

    #[test]
    fn mismatched_shapes_are_rejected() {
        let a = ImageBuffer::filled(2, 2, 3, 0).unwrap();
        let b = ImageBuffer::filled(2, 2, 1, 0).unwrap();
        assert!(mse(&a, &b).is_err());
        let c = ImageBuffer::filled(2, 3, 3, 0).unwrap();
        assert!(mse(&a, &c).is_err());
    }
}

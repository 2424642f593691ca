//! Image buffers, file I/O, real-valued planes, and 8x8 block partitioning.

use std::path::Path;

use crate::dct::{self, Block};
use crate::error::{Error, Result};

/// An 8-bit image, row-major and channel-interleaved. `channels` is 1
/// (grayscale) or 3 (RGB).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageBuffer {
    width: u32,
    height: u32,
    channels: u8,
    data: Vec<u8>,
}

impl ImageBuffer {
    pub fn new(width: u32, height: u32, channels: u8, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidGeometry(format!(
                "empty image {width}x{height}"
            )));
        }
        if channels != 1 && channels != 3 {
            return Err(Error::InvalidGeometry(format!(
                "{channels} channels (expected 1 or 3)"
            )));
        }
        let expected = width as usize * height as usize * channels as usize;
        if data.len() != expected {
            return Err(Error::InvalidGeometry(format!(
                "{} samples for {width}x{height}x{channels} (expected {expected})",
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            channels,
            data,
        })
    }

    /// Constant-filled image, handy for tests and the crop attack.
    pub fn filled(width: u32, height: u32, channels: u8, value: u8) -> Result<Self> {
        let len = width as usize * height as usize * channels as usize;
        Self::new(width, height, channels, vec![value; len])
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn channels(&self) -> u8 {
        self.channels
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [u8] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    #[inline]
    fn index(&self, x: u32, y: u32, c: u8) -> usize {
        (y as usize * self.width as usize + x as usize) * self.channels as usize + c as usize
    }

    /// Sample at column `x`, row `y`, channel `c`.
    #[inline]
    pub fn sample(&self, x: u32, y: u32, c: u8) -> u8 {
        self.data[self.index(x, y, c)]
    }

    #[inline]
    pub fn set_sample(&mut self, x: u32, y: u32, c: u8, value: u8) {
        let i = self.index(x, y, c);
        self.data[i] = value;
    }

    /// Decodes a PNG, BMP, or JPEG file. Grayscale files yield `channels = 1`;
    /// anything with color (including palette and alpha variants) yields RGB.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let dynamic = image::open(path).map_err(|e| Error::Unreadable {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })?;
        Ok(Self::from_dynamic(dynamic))
    }

    /// Decodes an in-memory encoded image (used by the JPEG attack).
    pub fn decode(bytes: &[u8]) -> Result<Self> {
        let dynamic = image::load_from_memory(bytes).map_err(|e| Error::Unreadable {
            path: "<memory>".into(),
            reason: e.to_string(),
        })?;
        Ok(Self::from_dynamic(dynamic))
    }

    fn from_dynamic(dynamic: image::DynamicImage) -> Self {
        if dynamic.color().has_color() {
            let rgb = dynamic.to_rgb8();
            let (w, h) = rgb.dimensions();
            Self {
                width: w,
                height: h,
                channels: 3,
                data: rgb.into_raw(),
            }
        } else {
            let gray = dynamic.to_luma8();
            let (w, h) = gray.dimensions();
            Self {
                width: w,
                height: h,
                channels: 1,
                data: gray.into_raw(),
            }
        }
    }

    /// Writes the image as PNG regardless of the path's extension; watermarked
    /// output must never be re-compressed lossily by accident.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let err = |e: String| Error::Unwritable {
            path: path.to_path_buf(),
            reason: e,
        };
        let file = std::fs::File::create(path).map_err(|e| err(e.to_string()))?;
        let mut writer = std::io::BufWriter::new(file);
        let color = match self.channels {
            1 => image::ExtendedColorType::L8,
            _ => image::ExtendedColorType::Rgb8,
        };
        image::write_buffer_with_format(
            &mut writer,
            &self.data,
            self.width,
            self.height,
            color,
            image::ImageFormat::Png,
        )
        .map_err(|e| err(e.to_string()))
    }

    /// The single channel of a grayscale image as a real-valued plane.
    pub fn intensity_plane(&self) -> Result<ImagePlane> {
        if self.channels != 1 {
            return Err(Error::InvalidGeometry(
                "intensity plane requires a 1-channel image".into(),
            ));
        }
        Ok(ImagePlane {
            width: self.width as usize,
            height: self.height as usize,
            data: self.data.iter().map(|&v| v as f64).collect(),
        })
    }

    /// One channel of an RGB image as a real-valued plane.
    pub fn channel_plane(&self, c: u8) -> Result<ImagePlane> {
        if c >= self.channels {
            return Err(Error::InvalidGeometry(format!(
                "channel {c} of a {}-channel image",
                self.channels
            )));
        }
        let n = self.width as usize * self.height as usize;
        let step = self.channels as usize;
        let mut data = Vec::with_capacity(n);
        data.extend(
            self.data[c as usize..]
                .iter()
                .step_by(step)
                .map(|&v| v as f64),
        );
        Ok(ImagePlane {
            width: self.width as usize,
            height: self.height as usize,
            data,
        })
    }
}

/// One real-valued channel (intensity, Y, Cb, Cr, or a single RGB component).
#[derive(Debug, Clone, PartialEq)]
pub struct ImagePlane {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl ImagePlane {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::InvalidGeometry(format!(
                "{} samples for a {width}x{height} plane",
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn zeroed(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            data: vec![0.0; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: f64) {
        self.data[y * self.width + x] = v;
    }

    /// Extends the plane to width and height that are multiples of 8 by
    /// replicating the last column and row. No-op when already aligned.
    pub fn extended(&self) -> ImagePlane {
        let new_w = self.width.div_ceil(8) * 8;
        let new_h = self.height.div_ceil(8) * 8;
        if new_w == self.width && new_h == self.height {
            return self.clone();
        }
        let mut out = ImagePlane::zeroed(new_w, new_h);
        for y in 0..new_h {
            let sy = y.min(self.height - 1);
            for x in 0..new_w {
                let sx = x.min(self.width - 1);
                out.set(x, y, self.get(sx, sy));
            }
        }
        out
    }

    /// Cuts the plane back down to `width x height` (inverse of [`extended`]
    /// for the retained region).
    pub fn cropped(&self, width: usize, height: usize) -> Result<ImagePlane> {
        if width > self.width || height > self.height {
            return Err(Error::InvalidGeometry(format!(
                "crop {width}x{height} from {}x{}",
                self.width, self.height
            )));
        }
        let mut out = ImagePlane::zeroed(width, height);
        for y in 0..height {
            for x in 0..width {
                out.set(x, y, self.get(x, y));
            }
        }
        Ok(out)
    }

    /// Splits an 8-aligned plane into 8x8 blocks in raster-scan order.
    pub fn partition(&self) -> Result<BlockGrid> {
        if !self.width.is_multiple_of(8) || !self.height.is_multiple_of(8) {
            return Err(Error::UnalignedPlane {
                width: self.width,
                height: self.height,
            });
        }
        let blocks_x = self.width / 8;
        let blocks_y = self.height / 8;
        let mut blocks = Vec::with_capacity(blocks_x * blocks_y);
        for by in 0..blocks_y {
            for bx in 0..blocks_x {
                let mut b = dct::ZERO_BLOCK;
                for (i, row) in b.iter_mut().enumerate() {
                    let y = by * 8 + i;
                    let base = y * self.width + bx * 8;
                    row.copy_from_slice(&self.data[base..base + 8]);
                }
                blocks.push(b);
            }
        }
        Ok(BlockGrid {
            blocks_x,
            blocks_y,
            blocks,
        })
    }

    /// Rounds half-up, clamps to `[0, 255]`, and packs into a grayscale image.
    pub fn to_gray_image(&self) -> Result<ImageBuffer> {
        let data = self.data.iter().map(|&v| quantize_sample(v)).collect();
        ImageBuffer::new(self.width as u32, self.height as u32, 1, data)
    }
}

/// Rounds half-up and clamps to the 8-bit range.
#[inline]
pub fn quantize_sample(v: f64) -> u8 {
    (v + 0.5).floor().clamp(0.0, 255.0) as u8
}

/// 8x8 blocks of a plane in raster-scan order: block `n` covers rows
/// `8 * (n / blocks_x)..` and columns `8 * (n % blocks_x)..`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockGrid {
    blocks_x: usize,
    blocks_y: usize,
    blocks: Vec<Block>,
}

impl BlockGrid {
    pub fn blocks_x(&self) -> usize {
        self.blocks_x
    }

    pub fn blocks_y(&self) -> usize {
        self.blocks_y
    }

    /// Total number of blocks (plane area / 64).
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn blocks_mut(&mut self) -> &mut [Block] {
        &mut self.blocks
    }

    #[inline]
    pub fn block(&self, bx: usize, by: usize) -> &Block {
        &self.blocks[by * self.blocks_x + bx]
    }

    #[inline]
    pub fn block_mut(&mut self, bx: usize, by: usize) -> &mut Block {
        &mut self.blocks[by * self.blocks_x + bx]
    }

    /// Reassembles the plane; exact inverse of [`ImagePlane::partition`].
    pub fn assemble(&self) -> ImagePlane {
        let width = self.blocks_x * 8;
        let height = self.blocks_y * 8;
        let mut out = ImagePlane::zeroed(width, height);
        for by in 0..self.blocks_y {
            for bx in 0..self.blocks_x {
                let b = self.block(bx, by);
                for (i, row) in b.iter().enumerate() {
                    let y = by * 8 + i;
                    let base = y * width + bx * 8;
                    out.data[base..base + 8].copy_from_slice(row);
                }
            }
        }
        out
    }

    /// Forward DCT of every block.
    pub fn to_dct(&self) -> BlockGrid {
        BlockGrid {
            blocks_x: self.blocks_x,
            blocks_y: self.blocks_y,
            blocks: self.blocks.iter().map(dct::dct2d).collect(),
        }
    }

    /// Inverse DCT of every block.
    pub fn to_spatial(&self) -> BlockGrid {
        BlockGrid {
            blocks_x: self.blocks_x,
            blocks_y: self.blocks_y,
            blocks: self.blocks.iter().map(dct::idct2d).collect(),
        }
    }
}

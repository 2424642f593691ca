//! Deterministic synthetic fixtures shared by the integration tests.
//!
//! The benchmark covers are built from flat rectilinear patches plus a
//! tiled dither pattern, which gives them the structure the embedding
//! pipeline cares about:
//!
//! * Patch interiors are flat, so within a block the only texture is the
//!   dither tile. The tile is mirror-symmetric in both axes with period 8,
//!   which makes its c01, c10, and c11 components exactly zero: interior
//!   blocks skip those positions instead of carrying fragile bits.
//! * The tile holds the 16 values -8..=7, each hitting a distinct residue
//!   mod 16, so coarse 16-level quantization produces a near-constant block
//!   mean error instead of random DC noise.
//! * Patch boundaries are axis-aligned with luma contrasts of roughly 50 or
//!   more, so boundary blocks carry low-frequency coefficients far above
//!   both the skip threshold and JPEG quantization error.
//! * Bright patches are kept to a minority share: squared-intensity drives
//!   the DC embedding distortion, and a dark-leaning mix keeps the
//!   invisible watermark above 40 dB PSNR at default strengths.

#![allow(dead_code)]

use std::sync::OnceLock;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dctmark::image::ImageBuffer;
use dctmark::invisible::BinaryWatermark;

pub const BENCH_SIZE: u32 = 512;

/// Mirror-symmetric 8x8 dither tile, stored as its 4x4 core. The snake
/// ordering keeps the field smooth, so median filtering barely disturbs it.
const DITHER_CORE: [[i32; 4]; 4] = [
    [-8, -7, -6, -5],
    [-1, -2, -3, -4],
    [0, 1, 2, 3],
    [7, 6, 5, 4],
];

fn dither(x: u32, y: u32) -> i32 {
    let mx = (x % 8).min(7 - x % 8) as usize;
    let my = (y % 8).min(7 - y % 8) as usize;
    DITHER_CORE[my][mx]
}

/// Flat patch colors; comments give the BT.601 luma each one lands on.
const PALETTE: [[i32; 3]; 6] = [
    [40, 52, 80],    // deep teal, luma 52
    [95, 105, 60],   // olive, luma 97
    [130, 62, 45],   // rust, luma 80
    [120, 150, 190], // sky, luma 146
    [110, 70, 120],  // plum, luma 88
    [165, 140, 105], // sand, luma 143
];

fn render(width: u32, height: u32, patch: impl Fn(u32, u32) -> usize) -> ImageBuffer {
    let mut data = Vec::with_capacity((width * height * 3) as usize);
    for y in 0..height {
        for x in 0..width {
            let color = PALETTE[patch(x, y)];
            let d = dither(x, y);
            for c in color {
                data.push((c + d).clamp(0, 255) as u8);
            }
        }
    }
    ImageBuffer::new(width, height, 3, data).expect("fixture geometry is valid")
}

/// Horizontal bands of alternating dark and bright patches, with vertical
/// seams every 160 columns shifting the phase so both edge directions occur.
fn terraces() -> ImageBuffer {
    const BANDS: [(u32, usize); 4] = [(84, 0), (36, 3), (84, 2), (36, 5)];
    const CYCLE: u32 = 240;
    render(BENCH_SIZE, BENCH_SIZE, |x, y| {
        let phase = (y + (x / 160) * 42) % CYCLE;
        let mut acc = 0;
        for (h, idx) in BANDS {
            acc += h;
            if phase < acc {
                return idx;
            }
        }
        BANDS[0].1
    })
}

/// Bright rectangles staggered over a dark background.
fn panels() -> ImageBuffer {
    render(BENCH_SIZE, BENCH_SIZE, |x, y| {
        let row = y / 84;
        let within_y = y % 84;
        if within_y >= 52 {
            return 0;
        }
        let stagger = (row * 53) % 97;
        let phase = (x + stagger) % 130;
        let width = if row % 2 == 0 { 76 } else { 44 };
        if phase < width {
            if (row + phase / width) % 2 == 0 {
                3
            } else {
                5
            }
        } else {
            0
        }
    })
}

/// Irregular rectilinear mosaic, mostly dark tiles with bright accents.
fn mosaic() -> ImageBuffer {
    const ROW_HEIGHTS: [u32; 4] = [60, 76, 52, 68];
    const TILE_WIDTHS: [u32; 5] = [68, 84, 60, 92, 76];
    let row_of = |y: u32| {
        let cycle: u32 = ROW_HEIGHTS.iter().sum();
        let mut phase = y % cycle;
        let mut row = (y / cycle) * 4;
        for h in ROW_HEIGHTS {
            if phase < h {
                break;
            }
            phase -= h;
            row += 1;
        }
        row
    };
    let col_of = |x: u32, row: u32| {
        let cycle: u32 = TILE_WIDTHS.iter().sum();
        let shifted = x + (row * 37) % cycle;
        let mut phase = shifted % cycle;
        let mut col = (shifted / cycle) * 5;
        for w in TILE_WIDTHS {
            if phase < w {
                break;
            }
            phase -= w;
            col += 1;
        }
        col
    };
    render(BENCH_SIZE, BENCH_SIZE, |x, y| {
        let row = row_of(y);
        let col = col_of(x, row);
        // Even columns stay deep teal; odd columns alternate plum and sky,
        // so every tile boundary keeps a usable luma step.
        if col % 2 == 0 {
            0
        } else if (row + col / 2) % 2 == 0 {
            4
        } else {
            3
        }
    })
}

/// Concentric-square staircases and two beams over a mid-dark background.
fn staircase() -> ImageBuffer {
    const CENTERS: [(i64, i64); 3] = [(320, 170), (150, 330), (390, 370)];
    render(BENCH_SIZE, BENCH_SIZE, |x, y| {
        let (x, y) = (x as i64, y as i64);
        for (cx, cy) in CENTERS {
            let ring = (x - cx).abs().max((y - cy).abs());
            if ring < 72 {
                return if (ring / 24) % 2 == 0 { 3 } else { 0 };
            }
        }
        if (44..60).contains(&y) || (468..484).contains(&y) {
            return 5;
        }
        2
    })
}

/// A bordered checkerboard logo with strong interior contrast.
fn logo() -> ImageBuffer {
    const INK: [i32; 3] = [190, 60, 45]; // luma 97
    const PAPER: [i32; 3] = [230, 190, 90]; // luma 190
    const FRAME: [i32; 3] = [40, 40, 46]; // luma 41
    let mut data = Vec::with_capacity(100 * 100 * 3);
    for y in 0..100u32 {
        for x in 0..100u32 {
            let border = x < 6 || y < 6 || x >= 94 || y >= 94;
            let color = if border {
                FRAME
            } else if ((x / 10) + (y / 10)) % 2 == 0 {
                INK
            } else {
                PAPER
            };
            for c in color {
                data.push(c as u8);
            }
        }
    }
    ImageBuffer::new(100, 100, 3, data).expect("fixture geometry is valid")
}

/// 96x96 random payload rendered as a black-and-white image.
fn mark_image() -> ImageBuffer {
    let bits = mark_bits();
    let data: Vec<u8> = bits
        .bits()
        .iter()
        .map(|&b| if b == 1 { 255 } else { 0 })
        .collect();
    ImageBuffer::new(96, 96, 1, data).expect("fixture geometry is valid")
}

/// The payload as bits; random but fixed by the seed.
pub fn mark_bits() -> BinaryWatermark {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let bits: Vec<u8> = (0..96 * 96).map(|_| (rng.next_u32() & 1) as u8).collect();
    BinaryWatermark::from_bits(96, 96, bits).expect("bit fixture is valid")
}

pub struct BenchSet {
    /// Four named 512x512 RGB covers in distinct layouts.
    pub covers: Vec<(&'static str, ImageBuffer)>,
    /// 100x100 color logo for visible embedding.
    pub logo: ImageBuffer,
    /// 96x96 binary payload as a gray image (values 0 and 255).
    pub mark: ImageBuffer,
}

pub fn bench_set() -> &'static BenchSet {
    static SET: OnceLock<BenchSet> = OnceLock::new();
    SET.get_or_init(|| BenchSet {
        covers: vec![
            ("terraces", terraces()),
            ("panels", panels()),
            ("mosaic", mosaic()),
            ("staircase", staircase()),
        ],
        logo: logo(),
        mark: mark_image(),
    })
}

/// A small cover with the same flat-patch plus dither structure, for tests
/// that exercise plumbing rather than robustness.
pub fn small_cover(width: u32, height: u32) -> ImageBuffer {
    render(width, height, |x, y| {
        let bands = [(20u32, 0usize), (14, 3), (22, 2), (16, 5)];
        let phase = (y + (x / 40) * 13) % 72;
        let mut acc = 0;
        for (h, idx) in bands {
            acc += h;
            if phase < acc {
                return idx;
            }
        }
        0
    })
}

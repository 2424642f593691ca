//! Orthonormal 8x8 two-dimensional DCT-II and its inverse.
//!
//! The orthonormal convention is used throughout the crate: the basis row for
//! frequency `u` is `a(u) * cos((2x + 1) u pi / 16)` with `a(0) = sqrt(1/8)`
//! and `a(u) = 1/2` otherwise. Under this convention the transform is an
//! isometry (coefficient energy equals pixel energy) and the DC coefficient
//! equals `8 * mean(block)`, which the statistics module relies on.

use std::sync::OnceLock;

/// One 8x8 block, spatial samples or DCT coefficients depending on context.
/// Entry `[i][j]` is row `i`, column `j`; coefficient `(0, 0)` is the DC term.
pub type Block = [[f64; 8]; 8];

/// An all-zero block.
pub const ZERO_BLOCK: Block = [[0.0; 8]; 8];

fn basis() -> &'static Block {
    static BASIS: OnceLock<Block> = OnceLock::new();
    BASIS.get_or_init(|| {
        let mut m = ZERO_BLOCK;
        for (u, row) in m.iter_mut().enumerate() {
            let scale = if u == 0 { (1.0f64 / 8.0).sqrt() } else { 0.5 };
            for (x, v) in row.iter_mut().enumerate() {
                *v =
                    scale * ((2.0 * x as f64 + 1.0) * u as f64 * std::f64::consts::PI / 16.0).cos();
            }
        }
        m
    })
}

/// `out = a * b` for 8x8 matrices.
fn matmul(a: &Block, b: &Block) -> Block {
    let mut out = ZERO_BLOCK;
    for i in 0..8 {
        for k in 0..8 {
            let aik = a[i][k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..8 {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

fn transpose(a: &Block) -> Block {
    let mut out = ZERO_BLOCK;
    for (i, row) in a.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            out[j][i] = *v;
        }
    }
    out
}

/// Forward 2D DCT: `C = M * B * M^T`.
pub fn dct2d(block: &Block) -> Block {
    let m = basis();
    matmul(&matmul(m, block), &transpose(m))
}

/// Inverse 2D DCT: `B = M^T * C * M`. Exact inverse of [`dct2d`] up to
/// floating-point round-off (well below 1e-9 for 8-bit-range samples).
pub fn idct2d(coeffs: &Block) -> Block {
    let m = basis();
    matmul(&matmul(&transpose(m), coeffs), m)
}

//! Volumes of images of the unit ball.

use rayon::prelude::*;

use super::geometry::Contraction;
use super::lemmas::kappa;

/// `H^n(ψ_B(B^n)) = b κ_n` for the chord-midpoint map: the image of the
/// unit ball is an ellipsoid with one semi-axis `b`.
pub fn image_volume_brock(b: f64, n: usize) -> f64 {
    b * kappa(n)
}

/// Voxel estimates of `H^n(ψ(B^n))` at two resolutions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoxelVolume {
    pub h: f64,
    pub coarse: f64,
    pub fine: f64,
    pub samples_coarse: u64,
    pub samples_fine: u64,
}

impl VoxelVolume {
    /// Relative errors `(coarse, fine)` against `reference`.
    pub fn relative_errors(&self, reference: f64) -> (f64, f64) {
        (
            (self.coarse - reference).abs() / reference,
            (self.fine - reference).abs() / reference,
        )
    }
}

/// Target number of samples per voxel.
pub const SAMPLES_PER_VOXEL: f64 = 64.0;

/// Additive recurrence generator `α_d = φ_n^{-(d+1)}` where `φ_n` is the
/// positive root of `x^(n+1) = x + 1`.
fn r_sequence_alpha(n: usize) -> Vec<f64> {
    let mut g = 2.0f64;
    for _ in 0..64 {
        g = (1.0 + g).powf(1.0 / (n as f64 + 1.0));
    }
    (1..=n).map(|d| (1.0 / g).powi(d as i32)).collect()
}

/// Number of occupied voxels of side `h` hit by images of quasi-random
/// points of `B^n`, times `h^n`. The image lies in `B(ψ(0), 1)`, which
/// bounds the bitmap. `shift` rotates the point set.
pub fn image_volume_voxel<C: Contraction<f64>>(
    psi: &C,
    n: usize,
    h: f64,
    shift: f64,
) -> (f64, u64) {
    let per_axis = (2.0 / h).ceil() as usize + 3;
    let origin: Vec<f64> = psi
        .apply(&vec![0.0; n])
        .iter()
        .map(|c| c - 1.0 - h)
        .collect();
    let cells = per_axis.pow(n as u32);
    let cube_points = (SAMPLES_PER_VOXEL * f64::powi(2.0 / h, n as i32)).ceil() as u64;
    let alpha = r_sequence_alpha(n);
    let chunks = 64u64;
    let per_chunk = cube_points.div_ceil(chunks);
    let words = cells.div_ceil(64);
    let (bitmap, used) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut bits = vec![0u64; words];
            let mut used = 0u64;
            let start = c * per_chunk;
            let end = (start + per_chunk).min(cube_points);
            let mut x = vec![0.0; n];
            for i in start..end {
                let mut r2 = 0.0;
                for d in 0..n {
                    let u = (shift + alpha[d] * (i + 1) as f64).fract();
                    x[d] = 2.0 * u - 1.0;
                    r2 += x[d] * x[d];
                }
                if r2 > 1.0 {
                    continue;
                }
                used += 1;
                let y = psi.apply(&x);
                let mut idx = 0usize;
                let mut inside = true;
                for d in (0..n).rev() {
                    let k = ((y[d] - origin[d]) / h).floor();
                    if k < 0.0 || k >= per_axis as f64 {
                        inside = false;
                        break;
                    }
                    idx = idx * per_axis + k as usize;
                }
                if inside {
                    bits[idx / 64] |= 1 << (idx % 64);
                }
            }
            (bits, used)
        })
        .reduce(
            || (vec![0u64; words], 0),
            |(mut a, ua), (b, ub)| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x |= y);
                (a, ua + ub)
            },
        );
    let occupied: u64 = bitmap.iter().map(|w| w.count_ones() as u64).sum();
    (occupied as f64 * h.powi(n as i32), used)
}

/// [`image_volume_voxel`] at `h` and `h / 2`.
pub fn image_volume_refined<C: Contraction<f64>>(
    psi: &C,
    n: usize,
    h: f64,
    shift: f64,
) -> VoxelVolume {
    let (coarse, samples_coarse) = image_volume_voxel(psi, n, h, shift);
    let (fine, samples_fine) = image_volume_voxel(psi, n, h / 2.0, shift);
    VoxelVolume {
        h,
        coarse,
        fine,
        samples_coarse,
        samples_fine,
    }
}

//! Linear and rank filters on rasters.

use crate::error::{Error, Result};
use crate::imgproc::raster::{GrayImage, RealMap};

/// How samples outside the raster are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Border {
    /// Replicate the nearest edge pixel.
    #[default]
    Clamp,
    /// Treat everything outside as zero.
    Zero,
}

/// Odd-sized convolution kernel anchored at its geometric center.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    width: usize,
    height: usize,
    weights: Vec<f64>,
}

impl Kernel {
    pub fn new(width: usize, height: usize, weights: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 || width % 2 == 0 || height % 2 == 0 {
            return Err(Error::InvalidParameter(format!(
                "kernel dimensions must be odd and positive, got {width}x{height}"
            )));
        }
        if weights.len() != width * height {
            return Err(Error::DimensionMismatch(format!(
                "{width}x{height} kernel needs {} weights, got {}",
                width * height,
                weights.len()
            )));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidParameter("kernel weights must be finite".into()));
        }
        Ok(Self {
            width,
            height,
            weights,
        })
    }

    pub fn identity() -> Self {
        Self {
            width: 1,
            height: 1,
            weights: vec![1.0],
        }
    }

    /// Outer product `column · rowᵀ`.
    pub fn outer(column: &[f64], row: &[f64]) -> Result<Self> {
        let weights = column
            .iter()
            .flat_map(|&c| row.iter().map(move |&r| c * r))
            .collect();
        Self::new(row.len(), column.len(), weights)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Anchor as (column, row).
    pub fn anchor(&self) -> (usize, usize) {
        (self.width / 2, self.height / 2)
    }

    #[inline]
    pub fn at(&self, x: usize, y: usize) -> f64 {
        self.weights[y * self.width + x]
    }

    pub fn sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn transpose(&self) -> Self {
        let mut weights = Vec::with_capacity(self.weights.len());
        for x in 0..self.width {
            for y in 0..self.height {
                weights.push(self.at(x, y));
            }
        }
        Self {
            width: self.height,
            height: self.width,
            weights,
        }
    }

    /// Nonzero taps as (dx, dy, weight) offsets from the anchor.
    fn taps(&self) -> Vec<(isize, isize, f64)> {
        let (ax, ay) = self.anchor();
        let mut taps = Vec::new();
        for y in 0..self.height {
            for x in 0..self.width {
                let w = self.at(x, y);
                if w != 0.0 {
                    taps.push((x as isize - ax as isize, y as isize - ay as isize, w));
                }
            }
        }
        taps
    }
}

/// True 2-D convolution: `out(p) = Σ_d K(d) · in(p − d)`.
pub fn convolve2d(map: &RealMap, kernel: &Kernel, border: Border) -> Result<RealMap> {
    if kernel.width() > map.width() || kernel.height() > map.height() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} kernel exceeds {}x{} image",
            kernel.width(),
            kernel.height(),
            map.width(),
            map.height()
        )));
    }
    let taps = kernel.taps();
    let (w, h) = (map.width() as isize, map.height() as isize);
    Ok(RealMap::par_from_rows(map.width(), map.height(), |y, row| {
        let y = y as isize;
        for (x, out) in row.iter_mut().enumerate() {
            let x = x as isize;
            let mut acc = 0.0;
            for &(dx, dy, k) in &taps {
                let (sx, sy) = (x - dx, y - dy);
                let v = if sx >= 0 && sy >= 0 && sx < w && sy < h {
                    map.at(sx as usize, sy as usize)
                } else {
                    match border {
                        Border::Clamp => map.at_clamped(sx, sy),
                        Border::Zero => 0.0,
                    }
                };
                acc += k * v;
            }
            *out = acc;
        }
    }))
}

/// Normalized 1-D Gaussian truncated at radius `ceil(3σ)`.
pub fn gaussian_kernel_1d(sigma: f64) -> Result<Vec<f64>> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "gaussian sigma must be positive, got {sigma}"
        )));
    }
    let radius = (3.0 * sigma).ceil() as isize;
    let mut taps: Vec<f64> = (-radius..=radius)
        .map(|i| (-(i * i) as f64 / (2.0 * sigma * sigma)).exp())
        .collect();
    let total: f64 = taps.iter().sum();
    taps.iter_mut().for_each(|t| *t /= total);
    Ok(taps)
}

pub fn gaussian_blur(map: &RealMap, sigma: f64) -> Result<RealMap> {
    gaussian_blur_with_border(map, sigma, Border::Clamp)
}

pub fn gaussian_blur_with_border(map: &RealMap, sigma: f64, border: Border) -> Result<RealMap> {
    let taps = gaussian_kernel_1d(sigma)?;
    let rows = separable_pass(map, &taps, border, Axis::Horizontal);
    Ok(separable_pass(&rows, &taps, border, Axis::Vertical))
}

#[derive(Clone, Copy)]
enum Axis {
    Horizontal,
    Vertical,
}

// The Gaussian is symmetric, so correlation and convolution coincide.
fn separable_pass(map: &RealMap, taps: &[f64], border: Border, axis: Axis) -> RealMap {
    let radius = (taps.len() / 2) as isize;
    let (w, h) = (map.width() as isize, map.height() as isize);
    RealMap::par_from_rows(map.width(), map.height(), |y, row| {
        let y = y as isize;
        for (x, out) in row.iter_mut().enumerate() {
            let x = x as isize;
            let mut acc = 0.0;
            for (i, &t) in taps.iter().enumerate() {
                let d = i as isize - radius;
                let (sx, sy) = match axis {
                    Axis::Horizontal => (x + d, y),
                    Axis::Vertical => (x, y + d),
                };
                let v = if sx >= 0 && sy >= 0 && sx < w && sy < h {
                    map.at(sx as usize, sy as usize)
                } else {
                    match border {
                        Border::Clamp => map.at_clamped(sx, sy),
                        Border::Zero => 0.0,
                    }
                };
                acc += t * v;
            }
            *out = acc;
        }
    })
}

/// Offsets of the circular structuring element: pixels within Euclidean
/// distance `radius` of the origin, in scan order.
pub fn disk_offsets(radius: usize) -> Vec<(isize, isize)> {
    let r = radius as isize;
    let r2 = r * r;
    let mut offsets = Vec::new();
    for dy in -r..=r {
        for dx in -r..=r {
            if dx * dx + dy * dy <= r2 {
                offsets.push((dx, dy));
            }
        }
    }
    offsets
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rank {
    Min,
    Median,
    Max,
}

/// Order-statistic filter over a clamped circular neighborhood.
pub fn rank_filter(image: &GrayImage, radius: usize, rank: Rank) -> Result<GrayImage> {
    if radius < 1 {
        return Err(Error::InvalidParameter("rank filter radius must be >= 1".into()));
    }
    let offsets = disk_offsets(radius);
    let mid = offsets.len() / 2;
    Ok(GrayImage::par_from_rows(image.width(), image.height(), |y, row| {
        let mut window = Vec::with_capacity(offsets.len());
        for (x, out) in row.iter_mut().enumerate() {
            let neighborhood = offsets
                .iter()
                .map(|&(dx, dy)| image.at_clamped(x as isize + dx, y as isize + dy));
            *out = match rank {
                Rank::Min => neighborhood.min().unwrap_or(0),
                Rank::Max => neighborhood.max().unwrap_or(0),
                Rank::Median => {
                    window.clear();
                    window.extend(neighborhood);
                    *window.select_nth_unstable(mid).1
                }
            };
        }
    }))
}

/// Affine map sending min → `out_lo` and max → `out_hi`. A constant map
/// becomes constant `out_lo`.
pub fn rescale_linear(map: &RealMap, out_lo: f64, out_hi: f64) -> RealMap {
    let (lo, hi) = map.min_max();
    let span = hi - lo;
    if !(span > 0.0) {
        return map.map(|_| out_lo);
    }
    let scale = (out_hi - out_lo) / span;
    map.map(|&v| out_lo + (v - lo) * scale)
}

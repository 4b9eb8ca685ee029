use rayon::prelude::*;

use crate::error::{Error, Result};

/// Row-major raster with positive dimensions. `x` indexes columns, `y` rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Raster<T> {
    width: usize,
    height: usize,
    data: Vec<T>,
}

/// 8-bit grayscale image.
pub type GrayImage = Raster<u8>;
/// Real-valued intermediate map (filter responses, blurred weights).
pub type RealMap = Raster<f64>;
/// Boolean mask; serialized as 0/255.
pub type BinaryMask = Raster<bool>;

impl<T> Raster<T> {
    pub fn from_vec(width: usize, height: usize, data: Vec<T>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidParameter(format!(
                "raster dimensions must be positive, got {width}x{height}"
            )));
        }
        let len = width.checked_mul(height).ok_or(Error::DimensionOverflow)?;
        if data.len() != len {
            return Err(Error::DimensionMismatch(format!(
                "{width}x{height} raster needs {len} values, got {}",
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    /// Builds a raster from a per-pixel function `f(x, y)`.
    ///
    /// Panics if either dimension is zero.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        assert!(width > 0 && height > 0, "raster dimensions must be positive");
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            data,
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn data(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize) -> usize {
        debug_assert!(x < self.width && y < self.height);
        y * self.width + x
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> &T {
        &self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: T) {
        let i = self.index(x, y);
        self.data[i] = value;
    }

    #[inline]
    pub fn row(&self, y: usize) -> &[T] {
        &self.data[y * self.width..(y + 1) * self.width]
    }

    pub fn same_dims<U>(&self, other: &Raster<U>) -> bool {
        self.width == other.width && self.height == other.height
    }

    pub fn ensure_same_dims<U>(&self, other: &Raster<U>, what: &str) -> Result<()> {
        if self.same_dims(other) {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "{what}: {}x{} vs {}x{}",
                self.width, self.height, other.width, other.height
            )))
        }
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Raster<U> {
        Raster {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn zip_map<U, V>(&self, other: &Raster<U>, mut f: impl FnMut(&T, &U) -> V) -> Raster<V> {
        assert!(self.same_dims(other), "zip_map on rasters of different size");
        Raster {
            width: self.width,
            height: self.height,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }
}

impl<T: Clone> Raster<T> {
    /// Panics if either dimension is zero.
    pub fn filled(width: usize, height: usize, value: T) -> Self {
        assert!(width > 0 && height > 0, "raster dimensions must be positive");
        Self {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for x in 0..self.width {
            for y in 0..self.height {
                data.push(self.get(x, y).clone());
            }
        }
        Self {
            width: self.height,
            height: self.width,
            data,
        }
    }
}

impl<T: Copy> Raster<T> {
    #[inline]
    pub fn at(&self, x: usize, y: usize) -> T {
        self.data[y * self.width + x]
    }

    /// Value at signed coordinates with edge replication.
    #[inline]
    pub fn at_clamped(&self, x: isize, y: isize) -> T {
        let xc = x.clamp(0, self.width as isize - 1) as usize;
        let yc = y.clamp(0, self.height as isize - 1) as usize;
        self.data[yc * self.width + xc]
    }

    #[inline]
    pub fn at_or(&self, x: isize, y: isize, outside: T) -> T {
        if x < 0 || y < 0 || x >= self.width as isize || y >= self.height as isize {
            outside
        } else {
            self.data[y as usize * self.width + x as usize]
        }
    }
}

impl<T: Send> Raster<T> {
    /// Builds a raster row by row in parallel. Each row depends only on its
    /// own index, so the result does not depend on the thread count.
    pub fn par_from_rows(
        width: usize,
        height: usize,
        fill: impl Fn(usize, &mut [T]) + Sync,
    ) -> Self
    where
        T: Default + Clone,
    {
        assert!(width > 0 && height > 0, "raster dimensions must be positive");
        let mut data = vec![T::default(); width * height];
        data.par_chunks_mut(width)
            .enumerate()
            .for_each(|(y, row)| fill(y, row));
        Self {
            width,
            height,
            data,
        }
    }
}

impl RealMap {
    pub fn from_gray(image: &GrayImage) -> Self {
        image.map(|&v| v as f64)
    }

    /// Rounds and clamps to [0, 255].
    pub fn to_gray(&self) -> GrayImage {
        self.map(|&v| v.round().clamp(0.0, 255.0) as u8)
    }

    pub fn from_mask(mask: &BinaryMask) -> Self {
        mask.map(|&b| if b { 1.0 } else { 0.0 })
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.data
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }
}

impl BinaryMask {
    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    pub fn any(&self) -> bool {
        self.data.iter().any(|&b| b)
    }

    pub fn and(&self, other: &BinaryMask) -> BinaryMask {
        self.zip_map(other, |&a, &b| a && b)
    }

    pub fn or(&self, other: &BinaryMask) -> BinaryMask {
        self.zip_map(other, |&a, &b| a || b)
    }

    pub fn not(&self) -> BinaryMask {
        self.map(|&a| !a)
    }

    pub fn to_gray(&self) -> GrayImage {
        self.map(|&b| if b { 255 } else { 0 })
    }

    /// Nonzero pixels become true.
    pub fn from_gray(image: &GrayImage) -> Self {
        image.map(|&v| v != 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_dimensions() {
        assert!(GrayImage::from_vec(0, 3, vec![]).is_err());
        assert!(GrayImage::from_vec(2, 2, vec![0; 3]).is_err());
        assert!(GrayImage::from_vec(2, 2, vec![0; 4]).is_ok());
    }

    #[test]
    fn transpose_swaps_axes() {
        let r = Raster::from_fn(3, 2, |x, y| x + 10 * y);
        let t = r.transpose();
        assert_eq!((t.width(), t.height()), (2, 3));
        for y in 0..2 {
            for x in 0..3 {
                assert_eq!(r.at(x, y), t.at(y, x));
            }
        }
        assert_eq!(t.transpose(), r);
    }

    #[test]
    fn clamped_access_replicates_edges() {
        let r = Raster::from_fn(2, 2, |x, y| (x + 2 * y) as i32);
        assert_eq!(r.at_clamped(-5, 0), 0);
        assert_eq!(r.at_clamped(9, 9), 3);
        assert_eq!(r.at_or(-1, 0, 42), 42);
    }
}

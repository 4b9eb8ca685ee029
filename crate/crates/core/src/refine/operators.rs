use num_complex::Complex64;

use super::pattern::CirclePattern;
use crate::error::{Error, Result};
use crate::imgproc::{BinaryMask, RealMap};
use crate::orientation::{canonical, conjugate_field, DoubledSampler, OrientationField};
use crate::params::{PipelineParams, WeightNorm};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// How circle weights are normalized and when they count as degenerate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weighting {
    pub norm: WeightNorm,
    pub epsilon: f64,
}

impl Default for Weighting {
    fn default() -> Self {
        Self {
            norm: WeightNorm::AbsoluteSum,
            epsilon: 1e-6,
        }
    }
}

impl Weighting {
    pub fn from_params(params: &PipelineParams) -> Self {
        Self {
            norm: params.weight_norm,
            epsilon: params.epsilon_w,
        }
    }

    /// Divides the numerators in place by their normalizer.
    pub fn normalize(&self, numerators: &mut [f64]) -> Result<()> {
        let normalizer = match self.norm {
            WeightNorm::AbsoluteSum => numerators.iter().map(|n| n.abs()).sum::<f64>(),
            WeightNorm::SignedSum => numerators.iter().sum::<f64>(),
        };
        if normalizer.abs() < self.epsilon {
            return Err(Error::DegenerateWeights(normalizer));
        }
        numerators.iter_mut().for_each(|n| *n /= normalizer);
        Ok(())
    }
}

/// Relaxation strength for the adjuster.
#[derive(Debug, Clone, Copy)]
pub enum Strength<'a> {
    Uniform(f64),
    PerPixel(&'a RealMap),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DriftMode {
    /// Weights from the cosine against the radial direction.
    Tangent,
    /// Weights from the sine against the radial direction.
    Normal,
}

#[inline]
fn sgn(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Unit vector of `z`, zero for zero.
#[inline]
fn unit(z: Complex64) -> Complex64 {
    let m = z.norm();
    if m == 0.0 {
        ZERO
    } else {
        z / m
    }
}

/// Combines F and G in squared space with relaxation `s`; the magnitude is
/// the larger of the two.
pub(crate) fn relax(f: Complex64, g: Complex64, s: f64) -> Complex64 {
    let magnitude = f.norm().max(g.norm());
    if magnitude == 0.0 {
        return ZERO;
    }
    let squared = f * f * (1.0 - s) + g * g * s;
    let direction = if squared.norm() > 0.0 {
        unit(canonical(squared.sqrt()))
    } else if f.norm() > 0.0 {
        unit(f)
    } else {
        unit(g)
    };
    canonical(direction * magnitude)
}

/// Circle samples and weight buffers for one pixel at a time.
pub(crate) struct PixelOps<'a> {
    pattern: &'a CirclePattern,
    weighting: Weighting,
    samples: Vec<Complex64>,
    units: Vec<Complex64>,
    w: Vec<f64>,
    aux: Vec<f64>,
}

impl<'a> PixelOps<'a> {
    pub(crate) fn new(pattern: &'a CirclePattern, weighting: Weighting) -> Self {
        let n = pattern.len();
        Self {
            pattern,
            weighting,
            samples: vec![ZERO; n],
            units: vec![ZERO; n],
            w: vec![0.0; n],
            aux: vec![0.0; n],
        }
    }

    /// Samples F(x + r_k).
    pub(crate) fn load(&mut self, sampler: &DoubledSampler, x: usize, y: usize) {
        let (xf, yf) = (x as f64, y as f64);
        for (k, &(dx, dy)) in self.pattern.offsets().iter().enumerate() {
            let v = sampler.at(xf + dx, yf + dy);
            self.samples[k] = v;
            self.units[k] = unit(v);
        }
    }

    fn radial_into(&self, out: &mut [f64], imaginary: bool) {
        let r = self.pattern.radius();
        for ((o, u), p) in out.iter_mut().zip(&self.units).zip(self.pattern.complex()) {
            let c = u * p.conj() / r;
            *o = if imaginary { c.im } else { c.re };
        }
    }

    /// Radial weights into `self.w`.
    pub(crate) fn radial(&mut self) -> Result<&[f64]> {
        let mut w = std::mem::take(&mut self.w);
        self.radial_into(&mut w, false);
        let res = self.weighting.normalize(&mut w);
        self.w = w;
        res.map(|_| self.w.as_slice())
    }

    /// Tangential weights into `self.aux`.
    pub(crate) fn tangential(&mut self) -> Result<&[f64]> {
        let mut v = std::mem::take(&mut self.aux);
        self.radial_into(&mut v, true);
        let res = self.weighting.normalize(&mut v);
        self.aux = v;
        res.map(|_| self.aux.as_slice())
    }

    /// Self weights anchored on `anchor`, into `self.aux`.
    pub(crate) fn self_weights(&mut self, anchor: Complex64) -> Result<&[f64]> {
        if anchor.norm() == 0.0 {
            return Err(Error::ZeroAnchor);
        }
        let a = unit(anchor).conj();
        for (o, u) in self.aux.iter_mut().zip(&self.units) {
            *o = (u * a).re;
        }
        self.weighting.normalize(&mut self.aux)?;
        Ok(&self.aux)
    }

    /// Σ sgn(sign_k) w_k² F_k, optionally rescaled by Σ w_k² under
    /// absolute-sum weights.
    fn signed_square_sum(&self, signs: &[f64], rescale: bool) -> Complex64 {
        let mut g = ZERO;
        let mut total = 0.0;
        for ((&s, &w), &f) in signs.iter().zip(&self.w).zip(&self.samples) {
            g += f * (sgn(s) * w * w);
            total += w * w;
        }
        match self.weighting.norm {
            WeightNorm::AbsoluteSum if rescale => g / total,
            _ => g,
        }
    }

    /// Adjuster at a loaded pixel whose own value is `f`.
    pub(crate) fn adjust(&mut self, f: Complex64, s: f64) -> Complex64 {
        if self.radial().is_err() {
            return f;
        }
        let g = self.signed_square_sum(&self.w, false);
        relax(f, g, s)
    }

    /// Smoother at a loaded pixel whose own value is `f`.
    pub(crate) fn smooth(&mut self, f: Complex64, s: f64) -> Complex64 {
        if self.radial().is_err() || self.self_weights(f).is_err() {
            return f;
        }
        let g = self.signed_square_sum(&self.aux, true);
        relax(f, g, s)
    }

    /// Drifter at a loaded pixel, before canonicalization.
    pub(crate) fn drift(&mut self, mode: DriftMode) -> Complex64 {
        let ok = match mode {
            DriftMode::Tangent => self.radial().is_ok(),
            DriftMode::Normal => self.tangential().is_ok(),
        };
        if !ok {
            return ZERO;
        }
        let weights = match mode {
            DriftMode::Tangent => &self.w,
            DriftMode::Normal => &self.aux,
        };
        weights.iter().zip(&self.samples).map(|(&w, &f)| f * w).sum()
    }

    /// |D_T| + |D_N| at a loaded pixel.
    pub(crate) fn drift_strength(&mut self) -> f64 {
        self.drift(DriftMode::Tangent).norm() + self.drift(DriftMode::Normal).norm()
    }
}

fn check_pixel(field: &OrientationField, x: usize, y: usize) -> Result<()> {
    if x >= field.width() || y >= field.height() {
        return Err(Error::OutOfBounds {
            x: x as f64,
            y: y as f64,
        });
    }
    Ok(())
}

fn point_ops<'a>(
    field: &OrientationField,
    x: usize,
    y: usize,
    pattern: &'a CirclePattern,
    weighting: Weighting,
) -> Result<PixelOps<'a>> {
    check_pixel(field, x, y)?;
    let mut ops = PixelOps::new(pattern, weighting);
    ops.load(&DoubledSampler::new(field), x, y);
    Ok(ops)
}

/// w_k at one pixel: cosine between each sample and its radial direction.
pub fn radial_weights(
    field: &OrientationField,
    (x, y): (usize, usize),
    pattern: &CirclePattern,
    weighting: Weighting,
) -> Result<Vec<f64>> {
    point_ops(field, x, y, pattern, weighting)?.radial().map(<[f64]>::to_vec)
}

/// v_k at one pixel: sine between each sample and its radial direction.
pub fn tangential_weights(
    field: &OrientationField,
    (x, y): (usize, usize),
    pattern: &CirclePattern,
    weighting: Weighting,
) -> Result<Vec<f64>> {
    point_ops(field, x, y, pattern, weighting)?.tangential().map(<[f64]>::to_vec)
}

/// u_k at one pixel: cosine between each sample and the pixel's own value.
pub fn self_weights(
    field: &OrientationField,
    (x, y): (usize, usize),
    pattern: &CirclePattern,
    weighting: Weighting,
) -> Result<Vec<f64>> {
    let anchor = field.at(x.min(field.width() - 1), y.min(field.height() - 1));
    point_ops(field, x, y, pattern, weighting)?.self_weights(anchor).map(<[f64]>::to_vec)
}

/// Circle operator evaluated on every pixel, in parallel over rows.
fn per_pixel(
    field: &OrientationField,
    pattern: &CirclePattern,
    weighting: Weighting,
    eval: impl Fn(&mut PixelOps, usize, usize, Complex64) -> Complex64 + Sync,
) -> OrientationField {
    let sampler = DoubledSampler::new(field);
    OrientationField::par_from_rows(field.width(), field.height(), |y, row| {
        let mut ops = PixelOps::new(pattern, weighting);
        for (x, out) in row.iter_mut().enumerate() {
            let f = field.at(x, y);
            ops.load(&sampler, x, y);
            *out = eval(&mut ops, x, y, f);
        }
    })
}

/// Rounds the field towards circular flow around loops. Pixels with
/// degenerate weights pass through unchanged.
pub fn adjuster(
    field: &OrientationField,
    pattern: &CirclePattern,
    strength: Strength,
    weighting: Weighting,
) -> Result<OrientationField> {
    if let Strength::PerPixel(map) = strength {
        field.ensure_same_dims(map, "adjuster strength")?;
    }
    Ok(per_pixel(field, pattern, weighting, |ops, x, y, f| {
        let s = match strength {
            Strength::Uniform(s) => s,
            Strength::PerPixel(map) => map.at(x, y),
        };
        ops.adjust(f, s)
    }))
}

/// Regularizes the field against its circular neighborhood. Pixels with
/// degenerate weights or zero magnitude pass through unchanged.
pub fn smoother(field: &OrientationField, pattern: &CirclePattern, s: f64, weighting: Weighting) -> OrientationField {
    per_pixel(field, pattern, weighting, |ops, _, _, f| ops.smooth(f, s))
}

/// Smoother evaluated only where `region` is true; elsewhere the input is
/// copied.
pub(crate) fn smoother_in(
    field: &OrientationField,
    pattern: &CirclePattern,
    s: f64,
    weighting: Weighting,
    region: &BinaryMask,
) -> OrientationField {
    let sampler = DoubledSampler::new(field);
    OrientationField::par_from_rows(field.width(), field.height(), |y, row| {
        let mut ops = PixelOps::new(pattern, weighting);
        for (x, out) in row.iter_mut().enumerate() {
            let f = field.at(x, y);
            *out = if region.at(x, y) {
                ops.load(&sampler, x, y);
                ops.smooth(f, s)
            } else {
                f
            };
        }
    })
}

/// Tangent- or normal-weighted sum of the circle samples. Degenerate pixels
/// are zero.
pub fn drifter(field: &OrientationField, pattern: &CirclePattern, mode: DriftMode, weighting: Weighting) -> OrientationField {
    per_pixel(field, pattern, weighting, |ops, _, _, _| canonical(ops.drift(mode)))
}

/// |D_T| + |D_N| at every pixel.
pub fn drift_strength(field: &OrientationField, pattern: &CirclePattern, weighting: Weighting) -> RealMap {
    let sampler = DoubledSampler::new(field);
    RealMap::par_from_rows(field.width(), field.height(), |y, row| {
        let mut ops = PixelOps::new(pattern, weighting);
        for (x, out) in row.iter_mut().enumerate() {
            ops.load(&sampler, x, y);
            *out = ops.drift_strength();
        }
    })
}

/// Half the difference of drift strengths between a field and its
/// conjugate: positive on loops, negative on deltas.
pub fn loop_delta_response(field: &OrientationField, pattern: &CirclePattern, weighting: Weighting) -> RealMap {
    let direct = drift_strength(field, pattern, weighting);
    let dual = drift_strength(&conjugate_field(field), pattern, weighting);
    direct.zip_map(&dual, |&a, &b| (a - b) * 0.5)
}

/// Adjuster, smoother and drifters at a single pixel.
pub mod point {
    use super::*;

    pub fn adjuster_at(
        field: &OrientationField,
        (x, y): (usize, usize),
        pattern: &CirclePattern,
        s: f64,
        weighting: Weighting,
    ) -> Result<Complex64> {
        Ok(point_ops(field, x, y, pattern, weighting)?.adjust(field.at(x, y), s))
    }

    pub fn smoother_at(
        field: &OrientationField,
        (x, y): (usize, usize),
        pattern: &CirclePattern,
        s: f64,
        weighting: Weighting,
    ) -> Result<Complex64> {
        Ok(point_ops(field, x, y, pattern, weighting)?.smooth(field.at(x, y), s))
    }

    /// Drifter value before canonicalization.
    pub fn drifter_at(
        field: &OrientationField,
        (x, y): (usize, usize),
        pattern: &CirclePattern,
        mode: DriftMode,
        weighting: Weighting,
    ) -> Result<Complex64> {
        Ok(point_ops(field, x, y, pattern, weighting)?.drift(mode))
    }
}

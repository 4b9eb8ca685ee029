//! Analytic orientation fields, ridge rendering and error metrics.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::imgproc::{BinaryMask, GrayImage, Raster};
use crate::orientation::{from_angle, phase, OrientationField};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularityKind {
    Loop,
    Delta,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Singularity {
    pub x: f64,
    pub y: f64,
    pub kind: SingularityKind,
}

impl Singularity {
    pub fn new(x: f64, y: f64, kind: SingularityKind) -> Self {
        Self { x, y, kind }
    }

    pub fn looping(x: f64, y: f64) -> Self {
        Self::new(x, y, SingularityKind::Loop)
    }

    pub fn delta(x: f64, y: f64) -> Self {
        Self::new(x, y, SingularityKind::Delta)
    }
}

/// Angular error statistics in degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorStats {
    pub mean_deg: f64,
    pub rmse_deg: f64,
    pub max_deg: f64,
    pub pixel_count: usize,
}

/// Field whose doubled angle is 2·base + Σ arg(z − loop) − Σ arg(z − delta).
/// Magnitude is one except at the pixel nearest each singularity.
pub fn synth_field(width: usize, height: usize, singularities: &[Singularity], base_angle: f64) -> Result<OrientationField> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidParameter("field dimensions must be positive".into()));
    }
    for (i, s) in singularities.iter().enumerate() {
        let inside = s.x >= 0.0 && s.y >= 0.0 && s.x <= (width - 1) as f64 && s.y <= (height - 1) as f64;
        if !inside {
            return Err(Error::InvalidParameter(format!("singularity at ({}, {}) lies outside the raster", s.x, s.y)));
        }
        if singularities[..i].iter().any(|o| (o.x - s.x).hypot(o.y - s.y) < 1e-9) {
            return Err(Error::InvalidParameter(format!("coincident singularities at ({}, {})", s.x, s.y)));
        }
    }
    let mut field = OrientationField::from_fn(width, height, |x, y| {
        let doubled = singularities.iter().fold(2.0 * base_angle, |acc, s| {
            let arg = (y as f64 - s.y).atan2(x as f64 - s.x);
            match s.kind {
                SingularityKind::Loop => acc + arg,
                SingularityKind::Delta => acc - arg,
            }
        });
        from_angle(doubled / 2.0, 1.0)
    });
    for s in singularities {
        field.set(s.x.round() as usize, s.y.round() as usize, Complex64::new(0.0, 0.0));
    }
    Ok(field)
}

/// Number of quantized orientations in the rendering filter bank.
const RENDER_ORIENTATIONS: usize = 64;

/// Zero-mean even Gabor kernel oscillating along the normal to `theta`, as
/// (dx, dy, weight) taps inside the 3σ ellipse of its envelope. The
/// envelope spreads period/2 across the ridges and a full period along
/// them, which keeps the orientation bandwidth narrow.
fn gabor(theta: f64, period: f64) -> Vec<(isize, isize, f64)> {
    let across = period / 2.0;
    let along = period;
    let radius = (3.0 * along).ceil() as isize;
    let (nx, ny) = (-theta.sin(), theta.cos());
    let mut taps = Vec::new();
    let mut envelope = Vec::new();
    for dy in -radius..=radius {
        for dx in -radius..=radius {
            let (xf, yf) = (dx as f64, dy as f64);
            let (u, t) = (xf * nx + yf * ny, xf * ny - yf * nx);
            let (a, b) = (u / across, t / along);
            if a * a + b * b > 9.0 {
                continue;
            }
            let g = (-(a * a + b * b) / 2.0).exp();
            taps.push((dx, dy, g * (2.0 * PI * u / period).cos()));
            envelope.push(g);
        }
    }
    // Remove the DC response so flat areas do not drift.
    let dc = taps.iter().map(|t| t.2).sum::<f64>() / envelope.iter().sum::<f64>();
    for (t, g) in taps.iter_mut().zip(&envelope) {
        t.2 -= dc * g;
    }
    taps
}

/// Ridge image following `field`: seeded noise filtered `iterations` times
/// by Gabor kernels tuned to the local orientation and `period`, then
/// rescaled to [0, 255]. Dark values are ridges.
pub fn render_ridges(field: &OrientationField, period: f64, seed: u64, iterations: usize) -> Result<GrayImage> {
    if !(period >= 4.0 && period.is_finite()) {
        return Err(Error::InvalidParameter(format!("period must be >= 4, got {period}")));
    }
    if iterations == 0 {
        return Err(Error::InvalidParameter("at least one filtering pass is required".into()));
    }
    let (w, h) = (field.width(), field.height());
    let pad = (3.0 * period).ceil() as usize;
    let stride = w + 2 * pad;
    // Taps as flat offsets into the padded buffer.
    let bank: Vec<Vec<(isize, f64)>> = (0..RENDER_ORIENTATIONS)
        .map(|k| {
            gabor(k as f64 * PI / RENDER_ORIENTATIONS as f64, period)
                .into_iter()
                .map(|(dx, dy, wt)| (dy * stride as isize + dx, wt))
                .collect()
        })
        .collect();
    let bins = field.map(|&z| {
        let b = (phase(z) / PI * RENDER_ORIENTATIONS as f64).round() as usize;
        b % RENDER_ORIENTATIONS
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = Raster::<f64>::from_fn(w, h, |_, _| rng.gen_range(-1.0..=1.0));
    for _ in 0..iterations {
        let padded: Vec<f64> = (0..h + 2 * pad)
            .flat_map(|py| {
                let current = &current;
                (0..stride).map(move |px| current.at_clamped(px as isize - pad as isize, py as isize - pad as isize))
            })
            .collect();
        let filtered = Raster::<f64>::par_from_rows(w, h, |y, row| {
            for (x, out) in row.iter_mut().enumerate() {
                let centre = ((y + pad) * stride + x + pad) as isize;
                *out = bank[bins.at(x, y)]
                    .iter()
                    .map(|&(offset, wt)| wt * padded[(centre + offset) as usize])
                    .sum();
            }
        });
        let peak = filtered.data().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let gain = if peak > 0.0 { 2.0 / peak } else { 0.0 };
        current = filtered.map(|v| (v * gain).clamp(-1.0, 1.0));
    }
    Ok(current.map(|v| ((v + 1.0) * 127.5).round().clamp(0.0, 255.0) as u8))
}

/// Replaces the phase of every pixel closer than `radius` to `center` by a
/// uniform random value in [0, π), keeping the magnitude.
pub fn corrupt_region(field: &OrientationField, center: (f64, f64), radius: f64, seed: u64) -> OrientationField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = field.clone();
    for y in 0..field.height() {
        for x in 0..field.width() {
            if (x as f64 - center.0).hypot(y as f64 - center.1) < radius {
                let theta = rng.gen_range(0.0..PI);
                out.set(x, y, from_angle(theta, field.at(x, y).norm()));
            }
        }
    }
    out
}

/// Angle between two orientations in degrees, in [0, 90].
pub fn orientation_difference_deg(a: Complex64, b: Complex64) -> f64 {
    let d = (phase(a) - phase(b)).abs();
    d.min(PI - d).to_degrees()
}

/// Error statistics over the true mask pixels where both fields are nonzero.
pub fn angular_error(a: &OrientationField, b: &OrientationField, mask: &BinaryMask) -> Result<ErrorStats> {
    a.ensure_same_dims(b, "compared field")?;
    a.ensure_same_dims(mask, "evaluation mask")?;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut max = 0.0f64;
    let mut count = 0usize;
    for ((za, zb), &m) in a.data().iter().zip(b.data()).zip(mask.data()) {
        if !m || za.norm() == 0.0 || zb.norm() == 0.0 {
            continue;
        }
        let e = orientation_difference_deg(*za, *zb);
        sum += e;
        sum_sq += e * e;
        max = max.max(e);
        count += 1;
    }
    if count == 0 {
        return Err(Error::EmptyMask);
    }
    Ok(ErrorStats {
        mean_deg: sum / count as f64,
        rmse_deg: (sum_sq / count as f64).sqrt(),
        max_deg: max,
        pixel_count: count,
    })
}

/// A synthetic fingerprint on a white card.
#[derive(Debug, Clone)]
pub struct SyntheticPrint {
    pub image: GrayImage,
    /// Generator field over the whole raster.
    pub field: OrientationField,
    /// Pixels covered by ridges.
    pub footprint: BinaryMask,
}

/// Loop-and-delta print inside an elliptical footprint, white elsewhere.
pub fn synthetic_print(width: usize, height: usize, period: f64, seed: u64) -> Result<SyntheticPrint> {
    let (w, h) = (width as f64, height as f64);
    let singularities = [
        Singularity::looping(0.5 * w + 0.3, 0.4 * h + 0.7),
        Singularity::delta(0.3 * w + 0.6, 0.72 * h + 0.2),
    ];
    let field = synth_field(width, height, &singularities, PI / 2.0)?;
    let ridges = render_ridges(&field, period, seed, 6)?;
    let (cx, cy) = (0.5 * w, 0.52 * h);
    let (ax, ay) = (0.34 * w, 0.4 * h);
    let footprint = BinaryMask::from_fn(width, height, |x, y| {
        let u = (x as f64 - cx) / ax;
        let v = (y as f64 - cy) / ay;
        u * u + v * v <= 1.0
    });
    let image = ridges.zip_map(&footprint, |&v, &inside| if inside { v } else { 255 });
    Ok(SyntheticPrint {
        image,
        field,
        footprint,
    })
}

use std::f64::consts::PI;
use std::io::{Read, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::imgproc::{gaussian_blur, Raster, RealMap};

/// Per-pixel orientation: the phase (kept in [0, π)) is the ridge angle
/// measured from the +x (column) axis towards +y (row), the magnitude is its
/// reliability.
pub type OrientationField = Raster<Complex64>;

const ORF_MAGIC: &[u8; 4] = b"ORF1";

/// Representative of `z`'s orientation with phase in [0, π).
#[inline]
pub fn canonical(z: Complex64) -> Complex64 {
    let z = if z.im < 0.0 || (z.im == 0.0 && z.re < 0.0) {
        -z
    } else {
        z
    };
    // Collapse negative zeros so the representative is unique bit-wise.
    Complex64::new(z.re + 0.0, z.im + 0.0)
}

/// Unit-reliability orientation at angle `theta`.
pub fn from_angle(theta: f64, magnitude: f64) -> Complex64 {
    canonical(Complex64::from_polar(magnitude, theta))
}

/// Phase in [0, π).
#[inline]
pub fn phase(z: Complex64) -> f64 {
    let a = canonical(z).arg();
    if a >= PI {
        0.0
    } else {
        a
    }
}

/// Angle doubled, magnitude preserved.
#[inline]
pub fn double(z: Complex64) -> Complex64 {
    let m = z.norm();
    if m == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        z * z / m
    }
}

/// Angle halved into [0, π), magnitude preserved.
#[inline]
pub fn halve(z: Complex64) -> Complex64 {
    let m = z.norm();
    if m == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        canonical((z / m).sqrt() * m)
    }
}

pub fn double_field(field: &OrientationField) -> Raster<Complex64> {
    field.map(|&z| double(z))
}

pub fn halve_field(doubled: &Raster<Complex64>) -> OrientationField {
    doubled.map(|&z| halve(z))
}

/// Complex conjugate, re-canonicalized (θ → π − θ).
pub fn conjugate_field(field: &OrientationField) -> OrientationField {
    field.map(|&z| canonical(z.conj()))
}

pub fn canonicalize_field(field: &OrientationField) -> OrientationField {
    field.map(|&z| canonical(z))
}

/// Gaussian smoothing in doubled-angle space.
pub fn smooth_field(field: &OrientationField, sigma: f64) -> Result<OrientationField> {
    let doubled = double_field(field);
    Ok(halve_field(&blur_complex(&doubled, sigma)?))
}

/// Blurs real and imaginary parts independently.
pub fn blur_complex(map: &Raster<Complex64>, sigma: f64) -> Result<Raster<Complex64>> {
    let re = gaussian_blur(&map.map(|z| z.re), sigma)?;
    let im = gaussian_blur(&map.map(|z| z.im), sigma)?;
    Ok(re.zip_map(&im, |&a, &b| Complex64::new(a, b)))
}

/// Divides every magnitude by the global maximum; an all-zero field is
/// returned unchanged.
pub fn normalize_field(field: &OrientationField) -> OrientationField {
    let max = field.data().iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return field.clone();
    }
    field.map(|&z| canonical(z / max))
}

pub fn magnitudes(field: &OrientationField) -> RealMap {
    field.map(|z| z.norm())
}

/// Bilinear sampler over a doubled-angle copy of a field. Samples outside
/// the raster are zero.
pub struct DoubledSampler {
    doubled: Raster<Complex64>,
}

impl DoubledSampler {
    pub fn new(field: &OrientationField) -> Self {
        Self {
            doubled: double_field(field),
        }
    }

    pub fn width(&self) -> usize {
        self.doubled.width()
    }

    pub fn height(&self) -> usize {
        self.doubled.height()
    }

    /// Interpolated doubled value at (x, y).
    #[inline]
    pub fn doubled_at(&self, x: f64, y: f64) -> Complex64 {
        let x0 = x.floor();
        let y0 = y.floor();
        let (fx, fy) = (x - x0, y - y0);
        let (xi, yi) = (x0 as isize, y0 as isize);
        let zero = Complex64::new(0.0, 0.0);
        let d = &self.doubled;
        d.at_or(xi, yi, zero) * ((1.0 - fx) * (1.0 - fy))
            + d.at_or(xi + 1, yi, zero) * (fx * (1.0 - fy))
            + d.at_or(xi, yi + 1, zero) * ((1.0 - fx) * fy)
            + d.at_or(xi + 1, yi + 1, zero) * (fx * fy)
    }

    /// Interpolated orientation (single-angle representative) at (x, y).
    #[inline]
    pub fn at(&self, x: f64, y: f64) -> Complex64 {
        halve(self.doubled_at(x, y))
    }
}

/// Serializes a field in the ORF1 layout: magic, u32 LE width and height,
/// then row-major (re, im) pairs as f32 LE.
pub fn write_orf(mut writer: impl Write, field: &OrientationField) -> Result<()> {
    let w = u32::try_from(field.width()).map_err(|_| Error::DimensionOverflow)?;
    let h = u32::try_from(field.height()).map_err(|_| Error::DimensionOverflow)?;
    let mut buf = Vec::with_capacity(12 + 8 * field.len());
    buf.extend_from_slice(ORF_MAGIC);
    buf.extend_from_slice(&w.to_le_bytes());
    buf.extend_from_slice(&h.to_le_bytes());
    for z in field.data() {
        buf.extend_from_slice(&(z.re as f32).to_le_bytes());
        buf.extend_from_slice(&(z.im as f32).to_le_bytes());
    }
    writer.write_all(&buf)?;
    Ok(())
}

pub fn read_orf(mut reader: impl Read) -> Result<OrientationField> {
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes)?;
    decode_orf(&bytes)
}

pub fn decode_orf(bytes: &[u8]) -> Result<OrientationField> {
    if bytes.len() < 4 {
        return Err(Error::TruncatedFile);
    }
    if &bytes[..4] != ORF_MAGIC {
        return Err(Error::BadMagic);
    }
    if bytes.len() < 12 {
        return Err(Error::TruncatedFile);
    }
    let w = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    let h = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    if w == 0 || h == 0 {
        return Err(Error::Format("ORF1 dimensions must be positive".into()));
    }
    let payload = w
        .checked_mul(h)
        .and_then(|n| n.checked_mul(8))
        .ok_or(Error::DimensionOverflow)?;
    let body = &bytes[12..];
    if body.len() < payload {
        return Err(Error::TruncatedFile);
    }
    let data = body[..payload]
        .chunks_exact(8)
        .map(|c| {
            let re = f32::from_le_bytes(c[..4].try_into().unwrap());
            let im = f32::from_le_bytes(c[4..].try_into().unwrap());
            Complex64::new(re as f64, im as f64)
        })
        .collect();
    OrientationField::from_vec(w, h, data)
}

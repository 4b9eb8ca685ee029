use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Points sampled on a circle around the evaluation pixel.
#[derive(Debug, Clone, PartialEq)]
pub struct CirclePattern {
    radius: f64,
    offsets: Vec<(f64, f64)>,
    complex: Vec<Complex64>,
}

/// max(8, round(2πR)): roughly one sample per pixel of circumference.
pub fn default_circle_count(radius: f64) -> usize {
    ((2.0 * PI * radius).round() as usize).max(8)
}

/// `n` points at angles 2πk/n on a circle of `radius` pixels.
pub fn circle_pattern(radius: f64, n: usize) -> Result<CirclePattern> {
    CirclePattern::with_phase(radius, n, 0.0)
}

impl CirclePattern {
    /// Pattern with the first point at angle `phase0`.
    pub fn with_phase(radius: f64, n: usize, phase0: f64) -> Result<Self> {
        if !(radius >= 1.0 && radius.is_finite()) {
            return Err(Error::InvalidParameter(format!("circle radius must be >= 1, got {radius}")));
        }
        if n < 8 {
            return Err(Error::InvalidParameter(format!("circle needs at least 8 points, got {n}")));
        }
        Ok(Self::unchecked(radius, n, phase0))
    }

    /// Pattern with `n_circle` points, or the default count when it is 0.
    pub fn with_count_or_default(radius: f64, n_circle: usize) -> Result<Self> {
        let n = if n_circle == 0 {
            default_circle_count(radius)
        } else {
            n_circle
        };
        circle_pattern(radius, n)
    }

    pub(crate) fn unchecked(radius: f64, n: usize, phase0: f64) -> Self {
        let complex: Vec<Complex64> = (0..n)
            .map(|k| Complex64::from_polar(radius, phase0 + 2.0 * PI * k as f64 / n as f64))
            .collect();
        let offsets = complex.iter().map(|p| (p.re, p.im)).collect();
        Self {
            radius,
            offsets,
            complex,
        }
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    /// r_k as (x, y) offsets.
    pub fn offsets(&self) -> &[(f64, f64)] {
        &self.offsets
    }

    /// p_k = x_k + i·y_k.
    pub fn complex(&self) -> &[Complex64] {
        &self.complex
    }
}

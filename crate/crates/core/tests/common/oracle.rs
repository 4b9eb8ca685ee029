//! Direct single-pixel evaluation of the circle operators, written from the
//! formulas without sharing code with the library.

#![allow(dead_code)]

use num_complex::Complex64;
use ridgeflow::OrientationField;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    /// Divide by the sum of absolute numerators.
    Absolute,
    /// Divide by the plain sum of numerators.
    Signed,
}

#[derive(Debug, Clone, Copy)]
pub struct Setup {
    pub norm: Norm,
    pub epsilon: f64,
}

/// Orientation read at (x, y) by bilinear interpolation of z²/|z|, zero
/// outside the raster, then mapped back to an angle in [0, π).
pub fn sample(field: &OrientationField, x: f64, y: f64) -> Complex64 {
    let (w, h) = (field.width() as i64, field.height() as i64);
    let doubled = |i: i64, j: i64| -> Complex64 {
        if i < 0 || j < 0 || i >= w || j >= h {
            return ZERO;
        }
        let z = field.at(i as usize, j as usize);
        let m = z.norm();
        if m == 0.0 {
            ZERO
        } else {
            Complex64::from_polar(m, 2.0 * z.im.atan2(z.re))
        }
    };
    let (i, j) = (x.floor() as i64, y.floor() as i64);
    let (a, b) = (x - x.floor(), y - y.floor());
    let d = doubled(i, j) * (1.0 - a) * (1.0 - b)
        + doubled(i + 1, j) * a * (1.0 - b)
        + doubled(i, j + 1) * (1.0 - a) * b
        + doubled(i + 1, j + 1) * a * b;
    let m = d.norm();
    if m == 0.0 {
        return ZERO;
    }
    Complex64::from_polar(m, d.im.atan2(d.re).rem_euclid(2.0 * std::f64::consts::PI) / 2.0)
}

fn unit_or_zero(z: Complex64) -> Complex64 {
    let m = z.norm();
    if m == 0.0 {
        ZERO
    } else {
        z / m
    }
}

fn normalized(numerators: Vec<f64>, setup: Setup) -> Option<Vec<f64>> {
    let total: f64 = match setup.norm {
        Norm::Absolute => numerators.iter().map(|v| v.abs()).sum(),
        Norm::Signed => numerators.iter().sum(),
    };
    if total.abs() < setup.epsilon {
        None
    } else {
        Some(numerators.into_iter().map(|v| v / total).collect())
    }
}

pub struct Neighborhood {
    pub center: Complex64,
    pub samples: Vec<Complex64>,
    pub radials: Vec<Complex64>,
}

pub fn neighborhood(field: &OrientationField, x: usize, y: usize, offsets: &[(f64, f64)]) -> Neighborhood {
    Neighborhood {
        center: field.at(x, y),
        samples: offsets
            .iter()
            .map(|&(dx, dy)| sample(field, x as f64 + dx, y as f64 + dy))
            .collect(),
        radials: offsets.iter().map(|&(dx, dy)| Complex64::new(dx, dy)).collect(),
    }
}

/// w_k: Re[F(x + r_k)·conj(p_k) / (|F(x + r_k)|·|p_k|)], normalized.
pub fn w(n: &Neighborhood, setup: Setup) -> Option<Vec<f64>> {
    let num = n
        .samples
        .iter()
        .zip(&n.radials)
        .map(|(f, p)| (unit_or_zero(*f) * p.conj() / p.norm()).re)
        .collect();
    normalized(num, setup)
}

/// v_k: as w_k with the imaginary part.
pub fn v(n: &Neighborhood, setup: Setup) -> Option<Vec<f64>> {
    let num = n
        .samples
        .iter()
        .zip(&n.radials)
        .map(|(f, p)| (unit_or_zero(*f) * p.conj() / p.norm()).im)
        .collect();
    normalized(num, setup)
}

/// u_k: Re[F(x + r_k)·conj(F(x)) / (|F(x + r_k)|·|F(x)|)], normalized.
pub fn u(n: &Neighborhood, setup: Setup) -> Option<Vec<f64>> {
    if n.center.norm() == 0.0 {
        return None;
    }
    let c = unit_or_zero(n.center).conj();
    let num = n.samples.iter().map(|f| (unit_or_zero(*f) * c).re).collect();
    normalized(num, setup)
}

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// (1 − s)F² + sG², square-rooted, with magnitude max(|F|, |G|).
fn combine(f: Complex64, g: Complex64, s: f64) -> Complex64 {
    let magnitude = f.norm().max(g.norm());
    if magnitude == 0.0 {
        return ZERO;
    }
    let squared = (1.0 - s) * f * f + s * g * g;
    let direction = if squared.norm() > 0.0 {
        unit_or_zero(squared.sqrt())
    } else if f.norm() > 0.0 {
        unit_or_zero(f)
    } else {
        unit_or_zero(g)
    };
    direction * magnitude
}

/// Adjuster output at one pixel; the input value when weights degenerate.
pub fn adjuster(n: &Neighborhood, s: f64, setup: Setup) -> Complex64 {
    let Some(w) = w(n, setup) else {
        return n.center;
    };
    let g: Complex64 = w
        .iter()
        .zip(&n.samples)
        .map(|(wk, f)| f * (sign(*wk) * wk * wk))
        .sum();
    combine(n.center, g, s)
}

/// Smoother output at one pixel. Under absolute normalization the weighted
/// sum is divided by the total squared weight.
pub fn smoother(n: &Neighborhood, s: f64, setup: Setup) -> Complex64 {
    let (Some(w), Some(u)) = (w(n, setup), u(n, setup)) else {
        return n.center;
    };
    let mut g: Complex64 = w
        .iter()
        .zip(&u)
        .zip(&n.samples)
        .map(|((wk, uk), f)| f * (sign(*uk) * wk * wk))
        .sum();
    if setup.norm == Norm::Absolute {
        g /= w.iter().map(|wk| wk * wk).sum::<f64>();
    }
    combine(n.center, g, s)
}

/// Tangent-weighted drifter; zero when weights degenerate.
pub fn drifter_t(n: &Neighborhood, setup: Setup) -> Complex64 {
    w(n, setup).map_or(ZERO, |w| w.iter().zip(&n.samples).map(|(wk, f)| f * *wk).sum())
}

/// Normal-weighted drifter; zero when weights degenerate.
pub fn drifter_n(n: &Neighborhood, setup: Setup) -> Complex64 {
    v(n, setup).map_or(ZERO, |v| v.iter().zip(&n.samples).map(|(vk, f)| f * *vk).sum())
}

/// Distance between two orientations that ignores the sign of the
/// representative: |a²/|a| − b²/|b||.
pub fn orientation_distance(a: Complex64, b: Complex64) -> f64 {
    let d = |z: Complex64| {
        let m = z.norm();
        if m == 0.0 {
            ZERO
        } else {
            z * z / m
        }
    };
    (d(a) - d(b)).norm()
}

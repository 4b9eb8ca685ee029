#![allow(dead_code)]

pub mod lowlevel;
pub mod oracle;

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ridgeflow::orientation::canonical;
use ridgeflow::{GrayImage, OrientationField};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent phases and magnitudes; about 3% of pixels are zero.
pub fn random_field(rng: &mut ChaCha8Rng, width: usize, height: usize) -> OrientationField {
    OrientationField::from_fn(width, height, |_, _| {
        if rng.gen_bool(0.03) {
            Complex64::new(0.0, 0.0)
        } else {
            canonical(Complex64::from_polar(rng.gen_range(0.05..1.0), rng.gen_range(0.0..PI)))
        }
    })
}

/// Random field blurred towards coherence: phases vary slowly.
pub fn smooth_random_field(rng: &mut ChaCha8Rng, width: usize, height: usize) -> OrientationField {
    let (a, b, c) = (rng.gen_range(-0.05..0.05), rng.gen_range(-0.05..0.05), rng.gen_range(0.0..PI));
    let (fx, fy) = (rng.gen_range(0.01..0.08), rng.gen_range(0.01..0.08));
    OrientationField::from_fn(width, height, |x, y| {
        let (x, y) = (x as f64, y as f64);
        let theta = c + a * x + b * y + 0.6 * (fx * x).sin() * (fy * y).cos();
        canonical(Complex64::from_polar(1.0, theta))
    })
}

/// 127.5 + 127.5·cos(2π·d/period), d the distance along the normal to
/// ridges at angle `theta`.
pub fn sinusoid(width: usize, height: usize, theta: f64, period: f64) -> GrayImage {
    let (nx, ny) = (-theta.sin(), theta.cos());
    GrayImage::from_fn(width, height, |x, y| {
        let d = x as f64 * nx + y as f64 * ny;
        (127.5 + 127.5 * (2.0 * PI * d / period).cos()).round() as u8
    })
}

/// Smallest difference between two angles taken modulo π, in degrees.
pub fn angle_gap_deg(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(PI);
    d.min(PI - d).to_degrees()
}

/// Poincaré index along the square of half-side `r` around (cx, cy):
/// the summed orientation change in turns, each step wrapped to
/// (−π/2, π/2].
pub fn poincare_index(field: &OrientationField, cx: usize, cy: usize, r: usize) -> f64 {
    let (x0, y0, x1, y1) = (cx - r, cy - r, cx + r, cy + r);
    let mut path = Vec::new();
    path.extend((x0..x1).map(|x| (x, y0)));
    path.extend((y0..y1).map(|y| (x1, y)));
    path.extend((x0 + 1..=x1).rev().map(|x| (x, y1)));
    path.extend((y0 + 1..=y1).rev().map(|y| (x0, y)));
    let angle = |(x, y): (usize, usize)| {
        let z = field.at(x, y);
        z.im.atan2(z.re)
    };
    let mut total = 0.0;
    for i in 0..path.len() {
        let mut d = angle(path[(i + 1) % path.len()]) - angle(path[i]);
        while d > PI / 2.0 {
            d -= PI;
        }
        while d <= -PI / 2.0 {
            d += PI;
        }
        total += d;
    }
    total / (2.0 * PI)
}

use ridgeflow::refine::{adjuster, drifter, smoother, CirclePattern, DriftMode, Strength, Weighting};
use ridgeflow::WeightNorm;

/// One randomized operator check: a random field, pixel, circle and
/// relaxation. Returns the largest relative gap between library and oracle
/// over adjuster, smoother and both drifters.
pub fn random_triple_gap(rng: &mut ChaCha8Rng, norm: WeightNorm) -> f64 {
    let (w, h) = (rng.gen_range(12..32), rng.gen_range(12..32));
    let field = if rng.gen_bool(0.5) {
        random_field(rng, w, h)
    } else {
        smooth_random_field(rng, w, h)
    };
    let (x, y) = (rng.gen_range(0..w), rng.gen_range(0..h));
    let radius = rng.gen_range(1.0..8.0);
    let count = rng.gen_range(8..48);
    let pattern = CirclePattern::with_phase(radius, count, rng.gen_range(0.0..PI)).unwrap();
    let s = rng.gen_range(0.05..0.95);
    let weighting = Weighting { norm, epsilon: 1e-6 };
    let setup = oracle::Setup {
        norm: match norm {
            WeightNorm::AbsoluteSum => oracle::Norm::Absolute,
            WeightNorm::SignedSum => oracle::Norm::Signed,
        },
        epsilon: 1e-6,
    };
    let n = oracle::neighborhood(&field, x, y, pattern.offsets());
    let pairs = [
        (adjuster(&field, &pattern, Strength::Uniform(s), weighting).unwrap().at(x, y), oracle::adjuster(&n, s, setup)),
        (smoother(&field, &pattern, s, weighting).at(x, y), oracle::smoother(&n, s, setup)),
        (drifter(&field, &pattern, DriftMode::Tangent, weighting).at(x, y), oracle::drifter_t(&n, setup)),
        (drifter(&field, &pattern, DriftMode::Normal, weighting).at(x, y), oracle::drifter_n(&n, setup)),
    ];
    pairs
        .iter()
        .map(|&(got, want)| oracle::orientation_distance(got, want) / want.norm().max(1.0))
        .fold(0.0, f64::max)
}

use ridgeflow::synth::synthetic_print;
use ridgeflow::BinaryMask;

/// Synthetic print on a white card with a dark oblique line across its top
/// margin, as left by a scanner edge.
pub struct LinedCard {
    pub image: GrayImage,
    pub footprint: BinaryMask,
    pub line: BinaryMask,
}

pub fn lined_card(width: usize, height: usize, period: f64, seed: u64) -> LinedCard {
    let print = synthetic_print(width, height, period, seed).unwrap();
    let line = BinaryMask::from_fn(width, height, |x, y| {
        let centre = 0.035 * height as f64 + 0.08 * x as f64;
        (y as f64 - centre).abs() <= 1.5
    });
    let image = print.image.zip_map(&line, |&v, &on| if on { 20 } else { v });
    LinedCard {
        image,
        footprint: print.footprint,
        line,
    }
}

/// Intersection over union of two masks.
pub fn iou(a: &BinaryMask, b: &BinaryMask) -> f64 {
    a.and(b).count() as f64 / a.or(b).count().max(1) as f64
}

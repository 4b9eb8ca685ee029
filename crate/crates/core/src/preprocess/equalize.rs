use crate::imgproc::GrayImage;

#[derive(Debug, Clone, PartialEq)]
pub struct EqualizeResult {
    pub image: GrayImage,
    /// Ridge/valley boundary in input grey levels; sent to 128.
    pub threshold: f64,
}

fn smooth_histogram(hist: &[f64; 256], sigma: f64) -> Vec<f64> {
    let radius = (3.0 * sigma).ceil() as isize;
    let weights: Vec<f64> = (-radius..=radius)
        .map(|i| (-((i * i) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let norm: f64 = weights.iter().sum();
    (0..256isize)
        .map(|v| {
            (-radius..=radius)
                .filter(|d| (0..256).contains(&(v + d)))
                .map(|d| hist[(v + d) as usize] * weights[(d + radius) as usize])
                .sum::<f64>()
                / norm
        })
        .collect()
}

/// Share of the valley depth within which bins count as part of the floor.
const FLOOR_TOLERANCE: f64 = 0.25;

/// Middle of the valley floor of `h` strictly between the two dominant
/// modes: the run around the lowest bin that stays within
/// `FLOOR_TOLERANCE` of the depth. A flat stretch between saturated modes
/// resolves to its middle rather than to a noise dip.
fn valley(h: &[f64]) -> f64 {
    let first = (0..h.len()).fold(0, |best, v| if h[v] > h[best] { v } else { best });
    let score = |v: usize| h[v] * (v as f64 - first as f64).powi(2);
    let second = (0..h.len()).fold(first, |best, v| if score(v) > score(best) { v } else { best });
    let (lo, hi) = (first.min(second), first.max(second));
    if hi - lo < 2 {
        return (lo + hi) as f64 / 2.0;
    }
    let min = h[lo + 1..hi].iter().copied().fold(f64::INFINITY, f64::min);
    let lowest = (lo + 1..hi).find(|&v| h[v] == min).unwrap();
    let ceiling = min + FLOOR_TOLERANCE * (h[lo].min(h[hi]) - min);
    let start = (lo + 1..=lowest).rev().take_while(|&v| h[v] <= ceiling).last().unwrap();
    let end = (lowest..hi).take_while(|&v| h[v] <= ceiling).last().unwrap();
    (start + end) as f64 / 2.0
}

fn quantile(sorted: &[u8], q: f64) -> f64 {
    let idx = ((sorted.len() - 1) as f64 * q).round() as usize;
    sorted[idx] as f64
}

/// Stretches the image to full range, then maps the histogram valley
/// between ridges and valleys to 128 with two linear pieces clipped at the
/// `clip_fraction` quantiles.
pub fn equalize(image: &GrayImage, hist_sigma: f64, clip_fraction: f64) -> EqualizeResult {
    let (min, max) = image
        .data()
        .iter()
        .fold((u8::MAX, u8::MIN), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if min == max {
        return EqualizeResult {
            image: image.clone(),
            threshold: 128.0,
        };
    }
    let span = (max - min) as f64;
    let stretched = image.map(|&v| ((v - min) as f64 * 255.0 / span).round() as u8);

    let mut hist = [0.0; 256];
    for &v in stretched.data() {
        hist[v as usize] += 1.0;
    }
    let threshold = valley(&smooth_histogram(&hist, hist_sigma.max(1e-3)));

    let mut sorted = stretched.data().to_vec();
    sorted.sort_unstable();
    let lo = quantile(&sorted, clip_fraction).min(threshold);
    let hi = quantile(&sorted, 1.0 - clip_fraction).max(threshold);
    let map = |v: f64| -> f64 {
        if v <= threshold {
            if threshold > lo {
                (v - lo) / (threshold - lo) * 128.0
            } else {
                128.0
            }
        } else if hi > threshold {
            128.0 + (v - threshold) / (hi - threshold) * 127.0
        } else {
            255.0
        }
    };
    EqualizeResult {
        image: stretched.map(|&v| map(v as f64).round().clamp(0.0, 255.0) as u8),
        threshold: min as f64 + threshold * span / 255.0,
    }
}

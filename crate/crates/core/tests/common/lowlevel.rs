//! Brute-force versions of the raster primitives, each returning how far
//! the library result is from the oracle on one random input.

#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use ridgeflow::imgproc::{
    components, convolve2d, dilate, erode, label_components, rank_filter, Border, ComponentMode, Connectivity, Kernel,
    Rank,
};
use ridgeflow::orientation::{canonical, double, halve};
use ridgeflow::{BinaryMask, GrayImage, RealMap};

fn random_mask(rng: &mut ChaCha8Rng, density: f64) -> BinaryMask {
    let (w, h) = (rng.gen_range(4..40), rng.gen_range(4..40));
    BinaryMask::from_fn(w, h, |_, _| rng.gen_bool(density))
}

fn clamp_index(v: isize, n: usize) -> usize {
    v.clamp(0, n as isize - 1) as usize
}

/// Largest absolute gap between `convolve2d` and a direct double sum with
/// replicated borders.
pub fn convolution_gap(rng: &mut ChaCha8Rng) -> f64 {
    let (w, h) = (rng.gen_range(8..40), rng.gen_range(8..40));
    let map = RealMap::from_fn(w, h, |_, _| rng.gen_range(-100.0..100.0));
    let (kw, kh) = (2 * rng.gen_range(0..4) + 1, 2 * rng.gen_range(0..4) + 1);
    let weights: Vec<f64> = (0..kw * kh).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let kernel = Kernel::new(kw, kh, weights.clone()).unwrap();
    let got = convolve2d(&map, &kernel, Border::Clamp).unwrap();
    let (ax, ay) = (kw as isize / 2, kh as isize / 2);
    let mut worst = 0.0f64;
    for y in 0..h as isize {
        for x in 0..w as isize {
            let mut want = 0.0;
            for j in 0..kh as isize {
                for i in 0..kw as isize {
                    let sx = clamp_index(x - (i - ax), w);
                    let sy = clamp_index(y - (j - ay), h);
                    want += weights[(j * kw as isize + i) as usize] * map.at(sx, sy);
                }
            }
            worst = worst.max((got.at(x as usize, y as usize) - want).abs());
        }
    }
    worst
}

fn disk(radius: usize) -> Vec<(isize, isize)> {
    let r = radius as isize;
    let mut out = Vec::new();
    for dy in -r..=r {
        for dx in -r..=r {
            if (dx as f64).hypot(dy as f64) <= radius as f64 {
                out.push((dx, dy));
            }
        }
    }
    out
}

/// Pixels where the median filter disagrees with sorting the clamped disk
/// neighborhood and taking the middle element.
pub fn median_mismatches(rng: &mut ChaCha8Rng) -> usize {
    let (w, h) = (rng.gen_range(4..32), rng.gen_range(4..32));
    let img = GrayImage::from_fn(w, h, |_, _| rng.gen_range(0..=255u8));
    let radius = rng.gen_range(1..4);
    let got = rank_filter(&img, radius, Rank::Median).unwrap();
    let offsets = disk(radius);
    let mut bad = 0;
    for y in 0..h {
        for x in 0..w {
            let mut values: Vec<u8> = offsets
                .iter()
                .map(|&(dx, dy)| img.at(clamp_index(x as isize + dx, w), clamp_index(y as isize + dy, h)))
                .collect();
            values.sort_unstable();
            if got.at(x, y) != values[values.len() / 2] {
                bad += 1;
            }
        }
    }
    bad
}

/// Pixels where dilation or erosion differs from checking every disk
/// neighbor, with outside pixels false.
pub fn morphology_mismatches(rng: &mut ChaCha8Rng) -> usize {
    let mask = random_mask(rng, 0.5);
    let radius = rng.gen_range(1..4);
    let (w, h) = (mask.width() as isize, mask.height() as isize);
    let offsets = disk(radius);
    let value = |x: isize, y: isize| x >= 0 && y >= 0 && x < w && y < h && mask.at(x as usize, y as usize);
    let grown = dilate(&mask, radius).unwrap();
    let shrunk = erode(&mask, radius).unwrap();
    let mut bad = 0;
    for y in 0..h {
        for x in 0..w {
            let any = offsets.iter().any(|&(dx, dy)| value(x + dx, y + dy));
            let all = offsets.iter().all(|&(dx, dy)| value(x + dx, y + dy));
            bad += usize::from(grown.at(x as usize, y as usize) != any);
            bad += usize::from(shrunk.at(x as usize, y as usize) != all);
        }
    }
    bad
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, i: usize) -> usize {
        let mut r = i;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut i = i;
        while self.parent[i] != r {
            let next = self.parent[i];
            self.parent[i] = r;
            i = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Union-find roots of the pixels equal to `value`; other pixels map to
/// `None`.
fn oracle_components(mask: &BinaryMask, value: bool, eight: bool) -> Vec<Option<usize>> {
    let (w, h) = (mask.width(), mask.height());
    let mut uf = UnionFind::new(w * h);
    let forward: &[(isize, isize)] = if eight {
        &[(1, 0), (-1, 1), (0, 1), (1, 1)]
    } else {
        &[(1, 0), (0, 1)]
    };
    for y in 0..h {
        for x in 0..w {
            if mask.at(x, y) != value {
                continue;
            }
            for &(dx, dy) in forward {
                let (nx, ny) = (x as isize + dx, y as isize + dy);
                if nx >= 0 && ny >= 0 && (nx as usize) < w && (ny as usize) < h && mask.at(nx as usize, ny as usize) == value {
                    uf.union(y * w + x, ny as usize * w + nx as usize);
                }
            }
        }
    }
    (0..w * h)
        .map(|i| (mask.data()[i] == value).then(|| uf.find(i)))
        .collect()
}

/// True when the library labeling induces exactly the oracle partition.
fn same_partition(labels: &[u32], roots: &[Option<usize>]) -> bool {
    use std::collections::HashMap;
    let mut forward = HashMap::new();
    let mut backward = HashMap::new();
    for (&l, &r) in labels.iter().zip(roots) {
        match (l, r) {
            (0, None) => {}
            (0, Some(_)) | (_, None) => return false,
            (l, Some(r)) => {
                if *forward.entry(l).or_insert(r) != r || *backward.entry(r).or_insert(l) != l {
                    return false;
                }
            }
        }
    }
    true
}

/// Checks labeling, area filtering, largest-component selection and hole
/// filling against a union-find flood fill. Returns the number of failed
/// checks.
pub fn component_mismatches(rng: &mut ChaCha8Rng) -> usize {
    let density = rng.gen_range(0.3..0.7);
    let mask = random_mask(rng, density);
    let (w, h) = (mask.width(), mask.height());
    let mut failures = 0;

    for (value, conn, eight) in [
        (true, Connectivity::Eight, true),
        (true, Connectivity::Four, false),
        (false, Connectivity::Four, false),
    ] {
        let lab = label_components(&mask, value, conn);
        if !same_partition(&lab.labels, &oracle_components(&mask, value, eight)) {
            failures += 1;
        }
    }

    let roots = oracle_components(&mask, true, true);
    let mut area = vec![0usize; w * h];
    for r in roots.iter().flatten() {
        area[*r] += 1;
    }
    let min_area = rng.gen_range(1..6);
    let filtered = components(&mask, ComponentMode::FilterMinArea(min_area));
    let want = BinaryMask::from_fn(w, h, |x, y| roots[y * w + x].is_some_and(|r| area[r] >= min_area));
    failures += usize::from(filtered != want);

    // Largest component; ties go to the one whose first pixel comes first.
    let mut best: Option<usize> = None;
    for r in roots.iter().flatten() {
        if best.is_none_or(|b| area[*r] > area[b]) {
            best = Some(*r);
        }
    }
    let largest = components(&mask, ComponentMode::KeepLargest(1));
    let want = BinaryMask::from_fn(w, h, |x, y| best.is_some() && roots[y * w + x] == best);
    failures += usize::from(largest != want);

    let background = oracle_components(&mask, false, false);
    let mut touches = vec![false; w * h];
    for y in 0..h {
        for x in 0..w {
            if let Some(r) = background[y * w + x] {
                if x == 0 || y == 0 || x == w - 1 || y == h - 1 {
                    touches[r] = true;
                }
            }
        }
    }
    let filled = components(&mask, ComponentMode::FillHoles);
    let want = BinaryMask::from_fn(w, h, |x, y| background[y * w + x].is_none_or(|r| !touches[r]));
    failures += usize::from(filled != want);
    failures
}

/// Largest gap of halve(double(z)) against z and of double(halve(d))
/// against d over random values.
pub fn round_trip_gap(rng: &mut ChaCha8Rng, count: usize) -> f64 {
    let mut worst = 0.0f64;
    for _ in 0..count {
        let m = rng.gen_range(1e-3..10.0);
        let z = canonical(Complex64::from_polar(m, rng.gen_range(0.0..PI)));
        worst = worst.max((halve(double(z)) - z).norm() / m);
        let d = Complex64::from_polar(m, rng.gen_range(-PI..PI));
        worst = worst.max((double(halve(d)) - d).norm() / m);
    }
    worst
}

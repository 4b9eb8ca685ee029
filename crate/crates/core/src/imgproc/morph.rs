//! Binary morphology and connected components.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::imgproc::filter::disk_offsets;
use crate::imgproc::raster::BinaryMask;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MorphOp {
    Dilate,
    Erode,
}

/// Dilation or erosion with a disk; pixels outside the raster count as false.
pub fn morphology(mask: &BinaryMask, op: MorphOp, radius: usize) -> Result<BinaryMask> {
    morphology_with_outside(mask, op, radius, false)
}

/// Same as [`morphology`] with an explicit value for pixels outside the raster.
pub fn morphology_with_outside(
    mask: &BinaryMask,
    op: MorphOp,
    radius: usize,
    outside: bool,
) -> Result<BinaryMask> {
    if radius < 1 {
        return Err(Error::InvalidParameter("morphology radius must be >= 1".into()));
    }
    let offsets = disk_offsets(radius);
    Ok(BinaryMask::par_from_rows(mask.width(), mask.height(), |y, row| {
        for (x, out) in row.iter_mut().enumerate() {
            let mut values = offsets
                .iter()
                .map(|&(dx, dy)| mask.at_or(x as isize + dx, y as isize + dy, outside));
            *out = match op {
                MorphOp::Dilate => values.any(|v| v),
                MorphOp::Erode => values.all(|v| v),
            };
        }
    }))
}

/// Shorthand used throughout the pipeline.
pub fn dilate(mask: &BinaryMask, radius: usize) -> Result<BinaryMask> {
    morphology(mask, MorphOp::Dilate, radius)
}

pub fn erode(mask: &BinaryMask, radius: usize) -> Result<BinaryMask> {
    morphology(mask, MorphOp::Erode, radius)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connectivity {
    Four,
    Eight,
}

impl Connectivity {
    fn offsets(self) -> &'static [(isize, isize)] {
        match self {
            Connectivity::Four => &[(0, -1), (-1, 0), (1, 0), (0, 1)],
            Connectivity::Eight => &[
                (-1, -1),
                (0, -1),
                (1, -1),
                (-1, 0),
                (1, 0),
                (-1, 1),
                (0, 1),
                (1, 1),
            ],
        }
    }
}

/// Component labels of the pixels equal to `value`. Labels are numbered from
/// 1 in scan order of each component's first pixel; 0 marks other pixels.
#[derive(Debug, Clone)]
pub struct Labeling {
    pub labels: Vec<u32>,
    /// `areas[l - 1]` is the pixel count of label `l`.
    pub areas: Vec<usize>,
    /// Whether each component touches the raster border.
    pub touches_border: Vec<bool>,
}

impl Labeling {
    pub fn count(&self) -> usize {
        self.areas.len()
    }
}

pub fn label_components(mask: &BinaryMask, value: bool, connectivity: Connectivity) -> Labeling {
    let (w, h) = (mask.width(), mask.height());
    let mut labels = vec![0u32; w * h];
    let mut areas = Vec::new();
    let mut touches_border = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..w * h {
        if mask.data()[start] != value || labels[start] != 0 {
            continue;
        }
        let label = areas.len() as u32 + 1;
        labels[start] = label;
        queue.push_back(start);
        let mut area = 0;
        let mut border = false;
        while let Some(i) = queue.pop_front() {
            area += 1;
            let (x, y) = ((i % w) as isize, (i / w) as isize);
            if x == 0 || y == 0 || x == w as isize - 1 || y == h as isize - 1 {
                border = true;
            }
            for &(dx, dy) in connectivity.offsets() {
                let (nx, ny) = (x + dx, y + dy);
                if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                    continue;
                }
                let j = ny as usize * w + nx as usize;
                if mask.data()[j] == value && labels[j] == 0 {
                    labels[j] = label;
                    queue.push_back(j);
                }
            }
        }
        areas.push(area);
        touches_border.push(border);
    }
    Labeling {
        labels,
        areas,
        touches_border,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentMode {
    /// Drop 8-connected components with fewer than this many pixels.
    FilterMinArea(usize),
    /// Keep the `n` largest 8-connected components; ties go to the component
    /// found first in scan order.
    KeepLargest(usize),
    /// Set to true every 4-connected background region not touching the border.
    FillHoles,
}

pub fn components(mask: &BinaryMask, mode: ComponentMode) -> BinaryMask {
    match mode {
        ComponentMode::FilterMinArea(min_area) => {
            let lab = label_components(mask, true, Connectivity::Eight);
            let keep: Vec<bool> = lab.areas.iter().map(|&a| a >= min_area).collect();
            select_labels(mask, &lab, &keep)
        }
        ComponentMode::KeepLargest(n) => {
            let lab = label_components(mask, true, Connectivity::Eight);
            let mut order: Vec<usize> = (0..lab.count()).collect();
            // Stable sort keeps scan order among equal areas.
            order.sort_by(|&a, &b| lab.areas[b].cmp(&lab.areas[a]));
            let mut keep = vec![false; lab.count()];
            for &i in order.iter().take(n) {
                keep[i] = true;
            }
            select_labels(mask, &lab, &keep)
        }
        ComponentMode::FillHoles => {
            let lab = label_components(mask, false, Connectivity::Four);
            let data = mask
                .data()
                .iter()
                .zip(&lab.labels)
                .map(|(&m, &l)| m || (l != 0 && !lab.touches_border[l as usize - 1]))
                .collect();
            BinaryMask::from_vec(mask.width(), mask.height(), data).expect("same dimensions")
        }
    }
}

fn select_labels(mask: &BinaryMask, lab: &Labeling, keep: &[bool]) -> BinaryMask {
    let data = lab
        .labels
        .iter()
        .map(|&l| l != 0 && keep[l as usize - 1])
        .collect();
    BinaryMask::from_vec(mask.width(), mask.height(), data).expect("same dimensions")
}

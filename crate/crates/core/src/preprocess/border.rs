use crate::error::Result;
use crate::imgproc::{convolve2d, BinaryMask, Border, GrayImage, Kernel, RealMap};

/// y = slope·x + intercept in the scan frame (x along the line direction).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    pub slope: f64,
    pub intercept: f64,
}

impl Line {
    pub fn at(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }
}

/// Fitted lines near the top and bottom edges of a scan frame.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LinePair {
    pub top: Option<Line>,
    pub bottom: Option<Line>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BorderRemoval {
    pub mask: BinaryMask,
    /// Near-horizontal lines, in image coordinates.
    pub horizontal: LinePair,
    /// Near-vertical lines, with x and y swapped.
    pub vertical: LinePair,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BorderParams {
    /// Minimum max−min variation of a line to stop the border scan.
    pub tau_v: f64,
    /// Minimum mean response per kernel column of an oblique edge.
    pub line_strength: f64,
    /// Fraction of columns that must contain a strong edge.
    pub line_coverage: f64,
}

/// Vertical step-edge detector (1, 1, 0, −1, −1)ᵀ spread over `width`
/// columns (rounded up to odd).
pub fn oblique_kernel(width: usize) -> Kernel {
    let width = width.max(1) | 1;
    let column = [1.0, 1.0, 0.0, -1.0, -1.0];
    Kernel::outer(&column, &vec![1.0; width]).expect("odd kernel")
}

fn variation(values: impl Iterator<Item = u8>) -> f64 {
    let (lo, hi) = values.fold((u8::MAX, u8::MIN), |(lo, hi), v| (lo.min(v), hi.max(v)));
    hi.saturating_sub(lo) as f64
}

/// Clears rows from the top and bottom whose variation stays below `tau_v`,
/// stopping at the first row that reaches it.
fn scan_rows(image: &GrayImage, mask: &mut BinaryMask, tau_v: f64) {
    let h = image.height();
    let flat = |y: usize| variation(image.row(y).iter().copied()) < tau_v;
    let clear = |mask: &mut BinaryMask, y: usize| (0..image.width()).for_each(|x| mask.set(x, y, false));
    let mut top = 0;
    while top < h && flat(top) {
        clear(mask, top);
        top += 1;
    }
    let mut bottom = h;
    while bottom > top && flat(bottom - 1) {
        clear(mask, bottom - 1);
        bottom -= 1;
    }
}

fn least_squares(points: &[(f64, f64)]) -> Option<Line> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return None;
    }
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let sxx: f64 = points.iter().map(|&(x, _)| (x - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|&(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some(Line {
        slope,
        intercept: my - slope * mx,
    })
}

/// Robust line through per-column edge rows: fit, drop points more than
/// 3 px off, refit, and accept only a tight fit.
fn fit_line(points: &[(f64, f64)]) -> Option<Line> {
    let first = least_squares(points)?;
    let inliers: Vec<(f64, f64)> = points.iter().copied().filter(|&(x, y)| (y - first.at(x)).abs() <= 3.0).collect();
    if inliers.len() * 10 < points.len() * 8 {
        return None;
    }
    let line = least_squares(&inliers)?;
    let rms = (inliers.iter().map(|&(x, y)| (y - line.at(x)).powi(2)).sum::<f64>() / inliers.len() as f64).sqrt();
    (rms <= 2.0).then_some(line)
}

/// Position of the inner edge of the outermost strong line in each column,
/// scanning `rows` from the image edge inward.
fn edge_rows(response: &RealMap, rows: &[usize], kernel_width: f64, params: &BorderParams) -> Vec<(f64, f64)> {
    let mut points = Vec::new();
    for x in 0..response.width() {
        let value = |y: usize| response.at(x, y) / kernel_width;
        let column_max = rows.iter().map(|&y| value(y).abs()).fold(0.0, f64::max);
        if column_max < params.line_strength {
            continue;
        }
        let strong = 0.75 * column_max;
        // Entering edge, then the opposite-signed leaving edge a few rows in.
        let Some(i) = rows.iter().position(|&y| value(y).abs() >= strong) else {
            continue;
        };
        let sign = value(rows[i]).signum();
        let leave = rows[i..]
            .iter()
            .take(16)
            .position(|&y| value(y) * sign <= -strong)
            .map(|j| i + j);
        let Some(start) = leave else {
            continue;
        };
        let mut end = start;
        while end + 1 < rows.len() && value(rows[end + 1]) * sign <= -strong {
            end += 1;
        }
        let (weighted, total) = rows[start..=end].iter().fold((0.0, 0.0), |(a, b), &y| {
            let v = value(y).abs();
            (a + v * y as f64, b + v)
        });
        points.push((x as f64, weighted / total));
    }
    points
}

/// Fits lines in the outer thirds of the frame and clears everything
/// outside them.
fn cut_oblique(image: &GrayImage, mask: &mut BinaryMask, params: &BorderParams) -> Result<LinePair> {
    let (w, h) = (image.width(), image.height());
    let kernel = oblique_kernel(w.div_ceil(4) + 1);
    if kernel.width() > w || kernel.height() > h {
        return Ok(LinePair::default());
    }
    let response = convolve2d(&RealMap::from_gray(image), &kernel, Border::Clamp)?;
    let kw = kernel.width() as f64;
    let third = h / 3;
    let top_rows: Vec<usize> = (0..third).collect();
    let bottom_rows: Vec<usize> = (h - third..h).rev().collect();
    let needed = (params.line_coverage * w as f64).ceil() as usize;

    let fit = |rows: &[usize]| {
        let points = edge_rows(&response, rows, kw, params);
        if points.len() < needed.max(2) {
            None
        } else {
            fit_line(&points)
        }
    };
    let pair = LinePair {
        top: fit(&top_rows),
        bottom: fit(&bottom_rows),
    };
    for y in 0..h {
        for x in 0..w {
            let (xf, yf) = (x as f64, y as f64);
            let above = pair.top.is_some_and(|l| yf <= l.at(xf));
            let below = pair.bottom.is_some_and(|l| yf >= l.at(xf));
            if above || below {
                mask.set(x, y, false);
            }
        }
    }
    Ok(pair)
}

fn one_direction(image: &GrayImage, mask: &mut BinaryMask, params: &BorderParams) -> Result<LinePair> {
    scan_rows(image, mask, params.tau_v);
    cut_oblique(image, mask, params)
}

/// Mask of the area inside scanner borders: flat margins and strong
/// straight edges near each side are removed, first along rows and then
/// along columns.
pub fn remove_border(image: &GrayImage, params: &BorderParams) -> Result<BorderRemoval> {
    let mut mask = BinaryMask::filled(image.width(), image.height(), true);
    let horizontal = one_direction(image, &mut mask, params)?;
    let mut transposed = mask.transpose();
    let vertical = one_direction(&image.transpose(), &mut transposed, params)?;
    Ok(BorderRemoval {
        mask: transposed.transpose(),
        horizontal,
        vertical,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> BorderParams {
        BorderParams {
            tau_v: 50.0,
            line_strength: 120.0,
            line_coverage: 0.6,
        }
    }

    fn noise(w: usize, h: usize) -> GrayImage {
        GrayImage::from_fn(w, h, |x, y| (((x * 7919 + y * 104_729) ^ (x * y * 31)) % 101 + 100) as u8)
    }

    #[test]
    fn textured_image_keeps_everything() {
        let r = remove_border(&noise(96, 80), &params()).unwrap();
        assert!(r.mask.data().iter().all(|&v| v));
        assert_eq!(r.horizontal, LinePair::default());
    }

    #[test]
    fn flat_top_rows_are_removed() {
        let mut img = noise(96, 80);
        for y in 0..10 {
            for x in 0..96 {
                img.set(x, y, 180);
            }
        }
        let r = remove_border(&img, &params()).unwrap();
        for y in 0..80 {
            assert_eq!(r.mask.at(40, y), y >= 10, "row {y}");
        }
    }

    #[test]
    fn dark_stripe_is_cut() {
        let mut img = noise(128, 128);
        for x in 0..128 {
            img.set(x, 20, 0);
        }
        let r = remove_border(&img, &params()).unwrap();
        let line = r.horizontal.top.expect("line found");
        assert!(line.slope.abs() < 0.05 && (line.at(64.0) - 20.0).abs() <= 2.0, "{line:?}");
        assert!(r.horizontal.bottom.is_none());
        let expected = BinaryMask::from_fn(128, 128, |_, y| y > 20);
        let agree = r.mask.data().iter().zip(expected.data()).filter(|(a, b)| a == b).count();
        assert!(agree as f64 >= 0.99 * (128 * 128) as f64);
        assert!((0..128).all(|x| !r.mask.at(x, 20)));
    }

    #[test]
    fn kernel_shape() {
        let k = oblique_kernel(33);
        assert_eq!((k.width(), k.height()), (33, 5));
        assert_eq!(oblique_kernel(4).width(), 5);
        assert_eq!(k.sum(), 0.0);
    }
}

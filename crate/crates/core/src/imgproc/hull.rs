use crate::imgproc::raster::BinaryMask;

/// Vertices of the convex hull of the true pixel centers, counter-clockwise
/// in (x, y) with collinear points removed. Returns 0, 1 or 2 points for
/// degenerate inputs.
pub fn hull_vertices(mask: &BinaryMask) -> Vec<(i64, i64)> {
    // Scan order already sorts by (y, x); monotone chain wants (x, y).
    let mut pts: Vec<(i64, i64)> = Vec::new();
    for y in 0..mask.height() {
        for x in 0..mask.width() {
            if mask.at(x, y) {
                pts.push((x as i64, y as i64));
            }
        }
    }
    pts.sort_unstable();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: (i64, i64), a: (i64, i64), b: (i64, i64)| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut hull: Vec<(i64, i64)> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// Rasterized convex hull: every pixel whose center lies in the hull of the
/// true pixel centers.
pub fn convex_hull(mask: &BinaryMask) -> BinaryMask {
    let verts = hull_vertices(mask);
    let mut out = BinaryMask::filled(mask.width(), mask.height(), false);
    if verts.is_empty() {
        return out;
    }
    let n = verts.len();
    for y in 0..mask.height() {
        let yf = y as f64;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let (ax, ay) = (verts[i].0 as f64, verts[i].1 as f64);
            let (bx, by) = (verts[(i + 1) % n].0 as f64, verts[(i + 1) % n].1 as f64);
            if ay == yf {
                lo = lo.min(ax);
                hi = hi.max(ax);
            }
            if (ay - yf) * (by - yf) < 0.0 {
                let x = ax + (yf - ay) * (bx - ax) / (by - ay);
                lo = lo.min(x);
                hi = hi.max(x);
            }
        }
        if lo > hi {
            continue;
        }
        let x0 = (lo - 1e-9).ceil().max(0.0) as usize;
        let x1 = ((hi + 1e-9).floor() as usize).min(mask.width() - 1);
        for x in x0..=x1 {
            out.set(x, y, true);
        }
    }
    out
}

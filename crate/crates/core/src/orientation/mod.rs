//! Orientation fields: gradient filter bank, weighted estimation, and the
//! doubled-angle algebra every averaging step goes through.
//!
//! Orientations are complex numbers whose phase is read modulo π. Averaging
//! them directly would cancel 1° against 179°, so every blur or weighted sum
//! squares the angles first and takes the square root afterwards.

mod bank;
mod estimate;
mod field;

pub use bank::{build_filter_bank, FilterBank, KernelShape};
pub use estimate::{
    combine_responses, estimate_orientation, estimate_orientation_with, response_maps, ridge_angle,
    EstimateOptions,
};
pub use field::{
    blur_complex, canonical, canonicalize_field, conjugate_field, decode_orf, double, double_field,
    from_angle, halve, halve_field, magnitudes, normalize_field, phase, read_orf, smooth_field,
    write_orf, DoubledSampler, OrientationField,
};

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use num_complex::Complex64;

    use super::*;
    use crate::imgproc::GrayImage;

    fn stripes(w: usize, h: usize, ridge_deg: f64, period: f64) -> GrayImage {
        // Intensity varies along the normal to the ridge direction.
        let t = ridge_deg.to_radians();
        let (nx, ny) = (-t.sin(), t.cos());
        GrayImage::from_fn(w, h, |x, y| {
            let u = x as f64 * nx + y as f64 * ny;
            (127.5 + 100.0 * (2.0 * PI * u / period).cos()).round() as u8
        })
    }

    fn angle_diff_deg(a: f64, b: f64) -> f64 {
        let d = (a - b).rem_euclid(PI);
        d.min(PI - d).to_degrees()
    }

    fn reference_bank() -> FilterBank {
        build_filter_bank(15, KernelShape::default(), 36).unwrap()
    }

    fn central_mean_error(field: &OrientationField, expected_deg: f64) -> f64 {
        let (w, h) = (field.width(), field.height());
        let (mx, my) = (w / 10, h / 10);
        let mut sum = 0.0;
        let mut n = 0;
        for y in my..h - my {
            for x in mx..w - mx {
                sum += angle_diff_deg(phase(field.at(x, y)), expected_deg.to_radians());
                n += 1;
            }
        }
        sum / n as f64
    }

    #[test]
    fn constant_image_has_zero_field() {
        let img = GrayImage::filled(40, 30, 90);
        let f = estimate_orientation(&img, &reference_bank(), 5.0).unwrap();
        assert!(f.data().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn oblique_sinusoid() {
        let img = stripes(128, 128, 30.0, 8.0);
        let f = estimate_orientation(&img, &reference_bank(), 5.0).unwrap();
        let err = central_mean_error(&f, 30.0);
        assert!(err < 2.0, "mean error {err}");
        let max = f.data().iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert_eq!(max, 1.0);
    }

    #[test]
    fn vertical_stripes() {
        let img = stripes(96, 96, 90.0, 9.0);
        let f = estimate_orientation(&img, &reference_bank(), 5.0).unwrap();
        let err = angle_diff_deg(phase(f.at(48, 48)), PI / 2.0);
        assert!(err < 2.0, "{err}");
    }

    #[test]
    fn output_is_canonical() {
        let img = stripes(64, 64, 135.0, 7.0);
        let f = estimate_orientation(&img, &reference_bank(), 5.0).unwrap();
        assert!(f.data().iter().all(|z| z.im >= 0.0 && (z.im > 0.0 || z.re >= 0.0)));
        assert!(f.data().iter().all(|z| z.norm() <= 1.0 + 1e-12));
    }

    #[test]
    fn intensity_inversion_invariance() {
        let img = stripes(64, 64, 70.0, 8.0);
        let inv = img.map(|&v| 255 - v);
        let bank = reference_bank();
        let a = estimate_orientation(&img, &bank, 5.0).unwrap();
        let b = estimate_orientation(&inv, &bank, 5.0).unwrap();
        for (p, q) in a.data().iter().zip(b.data()) {
            assert!((p.norm() - q.norm()).abs() < 1e-6);
            assert!((p - q).norm() < 1e-6);
        }
    }

    #[test]
    fn accumulator_matches_direct_weighted_mean() {
        let img = GrayImage::from_fn(48, 40, |x, y| ((x * 37 + y * y * 11 + x * y) % 251) as u8);
        let bank = reference_bank();
        let responses = response_maps(&img, &bank, 2.5).unwrap();
        let raw = combine_responses(&responses, &bank, false);
        for &(x, y) in &[(3, 4), (20, 17), (47, 39)] {
            let mut num = Complex64::new(0.0, 0.0);
            let mut den = 0.0;
            for (k, map) in responses.iter().enumerate() {
                let phi = bank.angles()[k] + PI / 2.0;
                let wk = map.at(x, y);
                num += Complex64::from_polar(wk, 2.0 * phi);
                den += wk;
            }
            let oracle = num / den;
            assert!((double(raw.at(x, y)) - oracle).norm() < 1e-9);
        }
    }

    #[test]
    fn strict_flag_sums_single_angles() {
        let img = stripes(48, 48, 20.0, 8.0);
        let bank = reference_bank();
        let responses = response_maps(&img, &bank, 2.5).unwrap();
        let strict = combine_responses(&responses, &bank, true);
        let (x, y) = (24, 24);
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = 0.0;
        for (k, map) in responses.iter().enumerate() {
            num += Complex64::from_polar(map.at(x, y), ridge_angle(bank.angles()[k]));
            den += map.at(x, y);
        }
        assert!((strict.at(x, y) - canonical(num / den)).norm() < 1e-12);
    }

    #[test]
    fn smoothing_matches_direct_convolution() {
        let f = OrientationField::from_fn(21, 17, |x, y| {
            from_angle(((x * 13 + y * 7) % 17) as f64 * 0.19, 0.3 + ((x + y) % 5) as f64 * 0.1)
        });
        let sigma = 1.3;
        let s = smooth_field(&f, sigma).unwrap();
        let d = double_field(&f);
        // Direct 2-D sum with clamped borders and the same truncated kernel.
        let radius = (3.0 * sigma).ceil() as isize;
        let g: Vec<f64> = (-radius..=radius).map(|i| (-(i * i) as f64 / (2.0 * sigma * sigma)).exp()).collect();
        let norm: f64 = g.iter().sum();
        for &(x, y) in &[(0usize, 0usize), (10, 8), (20, 16), (3, 15)] {
            let mut acc = Complex64::new(0.0, 0.0);
            for dy in -radius..=radius {
                for dx in -radius..=radius {
                    let wgt = g[(dx + radius) as usize] * g[(dy + radius) as usize] / (norm * norm);
                    acc += d.at_clamped(x as isize + dx, y as isize + dy) * wgt;
                }
            }
            assert!((s.at(x, y) - halve(acc)).norm() < 1e-9);
        }
    }

    #[test]
    fn orf_round_trip_is_bit_exact() {
        let f = OrientationField::from_fn(33, 20, |x, y| from_angle((x * y) as f64 * 0.013, (x + 2 * y) as f64 / 80.0));
        let mut first = Vec::new();
        write_orf(&mut first, &f).unwrap();
        let back = read_orf(first.as_slice()).unwrap();
        let mut second = Vec::new();
        write_orf(&mut second, &back).unwrap();
        assert_eq!(first, second);
        for (a, b) in f.data().iter().zip(back.data()) {
            assert_eq!(b.re, a.re as f32 as f64);
            assert_eq!(b.im, a.im as f32 as f64);
        }
    }

    mod props {
        use proptest::prelude::*;

        use super::*;

        proptest! {
            #[test]
            fn halve_inverts_double(re in -10.0f64..10.0, im in -10.0f64..10.0) {
                let z = canonical(Complex64::new(re, im));
                let back = halve(double(z));
                prop_assert!((back.re - z.re).abs() < 1e-12 && (back.im - z.im).abs() < 1e-12);
            }

            #[test]
            fn operations_stay_canonical(re in -5.0f64..5.0, im in -5.0f64..5.0) {
                let z = Complex64::new(re, im);
                for v in [canonical(z), halve(z), halve(double(z)), canonical(z.conj())] {
                    prop_assert!(v.im >= 0.0 && (v.im > 0.0 || v.re >= 0.0));
                    prop_assert!(!v.re.is_sign_negative() || v.re != 0.0);
                }
            }

            #[test]
            fn normalized_max_is_one(values in proptest::collection::vec((0.0f64..3.0, 0.0f64..3.2), 1..40)) {
                let n = values.len();
                let f = OrientationField::from_vec(n, 1, values.iter().map(|&(m, a)| from_angle(a, m)).collect()).unwrap();
                let g = normalize_field(&f);
                let max = g.data().iter().map(|z| z.norm()).fold(0.0, f64::max);
                let any = f.data().iter().any(|z| z.norm() > 0.0);
                if any {
                    prop_assert!((max - 1.0).abs() < 1e-12);
                } else {
                    prop_assert_eq!(max, 0.0);
                }
            }
        }
    }
}

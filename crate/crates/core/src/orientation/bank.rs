use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::imgproc::Kernel;

/// Shape of the separable derivative-of-super-Gaussian base kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelShape {
    pub sigma1: f64,
    pub alpha1: f64,
    pub sigma2: f64,
    pub alpha2: f64,
}

impl Default for KernelShape {
    fn default() -> Self {
        Self {
            sigma1: 1.0,
            alpha1: 2.0,
            sigma2: 0.85,
            alpha2: 2.0,
        }
    }
}

impl KernelShape {
    /// Base kernel value at offset `s` along the derivative axis and `t`
    /// across it.
    pub fn value(&self, s: f64, t: f64) -> f64 {
        s * (-(s / self.sigma1).abs().powf(2.0 * self.alpha1)).exp()
            * (-(t / self.sigma2).abs().powf(2.0 * self.alpha2)).exp()
    }
}

/// Directional gradient kernels at `n_angles` equally spaced directions.
#[derive(Debug, Clone)]
pub struct FilterBank {
    size: usize,
    shape: KernelShape,
    angles: Vec<f64>,
    kernels: Vec<Kernel>,
}

impl FilterBank {
    /// Side length of every kernel (odd).
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn shape(&self) -> KernelShape {
        self.shape
    }

    /// Derivative directions θ_k in [0, π).
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn kernels(&self) -> &[Kernel] {
        &self.kernels
    }

    pub fn len(&self) -> usize {
        self.kernels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kernels.is_empty()
    }
}

/// Builds the bank. An even `r` is rounded up to the next odd size.
pub fn build_filter_bank(r: usize, shape: KernelShape, n_angles: usize) -> Result<FilterBank> {
    for (name, v) in [
        ("sigma1", shape.sigma1),
        ("alpha1", shape.alpha1),
        ("sigma2", shape.sigma2),
        ("alpha2", shape.alpha2),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidParameter(format!("{name} must be positive")));
        }
    }
    if r == 0 {
        return Err(Error::InvalidParameter("filter radius must be positive".into()));
    }
    if n_angles < 4 {
        return Err(Error::InvalidParameter("at least 4 filter angles are required".into()));
    }
    let size = if r % 2 == 0 { r + 1 } else { r };
    let half = (size / 2) as isize;

    // Base table indexed by (t + half) * size + (s + half).
    let base: Vec<f64> = (-half..=half)
        .flat_map(|t| (-half..=half).map(move |s| (s, t)))
        .map(|(s, t)| shape.value(s as f64, t as f64))
        .collect();
    let lookup = |s: isize, t: isize| -> f64 {
        if s.abs() > half || t.abs() > half {
            0.0
        } else {
            base[((t + half) as usize) * size + (s + half) as usize]
        }
    };
    let interpolate = |s: f64, t: f64| -> f64 {
        let s0 = s.floor();
        let t0 = t.floor();
        let (fs, ft) = (s - s0, t - t0);
        let (si, ti) = (s0 as isize, t0 as isize);
        lookup(si, ti) * (1.0 - fs) * (1.0 - ft)
            + lookup(si + 1, ti) * fs * (1.0 - ft)
            + lookup(si, ti + 1) * (1.0 - fs) * ft
            + lookup(si + 1, ti + 1) * fs * ft
    };

    let angles: Vec<f64> = (0..n_angles).map(|k| k as f64 * PI / n_angles as f64).collect();
    let kernels = angles
        .iter()
        .map(|&theta| {
            let (sin, cos) = theta.sin_cos();
            let weights = (-half..=half)
                .flat_map(|dy| (-half..=half).map(move |dx| (dx as f64, dy as f64)))
                .map(|(dx, dy)| interpolate(dx * cos + dy * sin, -dx * sin + dy * cos))
                .collect();
            Kernel::new(size, size, weights)
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(FilterBank {
        size,
        shape,
        angles,
        kernels,
    })
}

//! Every tunable of the pipeline, with a `key = value` text form.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Normalization of the circle weights used by the refinement operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WeightNorm {
    /// Divide by the sum of absolute numerators. Squared weights are further
    /// rescaled to sum to one inside the adjuster and smoother.
    #[default]
    AbsoluteSum,
    /// Divide by the signed sum of numerators, exactly as the weight formula
    /// is usually written. Degenerates on symmetric neighborhoods.
    SignedSum,
}

impl FromStr for WeightNorm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "absolute" => Ok(Self::AbsoluteSum),
            "signed" => Ok(Self::SignedSum),
            other => Err(Error::InvalidParameter(format!("unknown weight_norm {other:?}"))),
        }
    }
}

impl std::fmt::Display for WeightNorm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::AbsoluteSum => "absolute",
            Self::SignedSum => "signed",
        })
    }
}

macro_rules! pipeline_params {
    ($( $(#[$doc:meta])* $name:ident : $ty:ty = $default:expr ),* $(,)?) => {
        #[derive(Debug, Clone, PartialEq)]
        pub struct PipelineParams {
            $( $(#[$doc])* pub $name: $ty, )*
        }

        impl Default for PipelineParams {
            fn default() -> Self {
                Self { $( $name: $default, )* }
            }
        }

        impl PipelineParams {
            pub const KEYS: &'static [&'static str] = &[$( stringify!($name) ),*];

            /// Sets one field from its textual value.
            pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
                match key {
                    $( stringify!($name) => {
                        self.$name = value.trim().parse::<$ty>().map_err(|_| {
                            Error::InvalidParameter(format!("{}: cannot parse {:?}", key, value))
                        })?;
                    } )*
                    other => {
                        return Err(Error::InvalidParameter(format!("unknown parameter {other:?}")))
                    }
                }
                Ok(())
            }

            /// One `key = value` line per field, in declaration order.
            pub fn to_config(&self) -> String {
                let mut out = String::new();
                $( let _ = writeln!(out, "{} = {}", stringify!($name), self.$name); )*
                out
            }
        }
    };
}

pipeline_params! {
    // Filter bank and estimation.
    r: usize = 15,
    sigma1: f64 = 1.0,
    alpha1: f64 = 2.0,
    sigma2: f64 = 0.85,
    alpha2: f64 = 2.0,
    n_angles: usize = 36,
    /// Post-estimation doubled-space smoothing sigma as a fraction of `r`.
    smooth_ratio: f64 = 1.0 / 3.0,
    /// Blur applied to each absolute filter response, as a fraction of `r`.
    response_ratio: f64 = 1.0 / 6.0,
    /// Sum unit vectors at single angles instead of doubled angles.
    strict_single_angle: bool = false,

    // Period estimation.
    n_samples: usize = 31,
    t_tilde: f64 = 0.25,
    segment_length: f64 = 48.0,
    grid_step: usize = 16,
    /// A spectral peak counts only if it reaches this fraction of the
    /// profile's strongest non-zero frequency.
    peak_fraction: f64 = 0.7,
    /// Lowest spectral index accepted as a ridge frequency.
    min_frequency: usize = 2,

    // Refinement operators.
    rho_s: f64 = 1.0,
    rho_d1: f64 = 1.0,
    rho_a: f64 = 0.7,
    tau1: f64 = 0.3,
    tau2: f64 = 0.5,
    tau3: f64 = 0.1,
    tau4: f64 = 0.1,
    s: f64 = 0.9,
    epsilon_w: f64 = 1e-6,
    weight_norm: WeightNorm = WeightNorm::AbsoluteSum,
    /// Circle point count; 0 selects max(8, round(2πR)).
    n_circle: usize = 0,
    m1_erode: usize = 2,
    strength_sigma: f64 = 2.0,
    m2_dilate: usize = 2,
    i3_sigma: f64 = 2.0,
    mf_erode: usize = 4,
    m4_dilate: usize = 3,
    iter_erode: usize = 2,
    iter_dilate: usize = 1,
    change_dilate: usize = 1,
    blend_sigma: f64 = 1.0,
    iteration_cap: usize = 100,

    // Equalisation.
    hist_sigma: f64 = 2.0,
    clip_fraction: f64 = 0.01,

    // Border removal.
    tau_v: f64 = 50.0,
    /// Minimum mean grey-level step (per kernel column) of an oblique line.
    line_strength: f64 = 120.0,
    /// Fraction of columns that must support a fitted line.
    line_coverage: f64 = 0.6,

    // Segmentation.
    tau0: f64 = 100.0,
    tau_edge: f64 = 0.15,
    median_radius: usize = 2,
    seg_sigma: f64 = 1.5,
    min_radius: usize = 2,
    seg_dilate: usize = 3,
    seg_erode: usize = 5,
    seg_final_dilate: usize = 2,
    keep_components: usize = 1,
    edge_low: f64 = 0.1,
    edge_high: f64 = 0.3,
    edge_sigma: f64 = 4.0,

    // Ridge amplification.
    amplify_radius: usize = 4,
    t_min_lo: f64 = 0.0,
    t_min_hi: f64 = 128.0,
    t_max_lo: f64 = 128.0,
    t_max_hi: f64 = 255.0,
}

impl PipelineParams {
    /// Parses a config text. Blank lines and `#` comments are ignored; keys
    /// not mentioned keep their defaults.
    pub fn from_config(text: &str) -> Result<Self> {
        let mut params = Self::default();
        params.apply_config(text)?;
        Ok(params)
    }

    pub fn apply_config(&mut self, text: &str) -> Result<()> {
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidParameter(format!("line {}: expected key = value", lineno + 1))
            })?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("sigma1", self.sigma1),
            ("alpha1", self.alpha1),
            ("sigma2", self.sigma2),
            ("alpha2", self.alpha2),
            ("smooth_ratio", self.smooth_ratio),
            ("response_ratio", self.response_ratio),
            ("segment_length", self.segment_length),
            ("rho_s", self.rho_s),
            ("rho_d1", self.rho_d1),
            ("rho_a", self.rho_a),
            ("epsilon_w", self.epsilon_w),
            ("strength_sigma", self.strength_sigma),
            ("i3_sigma", self.i3_sigma),
            ("blend_sigma", self.blend_sigma),
            ("hist_sigma", self.hist_sigma),
            ("seg_sigma", self.seg_sigma),
            ("edge_sigma", self.edge_sigma),
            ("line_strength", self.line_strength),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be positive")));
            }
        }
        let unit = [
            ("s", self.s),
            ("t_tilde", self.t_tilde),
            ("peak_fraction", self.peak_fraction),
            ("tau1", self.tau1),
            ("tau2", self.tau2),
            ("tau3", self.tau3),
            ("tau4", self.tau4),
        ];
        for (name, v) in unit {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::InvalidParameter(format!("{name} must lie in (0, 1]")));
            }
        }
        if self.r == 0 || self.n_angles < 4 || self.n_samples < 8 || self.grid_step == 0 {
            return Err(Error::InvalidParameter(
                "r > 0, n_angles >= 4, n_samples >= 8 and grid_step > 0 are required".into(),
            ));
        }
        if self.min_frequency > self.n_samples / 2 {
            return Err(Error::InvalidParameter("min_frequency must not exceed n_samples / 2".into()));
        }
        if self.iter_erode <= self.iter_dilate {
            return Err(Error::InvalidParameter(
                "iter_erode must exceed iter_dilate for iterative smoothing to terminate".into(),
            ));
        }
        if !(self.t_min_lo < self.t_min_hi && self.t_max_lo < self.t_max_hi) {
            return Err(Error::InvalidParameter("amplification thresholds must increase".into()));
        }
        Ok(())
    }

    /// Filter radius rounded up to the next odd integer.
    pub fn odd_radius(r: usize) -> usize {
        if r % 2 == 0 {
            r + 1
        } else {
            r
        }
    }
}

//! Model-0 distribution families and their robust fits.
//!
//! A [`BaseModel`] is the hypothesized parametric distribution whose adequacy
//! is probed by the LP machinery: Gaussian or Laplace, parameterized by
//! location and scale. Fitting is deliberately robust: median + IQR/1.349 for
//! the Gaussian, median + mean absolute deviation (the MLE) for the Laplace.

use crate::error::{Error, Result};

/// Standard-normal special functions, accurate to well below 1e-12.
pub(crate) mod normal {
    use std::f64::consts::{FRAC_2_SQRT_PI, PI, SQRT_2};

    /// erf via the non-alternating confluent series, valid for |x| <= 3.
    fn erf_series(x: f64) -> f64 {
        let t = 2.0 * x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 1u32;
        while term > 1e-18 * sum {
            term *= t / (2 * k + 1) as f64;
            sum += term;
            k += 1;
        }
        FRAC_2_SQRT_PI * x * (-x * x).exp() * sum
    }

    /// erfc via the Legendre continued fraction (modified Lentz), x >= 3.
    fn erfc_cf(x: f64) -> f64 {
        let mut f = x;
        let mut c = f;
        let mut d = 0.0;
        for n in 1..400 {
            let a = n as f64 / 2.0;
            d = x + a * d;
            if d == 0.0 {
                d = 1e-300;
            }
            c = x + a / c;
            if c == 0.0 {
                c = 1e-300;
            }
            d = 1.0 / d;
            let delta = c * d;
            f *= delta;
            if (delta - 1.0).abs() < 1e-17 {
                break;
            }
        }
        (-x * x).exp() / PI.sqrt() / f
    }

    pub fn erfc(x: f64) -> f64 {
        if x < 0.0 {
            2.0 - erfc(-x)
        } else if x <= 3.0 {
            1.0 - erf_series(x)
        } else if x > 30.0 {
            0.0
        } else {
            erfc_cf(x)
        }
    }

    pub fn cdf(z: f64) -> f64 {
        if z < 0.0 {
            0.5 * erfc(-z / SQRT_2)
        } else {
            1.0 - 0.5 * erfc(z / SQRT_2)
        }
    }

    pub fn pdf(z: f64) -> f64 {
        (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
    }

    /// Acklam's rational approximation for the standard-normal quantile.
    fn quantile_initial(p: f64) -> f64 {
        const A: [f64; 6] = [
            -3.969683028665376e+01,
            2.209460984245205e+02,
            -2.759285104469687e+02,
            1.383577518672690e+02,
            -3.066479806614716e+01,
            2.506628277459239e+00,
        ];
        const B: [f64; 5] = [
            -5.447609879822406e+01,
            1.615858368580409e+02,
            -1.556989798598866e+02,
            6.680131188771972e+01,
            -1.328068155288572e+01,
        ];
        const C: [f64; 6] = [
            -7.784894002430293e-03,
            -3.223964580411365e-01,
            -2.400758277161838e+00,
            -2.549732539343734e+00,
            4.374664141464968e+00,
            2.938163982698783e+00,
        ];
        const D: [f64; 4] = [
            7.784695709041462e-03,
            3.224671290700398e-01,
            2.445134137142996e+00,
            3.754408661907416e+00,
        ];
        const P_LOW: f64 = 0.02425;

        if p < P_LOW {
            let q = (-2.0 * p.ln()).sqrt();
            (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
                / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
        } else if p <= 1.0 - P_LOW {
            let q = p - 0.5;
            let r = q * q;
            (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
                / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
        } else {
            -quantile_initial(1.0 - p)
        }
    }

    pub fn quantile(p: f64) -> f64 {
        // reflect the upper half: the lower-tail cdf keeps full relative
        // precision, so Newton is not limited by cancellation against 1
        if p > 0.5 {
            return -quantile(1.0 - p);
        }
        let mut z = quantile_initial(p);
        // Newton refinement against the high-accuracy cdf.
        for _ in 0..3 {
            let e = cdf(z) - p;
            if e == 0.0 {
                break;
            }
            z -= e / pdf(z);
        }
        z
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Gaussian,
    Laplace,
}

impl Family {
    pub fn label(&self) -> &'static str {
        match self {
            Family::Gaussian => "gaussian",
            Family::Laplace => "laplace",
        }
    }
}

/// A location-scale model-0 distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaseModel {
    family: Family,
    location: f64,
    scale: f64,
}

impl BaseModel {
    pub fn new(family: Family, location: f64, scale: f64) -> Result<Self> {
        if !location.is_finite() || !scale.is_finite() {
            return Err(Error::InvalidInput(
                "base model parameters must be finite".into(),
            ));
        }
        if scale <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "scale must be positive, got {scale}"
            )));
        }
        Ok(BaseModel {
            family,
            location,
            scale,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn location(&self) -> f64 {
        self.location
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::InvalidInput(format!("non-finite x: {x}")));
        }
        let z = (x - self.location) / self.scale;
        Ok(match self.family {
            Family::Gaussian => normal::pdf(z) / self.scale,
            Family::Laplace => (-z.abs()).exp() / (2.0 * self.scale),
        })
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::InvalidInput(format!("non-finite x: {x}")));
        }
        let z = (x - self.location) / self.scale;
        Ok(match self.family {
            Family::Gaussian => normal::cdf(z),
            Family::Laplace => {
                if z < 0.0 {
                    0.5 * z.exp()
                } else {
                    1.0 - 0.5 * (-z).exp()
                }
            }
        })
    }

    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::Domain(format!("quantile argument {u} not in (0,1)")));
        }
        let z = match self.family {
            Family::Gaussian => normal::quantile(u),
            Family::Laplace => {
                if u < 0.5 {
                    (2.0 * u).ln()
                } else {
                    -(2.0 * (1.0 - u)).ln()
                }
            }
        };
        Ok(self.location + self.scale * z)
    }
}

fn check_sample(sample: &[f64], min: usize) -> Result<()> {
    if sample.len() < min {
        return Err(Error::SampleTooSmall {
            got: sample.len(),
            need: min,
        });
    }
    if let Some(bad) = sample.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "sample contains non-finite value {bad}"
        )));
    }
    Ok(())
}

/// Type-7 quantile (linear interpolation, h = (n-1)p + 1) of sorted data.
pub fn quantile_type7(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    debug_assert!(n > 0 && (0.0..=1.0).contains(&p));
    let h = (n - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = lo.min(n - 1).max(0);
    if hi + 1 >= n {
        return sorted[n - 1];
    }
    let frac = h - lo as f64;
    sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
}

pub fn median(sorted: &[f64]) -> f64 {
    quantile_type7(sorted, 0.5)
}

fn sorted_copy(sample: &[f64]) -> Vec<f64> {
    let mut v = sample.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

/// Gaussian fit with median location and IQR/1.349 scale.
pub fn fit_gaussian_robust(sample: &[f64]) -> Result<BaseModel> {
    check_sample(sample, 4)?;
    let sorted = sorted_copy(sample);
    let iqr = quantile_type7(&sorted, 0.75) - quantile_type7(&sorted, 0.25);
    if iqr <= 0.0 {
        return Err(Error::DegenerateSample(
            "interquartile range is zero".into(),
        ));
    }
    BaseModel::new(Family::Gaussian, median(&sorted), iqr / 1.349)
}

/// Laplace MLE: median location, mean absolute deviation scale.
pub fn fit_laplace_mle(sample: &[f64]) -> Result<BaseModel> {
    check_sample(sample, 2)?;
    let sorted = sorted_copy(sample);
    let mu = median(&sorted);
    let mad = sorted.iter().map(|x| (x - mu).abs()).sum::<f64>() / sorted.len() as f64;
    if mad <= 0.0 {
        return Err(Error::DegenerateSample(
            "mean absolute deviation is zero".into(),
        ));
    }
    BaseModel::new(Family::Laplace, mu, mad)
}

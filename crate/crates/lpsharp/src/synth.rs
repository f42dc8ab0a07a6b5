//! Seeded synthetic test-fixture generation.
//!
//! Inverse-transform sampling through the base quantile: one ChaCha8 uniform
//! stream per call, so a given seed always yields the same file bytes.

use crate::base_models::BaseModel;
use crate::error::{Error, Result};
use crate::ica::ExperimentSeries;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Draw `k_days` series of `n_per_day` observations from `base`.
pub fn generate(base: &BaseModel, n_per_day: usize, k_days: usize, seed: u64) -> Result<Vec<ExperimentSeries>> {
    if n_per_day == 0 {
        return Err(Error::InvalidParams("n-per-day must be positive".into()));
    }
    if k_days == 0 {
        return Err(Error::InvalidParams("k-days must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(k_days);
    for day in 1..=k_days {
        let mut values = Vec::with_capacity(n_per_day);
        for _ in 0..n_per_day {
            // open-interval uniform keeps the quantile finite
            let mut u: f64 = rng.gen();
            while u <= 0.0 {
                u = rng.gen();
            }
            values.push(base.quantile(u)?);
        }
        out.push(ExperimentSeries {
            series_id: day as u32,
            values,
        });
    }
    Ok(out)
}

/// Render series in the `day,value` input schema.
pub fn to_csv(dataset: &[ExperimentSeries]) -> String {
    let mut out = String::from("day,value\n");
    for series in dataset {
        for v in &series.values {
            out.push_str(&format!("{},{:.6}\n", series.series_id, v));
        }
    }
    out
}

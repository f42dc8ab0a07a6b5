//! LP coefficient estimation, screening, and the surprisal index.

use crate::base_models::BaseModel;
use crate::error::{Error, Result};
use crate::lp_basis::LPBasis;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Penalty {
    Aic,
    Bic,
}

impl Penalty {
    pub fn gamma(&self, n: usize) -> f64 {
        match self {
            Penalty::Aic => 2.0,
            Penalty::Bic => (n as f64).ln(),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Penalty::Aic => "aic",
            Penalty::Bic => "bic",
        }
    }
}

/// How raw coefficients are pruned into the retained set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScreenMode {
    /// OPEN penalization on the full magnitude-sorted vector (default).
    Open,
    /// Keep every coefficient with |raw| > 2/sqrt(n).
    Threshold,
    /// Threshold first, then OPEN on the survivors.
    ThresholdThenOpen,
}

/// Raw and smoothed LP coefficients of one sample against one base model.
#[derive(Debug, Clone)]
pub struct LPProfile {
    pub n: usize,
    pub raw: Vec<f64>,
    pub smoothed: Vec<f64>,
    /// Selected orders (1-based), ascending.
    pub selected: Vec<usize>,
    pub surprisal: f64,
    pub penalty: Penalty,
    pub base: BaseModel,
}

/// Raw coefficients from rank-transformed values already on (0, 1).
pub fn estimate_lp_from_uniforms(us: &[f64], basis: &LPBasis) -> Vec<f64> {
    let n = us.len() as f64;
    (1..=basis.max_order())
        .map(|j| us.iter().map(|&u| basis.eval_s(j, u).unwrap()).sum::<f64>() / n)
        .collect()
}

/// raw[j] = mean of T_j(x_i; F0).
pub fn estimate_lp(sample: &[f64], base: &BaseModel, basis: &LPBasis) -> Result<Vec<f64>> {
    let need = 2 * (basis.max_order() + 1);
    if sample.len() < need {
        return Err(Error::SampleTooSmall {
            got: sample.len(),
            need,
        });
    }
    let us = sample
        .iter()
        .map(|&x| base.cdf(x))
        .collect::<Result<Vec<f64>>>()?;
    Ok(estimate_lp_from_uniforms(&us, basis))
}

/// Orders whose raw coefficient clears the asymptotic 2/sqrt(n) bar.
pub fn threshold_screen(raw: &[f64], n: usize) -> Vec<usize> {
    let thr = 2.0 / (n as f64).sqrt();
    raw.iter()
        .enumerate()
        .filter(|(_, c)| c.abs() > thr)
        .map(|(i, _)| i + 1)
        .collect()
}

/// OPEN: maximize (sum of top-m squared coefficients - gamma_n * m / n).
///
/// Candidates must carry their original 1-based order so the scheme can run
/// on threshold survivors as well as on the full vector.
fn open_on_candidates(candidates: &[(usize, f64)], n: usize, penalty: Penalty) -> Vec<usize> {
    let mut order: Vec<&(usize, f64)> = candidates.iter().collect();
    // magnitude descending, ties broken by lower order
    order.sort_by(|a, b| {
        b.1.abs()
            .partial_cmp(&a.1.abs())
            .unwrap()
            .then(a.0.cmp(&b.0))
    });
    let rate = penalty.gamma(n) / n as f64;
    let mut best_m = 0;
    let mut best = 0.0; // OPEN(0) = 0: the empty model can win
    let mut acc = 0.0;
    for (m, (_, c)) in order.iter().enumerate() {
        acc += c * c;
        let value = acc - rate * (m + 1) as f64;
        if value > best {
            best = value;
            best_m = m + 1;
        }
    }
    let mut selected: Vec<usize> = order[..best_m].iter().map(|t| t.0).collect();
    selected.sort_unstable();
    selected
}

fn smooth(raw: &[f64], selected: &[usize]) -> Vec<f64> {
    let mut out = vec![0.0; raw.len()];
    for &j in selected {
        out[j - 1] = raw[j - 1];
    }
    out
}

/// OPEN selection over the full coefficient vector.
pub fn open_select(raw: &[f64], n: usize, penalty: Penalty) -> (Vec<usize>, Vec<f64>) {
    let candidates: Vec<(usize, f64)> =
        raw.iter().enumerate().map(|(i, &c)| (i + 1, c)).collect();
    let selected = open_on_candidates(&candidates, n, penalty);
    let smoothed = smooth(raw, &selected);
    (selected, smoothed)
}

/// Sum of squared retained coefficients: squared L2 distance of d from 1.
pub fn surprisal_index(smoothed: &[f64]) -> f64 {
    smoothed.iter().map(|c| c * c).sum()
}

fn unique_count(sample: &[f64]) -> usize {
    let mut v = sample.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v.dedup();
    v.len()
}

/// Estimate, screen, and assemble a profile.
pub fn fit_profile(
    sample: &[f64],
    base: &BaseModel,
    basis: &LPBasis,
    penalty: Penalty,
    mode: ScreenMode,
) -> Result<LPProfile> {
    let raw = estimate_lp(sample, base, basis)?;
    let n = sample.len();
    let r = unique_count(sample);
    if basis.max_order() >= r {
        return Err(Error::DegenerateSample(format!(
            "max order {} not below the {} unique values observed",
            basis.max_order(),
            r
        )));
    }
    let selected = match mode {
        ScreenMode::Open => open_on_candidates(
            &raw.iter().enumerate().map(|(i, &c)| (i + 1, c)).collect::<Vec<_>>(),
            n,
            penalty,
        ),
        ScreenMode::Threshold => threshold_screen(&raw, n),
        ScreenMode::ThresholdThenOpen => {
            let survivors: Vec<(usize, f64)> = threshold_screen(&raw, n)
                .into_iter()
                .map(|j| (j, raw[j - 1]))
                .collect();
            open_on_candidates(&survivors, n, penalty)
        }
    };
    let smoothed = smooth(&raw, &selected);
    let surprisal = surprisal_index(&smoothed);
    Ok(LPProfile {
        n,
        raw,
        smoothed,
        selected,
        surprisal,
        penalty,
        base: *base,
    })
}

//! Informative Component Analysis over parallel experiment series.
//!
//! Each series gets a robust base fit and a smoothed LP row; the rows stack
//! into an LP-map, and running both families side by side gives the
//! Gauss-vs-Laplace surprisal comparison.

use crate::base_models::{fit_gaussian_robust, fit_laplace_mle, BaseModel, Family};
use crate::error::{Error, Result};
use crate::lp_basis::LPBasis;
use crate::lp_inference::{fit_profile, Penalty, ScreenMode};
use std::collections::BTreeSet;

/// One day (or run) of measurements.
#[derive(Debug, Clone)]
pub struct ExperimentSeries {
    pub series_id: u32,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
pub struct IcaConfig {
    pub m_max: usize,
    pub penalty: Penalty,
    pub mode: ScreenMode,
    pub skip_degenerate: bool,
}

impl Default for IcaConfig {
    fn default() -> Self {
        IcaConfig {
            m_max: 4,
            penalty: Penalty::Aic,
            mode: ScreenMode::Open,
            skip_degenerate: false,
        }
    }
}

/// A fitted LP-map row.
#[derive(Debug, Clone)]
pub struct FitRow {
    pub series_id: u32,
    pub smoothed: Vec<f64>,
    pub surprisal: f64,
    pub location: f64,
    pub scale: f64,
}

/// Row outcome; degenerate series appear explicitly under skip-degenerate.
#[derive(Debug, Clone)]
pub enum MapRow {
    Fitted(FitRow),
    Degenerate { series_id: u32, error: String },
}

impl MapRow {
    pub fn series_id(&self) -> u32 {
        match self {
            MapRow::Fitted(r) => r.series_id,
            MapRow::Degenerate { series_id, .. } => *series_id,
        }
    }
}

/// Series-by-order matrix of smoothed LP coefficients.
#[derive(Debug, Clone)]
pub struct LPMap {
    pub family: Family,
    pub m_max: usize,
    pub rows: Vec<MapRow>,
}

pub fn fit_base(values: &[f64], family: Family) -> Result<BaseModel> {
    match family {
        Family::Gaussian => fit_gaussian_robust(values),
        Family::Laplace => fit_laplace_mle(values),
    }
}

/// Fit one series: robust base, then the smoothed LP profile.
pub fn fit_series(
    series: &ExperimentSeries,
    family: Family,
    cfg: &IcaConfig,
    basis: &LPBasis,
) -> Result<FitRow> {
    let attach = |e: Error| Error::Series {
        series_id: series.series_id,
        source: Box::new(e),
    };
    let base = fit_base(&series.values, family).map_err(attach)?;
    let profile =
        fit_profile(&series.values, &base, basis, cfg.penalty, cfg.mode).map_err(attach)?;
    Ok(FitRow {
        series_id: series.series_id,
        smoothed: profile.smoothed,
        surprisal: profile.surprisal,
        location: base.location(),
        scale: base.scale(),
    })
}

/// Fit every series; rows come back ordered by series id.
pub fn build_lp_map(
    dataset: &[ExperimentSeries],
    family: Family,
    cfg: &IcaConfig,
    basis: &LPBasis,
) -> Result<LPMap> {
    if dataset.is_empty() {
        return Err(Error::EmptySeries);
    }
    let mut seen = BTreeSet::new();
    for s in dataset {
        if !seen.insert(s.series_id) {
            return Err(Error::DuplicateSeriesId(s.series_id));
        }
    }
    let mut rows = Vec::with_capacity(dataset.len());
    for series in dataset {
        match fit_series(series, family, cfg, basis) {
            Ok(row) => rows.push(MapRow::Fitted(row)),
            Err(e) if cfg.skip_degenerate => rows.push(MapRow::Degenerate {
                series_id: series.series_id,
                error: e.to_string(),
            }),
            Err(e) => return Err(e),
        }
    }
    rows.sort_by_key(|r| r.series_id());
    Ok(LPMap {
        family,
        m_max: basis.max_order(),
        rows,
    })
}

/// Per-series surprisal under both families.
#[derive(Debug, Clone, Copy)]
pub struct SurprisalRow {
    pub series_id: u32,
    pub si_gauss: f64,
    pub si_laplace: f64,
}

pub fn compare_surprisal(
    dataset: &[ExperimentSeries],
    cfg: &IcaConfig,
    basis: &LPBasis,
) -> Result<Vec<SurprisalRow>> {
    let gauss = build_lp_map(dataset, Family::Gaussian, cfg, basis)?;
    let laplace = build_lp_map(dataset, Family::Laplace, cfg, basis)?;
    gauss
        .rows
        .iter()
        .zip(&laplace.rows)
        .map(|(g, l)| match (g, l) {
            (MapRow::Fitted(g), MapRow::Fitted(l)) => Ok(SurprisalRow {
                series_id: g.series_id,
                si_gauss: g.surprisal,
                si_laplace: l.surprisal,
            }),
            _ => Err(Error::DegenerateSample(format!(
                "series {} degenerate under at least one family",
                g.series_id()
            ))),
        })
        .collect()
}

use serde::{Deserialize, Serialize};

use super::level::{mu_estimate, MuConfig};
use crate::error::{Error, Result};
use crate::polynomial::Polynomial;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    pub mu: MuConfig,
    /// Points per grid.
    pub grid_points: usize,
    pub small_range: (f64, f64),
    pub large_range: (f64, f64),
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            mu: MuConfig::default(),
            grid_points: 12,
            small_range: (1e-6, 1e-2),
            large_range: (1e2, 1e6),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub t: f64,
    pub mu: Option<f64>,
    pub grows_with_budget: bool,
}

/// Least-squares line through `(log10 t, log10 mu)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Regression {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    pub r_squared: f64,
    pub points_used: usize,
}

/// Fitted (not optimal) exponents and constant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub alpha: f64,
    pub beta: f64,
    pub c: f64,
    pub small_grid: Vec<GridPoint>,
    pub large_grid: Vec<GridPoint>,
    pub alpha_regression: Regression,
    pub beta_regression: Regression,
    /// Some grid estimate kept growing with the ray budget.
    pub growth_flag: bool,
    #[serde(skip)]
    pub level_points: Vec<Vec<f64>>,
}

/// `count` points from `lo` to `hi`, equally spaced in `log10`.
pub fn geometric_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.log10(), hi.log10());
    match count {
        0 => vec![],
        1 => vec![lo],
        _ => (0..count)
            .map(|i| 10f64.powf(a + (b - a) * i as f64 / (count - 1) as f64))
            .collect(),
    }
}

pub fn regression(points: &[(f64, f64)]) -> Result<Regression> {
    let m = points.len();
    if m < 4 {
        return Err(Error::DegenerateRegression(m));
    }
    let mf = m as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / mf;
    let my = points.iter().map(|p| p.1).sum::<f64>() / mf;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateRegression(m));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = points.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    Ok(Regression {
        slope,
        intercept,
        slope_stderr: (sse / (mf - 2.0) / sxx).sqrt(),
        r_squared: if syy == 0.0 { 1.0 } else { 1.0 - sse / syy },
        points_used: m,
    })
}

fn grid(
    g: &Polynomial,
    h: &Polynomial,
    ts: &[f64],
    cfg: &MuConfig,
    points: &mut Vec<Vec<f64>>,
) -> Result<Vec<GridPoint>> {
    ts.iter()
        .map(|&t| {
            let est = mu_estimate(g, h, t, cfg)?;
            points.extend(est.points);
            Ok(GridPoint {
                t,
                mu: est.value,
                grows_with_budget: est.grows_with_budget,
            })
        })
        .collect()
}

fn usable(grid: &[GridPoint]) -> Vec<(f64, f64)> {
    grid.iter()
        .filter_map(|p| {
            p.mu.filter(|m| *m > 0.0 && m.is_finite())
                .map(|m| (p.t.log10(), m.log10()))
        })
        .collect()
}

/// Fits `mu(t) ~ t^alpha` as `t -> 0+` and `mu(t) ~ t^beta` as `t -> inf`,
/// then takes `c` as the smallest `(|g|^alpha + |g|^beta) / |h|` over every
/// level-set point reached.
pub fn fit_exponents(g: &Polynomial, h: &Polynomial, cfg: &FitConfig) -> Result<ExponentFit> {
    let mut level_points = Vec::new();
    let small_t = geometric_grid(cfg.small_range.0, cfg.small_range.1, cfg.grid_points);
    let large_t = geometric_grid(cfg.large_range.0, cfg.large_range.1, cfg.grid_points);
    let small_grid = grid(g, h, &small_t, &cfg.mu, &mut level_points)?;
    let large_grid = grid(g, h, &large_t, &cfg.mu, &mut level_points)?;
    let alpha_regression = regression(&usable(&small_grid))?;
    let beta_regression = regression(&usable(&large_grid))?;
    let (alpha, beta) = (alpha_regression.slope, beta_regression.slope);
    let (gf, hf) = (g.to_float(), h.to_float());
    let mut c = f64::INFINITY;
    for x in &level_points {
        let hv = hf.eval(x).abs();
        if hv > 0.0 {
            let gv = gf.eval(x).abs();
            c = c.min((gv.powf(alpha) + gv.powf(beta)) / hv);
        }
    }
    if !c.is_finite() {
        c = f64::MAX;
    }
    let growth_flag = small_grid.iter().chain(&large_grid).any(|p| p.grows_with_budget);
    Ok(ExponentFit {
        alpha,
        beta,
        c: c.max(f64::MIN_POSITIVE),
        small_grid,
        large_grid,
        alpha_regression,
        beta_regression,
        growth_flag,
        level_points,
    })
}

//! Figure presets: fixed parameter grids written as one CSV each.

use std::f64::consts::PI;
use std::sync::Arc;

use cavity_udw_core::evolution::{gamma_zeros, Sign};
use cavity_udw_core::model::{
    gaussian_zero_mode, DetectorParams, DetectorState, SwitchingFunction, Trajectory, ZeroModeState,
};
use cavity_udw_core::registry::Registry;
use cavity_udw_core::{Complex64, Error};
use rayon::prelude::*;

use crate::config::{Physics, Quantity, Settings};
use crate::output::{Cell, Column, Table};
use crate::run::{evaluate, finish_rows, status_columns, PointRows};

/// One point of a figure: a series label, the abscissa and the inputs.
pub struct FigPoint {
    pub series: String,
    pub x: f64,
    pub physics: Physics,
}

pub trait Figure: Send + Sync {
    fn name(&self) -> &'static str;
    fn axis(&self) -> Column;
    /// What each point computes; its first column is plotted.
    fn quantity(&self) -> Quantity;
    fn quantity_column(&self) -> Column;
    fn points(&self) -> Result<Vec<FigPoint>, Error>;
}

pub fn figures() -> Registry<dyn Figure> {
    let mut r: Registry<dyn Figure> = Registry::new("figure");
    r.register("1", Arc::new(RelativeStrengthFigure))
        .register("2", Arc::new(ZeroModeRatioFigure))
        .register("3", Arc::new(MinkowskiGapFigure));
    r
}

/// Evaluates every point in parallel and tabulates them in preset order.
pub fn render(
    fig: &dyn Figure,
    settings: &Settings,
    pool: &rayon::ThreadPool,
) -> Result<(Table, Vec<String>), Error> {
    let points = fig.points()?;
    let q = fig.quantity();
    let results: Vec<PointRows> = pool.install(|| {
        points
            .par_iter()
            .map(|p| evaluate(q, &p.physics, settings))
            .collect()
    });
    let mut columns = vec![fig.axis(), Column::new("series", "label"), fig.quantity_column()];
    columns.extend(status_columns());
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (p, mut r) in points.iter().zip(results) {
        if let Some(m) = &r.message {
            failures.push(format!("{} at {} = {}: {m}", p.series, fig.axis().name, p.x));
        }
        for row in &mut r.rows {
            row.truncate(1);
        }
        rows.extend(finish_rows(vec![Cell::Num(p.x), Cell::Text(p.series.clone())], r));
    }
    Ok((Table { columns, rows }, failures))
}

fn physics(
    length: f64,
    gap: f64,
    zero_mode: ZeroModeState,
    gamma: Option<f64>,
    trajectory: Trajectory,
    sigma: f64,
) -> Result<Physics, Error> {
    Ok(Physics {
        length,
        detector: DetectorParams::new(gap, 1.0)?,
        zero_mode,
        gamma,
        trajectory,
        switching: SwitchingFunction::new(sigma, 0.0)?,
        initial: DetectorState::ground(),
        sign: Sign::Plus,
    })
}

/// Sorted union of a grid and extra points lying inside its range.
fn with_extra(mut grid: Vec<f64>, extra: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let (lo, hi) = (grid[0], grid[grid.len() - 1]);
    grid.extend(extra.into_iter().filter(|x| (lo..=hi).contains(x)));
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

/// S^+ against the zero-mode squeezing gamma, L = 1.
pub struct RelativeStrengthFigure;

pub const FIG1_GAPS: [f64; 2] = [1.0, 0.1];
pub const FIG1_SIGMAS: [f64; 7] = [1e-5, 1e-3, 1e-2, 0.04, 0.07, 0.1, 0.2];

impl Figure for RelativeStrengthFigure {
    fn name(&self) -> &'static str {
        "fig1"
    }

    fn axis(&self) -> Column {
        Column::new("gamma", "1")
    }

    fn quantity(&self) -> Quantity {
        Quantity::RelativeStrength
    }

    fn quantity_column(&self) -> Column {
        Column::new("s_plus", "1")
    }

    fn points(&self) -> Result<Vec<FigPoint>, Error> {
        // 20 points per decade over [1e-2, 1e4]
        let grid: Vec<f64> = (0..=120).map(|k| 10f64.powf(-2.0 + k as f64 / 20.0)).collect();
        let mut out = Vec::new();
        for gap in FIG1_GAPS {
            for sigma in FIG1_SIGMAS {
                let sw = SwitchingFunction::new(sigma, 0.0)?;
                let (gp, gm) = gamma_zeros(1.0, &sw, &DetectorParams::new(gap, 1.0)?)?;
                for gamma in with_extra(grid.clone(), [gp, gm]) {
                    out.push(FigPoint {
                        series: format!("omega={gap} sigma={sigma}"),
                        x: gamma,
                        physics: physics(
                            1.0,
                            gap,
                            gaussian_zero_mode(gamma)?,
                            Some(gamma),
                            Trajectory::static_detector(),
                            sigma,
                        )?,
                    });
                }
            }
        }
        Ok(out)
    }
}

/// Z_zm = F_zm / F_osc against the acceleration; L = 1, Omega = 1, <P^2> = 1e-6.
pub struct ZeroModeRatioFigure;

pub const FIG2_SIGMAS: [f64; 5] = [0.15, 0.25, 0.35, 0.45, 0.5];
pub const FIG2_PP: f64 = 1e-6;

/// Zeros of the accelerated zero-mode response at tau0 = 0: a = (pi/2 + k pi)/(sigma^2 Omega).
pub fn zm_zeros(sigma: f64, gap: f64, a_max: f64) -> Vec<f64> {
    (0..)
        .map(|k| (PI / 2.0 + k as f64 * PI) / (sigma * sigma * gap))
        .take_while(|&a| a <= a_max)
        .collect()
}

impl Figure for ZeroModeRatioFigure {
    fn name(&self) -> &'static str {
        "fig2"
    }

    fn axis(&self) -> Column {
        Column::new("acceleration", "1/length")
    }

    fn quantity(&self) -> Quantity {
        Quantity::RatioZmOsc
    }

    fn quantity_column(&self) -> Column {
        Column::new("z_zm", "1")
    }

    fn points(&self) -> Result<Vec<FigPoint>, Error> {
        let grid: Vec<f64> = (1..=40).map(|k| 0.25 * k as f64).collect();
        // minimal-uncertainty state with the given momentum variance
        let zm = ZeroModeState::new(0.0, 0.0, 0.25 / FIG2_PP, FIG2_PP, Complex64::new(0.0, 0.5))?;
        let mut out = Vec::new();
        for sigma in FIG2_SIGMAS {
            for a in with_extra(grid.clone(), zm_zeros(sigma, 1.0, 10.0)) {
                out.push(FigPoint {
                    series: format!("sigma={sigma}"),
                    x: a,
                    physics: physics(1.0, 1.0, zm, None, Trajectory::accelerated(a)?, sigma)?,
                });
            }
        }
        Ok(out)
    }
}

/// |F_Mink - F_osc| / F_Mink against the gap; a = sigma = 1.
pub struct MinkowskiGapFigure;

pub const FIG3_LENGTHS: [f64; 5] = [0.01, 0.15, 0.2, 0.25, 0.3];

impl Figure for MinkowskiGapFigure {
    fn name(&self) -> &'static str {
        "fig3"
    }

    fn axis(&self) -> Column {
        Column::new("gap", "1/length")
    }

    fn quantity(&self) -> Quantity {
        Quantity::MinkowskiGap
    }

    fn quantity_column(&self) -> Column {
        Column::new("relative_gap", "1")
    }

    fn points(&self) -> Result<Vec<FigPoint>, Error> {
        let zm = gaussian_zero_mode(1.0)?;
        let mut out = Vec::new();
        for length in FIG3_LENGTHS {
            for k in 1..=30 {
                let gap = k as f64 / 10.0;
                out.push(FigPoint {
                    series: format!("L={length}"),
                    x: gap,
                    physics: physics(length, gap, zm, Some(1.0), Trajectory::accelerated(1.0)?, 1.0)?,
                });
            }
        }
        Ok(out)
    }
}

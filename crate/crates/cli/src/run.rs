//! Evaluation of scenario points.

use cavity_udw_core::evolution::{evolve_density, relative_strength_s, DensityContribution, Order, Source};
use cavity_udw_core::model::Trajectory;
use cavity_udw_core::response::{
    ratio_zm_osc, response_accelerated, response_inertial, response_mink_accel, ResponseBreakdown,
};
use cavity_udw_core::{Error, Mat2};
use rayon::prelude::*;

use crate::config::{Physics, Quantity, Scenario, Settings};
use crate::error::CliError;
use crate::output::{Cell, Column, Table};

/// Per-row outcome of a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    NotConverged,
    Underflow,
    Inconsistent,
    Invalid,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::NotConverged => "not_converged",
            Status::Underflow => "underflow",
            Status::Inconsistent => "inconsistent",
            Status::Invalid => "invalid",
        }
    }
}

/// Rows produced by one point, before the status columns.
pub struct PointRows {
    pub status: Status,
    pub rows: Vec<Vec<Cell>>,
    /// Partial value and tail estimate (or quadrature error) on failure.
    pub partial: Option<f64>,
    pub tail: Option<f64>,
    pub message: Option<String>,
}

impl PointRows {
    fn ok(rows: Vec<Vec<Cell>>) -> Self {
        PointRows {
            status: Status::Ok,
            rows,
            partial: None,
            tail: None,
            message: None,
        }
    }

    /// A single row of empty quantity cells describing `e`.
    pub fn failed(e: &Error, width: usize) -> Self {
        let (status, partial, tail) = match e {
            Error::Sum {
                partial,
                tail_estimate,
                ..
            } => (Status::NotConverged, Some(partial.re), Some(*tail_estimate)),
            Error::Quadrature { value, error } => (Status::NotConverged, Some(value.re), Some(*error)),
            Error::Underflow(_) => (Status::Underflow, None, None),
            Error::Consistency(_) => (Status::Inconsistent, None, None),
            Error::Domain(_) | Error::UnknownStrategy { .. } => (Status::Invalid, None, None),
        };
        PointRows {
            status,
            rows: vec![vec![Cell::Empty; width]],
            partial,
            tail,
            message: Some(e.to_string()),
        }
    }
}

/// Quantity columns for each kind of point.
pub fn quantity_columns(q: Quantity) -> Vec<Column> {
    let c = Column::new;
    match q {
        Quantity::Evolve => {
            let mut v = vec![c("part", "label"), c("order", "label")];
            for e in ["gg", "ge", "eg", "ee"] {
                v.push(Column::new(format!("rho_{e}_re"), "1"));
                v.push(Column::new(format!("rho_{e}_im"), "1"));
            }
            v
        }
        Quantity::Response => vec![
            c("f_osc", "1"),
            c("f_zm", "1"),
            c("f_total", "1"),
            c("osc_terms", "count"),
            c("osc_tail", "1"),
        ],
        Quantity::RelativeStrength => vec![c("s", "1"), c("e_zm", "lambda^2"), c("e_osc", "lambda^2")],
        Quantity::RatioZmOsc => vec![c("z_zm", "1")],
        Quantity::Minkowski => vec![c("f_mink", "1")],
        Quantity::MinkowskiGap => vec![c("relative_gap", "1"), c("f_mink", "1"), c("f_osc", "1")],
    }
}

fn matrix_cells(part: &str, order: &str, m: &Mat2) -> Vec<Cell> {
    let mut v = vec![Cell::from(part), Cell::from(order)];
    for z in [m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1)] {
        v.push(z.re.into());
        v.push(z.im.into());
    }
    v
}

fn part_label(p: &DensityContribution) -> (&'static str, &'static str) {
    match (p.source, p.order) {
        (Source::Zm, Order::Lambda1) => ("zm", "lambda1"),
        (Source::Zm, Order::Lambda2) => ("zm", "lambda2"),
        (Source::Osc, Order::Lambda1) => ("osc", "lambda1"),
        (Source::Osc, Order::Lambda2) => ("osc", "lambda2"),
    }
}

fn response(p: &Physics, s: &Settings) -> Result<ResponseBreakdown, Error> {
    let gap = p.detector.gap();
    match p.trajectory {
        Trajectory::Inertial { rapidity } => response_inertial(
            gap,
            rapidity,
            p.length,
            &p.switching,
            &p.zero_mode,
            &s.response.sum,
        ),
        Trajectory::Accelerated { acceleration } => response_accelerated(
            gap,
            acceleration,
            p.length,
            &p.switching,
            &p.zero_mode,
            &s.response,
        ),
    }
}

fn acceleration(p: &Physics) -> f64 {
    match p.trajectory {
        Trajectory::Accelerated { acceleration } => acceleration,
        // rejected by validation
        Trajectory::Inertial { .. } => f64::NAN,
    }
}

fn mink(p: &Physics, s: &Settings) -> Result<f64, Error> {
    response_mink_accel(
        p.detector.gap(),
        acceleration(p),
        &p.switching,
        s.methods.minkowski.as_ref(),
        &s.window,
    )
}

/// |F_Mink - F_osc| / F_Mink with both responses.
pub fn minkowski_gap(p: &Physics, s: &Settings) -> Result<[f64; 3], Error> {
    let fm = mink(p, s)?;
    let fo = response(p, s)?.f_osc;
    if fm.abs() < 1e-300 {
        return Err(Error::Underflow(format!("F_Mink = {fm:e}")));
    }
    Ok([(fm - fo).abs() / fm, fm, fo])
}

pub fn relative_strength(p: &Physics, s: &Settings) -> Result<[f64; 3], Error> {
    let path = s.methods.estimator.as_ref();
    // rejected by validation for non-gaussian states
    let gamma = p.gamma.unwrap_or(f64::NAN);
    let (det, sw, l) = (&p.detector, &p.switching, p.length);
    let ratio = relative_strength_s(p.sign, gamma, det, sw, l, path, &s.estimator_sum)?;
    let e_zm = path.e_zm(p.sign, gamma, det, sw, l)?;
    let e_osc = path.e_osc(p.sign, det, sw, l, &s.estimator_sum)?;
    Ok([ratio, e_zm, e_osc])
}

pub fn ratio(p: &Physics, s: &Settings) -> Result<f64, Error> {
    ratio_zm_osc(
        p.detector.gap(),
        acceleration(p),
        p.length,
        &p.switching,
        &p.zero_mode,
        &s.response,
    )
}

/// Evaluates one point; errors become a failed row.
pub fn evaluate(q: Quantity, p: &Physics, s: &Settings) -> PointRows {
    let width = quantity_columns(q).len();
    let rows = match q {
        Quantity::Evolve => evolve_density(
            &p.initial,
            &p.detector,
            &p.zero_mode,
            &p.trajectory,
            &p.switching,
            p.length,
            &s.evolution,
        )
        .map(|ev| {
            let mut rows = vec![matrix_cells("total", "all", &ev.rho)];
            for part in &ev.parts {
                let (src, ord) = part_label(part);
                rows.push(matrix_cells(src, ord, &part.matrix));
            }
            rows
        }),
        Quantity::Response => response(p, s).map(|r| {
            vec![vec![
                r.f_osc.into(),
                r.f_zm.into(),
                r.total().into(),
                Cell::Int(r.osc_terms as u64),
                r.osc_tail.into(),
            ]]
        }),
        Quantity::RelativeStrength => relative_strength(p, s).map(|v| vec![v.map(Cell::Num).to_vec()]),
        Quantity::RatioZmOsc => ratio(p, s).map(|v| vec![vec![v.into()]]),
        Quantity::Minkowski => mink(p, s).map(|v| vec![vec![v.into()]]),
        Quantity::MinkowskiGap => minkowski_gap(p, s).map(|v| vec![v.map(Cell::Num).to_vec()]),
    };
    match rows {
        Ok(rows) => PointRows::ok(rows),
        Err(e) => PointRows::failed(&e, width),
    }
}

/// Status columns appended to every table.
pub fn status_columns() -> Vec<Column> {
    vec![
        Column::new("status", "label"),
        Column::new("partial", "1"),
        Column::new("tail_estimate", "1"),
    ]
}

/// Appends the status cells of `point` to each of its rows.
pub fn finish_rows(lead: Vec<Cell>, point: PointRows) -> Vec<Vec<Cell>> {
    let opt = |x: Option<f64>| x.map_or(Cell::Empty, Cell::Num);
    point
        .rows
        .into_iter()
        .map(|row| {
            let mut r = lead.clone();
            r.extend(row);
            r.push(point.status.label().into());
            r.push(opt(point.partial));
            r.push(opt(point.tail));
            r
        })
        .collect()
}

/// Result of a whole run: the table plus any point failures.
pub struct RunOutput {
    pub table: Table,
    pub failures: Vec<String>,
}

pub fn build_pool(threads: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Field {
            field: "--threads".into(),
            message: e.to_string(),
        })
}

/// Evaluates every point of `scenario`; rows follow the sweep order.
pub fn run_scenario(
    scenario: &Scenario,
    settings: &Settings,
    pool: &rayon::ThreadPool,
) -> Result<RunOutput, CliError> {
    let q = scenario.quantity();
    let axis = scenario.sweep.as_ref().map(|s| s.axis);
    let values = scenario.axis_values();
    let physics = values
        .iter()
        .map(|&v| scenario.physics(v))
        .collect::<Result<Vec<_>, _>>()?;
    let points: Vec<PointRows> =
        pool.install(|| physics.par_iter().map(|p| evaluate(q, p, settings)).collect());

    let mut columns = Vec::new();
    if let Some(a) = axis {
        columns.push(Column::new(a.name(), a.unit()));
    }
    columns.extend(quantity_columns(q));
    columns.extend(status_columns());
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (v, point) in values.into_iter().zip(points) {
        if let Some(m) = &point.message {
            let at = match (axis, v) {
                (Some(a), Some(v)) => format!("{} = {v}: ", a.name()),
                _ => String::new(),
            };
            failures.push(format!("{at}{m}"));
        }
        let lead = v.map(|v| vec![Cell::Num(v)]).unwrap_or_default();
        rows.extend(finish_rows(lead, point));
    }
    Ok(RunOutput {
        table: Table { columns, rows },
        failures,
    })
}

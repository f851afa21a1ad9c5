//! Parameter grids over any [`SystemParams`] field, evaluated point by
//! point, serially or with rayon.

use std::f64::consts::{PI, TAU};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::keys::ParamKey;
use crate::params::SystemParams;
use crate::report::{coherence_report, contrast_ratio, CoherenceReport};

/// Points along one axis, in the axis key's unit.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "scale", rename_all = "lowercase")]
pub enum Grid {
    Linear { start: f64, stop: f64, count: usize },
    Log { start: f64, stop: f64, count: usize },
    Values { values: Vec<f64> },
}

impl Grid {
    pub fn linear(start: f64, stop: f64, count: usize) -> Self {
        Grid::Linear { start, stop, count }
    }

    pub fn log(start: f64, stop: f64, count: usize) -> Self {
        Grid::Log { start, stop, count }
    }

    pub fn len(&self) -> usize {
        match self {
            Grid::Linear { count, .. } | Grid::Log { count, .. } => *count,
            Grid::Values { values } => values.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid points; endpoints are reproduced exactly.
    pub fn points(&self) -> Vec<f64> {
        match self {
            Grid::Values { values } => values.clone(),
            &Grid::Linear { start, stop, count } => interpolate(start, stop, count, |t| t),
            &Grid::Log { start, stop, count } => interpolate(start.ln(), stop.ln(), count, f64::exp)
                .into_iter()
                .enumerate()
                .map(|(i, v)| {
                    if i == 0 {
                        start
                    } else if i + 1 == count {
                        stop
                    } else {
                        v
                    }
                })
                .collect(),
        }
    }

    fn validate(&self) -> std::result::Result<(), String> {
        match self {
            Grid::Values { values } if values.is_empty() => Err("value list is empty".into()),
            Grid::Values { values } => match values.iter().find(|v| !v.is_finite()) {
                Some(v) => Err(format!("non-finite value {v}")),
                None => Ok(()),
            },
            Grid::Linear { start, stop, count } | Grid::Log { start, stop, count } => {
                if *count < 2 {
                    return Err(format!("point count must be >= 2, got {count}"));
                }
                if !start.is_finite() || !stop.is_finite() {
                    return Err(format!("range [{start}, {stop}] is not finite"));
                }
                if matches!(self, Grid::Log { .. }) && !(*start > 0.0 && *stop > 0.0) {
                    return Err(format!("log scale needs a strictly positive range, got [{start}, {stop}]"));
                }
                Ok(())
            }
        }
    }
}

fn interpolate(a: f64, b: f64, n: usize, map: impl Fn(f64) -> f64) -> Vec<f64> {
    (0..n).map(|i| if i + 1 == n { map(b) } else { map(a + (b - a) * (i as f64) / ((n - 1) as f64)) }).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Axis {
    #[serde(serialize_with = "key_name")]
    pub key: ParamKey,
    pub grid: Grid,
}

fn key_name<S: serde::Serializer>(k: &ParamKey, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(k.name())
}

impl Axis {
    pub fn new(key: &str, grid: Grid) -> Result<Self> {
        Ok(Self { key: ParamKey::parse(key)?, grid })
    }
}

/// A requested output group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Output {
    #[serde(rename = "C_a")]
    Ca,
    #[serde(rename = "C_m")]
    Cm,
    #[serde(rename = "C_b")]
    Cb,
    #[serde(rename = "C_T")]
    Ct,
    #[serde(rename = "I_a")]
    Ia,
    #[serde(rename = "I_m")]
    Im,
    #[serde(rename = "I_b")]
    Ib,
    /// Columns `stable`, `spectral_abscissa`, `hurwitz`.
    #[serde(rename = "stability")]
    Stability,
    /// Columns `w_1`, `w_2`, `w_3`.
    #[serde(rename = "symplectic")]
    Symplectic,
}

impl Output {
    pub const ALL: [Output; 9] = [
        Output::Ca,
        Output::Cm,
        Output::Cb,
        Output::Ct,
        Output::Ia,
        Output::Im,
        Output::Ib,
        Output::Stability,
        Output::Symplectic,
    ];
    pub const COHERENCES: [Output; 4] = [Output::Ca, Output::Cm, Output::Cb, Output::Ct];
    pub const CONTRASTS: [Output; 3] = [Output::Ia, Output::Im, Output::Ib];

    pub fn name(self) -> &'static str {
        match self {
            Output::Ca => "C_a",
            Output::Cm => "C_m",
            Output::Cb => "C_b",
            Output::Ct => "C_T",
            Output::Ia => "I_a",
            Output::Im => "I_m",
            Output::Ib => "I_b",
            Output::Stability => "stability",
            Output::Symplectic => "symplectic",
        }
    }

    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Output::Ca => &["C_a"],
            Output::Cm => &["C_m"],
            Output::Cb => &["C_b"],
            Output::Ct => &["C_T"],
            Output::Ia => &["I_a"],
            Output::Im => &["I_m"],
            Output::Ib => &["I_b"],
            Output::Stability => &["stable", "spectral_abscissa", "hurwitz"],
            Output::Symplectic => &["w_1", "w_2", "w_3"],
        }
    }

    fn is_contrast(self) -> bool {
        Self::CONTRASTS.contains(&self)
    }
}

impl FromStr for Output {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Output::ALL.into_iter().find(|o| o.name() == s).ok_or_else(|| {
            let names: Vec<_> = Output::ALL.iter().map(|o| o.name()).collect();
            Error::Config(format!("unknown output {s:?}; expected one of {}", names.join(", ")))
        })
    }
}

impl fmt::Display for Output {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A one- or two-axis grid over a base parameter set. The second axis
/// varies fastest.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub axis1: Axis,
    pub axis2: Option<Axis>,
    pub base: SystemParams,
    pub outputs: Vec<Output>,
    /// Axis-1 values singled out for 1D extraction, see [`SweepSpec::line_cuts`].
    pub line_cuts: Vec<f64>,
}

impl SweepSpec {
    pub fn new(axis1: Axis, base: SystemParams, outputs: Vec<Output>) -> Self {
        Self { axis1, axis2: None, base, outputs, line_cuts: Vec::new() }
    }

    pub fn with_axis2(mut self, axis2: Axis) -> Self {
        self.axis2 = Some(axis2);
        self
    }

    pub fn axes(&self) -> impl Iterator<Item = &Axis> {
        std::iter::once(&self.axis1).chain(self.axis2.as_ref())
    }

    pub fn row_count(&self) -> usize {
        self.axes().map(|a| a.grid.len()).product()
    }

    pub fn columns(&self) -> Vec<String> {
        self.axes()
            .map(|a| a.key.name().to_string())
            .chain(self.outputs.iter().flat_map(|o| o.columns().iter().map(|c| c.to_string())))
            .collect()
    }

    /// Checks grid shapes, and that every axis value yields valid
    /// parameters when applied to the base.
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if self.outputs.is_empty() {
            problems.push("no outputs requested".to_string());
        }
        if let Some(a2) = &self.axis2 {
            if a2.key.field == self.axis1.key.field {
                problems.push(format!("both axes set the same parameter ({}, {})", self.axis1.key, a2.key));
            }
        }
        if let Err(e) = self.base.validate() {
            problems.push(format!("base parameters: {e}"));
        }
        for (label, axis) in ["axis1", "axis2"].into_iter().zip(self.axes()) {
            if let Err(e) = axis.grid.validate() {
                problems.push(format!("{label} ({}): {e}", axis.key));
                continue;
            }
            for v in axis.grid.points() {
                let mut p = self.base;
                let r = axis.key.set(&mut p, v).and_then(|_| p.validate().map(drop));
                if let Err(e) = r {
                    problems.push(format!("{label} ({}) value {v}: {e}", axis.key));
                    break;
                }
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(format!("invalid sweep: {}", problems.join("; "))))
        }
    }

    /// The same sweep restricted to the flagged axis-1 values (evaluated
    /// exactly, not snapped to the axis-1 grid).
    pub fn line_cuts(&self) -> Option<SweepSpec> {
        if self.line_cuts.is_empty() {
            return None;
        }
        let mut spec = self.clone();
        spec.axis1.grid = Grid::Values { values: self.line_cuts.clone() };
        spec.line_cuts.clear();
        Some(spec)
    }

    fn params_at(&self, index: usize) -> Result<(SystemParams, Vec<f64>)> {
        let mut p = self.base;
        let mut coords = Vec::with_capacity(2);
        let n2 = self.axis2.as_ref().map_or(1, |a| a.grid.len());
        let (i1, i2) = (index / n2, index % n2);
        let v1 = self.axis1.grid.points()[i1];
        self.axis1.key.set(&mut p, v1)?;
        coords.push(v1);
        if let Some(a2) = &self.axis2 {
            let v2 = a2.grid.points()[i2];
            a2.key.set(&mut p, v2)?;
            coords.push(v2);
        }
        Ok((p, coords))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum RowStatus {
    Ok,
    Unstable,
    Marginal,
    Error(&'static str),
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowStatus::Ok => f.write_str("ok"),
            RowStatus::Unstable => f.write_str("unstable"),
            RowStatus::Marginal => f.write_str("marginal"),
            RowStatus::Error(tag) => write!(f, "error:{tag}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    /// Axis columns then output columns; the status column is separate.
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
    pub status: Vec<RowStatus>,
}

impl SweepResult {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Values of one column, `None` where the row has none.
    pub fn values(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let j = self.column(name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    /// Row index and value of the largest entry in a column (first on ties).
    pub fn argmax(&self, name: &str) -> Option<(usize, f64)> {
        let j = self.column(name)?;
        let mut best: Option<(usize, f64)> = None;
        for (i, row) in self.rows.iter().enumerate() {
            if let Some(v) = row[j] {
                if best.is_none_or(|(_, b)| v > b) {
                    best = Some((i, v));
                }
            }
        }
        best
    }

    /// CSV with a header row; numbers carry 17 significant digits, missing
    /// values are empty, the last column is the row status.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push_str(",status\n");
        for (row, status) in self.rows.iter().zip(&self.status) {
            for v in row {
                if let Some(v) = v {
                    let _ = write!(out, "{v:.16e}");
                }
                out.push(',');
            }
            let _ = writeln!(out, "{status}");
        }
        out
    }
}

/// How grid points are distributed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Serial,
    /// Rayon; `threads: None` uses the global pool. Without the `parallel`
    /// feature this runs serially.
    Parallel {
        threads: Option<usize>,
    },
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel { threads: None }
        } else {
            Execution::Serial
        }
    }
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    run_sweep_with(spec, Execution::default())
}

/// Evaluates every grid point. Failures are recorded per row; only an
/// invalid spec is an error.
pub fn run_sweep_with(spec: &SweepSpec, exec: Execution) -> Result<SweepResult> {
    spec.validate()?;
    let n = spec.row_count();
    let evaluate = |i: usize| evaluate_row(spec, i);
    let rows: Vec<(Vec<Option<f64>>, RowStatus)> = match exec {
        Execution::Serial => (0..n).map(evaluate).collect(),
        Execution::Parallel { threads } => parallel_map(n, threads, evaluate)?,
    };
    let (rows, status) = rows.into_iter().unzip();
    Ok(SweepResult { columns: spec.columns(), rows, status })
}

#[cfg(feature = "parallel")]
fn parallel_map<T: Send>(n: usize, threads: Option<usize>, f: impl Fn(usize) -> T + Sync) -> Result<Vec<T>> {
    use rayon::prelude::*;
    let run = || (0..n).into_par_iter().map(&f).collect();
    match threads {
        None => Ok(run()),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| Error::Config(format!("cannot start {k} worker threads: {e}")))?;
            Ok(pool.install(run))
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<T>(n: usize, _threads: Option<usize>, f: impl Fn(usize) -> T) -> Result<Vec<T>> {
    Ok((0..n).map(f).collect())
}

fn evaluate_row(spec: &SweepSpec, index: usize) -> (Vec<Option<f64>>, RowStatus) {
    let (params, coords) = match spec.params_at(index) {
        Ok(v) => v,
        Err(e) => return (vec![None; spec.columns().len()], RowStatus::Error(e.tag())),
    };
    let mut row: Vec<Option<f64>> = coords.into_iter().map(Some).collect();

    let needs_point = spec.outputs.iter().any(|o| !o.is_contrast());
    let needs_contrast = spec.outputs.iter().any(|o| o.is_contrast());
    let mut status = RowStatus::Ok;

    let report = if needs_point {
        match coherence_report(&params) {
            Ok(r) => {
                status = point_status(&r);
                Some(r)
            }
            Err(e) => {
                status = RowStatus::Error(e.tag());
                None
            }
        }
    } else {
        None
    };
    let contrast = if needs_contrast && status == RowStatus::Ok {
        match contrast_ratio(&params, params.xi) {
            Ok(c) => Some(c),
            Err(e) => {
                status = match e.root() {
                    Error::ContrastUndefined(_) => RowStatus::Unstable,
                    _ => RowStatus::Error(e.tag()),
                };
                None
            }
        }
    } else {
        None
    };

    let coh = report.as_ref().and_then(|r| r.coherences);
    for out in &spec.outputs {
        match out {
            Output::Ca => row.push(coh.map(|c| c.c_a)),
            Output::Cm => row.push(coh.map(|c| c.c_m)),
            Output::Cb => row.push(coh.map(|c| c.c_b)),
            Output::Ct => row.push(coh.map(|c| c.c_t)),
            Output::Ia => row.push(contrast.as_ref().map(|c| c.i_a)),
            Output::Im => row.push(contrast.as_ref().map(|c| c.i_m)),
            Output::Ib => row.push(contrast.as_ref().map(|c| c.i_b)),
            Output::Stability => {
                let v = report.as_ref().map(|r| r.verdict);
                row.push(v.map(|v| if v.stable { 1.0 } else { 0.0 }));
                row.push(v.map(|v| v.spectral_abscissa));
                row.push(v.and_then(|v| v.hurwitz_pass).map(|h| if h { 1.0 } else { 0.0 }));
            }
            Output::Symplectic => {
                for k in 0..3 {
                    row.push(coh.map(|c| c.w[k]));
                }
            }
        }
    }
    (row, status)
}

fn point_status(r: &CoherenceReport) -> RowStatus {
    if r.verdict.marginal {
        RowStatus::Marginal
    } else if !r.verdict.stable {
        RowStatus::Unstable
    } else {
        RowStatus::Ok
    }
}

/// Names accepted by [`figure_preset`].
pub const PRESETS: [&str; 5] = ["fig2", "fig3", "fig4", "fig5", "fig6"];

/// Built-in sweeps over the reference parameters.
///
/// | preset | axis 1 | axis 2 | outputs |
/// |---|---|---|---|
/// | fig2 | ξ ∈ [0, 1.5γ_a] ×51 | φ ∈ [0, 2π] ×101 | coherences |
/// | fig3 | P_l ∈ [0, 1] mW ×60 | ξ ∈ {0, 0.5, 1, 1.5}γ_a | coherences |
/// | fig4 | ξ ∈ [0, 1.5γ_a] ×60 | g_ma/2π ∈ [0, 10] MHz ×60 | coherences |
/// | fig5 | T ∈ [0.01, 50] K log ×40 | ξ ∈ {0, 0.5, 1, 1.5}γ_a | coherences |
/// | fig6 | g_ma ∈ (0, 1.2ω_b] ×120 | | contrasts |
///
/// fig3 to fig5 use φ = 3π/2; fig6 uses ξ = 1.1γ_a and P_l = 0.1 µW.
pub fn figure_preset(name: &str) -> Result<SweepSpec> {
    figure_preset_on(name, SystemParams::paper_defaults())
}

/// [`figure_preset`] on a different base parameter set.
pub fn figure_preset_on(name: &str, base: SystemParams) -> Result<SweepSpec> {
    let ga = base.gamma_a;
    let xi_series = || Axis::new("xi", Grid::Values { values: vec![0.0, 0.5 * ga, ga, 1.5 * ga] });
    let optimal = SystemParams { phi: 1.5 * PI, ..base };
    let coherences = Output::COHERENCES.to_vec();
    let spec = match name {
        "fig2" => SweepSpec {
            line_cuts: vec![0.0, 0.5 * ga, ga, 1.5 * ga],
            ..SweepSpec::new(Axis::new("xi", Grid::linear(0.0, 1.5 * ga, 51))?, base, coherences)
                .with_axis2(Axis::new("phi", Grid::linear(0.0, TAU, 101))?)
        },
        "fig3" => SweepSpec::new(Axis::new("drive_power", Grid::linear(0.0, 1e-3, 60))?, optimal, coherences)
            .with_axis2(xi_series()?),
        "fig4" => SweepSpec::new(Axis::new("xi", Grid::linear(0.0, 1.5 * ga, 60))?, optimal, coherences)
            .with_axis2(Axis::new("g_ma", Grid::linear(0.0, TAU * 10e6, 60))?),
        "fig5" => SweepSpec::new(Axis::new("temperature", Grid::log(0.01, 50.0, 40))?, optimal, coherences)
            .with_axis2(xi_series()?),
        "fig6" => {
            let wb = base.omega_b;
            let p = SystemParams { xi: 1.1 * ga, drive_power: 1e-7, ..base };
            SweepSpec::new(Axis::new("g_ma", Grid::linear(0.01 * wb, 1.2 * wb, 120))?, p, Output::CONTRASTS.to_vec())
        }
        other => {
            return Err(Error::Config(format!("unknown preset {other:?}; expected one of {}", PRESETS.join(", "))))
        }
    };
    Ok(spec)
}

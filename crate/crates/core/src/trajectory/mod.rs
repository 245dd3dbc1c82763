//! Bohmian trajectory ensembles driven by stored velocity snapshots.

mod diagnostics;
mod sampling;

pub use diagnostics::{
    check_non_crossing, newton_residual, tube_probability, write_bundle, NonCrossingReport, TubeProbe,
};
pub use sampling::{ks_distance, sample_initial_positions, Cdf, InitialEnsemble, SamplingScheme};

use rayon::prelude::*;

use crate::error::TrajectoryError;
use crate::fields::{ComplexField, FieldAnalyzer, PhysicalConstants, VelocityField};
use crate::grid::{cubic_weights, GridSpec};
use crate::propagators::{Model, Propagator, PropagatorConfig};

/// Maximum number of step halvings tried when a step touches a node.
pub const MAX_HALVINGS: u32 = 8;
/// Snapshot spacing may not exceed this multiple of the trajectory step.
pub const MAX_SNAPSHOT_RATIO: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<(f64, f64)>,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.0).collect()
    }

    pub fn positions(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.1).collect()
    }

    pub fn start(&self) -> f64 {
        self.samples[0].1
    }

    pub fn end(&self) -> f64 {
        self.samples[self.samples.len() - 1].1
    }
}

/// Multiplier applied to the stored velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateFactor {
    Unity,
    /// `e^{−γt}`, turning the canonical velocity of a Caldirola-Kanai state
    /// into the physical one.
    Exponential { gamma: f64 },
}

impl RateFactor {
    pub fn for_config(config: &PropagatorConfig) -> Self {
        match config.model {
            Model::CaldirolaKanai => Self::Exponential { gamma: config.gamma },
            _ => Self::Unity,
        }
    }

    #[inline]
    pub fn at(&self, t: f64) -> f64 {
        match self {
            Self::Unity => 1.0,
            Self::Exponential { gamma } => (-gamma * t).exp(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Miss {
    Outside,
    Node,
    Time,
}

/// `(k, w)` with `t = (1−w) t_k + w t_{k+1}`.
pub(crate) fn bracket(times: &[f64], t: f64) -> Option<(usize, f64)> {
    let n = times.len();
    let eps = 1e-9 * (times[n - 1] - times[0]).abs().max(1.0);
    if n == 1 || t < times[0] - eps || t > times[n - 1] + eps {
        return if n == 1 { Some((0, 0.0)) } else { None };
    }
    let k = times.partition_point(|&tk| tk <= t).clamp(1, n - 1) - 1;
    let w = ((t - times[k]) / (times[k + 1] - times[k])).clamp(0.0, 1.0);
    Some((k, w))
}

/// Cubic interpolation on valid points, linear when a neighbour is missing.
/// Invalid samples are NaN.
pub(crate) fn interp_valid(grid: &GridSpec, f: &[f64], x: f64) -> Option<Result<f64, ()>> {
    let (j, s) = grid.locate(x)?;
    let (a, b) = (f[j], f[j + 1]);
    if !(a.is_finite() && b.is_finite()) {
        return Some(Err(()));
    }
    if j >= 1 && j + 2 < f.len() && f[j - 1].is_finite() && f[j + 2].is_finite() {
        let w = cubic_weights(s);
        return Some(Ok(w[0] * f[j - 1] + w[1] * a + w[2] * b + w[3] * f[j + 2]));
    }
    Some(Ok((1.0 - s) * a + s * b))
}

/// Time-indexed velocity snapshots on one grid. A single snapshot is treated as
/// time independent.
#[derive(Debug, Clone)]
pub struct VelocitySource {
    grid: GridSpec,
    times: Vec<f64>,
    fields: Vec<Vec<f64>>,
}

impl VelocitySource {
    pub fn new(fields: Vec<VelocityField>) -> Result<Self, TrajectoryError> {
        let first = fields.first().ok_or_else(|| TrajectoryError::InvalidInput("no velocity fields".into()))?;
        let grid = first.grid;
        if fields.iter().any(|f| f.grid != grid) {
            return Err(TrajectoryError::InvalidInput("velocity fields on different grids".into()));
        }
        let times: Vec<f64> = fields.iter().map(|f| f.time).collect();
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(TrajectoryError::InvalidInput("velocity snapshot times must increase".into()));
        }
        Ok(Self { grid, times, fields: fields.into_iter().map(|f| f.values).collect() })
    }

    pub fn from_snapshots(
        snapshots: &[ComplexField],
        analyzer: &FieldAnalyzer,
        constants: &PhysicalConstants,
    ) -> Result<Self, TrajectoryError> {
        let fields = snapshots
            .par_iter()
            .map(|s| analyzer.velocity_field(s, constants))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(fields)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn time_span(&self) -> (f64, f64) {
        (self.times[0], self.times[self.times.len() - 1])
    }

    fn at(&self, k: usize, x: f64) -> Result<f64, Miss> {
        match interp_valid(&self.grid, &self.fields[k], x) {
            None => Err(Miss::Outside),
            Some(Err(())) => Err(Miss::Node),
            Some(Ok(v)) => Ok(v),
        }
    }

    fn velocity_inner(&self, x: f64, t: f64) -> Result<f64, Miss> {
        let (k, w) = bracket(&self.times, t).ok_or(Miss::Time)?;
        if w == 0.0 || self.times.len() == 1 {
            return self.at(k, x);
        }
        if w == 1.0 {
            return self.at(k + 1, x);
        }
        Ok((1.0 - w) * self.at(k, x)? + w * self.at(k + 1, x)?)
    }

    pub fn velocity(&self, x: f64, t: f64) -> Result<f64, TrajectoryError> {
        self.velocity_inner(x, t).map_err(|m| miss_error(m, t, x))
    }
}

fn miss_error(m: Miss, t: f64, x: f64) -> TrajectoryError {
    match m {
        Miss::Outside => TrajectoryError::LeftDomain { t, x },
        Miss::Node => TrajectoryError::NodeEncounter { t, x },
        Miss::Time => TrajectoryError::OutsideTimeSpan { t },
    }
}

/// `t0, t0 + dt, …` with the last interval shortened to end on `t1`.
pub fn time_mesh(t0: f64, t1: f64, dt: f64) -> Vec<f64> {
    let steps = (((t1 - t0) / dt) - 1e-9).ceil().max(0.0) as usize;
    let mut mesh: Vec<f64> = (0..steps).map(|k| t0 + k as f64 * dt).collect();
    mesh.push(t1);
    mesh
}

fn rk4_span(
    x0: f64,
    a: f64,
    b: f64,
    substeps: usize,
    source: &VelocitySource,
    rate: RateFactor,
) -> Result<f64, (Miss, f64, f64)> {
    let h = (b - a) / substeps as f64;
    let f = |x: f64, t: f64| -> Result<f64, (Miss, f64, f64)> {
        if !x.is_finite() || !source.grid.contains(x) {
            return Err((Miss::Outside, t, x));
        }
        source.velocity_inner(x, t).map(|v| rate.at(t) * v).map_err(|m| (m, t, x))
    };
    let mut x = x0;
    for i in 0..substeps {
        let t = if i == 0 { a } else { a + i as f64 * h };
        let k1 = f(x, t)?;
        let k2 = f(x + 0.5 * h * k1, t + 0.5 * h)?;
        let k3 = f(x + 0.5 * h * k2, t + 0.5 * h)?;
        let k4 = f(x + h * k3, t + h)?;
        x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    if !x.is_finite() || !source.grid.contains(x) {
        return Err((Miss::Outside, b, x));
    }
    Ok(x)
}

/// RK4 integration of `ẋ = rate(t) v(x, t)` on the mesh `time_mesh(t_span, dt_traj)`.
/// A step that touches a node is retried with up to [`MAX_HALVINGS`] halvings.
pub fn integrate_trajectory(
    x0: f64,
    source: &VelocitySource,
    rate: RateFactor,
    t_span: (f64, f64),
    dt_traj: f64,
) -> Result<Trajectory, TrajectoryError> {
    if !(dt_traj > 0.0 && dt_traj.is_finite() && t_span.1 >= t_span.0) {
        return Err(TrajectoryError::InvalidInput(format!("bad step {dt_traj} or span {t_span:?}")));
    }
    if !source.grid.contains(x0) {
        return Err(TrajectoryError::LeftDomain { t: t_span.0, x: x0 });
    }
    if source.times.len() > 1 {
        for t in [t_span.0, t_span.1] {
            bracket(&source.times, t).ok_or(TrajectoryError::OutsideTimeSpan { t })?;
        }
    }
    let mesh = time_mesh(t_span.0, t_span.1, dt_traj);
    let mut samples = Vec::with_capacity(mesh.len());
    samples.push((mesh[0], x0));
    let mut x = x0;
    for w in mesh.windows(2) {
        let mut level = 0;
        x = loop {
            match rk4_span(x, w[0], w[1], 1 << level, source, rate) {
                Ok(next) => break next,
                Err((Miss::Node, t, xe)) if level >= MAX_HALVINGS => {
                    return Err(TrajectoryError::NodeEncounter { t, x: xe })
                }
                Err((Miss::Node, ..)) => level += 1,
                Err((m, t, xe)) => return Err(miss_error(m, t, xe)),
            }
        };
        samples.push((w[1], x));
    }
    Ok(Trajectory { samples })
}

#[derive(Debug, Clone)]
pub struct TrajectoryBundle {
    /// Shared time mesh.
    pub times: Vec<f64>,
    /// Successful trajectories in ensemble order.
    pub trajectories: Vec<Trajectory>,
    /// Ensemble index of each entry of `trajectories`.
    pub members: Vec<usize>,
    pub failures: Vec<(usize, TrajectoryError)>,
    pub ensemble: InitialEnsemble,
    pub config: PropagatorConfig,
}

impl TrajectoryBundle {
    pub fn trajectory(&self, ensemble_index: usize) -> Option<&Trajectory> {
        self.members.iter().position(|&m| m == ensemble_index).map(|k| &self.trajectories[k])
    }

    /// Positions of all successful trajectories at mesh index `k`.
    pub fn positions_at(&self, k: usize) -> Vec<f64> {
        self.trajectories.iter().map(|t| t.samples[k].1).collect()
    }
}

/// Integrate every ensemble member through `source`. Members run in parallel
/// on the ambient rayon pool; a failing member is recorded, not fatal.
pub fn integrate_ensemble(
    ensemble: &InitialEnsemble,
    source: &VelocitySource,
    rate: RateFactor,
    t_span: (f64, f64),
    dt_traj: f64,
    config: PropagatorConfig,
) -> Result<TrajectoryBundle, TrajectoryError> {
    let results: Vec<Result<Trajectory, TrajectoryError>> = ensemble
        .positions
        .par_iter()
        .map(|&x0| integrate_trajectory(x0, source, rate, t_span, dt_traj))
        .collect();
    let mut bundle = TrajectoryBundle {
        times: time_mesh(t_span.0, t_span.1, dt_traj),
        trajectories: Vec::new(),
        members: Vec::new(),
        failures: Vec::new(),
        ensemble: ensemble.clone(),
        config,
    };
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(t) => {
                bundle.trajectories.push(t);
                bundle.members.push(i);
            }
            Err(e) => bundle.failures.push((i, e)),
        }
    }
    Ok(bundle)
}

/// Integrate `ensemble` through the snapshots of a propagation run. The rate
/// factor follows the model: `e^{−γt}` for Caldirola-Kanai, 1 otherwise.
pub fn integrate_bundle(
    ensemble: &InitialEnsemble,
    snapshots: &[ComplexField],
    propagator: &Propagator,
    dt_traj: f64,
) -> Result<TrajectoryBundle, TrajectoryError> {
    if snapshots.is_empty() {
        return Err(TrajectoryError::InvalidInput("no snapshots".into()));
    }
    let spacing = snapshots.windows(2).map(|w| w[1].time() - w[0].time()).fold(0.0, f64::max);
    if spacing > MAX_SNAPSHOT_RATIO * dt_traj * (1.0 + 1e-9) {
        return Err(TrajectoryError::InvalidInput(format!(
            "snapshot spacing {spacing} exceeds {MAX_SNAPSHOT_RATIO} x dt_traj ({dt_traj})"
        )));
    }
    let config = propagator.config().clone();
    let source = VelocitySource::from_snapshots(snapshots, propagator.analyzer(), &config.constants)?;
    let span = source.time_span();
    integrate_ensemble(ensemble, &source, RateFactor::for_config(&config), span, dt_traj, config)
}

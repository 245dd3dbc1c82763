use rayon::prelude::*;

use super::{bracket, interp_valid, Cdf, TrajectoryBundle};
use crate::error::TrajectoryError;
use crate::fields::ComplexField;
use crate::propagators::{Model, Propagator, ResidualSummary};
use crate::table::Table;

#[derive(Debug, Clone, PartialEq)]
pub struct NonCrossingReport {
    pub ok: bool,
    /// Smallest adjacent gap over the mesh; `None` for fewer than two trajectories.
    pub min_gap: Option<f64>,
    /// `(t, k)` where trajectory `k` first failed to stay below `k + 1`.
    pub first_violation: Option<(f64, usize)>,
}

pub fn check_non_crossing(bundle: &TrajectoryBundle) -> NonCrossingReport {
    let tr = &bundle.trajectories;
    if tr.len() < 2 {
        return NonCrossingReport { ok: true, min_gap: None, first_violation: None };
    }
    let mut min_gap = f64::INFINITY;
    let mut first_violation = None;
    for (k, &t) in bundle.times.iter().enumerate() {
        for i in 0..tr.len() - 1 {
            let gap = tr[i + 1].samples[k].1 - tr[i].samples[k].1;
            min_gap = min_gap.min(gap);
            if gap <= 0.0 && first_violation.is_none() {
                first_violation = Some((t, bundle.members[i]));
            }
        }
    }
    NonCrossingReport { ok: first_violation.is_none(), min_gap: Some(min_gap), first_violation }
}

/// Cumulative distributions of a snapshot sequence, for probability measured
/// between moving trajectories.
#[derive(Debug, Clone)]
pub struct TubeProbe {
    times: Vec<f64>,
    cdfs: Vec<Cdf>,
}

impl TubeProbe {
    pub fn new(snapshots: &[ComplexField]) -> Result<Self, TrajectoryError> {
        if snapshots.is_empty() {
            return Err(TrajectoryError::InvalidInput("no snapshots".into()));
        }
        let cdfs = snapshots.par_iter().map(Cdf::from_state).collect::<Result<Vec<_>, _>>()?;
        Ok(Self { times: snapshots.iter().map(|s| s.time()).collect(), cdfs })
    }

    /// `∫_a^b ρ(x, t) dx`, linear in time between snapshots.
    pub fn mass_between(&self, a: f64, b: f64, t: f64) -> Result<f64, TrajectoryError> {
        let (k, w) = bracket(&self.times, t).ok_or(TrajectoryError::OutsideTimeSpan { t })?;
        let m0 = self.cdfs[k].mass_between(a, b);
        if w == 0.0 {
            return Ok(m0);
        }
        Ok((1.0 - w) * m0 + w * self.cdfs[k + 1].mass_between(a, b))
    }

    /// Normalized cumulative probability at `(x, t)`.
    pub fn cdf_at(&self, x: f64, t: f64) -> Result<f64, TrajectoryError> {
        let (k, w) = bracket(&self.times, t).ok_or(TrajectoryError::OutsideTimeSpan { t })?;
        let c0 = self.cdfs[k].eval(x);
        if w == 0.0 {
            return Ok(c0);
        }
        Ok((1.0 - w) * c0 + w * self.cdfs[k + 1].eval(x))
    }

    /// Probability between ensemble members `i < j` at each mesh time.
    pub fn probability(
        &self,
        bundle: &TrajectoryBundle,
        i: usize,
        j: usize,
    ) -> Result<Vec<(f64, f64)>, TrajectoryError> {
        if i >= j {
            return Err(TrajectoryError::InvalidInput(format!("need i < j, got {i}, {j}")));
        }
        let missing = |k| TrajectoryError::InvalidInput(format!("trajectory {k} is not in the bundle"));
        let a = bundle.trajectory(i).ok_or_else(|| missing(i))?;
        let b = bundle.trajectory(j).ok_or_else(|| missing(j))?;
        a.samples
            .iter()
            .zip(&b.samples)
            .map(|(&(t, xa), &(_, xb))| Ok((t, self.mass_between(xa, xb, t)?)))
            .collect()
    }

    /// Largest drift `|F_t(x_i(t)) − F_0(x_i(0))|` of the cumulative probability
    /// carried by any trajectory.
    pub fn quantile_drift(&self, bundle: &TrajectoryBundle) -> Result<f64, TrajectoryError> {
        let mut worst = 0.0f64;
        for tr in &bundle.trajectories {
            let (t0, x0) = tr.samples[0];
            let q0 = self.cdf_at(x0, t0)?;
            for &(t, x) in &tr.samples[1..] {
                worst = worst.max((self.cdf_at(x, t)? - q0).abs());
            }
        }
        Ok(worst)
    }
}

/// `∫ρ dx` between trajectories `i` and `j` at every mesh time.
pub fn tube_probability(
    bundle: &TrajectoryBundle,
    snapshots: &[ComplexField],
    i: usize,
    j: usize,
) -> Result<Vec<(f64, f64)>, TrajectoryError> {
    TubeProbe::new(snapshots)?.probability(bundle, i, j)
}

/// Text table with one row per mesh time: `t x_<i> …` for every successful member.
pub fn write_bundle(bundle: &TrajectoryBundle, extra: &[(&str, String)]) -> String {
    let mut t = Table::new();
    t.meta("model", bundle.config.model.name());
    t.meta("gamma", bundle.config.gamma);
    t.meta("sampling", bundle.ensemble.scheme.name());
    t.meta("seed", bundle.ensemble.scheme.seed().map_or("none".to_string(), |s| s.to_string()));
    t.meta("trajectories", bundle.trajectories.len());
    t.meta("failures", bundle.failures.len());
    for (k, v) in extra {
        t.meta(k, v);
    }
    for (i, e) in &bundle.failures {
        t.comment(&format!("trajectory {i} failed: {e}"));
    }
    let mut cols = vec!["t".to_string()];
    cols.extend(bundle.members.iter().map(|m| format!("x_{}", m + 1)));
    t.columns(&cols);
    for (k, &time) in bundle.times.iter().enumerate() {
        t.row(std::iter::once(time).chain(bundle.trajectories.iter().map(|tr| tr.samples[k].1)));
    }
    t.into_string()
}

/// Residual of the trajectory-level Newton law `m ẍ = −∂x(V + Q) − γ m ẋ`.
///
/// Accelerations and velocities come from second and first central differences
/// of the bundle positions; the force is taken from the snapshot at the same
/// time. Only interior mesh times that coincide with a snapshot, and positions
/// where `ρ > rho_fraction · max ρ`, are scored.
pub fn newton_residual(
    bundle: &TrajectoryBundle,
    snapshots: &[ComplexField],
    propagator: &Propagator,
    rho_fraction: f64,
) -> Result<ResidualSummary, TrajectoryError> {
    let cfg = propagator.config();
    let gamma = match cfg.model {
        Model::Standard => 0.0,
        Model::Kostin => cfg.gamma,
        Model::CaldirolaKanai => {
            return Err(TrajectoryError::InvalidInput("Newton residual applies to standard and Kostin runs".into()))
        }
    };
    let m = cfg.constants.mass();
    let grid = *propagator.grid();
    let an = propagator.analyzer();
    let times = &bundle.times;
    let snap_times: Vec<f64> = snapshots.iter().map(|s| s.time()).collect();
    let tol = 1e-9 * times.last().copied().unwrap_or(1.0).abs().max(1.0);

    let mut max_abs = 0.0f64;
    let (mut sq, mut count) = (0.0, 0usize);
    for k in 1..times.len().saturating_sub(1) {
        let Some(s) = snap_times.iter().position(|&ts| (ts - times[k]).abs() < tol) else {
            continue;
        };
        let psi = &snapshots[s];
        let q = an.quantum_potential(psi, &cfg.constants)?;
        let total: Vec<f64> = q
            .values
            .iter()
            .zip(propagator.potential_values())
            .map(|(q, v)| q + v)
            .collect();
        let force = crate::grid::fd4_first(&total, grid.dx());
        let rho = psi.density();
        let cut = rho_fraction * rho.iter().cloned().fold(0.0, f64::max);
        let (hm, hp) = (times[k] - times[k - 1], times[k + 1] - times[k]);
        for tr in &bundle.trajectories {
            let (xm, x0, xp) = (tr.samples[k - 1].1, tr.samples[k].1, tr.samples[k + 1].1);
            let Some((j, sfrac)) = grid.locate(x0) else { continue };
            if (1.0 - sfrac) * rho[j] + sfrac * rho[j + 1] <= cut {
                continue;
            }
            let Some(Ok(f)) = interp_valid(&grid, &force, x0) else { continue };
            let vel = (xp - xm) / (hm + hp);
            let acc = 2.0 * ((xp - x0) / hp - (x0 - xm) / hm) / (hm + hp);
            let r = acc + f / m + gamma * vel;
            max_abs = max_abs.max(r.abs());
            sq += r * r;
            count += 1;
        }
    }
    if count == 0 {
        return Err(TrajectoryError::InvalidInput("no mesh time coincides with a snapshot".into()));
    }
    Ok(ResidualSummary { max_abs, rms: (sq / count as f64).sqrt(), points: count })
}

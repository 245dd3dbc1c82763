//! Scenario files, the built-in catalog and run orchestration.
//!
//! A scenario is a flat list of `section.key = value` lines. Matter-wave
//! scenarios are dimensionless unless the physical constants say otherwise;
//! optics lengths accept `m`, `mm`, `um` and `nm` suffixes and default to metres.

mod catalog;
mod config;
mod run;

pub use catalog::{catalog, catalog_entry, CatalogEntry};
pub use config::{emit_scenario, parse_scenario};
pub use run::{
    execute, run_scenario, write_outcome, CheckResult, Manifest, OutDirSource, RunArtifacts, RunOptions, RunOutcome,
    StageResult, StageStatus, EXIT_NUMERIC, EXIT_OK, EXIT_REQUIRED_CHECK, EXIT_USAGE, OUT_DIR_ENV,
};

use num_complex::Complex64;

use crate::error::{FieldError, OpticsError};
use crate::fields::{gaussian, ComplexField, PhysicalConstants};
use crate::grid::GridSpec;
use crate::optics::{OpticalScene, SlitSpec};
use crate::propagators::{Model, PotentialSpec, PropagatorConfig};
use crate::trajectory::SamplingScheme;

/// Checks a matter-wave run can evaluate.
pub const MATTER_WAVE_CHECKS: &[&str] =
    &["norm", "energy", "non_crossing", "tubes", "width_monotone", "below_zero_point", "oracle"];
/// Checks an optics run can evaluate.
pub const OPTICS_CHECKS: &[&str] = &["path_ordering", "flux", "kx_parity"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    MatterWave,
    Optics,
}

impl ScenarioKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::MatterWave => "matter_wave",
            Self::Optics => "optics",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "matter_wave" => Some(Self::MatterWave),
            "optics" => Some(Self::Optics),
            _ => None,
        }
    }

    pub fn checks(&self) -> &'static [&'static str] {
        match self {
            Self::MatterWave => MATTER_WAVE_CHECKS,
            Self::Optics => OPTICS_CHECKS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Artifact {
    /// `t norm mean_x width energy`
    Series,
    /// Trajectory bundle table.
    Bundle,
    /// Field snapshots at the first and last time.
    Snapshots,
    /// One `x |Ψ|² U Sx Sz kx/k` table per report plane.
    Profiles,
    /// Photon path table.
    Paths,
}

impl Artifact {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Series => "series",
            Self::Bundle => "bundle",
            Self::Snapshots => "snapshots",
            Self::Profiles => "profiles",
            Self::Paths => "paths",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Self::Series, Self::Bundle, Self::Snapshots, Self::Profiles, Self::Paths].into_iter().find(|a| a.name() == s)
    }

    pub fn kind(&self) -> ScenarioKind {
        match self {
            Self::Series | Self::Bundle | Self::Snapshots => ScenarioKind::MatterWave,
            Self::Profiles | Self::Paths => ScenarioKind::Optics,
        }
    }
}

/// Initial wavefunction of a matter-wave scenario.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    Gaussian { center: f64, sigma: f64, momentum: f64 },
    /// Equal-weight sum of two Gaussians at rest, the second carrying `e^{iφ}`.
    Superposition { centers: [f64; 2], sigma: f64, phase: f64 },
}

impl InitialState {
    /// The state sampled on `grid` and normalized.
    pub fn build(&self, grid: GridSpec, constants: &PhysicalConstants) -> Result<ComplexField, FieldError> {
        let hbar = constants.hbar();
        let psi = match *self {
            Self::Gaussian { center, sigma, momentum } => {
                ComplexField::from_fn(grid, 0.0, |x| gaussian(x, center, sigma, momentum, hbar))?
            }
            Self::Superposition { centers, sigma, phase } => ComplexField::from_fn(grid, 0.0, |x| {
                gaussian(x, centers[0], sigma, 0.0, hbar) + Complex64::cis(phase) * gaussian(x, centers[1], sigma, 0.0, hbar)
            })?,
        };
        psi.normalized()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeSpec {
    pub t0: f64,
    pub dt: f64,
    pub t_final: f64,
    /// Propagation steps between stored snapshots.
    pub snapshot_every: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleSpec {
    /// 0 disables trajectory integration.
    pub n_trajectories: usize,
    pub sampling: SamplingScheme,
    /// Trajectory integration step.
    pub dt: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatterWaveSetup {
    pub model: Model,
    pub gamma: f64,
    pub constants: PhysicalConstants,
    pub potential: PotentialSpec,
    pub grid: GridSpec,
    pub time: TimeSpec,
    pub initial: InitialState,
    pub ensemble: EnsembleSpec,
}

impl MatterWaveSetup {
    pub fn propagator_config(&self) -> PropagatorConfig {
        PropagatorConfig {
            model: self.model,
            constants: self.constants,
            potential: self.potential.clone(),
            gamma: self.gamma,
            dt: self.time.dt,
            t0: self.time.t0,
            t_final: self.time.t_final,
        }
    }
}

/// Evenly spaced propagation distances `start, start + step, …, ≤ stop`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneRange {
    pub start: f64,
    pub step: f64,
    pub stop: f64,
}

impl PlaneRange {
    pub fn planes(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|k| self.start + k as f64 * self.step).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OpticsSetup {
    pub wavelength: f64,
    pub slits: Vec<SlitSpec>,
    pub grid: GridSpec,
    pub planes: Vec<PlaneRange>,
    /// Distances at which profile tables are written; added to the lattice if absent.
    pub report_planes: Vec<f64>,
    /// Photon paths launched per slit; 0 disables path tracing.
    pub paths_per_slit: usize,
    /// Arc-length step of the path integrator.
    pub ds: f64,
}

impl OpticsSetup {
    /// Sorted lattice of propagation distances including the report planes.
    pub fn z_planes(&self) -> Vec<f64> {
        let mut z: Vec<f64> = self.planes.iter().flat_map(|r| r.planes()).collect();
        z.sort_by(f64::total_cmp);
        z.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * b.abs());
        for &r in &self.report_planes {
            match z.iter_mut().find(|p| (**p - r).abs() <= 1e-9 * r.abs()) {
                Some(p) => *p = r,
                None => z.push(r),
            }
        }
        z.sort_by(f64::total_cmp);
        z
    }

    pub fn scene(&self) -> Result<OpticalScene, OpticsError> {
        OpticalScene::new(self.slits.clone(), self.wavelength, self.grid, self.z_planes())
    }

    /// Whether the slit set is its own mirror image about `x = 0`.
    pub fn is_mirror_symmetric(&self) -> bool {
        self.slits.iter().all(|s| {
            self.slits.iter().any(|m| {
                let tol = 1e-12 * s.sigma;
                (m.center + s.center).abs() <= tol
                    && (m.sigma - s.sigma).abs() <= tol
                    && match (m.window_halfwidth, s.window_halfwidth) {
                        (None, None) => true,
                        (Some(a), Some(b)) => (a - b).abs() <= tol,
                        _ => false,
                    }
            })
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Setup {
    MatterWave(MatterWaveSetup),
    Optics(OpticsSetup),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub name: String,
    pub description: String,
    /// Parameter choices not fixed by the reference setup; copied into the manifest.
    pub assumptions: Vec<String>,
    pub setup: Setup,
    pub outputs: Vec<Artifact>,
    pub required_checks: Vec<String>,
}

impl ScenarioConfig {
    pub fn kind(&self) -> ScenarioKind {
        match self.setup {
            Setup::MatterWave(_) => ScenarioKind::MatterWave,
            Setup::Optics(_) => ScenarioKind::Optics,
        }
    }

    pub fn matter_wave(&self) -> Option<&MatterWaveSetup> {
        match &self.setup {
            Setup::MatterWave(m) => Some(m),
            Setup::Optics(_) => None,
        }
    }

    pub fn optics(&self) -> Option<&OpticsSetup> {
        match &self.setup {
            Setup::Optics(o) => Some(o),
            Setup::MatterWave(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_ranges_join_without_duplicates() {
        let o = OpticsSetup {
            wavelength: 943e-9,
            slits: vec![SlitSpec::gaussian(0.3e-3, 0.0)],
            grid: GridSpec::symmetric(1e-3, 64).unwrap(),
            planes: vec![
                PlaneRange { start: 0.25, step: 0.05, stop: 2.0 },
                PlaneRange { start: 2.0, step: 0.1, stop: 3.0 },
            ],
            report_planes: vec![3.0, 2.125],
            paths_per_slit: 0,
            ds: 0.01,
        };
        let z = o.z_planes();
        assert_eq!(z.len(), 36 + 10 + 1);
        assert!(z.windows(2).all(|w| w[1] > w[0]));
        assert!(z.contains(&3.0) && z.contains(&2.125));
    }

    #[test]
    fn superposition_is_normalized() {
        let s = InitialState::Superposition { centers: [-2.0, 2.0], sigma: 0.7, phase: 0.3 };
        let psi = s.build(GridSpec::symmetric(10.0, 512).unwrap(), &PhysicalConstants::natural()).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-12);
    }
}

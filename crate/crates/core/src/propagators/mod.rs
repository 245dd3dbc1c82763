//! Time stepping for the standard, Caldirola-Kanai and Kostin Schrödinger
//! equations on a uniform periodic grid.
//!
//! All three models share one symmetric split-step kernel
//! `e^{-iV_eff dt/2ħ} F⁻¹ e^{-i a T(k) dt/ħ} F e^{-iV_eff dt/2ħ}`; the models differ
//! only in the coefficients fed into it:
//!
//! | model            | kinetic scale `a` | effective potential                  |
//! |------------------|-------------------|--------------------------------------|
//! | standard         | 1                 | `V`                                  |
//! | Caldirola-Kanai  | `e^{-γ t_mid}`    | `e^{γ t_mid} V`                      |
//! | Kostin           | 1                 | `V + γ(S − ∫ρS dx)`, predictor-corrector |
//!
//! With `γ = 0` every model reduces to the standard kernel bit for bit.

mod classical;
mod diagnostics;
mod oracle;
mod run;

pub use classical::{classical_ck_trajectory, ClassicalCKState};
pub use diagnostics::{hamilton_jacobi_residual, ResidualSummary};
pub use oracle::{analytic_gaussian_oracle, GaussianParams};
pub use run::{write_series, PropagationRun, SeriesRow, EDGE_DENSITY_WARNING, NORM_DRIFT_WARNING};

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::PropagationError;
use crate::fields::{
    kinetic_energy, potential_energy, ComplexField, FieldAnalyzer, PhysicalConstants, NORMALIZATION_TOLERANCE,
};
use crate::grid::{trapezoid, GridSpec, Spectral, Stencil};

/// Safety factor of the split-step aliasing bound.
pub const STABILITY_SAFETY: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSpec {
    Free,
    /// `½ m ω² (x − center)²`
    Harmonic { omega: f64, center: f64 },
    /// `c0 + c1 x + c2 x²`
    Polynomial { coefficients: [f64; 3] },
    /// Values on the propagation grid.
    Tabulated(Vec<f64>),
}

impl PotentialSpec {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Free => "free",
            Self::Harmonic { .. } => "harmonic",
            Self::Polynomial { .. } => "polynomial",
            Self::Tabulated(_) => "tabulated",
        }
    }

    pub fn validate(&self, grid: &GridSpec) -> Result<(), PropagationError> {
        match self {
            Self::Harmonic { omega, center } if !(omega.is_finite() && *omega > 0.0 && center.is_finite()) => {
                Err(PropagationError::InvalidConfig(format!("harmonic omega must be > 0, got {omega}")))
            }
            Self::Polynomial { coefficients } if coefficients.iter().any(|c| !c.is_finite()) => {
                Err(PropagationError::InvalidConfig("polynomial coefficients must be finite".into()))
            }
            Self::Tabulated(v) if v.len() != grid.n_points() => Err(PropagationError::InvalidConfig(format!(
                "tabulated potential has {} values, grid has {}",
                v.len(),
                grid.n_points()
            ))),
            Self::Tabulated(v) if v.iter().any(|x| !x.is_finite()) => {
                Err(PropagationError::InvalidConfig("tabulated potential must be finite".into()))
            }
            _ => Ok(()),
        }
    }

    /// Analytic value, where one exists.
    pub fn value_at(&self, x: f64, mass: f64) -> Option<f64> {
        match self {
            Self::Free => Some(0.0),
            Self::Harmonic { omega, center } => Some(0.5 * mass * omega * omega * (x - center) * (x - center)),
            Self::Polynomial { coefficients: [c0, c1, c2] } => Some(c0 + c1 * x + c2 * x * x),
            Self::Tabulated(_) => None,
        }
    }

    /// Analytic `dV/dx`, where one exists.
    pub fn derivative_at(&self, x: f64, mass: f64) -> Option<f64> {
        match self {
            Self::Free => Some(0.0),
            Self::Harmonic { omega, center } => Some(mass * omega * omega * (x - center)),
            Self::Polynomial { coefficients: [_, c1, c2] } => Some(c1 + 2.0 * c2 * x),
            Self::Tabulated(_) => None,
        }
    }

    pub fn sample(&self, grid: &GridSpec, mass: f64) -> Vec<f64> {
        match self {
            Self::Tabulated(v) => v.clone(),
            other => grid.points().into_iter().map(|x| other.value_at(x, mass).unwrap_or(0.0)).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    Standard,
    CaldirolaKanai,
    Kostin,
}

impl Model {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Standard => "standard",
            Self::CaldirolaKanai => "caldirola_kanai",
            Self::Kostin => "kostin",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "standard" => Some(Self::Standard),
            "caldirola_kanai" => Some(Self::CaldirolaKanai),
            "kostin" => Some(Self::Kostin),
            _ => None,
        }
    }
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropagatorConfig {
    pub model: Model,
    pub constants: PhysicalConstants,
    pub potential: PotentialSpec,
    /// Friction coefficient γ (inverse time).
    pub gamma: f64,
    pub dt: f64,
    pub t0: f64,
    /// Latest time the run may reach. The Caldirola-Kanai stability bound is
    /// evaluated with the coefficient at this time.
    pub t_final: f64,
}

impl PropagatorConfig {
    pub fn standard(constants: PhysicalConstants, potential: PotentialSpec, dt: f64, t_final: f64) -> Self {
        Self { model: Model::Standard, constants, potential, gamma: 0.0, dt, t0: 0.0, t_final }
    }

    pub fn with_model(mut self, model: Model, gamma: f64) -> Self {
        self.model = model;
        self.gamma = gamma;
        self
    }

    /// `(kinetic, potential)` coefficients of the Caldirola-Kanai generator at `t`.
    pub fn ck_coefficients(&self, t: f64) -> (f64, f64) {
        match self.model {
            Model::CaldirolaKanai => ((-self.gamma * t).exp(), (self.gamma * t).exp()),
            _ => (1.0, 1.0),
        }
    }

    /// Largest admissible `dt` on `grid`.
    ///
    /// The potential half-steps must not kick momentum past a fraction of the
    /// grid Nyquist momentum `πħ/dx`, and the kinetic step must not move the
    /// fastest representable mode across more than a fraction of the box.
    pub fn stability_bound(&self, grid: &GridSpec) -> (f64, String) {
        let hbar = self.constants.hbar();
        let mass = self.constants.mass();
        let dx = grid.dx();
        let p_nyquist = PI * hbar / dx;
        let v = self.potential.sample(grid, mass);
        let max_slope = v.windows(2).map(|w| ((w[1] - w[0]) / dx).abs()).fold(0.0, f64::max);
        let (kin_worst, pot_worst) = match self.model {
            Model::CaldirolaKanai => {
                let (k0, p0) = self.ck_coefficients(self.t0);
                let (k1, p1) = self.ck_coefficients(self.t_final);
                (k0.max(k1), p0.max(p1))
            }
            _ => (1.0, 1.0),
        };
        let kick = if max_slope > 0.0 {
            STABILITY_SAFETY * p_nyquist / (pot_worst * max_slope)
        } else {
            f64::INFINITY
        };
        let drift = STABILITY_SAFETY * grid.period() / (kin_worst * p_nyquist / mass);
        if kick <= drift {
            (kick, "potential kick exceeds the grid Nyquist momentum".into())
        } else {
            (drift, "fastest grid mode crosses the box".into())
        }
    }

    pub fn validate(&self, grid: &GridSpec) -> Result<(), PropagationError> {
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(PropagationError::InvalidConfig(format!("gamma must be >= 0, got {}", self.gamma)));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(PropagationError::InvalidConfig(format!("dt must be > 0, got {}", self.dt)));
        }
        if !(self.t0.is_finite() && self.t_final.is_finite() && self.t_final >= self.t0) {
            return Err(PropagationError::InvalidConfig(format!(
                "need t_final >= t0, got t0 = {}, t_final = {}",
                self.t0, self.t_final
            )));
        }
        self.potential.validate(grid)?;
        let (bound, reason) = self.stability_bound(grid);
        if self.dt > bound {
            return Err(PropagationError::StabilityViolation { dt: self.dt, bound, reason });
        }
        Ok(())
    }
}

/// Split-step propagator bound to one grid and configuration.
#[derive(Debug, Clone)]
pub struct Propagator {
    grid: GridSpec,
    config: PropagatorConfig,
    spectral: Spectral,
    potential: Vec<f64>,
    analyzer: FieldAnalyzer,
}

impl Propagator {
    pub fn new(grid: GridSpec, config: PropagatorConfig) -> Result<Self, PropagationError> {
        config.validate(&grid)?;
        let potential = config.potential.sample(&grid, config.constants.mass());
        Ok(Self {
            grid,
            spectral: Spectral::new(&grid),
            potential,
            analyzer: FieldAnalyzer::new(&grid, Stencil::Spectral),
            config,
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn config(&self) -> &PropagatorConfig {
        &self.config
    }

    pub fn potential_values(&self) -> &[f64] {
        &self.potential
    }

    pub fn spectral(&self) -> &Spectral {
        &self.spectral
    }

    /// Analyzer whose stencil matches the propagator (spectral).
    pub fn analyzer(&self) -> &FieldAnalyzer {
        &self.analyzer
    }

    fn expect_model(&self, expected: Model) -> Result<(), PropagationError> {
        if self.config.model != expected {
            return Err(PropagationError::WrongModel { expected: expected.name(), found: self.config.model.name() });
        }
        Ok(())
    }

    fn check_input(&self, psi: &ComplexField, need_normalized: bool) -> Result<(), PropagationError> {
        if psi.grid() != &self.grid {
            return Err(crate::error::FieldError::InvalidGrid("state grid differs from propagator grid".into()).into());
        }
        if need_normalized {
            let n = psi.norm();
            if (n - 1.0).abs() > NORMALIZATION_TOLERANCE {
                return Err(crate::error::FieldError::NotNormalized { norm: n }.into());
            }
        }
        Ok(())
    }

    /// One symmetric split step. `extra` is added to the scaled potential.
    fn split_step(
        &self,
        psi: &[Complex64],
        dt: f64,
        kin_scale: f64,
        pot_scale: f64,
        extra: Option<&[f64]>,
    ) -> Vec<Complex64> {
        let hbar = self.config.constants.hbar();
        let mass = self.config.constants.mass();
        let half: Vec<Complex64> = match extra {
            None => self.potential.iter().map(|v| Complex64::cis(-pot_scale * v * dt / (2.0 * hbar))).collect(),
            Some(w) => self
                .potential
                .iter()
                .zip(w)
                .map(|(v, w)| Complex64::cis(-(pot_scale * v + w) * dt / (2.0 * hbar)))
                .collect(),
        };
        let mut buf: Vec<Complex64> = psi.iter().zip(&half).map(|(p, h)| p * h).collect();
        self.spectral.forward(&mut buf);
        for (z, k) in buf.iter_mut().zip(self.spectral.wavenumbers()) {
            *z *= Complex64::cis(-kin_scale * hbar * k * k * dt / (2.0 * mass));
        }
        self.spectral.inverse(&mut buf);
        for (z, h) in buf.iter_mut().zip(&half) {
            *z *= h;
        }
        buf
    }

    fn finish(&self, values: Vec<Complex64>, t: f64) -> Result<ComplexField, PropagationError> {
        if values.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(PropagationError::NumericBlowup { t });
        }
        Ok(ComplexField::from_parts(self.grid, values, t))
    }

    fn advance_standard(&self, psi: &ComplexField, dt: f64) -> Result<ComplexField, PropagationError> {
        let out = self.split_step(psi.values(), dt, 1.0, 1.0, None);
        self.finish(out, psi.time() + dt)
    }

    fn advance_ck(&self, psi: &ComplexField, dt: f64) -> Result<ComplexField, PropagationError> {
        let (kin, pot) = self.config.ck_coefficients(psi.time() + 0.5 * dt);
        let out = self.split_step(psi.values(), dt, kin, pot, None);
        self.finish(out, psi.time() + dt)
    }

    fn advance_kostin(&self, psi: &ComplexField, dt: f64) -> Result<ComplexField, PropagationError> {
        let w0 = self.kostin_potential(psi)?;
        let predicted = self.split_step(psi.values(), dt, 1.0, 1.0, Some(&w0));
        let predicted = self.finish(predicted, psi.time() + dt)?;
        let w1 = self.kostin_potential(&predicted)?;
        let avg: Vec<f64> = w0.iter().zip(&w1).map(|(a, b)| 0.5 * (a + b)).collect();
        let out = self.split_step(psi.values(), dt, 1.0, 1.0, Some(&avg));
        self.finish(out, psi.time() + dt)
    }

    /// `γ (S − ⟨S⟩)` with `S` from the unwrapped phase of `psi` and
    /// `⟨S⟩ = ∫ρS dx / ∫ρ dx`. Below the node threshold `S` is held at the
    /// nearest valid value.
    pub fn kostin_potential(&self, psi: &ComplexField) -> Result<Vec<f64>, PropagationError> {
        let polar = self
            .analyzer
            .polar_decompose(psi, &self.config.constants)
            .map_err(|_| PropagationError::PhaseUndefined)?;
        let s = hold_nearest_valid(&polar.phase, &polar.valid);
        let weighted: Vec<f64> = polar.rho.iter().zip(&s).map(|(r, s)| r * s).collect();
        let mean = trapezoid(&weighted, self.grid.dx()) / trapezoid(&polar.rho, self.grid.dx());
        let gamma = self.config.gamma;
        Ok(s.iter().map(|s| gamma * (s - mean)).collect())
    }

    pub fn step_standard(&self, psi: &ComplexField) -> Result<ComplexField, PropagationError> {
        self.expect_model(Model::Standard)?;
        self.check_input(psi, true)?;
        self.advance_standard(psi, self.config.dt)
    }

    pub fn step_caldirola_kanai(&self, psi: &ComplexField) -> Result<ComplexField, PropagationError> {
        self.expect_model(Model::CaldirolaKanai)?;
        self.check_input(psi, false)?;
        self.advance_ck(psi, self.config.dt)
    }

    pub fn step_kostin(&self, psi: &ComplexField) -> Result<ComplexField, PropagationError> {
        self.expect_model(Model::Kostin)?;
        self.check_input(psi, true)?;
        self.advance_kostin(psi, self.config.dt)
    }

    /// Step with the configured model.
    pub fn step(&self, psi: &ComplexField) -> Result<ComplexField, PropagationError> {
        self.step_by(psi, self.config.dt)
    }

    /// Step by an arbitrary signed `dt` (negative values run backwards).
    pub fn step_by(&self, psi: &ComplexField, dt: f64) -> Result<ComplexField, PropagationError> {
        match self.config.model {
            Model::Standard => self.advance_standard(psi, dt),
            Model::CaldirolaKanai => self.advance_ck(psi, dt),
            Model::Kostin => self.advance_kostin(psi, dt),
        }
    }

    /// Physical energy `⟨p²/2m⟩ + ⟨V⟩` with `p = m ẋ`. For Caldirola-Kanai the
    /// grid momentum is the canonical one, so the kinetic part carries `e^{-2γt}`.
    pub fn physical_energy(&self, psi: &ComplexField) -> f64 {
        let (kin, _) = self.config.ck_coefficients(psi.time());
        let t = kinetic_energy(psi, &self.config.constants, &self.spectral);
        let v = potential_energy(psi, &self.potential).unwrap_or(f64::NAN);
        kin * kin * t + v
    }
}

fn hold_nearest_valid(values: &[f64], valid: &[bool]) -> Vec<f64> {
    let mut out = values.to_vec();
    let Some(first) = valid.iter().position(|&v| v) else {
        return out;
    };
    for j in 0..first {
        out[j] = values[first];
    }
    let mut last = first;
    let mut j = first + 1;
    while j < values.len() {
        if valid[j] {
            last = j;
            j += 1;
            continue;
        }
        let next = (j..values.len()).find(|&m| valid[m]);
        let end = next.unwrap_or(values.len());
        for m in j..end {
            out[m] = match next {
                Some(nx) if nx - m < m - last => values[nx],
                _ => values[last],
            };
        }
        j = end;
    }
    out
}

/// Free-function forms of the steppers.
pub fn step_standard(psi: &ComplexField, grid: GridSpec, config: &PropagatorConfig) -> Result<ComplexField, PropagationError> {
    Propagator::new(grid, config.clone())?.step_standard(psi)
}

pub fn step_caldirola_kanai(
    psi: &ComplexField,
    grid: GridSpec,
    config: &PropagatorConfig,
) -> Result<ComplexField, PropagationError> {
    Propagator::new(grid, config.clone())?.step_caldirola_kanai(psi)
}

pub fn step_kostin(psi: &ComplexField, grid: GridSpec, config: &PropagatorConfig) -> Result<ComplexField, PropagationError> {
    Propagator::new(grid, config.clone())?.step_kostin(psi)
}

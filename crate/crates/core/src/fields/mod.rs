//! Wavefunction snapshots and the local hydrodynamic fields derived from them:
//! Madelung decomposition `Ψ = ρ^{1/2} e^{iS/ħ}`, probability current,
//! Bohmian velocity and quantum potential.
//!
//! Points where `ρ < node_threshold * max ρ` are treated as nodes: phase,
//! velocity and quantum potential are flagged invalid (stored as NaN) there.

mod snapshot;
mod unwrap;

pub use snapshot::{read_snapshot, write_snapshot, SnapshotHeader};
pub use unwrap::unwrap_from;

use num_complex::Complex64;

use crate::error::FieldError;
use crate::grid::{trapezoid, Derivatives, GridSpec, Spectral, Stencil};

pub const DEFAULT_NODE_THRESHOLD: f64 = 1e-12;

/// Tolerance on `|norm - 1|` accepted as "normalized".
pub const NORMALIZATION_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    hbar: f64,
    mass: f64,
}

impl PhysicalConstants {
    pub fn new(hbar: f64, mass: f64) -> Result<Self, FieldError> {
        if !(hbar.is_finite() && hbar > 0.0 && mass.is_finite() && mass > 0.0) {
            return Err(FieldError::InvalidConstants(format!(
                "hbar and mass must be positive, got hbar = {hbar}, mass = {mass}"
            )));
        }
        Ok(Self { hbar, mass })
    }

    /// ħ = m = 1.
    pub const fn natural() -> Self {
        Self { hbar: 1.0, mass: 1.0 }
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::natural()
    }
}

/// Complex wavefunction samples on a grid at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    grid: GridSpec,
    values: Vec<Complex64>,
    time: f64,
}

impl ComplexField {
    pub fn new(grid: GridSpec, values: Vec<Complex64>, time: f64) -> Result<Self, FieldError> {
        grid.check_len(values.len())?;
        if let Some(index) = values.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(FieldError::NonFinite { index });
        }
        Ok(Self { grid, values, time })
    }

    pub fn from_fn(grid: GridSpec, time: f64, f: impl Fn(f64) -> Complex64) -> Result<Self, FieldError> {
        let values = grid.points().into_iter().map(f).collect();
        Self::new(grid, values, time)
    }

    /// Internal constructor for values already known to be finite.
    pub(crate) fn from_parts(grid: GridSpec, values: Vec<Complex64>, time: f64) -> Self {
        debug_assert_eq!(values.len(), grid.n_points());
        Self { grid, values, time }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn with_time(mut self, time: f64) -> Self {
        self.time = time;
        self
    }

    pub fn density(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.norm_sqr()).collect()
    }

    pub fn norm(&self) -> f64 {
        norm(self)
    }

    /// Copy rescaled to unit norm. Fails on the zero field.
    pub fn normalized(&self) -> Result<Self, FieldError> {
        let n = self.norm();
        if n <= 0.0 {
            return Err(FieldError::NotNormalized { norm: n });
        }
        let s = 1.0 / n.sqrt();
        Ok(Self::from_parts(self.grid, self.values.iter().map(|z| z * s).collect(), self.time))
    }

    /// `⟨x⟩` under the (not necessarily normalized) density.
    pub fn mean_position(&self) -> f64 {
        let rho = self.density();
        let xs = self.grid.points();
        let first: Vec<f64> = rho.iter().zip(&xs).map(|(r, x)| r * x).collect();
        trapezoid(&first, self.grid.dx()) / trapezoid(&rho, self.grid.dx())
    }

    /// Standard deviation of position.
    pub fn width(&self) -> f64 {
        let rho = self.density();
        let xs = self.grid.points();
        let dx = self.grid.dx();
        let n = trapezoid(&rho, dx);
        let mean = trapezoid(&rho.iter().zip(&xs).map(|(r, x)| r * x).collect::<Vec<_>>(), dx) / n;
        let var = trapezoid(
            &rho.iter().zip(&xs).map(|(r, x)| r * (x - mean) * (x - mean)).collect::<Vec<_>>(),
            dx,
        ) / n;
        var.max(0.0).sqrt()
    }

    /// Largest pointwise `|Ψ_a − Ψ_b|`.
    pub fn max_abs_diff(&self, other: &ComplexField) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Trapezoid integral of `|Ψ|²`.
pub fn norm(psi: &ComplexField) -> f64 {
    trapezoid(&psi.density(), psi.grid.dx())
}

/// Real-valued field on a grid with per-point validity. Invalid entries hold NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub grid: GridSpec,
    pub values: Vec<f64>,
    pub valid: Vec<bool>,
    pub time: f64,
}

/// Bohmian velocity `v = J/ρ`.
pub type VelocityField = ScalarField;

impl ScalarField {
    pub fn get(&self, j: usize) -> Option<f64> {
        self.valid[j].then(|| self.values[j])
    }

    pub fn all_valid(&self) -> bool {
        self.valid.iter().all(|&v| v)
    }

    fn masked(grid: GridSpec, raw: Vec<f64>, valid: Vec<bool>, time: f64) -> Self {
        let values = raw.into_iter().zip(&valid).map(|(v, &ok)| if ok { v } else { f64::NAN }).collect();
        Self { grid, values, valid, time }
    }
}

/// Madelung pair `(ρ, S)`, with `S` unwrapped along the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarFields {
    pub grid: GridSpec,
    pub rho: Vec<f64>,
    pub phase: Vec<f64>,
    pub valid: Vec<bool>,
    pub time: f64,
}

impl PolarFields {
    /// Index of the density maximum, where `S` is referenced into `(−πħ, πħ]`.
    pub fn peak_index(&self) -> usize {
        argmax(&self.rho)
    }
}

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (j, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = j;
        }
    }
    best
}

pub fn node_mask(rho: &[f64], threshold: f64) -> Vec<bool> {
    let max = rho.iter().copied().fold(0.0, f64::max);
    rho.iter().map(|&r| max > 0.0 && r >= threshold * max).collect()
}

/// Derivative stencil plus node threshold; evaluates all local fields.
#[derive(Debug, Clone)]
pub struct FieldAnalyzer {
    node_threshold: f64,
    derivatives: Derivatives,
}

impl FieldAnalyzer {
    pub fn new(grid: &GridSpec, stencil: Stencil) -> Self {
        Self { node_threshold: DEFAULT_NODE_THRESHOLD, derivatives: Derivatives::new(grid, stencil) }
    }

    pub fn with_threshold(mut self, node_threshold: f64) -> Self {
        self.node_threshold = node_threshold;
        self
    }

    pub fn node_threshold(&self) -> f64 {
        self.node_threshold
    }

    pub fn derivatives(&self) -> &Derivatives {
        &self.derivatives
    }

    fn check_grid(&self, grid: &GridSpec) -> Result<(), FieldError> {
        if grid != self.derivatives.grid() {
            return Err(FieldError::InvalidGrid("field grid differs from the analyzer grid".into()));
        }
        Ok(())
    }

    pub fn polar_decompose(&self, psi: &ComplexField, constants: &PhysicalConstants) -> Result<PolarFields, FieldError> {
        self.check_grid(psi.grid())?;
        let rho = psi.density();
        let valid = node_mask(&rho, self.node_threshold);
        if !valid.iter().any(|&v| v) {
            return Err(FieldError::AllBelowThreshold);
        }
        let raw: Vec<f64> = psi.values.iter().map(|z| z.arg()).collect();
        let peak = argmax(&rho);
        let phase = unwrap_from(&raw, &valid, peak).into_iter().map(|a| a * constants.hbar()).collect();
        Ok(PolarFields { grid: psi.grid, rho, phase, valid, time: psi.time })
    }

    /// `J = (ħ/m) Im(Ψ* ∂Ψ/∂x)`.
    pub fn probability_current(&self, psi: &ComplexField, constants: &PhysicalConstants) -> Result<ScalarField, FieldError> {
        self.check_grid(psi.grid())?;
        let d = self.derivatives.first(&psi.values);
        let scale = constants.hbar() / constants.mass();
        let values = psi.values.iter().zip(&d).map(|(p, dp)| scale * (p.conj() * dp).im).collect();
        Ok(ScalarField { grid: psi.grid, values, valid: vec![true; psi.values.len()], time: psi.time })
    }

    /// `v = J/ρ` on above-threshold points.
    pub fn velocity_field(&self, psi: &ComplexField, constants: &PhysicalConstants) -> Result<VelocityField, FieldError> {
        let current = self.probability_current(psi, constants)?;
        let rho = psi.density();
        let valid = node_mask(&rho, self.node_threshold);
        let raw = current.values.iter().zip(&rho).map(|(j, r)| j / r).collect();
        Ok(ScalarField::masked(psi.grid, raw, valid, psi.time))
    }

    /// `Q = −(ħ²/2m) ∂²ρ^{1/2}/ρ^{1/2}` on above-threshold points.
    pub fn quantum_potential(&self, psi: &ComplexField, constants: &PhysicalConstants) -> Result<ScalarField, FieldError> {
        self.check_grid(psi.grid())?;
        let amp: Vec<f64> = psi.values.iter().map(|z| z.norm()).collect();
        let d2 = self.derivatives.second_real(&amp);
        let rho = psi.density();
        let valid = node_mask(&rho, self.node_threshold);
        let pref = -constants.hbar() * constants.hbar() / (2.0 * constants.mass());
        let raw = d2.iter().zip(&amp).map(|(d, a)| pref * d / a).collect();
        Ok(ScalarField::masked(psi.grid, raw, valid, psi.time))
    }
}

/// `ρ^{1/2} e^{iS/ħ}`.
pub fn polar_compose(polar: &PolarFields, constants: &PhysicalConstants) -> Result<ComplexField, FieldError> {
    polar.grid.check_len(polar.rho.len())?;
    polar.grid.check_len(polar.phase.len())?;
    if let Some((index, &value)) = polar.rho.iter().enumerate().find(|(_, r)| **r < 0.0) {
        return Err(FieldError::NegativeDensity { index, value });
    }
    let values = polar
        .rho
        .iter()
        .zip(&polar.phase)
        .map(|(r, s)| Complex64::from_polar(r.sqrt(), s / constants.hbar()))
        .collect();
    ComplexField::new(polar.grid, values, polar.time)
}

/// Default-stencil convenience wrappers.
pub fn polar_decompose(psi: &ComplexField, constants: &PhysicalConstants) -> Result<PolarFields, FieldError> {
    FieldAnalyzer::new(psi.grid(), Stencil::default()).polar_decompose(psi, constants)
}

pub fn probability_current(psi: &ComplexField, constants: &PhysicalConstants) -> Result<ScalarField, FieldError> {
    FieldAnalyzer::new(psi.grid(), Stencil::default()).probability_current(psi, constants)
}

pub fn velocity_field(psi: &ComplexField, constants: &PhysicalConstants) -> Result<VelocityField, FieldError> {
    FieldAnalyzer::new(psi.grid(), Stencil::default()).velocity_field(psi, constants)
}

pub fn quantum_potential(psi: &ComplexField, constants: &PhysicalConstants) -> Result<ScalarField, FieldError> {
    FieldAnalyzer::new(psi.grid(), Stencil::default()).quantum_potential(psi, constants)
}

/// `(ħ²/2m)∫|∂Ψ/∂x|² dx`, evaluated in Fourier space (Parseval).
pub fn kinetic_energy(psi: &ComplexField, constants: &PhysicalConstants, spectral: &Spectral) -> f64 {
    let mut buf = psi.values.clone();
    spectral.forward(&mut buf);
    let n = buf.len() as f64;
    let sum: f64 = buf.iter().zip(spectral.wavenumbers()).map(|(z, k)| k * k * z.norm_sqr()).sum();
    let grad_sq = sum * psi.grid.dx() / n;
    constants.hbar() * constants.hbar() / (2.0 * constants.mass()) * grad_sq
}

/// `⟨V⟩` with the potential sampled on the same grid.
pub fn potential_energy(psi: &ComplexField, potential: &[f64]) -> Result<f64, FieldError> {
    psi.grid.check_len(potential.len())?;
    let w: Vec<f64> = psi.values.iter().zip(potential).map(|(z, v)| z.norm_sqr() * v).collect();
    Ok(trapezoid(&w, psi.grid.dx()))
}

/// `⟨T⟩ + ⟨V⟩` for a normalized state.
pub fn expectation_energy(psi: &ComplexField, potential: &[f64], constants: &PhysicalConstants) -> Result<f64, FieldError> {
    let n = psi.norm();
    if (n - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(FieldError::NotNormalized { norm: n });
    }
    let spectral = Spectral::new(psi.grid());
    Ok(kinetic_energy(psi, constants, &spectral) + potential_energy(psi, potential)?)
}

/// Normalized Gaussian `(2πσ²)^{-1/4} exp(−(x−x0)²/4σ² + i p0 (x−x0)/ħ)`.
pub fn gaussian(x: f64, center: f64, sigma: f64, momentum: f64, hbar: f64) -> Complex64 {
    let d = x - center;
    let amp = (2.0 * std::f64::consts::PI * sigma * sigma).powf(-0.25) * (-d * d / (4.0 * sigma * sigma)).exp();
    Complex64::from_polar(amp, momentum * d / hbar)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn natural() -> PhysicalConstants {
        PhysicalConstants::natural()
    }

    fn ho_ground(grid: GridSpec) -> ComplexField {
        ComplexField::from_fn(grid, 0.0, |x| gaussian(x, 0.0, 0.5f64.sqrt(), 0.0, 1.0)).unwrap()
    }

    #[test]
    fn constants_must_be_positive() {
        assert!(PhysicalConstants::new(0.0, 1.0).is_err());
        assert!(PhysicalConstants::new(1.0, -1.0).is_err());
        assert!(PhysicalConstants::new(1.0, 2.0).is_ok());
    }

    #[test]
    fn complex_field_rejects_nan_and_wrong_length() {
        let g = GridSpec::new(-1.0, 1.0, 8).unwrap();
        assert_eq!(
            ComplexField::new(g, vec![Complex64::new(0.0, 0.0); 7], 0.0),
            Err(FieldError::LengthMismatch { expected: 8, found: 7 })
        );
        let mut v = vec![Complex64::new(1.0, 0.0); 8];
        v[3].im = f64::NAN;
        assert_eq!(ComplexField::new(g, v, 0.0), Err(FieldError::NonFinite { index: 3 }));
    }

    #[test]
    fn constant_real_field_decomposes_trivially() {
        let g = GridSpec::new(-1.0, 1.0, 64).unwrap();
        let psi = ComplexField::from_fn(g, 0.0, |_| Complex64::new(1.0, 0.0)).unwrap();
        let p = polar_decompose(&psi, &natural()).unwrap();
        assert!(p.rho.iter().all(|&r| (r - 1.0).abs() < 1e-15));
        assert!(p.phase.iter().all(|&s| s.abs() < 1e-15));
    }

    #[test]
    fn plane_wave_phase_is_continuous_over_many_wraps() {
        let g = GridSpec::new(-20.0, 20.0, 2001).unwrap();
        let psi = ComplexField::from_fn(g, 0.0, |x| Complex64::from_polar(1.0, 2.0 * x)).unwrap();
        let hbar = 0.7;
        let c = PhysicalConstants::new(hbar, 1.0).unwrap();
        let p = polar_decompose(&psi, &c).unwrap();
        // Peak of a flat density is the first index.
        let offset = p.phase[0] - hbar * 2.0 * g.x(0);
        for j in 0..g.n_points() {
            assert!((p.phase[j] - hbar * 2.0 * g.x(j) - offset).abs() < 1e-9);
        }
        assert!(p.phase[p.peak_index()].abs() <= std::f64::consts::PI * hbar);
    }

    #[test]
    fn boosted_gaussian_phase_is_linear() {
        let g = GridSpec::symmetric(6.0, 1201).unwrap();
        let (sigma, p0) = (0.5, 3.0);
        let psi = ComplexField::from_fn(g, 0.0, |x| gaussian(x, 0.0, sigma, p0, 1.0)).unwrap();
        let p = polar_decompose(&psi, &natural()).unwrap();
        let peak = p.peak_index();
        assert_eq!(g.x(peak).abs() < 1e-9, true);
        for j in 0..g.n_points() {
            let x = g.x(j);
            let rho = (2.0 * std::f64::consts::PI * sigma * sigma).powf(-0.5) * (-x * x / (2.0 * sigma * sigma)).exp();
            assert!((p.rho[j] - rho).abs() < 1e-12);
            if p.valid[j] {
                assert!((p.phase[j] - p0 * x).abs() < 1e-9, "x={x}");
            }
        }
    }

    #[test]
    fn compose_inverts_decompose_on_superposition() {
        let g = GridSpec::symmetric(12.0, 1024).unwrap();
        let psi = ComplexField::from_fn(g, 0.0, |x| {
            gaussian(x, -2.0, 0.7, 1.5, 1.0) + gaussian(x, 2.5, 0.5, -2.0, 1.0) * Complex64::from_polar(1.0, 0.4)
        })
        .unwrap();
        let c = natural();
        let p = polar_decompose(&psi, &c).unwrap();
        let back = polar_compose(&p, &c).unwrap();
        let err = psi
            .values()
            .iter()
            .zip(back.values())
            .zip(&p.valid)
            .filter(|(_, &ok)| ok)
            .map(|((a, b), _)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-10, "err={err}");
    }

    #[test]
    fn compose_basic_cases() {
        let g = GridSpec::new(0.0, 1.0, 16).unwrap();
        let c = natural();
        let polar = PolarFields { grid: g, rho: vec![1.0; 16], phase: g.points().iter().map(|x| 2.0 * x).collect(), valid: vec![true; 16], time: 0.0 };
        let psi = polar_compose(&polar, &c).unwrap();
        for (j, z) in psi.values().iter().enumerate() {
            assert!((z - Complex64::from_polar(1.0, 2.0 * g.x(j))).norm() < 1e-15);
        }
        let mut bad = polar.clone();
        bad.rho[5] = -1e-3;
        assert!(matches!(polar_compose(&bad, &c), Err(FieldError::NegativeDensity { index: 5, .. })));
    }

    #[test]
    fn zero_field_has_undefined_phase() {
        let g = GridSpec::new(0.0, 1.0, 16).unwrap();
        let psi = ComplexField::from_fn(g, 0.0, |_| Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(polar_decompose(&psi, &natural()), Err(FieldError::AllBelowThreshold));
        assert_eq!(norm(&psi), 0.0);
    }

    #[test]
    fn currents_of_simple_states() {
        let g = GridSpec::symmetric(8.0, 1601).unwrap();
        let c = natural();
        let real = ho_ground(g);
        let j = probability_current(&real, &c).unwrap();
        assert!(j.values.iter().all(|v| v.abs() < 1e-14));
        let v = velocity_field(&real, &c).unwrap();
        assert!(v.values.iter().zip(&v.valid).filter(|(_, ok)| **ok).all(|(v, _)| v.abs() < 1e-10));

        let plane = ComplexField::from_fn(g, 0.0, |x| Complex64::from_polar(1.0, 2.0 * x)).unwrap();
        let j = probability_current(&plane, &c).unwrap();
        let v = velocity_field(&plane, &c).unwrap();
        for k in 2..g.n_points() - 2 {
            assert!((j.values[k] - 2.0).abs() < 1e-7);
            assert!((v.values[k] - 2.0).abs() < 1e-7);
        }

        let boosted = ComplexField::from_fn(g, 0.0, |x| gaussian(x, 0.0, 0.5, 3.0, 1.0)).unwrap();
        let j = probability_current(&boosted, &c).unwrap();
        let mid = g.n_points() / 2;
        let rho0 = boosted.values()[mid].norm_sqr();
        assert!((j.values[mid] - 3.0 * rho0).abs() < 1e-6 * rho0);
    }

    #[test]
    fn superposition_velocity_is_antisymmetric() {
        let g = GridSpec::symmetric(10.0, 2000).unwrap();
        let psi = ComplexField::from_fn(g, 0.0, |x| gaussian(x, -2.0, 0.6, 0.0, 1.0) + gaussian(x, 2.0, 0.6, 0.0, 1.0))
            .unwrap();
        // even chirp, as produced by free spreading
        let chirped = ComplexField::from_fn(g, 0.0, |x| {
            let base = gaussian(x, -2.0, 0.6, 0.0, 1.0) + gaussian(x, 2.0, 0.6, 0.0, 1.0);
            base * Complex64::from_polar(1.0, 0.3 * x * x)
        })
        .unwrap();
        let c = natural();
        for field in [&psi, &chirped] {
            let v = velocity_field(field, &c).unwrap();
            let n = g.n_points();
            for j in 0..n {
                if v.valid[j] && v.valid[n - 1 - j] {
                    assert!((v.values[j] + v.values[n - 1 - j]).abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn velocity_matches_phase_gradient() {
        let g = GridSpec::symmetric(8.0, 1601).unwrap();
        let c = PhysicalConstants::new(1.0, 2.0).unwrap();
        let psi = ComplexField::from_fn(g, 0.0, |x| {
            gaussian(x, -1.0, 0.8, 1.0, 1.0) + gaussian(x, 1.5, 0.6, -0.5, 1.0) * 0.5
        })
        .unwrap();
        let an = FieldAnalyzer::new(&g, Stencil::FiniteDifference4);
        let v = an.velocity_field(&psi, &c).unwrap();
        let polar = an.polar_decompose(&psi, &c).unwrap();
        let ds = an.derivatives().first_real(&polar.phase);
        let rho_max = polar.rho.iter().copied().fold(0.0, f64::max);
        for j in 2..g.n_points() - 2 {
            if polar.rho[j] > 1e-6 * rho_max {
                assert!((v.values[j] - ds[j] / c.mass()).abs() < 1e-5, "j={j}");
            }
        }
    }

    #[test]
    fn quantum_potential_of_ho_ground_state() {
        let g = GridSpec::symmetric(6.0, 1201).unwrap();
        let psi = ho_ground(g);
        let q = quantum_potential(&psi, &natural()).unwrap();
        for j in 2..g.n_points() - 2 {
            let x = g.x(j);
            if q.valid[j] && x.abs() < 4.0 {
                assert!((q.values[j] + 0.5 * x * x - 0.5).abs() < 1e-6, "x={x}");
            }
        }
        let plane = ComplexField::from_fn(g, 0.0, |x| Complex64::from_polar(1.0, 2.0 * x)).unwrap();
        let q = quantum_potential(&plane, &natural()).unwrap();
        // |cis θ| is 1 only to rounding, amplified by 1/dx²
        assert!(q.values.iter().all(|v| v.abs() < 1e-9));
    }

    /// Q(0) for a real Gaussian of width σ: −(1/2)·(−1/(2σ²)) = 1/(4σ²).
    #[test]
    fn quantum_potential_converges() {
        let err = |n: usize, second_order: bool| {
            let g = GridSpec::symmetric(8.0, n).unwrap();
            let psi = ComplexField::from_fn(g, 0.0, |x| gaussian(x, 0.0, 1.0, 0.0, 1.0)).unwrap();
            let mid = (n - 1) / 2;
            let q0 = if second_order {
                // plain central second difference on ρ^{1/2}
                let a: Vec<f64> = psi.values().iter().map(|z| z.norm()).collect();
                let h = g.dx();
                -0.5 * (a[mid + 1] - 2.0 * a[mid] + a[mid - 1]) / (h * h) / a[mid]
            } else {
                quantum_potential(&psi, &natural()).unwrap().values[mid]
            };
            (q0 - 0.25).abs()
        };
        let r2 = err(161, true) / err(321, true);
        assert!((r2 - 4.0).abs() < 0.2, "ratio {r2}");
        let r4 = err(81, false) / err(161, false);
        assert!(r4 > 12.0, "ratio {r4}");
    }

    #[test]
    fn norms() {
        let g = GridSpec::symmetric(20.0, 4001).unwrap();
        let one = ComplexField::from_fn(g, 0.0, |x| gaussian(x, 1.0, 1.0, 0.5, 1.0)).unwrap();
        assert!((norm(&one) - 1.0).abs() < 1e-10);
        let two = ComplexField::from_fn(g, 0.0, |x| gaussian(x, -5.0, 1.0, 0.0, 1.0) + gaussian(x, 5.0, 1.0, 0.0, 1.0))
            .unwrap();
        // cross term 2·exp(−d²/8σ²) for separation d
        let overlap = 2.0 * (-100.0f64 / 8.0).exp();
        assert!((norm(&two) - 2.0 - overlap).abs() < 1e-8);
    }

    #[test]
    fn energies() {
        let g = GridSpec::symmetric(10.0, 2048).unwrap();
        let c = natural();
        let v: Vec<f64> = g.points().iter().map(|x| 0.5 * x * x).collect();
        let e = expectation_energy(&ho_ground(g), &v, &c).unwrap();
        assert!((e - 0.5).abs() < 1e-4);
        let a = 1.5;
        let coherent = ComplexField::from_fn(g, 0.0, |x| gaussian(x, a, 0.5f64.sqrt(), 0.0, 1.0)).unwrap();
        let e = expectation_energy(&coherent, &v, &c).unwrap();
        assert!((e - 0.5 - a * a / 2.0).abs() < 1e-4);

        let wide = GridSpec::symmetric(40.0, 4096).unwrap();
        let sigma = 4.0;
        let packet = ComplexField::from_fn(wide, 0.0, |x| gaussian(x, 0.0, sigma, 2.0, 1.0)).unwrap();
        let e = expectation_energy(&packet, &vec![0.0; 4096], &c).unwrap();
        assert!((e - (2.0 + 1.0 / (8.0 * sigma * sigma))).abs() < 1e-8);

        let unnormalized = ComplexField::new(g, ho_ground(g).values().iter().map(|z| z * 1.1).collect(), 0.0).unwrap();
        assert!(matches!(expectation_energy(&unnormalized, &v, &c), Err(FieldError::NotNormalized { .. })));
    }
}

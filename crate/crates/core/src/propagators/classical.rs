use super::{PotentialSpec, PropagatorConfig};
use crate::error::PropagationError;

/// Point particle state. `p` is the physical momentum `m ẋ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalCKState {
    pub t: f64,
    pub x: f64,
    pub p: f64,
}

impl ClassicalCKState {
    pub fn new(t: f64, x: f64, p: f64) -> Self {
        Self { t, x, p }
    }

    /// `p²/2m + V(x)`.
    pub fn energy(&self, potential: &PotentialSpec, mass: f64) -> Option<f64> {
        Some(self.p * self.p / (2.0 * mass) + potential.value_at(self.x, mass)?)
    }
}

/// Integrate the classical Caldirola-Kanai equations
/// `Ẋ = e^{-γt} P/m`, `Ṗ = −e^{γt} V'(X)` with RK4 and step `config.dt`.
///
/// Returns the states at every step, starting with `state0` and ending exactly
/// at `t_final`.
pub fn classical_ck_trajectory(
    state0: ClassicalCKState,
    config: &PropagatorConfig,
    t_final: f64,
) -> Result<Vec<ClassicalCKState>, PropagationError> {
    let m = config.constants.mass();
    let gamma = config.gamma;
    if config.potential.derivative_at(0.0, m).is_none() {
        return Err(PropagationError::UnsupportedPotential(config.potential.name()));
    }
    if !(config.dt > 0.0 && t_final >= state0.t) {
        return Err(PropagationError::InvalidConfig("need dt > 0 and t_final >= t0".into()));
    }
    let force = |x: f64| config.potential.derivative_at(x, m).unwrap_or(0.0);
    let rhs = |t: f64, x: f64, pc: f64| {
        let e = (gamma * t).exp();
        (pc / (e * m), -e * force(x))
    };

    let mut out = vec![state0];
    let (mut t, mut x) = (state0.t, state0.x);
    let mut pc = state0.p * (gamma * t).exp();
    while t_final - t > 1e-12 * config.dt.max(t.abs()) {
        let h = config.dt.min(t_final - t);
        let (k1x, k1p) = rhs(t, x, pc);
        let (k2x, k2p) = rhs(t + 0.5 * h, x + 0.5 * h * k1x, pc + 0.5 * h * k1p);
        let (k3x, k3p) = rhs(t + 0.5 * h, x + 0.5 * h * k2x, pc + 0.5 * h * k2p);
        let (k4x, k4p) = rhs(t + h, x + h * k3x, pc + h * k3p);
        x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        pc += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        t += h;
        if !(x.is_finite() && pc.is_finite()) {
            return Err(PropagationError::NumericBlowup { t });
        }
        out.push(ClassicalCKState { t, x, p: pc * (-gamma * t).exp() });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::PhysicalConstants;
    use crate::propagators::Model;

    fn cfg(gamma: f64, dt: f64) -> PropagatorConfig {
        PropagatorConfig::standard(
            PhysicalConstants::natural(),
            PotentialSpec::Harmonic { omega: 1.0, center: 0.0 },
            dt,
            10.0,
        )
        .with_model(Model::CaldirolaKanai, gamma)
    }

    #[test]
    fn matches_damped_oscillator() {
        // x'' + γx' + ω²x = 0, underdamped closed form
        let (g, w) = (0.4, 1.0);
        let wd = (w * w - g * g / 4.0f64).sqrt();
        let path = classical_ck_trajectory(ClassicalCKState::new(0.0, 1.0, 0.0), &cfg(g, 1e-3), 10.0).unwrap();
        let last = path.last().unwrap();
        assert!((last.t - 10.0).abs() < 1e-12);
        let t = last.t;
        let x = (-g * t / 2.0).exp() * ((wd * t).cos() + g / (2.0 * wd) * (wd * t).sin());
        assert!((last.x - x).abs() < 1e-10, "{} vs {}", last.x, x);
    }

    #[test]
    fn undamped_energy_is_conserved() {
        let c = cfg(0.0, 1e-2);
        let path = classical_ck_trajectory(ClassicalCKState::new(0.0, 0.3, 1.1), &c, 10.0).unwrap();
        let e0 = path[0].energy(&c.potential, 1.0).unwrap();
        for s in &path {
            assert!((s.energy(&c.potential, 1.0).unwrap() - e0).abs() < 1e-9);
        }
    }

    #[test]
    fn tabulated_is_unsupported() {
        let mut c = cfg(0.1, 1e-2);
        c.potential = PotentialSpec::Tabulated(vec![0.0; 8]);
        assert!(classical_ck_trajectory(ClassicalCKState::new(0.0, 0.0, 0.0), &c, 1.0).is_err());
    }
}

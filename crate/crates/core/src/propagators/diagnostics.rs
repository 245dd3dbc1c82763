use super::{Model, Propagator};
use crate::error::{FieldError, PropagationError};
use crate::fields::ComplexField;
use crate::grid::trapezoid;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualSummary {
    pub max_abs: f64,
    /// ρ-weighted root mean square over the evaluation region.
    pub rms: f64,
    pub points: usize,
}

/// Pointwise residual of the hydrodynamic phase equation
/// `∂tS + (∂xS)²/2m + V + Q + γ(S − ∫ρS dx) = 0` at the time of `cur`.
///
/// `∂tS` is taken from `ħ Im(ψ* ∂tψ)/ρ` with a central difference of `prev`
/// and `next`. A spatially uniform residual is a gauge freedom of `S` and is
/// removed by subtracting the ρ-weighted mean. Only points with
/// `ρ > rho_fraction · max ρ` are scored.
pub fn hamilton_jacobi_residual(
    prop: &Propagator,
    prev: &ComplexField,
    cur: &ComplexField,
    next: &ComplexField,
    rho_fraction: f64,
) -> Result<ResidualSummary, PropagationError> {
    let cfg = prop.config();
    let gamma = match cfg.model {
        Model::Standard => 0.0,
        Model::Kostin => cfg.gamma,
        Model::CaldirolaKanai => {
            return Err(PropagationError::WrongModel { expected: Model::Kostin.name(), found: cfg.model.name() })
        }
    };
    let h = 0.5 * (next.time() - prev.time());
    if !(h > 0.0) {
        return Err(PropagationError::InvalidConfig("snapshots must be increasing in time".into()));
    }
    let grid = prop.grid();
    for f in [prev, cur, next] {
        if f.grid() != grid {
            return Err(FieldError::InvalidGrid("snapshot grid differs from propagator grid".into()).into());
        }
    }
    let c = &cfg.constants;
    let an = prop.analyzer();
    let polar = an.polar_decompose(cur, c)?;
    let v = an.velocity_field(cur, c)?;
    let q = an.quantum_potential(cur, c)?;
    let rho = &polar.rho;
    let weighted: Vec<f64> = rho.iter().zip(&polar.phase).map(|(r, s)| if s.is_finite() { r * s } else { 0.0 }).collect();
    let mean_s = trapezoid(&weighted, grid.dx());

    let rho_max = rho.iter().cloned().fold(0.0, f64::max);
    let mut res = vec![0.0; rho.len()];
    let mut keep = vec![false; rho.len()];
    for j in 0..rho.len() {
        if rho[j] <= rho_fraction * rho_max || !polar.valid[j] {
            continue;
        }
        let psi_t = (next.values()[j] - prev.values()[j]) / (2.0 * h);
        let s_t = c.hbar() * (cur.values()[j].conj() * psi_t).im / rho[j];
        let s_x = c.mass() * v.values[j];
        res[j] = s_t
            + s_x * s_x / (2.0 * c.mass())
            + prop.potential_values()[j]
            + q.values[j]
            + gamma * (polar.phase[j] - mean_s);
        keep[j] = true;
    }
    let points = keep.iter().filter(|&&k| k).count();
    if points == 0 {
        return Err(PropagationError::PhaseUndefined);
    }
    let (mut wsum, mut wres) = (0.0, 0.0);
    for j in 0..rho.len() {
        if keep[j] {
            wsum += rho[j];
            wres += rho[j] * res[j];
        }
    }
    let shift = wres / wsum;
    let (mut max_abs, mut sq) = (0.0f64, 0.0);
    for j in 0..rho.len() {
        if keep[j] {
            let r = res[j] - shift;
            max_abs = max_abs.max(r.abs());
            sq += rho[j] * r * r;
        }
    }
    Ok(ResidualSummary { max_abs, rms: (sq / wsum).sqrt(), points })
}

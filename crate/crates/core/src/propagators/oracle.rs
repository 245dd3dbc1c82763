use std::f64::consts::PI;

use num_complex::Complex64;

use super::{Model, PotentialSpec, PropagatorConfig};
use crate::error::PropagationError;
use crate::fields::ComplexField;
use crate::grid::GridSpec;

/// Gaussian wavepacket `(2πσ0²)^{-1/4} exp(−(x−x0)²/4σ0² + i p0 (x−x0)/ħ)` at `t0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianParams {
    pub sigma0: f64,
    pub x0: f64,
    pub p0: f64,
}

enum Quadratic {
    Free { offset: f64 },
    Oscillator { omega: f64, center: f64, offset: f64 },
}

fn classify(potential: &PotentialSpec, mass: f64) -> Result<Quadratic, PropagationError> {
    match *potential {
        PotentialSpec::Free => Ok(Quadratic::Free { offset: 0.0 }),
        PotentialSpec::Harmonic { omega, center } => Ok(Quadratic::Oscillator { omega, center, offset: 0.0 }),
        PotentialSpec::Polynomial { coefficients: [c0, c1, c2] } => {
            if c2 > 0.0 {
                let center = -c1 / (2.0 * c2);
                Ok(Quadratic::Oscillator {
                    omega: (2.0 * c2 / mass).sqrt(),
                    center,
                    offset: c0 - c2 * center * center,
                })
            } else if c2 == 0.0 && c1 == 0.0 {
                Ok(Quadratic::Free { offset: c0 })
            } else {
                Err(PropagationError::UnsupportedPotential("non-confining polynomial"))
            }
        }
        PotentialSpec::Tabulated(_) => Err(PropagationError::UnsupportedPotential("tabulated")),
    }
}

/// Closed-form evolution of a Gaussian under a free or harmonic Hamiltonian.
///
/// The packet keeps the form `z^{-1/2} exp(i[a(x−xc)² + pc(x−xc) + A]/ħ)` where
/// `(xc, pc)` follow the classical orbit, `a = (m/2) ż/z` and `A` is the classical
/// action along the orbit. The square root follows `z` continuously in time.
pub fn analytic_gaussian_oracle(
    params: GaussianParams,
    config: &PropagatorConfig,
    grid: GridSpec,
    t: f64,
) -> Result<ComplexField, PropagationError> {
    if config.model != Model::Standard {
        return Err(PropagationError::WrongModel { expected: Model::Standard.name(), found: config.model.name() });
    }
    if !(params.sigma0 > 0.0 && params.sigma0.is_finite() && params.x0.is_finite() && params.p0.is_finite()) {
        return Err(PropagationError::InvalidConfig("gaussian needs finite x0, p0 and sigma0 > 0".into()));
    }
    let hbar = config.constants.hbar();
    let m = config.constants.mass();
    let tau = t - config.t0;
    let s2 = params.sigma0 * params.sigma0;
    let i = Complex64::i();

    let (xc, pc, z, zdot, action) = match classify(&config.potential, m)? {
        Quadratic::Free { offset } => {
            let xc = params.x0 + params.p0 * tau / m;
            let z = Complex64::new(1.0, hbar * tau / (2.0 * m * s2));
            let zdot = Complex64::new(0.0, hbar / (2.0 * m * s2));
            let action = params.p0 * params.p0 * tau / (2.0 * m) - offset * tau;
            (xc, params.p0, z, zdot, action)
        }
        Quadratic::Oscillator { omega, center, offset } => {
            let x0 = params.x0 - center;
            let p0 = params.p0;
            let (s, c) = (omega * tau).sin_cos();
            let kappa = hbar / (2.0 * m * omega * s2);
            let xc = center + x0 * c + p0 / (m * omega) * s;
            let pc = p0 * c - m * omega * x0 * s;
            let z = Complex64::new(c, kappa * s);
            let zdot = Complex64::new(-omega * s, kappa * omega * c);
            let (s2w, c2w) = (2.0 * omega * tau).sin_cos();
            let action = (p0 * p0 - m * m * omega * omega * x0 * x0) * s2w / (4.0 * m * omega)
                + p0 * x0 * (c2w - 1.0) / 2.0
                - offset * tau;
            (xc, pc, z, zdot, action)
        }
    };

    let a = 0.5 * m * zdot / z;
    let phi = z.im.atan2(z.re);
    let winding = match classify(&config.potential, m)? {
        Quadratic::Oscillator { omega, .. } => 2.0 * PI * ((omega * tau - phi) / (2.0 * PI)).round(),
        Quadratic::Free { .. } => 0.0,
    };
    let theta = phi + winding;
    let prefactor = (2.0 * PI * s2).powf(-0.25) * z.norm().powf(-0.5) * Complex64::cis(-0.5 * theta);

    ComplexField::from_fn(grid, t, |x| {
        let d = x - xc;
        prefactor * (i * (a * d * d + pc * d + action) / hbar).exp()
    })
    .map_err(Into::into)
}

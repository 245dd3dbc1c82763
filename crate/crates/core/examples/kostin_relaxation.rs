//! Kostin friction drains a displaced packet into the oscillator ground state.

use std::f64::consts::PI;

use qhydro::fields::gaussian;
use qhydro::{ComplexField, GridSpec, Model, PhysicalConstants, PotentialSpec, Propagator, PropagatorConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let w0 = 2.0 * PI / 10.0;
    let grid = GridSpec::symmetric(10.0, 512)?;
    let cfg = PropagatorConfig::standard(
        PhysicalConstants::natural(),
        PotentialSpec::Harmonic { omega: w0, center: 0.0 },
        2e-3,
        60.0,
    )
    .with_model(Model::Kostin, 0.3 * w0);
    let prop = Propagator::new(grid, cfg)?;
    let sigma = (1.0 / (2.0 * w0)).sqrt();
    let psi0 = ComplexField::from_fn(grid, 0.0, |x| gaussian(x, 2.0, 0.6 * sigma, 0.0, 1.0))?;
    let run = prop.propagate(&psi0, 60.0, 500)?;

    println!("{:>6} {:>10} {:>10} {:>10}", "t", "<x>", "width", "energy");
    for r in &run.series {
        println!("{:6.1} {:10.5} {:10.5} {:10.6}", r.t, r.mean_x, r.width, r.energy);
    }
    let last = run.series.last().unwrap();
    println!("ground state: width {sigma:.5}, energy {:.6}; final width {:.5}, energy {:.6}", 0.5 * w0, last.width, last.energy);
    Ok(())
}

//! Caldirola-Kanai packet in a harmonic trap: the width keeps shrinking and the
//! energy falls through the zero-point value.

use std::f64::consts::PI;

use qhydro::scenario::catalog_entry;
use qhydro::Propagator;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "fig2c".into());
    let c = catalog_entry(&name).ok_or(format!("no catalog entry '{name}'"))?;
    let m = c.matter_wave().ok_or("not a matter-wave scenario")?;
    let prop = Propagator::new(m.grid, m.propagator_config())?;
    let psi0 = m.initial.build(m.grid, &m.constants)?;
    let run = prop.propagate(&psi0, m.time.t_final, m.time.snapshot_every)?;

    let zero_point = match m.potential {
        qhydro::PotentialSpec::Harmonic { omega, .. } => 0.5 * m.constants.hbar() * omega,
        _ => 0.5 * 2.0 * PI / 10.0,
    };
    println!("{name}: gamma = {}, zero-point energy {zero_point:.4}", m.gamma);
    println!("{:>8} {:>10} {:>10} {:>10}", "t", "<x>", "width", "energy");
    let stride = (run.series.len() / 20).max(1);
    for r in run.series.iter().step_by(stride) {
        println!("{:8.3} {:10.5} {:10.5} {:10.5}", r.t, r.mean_x, r.width, r.energy);
    }
    if let Some(r) = run.series.iter().find(|r| r.energy < zero_point) {
        println!("energy below the zero-point value from t = {:.3}", r.t);
    }
    Ok(())
}

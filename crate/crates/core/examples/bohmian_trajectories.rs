//! Trajectories launched from two separating packets never cross, and the
//! probability between neighbours stays fixed.

use qhydro::fields::gaussian;
use qhydro::trajectory::{
    check_non_crossing, integrate_bundle, sample_initial_positions, tube_probability, SamplingScheme,
};
use qhydro::{ComplexField, GridSpec, PhysicalConstants, PotentialSpec, Propagator, PropagatorConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = GridSpec::symmetric(40.0, 2048)?;
    let cfg = PropagatorConfig::standard(PhysicalConstants::natural(), PotentialSpec::Free, 2e-3, 6.0);
    let prop = Propagator::new(grid, cfg)?;
    let psi0 = ComplexField::from_fn(grid, 0.0, |x| gaussian(x, -3.0, 0.5, 0.0, 1.0) + gaussian(x, 3.0, 0.5, 0.0, 1.0))?
        .normalized()?;
    let run = prop.propagate(&psi0, 6.0, 10)?;

    let ens = sample_initial_positions(&grid, &psi0.density(), 16, SamplingScheme::Quantile)?;
    let bundle = integrate_bundle(&ens, &run.snapshots, &prop, 0.01)?;

    print!("{:>6}", "t");
    for k in 0..bundle.trajectories.len() {
        print!(" {:>7}", format!("x{k}"));
    }
    println!();
    let n = bundle.times.len();
    for i in (0..n).step_by(n / 12) {
        print!("{:6.2}", bundle.times[i]);
        for tr in &bundle.trajectories {
            print!(" {:7.3}", tr.samples[i].1);
        }
        println!();
    }

    let report = check_non_crossing(&bundle);
    println!("ordered: {}, smallest gap {:.3e}", report.ok, report.min_gap.unwrap_or(f64::NAN));
    let (a, b) = (bundle.members[7], bundle.members[8]);
    let tube = tube_probability(&bundle, &run.snapshots, a, b)?;
    let drift = tube.iter().map(|(_, p)| (p - tube[0].1).abs()).fold(0.0, f64::max);
    println!("probability between the two central trajectories {:.6}, drift {drift:.2e}", tube[0].1);
    Ok(())
}

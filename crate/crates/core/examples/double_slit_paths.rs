//! Two Gaussian slits: Fresnel propagation, Poynting flow, transverse momentum
//! and energy streamlines that never cross the symmetry axis.

use qhydro::optics::{
    check_path_ordering, fresnel_propagate, fringe_spacing_from_minima, initial_two_slit_field, launch_positions,
    trace_paths, transverse_momentum, OpticalScene, PoyntingField, SlitSpec,
};
use qhydro::GridSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (lambda, sigma, half) = (943e-9, 0.3e-3, 2.35e-3);
    let grid = GridSpec::symmetric(12e-3, 4096)?;
    let planes: Vec<f64> = (1..=24).map(|k| 0.5 * k as f64).collect();
    let slits = vec![SlitSpec::gaussian(sigma, -half), SlitSpec::gaussian(sigma, half)];
    let scene = OpticalScene::new(slits.clone(), lambda, grid, planes.clone())?;
    let field = fresnel_propagate(&initial_two_slit_field(&scene)?, &scene)?;
    let flow = PoyntingField::from_field(&field)?;

    for z in [3.0, 8.0, 12.0] {
        let k = scene.plane_index(z).unwrap();
        let spacing = fringe_spacing_from_minima(&grid, &field.intensity(k), 0.0);
        let kx = transverse_momentum(&flow, z).unwrap();
        let span = kx.values.iter().zip(&kx.valid).filter(|(_, &ok)| ok).map(|(v, _)| v.abs()).fold(0.0, f64::max);
        println!(
            "z = {z:4.1} m: fringe spacing {} mm, max |kx/k| {span:.2e}",
            spacing.map_or("n/a".into(), |s| format!("{:.4}", s * 1e3))
        );
    }

    let (starts, _) = launch_positions(&flow, &slits, 5)?;
    let paths: Vec<_> = trace_paths(&starts, planes[0], &flow, 2e-3).into_iter().collect::<Result<_, _>>()?;
    for p in &paths {
        let (x0, _) = p.start();
        let (x1, z1) = p.end();
        println!("path from x = {:+.4} mm reaches x = {:+.4} mm at z = {z1:.2} m", x0 * 1e3, x1 * 1e3);
    }
    let order = check_path_ordering(&paths, &planes);
    println!("paths stay ordered: {}", order.ok);
    Ok(())
}

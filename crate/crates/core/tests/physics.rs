use std::f64::consts::PI;

use qhydro::fields::gaussian;
use qhydro::optics::{cross_term_spacing, fresnel_propagate, initial_two_slit_field, OpticalScene, SlitSpec};
use qhydro::propagators::{analytic_gaussian_oracle, classical_ck_trajectory, ClassicalCKState, GaussianParams};
use qhydro::trajectory::{integrate_bundle, ks_distance, sample_initial_positions, Cdf, SamplingScheme};
use qhydro::{ComplexField, GridSpec, Model, PhysicalConstants, PotentialSpec, Propagator, PropagatorConfig};

const W0: f64 = 2.0 * PI / 10.0;

fn damped_run(model: Model, t_final: f64) -> (Propagator, qhydro::propagators::PropagationRun) {
    let grid = GridSpec::symmetric(10.0, 512).unwrap();
    let cfg = PropagatorConfig::standard(
        PhysicalConstants::natural(),
        PotentialSpec::Harmonic { omega: W0, center: 0.0 },
        2e-3,
        t_final,
    )
    .with_model(model, 0.3 * W0);
    let prop = Propagator::new(grid, cfg).unwrap();
    let sigma = (1.0 / (2.0 * W0)).sqrt();
    let psi0 = ComplexField::from_fn(grid, 0.0, |x| gaussian(x, 1.0, sigma, 0.0, 1.0)).unwrap();
    let run = prop.propagate(&psi0, t_final, 50).unwrap();
    (prop, run)
}

#[test]
fn kostin_centroid_is_a_damped_oscillator() {
    let (_, run) = damped_run(Model::Kostin, 20.0);
    let g = 0.3 * W0;
    let w = (W0 * W0 - g * g / 4.0).sqrt();
    for r in &run.series {
        let exact = (-g * r.t / 2.0).exp() * ((w * r.t).cos() + g / (2.0 * w) * (w * r.t).sin());
        assert!((r.mean_x - exact).abs() < 1e-4, "t = {}: {} vs {exact}", r.t, r.mean_x);
    }
}

#[test]
fn kostin_energy_never_rises() {
    let (_, run) = damped_run(Model::Kostin, 30.0);
    for w in run.series.windows(2) {
        assert!(w[1].energy <= w[0].energy + 1e-9, "t = {}: {} -> {}", w[1].t, w[0].energy, w[1].energy);
    }
    let floor = 0.5 * W0;
    let excess = run.series.last().unwrap().energy - floor;
    assert!(excess > 0.0 && excess < 0.01 * (run.series[0].energy - floor), "excess {excess}");
}

#[test]
fn ck_centroid_follows_the_classical_orbit() {
    let (prop, run) = damped_run(Model::CaldirolaKanai, 6.0);
    let orbit = classical_ck_trajectory(ClassicalCKState::new(0.0, 1.0, 0.0), prop.config(), 6.0).unwrap();
    for r in &run.series {
        let k = (r.t / prop.config().dt).round() as usize;
        assert!((orbit[k].t - r.t).abs() < 1e-9);
        assert!((r.mean_x - orbit[k].x).abs() < 1e-5, "t = {}: {} vs {}", r.t, r.mean_x, orbit[k].x);
    }
}

#[test]
fn ck_energy_balance_is_friction_work() {
    let gamma = 0.3 * W0;
    let potential = PotentialSpec::Harmonic { omega: W0, center: 0.0 };
    let cfg = PropagatorConfig::standard(PhysicalConstants::natural(), potential.clone(), 1e-3, 10.0)
        .with_model(Model::CaldirolaKanai, gamma);
    let states = classical_ck_trajectory(ClassicalCKState::new(0.0, 1.0, 0.0), &cfg, 10.0).unwrap();
    let energy = |s: &ClassicalCKState| s.energy(&potential, 1.0).unwrap();
    let e0 = energy(&states[0]);
    let mut work = 0.0;
    for w in states.windows(2) {
        let h = w[1].t - w[0].t;
        work += gamma * h * 0.5 * (w[0].p * w[0].p + w[1].p * w[1].p);
        let e = energy(&w[1]);
        assert!((e0 - e - work).abs() < 1e-6 * e0, "t = {}", w[1].t);
    }
}

fn oracle_error(dt: f64) -> f64 {
    let grid = GridSpec::symmetric(12.0, 1024).unwrap();
    let cfg = PropagatorConfig::standard(
        PhysicalConstants::natural(),
        PotentialSpec::Harmonic { omega: 1.0, center: 0.0 },
        dt,
        2.0,
    );
    let prop = Propagator::new(grid, cfg).unwrap();
    let params = GaussianParams { sigma0: 0.5, x0: 1.0, p0: 0.5 };
    let psi0 = ComplexField::from_fn(grid, 0.0, |x| gaussian(x, 1.0, 0.5, 0.5, 1.0)).unwrap();
    let end = prop.propagate(&psi0, 2.0, usize::MAX).unwrap();
    let exact = analytic_gaussian_oracle(params, prop.config(), grid, 2.0).unwrap();
    end.last().max_abs_diff(&exact)
}

#[test]
fn splitting_error_is_second_order() {
    let (coarse, fine) = (oracle_error(0.02), oracle_error(0.01));
    let ratio = coarse / fine;
    assert!((3.5..4.5).contains(&ratio), "{coarse:.3e} -> {fine:.3e}, ratio {ratio:.2}");
}

#[test]
fn quantile_ensemble_tracks_the_density() {
    let grid = GridSpec::symmetric(30.0, 2048).unwrap();
    let cfg = PropagatorConfig::standard(PhysicalConstants::natural(), PotentialSpec::Free, 2e-3, 2.0);
    let prop = Propagator::new(grid, cfg).unwrap();
    let psi0 = ComplexField::from_fn(grid, 0.0, |x| gaussian(x, -2.0, 0.6, 0.0, 1.0) + gaussian(x, 2.0, 0.6, 0.0, 1.0))
        .unwrap()
        .normalized()
        .unwrap();
    let run = prop.propagate(&psi0, 2.0, 10).unwrap();
    let ens = sample_initial_positions(&grid, &psi0.density(), 256, SamplingScheme::Quantile).unwrap();
    let bundle = integrate_bundle(&ens, &run.snapshots, &prop, 0.01).unwrap();
    assert!(bundle.failures.is_empty());
    let ends: Vec<f64> = bundle.trajectories.iter().map(|t| t.end()).collect();
    let cdf = Cdf::from_state(run.last()).unwrap();
    let d = ks_distance(&ends, None, &cdf);
    assert!(d < 0.05, "KS distance {d}");
}

#[test]
fn far_field_fringes_approach_the_grating_spacing() {
    let (lambda, sigma, half) = (943e-9, 0.3e-3, 2.35e-3);
    let grid = GridSpec::symmetric(12e-3, 4096).unwrap();
    let slits = [SlitSpec::gaussian(sigma, half), SlitSpec::gaussian(sigma, -half)];
    let scene = OpticalScene::new(slits.to_vec(), lambda, grid, vec![12.0]).unwrap();
    let single = |s: &SlitSpec| {
        let sc = scene.with_slits(vec![*s]);
        fresnel_propagate(&initial_two_slit_field(&sc).unwrap(), &sc).unwrap()
    };
    let (a, b) = (single(&slits[0]), single(&slits[1]));
    let spacing = cross_term_spacing(&grid, &a.psi[0], &b.psi[0], 0.0).unwrap();
    let expected = lambda * 12.0 / (2.0 * half);
    assert!((spacing - expected).abs() < 0.02 * expected, "{spacing} vs {expected}");
}

use super::Propagator;
use crate::error::PropagationError;
use crate::fields::ComplexField;
use crate::table::Table;

/// Norm drift above which a run is flagged.
pub const NORM_DRIFT_WARNING: f64 = 1e-6;
/// Density near the periodic boundary, relative to the peak, above which a run
/// is flagged for wrap-around.
pub const EDGE_DENSITY_WARNING: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesRow {
    pub t: f64,
    pub norm: f64,
    pub mean_x: f64,
    pub width: f64,
    pub energy: f64,
}

#[derive(Debug, Clone)]
pub struct PropagationRun {
    pub snapshots: Vec<ComplexField>,
    pub series: Vec<SeriesRow>,
    pub warnings: Vec<String>,
}

impl PropagationRun {
    pub fn last(&self) -> &ComplexField {
        self.snapshots.last().expect("a run always holds its initial state")
    }

    pub fn times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.time()).collect()
    }
}

pub fn write_series(series: &[SeriesRow], meta: &[(&str, String)]) -> String {
    let mut t = Table::new();
    for (k, v) in meta {
        t.meta(k, v);
    }
    t.columns(&["t", "norm", "mean_x", "width", "energy"]);
    for r in series {
        t.row([r.t, r.norm, r.mean_x, r.width, r.energy]);
    }
    t.into_string()
}

fn edge_fraction(psi: &ComplexField) -> f64 {
    let rho = psi.density();
    let peak = rho.iter().cloned().fold(0.0, f64::max);
    let band = (rho.len() / 50).max(1);
    let edge = rho[..band].iter().chain(&rho[rho.len() - band..]).cloned().fold(0.0, f64::max);
    if peak > 0.0 {
        edge / peak
    } else {
        0.0
    }
}

impl Propagator {
    pub fn series_row(&self, psi: &ComplexField) -> SeriesRow {
        SeriesRow {
            t: psi.time(),
            norm: psi.norm(),
            mean_x: psi.mean_position(),
            width: psi.width(),
            energy: self.physical_energy(psi),
        }
    }

    /// Step from `psi0` to `t_final`, calling `observe` on the initial state,
    /// every `every`-th state and the final state. The last step is shortened
    /// to land on `t_final`.
    pub fn propagate_with(
        &self,
        psi0: &ComplexField,
        t_final: f64,
        every: usize,
        mut observe: impl FnMut(&ComplexField),
    ) -> Result<Vec<String>, PropagationError> {
        let dt = self.config().dt;
        if !(t_final >= psi0.time()) || every == 0 {
            return Err(PropagationError::InvalidConfig(format!(
                "need t_final >= start time ({} < {}) and a positive snapshot stride",
                t_final,
                psi0.time()
            )));
        }
        let span = t_final - psi0.time();
        let steps = ((span / dt) - 1e-9).ceil().max(0.0) as usize;
        let norm0 = psi0.norm();
        let mut warnings = Vec::new();
        let mut max_edge = edge_fraction(psi0);
        let mut psi = psi0.clone();
        observe(&psi);
        for k in 1..=steps {
            let h = if k == steps { t_final - psi.time() } else { dt };
            psi = self.step_by(&psi, h)?;
            if k == steps {
                psi = psi.with_time(t_final);
            }
            if k % every == 0 || k == steps {
                max_edge = max_edge.max(edge_fraction(&psi));
                observe(&psi);
            }
        }
        let drift = (psi.norm() - norm0).abs();
        if drift > NORM_DRIFT_WARNING {
            warnings.push(format!("norm drifted by {drift:.3e}"));
        }
        if max_edge > EDGE_DENSITY_WARNING {
            warnings.push(format!("density reached the grid edge (edge/peak = {max_edge:.3e}); results may wrap around"));
        }
        Ok(warnings)
    }

    /// Propagate and keep the observed states together with their moments.
    pub fn propagate(&self, psi0: &ComplexField, t_final: f64, every: usize) -> Result<PropagationRun, PropagationError> {
        let mut snapshots = Vec::new();
        let mut series = Vec::new();
        let warnings = self.propagate_with(psi0, t_final, every, |psi| {
            series.push(self.series_row(psi));
            snapshots.push(psi.clone());
        })?;
        Ok(PropagationRun { snapshots, series, warnings })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{gaussian, PhysicalConstants};
    use crate::grid::GridSpec;
    use crate::propagators::{PotentialSpec, PropagatorConfig};
    use crate::table::parse_table;

    #[test]
    fn run_lands_on_final_time() {
        let g = GridSpec::symmetric(10.0, 512).unwrap();
        let cfg = PropagatorConfig::standard(
            PhysicalConstants::natural(),
            PotentialSpec::Harmonic { omega: 1.0, center: 0.0 },
            0.03,
            1.0,
        );
        let p = Propagator::new(g, cfg).unwrap();
        let psi = ComplexField::from_fn(g, 0.0, |x| gaussian(x, 0.0, 0.7, 0.0, 1.0)).unwrap();
        let run = p.propagate(&psi, 1.0, 10).unwrap();
        let expected = [0.0, 0.3, 0.6, 0.9, 1.0];
        assert_eq!(run.snapshots.len(), expected.len());
        for (t, e) in run.times().iter().zip(expected) {
            assert!((t - e).abs() < 1e-12);
        }
        assert_eq!(run.last().time(), 1.0);
        assert!(run.warnings.is_empty(), "{:?}", run.warnings);
        let text = write_series(&run.series, &[("model", "standard".into())]);
        let parsed = parse_table(&text).unwrap();
        assert_eq!(parsed.rows.len(), 5);
    }

    #[test]
    fn wrap_around_is_flagged() {
        let g = GridSpec::symmetric(5.0, 256).unwrap();
        let cfg = PropagatorConfig::standard(PhysicalConstants::natural(), PotentialSpec::Free, 0.01, 3.0);
        let p = Propagator::new(g, cfg).unwrap();
        let psi = ComplexField::from_fn(g, 0.0, |x| gaussian(x, 0.0, 0.5, 3.0, 1.0)).unwrap();
        let run = p.propagate(&psi, 3.0, 50).unwrap();
        assert!(run.warnings.iter().any(|w| w.contains("edge")));
    }
}

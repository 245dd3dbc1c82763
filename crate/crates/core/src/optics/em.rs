use num_complex::Complex64;

use super::{OpticalField2D, OpticalScene, Polarization, C_LIGHT, EPS0, MU0};
use crate::error::OpticsError;
use crate::grid::GridSpec;
use crate::table::Table;

/// Relative energy density below which `k_x/k` is flagged invalid.
pub const KX_THRESHOLD: f64 = 1e-8;

/// Complex amplitudes of an E-polarized field: `E = E_y e_y`, `H = H_x e_x + H_z e_z`,
/// indexed `[plane][x]`.
#[derive(Debug, Clone)]
pub struct EmFields {
    pub grid: GridSpec,
    pub z_planes: Vec<f64>,
    pub omega: f64,
    pub e_y: Vec<Vec<Complex64>>,
    pub h_x: Vec<Vec<Complex64>>,
    pub h_z: Vec<Vec<Complex64>>,
}

/// `E = Ψ e_y`, `H = (i/ωμ0)(∂zΨ e_x − ∂xΨ e_z)`.
pub fn assemble_em_fields(field: &OpticalField2D, scene: &OpticalScene) -> Result<EmFields, OpticsError> {
    if scene.polarization != Polarization::EPolarized {
        return Err(OpticsError::UnsupportedPolarization);
    }
    let omega = scene.angular_frequency();
    let f = Complex64::i() / (omega * MU0);
    let map = |rows: &Vec<Vec<Complex64>>, s: Complex64| -> Vec<Vec<Complex64>> {
        rows.iter().map(|r| r.iter().map(|z| s * z).collect()).collect()
    };
    Ok(EmFields {
        grid: scene.grid,
        z_planes: scene.z_planes.clone(),
        omega,
        e_y: field.psi.clone(),
        h_x: map(&field.dpsi_dz, f),
        h_z: map(&field.dpsi_dx, -f),
    })
}

/// Time-averaged `U = ¼(ε0 |E|² + μ0 |H|²)`.
pub fn energy_density(em: &EmFields) -> Vec<Vec<f64>> {
    (0..em.e_y.len())
        .map(|p| {
            (0..em.e_y[p].len())
                .map(|j| {
                    0.25 * (EPS0 * em.e_y[p][j].norm_sqr() + MU0 * (em.h_x[p][j].norm_sqr() + em.h_z[p][j].norm_sqr()))
                })
                .collect()
        })
        .collect()
}

/// Time-averaged `S = ½ Re(E × H*)` as `(S_x, S_z)`.
pub fn poynting(em: &EmFields) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let mut sx = Vec::with_capacity(em.e_y.len());
    let mut sz = Vec::with_capacity(em.e_y.len());
    for p in 0..em.e_y.len() {
        let e = &em.e_y[p];
        sx.push((0..e.len()).map(|j| 0.5 * (e[j] * em.h_z[p][j].conj()).re).collect());
        sz.push((0..e.len()).map(|j| -0.5 * (e[j] * em.h_x[p][j].conj()).re).collect());
    }
    (sx, sz)
}

/// Energy density and Poynting vector on the `(x, z)` lattice.
#[derive(Debug, Clone)]
pub struct PoyntingField {
    pub grid: GridSpec,
    pub z_planes: Vec<f64>,
    pub u: Vec<Vec<f64>>,
    pub sx: Vec<Vec<f64>>,
    pub sz: Vec<Vec<f64>>,
}

impl PoyntingField {
    pub fn new(em: &EmFields) -> Self {
        let (sx, sz) = poynting(em);
        Self { grid: em.grid, z_planes: em.z_planes.clone(), u: energy_density(em), sx, sz }
    }

    pub fn from_field(field: &OpticalField2D) -> Result<Self, OpticsError> {
        Ok(Self::new(&assemble_em_fields(field, &field.scene)?))
    }

    pub fn plane_index(&self, z: f64) -> Option<usize> {
        self.z_planes.iter().position(|&p| (p - z).abs() <= 1e-12 * p.abs().max(1.0))
    }
}

/// `k_x/k = S_x/|S|` along one plane; NaN where `U` is below threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct KxProfile {
    pub z: f64,
    pub x: Vec<f64>,
    pub values: Vec<f64>,
    pub valid: Vec<bool>,
}

/// Profile of `k_x/k` at plane `z`, or `None` if `z` is not a lattice plane.
pub fn transverse_momentum(fields: &PoyntingField, z: f64) -> Option<KxProfile> {
    let p = fields.plane_index(z)?;
    let umax = fields.u[p].iter().cloned().fold(0.0, f64::max);
    let mut values = Vec::with_capacity(fields.grid.n_points());
    let mut valid = Vec::with_capacity(fields.grid.n_points());
    for j in 0..fields.grid.n_points() {
        let (sx, sz) = (fields.sx[p][j], fields.sz[p][j]);
        let s = sx.hypot(sz);
        let ok = fields.u[p][j] > KX_THRESHOLD * umax && s > 0.0;
        valid.push(ok);
        values.push(if ok { sx / s } else { f64::NAN });
    }
    Some(KxProfile { z: fields.z_planes[p], x: fields.grid.points(), values, valid })
}

/// Table `x |Ψ|² U Sx Sz kx/k` for one plane.
pub fn write_profile(field: &OpticalField2D, fields: &PoyntingField, plane: usize, extra: &[(&str, String)]) -> String {
    let z = fields.z_planes[plane];
    let kx = transverse_momentum(fields, z).expect("plane taken from the lattice");
    let mut t = Table::new();
    t.meta("z", z);
    t.meta("wavelength", field.scene.wavelength);
    t.meta("speed_of_light", C_LIGHT);
    for (k, v) in extra {
        t.meta(k, v);
    }
    t.columns(&["x", "|psi|^2", "U", "Sx", "Sz", "kx/k"]);
    for j in 0..fields.grid.n_points() {
        t.row([
            kx.x[j],
            field.psi[plane][j].norm_sqr(),
            fields.u[plane][j],
            fields.sx[plane][j],
            fields.sz[plane][j],
            kx.values[j],
        ]);
    }
    t.into_string()
}

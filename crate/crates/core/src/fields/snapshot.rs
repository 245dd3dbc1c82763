use std::io::{self, Write};

use num_complex::Complex64;

use super::{ComplexField, FieldAnalyzer, PhysicalConstants};
use crate::error::FieldError;
use crate::grid::GridSpec;
use crate::table::{fmt_f64, parse_table, Table};

/// Header of a field snapshot file.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotHeader {
    pub grid: GridSpec,
    pub time: f64,
    pub model: String,
    pub constants: PhysicalConstants,
}

/// Writes `x Re(Ψ) Im(Ψ) ρ S v Q` rows under a `key = value` header.
pub fn write_snapshot<W: Write>(
    out: &mut W,
    psi: &ComplexField,
    constants: &PhysicalConstants,
    model: &str,
    analyzer: &FieldAnalyzer,
) -> io::Result<()> {
    let grid = psi.grid();
    let n = grid.n_points();
    let nan = || vec![f64::NAN; n];
    let phase = analyzer.polar_decompose(psi, constants).map(|p| {
        p.phase.into_iter().zip(p.valid).map(|(s, ok)| if ok { s } else { f64::NAN }).collect()
    });
    let phase = phase.unwrap_or_else(|_| nan());
    let v = analyzer.velocity_field(psi, constants).map(|f| f.values).unwrap_or_else(|_| nan());
    let q = analyzer.quantum_potential(psi, constants).map(|f| f.values).unwrap_or_else(|_| nan());

    let mut t = Table::new();
    t.meta("x_min", fmt_f64(grid.x_min()))
        .meta("x_max", fmt_f64(grid.x_max()))
        .meta("n_points", n)
        .meta("time", fmt_f64(psi.time()))
        .meta("model", model)
        .meta("hbar", fmt_f64(constants.hbar()))
        .meta("mass", fmt_f64(constants.mass()))
        .columns(&["x", "Re(psi)", "Im(psi)", "rho", "S", "v", "Q"]);
    for (j, z) in psi.values().iter().enumerate() {
        t.row([grid.x(j), z.re, z.im, z.norm_sqr(), phase[j], v[j], q[j]]);
    }
    out.write_all(t.as_str().as_bytes())
}

pub fn read_snapshot(text: &str) -> Result<(SnapshotHeader, ComplexField), FieldError> {
    let table = parse_table(text).map_err(FieldError::Format)?;
    let num = |key: &str| -> Result<f64, FieldError> {
        table
            .get(key)
            .and_then(crate::table::parse_f64)
            .ok_or_else(|| FieldError::Format(format!("missing or bad header '{key}'")))
    };
    let n_points: usize = table
        .get("n_points")
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| FieldError::Format("missing or bad header 'n_points'".into()))?;
    let grid = GridSpec::new(num("x_min")?, num("x_max")?, n_points)?;
    let constants = PhysicalConstants::new(num("hbar")?, num("mass")?)?;
    let time = num("time")?;
    let model = table.get("model").unwrap_or("unknown").to_string();
    let values = table
        .rows
        .iter()
        .map(|r| {
            if r.len() < 3 {
                Err(FieldError::Format("row has fewer than 3 columns".into()))
            } else {
                Ok(Complex64::new(r[1], r[2]))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let psi = ComplexField::new(grid, values, time)?;
    Ok((SnapshotHeader { grid, time, model, constants }, psi))
}

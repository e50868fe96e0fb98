use std::fmt::Write;

use serde::Serialize;

use super::{errors, MatrixField};
use crate::error::AnalysisError;
use crate::mesh::{generate_unit_cube_hexes, generate_unit_cube_tets, OrientedMesh};
use crate::polyspace::CellKind;
use crate::space::GlobalSpace;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub level: usize,
    pub cells: usize,
    pub dimension: usize,
    /// `max h_T`.
    pub h: f64,
    /// `max h_T / ρ_T`.
    pub shape: f64,
    pub l2_error: f64,
    pub l2_rate: Option<f64>,
    pub symcurl_error: f64,
    pub symcurl_rate: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub field: String,
    pub cell: CellKind,
    pub k: usize,
    pub base: usize,
    pub rows: Vec<ConvergenceRow>,
}

fn rate(coarse: f64, fine: f64) -> f64 {
    (coarse / fine).log2()
}

impl ConvergenceReport {
    pub const CSV_HEADER: &'static str = "level,h,l2_error,l2_rate,symcurl_error,symcurl_rate";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        let opt = |r: Option<f64>| r.map(|r| format!("{r:.4}")).unwrap_or_default();
        for r in &self.rows {
            writeln!(
                out,
                "{},{:e},{:e},{},{:e},{}",
                r.level,
                r.h,
                r.l2_error,
                opt(r.l2_rate),
                r.symcurl_error,
                opt(r.symcurl_rate)
            )
            .unwrap();
        }
        out
    }

    /// Rates between the two finest levels.
    pub fn final_rates(&self) -> (f64, f64) {
        let last = self.rows.last().expect("at least two levels");
        (
            last.l2_rate.unwrap_or(f64::NAN),
            last.symcurl_rate.unwrap_or(f64::NAN),
        )
    }
}

/// Unit-cube mesh of `n³` sub-cubes.
pub fn unit_cube(kind: CellKind, n: usize) -> Result<OrientedMesh, AnalysisError> {
    Ok(match kind {
        CellKind::Tet => generate_unit_cube_tets(n)?,
        CellKind::Hex => generate_unit_cube_hexes(n)?,
    })
}

/// Interpolates `field` on `levels` uniformly refined unit-cube meshes,
/// starting from `base` subdivisions, and reports errors and observed rates
/// `log₂(e_{2h} / e_h)`.
pub fn convergence_study(
    field: &dyn MatrixField,
    kind: CellKind,
    k: usize,
    base: usize,
    levels: usize,
) -> Result<ConvergenceReport, AnalysisError> {
    if levels < 2 {
        return Err(AnalysisError::TooFewLevels { levels });
    }
    let mut mesh = unit_cube(kind, base)?;
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(levels);
    for level in 0..levels {
        if level > 0 {
            mesh = mesh.refine_uniform()?;
        }
        let (h, shape) = (0..mesh.num_cells()).fold((0.0f64, 0.0f64), |(h, s), c| {
            let g = mesh.cell_geometry(c);
            (h.max(g.diameter), s.max(g.shape_ratio()))
        });
        let space = GlobalSpace::new(mesh.clone(), k)?;
        let f = space.interpolate(|x| field.value(x))?;
        let e = errors(field, &f)?;
        let prev = rows.last();
        rows.push(ConvergenceRow {
            level,
            cells: mesh.num_cells(),
            dimension: space.dimension(),
            h,
            shape,
            l2_error: e.l2,
            l2_rate: prev.map(|p| rate(p.l2_error, e.l2)),
            symcurl_error: e.symcurl,
            symcurl_rate: prev.map(|p| rate(p.symcurl_error, e.symcurl)),
        });
    }
    Ok(ConvergenceReport {
        field: field.name(),
        cell: kind,
        k,
        base,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::TrigField;

    #[test]
    fn one_level_rejected() {
        assert!(matches!(
            convergence_study(&TrigField, CellKind::Tet, 1, 1, 1),
            Err(AnalysisError::TooFewLevels { levels: 1 })
        ));
    }

    #[test]
    fn csv_layout() {
        let r = convergence_study(&TrigField, CellKind::Hex, 1, 1, 2).unwrap();
        let csv = r.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], ConvergenceReport::CSV_HEADER);
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[1].split(',').count(), 6);
        assert!(lines[1].split(',').nth(3).unwrap().is_empty());
        assert!((r.rows[1].h - r.rows[0].h / 2.0).abs() < 1e-14);
    }
}
